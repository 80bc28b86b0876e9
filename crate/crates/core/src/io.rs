//! Text formats for Borel presentations and graded modules.
//!
//! Presentation files:
//!
//! ```text
//! hopf p=3 cap=60
//! gen z 1 ext
//! gen y 2 poly
//! act b z = y
//! act b y = 0
//! ```
//!
//! Kinds are `poly`, `ext`, or `trunc <k>` for height `p^k`. Action lines
//! name the Bockstein `b` (at p = 2 write `Sq1`) and the power operations at
//! powers of the prime (`P1 P3 P9 ...`, `Sq1 Sq2 Sq4 ...`). Values are `0`
//! or `+`-joined terms, each a `*`-joined optional coefficient and factors
//! `name` or `name^exp`. A parsed presentation is validated: every
//! non-forced action on a generator must be present while its target stays
//! inside the window.
//!
//! Module files carry either a presentation by generators and relations or a
//! direct basis with action entries; the two modes cannot be mixed:
//!
//! ```text
//! module p=2 cap=16        module p=2 cap=16
//! gen g 1                  basis w4 4
//! rel Sq1 g                basis w6 6
//!                          act Sq2 w4 = w6
//! ```
//!
//! Relation terms are whitespace separated: an optional coefficient, the
//! letters of an operation word, and a generator name, joined with `+`.
//! Absent direct-mode actions are zero.

use crate::fp::{FpMatrix, Prime};
use crate::hopf::{BorelMono, BorelPoly, BorelPresentation, GenKind};
use crate::module::{AlgebraGen, GradedModule};
use crate::steenrod::{OperationWord, SteenrodAlgebra};
use crate::unstable::{FreeSummand, ModulePresentation};
use crate::{Error, Result};
use std::collections::HashMap;
use std::fmt::Write as _;

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// `key=value` with a numeric value.
fn parse_kv(tok: &str, key: &str, line: usize) -> Result<u32> {
    let rest = tok
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| perr(line, format!("expected `{key}=<number>`, found `{tok}`")))?;
    rest.parse::<u32>().map_err(|_| perr(line, format!("bad number in `{tok}`")))
}

fn check_name(name: &str, line: usize) -> Result<()> {
    if name.chars().all(|c| c.is_ascii_digit()) {
        return Err(perr(line, format!("`{name}` cannot be used as a name")));
    }
    if name.chars().any(|c| "*+=#".contains(c)) {
        return Err(perr(line, format!("`{name}` contains a reserved character")));
    }
    Ok(())
}

/// One of the multiplicative generators of the operation algebra.
pub fn parse_gen_op(p: Prime, tok: &str, line: usize) -> Result<AlgebraGen> {
    if tok == "b" {
        if p.is_two() {
            return Err(perr(line, "`b` is not used at p = 2; write Sq1"));
        }
        return Ok(AlgebraGen::Bockstein);
    }
    let (prefix, rest) = if let Some(r) = tok.strip_prefix("Sq") {
        ("Sq", r)
    } else if let Some(r) = tok.strip_prefix('P') {
        ("P", r)
    } else {
        return Err(perr(line, format!("unknown operation `{tok}`")));
    };
    if p.is_two() != (prefix == "Sq") {
        return Err(perr(line, format!("`{tok}` does not match p = {}", p.get())));
    }
    let n: u32 = rest.parse().map_err(|_| perr(line, format!("bad operation `{tok}`")))?;
    let mut q = 1u32;
    let mut j = 0;
    while q < n {
        q = q.saturating_mul(p.get());
        j += 1;
    }
    if q != n || n == 0 {
        return Err(perr(
            line,
            format!("`{tok}`: generator operations sit at powers of {}", p.get()),
        ));
    }
    Ok(AlgebraGen::PPow(j))
}

/// A polynomial in the presentation's generators.
pub fn parse_poly(b: &BorelPresentation, s: &str, line: usize) -> Result<BorelPoly> {
    let s = s.trim();
    if s == "0" {
        return Ok(BorelPoly::zero());
    }
    let mut out = BorelPoly::zero();
    for term in s.split('+') {
        let mut coeff = 1u32;
        let mut mono = BorelMono::one(b.gens.len());
        let mut factors = 0;
        for (k, tok) in term.trim().split('*').enumerate() {
            let tok = tok.trim();
            if tok.is_empty() {
                return Err(perr(line, "empty factor"));
            }
            if k == 0 && tok.chars().all(|c| c.is_ascii_digit()) {
                let c: u64 =
                    tok.parse().map_err(|_| perr(line, format!("bad coefficient `{tok}`")))?;
                coeff = (c % u64::from(b.p.get())) as u32;
                continue;
            }
            let (gi, e) = parse_factor(b, tok, line)?;
            factors += 1;
            mono.0[gi] += e;
        }
        if factors == 0 {
            return Err(perr(line, "a term needs at least one generator factor"));
        }
        out.add_term(b.p, mono, coeff);
    }
    Ok(out)
}

fn parse_factor(b: &BorelPresentation, tok: &str, line: usize) -> Result<(usize, u32)> {
    if let Some((pre, suf)) = tok.rsplit_once('^') {
        if let Ok(e) = suf.parse::<u32>() {
            if e >= 1 {
                if let Some(gi) = b.gen_index(pre) {
                    return Ok((gi, e));
                }
            }
        }
    }
    if let Some(gi) = b.gen_index(tok) {
        return Ok((gi, 1));
    }
    Err(perr(line, format!("unknown generator in `{tok}`")))
}

fn factor_string(name: &str, e: u32) -> String {
    if e == 1 && !name.contains('^') {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}

/// Render a polynomial so that [`parse_poly`] reads it back exactly, even
/// when generator names themselves contain `^`.
pub fn poly_string(b: &BorelPresentation, x: &BorelPoly) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (m, c) in &x.terms {
        let mut factors: Vec<String> = Vec::new();
        if *c != 1 {
            factors.push(format!("{c}"));
        }
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                factors.push(factor_string(&b.gens[i].name, e));
            }
        }
        parts.push(factors.join("*"));
    }
    parts.join(" + ")
}

fn content_lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

pub fn parse_hopf(src: &str) -> Result<BorelPresentation> {
    let mut lines = content_lines(src);
    let (hline, header) = lines.next().ok_or_else(|| perr(0, "empty input"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != "hopf" {
        return Err(perr(hline, "expected header `hopf p=<prime> cap=<degree>`"));
    }
    let p = Prime::new(parse_kv(toks[1], "p", hline)?)?;
    let cap = parse_kv(toks[2], "cap", hline)?;
    let mut b = BorelPresentation::new(p, cap);

    let body: Vec<(usize, Vec<String>, String)> = lines
        .map(|(n, l)| {
            let (head, tail) = match l.split_once('=') {
                Some((h, t)) => (h, t.to_string()),
                None => (l, String::new()),
            };
            (n, head.split_whitespace().map(str::to_string).collect(), tail)
        })
        .collect();

    for (n, toks, _) in &body {
        match toks[0].as_str() {
            "gen" => {
                if toks.len() < 3 {
                    return Err(perr(*n, "expected `gen <name> <degree> <kind>`"));
                }
                let name = &toks[1];
                check_name(name, *n)?;
                if b.gen_index(name).is_some() {
                    return Err(perr(*n, format!("generator `{name}` declared twice")));
                }
                let degree: u32 =
                    toks[2].parse().map_err(|_| perr(*n, format!("bad degree `{}`", toks[2])))?;
                if degree == 0 {
                    return Err(perr(*n, "generators must have positive degree"));
                }
                let kind = match toks.get(3).map(String::as_str) {
                    Some("poly") => GenKind::Polynomial,
                    Some("ext") => GenKind::Exterior,
                    Some("trunc") => {
                        let k: u32 = toks
                            .get(4)
                            .and_then(|t| t.parse().ok())
                            .ok_or_else(|| perr(*n, "expected `trunc <k>`"))?;
                        if k == 0 {
                            return Err(perr(*n, "truncation exponent must be positive"));
                        }
                        GenKind::Truncated(k)
                    }
                    _ => return Err(perr(*n, "kind must be `poly`, `ext`, or `trunc <k>`")),
                };
                b.add_gen(name.clone(), degree, kind);
            }
            "act" => {}
            other => return Err(perr(*n, format!("unknown directive `{other}`"))),
        }
    }

    for (n, toks, value) in &body {
        if toks[0] != "act" {
            continue;
        }
        if toks.len() != 3 || value.is_empty() {
            return Err(perr(*n, "expected `act <op> <gen> = <value>`"));
        }
        let op = parse_gen_op(p, &toks[1], *n)?;
        let gi = b
            .gen_index(&toks[2])
            .ok_or_else(|| perr(*n, format!("unknown generator `{}`", toks[2])))?;
        if b.action.contains_key(&(op, gi)) {
            return Err(perr(*n, format!("duplicate action for {} on {}", toks[1], toks[2])));
        }
        let val = parse_poly(&b, value, *n)?;
        b.set_action(op, gi, val);
    }

    b.validate()?;
    Ok(b)
}

pub fn print_hopf(b: &BorelPresentation) -> String {
    let mut out = format!("hopf p={} cap={}\n", b.p.get(), b.cap);
    for g in &b.gens {
        let kind = match g.kind {
            GenKind::Polynomial => "poly".to_string(),
            GenKind::Exterior => "ext".to_string(),
            GenKind::Truncated(k) => format!("trunc {k}"),
        };
        let _ = writeln!(out, "gen {} {} {}", g.name, g.degree, kind);
    }
    let mut keys: Vec<(usize, AlgebraGen)> =
        b.action.keys().map(|&(op, gi)| (gi, op)).collect();
    keys.sort();
    for (gi, op) in keys {
        let val = &b.action[&(op, gi)];
        let _ = writeln!(
            out,
            "act {} {} = {}",
            op.display(b.p),
            b.gens[gi].name,
            poly_string(b, val)
        );
    }
    out
}

/// A module file: either a presentation to be realized or a directly
/// tabulated module.
pub enum ModuleSource {
    Presentation(ModulePresentation),
    Direct(GradedModule),
}

pub struct ModuleFile {
    pub p: Prime,
    pub cap: u32,
    pub source: ModuleSource,
}

impl ModuleFile {
    /// The graded module described by the file.
    pub fn module(&self, alg: &SteenrodAlgebra) -> Result<GradedModule> {
        if alg.prime().get() != self.p.get() {
            return Err(Error::Unsupported(format!(
                "module file is at p = {}, algebra at p = {}",
                self.p.get(),
                alg.prime().get()
            )));
        }
        match &self.source {
            ModuleSource::Presentation(pres) => crate::unstable::realize(alg, pres, self.cap),
            ModuleSource::Direct(m) => Ok(m.clone()),
        }
    }
}

pub fn parse_module(src: &str) -> Result<ModuleFile> {
    let mut lines = content_lines(src);
    let (hline, header) = lines.next().ok_or_else(|| perr(0, "empty input"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != "module" {
        return Err(perr(hline, "expected header `module p=<prime> cap=<degree>`"));
    }
    let p = Prime::new(parse_kv(toks[1], "p", hline)?)?;
    let cap = parse_kv(toks[2], "cap", hline)?;

    let mut gens: Vec<FreeSummand> = Vec::new();
    let mut relations: Vec<Vec<(u32, OperationWord, usize)>> = Vec::new();
    let mut basis: Vec<(String, u32)> = Vec::new();
    let mut acts: Vec<(usize, AlgebraGen, String, String)> = Vec::new();
    let mut mode: Option<bool> = None; // true = presentation
    let set_mode = |want: bool, n: usize, mode: &mut Option<bool>| -> Result<()> {
        match *mode {
            None => {
                *mode = Some(want);
                Ok(())
            }
            Some(m) if m == want => Ok(()),
            Some(_) => Err(perr(n, "presentation and direct directives cannot be mixed")),
        }
    };

    for (n, l) in lines {
        let (head, tail) = match l.split_once('=') {
            Some((h, t)) => (h, t.trim().to_string()),
            None => (l, String::new()),
        };
        let toks: Vec<&str> = head.split_whitespace().collect();
        match toks[0] {
            "gen" => {
                set_mode(true, n, &mut mode)?;
                if toks.len() != 3 {
                    return Err(perr(n, "expected `gen <name> <degree>`"));
                }
                check_name(toks[1], n)?;
                if gens.iter().any(|g| g.name == toks[1]) {
                    return Err(perr(n, format!("generator `{}` declared twice", toks[1])));
                }
                let degree: u32 =
                    toks[2].parse().map_err(|_| perr(n, format!("bad degree `{}`", toks[2])))?;
                gens.push(FreeSummand { name: toks[1].to_string(), degree });
            }
            "rel" => {
                set_mode(true, n, &mut mode)?;
                let body = l.strip_prefix("rel").unwrap().trim();
                if body.is_empty() {
                    return Err(perr(n, "empty relation"));
                }
                let mut rel = Vec::new();
                for term in body.split('+') {
                    let mut parts: Vec<&str> = term.split_whitespace().collect();
                    if parts.is_empty() {
                        return Err(perr(n, "empty relation term"));
                    }
                    let gname = parts.pop().unwrap();
                    let gi = gens
                        .iter()
                        .position(|g| g.name == gname)
                        .ok_or_else(|| perr(n, format!("unknown generator `{gname}`")))?;
                    let mut coeff = 1u32;
                    if let Some(first) = parts.first() {
                        if first.chars().all(|c| c.is_ascii_digit()) {
                            let c: u64 = first.parse().unwrap();
                            coeff = (c % u64::from(p.get())) as u32;
                            parts.remove(0);
                        }
                    }
                    let word = if parts.is_empty() {
                        OperationWord::identity()
                    } else {
                        OperationWord::parse(p, &parts.join(" "))
                            .map_err(|e| rewrap_parse(e, n))?
                    };
                    rel.push((coeff, word, gi));
                }
                relations.push(rel);
            }
            "basis" => {
                set_mode(false, n, &mut mode)?;
                if toks.len() != 3 {
                    return Err(perr(n, "expected `basis <label> <degree>`"));
                }
                check_name(toks[1], n)?;
                if basis.iter().any(|(l, _)| l == toks[1]) {
                    return Err(perr(n, format!("label `{}` declared twice", toks[1])));
                }
                let degree: u32 =
                    toks[2].parse().map_err(|_| perr(n, format!("bad degree `{}`", toks[2])))?;
                if degree > cap {
                    return Err(perr(n, format!("degree {degree} exceeds cap {cap}")));
                }
                basis.push((toks[1].to_string(), degree));
            }
            "act" => {
                set_mode(false, n, &mut mode)?;
                if toks.len() != 3 || tail.is_empty() {
                    return Err(perr(n, "expected `act <op> <label> = <value>`"));
                }
                let op = parse_gen_op(p, toks[1], n)?;
                acts.push((n, op, toks[2].to_string(), tail));
            }
            other => return Err(perr(n, format!("unknown directive `{other}`"))),
        }
    }

    if mode == Some(true) {
        return Ok(ModuleFile {
            p,
            cap,
            source: ModuleSource::Presentation(ModulePresentation {
                generators: gens,
                relations,
            }),
        });
    }

    // direct mode (also the shape of an empty file body)
    let mut m = GradedModule::new(p, cap);
    let mut slot: HashMap<&str, (u32, usize)> = HashMap::new();
    for (label, d) in &basis {
        let idx = m.push_basis(*d, label.clone());
        slot.insert(label, (*d, idx));
    }
    let mut mats: HashMap<(AlgebraGen, u32), FpMatrix> = HashMap::new();
    for (n, op, label, value) in &acts {
        let &(d, idx) = slot
            .get(label.as_str())
            .ok_or_else(|| perr(*n, format!("unknown label `{label}`")))?;
        let target = d + op.degree(p);
        if value.trim() == "0" {
            continue;
        }
        if target > cap {
            return Err(perr(*n, format!("target degree {target} exceeds cap {cap}")));
        }
        let rows = m.dim(d);
        let cols = m.dim(target);
        let mat =
            mats.entry((*op, d)).or_insert_with(|| FpMatrix::zeros(p, rows, cols));
        for term in value.split('+') {
            let mut coeff = 1u32;
            let mut target_label = None;
            for (k, tok) in term.trim().split('*').enumerate() {
                let tok = tok.trim();
                if k == 0 && tok.chars().all(|c| c.is_ascii_digit()) {
                    let c: u64 =
                        tok.parse().map_err(|_| perr(*n, format!("bad coefficient `{tok}`")))?;
                    coeff = (c % u64::from(p.get())) as u32;
                } else if target_label.is_none() {
                    target_label = Some(tok);
                } else {
                    return Err(perr(*n, "module values are linear in the labels"));
                }
            }
            let tl = target_label.ok_or_else(|| perr(*n, "missing label in value"))?;
            let &(td, tidx) = slot
                .get(tl)
                .ok_or_else(|| perr(*n, format!("unknown label `{tl}`")))?;
            if td != target {
                return Err(perr(
                    *n,
                    format!("`{tl}` has degree {td}, expected {target}"),
                ));
            }
            mat.set(idx, tidx, p.add(mat.get(idx, tidx), coeff));
        }
    }
    for ((op, d), mat) in mats {
        m.set_action(op, d, mat);
    }
    Ok(ModuleFile { p, cap, source: ModuleSource::Direct(m) })
}

fn rewrap_parse(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { msg, .. } => Error::Parse { line, msg },
        other => other,
    }
}
