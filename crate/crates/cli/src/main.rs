//! `aqh`: command line front end for the unstable-algebra toolkit.
//!
//! Exit codes: 0 on success, 1 when a requested check fails (exactness,
//! finite generation, golden comparison), 2 on usage or parse errors.

use anyhow::{anyhow, bail, Context, Result};
use aqh_core::aq;
use aqh_core::em::{em_cohomology, CoefGroup, EMSpec};
use aqh_core::fp::Prime;
use aqh_core::hopf::{hopf_kernel, hopf_quotient, subalgebra_by_powers, BorelPresentation};
use aqh_core::io::{parse_hopf, parse_module, poly_string, print_hopf};
use aqh_core::module::{fg_check, FgOptions, GradedModule};
use aqh_core::scenario;
use aqh_core::steenrod::{OperationWord, SteenrodAlgebra};
use aqh_core::unstable::f_basis;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "aqh", version, about = "Unstable algebra over the mod-p operations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the output to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rewrite operation words in the admissible basis.
    Adem {
        #[command(subcommand)]
        cmd: AdemCmd,
    },
    /// Basis of the free unstable module on one generator.
    Fbasis {
        /// The prime.
        #[arg(long)]
        p: u32,
        /// Degree of the generator.
        #[arg(long = "gen-degree")]
        gen_degree: u32,
        /// Top degree.
        #[arg(long)]
        cap: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cohomology presentations of Eilenberg-MacLane spaces.
    Em {
        #[command(subcommand)]
        cmd: EmCmd,
    },
    /// Constructions on presented algebras.
    Hopf {
        #[command(subcommand)]
        cmd: HopfCmd,
    },
    /// Derived functors of the indecomposables.
    Aq {
        #[command(subcommand)]
        cmd: AqCmd,
    },
    /// Finite-generation certificates.
    Fg {
        #[command(subcommand)]
        cmd: FgCmd,
    },
    /// Canned end-to-end computations with golden outputs.
    Scenario {
        #[command(subcommand)]
        cmd: ScenarioCmd,
    },
}

#[derive(Subcommand)]
enum AdemCmd {
    /// Normalize a word, e.g. `aqh adem normalize --p 2 "Sq2 Sq2"`.
    Normalize {
        /// The word, whitespace separated (`1` for the identity).
        word: String,
        #[arg(long)]
        p: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand)]
enum EmCmd {
    /// Generate a presentation, e.g. `aqh em gen --group Z --n 3 --p 3 --cap 60`.
    Gen {
        /// Coefficient group: Z, Z/p, Z/p^r, or prufer.
        #[arg(long)]
        group: String,
        /// Base degree of the fundamental class.
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        cap: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand)]
enum HopfCmd {
    /// Present the subalgebra of p-th powers (or custom power heights).
    Frobenius {
        /// Presentation file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Comma-separated power exponents, one per generator (default all 1).
        #[arg(long)]
        powers: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Quotient by the powers subalgebra.
    Quotient {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        powers: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Kernel of restriction to a single surviving generator.
    Kernel {
        #[arg(long = "in")]
        input: PathBuf,
        /// The generator that restricts to the target's class.
        #[arg(long)]
        surviving: String,
        /// The surviving generator's p^power-th power dies in the target.
        #[arg(long, default_value = "1")]
        power: u32,
        /// Truncation height of the target class.
        #[arg(long = "target-bound", default_value = "2")]
        target_bound: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand)]
enum AqCmd {
    /// Indecomposables with their operation action.
    H0 {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// First derived functor: one class per truncated generator.
    H1 {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Six-term exact sequence against the powers subalgebra.
    Les {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        powers: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand)]
enum FgCmd {
    /// Certify generation in low degrees, or list the stuck degrees.
    Check {
        /// Presentation file; the check runs on its indecomposables.
        #[arg(long, conflicts_with = "module")]
        hopf: Option<PathBuf>,
        /// Module file (presentation or direct table).
        #[arg(long)]
        module: Option<PathBuf>,
        /// Generators may be chosen in degrees up to this cut.
        #[arg(long = "gen-cut")]
        gen_cut: u32,
        /// Act only by the power operations, dropping the Bockstein.
        #[arg(long = "powers-only")]
        powers_only: bool,
        /// Check the even part instead of the whole module.
        #[arg(long = "even-part")]
        even_part: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand)]
enum ScenarioCmd {
    /// List the shipped scenarios.
    List,
    /// Run a scenario and diff its JSON against the golden copy.
    Run {
        name: String,
        /// Rewrite the golden file instead of comparing.
        #[arg(long = "write-golden")]
        write_golden: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn golden(name: &str) -> Option<&'static str> {
    match name {
        "sphere" => Some(include_str!("../goldens/sphere.json")),
        "oddprimes" => Some(include_str!("../goldens/oddprimes.json")),
        "henn" => Some(include_str!("../goldens/henn.json")),
        "frobenius-les" => Some(include_str!("../goldens/frobenius-les.json")),
        _ => None,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(output: &OutputArgs, s: &str) -> Result<()> {
    match &output.out {
        Some(path) => {
            std::fs::write(path, s).with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {}", path.display());
        }
        None => print!("{s}"),
    }
    Ok(())
}

fn render(output: &OutputArgs, text: String, json: Value) -> Result<()> {
    match output.format {
        Format::Text => emit(output, &text),
        Format::Json => emit(output, &(serde_json::to_string_pretty(&json)? + "\n")),
    }
}

fn load_hopf(path: &Path) -> Result<BorelPresentation> {
    let src =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_hopf(&src).with_context(|| format!("parsing {}", path.display()))
}

fn parse_powers(spec: Option<&str>, b: &BorelPresentation) -> Result<Vec<u32>> {
    match spec {
        None => Ok(vec![1; b.gens.len()]),
        Some(s) => {
            let v: Vec<u32> = s
                .split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|_| anyhow!("bad power `{t}`")))
                .collect::<Result<_>>()?;
            if v.len() != b.gens.len() {
                bail!("{} powers given for {} generators", v.len(), b.gens.len());
            }
            Ok(v)
        }
    }
}

fn parse_group(s: &str) -> Result<CoefGroup> {
    match s {
        "Z" | "z" => Ok(CoefGroup::Z),
        "Z/p" | "z/p" | "Zp" | "zp" => Ok(CoefGroup::Zp),
        "prufer" | "Prufer" | "Z/p^oo" => Ok(CoefGroup::Prufer),
        _ => {
            let r = s
                .strip_prefix("Z/p^")
                .or_else(|| s.strip_prefix("z/p^"))
                .and_then(|r| r.parse::<u32>().ok())
                .ok_or_else(|| anyhow!("unknown group `{s}` (use Z, Z/p, Z/p^r, prufer)"))?;
            Ok(CoefGroup::ZpR(r))
        }
    }
}

/// Presentation text plus inclusion-image comments, still parseable.
fn hopf_with_images(
    a: &BorelPresentation,
    b: &BorelPresentation,
    images: &[aqh_core::hopf::BorelPoly],
) -> String {
    let mut s = print_hopf(a);
    for (g, img) in a.gens.iter().zip(images) {
        let _ = writeln!(s, "# includes {} -> {}", g.name, poly_string(b, img));
    }
    s
}

fn gens_json(b: &BorelPresentation) -> Value {
    Value::Array(
        b.gens
            .iter()
            .map(|g| {
                json!({
                    "name": g.name,
                    "degree": g.degree,
                    "kind": kind_str(g.kind),
                })
            })
            .collect(),
    )
}

fn kind_str(k: aqh_core::hopf::GenKind) -> String {
    use aqh_core::hopf::GenKind;
    match k {
        GenKind::Polynomial => "poly".to_string(),
        GenKind::Exterior => "ext".to_string(),
        GenKind::Truncated(h) => format!("trunc {h}"),
    }
}

fn module_report(m: &GradedModule) -> (String, Value) {
    let mut text = String::new();
    let mut dims = Vec::new();
    let mut gens = Vec::new();
    for d in 0..=m.cap {
        if m.dim(d) == 0 {
            continue;
        }
        dims.push(json!([d, m.dim(d)]));
        let labels = m.labels(d);
        let _ = writeln!(text, "  {d}: {}", labels.join(", "));
        for l in labels {
            gens.push(json!({"degree": d, "label": l}));
        }
    }
    (text, json!({"dims": dims, "generators": gens}))
}

fn dispatch(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Adem { cmd: AdemCmd::Normalize { word, p, output } } => {
            let pr = Prime::new(p)?;
            let alg = SteenrodAlgebra::new(pr);
            let w = OperationWord::parse(pr, &word)?;
            let elt = alg.normalize(&w);
            let terms: Vec<Value> = elt
                .terms()
                .map(|(w, c)| json!({"coeff": c, "word": w.display(pr)}))
                .collect();
            let json = json!({
                "schema": "aqh/1",
                "command": "adem normalize",
                "p": p,
                "input": w.display(pr),
                "normalized": terms,
            });
            render(&output, elt.display() + "\n", json)?;
            Ok(0)
        }
        Cmd::Fbasis { p, gen_degree, cap, output } => {
            let pr = Prime::new(p)?;
            let alg = SteenrodAlgebra::new(pr);
            let mut text = String::new();
            let mut degrees = Vec::new();
            for d in gen_degree..=cap {
                let words = f_basis(&alg, gen_degree, d);
                if words.is_empty() {
                    continue;
                }
                let shown: Vec<String> = words.iter().map(|w| w.display(pr)).collect();
                let _ = writeln!(text, "{d}: {}", shown.join(", "));
                degrees.push(json!({"degree": d, "dim": words.len(), "words": shown}));
            }
            let json = json!({
                "schema": "aqh/1",
                "command": "fbasis",
                "p": p,
                "gen_degree": gen_degree,
                "cap": cap,
                "degrees": degrees,
            });
            render(&output, text, json)?;
            Ok(0)
        }
        Cmd::Em { cmd: EmCmd::Gen { group, n, p, cap, output } } => {
            let pr = Prime::new(p)?;
            let alg = SteenrodAlgebra::new(pr);
            let g = parse_group(&group)?;
            let b = em_cohomology(&alg, EMSpec { group: g, n }, cap)?;
            let text = print_hopf(&b);
            let json = json!({
                "schema": "aqh/1",
                "command": "em gen",
                "p": p,
                "cap": cap,
                "generators": gens_json(&b),
                "presentation": text,
            });
            render(&output, text.clone(), json)?;
            Ok(0)
        }
        Cmd::Hopf { cmd } => hopf_cmd(cmd),
        Cmd::Aq { cmd } => aq_cmd(cmd),
        Cmd::Fg { cmd } => fg_cmd(cmd),
        Cmd::Scenario { cmd } => scenario_cmd(cmd),
    }
}

fn hopf_cmd(cmd: HopfCmd) -> Result<u8> {
    match cmd {
        HopfCmd::Frobenius { input, powers, output } => {
            let b = load_hopf(&input)?;
            let alg = SteenrodAlgebra::new(b.p);
            let pw = parse_powers(powers.as_deref(), &b)?;
            let (a, incl) = subalgebra_by_powers(&alg, &b, &pw)?;
            let text = hopf_with_images(&a, &b, &incl.images);
            let json = json!({
                "schema": "aqh/1",
                "command": "hopf frobenius",
                "p": b.p.get(),
                "cap": b.cap,
                "generators": gens_json(&a),
                "images": a.gens.iter().zip(&incl.images)
                    .map(|(g, img)| json!({"name": g.name, "image": poly_string(&b, img)}))
                    .collect::<Vec<_>>(),
                "presentation": print_hopf(&a),
            });
            render(&output, text, json)?;
            Ok(0)
        }
        HopfCmd::Quotient { input, powers, output } => {
            let b = load_hopf(&input)?;
            let alg = SteenrodAlgebra::new(b.p);
            let pw = parse_powers(powers.as_deref(), &b)?;
            let (a, incl) = subalgebra_by_powers(&alg, &b, &pw)?;
            let q = hopf_quotient(&alg, &b, &a, &incl)?;
            let mut text = print_hopf(&q.quotient);
            for ((g, rep), &certain) in
                q.quotient.gens.iter().zip(&q.reps).zip(&q.kind_certain)
            {
                let _ = writeln!(
                    text,
                    "# rep {} = {}{}",
                    g.name,
                    b.display_mono(rep),
                    if certain { "" } else { " (kind uncertain beyond the window)" }
                );
            }
            let json = json!({
                "schema": "aqh/1",
                "command": "hopf quotient",
                "p": b.p.get(),
                "cap": b.cap,
                "generators": q.quotient.gens.iter().zip(&q.kind_certain)
                    .map(|(g, &c)| json!({
                        "name": g.name, "degree": g.degree,
                        "kind": kind_str(g.kind), "certain": c,
                    }))
                    .collect::<Vec<_>>(),
                "presentation": print_hopf(&q.quotient),
            });
            render(&output, text, json)?;
            Ok(0)
        }
        HopfCmd::Kernel { input, surviving, power, target_bound, output } => {
            let b = load_hopf(&input)?;
            let alg = SteenrodAlgebra::new(b.p);
            let (k, incl) = hopf_kernel(&alg, &b, &surviving, power, target_bound)?;
            let text = hopf_with_images(&k, &b, &incl.images);
            let json = json!({
                "schema": "aqh/1",
                "command": "hopf kernel",
                "p": b.p.get(),
                "cap": b.cap,
                "generators": gens_json(&k),
                "presentation": print_hopf(&k),
            });
            render(&output, text, json)?;
            Ok(0)
        }
    }
}

fn aq_cmd(cmd: AqCmd) -> Result<u8> {
    match cmd {
        AqCmd::H0 { input, output } => {
            let b = load_hopf(&input)?;
            let alg = SteenrodAlgebra::new(b.p);
            let q = aq::aq_h0(&alg, &b)?;
            let (text, body) = module_report(&q);
            let json = json!({
                "schema": "aqh/1",
                "command": "aq h0",
                "p": b.p.get(),
                "cap": b.cap,
                "h0": body,
            });
            render(&output, format!("indecomposables:\n{text}"), json)?;
            Ok(0)
        }
        AqCmd::H1 { input, output } => {
            let b = load_hopf(&input)?;
            let alg = SteenrodAlgebra::new(b.p);
            let classes = aq::aq_h1(&b);
            let module = aq::aq_h1_module(&alg, &b)?;
            let (mtext, body) = module_report(&module);
            let mut text = String::from("derived classes:\n");
            for c in &classes {
                let _ = writeln!(
                    text,
                    "  {} degree {} (height p^{}){}",
                    c.label(),
                    c.degree,
                    c.stratum,
                    if c.degree > b.cap { " beyond window" } else { "" }
                );
            }
            text.push_str("as a module:\n");
            text.push_str(&mtext);
            let json = json!({
                "schema": "aqh/1",
                "command": "aq h1",
                "p": b.p.get(),
                "cap": b.cap,
                "classes": classes.iter().map(|c| json!({
                    "label": c.label(),
                    "generator": c.gen_name,
                    "height_exponent": c.stratum,
                    "degree": c.degree,
                    "in_window": c.degree <= b.cap,
                })).collect::<Vec<_>>(),
                "h1": body,
                "higher_vanish": true,
            });
            render(&output, text, json)?;
            Ok(0)
        }
        AqCmd::Les { input, powers, output } => {
            let b = load_hopf(&input)?;
            let alg = SteenrodAlgebra::new(b.p);
            let pw = parse_powers(powers.as_deref(), &b)?;
            let (a, incl) = subalgebra_by_powers(&alg, &b, &pw)?;
            let q = hopf_quotient(&alg, &b, &a, &incl)?;
            let st = aq::les(&alg, &b, &a, &incl, &q)?;
            let rep = aq::les_check(&st);
            let dims = |m: &GradedModule| -> Vec<Value> {
                (0..=b.cap)
                    .filter(|&d| m.dim(d) > 0)
                    .map(|d| json!([d, m.dim(d)]))
                    .collect()
            };
            let verdicts: Vec<Value> = (0..=rep.degrees_checked)
                .map(|d| {
                    let fails: Vec<&String> = rep
                        .failures
                        .iter()
                        .filter(|(fd, _)| *fd == d)
                        .map(|(_, m)| m)
                        .collect();
                    if fails.is_empty() {
                        json!({"degree": d, "ok": true})
                    } else {
                        json!({"degree": d, "ok": false, "failures": fails})
                    }
                })
                .collect();
            let mut text = String::new();
            let _ = writeln!(
                text,
                "six-term exactness through degree {}: {}",
                rep.degrees_checked,
                if rep.ok { "pass" } else { "FAIL" }
            );
            for (d, msg) in &rep.failures {
                let _ = writeln!(text, "  degree {d}: {msg}");
            }
            for (tag, label, deg) in &st.beyond_window {
                let _ = writeln!(text, "  note: {tag} class {label} in degree {deg} beyond window");
            }
            let json = json!({
                "schema": "aqh/1",
                "command": "aq les",
                "p": b.p.get(),
                "cap": b.cap,
                "ok": rep.ok,
                "terms": {
                    "h1_sub": dims(&st.h1_a),
                    "h1_ambient": dims(&st.h1_b),
                    "h1_quotient": dims(&st.h1_q),
                    "q_sub": dims(&st.q_a),
                    "q_ambient": dims(&st.q_b),
                    "q_quotient": dims(&st.q_q),
                },
                "verdicts": verdicts,
                "beyond_window": st.beyond_window.iter()
                    .map(|(t, l, d)| json!({"term": t, "label": l, "degree": d}))
                    .collect::<Vec<_>>(),
            });
            render(&output, text, json)?;
            Ok(if rep.ok { 0 } else { 1 })
        }
    }
}

fn fg_cmd(cmd: FgCmd) -> Result<u8> {
    let FgCmd::Check { hopf, module, gen_cut, powers_only, even_part, output } = cmd;
    let m = match (&hopf, &module) {
        (Some(path), None) => {
            let b = load_hopf(path)?;
            let alg = SteenrodAlgebra::new(b.p);
            aq::aq_h0(&alg, &b)?
        }
        (None, Some(path)) => {
            let src = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let f = parse_module(&src).with_context(|| format!("parsing {}", path.display()))?;
            let alg = SteenrodAlgebra::new(f.p);
            f.module(&alg)?
        }
        _ => bail!("give exactly one of --hopf or --module"),
    };
    let m = if even_part { m.even_part() } else { m };
    let cert = fg_check(&m, FgOptions { gen_cut, powers_only });
    let mut text = String::new();
    let _ = writeln!(
        text,
        "generated through {} by degrees <= {}: {}",
        cert.checked_through,
        cert.gen_cut,
        if cert.ok { "yes" } else { "no" }
    );
    let _ = writeln!(
        text,
        "  chosen: {}",
        cert.chosen
            .iter()
            .map(|(d, l)| format!("{l} ({d})"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    if !cert.ok {
        let _ = writeln!(text, "  stuck degrees: {:?}", cert.failure_degrees);
    }
    let json = json!({
        "schema": "aqh/1",
        "command": "fg check",
        "powers_only": powers_only,
        "even_part": even_part,
        "certificate": serde_json::to_value(&cert)?,
    });
    let ok = cert.ok;
    render(&output, text, json)?;
    Ok(if ok { 0 } else { 1 })
}

fn scenario_cmd(cmd: ScenarioCmd) -> Result<u8> {
    match cmd {
        ScenarioCmd::List => {
            for name in scenario::NAMES {
                println!("{name}");
            }
            Ok(0)
        }
        ScenarioCmd::Run { name, write_golden, output } => {
            let out = scenario::run(&name)?;
            let rendered = serde_json::to_string_pretty(&out.json)? + "\n";
            if write_golden {
                let path = Path::new(env!("CARGO_MANIFEST_DIR"))
                    .join("goldens")
                    .join(format!("{name}.json"));
                std::fs::write(&path, &rendered)
                    .with_context(|| format!("writing {}", path.display()))?;
                println!("wrote {} (rebuild to embed)", path.display());
                return Ok(0);
            }
            render(&output, out.text.clone(), out.json.clone())?;
            let Some(gold) = golden(&name) else {
                bail!("no golden recorded for `{name}`");
            };
            if gold == rendered {
                eprintln!("golden: match");
                Ok(0)
            } else {
                let got: Vec<&str> = rendered.lines().collect();
                let want: Vec<&str> = gold.lines().collect();
                let n = got.len().max(want.len());
                for i in 0..n {
                    let g = got.get(i).copied().unwrap_or("<eof>");
                    let w = want.get(i).copied().unwrap_or("<eof>");
                    if g != w {
                        eprintln!("golden: MISMATCH at line {}", i + 1);
                        eprintln!("  computed: {g}");
                        eprintln!("  golden:   {w}");
                        break;
                    }
                }
                Ok(1)
            }
        }
    }
}
