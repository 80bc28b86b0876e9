//! Independent recomputations used by the test suite.
//!
//! Everything here deliberately takes a second route: word enumeration by
//! brute force, admissibility and excess through the pairwise inequalities
//! rather than the formulas in `steenrod::word`, and operation actions
//! through the closed forms of `poly` rather than the Adem rewriter. Tests
//! compare the fast implementations against these.

use crate::fp::{FpMatrix, Prime};
use crate::poly::{PolyAlgebra, PolyElt, PolyMono};
use crate::steenrod::{Letter, OperationWord, SteenrodAlgebra, SteenrodElement};
use std::collections::HashMap;

/// Every word of exact degree `d`, admissible or not, including words with
/// repeated Bocksteins.
pub fn all_words(p: Prime, d: u32) -> Vec<OperationWord> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    build_words(p, d, &mut cur, &mut out);
    out
}

fn build_words(p: Prime, d: u32, cur: &mut Vec<Letter>, out: &mut Vec<OperationWord>) {
    if d == 0 {
        out.push(OperationWord(cur.clone()));
        return;
    }
    if !p.is_two() {
        cur.push(Letter::B);
        build_words(p, d - 1, cur, out);
        cur.pop();
    }
    let step = if p.is_two() { 1 } else { 2 * (p.get() - 1) };
    let mut i = 1;
    while i * step <= d {
        cur.push(Letter::P(i));
        build_words(p, d - i * step, cur, out);
        cur.pop();
        i += 1;
    }
}

/// Admissibility decided from the extracted `(eps, s)` sequence, coded
/// separately from `OperationWord::is_admissible`.
pub fn is_admissible_slow(p: Prime, w: &OperationWord) -> bool {
    let Some((eps0, pairs)) = extract_shape(w) else {
        return false; // repeated Bockstein
    };
    if p.is_two() && (eps0 == 1 || pairs.iter().any(|&(_, e)| e == 1)) {
        return false;
    }
    for k in 0..pairs.len().saturating_sub(1) {
        let (s, e) = pairs[k];
        let (s_next, _) = pairs[k + 1];
        if s < p.get() * s_next + e {
            return false;
        }
    }
    pairs.iter().all(|&(s, _)| s >= 1)
}

/// Excess via the telescoped sum over adjacent pairs, again coded separately.
pub fn excess_slow(p: Prime, w: &OperationWord) -> i64 {
    let Some((eps0, pairs)) = extract_shape(w) else {
        panic!("excess of a word with repeated Bocksteins");
    };
    if p.is_two() {
        let mut e = 0i64;
        for k in 0..pairs.len() {
            let s = pairs[k].0 as i64;
            e += if k + 1 < pairs.len() { s - 2 * pairs[k + 1].0 as i64 } else { s };
        }
        return e;
    }
    let mut e = eps0 as i64;
    for k in 0..pairs.len() {
        let (s, eps) = pairs[k];
        e += 2 * s as i64 - eps as i64;
        if k + 1 < pairs.len() {
            e -= 2 * p.get() as i64 * pairs[k + 1].0 as i64;
        }
    }
    e
}

/// Split a word into a leading Bockstein exponent and `(s_k, eps_k)` pairs;
/// `None` when two Bocksteins are adjacent.
fn extract_shape(w: &OperationWord) -> Option<(u32, Vec<(u32, u32)>)> {
    let mut eps0 = 0;
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    let mut pending_b = false;
    for l in &w.0 {
        match *l {
            Letter::B => {
                if pending_b {
                    return None;
                }
                pending_b = true;
            }
            Letter::P(s) => {
                pairs.push((s, 0));
                pending_b = false;
            }
        }
        if pending_b {
            if let Some(last) = pairs.last_mut() {
                last.1 = 1;
            } else {
                eps0 = 1;
            }
        }
    }
    Some((eps0, pairs))
}

/// All admissible words of exact degree `d`, by filtering the brute-force
/// enumeration.
pub fn admissible_words_slow(p: Prime, d: u32) -> Vec<OperationWord> {
    all_words(p, d).into_iter().filter(|w| is_admissible_slow(p, w)).collect()
}

/// A cohomology class to act on: an algebra together with a monomial.
#[derive(Debug, Clone)]
pub struct TestClass {
    pub alg: PolyAlgebra,
    pub mono: PolyMono,
}

impl TestClass {
    pub fn act(&self, w: &OperationWord) -> PolyElt {
        let e = PolyElt::monomial(self.alg.prime(), self.mono.clone());
        self.alg.apply_word(w, &e)
    }

    pub fn act_element(&self, e: &SteenrodElement) -> PolyElt {
        let mut out = PolyElt::zero(self.alg.prime());
        for (w, c) in e.terms() {
            out.add_scaled(&self.act(w), c);
        }
        out
    }
}

/// Check one word: its normal form must be a sum of admissible words of the
/// same degree acting identically on every class of the family.
pub fn check_word_action(
    alg: &SteenrodAlgebra,
    w: &OperationWord,
    family: &[TestClass],
) -> Result<(), String> {
    let p = alg.prime();
    let nf = alg.normalize(w);
    for (t, _) in nf.terms() {
        if !is_admissible_slow(p, t) {
            return Err(format!(
                "normal form of {} contains inadmissible {}",
                w.display(p),
                t.display(p)
            ));
        }
        if t.degree(p) != w.degree(p) {
            return Err(format!(
                "normal form of {} changed degree: {}",
                w.display(p),
                t.display(p)
            ));
        }
    }
    for (k, class) in family.iter().enumerate() {
        let lhs = class.act(w);
        let rhs = class.act_element(&nf);
        if lhs != rhs {
            return Err(format!(
                "action mismatch for {} on class {} ({})",
                w.display(p),
                k,
                class.alg.display_mono(&class.mono),
            ));
        }
    }
    Ok(())
}

/// Candidate classes ordered cheapest first: single-variable powers, then
/// two-variable shapes, then multilinear products and hooks, with exterior
/// decorations at odd primes so Bockstein placement is visible.
pub fn candidate_classes(p: Prime, max_class_degree: u32) -> Vec<TestClass> {
    let mut out = Vec::new();
    if p.is_two() {
        let push = |out: &mut Vec<TestClass>, pows: &[u32]| {
            let alg = PolyAlgebra::new(p, pows.len(), 0);
            out.push(TestClass { alg, mono: PolyMono { pows: pows.to_vec(), ext: 0 } });
        };
        for m in 1..=max_class_degree {
            push(&mut out, &[m]);
        }
        for m in 1..max_class_degree {
            push(&mut out, &[m, 1]);
        }
        for a in 2..max_class_degree {
            for b in 2..=a.min(max_class_degree - a) {
                push(&mut out, &[a, b]);
            }
        }
        for k in 3..=6u32.min(max_class_degree) {
            push(&mut out, &vec![1; k as usize]);
        }
        for k in 3..=4u32 {
            for a in 2..=max_class_degree.saturating_sub(k - 1) {
                let mut pows = vec![1; k as usize];
                pows[0] = a;
                push(&mut out, &pows);
            }
        }
        return out;
    }
    let push = |out: &mut Vec<TestClass>, pows: &[u32], ext: u32| {
        let n = pows.len().max(ext_width(ext));
        let mut pv = pows.to_vec();
        pv.resize(n, 0);
        let alg = PolyAlgebra::new(p, n, ext_width(ext));
        out.push(TestClass { alg, mono: PolyMono { pows: pv, ext } });
    };
    let max_y = max_class_degree / 2;
    for m in 1..=max_y {
        push(&mut out, &[m], 0);
    }
    push(&mut out, &[], 0b1);
    push(&mut out, &[], 0b11);
    for m in 1..=max_y {
        push(&mut out, &[m], 0b1);
    }
    for m in 1..=max_y.saturating_sub(1) {
        push(&mut out, &[m, 1], 0);
        push(&mut out, &[m, 1], 0b1);
    }
    for a in 2..max_y {
        for b in 2..=a.min(max_y - a) {
            push(&mut out, &[a, b], 0);
        }
    }
    push(&mut out, &[1, 1, 1], 0);
    push(&mut out, &[1, 1, 1, 1], 0);
    push(&mut out, &[], 0b111);
    push(&mut out, &[], 0b1111);
    for m in 1..=max_y.saturating_sub(1) {
        push(&mut out, &[m], 0b11);
    }
    out
}

fn ext_width(ext: u32) -> usize {
    (32 - ext.leading_zeros()) as usize
}

/// Greedily pick classes until the actions of all admissible words of degree
/// `d` become linearly independent; `None` when the candidates run out.
///
/// With such a family in hand, equality of actions on it is equivalent to
/// equality of normal forms in degree `d`.
pub fn certified_family(p: Prime, d: u32, candidates: &[TestClass]) -> Option<Vec<TestClass>> {
    let admissibles = admissible_words_slow(p, d);
    if admissibles.is_empty() {
        return Some(Vec::new());
    }
    let target = admissibles.len();
    let mut chosen: Vec<TestClass> = Vec::new();
    // Sparse rows, one per admissible word, keyed by (class index, monomial).
    let mut rows: Vec<Vec<((usize, PolyMono), u32)>> = vec![Vec::new(); target];
    let mut rank = 0;
    for class in candidates {
        let k = chosen.len();
        let mut extended = rows.clone();
        for (row, w) in extended.iter_mut().zip(&admissibles) {
            for (m, c) in class.act(w).terms() {
                row.push(((k, m.clone()), c));
            }
        }
        let new_rank = sparse_rank(p, &extended);
        if new_rank > rank {
            rows = extended;
            rank = new_rank;
            chosen.push(class.clone());
            if rank == target {
                return Some(chosen);
            }
        }
    }
    None
}

fn sparse_rank(p: Prime, rows: &[Vec<((usize, PolyMono), u32)>]) -> usize {
    let mut col_index: HashMap<(usize, PolyMono), usize> = HashMap::new();
    for row in rows {
        for (key, _) in row {
            let next = col_index.len();
            col_index.entry(key.clone()).or_insert(next);
        }
    }
    let cols = col_index.len();
    if cols == 0 {
        return 0;
    }
    let mut m = FpMatrix::zeros(p, rows.len(), cols);
    for (i, row) in rows.iter().enumerate() {
        for (key, c) in row {
            let j = col_index[key];
            m.set(i, j, p.add(m.get(i, j), *c));
        }
    }
    m.rank()
}

/// A fixed family with good separating power for spot checks at degrees
/// beyond the exhaustively certified range.
pub fn standard_family(p: Prime) -> Vec<TestClass> {
    if p.is_two() {
        let mk = |pows: &[u32]| TestClass {
            alg: PolyAlgebra::new(p, pows.len(), 0),
            mono: PolyMono { pows: pows.to_vec(), ext: 0 },
        };
        vec![
            mk(&[31]),
            mk(&[63]),
            mk(&[31, 1]),
            mk(&[1, 1, 1, 1, 1, 1]),
            mk(&[7, 3, 1]),
            mk(&[15, 5]),
        ]
    } else {
        let mk = |pows: &[u32], ext: u32| {
            let n = pows.len().max(ext_width(ext));
            let mut pv = pows.to_vec();
            pv.resize(n, 0);
            TestClass {
                alg: PolyAlgebra::new(p, n, ext_width(ext)),
                mono: PolyMono { pows: pv, ext },
            }
        };
        vec![
            mk(&[26], 0),
            mk(&[26], 0b1),
            mk(&[13, 9], 0),
            mk(&[8, 2], 0b11),
            mk(&[1, 1, 1, 1], 0),
            mk(&[4, 1], 0b111),
        ]
    }
}

// ---------------------------------------------------------------------------
// Chain-level homology of the indecomposables functor.
//
// A second route to the derived classes of a Borel presentation: resolve the
// algebra by iterating the free graded-commutative functor on its positive
// part, apply indecomposables levelwise, and take the homology of the
// resulting complex. Only the multiplication of the input algebra is
// consulted, so the answer is independent of the generator bookkeeping in
// `aq`. Boundaries are checked to square to zero as they are built.

use crate::hopf::{BorelMono, BorelPoly, BorelPresentation};
use crate::Error;
use std::collections::BTreeMap;

type Combo = BTreeMap<usize, u32>;

/// One level of nested monomials: letters with degrees and parities, and
/// every nonempty monomial in them of degree at most `cap`. At odd primes an
/// odd letter appears at most once per monomial.
struct ChainLevel {
    p: Prime,
    letter_deg: Vec<u32>,
    letter_odd: Vec<bool>,
    /// What each letter names one level down.
    letter_src: Vec<usize>,
    monos: Vec<Vec<usize>>,
    degree: Vec<u32>,
    index: HashMap<Vec<usize>, usize>,
    by_degree: Vec<Vec<usize>>,
    pos_in_degree: Vec<usize>,
    /// Monomial consisting of one copy of one letter.
    single: Vec<usize>,
}

impl ChainLevel {
    /// `letters` must come sorted by degree: (degree, odd, source id).
    fn build(p: Prime, cap: u32, letters: Vec<(u32, bool, usize)>) -> ChainLevel {
        let letter_deg: Vec<u32> = letters.iter().map(|l| l.0).collect();
        let letter_odd: Vec<bool> = letters.iter().map(|l| l.1).collect();
        let letter_src: Vec<usize> = letters.iter().map(|l| l.2).collect();
        let n = letter_deg.len();
        let mut lv = ChainLevel {
            p,
            letter_deg,
            letter_odd,
            letter_src,
            monos: Vec::new(),
            degree: Vec::new(),
            index: HashMap::new(),
            by_degree: vec![Vec::new(); cap as usize + 1],
            pos_in_degree: Vec::new(),
            single: vec![usize::MAX; n],
        };
        let mut cur = Vec::new();
        lv.enumerate(0, cap, 0, &mut cur);
        for id in 0..lv.monos.len() {
            let d = lv.degree[id] as usize;
            lv.pos_in_degree[id] = lv.by_degree[d].len();
            lv.by_degree[d].push(id);
            if lv.monos[id].len() == 1 {
                lv.single[lv.monos[id][0]] = id;
            }
        }
        lv
    }

    fn enumerate(&mut self, from: usize, room: u32, depth: u32, cur: &mut Vec<usize>) {
        if !cur.is_empty() {
            self.monos.push(cur.clone());
            self.degree.push(depth);
            self.index.insert(cur.clone(), self.monos.len() - 1);
            self.pos_in_degree.push(0);
        }
        for l in from..self.letter_deg.len() {
            let d = self.letter_deg[l];
            if d > room {
                break;
            }
            cur.push(l);
            let next = if self.letter_odd[l] { l + 1 } else { l };
            self.enumerate(next, room - d, depth + d, cur);
            cur.pop();
        }
    }

    fn dim(&self, d: u32) -> usize {
        self.by_degree[d as usize].len()
    }

    /// Product of two sorted letter lists: `None` when an odd letter
    /// repeats, otherwise the merged list and the Koszul sign.
    fn merge(&self, a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let mut neg = false;
        let mut i = 0;
        let mut j = 0;
        let mut odd_rest: u32 = a.iter().filter(|&&l| self.letter_odd[l]).count() as u32;
        while i < a.len() || j < b.len() {
            let take_a = j == b.len() || (i < a.len() && a[i] <= b[j]);
            if take_a {
                if self.letter_odd[a[i]] {
                    odd_rest -= 1;
                }
                out.push(a[i]);
                i += 1;
            } else {
                if self.letter_odd[b[j]] && odd_rest % 2 == 1 {
                    neg = !neg;
                }
                out.push(b[j]);
                j += 1;
            }
        }
        for k in 1..out.len() {
            if out[k] == out[k - 1] && self.letter_odd[out[k]] {
                return None;
            }
        }
        Some((out, neg))
    }

    fn scale(&self, c: u32, neg: bool) -> u32 {
        if neg {
            self.p.neg(c)
        } else {
            c
        }
    }

    fn combo_add(&self, acc: &mut Combo, id: usize, c: u32) {
        if c == 0 {
            return;
        }
        let e = acc.entry(id).or_insert(0);
        *e = self.p.add(*e, c);
        if *e == 0 {
            acc.remove(&id);
        }
    }

    fn combo_mul(&self, a: &Combo, b: &Combo) -> Combo {
        let mut out = Combo::new();
        for (&ia, &ca) in a {
            for (&ib, &cb) in b {
                if let Some((m, neg)) = self.merge(&self.monos[ia], &self.monos[ib]) {
                    if let Some(&id) = self.index.get(&m) {
                        self.combo_add(&mut out, id, self.scale(self.p.mul(ca, cb), neg));
                    }
                }
            }
        }
        out
    }

    /// Multiply a product of combos, starting from the first factor.
    fn combo_product(&self, factors: impl Iterator<Item = Combo>) -> Combo {
        let mut acc: Option<Combo> = None;
        for f in factors {
            acc = Some(match acc {
                None => f,
                Some(a) => self.combo_mul(&a, &f),
            });
            if acc.as_ref().unwrap().is_empty() {
                break;
            }
        }
        acc.unwrap_or_default()
    }

    /// Multiply out a list of this level's letters one level down.
    fn eval_down(&self, inner: &ChainLevel, letters: &[usize]) -> Option<(usize, bool)> {
        let mut acc: Vec<usize> = Vec::new();
        let mut neg = false;
        for &l in letters {
            let (m, n) = inner.merge(&acc, &inner.monos[self.letter_src[l]])?;
            acc = m;
            neg ^= n;
        }
        inner.index.get(&acc).map(|&id| (id, neg))
    }
}

/// Homology of the indecomposables complex, one dimension per degree.
#[derive(Debug, Clone)]
pub struct ChainHomology {
    pub cap: u32,
    pub h0: Vec<usize>,
    pub h1: Vec<usize>,
    pub h2: Option<Vec<usize>>,
}

pub fn chain_aq_homology(
    b: &BorelPresentation,
    through: u32,
    with_h2: bool,
) -> crate::Result<ChainHomology> {
    let p = b.p;
    let cap = through.min(b.cap);

    // Level 1: letters are the positive-degree basis monomials of the input.
    let mut letters1 = Vec::new();
    let mut amono: Vec<BorelMono> = Vec::new();
    for d in 1..=cap {
        for m in b.basis(d).monos.iter() {
            letters1.push((d, !p.is_two() && d % 2 == 1, amono.len()));
            amono.push(m.clone());
        }
    }
    let lv1 = ChainLevel::build(p, cap, letters1);

    // Evaluate each level-1 monomial in the algebra, both as an algebra
    // element and reexpanded over one-letter monomials.
    let mut letter_of: HashMap<BorelMono, usize> = HashMap::new();
    for (l, m) in amono.iter().enumerate() {
        letter_of.insert(m.clone(), l);
    }
    let mut eta_poly: Vec<BorelPoly> = Vec::with_capacity(lv1.monos.len());
    let mut eta_c1: Vec<Combo> = Vec::with_capacity(lv1.monos.len());
    for letters in &lv1.monos {
        let mut acc = BorelPoly::monomial(BorelMono::one(b.gens.len()));
        for &l in letters {
            acc = b.mul(&acc, &BorelPoly::monomial(amono[lv1.letter_src[l]].clone()));
        }
        let mut combo = Combo::new();
        for (m, &c) in &acc.terms {
            lv1.combo_add(&mut combo, lv1.single[letter_of[m]], c);
        }
        eta_poly.push(acc);
        eta_c1.push(combo);
    }

    let sorted_letters = |lv: &ChainLevel| {
        let mut ids: Vec<usize> = (0..lv.monos.len()).collect();
        ids.sort_by_key(|&i| (lv.degree[i], i));
        ids.iter()
            .map(|&i| (lv.degree[i], !p.is_two() && lv.degree[i] % 2 == 1, i))
            .collect::<Vec<_>>()
    };
    let lv2 = ChainLevel::build(p, cap, sorted_letters(&lv1));
    let lv3 = with_h2.then(|| ChainLevel::build(p, cap, sorted_letters(&lv2)));
    // inverse of letter_src for rebracketing
    let mut lv2_letter = vec![usize::MAX; lv1.monos.len()];
    for (l, &src) in lv2.letter_src.iter().enumerate() {
        lv2_letter[src] = l;
    }

    // boundary of a level-1 monomial, over one-letter monomials
    let d1_of = |id: usize| -> Combo {
        let mut combo = Combo::new();
        if lv1.monos[id].len() == 1 {
            lv1.combo_add(&mut combo, id, 1);
        }
        for (&t, &c) in &eta_c1[id] {
            lv1.combo_add(&mut combo, t, p.neg(c));
        }
        combo
    };

    // boundary of a level-2 monomial, over level-1 monomials
    let d2_of = |id: usize| -> Combo {
        let letters = &lv2.monos[id];
        let mut combo = Combo::new();
        if letters.len() == 1 {
            lv1.combo_add(&mut combo, lv2.letter_src[letters[0]], 1);
        }
        if let Some((m, neg)) = lv2.eval_down(&lv1, letters) {
            lv1.combo_add(&mut combo, m, lv1.scale(p.neg(1), neg));
        }
        let prod =
            lv1.combo_product(letters.iter().map(|&l| eta_c1[lv2.letter_src[l]].clone()));
        for (&t, &c) in &prod {
            lv1.combo_add(&mut combo, t, c);
        }
        combo
    };

    // boundary of a level-3 monomial, over level-2 monomials
    let d3_of = |lv3: &ChainLevel, id: usize| -> Combo {
        let letters = &lv3.monos[id];
        let mut combo = Combo::new();
        if letters.len() == 1 {
            lv2.combo_add(&mut combo, lv3.letter_src[letters[0]], 1);
        }
        if let Some((m, neg)) = lv3.eval_down(&lv2, letters) {
            lv2.combo_add(&mut combo, m, lv2.scale(p.neg(1), neg));
        }
        // middle evaluation: each letter collapses to one letter on the
        // product of its own letters
        let prod = lv2.combo_product(letters.iter().map(|&l| {
            let w = lv3.letter_src[l];
            let mut f = Combo::new();
            if let Some((m, neg)) = lv2.eval_down(&lv1, &lv2.monos[w]) {
                f.insert(lv2.single[lv2_letter[m]], lv2.scale(1, neg));
            }
            f
        }));
        for (&t, &c) in &prod {
            lv2.combo_add(&mut combo, t, c);
        }
        // innermost evaluation: expand each letter of each letter in the
        // algebra and rebracket the result
        let prod = lv2.combo_product(letters.iter().map(|&l| {
            let w = lv3.letter_src[l];
            let inner = lv1.combo_product(
                lv2.monos[w].iter().map(|&ml| eta_c1[lv2.letter_src[ml]].clone()),
            );
            let mut f = Combo::new();
            for (&nu, &c) in &inner {
                lv2.combo_add(&mut f, lv2.single[lv2_letter[nu]], c);
            }
            f
        }));
        for (&t, &c) in &prod {
            lv2.combo_add(&mut combo, t, p.neg(c));
        }
        combo
    };

    let mut h0 = vec![0usize; cap as usize + 1];
    let mut h1 = vec![0usize; cap as usize + 1];
    let mut h2 = with_h2.then(|| vec![0usize; cap as usize + 1]);

    for d in 1..=cap {
        let c0 = b.dim(d);
        let basis0 = b.basis(d);

        let mut rows1: Vec<Vec<u32>> = Vec::with_capacity(lv1.dim(d));
        for &id in &lv1.by_degree[d as usize] {
            let mut v = vec![0u32; c0];
            if lv1.monos[id].len() == 1 {
                let m = &amono[lv1.letter_src[lv1.monos[id][0]]];
                v[basis0.index[m]] = 1;
            }
            let ev = b.to_vector(d, &eta_poly[id])?;
            for (i, &c) in ev.iter().enumerate() {
                v[i] = p.sub(v[i], c);
            }
            rows1.push(v);
        }
        let r1 = FpMatrix::from_rows(p, c0, rows1).rank();
        h0[d as usize] = c0 - r1;

        let c1 = lv1.dim(d);
        let mut rows2: Vec<Vec<u32>> = Vec::with_capacity(lv2.dim(d));
        let mut d2_table: Vec<Combo> = Vec::with_capacity(lv2.dim(d));
        for &id in &lv2.by_degree[d as usize] {
            let combo = d2_of(id);
            let mut v = vec![0u32; c1];
            let mut check = Combo::new();
            for (&t, &c) in &combo {
                v[lv1.pos_in_degree[t]] = c;
                for (&u, &e) in &d1_of(t) {
                    lv1.combo_add(&mut check, u, p.mul(c, e));
                }
            }
            if !check.is_empty() {
                return Err(Error::Inconsistent(format!(
                    "chain boundary does not square to zero in degree {d}"
                )));
            }
            rows2.push(v);
            d2_table.push(combo);
        }
        let r2 = FpMatrix::from_rows(p, c1, rows2).rank();
        h1[d as usize] = c1 - r1 - r2;

        if let (Some(lv3), Some(h2)) = (lv3.as_ref(), h2.as_mut()) {
            let c2 = lv2.dim(d);
            let mut rows3: Vec<Vec<u32>> = Vec::with_capacity(lv3.dim(d));
            for &id in &lv3.by_degree[d as usize] {
                let combo = d3_of(lv3, id);
                let mut v = vec![0u32; c2];
                let mut check = Combo::new();
                for (&t, &c) in &combo {
                    v[lv2.pos_in_degree[t]] = c;
                    for (&u, &e) in &d2_table[lv2.pos_in_degree[t]] {
                        lv1.combo_add(&mut check, u, p.mul(c, e));
                    }
                }
                if !check.is_empty() {
                    return Err(Error::Inconsistent(format!(
                        "chain boundary does not square to zero in degree {d}"
                    )));
                }
                rows3.push(v);
            }
            let r3 = FpMatrix::from_rows(p, c2, rows3).rank();
            h2[d as usize] = c2 - r2 - r3;
        }
    }

    Ok(ChainHomology { cap, h0, h1, h2 })
}
