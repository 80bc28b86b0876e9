//! Adem normalization, composition, and decomposition of power operations
//! into the indecomposable generators `b` and `P^{p^j}`.

use super::element::SteenrodElement;
use super::word::{Letter, OperationWord};
use crate::fp::Prime;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

/// The mod-p Steenrod algebra with memoized rewriting tables.
///
/// Rewriting repeatedly replaces the leftmost inadmissible segment using the
/// Adem relations; this terminates because each step strictly decreases the
/// pair (weighted moment of the power indices, positions of the Bocksteins)
/// in lexicographic order.
pub struct SteenrodAlgebra {
    p: Prime,
    normal_forms: RwLock<HashMap<Vec<Letter>, Arc<SteenrodElement>>>,
    decompositions: RwLock<HashMap<u32, Arc<Vec<(u32, Vec<u32>)>>>>,
    admissibles: RwLock<HashMap<(u32, u32), Arc<Vec<OperationWord>>>>,
}

impl SteenrodAlgebra {
    pub fn new(p: Prime) -> SteenrodAlgebra {
        SteenrodAlgebra {
            p,
            normal_forms: RwLock::new(HashMap::new()),
            decompositions: RwLock::new(HashMap::new()),
            admissibles: RwLock::new(HashMap::new()),
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// Rewrite a word as a sum of admissible words.
    pub fn normalize(&self, w: &OperationWord) -> SteenrodElement {
        assert!(
            !self.p.is_two() || !w.0.contains(&Letter::B),
            "Bockstein letters do not occur at p = 2"
        );
        assert!(
            !w.0.contains(&Letter::P(0)),
            "index-zero operations are the identity and never stored"
        );
        (*self.normalize_cached(&w.0)).clone()
    }

    fn normalize_cached(&self, letters: &[Letter]) -> Arc<SteenrodElement> {
        if let Some(hit) = self.normal_forms.read().unwrap().get(letters) {
            return hit.clone();
        }
        let result = Arc::new(self.normalize_uncached(letters));
        self.normal_forms
            .write()
            .unwrap()
            .entry(letters.to_vec())
            .or_insert_with(|| result.clone())
            .clone()
    }

    fn normalize_uncached(&self, letters: &[Letter]) -> SteenrodElement {
        match self.leftmost_violation(letters) {
            None => SteenrodElement::monomial(self.p, OperationWord(letters.to_vec())),
            Some(Violation::DoubleBockstein) => SteenrodElement::zero(self.p),
            Some(Violation::Segment { at, len, a, b }) => {
                let relation = if len == 2 {
                    adem_pp(self.p, a, b)
                } else {
                    adem_pbp(self.p, a, b)
                };
                let mut acc = SteenrodElement::zero(self.p);
                for (coeff, mid) in relation {
                    let mut next = Vec::with_capacity(letters.len() + 1);
                    next.extend_from_slice(&letters[..at]);
                    next.extend_from_slice(&mid);
                    next.extend_from_slice(&letters[at + len..]);
                    acc.add_scaled(&self.normalize_cached(&next), coeff);
                }
                acc
            }
        }
    }

    fn leftmost_violation(&self, letters: &[Letter]) -> Option<Violation> {
        let p = self.p.get();
        for at in 0..letters.len() {
            match (letters.get(at), letters.get(at + 1), letters.get(at + 2)) {
                (Some(Letter::B), Some(Letter::B), _) => {
                    return Some(Violation::DoubleBockstein);
                }
                (Some(&Letter::P(a)), Some(&Letter::P(b)), _) if a < p * b => {
                    return Some(Violation::Segment { at, len: 2, a, b });
                }
                (Some(&Letter::P(a)), Some(Letter::B), Some(&Letter::P(b))) if a <= p * b => {
                    return Some(Violation::Segment { at, len: 3, a, b });
                }
                _ => {}
            }
        }
        None
    }

    /// Composition `x * y` (apply `y` first), normalized.
    pub fn compose(&self, x: &SteenrodElement, y: &SteenrodElement) -> SteenrodElement {
        let mut acc = SteenrodElement::zero(self.p);
        for (wx, cx) in x.terms() {
            for (wy, cy) in y.terms() {
                let mut letters = wx.0.clone();
                letters.extend_from_slice(&wy.0);
                acc.add_scaled(&self.normalize_cached(&letters), self.p.mul(cx, cy));
            }
        }
        acc
    }

    /// Express `P^i` as a sum of composites of operations `P^{p^j}`.
    ///
    /// Each summand is a coefficient together with the list of exponents
    /// `j`, leftmost applied last. For `i` a power of p this is the single
    /// factor itself; otherwise the relation obtained from the inadmissible
    /// product `P^{i - p^m} P^{p^m}` (with `p^m` the largest power below
    /// `i`) is solved for `P^i`, which works because the coefficient of
    /// `P^i` in that product is a unit.
    pub fn p_power_decomposition(&self, i: u32) -> Arc<Vec<(u32, Vec<u32>)>> {
        assert!(i >= 1);
        if let Some(hit) = self.decompositions.read().unwrap().get(&i) {
            return hit.clone();
        }
        let result = Arc::new(self.decompose_uncached(i));
        self.decompositions
            .write()
            .unwrap()
            .entry(i)
            .or_insert_with(|| result.clone())
            .clone()
    }

    /// All admissible words of exact degree `d`, built right to left.
    pub fn admissible_basis(&self, d: u32) -> Vec<OperationWord> {
        let mut out: Vec<OperationWord> = (*self.admissible_rec(d, u32::MAX)).clone();
        if !self.p.is_two() && d >= 1 {
            for w in self.admissible_rec(d - 1, u32::MAX).iter() {
                let mut letters = Vec::with_capacity(w.len() + 1);
                letters.push(Letter::B);
                letters.extend_from_slice(&w.0);
                out.push(OperationWord(letters));
            }
        }
        out.sort();
        out
    }

    /// Admissible words of degree `d` that do not start with a Bockstein and
    /// whose leading power index is at most `maxs`.
    fn admissible_rec(&self, d: u32, maxs: u32) -> Arc<Vec<OperationWord>> {
        let p = self.p.get();
        let step = if self.p.is_two() { 1 } else { 2 * (p - 1) };
        let maxs = maxs.min(d / step);
        if let Some(hit) = self.admissibles.read().unwrap().get(&(d, maxs)) {
            return hit.clone();
        }
        let mut out = Vec::new();
        if d == 0 {
            out.push(OperationWord::identity());
        }
        for s in 1..=maxs {
            let rem = d - s * step;
            for tail in self.admissible_rec(rem, s / p).iter() {
                let mut letters = Vec::with_capacity(tail.len() + 1);
                letters.push(Letter::P(s));
                letters.extend_from_slice(&tail.0);
                out.push(OperationWord(letters));
            }
            if !self.p.is_two() && rem >= 1 {
                for tail in self.admissible_rec(rem - 1, (s - 1) / p).iter() {
                    let mut letters = Vec::with_capacity(tail.len() + 2);
                    letters.push(Letter::P(s));
                    letters.push(Letter::B);
                    letters.extend_from_slice(&tail.0);
                    out.push(OperationWord(letters));
                }
            }
        }
        let result = Arc::new(out);
        self.admissibles
            .write()
            .unwrap()
            .entry((d, maxs))
            .or_insert_with(|| result.clone())
            .clone()
    }

    fn decompose_uncached(&self, i: u32) -> Vec<(u32, Vec<u32>)> {
        let p = self.p;
        if let Some(j) = p_power_exponent(p.get(), i) {
            return vec![(1, vec![j])];
        }
        let mut m = 0;
        while p.get().pow(m + 1) < i {
            m += 1;
        }
        let pm = p.get().pow(m);
        let a = i - pm;
        // P^a P^{p^m} = c0 P^i + sum over t >= 1 of c_t P^{i-t} P^t
        let mut c0 = 0;
        let mut rest: Vec<(u32, u32, u32)> = Vec::new(); // (coeff, i-t, t)
        for (coeff, word) in adem_pp(p, a, pm) {
            match word.as_slice() {
                [Letter::P(single)] => {
                    debug_assert_eq!(*single, i);
                    c0 = coeff;
                }
                [Letter::P(hi), Letter::P(lo)] => rest.push((coeff, *hi, *lo)),
                _ => unreachable!(),
            }
        }
        debug_assert!(c0 != 0, "leading Adem coefficient must be a unit");
        let c0_inv = p.inv(c0);

        let mut acc: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
        let accumulate_product = |acc: &mut BTreeMap<Vec<u32>, u32>,
                                      left: &[(u32, Vec<u32>)],
                                      right: &[(u32, Vec<u32>)],
                                      scale: u32| {
            for (cl, wl) in left {
                for (cr, wr) in right {
                    let c = p.mul(scale, p.mul(*cl, *cr));
                    if c == 0 {
                        continue;
                    }
                    let mut w = wl.clone();
                    w.extend_from_slice(wr);
                    let e = acc.entry(w).or_insert(0);
                    *e = p.add(*e, c);
                }
            }
        };

        let left = self.p_power_decomposition(a);
        let right = self.p_power_decomposition(pm);
        accumulate_product(&mut acc, &left, &right, c0_inv);
        for (coeff, hi, lo) in rest {
            let left = self.p_power_decomposition(hi);
            let right = self.p_power_decomposition(lo);
            let scale = p.mul(c0_inv, p.neg(coeff));
            accumulate_product(&mut acc, &left, &right, scale);
        }
        acc.into_iter().filter(|&(_, c)| c != 0).map(|(w, c)| (c, w)).collect()
    }
}

/// Exponent `j` with `p^j == i`, if any.
pub fn p_power_exponent(p: u32, i: u32) -> Option<u32> {
    let mut v = 1u32;
    let mut j = 0u32;
    while v < i {
        v = v.checked_mul(p)?;
        j += 1;
    }
    (v == i).then_some(j)
}

enum Violation {
    DoubleBockstein,
    /// An inadmissible segment `letters[at..at+len]`; `len` is 2 for a plain
    /// pair `P^a P^b` and 3 for `P^a b P^b`.
    Segment { at: usize, len: usize, a: u32, b: u32 },
}

/// Adem expansion of the inadmissible product `P^a P^b` (`0 < a < pb`) as a
/// list of (coefficient, replacement letters).
pub fn adem_pp(p: Prime, a: u32, b: u32) -> Vec<(u32, Vec<Letter>)> {
    debug_assert!(0 < a && a < p.get() * b);
    let mut out = Vec::new();
    if p.is_two() {
        for c in 0..=a / 2 {
            let k = p.binom((b - c - 1) as u64, (a - 2 * c) as u64);
            if k == 0 {
                continue;
            }
            let word = if c == 0 {
                vec![Letter::P(a + b)]
            } else {
                vec![Letter::P(a + b - c), Letter::P(c)]
            };
            out.push((k, word));
        }
        return out;
    }
    let q = p.get() - 1;
    for t in 0..=a / p.get() {
        let k = p.binom((q * (b - t) - 1) as u64, (a - p.get() * t) as u64);
        let k = apply_sign(p, k, a + t);
        if k == 0 {
            continue;
        }
        let word = if t == 0 {
            vec![Letter::P(a + b)]
        } else {
            vec![Letter::P(a + b - t), Letter::P(t)]
        };
        out.push((k, word));
    }
    out
}

/// Adem expansion of `P^a b P^b` (`0 < a <= pb`), odd primes only.
pub fn adem_pbp(p: Prime, a: u32, b: u32) -> Vec<(u32, Vec<Letter>)> {
    debug_assert!(!p.is_two());
    debug_assert!(0 < a && a <= p.get() * b);
    let q = p.get() - 1;
    let mut out = Vec::new();
    for t in 0..=a / p.get() {
        let k = p.binom((q * (b - t)) as u64, (a - p.get() * t) as u64);
        let k = apply_sign(p, k, a + t);
        if k == 0 {
            continue;
        }
        let mut word = vec![Letter::B, Letter::P(a + b - t)];
        if t > 0 {
            word.push(Letter::P(t));
        }
        out.push((k, word));
    }
    for t in 0..=(a - 1) / p.get() {
        let k = p.binom((q * (b - t) - 1) as u64, (a - p.get() * t - 1) as u64);
        let k = p.neg(apply_sign(p, k, a + t));
        if k == 0 {
            continue;
        }
        let word = if t == 0 {
            vec![Letter::P(a + b), Letter::B]
        } else {
            vec![Letter::P(a + b - t), Letter::B, Letter::P(t)]
        };
        out.push((k, word));
    }
    out
}

fn apply_sign(p: Prime, k: u32, exponent: u32) -> u32 {
    if exponent % 2 == 0 {
        k
    } else {
        p.neg(k)
    }
}
