//! Polynomial and exterior algebras with the closed-form operation action.
//!
//! At p = 2 this is F_2[x_1..x_n] with |x_i| = 1 and `Sq^t(x^a) =
//! C(a,t) x^{a+t}`. At odd primes it is F_p[y_1..y_m] tensor an exterior
//! algebra on z_1..z_k (k <= m) with |y| = 2, |z| = 1, `b z_i = y_i`,
//! `b y_i = 0`, and `P^t(y^a) = C(a,t) y^{a+t(p-1)}`.
//!
//! Operations act letter by letter through these closed forms, never through
//! the Adem relations, so agreement with the rewriter is a genuine
//! cross-check rather than a tautology.

use crate::fp::Prime;
use crate::steenrod::{Letter, OperationWord};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Exponents of the polynomial variables plus a bitmask of exterior factors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolyMono {
    pub pows: Vec<u32>,
    pub ext: u32,
}

impl PolyMono {
    pub fn one(n_poly: usize) -> PolyMono {
        PolyMono { pows: vec![0; n_poly], ext: 0 }
    }
}

/// A linear combination of monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyElt {
    p: Prime,
    terms: BTreeMap<PolyMono, u32>,
}

impl PolyElt {
    pub fn zero(p: Prime) -> PolyElt {
        PolyElt { p, terms: BTreeMap::new() }
    }

    pub fn monomial(p: Prime, m: PolyMono) -> PolyElt {
        let mut e = PolyElt::zero(p);
        e.add_term(m, 1);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PolyMono, u32)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &PolyMono) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: PolyMono, c: u32) {
        let c = c % self.p.get();
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.p.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &PolyElt) {
        for (m, c) in other.terms() {
            self.add_term(m.clone(), c);
        }
    }

    pub fn add_scaled(&mut self, other: &PolyElt, c: u32) {
        let c = c % self.p.get();
        if c == 0 {
            return;
        }
        for (m, k) in other.terms() {
            self.add_term(m.clone(), self.p.mul(k, c));
        }
    }

    pub fn scale(&mut self, c: u32) {
        let c = c % self.p.get();
        if c == 0 {
            self.terms.clear();
            return;
        }
        if c != 1 {
            for v in self.terms.values_mut() {
                *v = self.p.mul(*v, c);
            }
        }
    }
}

/// The ambient algebra: `n_poly` polynomial and `n_ext` exterior variables.
#[derive(Debug, Clone, Copy)]
pub struct PolyAlgebra {
    p: Prime,
    n_poly: usize,
    n_ext: usize,
}

impl PolyAlgebra {
    pub fn new(p: Prime, n_poly: usize, n_ext: usize) -> PolyAlgebra {
        assert!(n_ext <= n_poly, "each exterior variable needs a Bockstein image");
        assert!(!p.is_two() || n_ext == 0, "no exterior variables at p = 2");
        assert!(n_ext <= 32);
        PolyAlgebra { p, n_poly, n_ext }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn n_poly(&self) -> usize {
        self.n_poly
    }

    pub fn degree(&self, m: &PolyMono) -> u32 {
        let s: u32 = m.pows.iter().sum();
        if self.p.is_two() {
            s
        } else {
            2 * s + m.ext.count_ones()
        }
    }

    /// Product of two monomials with the Koszul sign; zero when an exterior
    /// factor repeats.
    pub fn mul_mono(&self, a: &PolyMono, b: &PolyMono) -> Option<(PolyMono, u32)> {
        if a.ext & b.ext != 0 {
            return None;
        }
        let mut swaps = 0u32;
        for j in 0..32 {
            if b.ext >> j & 1 == 1 {
                swaps += (a.ext >> (j + 1)).count_ones();
            }
        }
        let sign = if swaps % 2 == 0 { 1 } else { self.p.neg(1) };
        let pows = a.pows.iter().zip(&b.pows).map(|(x, y)| x + y).collect();
        Some((PolyMono { pows, ext: a.ext | b.ext }, sign))
    }

    pub fn mul(&self, a: &PolyElt, b: &PolyElt) -> PolyElt {
        let mut out = PolyElt::zero(self.p);
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                if let Some((m, sign)) = self.mul_mono(ma, mb) {
                    out.add_term(m, self.p.mul(self.p.mul(ca, cb), sign));
                }
            }
        }
        out
    }

    pub fn apply_letter(&self, l: Letter, e: &PolyElt) -> PolyElt {
        let mut out = PolyElt::zero(self.p);
        for (m, c) in e.terms() {
            match l {
                Letter::B => self.bockstein_mono(m, c, &mut out),
                Letter::P(t) => self.power_mono(t, m, c, &mut out),
            }
        }
        out
    }

    pub fn apply_word(&self, w: &OperationWord, e: &PolyElt) -> PolyElt {
        let mut cur = e.clone();
        for l in w.0.iter().rev() {
            cur = self.apply_letter(*l, &cur);
            if cur.is_zero() {
                break;
            }
        }
        cur
    }

    fn bockstein_mono(&self, m: &PolyMono, c: u32, out: &mut PolyElt) {
        assert!(!self.p.is_two());
        // Derivation over the exterior factors; the polynomial part is even
        // and killed by b, so signs only count earlier exterior factors.
        let mut seen_before = 0u32;
        for j in 0..self.n_ext {
            if m.ext >> j & 1 == 1 {
                let mut pows = m.pows.clone();
                pows[j] += 1;
                let sign = if seen_before % 2 == 0 { c } else { self.p.neg(c) };
                out.add_term(PolyMono { pows, ext: m.ext & !(1 << j) }, sign);
                seen_before += 1;
            }
        }
    }

    fn power_mono(&self, t: u32, m: &PolyMono, c: u32, out: &mut PolyElt) {
        // Distribute t across the polynomial variables; exterior factors
        // absorb nothing in positive degree.
        let shift = self.p.get() - 1;
        let mut pows = m.pows.clone();
        self.distribute(t, 0, m, &mut pows, c, shift, out);
    }

    #[allow(clippy::too_many_arguments)]
    fn distribute(
        &self,
        budget: u32,
        var: usize,
        m: &PolyMono,
        pows: &mut Vec<u32>,
        coeff: u32,
        shift: u32,
        out: &mut PolyElt,
    ) {
        if var == self.n_poly {
            if budget == 0 {
                out.add_term(PolyMono { pows: pows.clone(), ext: m.ext }, coeff);
            }
            return;
        }
        let a = m.pows[var];
        let top = budget.min(a);
        for ti in 0..=top {
            let k = self.p.binom(a as u64, ti as u64);
            if k == 0 {
                continue;
            }
            pows[var] = a + ti * shift;
            self.distribute(budget - ti, var + 1, m, pows, self.p.mul(coeff, k), shift, out);
        }
        pows[var] = a;
    }

    /// Rendering for diagnostics: `x1^2 x3` or `y1^3 z2`.
    pub fn display_mono(&self, m: &PolyMono) -> String {
        let mut s = String::new();
        let poly_name = if self.p.is_two() { "x" } else { "y" };
        for (i, &a) in m.pows.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if !s.is_empty() {
                s.push(' ');
            }
            if a == 1 {
                let _ = write!(s, "{}{}", poly_name, i + 1);
            } else {
                let _ = write!(s, "{}{}^{}", poly_name, i + 1, a);
            }
        }
        for j in 0..self.n_ext {
            if m.ext >> j & 1 == 1 {
                if !s.is_empty() {
                    s.push(' ');
                }
                let _ = write!(s, "z{}", j + 1);
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Prime {
        Prime::new(2).unwrap()
    }

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    fn mono(pows: &[u32], ext: u32) -> PolyMono {
        PolyMono { pows: pows.to_vec(), ext }
    }

    #[test]
    fn total_square_is_multiplicative() {
        let alg = PolyAlgebra::new(p2(), 2, 0);
        let xy = PolyElt::monomial(p2(), mono(&[1, 1], 0));
        // Sq1(xy) = x^2 y + x y^2
        let w = OperationWord::parse(p2(), "Sq1").unwrap();
        let r = alg.apply_word(&w, &xy);
        assert_eq!(r.coeff(&mono(&[2, 1], 0)), 1);
        assert_eq!(r.coeff(&mono(&[1, 2], 0)), 1);
        assert_eq!(r.num_terms(), 2);
        // Sq2(xy) = x^2 y^2
        let w = OperationWord::parse(p2(), "Sq2").unwrap();
        let r = alg.apply_word(&w, &xy);
        assert_eq!(r.coeff(&mono(&[2, 2], 0)), 1);
        assert_eq!(r.num_terms(), 1);
        // Sq3(xy) = 0 above the top
        let w = OperationWord::parse(p2(), "Sq3").unwrap();
        assert!(alg.apply_word(&w, &xy).is_zero());
    }

    #[test]
    fn bockstein_is_signed_derivation() {
        let alg = PolyAlgebra::new(p3(), 2, 2);
        let z12 = PolyElt::monomial(p3(), mono(&[0, 0], 0b11));
        let w = OperationWord::parse(p3(), "b").unwrap();
        let r = alg.apply_word(&w, &z12);
        // b(z1 z2) = y1 z2 - z1 y2
        assert_eq!(r.coeff(&mono(&[1, 0], 0b10)), 1);
        assert_eq!(r.coeff(&mono(&[0, 1], 0b01)), 2);
        // b b = 0
        let r2 = alg.apply_letter(Letter::B, &r);
        assert!(r2.is_zero());
    }

    #[test]
    fn power_on_poly_generator() {
        let alg = PolyAlgebra::new(p3(), 1, 0);
        let y = PolyElt::monomial(p3(), mono(&[1], 0));
        let w = OperationWord::parse(p3(), "P1").unwrap();
        let r = alg.apply_word(&w, &y);
        assert_eq!(r.coeff(&mono(&[3], 0)), 1); // P1 y = y^3
        assert_eq!(r.num_terms(), 1);
        let w = OperationWord::parse(p3(), "P2").unwrap();
        assert!(alg.apply_word(&w, &y).is_zero());
        // P1(y^2) = 2 y^4
        let y2 = PolyElt::monomial(p3(), mono(&[2], 0));
        let w = OperationWord::parse(p3(), "P1").unwrap();
        let r = alg.apply_word(&w, &y2);
        assert_eq!(r.coeff(&mono(&[4], 0)), 2);
    }

    #[test]
    fn exterior_multiplication_signs() {
        let alg = PolyAlgebra::new(p3(), 2, 2);
        let z1 = PolyElt::monomial(p3(), mono(&[0, 0], 0b01));
        let z2 = PolyElt::monomial(p3(), mono(&[0, 0], 0b10));
        let a = alg.mul(&z1, &z2);
        let b = alg.mul(&z2, &z1);
        assert_eq!(a.coeff(&mono(&[0, 0], 0b11)), 1);
        assert_eq!(b.coeff(&mono(&[0, 0], 0b11)), 2);
        assert!(alg.mul(&z1, &z1).is_zero());
    }

    #[test]
    fn cartan_for_composite_operation() {
        // Check P1 b on z1 z2 against a hand expansion.
        let alg = PolyAlgebra::new(p3(), 2, 2);
        let z12 = PolyElt::monomial(p3(), mono(&[0, 0], 0b11));
        let w = OperationWord::parse(p3(), "P1 b").unwrap();
        let r = alg.apply_word(&w, &z12);
        // b gives y1 z2 - y2 z1; P1 sends y_i to y_i^3 and fixes z in the
        // only nonvanishing split.
        assert_eq!(r.coeff(&mono(&[3, 0], 0b10)), 1);
        assert_eq!(r.coeff(&mono(&[0, 3], 0b01)), 2);
        assert_eq!(r.num_terms(), 2);
    }
}
