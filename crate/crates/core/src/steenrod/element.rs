//! F_p-linear combinations of operation words.

use super::word::OperationWord;
use crate::fp::Prime;
use std::collections::BTreeMap;

/// A finite sum of words with coefficients in `1..p`.
///
/// Elements returned by the normalizer contain only admissible words; the
/// type itself does not enforce that, since intermediate rewriting steps go
/// through inadmissible words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteenrodElement {
    p: Prime,
    terms: BTreeMap<OperationWord, u32>,
}

impl SteenrodElement {
    pub fn zero(p: Prime) -> SteenrodElement {
        SteenrodElement { p, terms: BTreeMap::new() }
    }

    pub fn monomial(p: Prime, w: OperationWord) -> SteenrodElement {
        let mut e = SteenrodElement::zero(p);
        e.add_term(w, 1);
        e
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OperationWord, u32)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &OperationWord) -> u32 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, w: OperationWord, c: u32) {
        let c = c % self.p.get();
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(w);
        match entry {
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

    pub fn add_assign(&mut self, other: &SteenrodElement) {
        assert_eq!(self.p, other.p);
        for (w, c) in other.terms() {
            self.add_term(w.clone(), c);
        }
    }

    pub fn add_scaled(&mut self, other: &SteenrodElement, c: u32) {
        assert_eq!(self.p, other.p);
        let c = c % self.p.get();
        if c == 0 {
            return;
        }
        for (w, k) in other.terms() {
            self.add_term(w.clone(), self.p.mul(k, c));
        }
    }

    pub fn scale(&mut self, c: u32) {
        let c = c % self.p.get();
        if c == 0 {
            self.terms.clear();
            return;
        }
        if c == 1 {
            return;
        }
        for v in self.terms.values_mut() {
            *v = self.p.mul(*v, c);
        }
    }

    /// Degree when all terms agree; `None` for the zero element or a
    /// non-homogeneous sum.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|w| w.degree(self.p));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (w, c) in &self.terms {
            if *c == 1 {
                parts.push(w.display(self.p));
            } else {
                parts.push(format!("{} {}", c, w.display(self.p)));
            }
        }
        parts.join(" + ")
    }
}
