//! Exact arithmetic and dense linear algebra over the prime field F_p.
//!
//! Everything downstream (span closures, quotient bases, homology of small
//! complexes) reduces to row reduction of matrices with entries in `0..p`,
//! so this module keeps the representation simple: row-major `Vec<u32>`.

use crate::{Error, Result};

/// A validated odd or even prime, small enough for `u32` arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Prime> {
        let prime = p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0);
        if prime {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn is_two(self) -> bool {
        self.0 == 2
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.0
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.0 - b % self.0) % self.0
    }

    pub fn neg(self, a: u32) -> u32 {
        (self.0 - a % self.0) % self.0
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    /// Multiplicative inverse by Fermat; `a` must be nonzero mod p.
    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(a % self.0 != 0);
        self.pow(a, self.0 - 2)
    }

    pub fn pow(self, base: u32, mut exp: u32) -> u32 {
        let mut acc = 1u64;
        let p = self.0 as u64;
        let mut b = base as u64 % p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            exp >>= 1;
        }
        acc as u32
    }

    /// Reduce a signed integer into `0..p`.
    pub fn from_i64(self, n: i64) -> u32 {
        let p = self.0 as i64;
        (((n % p) + p) % p) as u32
    }

    /// Binomial coefficient mod p via Lucas' theorem. Returns 0 for k > n.
    pub fn binom(self, n: u64, k: u64) -> u32 {
        if k > n {
            return 0;
        }
        let p = self.0 as u64;
        let (mut n, mut k) = (n, k);
        let mut acc = 1u64;
        while k > 0 || n > 0 {
            let (nd, kd) = (n % p, k % p);
            if kd > nd {
                return 0;
            }
            acc = acc * binom_small(nd, kd, p) % p;
            n /= p;
            k /= p;
        }
        acc as u32
    }
}

fn binom_small(n: u64, k: u64, p: u64) -> u64 {
    // n, k < p, so a direct product with inversions stays exact.
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    if den == 0 {
        return 0;
    }
    // den^(p-2) mod p
    let mut inv = 1u64;
    let mut b = den;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            inv = inv * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    num * inv % p
}

/// Scale-and-add `dst += c * src` componentwise mod p.
pub fn vec_add_scaled(p: Prime, dst: &mut [u32], src: &[u32], c: u32) {
    debug_assert_eq!(dst.len(), src.len());
    if c == 0 {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        *d = p.add(*d, p.mul(c, *s));
    }
}

/// Dense row-major matrix over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    pub p: Prime,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> FpMatrix {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(p: Prime, cols: usize, rows: Vec<Vec<u32>>) -> FpMatrix {
        let mut m = FpMatrix::zeros(p, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row length mismatch");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p.get();
    }

    /// Matrix applied to a row vector: `v * self` (v has `rows` entries).
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        debug_assert_eq!(v.len(), self.rows);
        let mut out = vec![0u32; self.cols];
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                vec_add_scaled(self.p, &mut out, self.row(i), c);
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = p.inv(self.get(r, c));
            for j in c..self.cols {
                let v = p.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && self.get(i, c) != 0 {
                    let f = p.neg(self.get(i, c));
                    for j in c..self.cols {
                        let v = p.add(self.get(i, j), p.mul(f, self.get(r, j)));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of the right kernel: vectors v of length `rows` with v*self = 0.
    pub fn left_kernel(&self) -> Vec<Vec<u32>> {
        // Row-reduce [self | I] and read off the rows whose self-part died.
        let p = self.p;
        let aug_cols = self.cols + self.rows;
        let mut aug = FpMatrix::zeros(p, self.rows, aug_cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols + i, 1);
        }
        // Eliminate on the left block only.
        let mut r = 0;
        for c in 0..self.cols {
            if r == aug.rows {
                break;
            }
            let Some(pr) = (r..aug.rows).find(|&i| aug.get(i, c) != 0) else {
                continue;
            };
            aug.swap_rows(r, pr);
            let inv = p.inv(aug.get(r, c));
            for j in 0..aug_cols {
                let v = p.mul(aug.get(r, j), inv);
                aug.set(r, j, v);
            }
            for i in 0..aug.rows {
                if i != r && aug.get(i, c) != 0 {
                    let f = p.neg(aug.get(i, c));
                    for j in 0..aug_cols {
                        let v = p.add(aug.get(i, j), p.mul(f, aug.get(r, j)));
                        aug.set(i, j, v);
                    }
                }
            }
            r += 1;
        }
        let mut out = Vec::new();
        for i in r..aug.rows {
            out.push((0..self.rows).map(|j| aug.get(i, self.cols + j)).collect());
        }
        out
    }
}

/// An incrementally built subspace of F_p^n kept in reduced echelon form.
///
/// Supports membership tests, residue reduction, and coordinates in the
/// quotient by the subspace (indexed by non-pivot columns).
#[derive(Debug, Clone)]
pub struct Subspace {
    p: Prime,
    ambient: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(p: Prime, ambient: usize) -> Subspace {
        Subspace { p, ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.rows[i]
    }

    /// Reduce `v` against the stored rows; the result has zeros in all pivot
    /// columns.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        debug_assert_eq!(v.len(), self.ambient);
        let mut w = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if w[c] != 0 {
                let f = self.p.neg(w[c]);
                vec_add_scaled(self.p, &mut w, row, f);
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Insert a vector; returns true when it enlarged the subspace.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let mut w = self.reduce(v);
        let Some(c) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.p.inv(w[c]);
        for x in w.iter_mut() {
            *x = self.p.mul(*x, inv);
        }
        // Back-substitute into existing rows to stay fully reduced.
        for (row, &_pc) in self.rows.iter_mut().zip(&self.pivots) {
            if row[c] != 0 {
                let f = self.p.neg(row[c]);
                vec_add_scaled(self.p, row, &w, f);
            }
        }
        let at = self.pivots.iter().position(|&pc| pc > c).unwrap_or(self.pivots.len());
        self.pivots.insert(at, c);
        self.rows.insert(at, w);
        true
    }

    /// Columns not used as pivots, i.e. a basis of the quotient.
    pub fn nonpivots(&self) -> Vec<usize> {
        let piv: std::collections::HashSet<usize> = self.pivots.iter().copied().collect();
        (0..self.ambient).filter(|j| !piv.contains(j)).collect()
    }

    /// Coordinates of `v` in the quotient basis given by non-pivot columns.
    pub fn quotient_coords(&self, v: &[u32]) -> Vec<u32> {
        let w = self.reduce(v);
        self.nonpivots().iter().map(|&j| w[j]).collect()
    }
}

/// Expresses vectors as combinations of a fixed list of rows, returning the
/// coefficients on the original rows. Keeps a transform alongside the
/// echelon form, so one construction serves many solves.
#[derive(Debug, Clone)]
pub struct RowSolver {
    p: Prime,
    ambient: usize,
    n_rows: usize,
    reduced: Vec<Vec<u32>>,
    transform: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl RowSolver {
    pub fn new(p: Prime, ambient: usize, rows: &[Vec<u32>]) -> RowSolver {
        let mut solver = RowSolver {
            p,
            ambient,
            n_rows: rows.len(),
            reduced: Vec::new(),
            transform: Vec::new(),
            pivots: Vec::new(),
        };
        for (i, r) in rows.iter().enumerate() {
            debug_assert_eq!(r.len(), ambient);
            let mut w = r.clone();
            let mut t = vec![0u32; rows.len()];
            t[i] = 1;
            for ((row, tr), &c) in
                solver.reduced.iter().zip(&solver.transform).zip(&solver.pivots)
            {
                if w[c] != 0 {
                    let f = p.neg(w[c]);
                    vec_add_scaled(p, &mut w, row, f);
                    vec_add_scaled(p, &mut t, tr, f);
                }
            }
            let Some(c) = w.iter().position(|&x| x != 0) else {
                continue;
            };
            let inv = p.inv(w[c]);
            for x in w.iter_mut() {
                *x = p.mul(*x, inv);
            }
            for x in t.iter_mut() {
                *x = p.mul(*x, inv);
            }
            // Back-substitute so every stored row is zero at all other
            // pivots; solving is then a single pass.
            for (row, tr) in solver.reduced.iter_mut().zip(&mut solver.transform) {
                if row[c] != 0 {
                    let f = p.neg(row[c]);
                    vec_add_scaled(p, row, &w, f);
                    vec_add_scaled(p, tr, &t, f);
                }
            }
            let at = solver.pivots.iter().position(|&pc| pc > c).unwrap_or(solver.pivots.len());
            solver.pivots.insert(at, c);
            solver.reduced.insert(at, w);
            solver.transform.insert(at, t);
        }
        solver
    }

    pub fn rank(&self) -> usize {
        self.reduced.len()
    }

    /// Coefficients `c` with `sum c_i rows[i] = v`, if `v` is in the span.
    pub fn solve(&self, v: &[u32]) -> Option<Vec<u32>> {
        debug_assert_eq!(v.len(), self.ambient);
        let mut w = v.to_vec();
        let mut coeffs = vec![0u32; self.n_rows];
        for ((row, tr), &c) in self.reduced.iter().zip(&self.transform).zip(&self.pivots) {
            if w[c] != 0 {
                let f = w[c];
                vec_add_scaled(self.p, &mut coeffs, tr, f);
                let nf = self.p.neg(f);
                vec_add_scaled(self.p, &mut w, row, nf);
            }
        }
        w.iter().all(|&x| x == 0).then_some(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn prime_validation() {
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(3).is_ok());
        assert!(Prime::new(13).is_ok());
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(9).is_err());
    }

    #[test]
    fn binomials_via_lucas() {
        let p2 = p(2);
        assert_eq!(p2.binom(4, 2), 0);
        assert_eq!(p2.binom(5, 2), 0);
        assert_eq!(p2.binom(5, 1), 1);
        assert_eq!(p2.binom(7, 3), 1);
        let p3 = p(3);
        assert_eq!(p3.binom(4, 2), 0); // 6 = 0 mod 3
        assert_eq!(p3.binom(5, 2), 1); // 10 = 1 mod 3
        assert_eq!(p3.binom(9, 3), 0); // 84 = 0 mod 3
        assert_eq!(p3.binom(10, 1), 1);
    }

    #[test]
    fn rref_and_rank() {
        let p3 = p(3);
        let mut m = FpMatrix::from_rows(
            p3,
            3,
            vec![vec![1, 2, 0], vec![2, 4, 0], vec![0, 1, 1]],
        );
        assert_eq!(m.rank(), 2);
        let piv = m.rref();
        assert_eq!(piv, vec![0, 1]);
    }

    #[test]
    fn left_kernel_is_kernel() {
        let p2 = p(2);
        let m = FpMatrix::from_rows(p2, 2, vec![vec![1, 0], vec![1, 0], vec![0, 1]]);
        let ker = m.left_kernel();
        assert_eq!(ker.len(), 1);
        for v in ker {
            assert!(m.apply(&v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn subspace_quotient_coords() {
        let p5 = p(5);
        let mut s = Subspace::new(p5, 3);
        assert!(s.insert(&[1, 2, 3]));
        assert!(!s.insert(&[2, 4, 6]));
        assert!(s.insert(&[0, 1, 0]));
        assert_eq!(s.dim(), 2);
        assert_eq!(s.nonpivots(), vec![2]);
        assert!(s.contains(&[3, 1, 9 % 5]));
        let q = s.quotient_coords(&[0, 0, 2]);
        assert_eq!(q, vec![2]);
    }

    #[test]
    fn row_solver_recovers_combinations() {
        let p3 = p(3);
        let rows = vec![vec![1, 1, 0, 2], vec![0, 2, 1, 0], vec![1, 0, 1, 1], vec![2, 2, 0, 4 % 3]];
        let solver = RowSolver::new(p3, 4, &rows);
        assert_eq!(solver.rank(), 3);
        // 2*rows[0] + rows[1] + rows[2]
        let v = vec![(2 + 1) % 3, (2 + 2) % 3, 2, (4 + 1) % 3];
        let c = solver.solve(&v).unwrap();
        let mut back = vec![0u32; 4];
        for (ci, row) in c.iter().zip(&rows) {
            vec_add_scaled(p3, &mut back, row, *ci);
        }
        assert_eq!(back, v);
        assert!(solver.solve(&[0, 0, 1, 2]).is_none() || {
            // only accept a reported solution if it really reconstructs
            let c = solver.solve(&[0, 0, 1, 2]).unwrap();
            let mut w = vec![0u32; 4];
            for (ci, row) in c.iter().zip(&rows) {
                vec_add_scaled(p3, &mut w, row, *ci);
            }
            w == vec![0, 0, 1, 2]
        });
    }
}
