//! Graded modules over the Steenrod algebra on a finite degree window, with
//! explicit matrices for the action of the algebra generators, and the
//! finite-generation certificate search.

use crate::fp::{FpMatrix, Prime, Subspace};
use crate::steenrod::{p_power_exponent, Letter, OperationWord, SteenrodAlgebra, SteenrodElement};
use crate::{Error, Result};
use serde::Serialize;
use std::collections::HashMap;

/// A multiplicative generator of the algebra of operations: the Bockstein,
/// or the power operation `P^{p^j}` (`Sq^{2^j}` at p = 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraGen {
    Bockstein,
    PPow(u32),
}

impl AlgebraGen {
    pub fn degree(self, p: Prime) -> u32 {
        match self {
            AlgebraGen::Bockstein => 1,
            AlgebraGen::PPow(j) => {
                if p.is_two() {
                    1 << j
                } else {
                    2 * p.get().pow(j) * (p.get() - 1)
                }
            }
        }
    }

    pub fn display(self, p: Prime) -> String {
        match self {
            AlgebraGen::Bockstein => "b".to_string(),
            AlgebraGen::PPow(j) => {
                if p.is_two() {
                    format!("Sq{}", 1u32 << j)
                } else {
                    format!("P{}", p.get().pow(j))
                }
            }
        }
    }
}

/// A graded F_p-vector space on degrees `0..=cap` with the action of the
/// algebra generators stored as matrices.
///
/// `action[(g, d)]` maps degree `d` to degree `d + deg(g)`; a missing entry
/// means the zero map. Degrees above `complete_through` may be missing
/// classes and are not trusted by consumers.
#[derive(Debug, Clone)]
pub struct GradedModule {
    pub p: Prime,
    pub cap: u32,
    pub complete_through: u32,
    dims: Vec<usize>,
    labels: Vec<Vec<String>>,
    action: HashMap<(AlgebraGen, u32), FpMatrix>,
}

impl GradedModule {
    pub fn new(p: Prime, cap: u32) -> GradedModule {
        GradedModule {
            p,
            cap,
            complete_through: cap,
            dims: vec![0; cap as usize + 1],
            labels: vec![Vec::new(); cap as usize + 1],
            action: HashMap::new(),
        }
    }

    pub fn dim(&self, d: u32) -> usize {
        if d > self.cap {
            0
        } else {
            self.dims[d as usize]
        }
    }

    pub fn labels(&self, d: u32) -> &[String] {
        &self.labels[d as usize]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Append a basis element; returns its index within the degree.
    pub fn push_basis(&mut self, d: u32, label: impl Into<String>) -> usize {
        assert!(d <= self.cap);
        self.dims[d as usize] += 1;
        self.labels[d as usize].push(label.into());
        self.dims[d as usize] - 1
    }

    pub fn set_action(&mut self, g: AlgebraGen, d: u32, m: FpMatrix) {
        debug_assert_eq!(m.rows, self.dim(d));
        debug_assert_eq!(m.cols, self.dim(d + g.degree(self.p)));
        self.action.insert((g, d), m);
    }

    pub fn action_matrix(&self, g: AlgebraGen, d: u32) -> Option<&FpMatrix> {
        self.action.get(&(g, d))
    }

    /// Apply one algebra generator to a vector in degree `d`.
    pub fn apply_gen(&self, g: AlgebraGen, d: u32, v: &[u32]) -> Vec<u32> {
        let target = d + g.degree(self.p);
        let tdim = self.dim(target);
        match self.action.get(&(g, d)) {
            Some(m) => m.apply(v),
            None => vec![0; tdim],
        }
    }

    /// Apply a single letter, decomposing non-generator power operations
    /// into the stored generators.
    pub fn apply_letter(
        &self,
        alg: &SteenrodAlgebra,
        l: Letter,
        d: u32,
        v: &[u32],
    ) -> Vec<u32> {
        match l {
            Letter::B => self.apply_gen(AlgebraGen::Bockstein, d, v),
            Letter::P(i) => {
                if let Some(j) = p_power_exponent(self.p.get(), i) {
                    return self.apply_gen(AlgebraGen::PPow(j), d, v);
                }
                let step = if self.p.is_two() { 1 } else { 2 * (self.p.get() - 1) };
                let target = d + i * step;
                let mut out = vec![0u32; self.dim(target)];
                for (c, js) in alg.p_power_decomposition(i).iter() {
                    let mut cur = v.to_vec();
                    let mut cd = d;
                    for &j in js.iter().rev() {
                        cur = self.apply_gen(AlgebraGen::PPow(j), cd, &cur);
                        cd += AlgebraGen::PPow(j).degree(self.p);
                        if cur.iter().all(|&x| x == 0) {
                            break;
                        }
                    }
                    if cd == target {
                        crate::fp::vec_add_scaled(self.p, &mut out, &cur, *c);
                    }
                }
                out
            }
        }
    }

    pub fn apply_word(
        &self,
        alg: &SteenrodAlgebra,
        w: &OperationWord,
        d: u32,
        v: &[u32],
    ) -> Vec<u32> {
        let mut cur = v.to_vec();
        let mut cd = d;
        for l in w.0.iter().rev() {
            cur = self.apply_letter(alg, *l, cd, &cur);
            cd += OperationWord::single(*l).degree(self.p);
        }
        cur
    }

    pub fn apply_element(
        &self,
        alg: &SteenrodAlgebra,
        e: &SteenrodElement,
        d: u32,
        v: &[u32],
    ) -> Result<Vec<u32>> {
        let Some(deg) = e.degree() else {
            return Err(Error::Inconsistent(
                "can only apply homogeneous operations to graded vectors".into(),
            ));
        };
        let mut out = vec![0u32; self.dim(d + deg)];
        for (w, c) in e.terms() {
            let r = self.apply_word(alg, w, d, v);
            crate::fp::vec_add_scaled(self.p, &mut out, &r, c);
        }
        Ok(out)
    }

    /// The algebra generators that can act nontrivially somewhere in the
    /// window: the Bockstein (odd primes) and the power operations whose
    /// degree fits below the cap.
    pub fn generator_ops(&self) -> Vec<AlgebraGen> {
        let mut ops = Vec::new();
        if !self.p.is_two() {
            ops.push(AlgebraGen::Bockstein);
        }
        let mut j = 0;
        while AlgebraGen::PPow(j).degree(self.p) <= self.cap {
            ops.push(AlgebraGen::PPow(j));
            j += 1;
        }
        ops
    }

    /// The same module with odd degrees emptied and the Bockstein action
    /// dropped.
    pub fn even_part(&self) -> GradedModule {
        let mut out = GradedModule::new(self.p, self.cap);
        out.complete_through = self.complete_through;
        for d in (0..=self.cap).step_by(2) {
            out.dims[d as usize] = self.dims[d as usize];
            out.labels[d as usize] = self.labels[d as usize].clone();
        }
        for ((g, d), m) in &self.action {
            if *g != AlgebraGen::Bockstein && d % 2 == 0 && g.degree(self.p) % 2 == 0 {
                out.action.insert((*g, *d), m.clone());
            }
        }
        out
    }
}

/// Options for the finite-generation search.
#[derive(Debug, Clone, Copy)]
pub struct FgOptions {
    /// Generators may only be chosen in degrees `<= gen_cut`.
    pub gen_cut: u32,
    /// Restrict the acting operations to the power operations, dropping the
    /// Bockstein.
    pub powers_only: bool,
}

/// The outcome of a finite-generation search: a generating set in degrees
/// below the cut-off when one exists, and otherwise the degrees that cannot
/// be reached.
#[derive(Debug, Clone, Serialize)]
pub struct FgCertificate {
    pub ok: bool,
    pub gen_cut: u32,
    pub checked_through: u32,
    /// Greedily chosen generators as (degree, basis label).
    pub chosen: Vec<(u32, String)>,
    pub first_failure_degree: Option<u32>,
    pub failure_degrees: Vec<u32>,
}

/// Decide whether the module is generated over the operation algebra by
/// classes in degrees `<= gen_cut`, degree by degree.
///
/// Because every acting generator raises degree, a single ascending pass
/// computes the full span: by the time degree `d` is processed, all lower
/// spans are already closed.
pub fn fg_check(m: &GradedModule, opts: FgOptions) -> FgCertificate {
    let top = m.cap.min(m.complete_through);
    let ops: Vec<AlgebraGen> = m
        .generator_ops()
        .into_iter()
        .filter(|g| !(opts.powers_only && *g == AlgebraGen::Bockstein))
        .collect();
    let mut spans: Vec<Subspace> = (0..=top).map(|d| Subspace::new(m.p, m.dim(d))).collect();
    let mut chosen = Vec::new();
    let mut failures = Vec::new();
    for d in 0..=top {
        // Propagate from below.
        for g in &ops {
            let gd = g.degree(m.p);
            if gd > d {
                continue;
            }
            let src = d - gd;
            if m.dim(src) == 0 {
                continue;
            }
            let images: Vec<Vec<u32>> = (0..spans[src as usize].dim())
                .map(|r| {
                    let row = spans[src as usize].row(r).to_vec();
                    m.apply_gen(*g, src, &row)
                })
                .collect();
            for img in images {
                spans[d as usize].insert(&img);
            }
        }
        let dim_d = m.dim(d);
        if spans[d as usize].dim() == dim_d {
            continue;
        }
        if d <= opts.gen_cut {
            for i in 0..dim_d {
                let mut e = vec![0u32; dim_d];
                e[i] = 1;
                if spans[d as usize].insert(&e) {
                    chosen.push((d, m.labels(d)[i].clone()));
                }
            }
        } else {
            failures.push(d);
        }
    }
    FgCertificate {
        ok: failures.is_empty(),
        gen_cut: opts.gen_cut,
        checked_through: top,
        chosen,
        first_failure_degree: failures.first().copied(),
        failure_degrees: failures,
    }
}
