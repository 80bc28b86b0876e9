//! Free unstable modules and realization of small module presentations.
//!
//! The free unstable module on a class of degree `n` has, in degree `n + k`,
//! a basis given by the admissible words of degree `k` and excess at most
//! `n`. Operations act by normalizing and discarding terms whose excess
//! exceeds the generator degree.

use crate::fp::{FpMatrix, Subspace};
use crate::module::{AlgebraGen, GradedModule};
use crate::steenrod::{Letter, OperationWord, SteenrodAlgebra};
use crate::{Error, Result};
use std::collections::HashMap;

/// One free summand: a generator name and its degree.
#[derive(Debug, Clone)]
pub struct FreeSummand {
    pub name: String,
    pub degree: u32,
}

/// Basis of the free unstable module on one degree-`n` class, in degree `d`.
pub fn f_basis(alg: &SteenrodAlgebra, n: u32, d: u32) -> Vec<OperationWord> {
    if d < n {
        return Vec::new();
    }
    let p = alg.prime();
    alg.admissible_basis(d - n)
        .into_iter()
        .filter(|w| w.excess(p) <= n as i64)
        .collect()
}

/// Build a direct sum of free unstable modules as a graded module with
/// explicit action matrices, complete through `cap`.
pub fn free_unstable_module(
    alg: &SteenrodAlgebra,
    summands: &[FreeSummand],
    cap: u32,
) -> GradedModule {
    let p = alg.prime();
    let mut m = GradedModule::new(p, cap);
    // index[(degree)][(summand, word)] -> basis position
    let mut index: Vec<HashMap<(usize, OperationWord), usize>> =
        vec![HashMap::new(); cap as usize + 1];
    for d in 0..=cap {
        for (si, s) in summands.iter().enumerate() {
            for w in f_basis(alg, s.degree, d) {
                let label = format!("{}{}", w.compact(p), s.name);
                let pos = m.push_basis(d, label);
                index[d as usize].insert((si, w), pos);
            }
        }
    }
    // rebuild the per-degree ordering for matrix columns
    let ordered: Vec<Vec<(usize, OperationWord)>> = index
        .iter()
        .map(|map| {
            let mut v: Vec<((usize, OperationWord), usize)> =
                map.iter().map(|(k, &i)| (k.clone(), i)).collect();
            v.sort_by_key(|&(_, i)| i);
            v.into_iter().map(|(k, _)| k).collect()
        })
        .collect();
    for g in m.generator_ops() {
        let gd = g.degree(p);
        let letter = match g {
            AlgebraGen::Bockstein => Letter::B,
            AlgebraGen::PPow(j) => Letter::P(p.get().pow(j)),
        };
        for d in 0..=cap.saturating_sub(gd) {
            let (rows, cols) = (m.dim(d), m.dim(d + gd));
            if rows == 0 || cols == 0 {
                continue;
            }
            let mut mat = FpMatrix::zeros(p, rows, cols);
            for (r, (si, w)) in ordered[d as usize].iter().enumerate() {
                let mut letters = Vec::with_capacity(w.len() + 1);
                letters.push(letter);
                letters.extend_from_slice(&w.0);
                let nf = alg.normalize(&OperationWord(letters));
                let n = summands[*si].degree;
                for (t, c) in nf.terms() {
                    if t.excess(p) > n as i64 {
                        continue;
                    }
                    let col = index[(d + gd) as usize][&(*si, t.clone())];
                    mat.set(r, col, c);
                }
            }
            m.set_action(g, d, mat);
        }
    }
    m
}

/// A presentation: generators with degrees, and relations, each a sum of
/// operations applied to generators.
#[derive(Debug, Clone)]
pub struct ModulePresentation {
    pub generators: Vec<FreeSummand>,
    /// Each relation is a homogeneous sum of (coefficient, word, generator
    /// index) triples.
    pub relations: Vec<Vec<(u32, OperationWord, usize)>>,
}

/// Quotient the free module on the presentation's generators by the
/// submodule its relations generate, degreewise through `cap`.
pub fn realize(
    alg: &SteenrodAlgebra,
    pres: &ModulePresentation,
    cap: u32,
) -> Result<GradedModule> {
    let p = alg.prime();
    let free = free_unstable_module(alg, &pres.generators, cap);
    // Locate each relation as a vector in its degree.
    let mut seeds: Vec<Vec<Vec<u32>>> = vec![Vec::new(); cap as usize + 1]; // per degree
    for (ri, rel) in pres.relations.iter().enumerate() {
        let mut degree: Option<u32> = None;
        let mut vectors: HashMap<u32, Vec<u32>> = HashMap::new();
        for (coeff, w, gi) in rel {
            let gen = pres.generators.get(*gi).ok_or_else(|| {
                Error::Inconsistent(format!("relation {ri} names a missing generator"))
            })?;
            let d = gen.degree + w.degree(p);
            if let Some(prev) = degree {
                if prev != d {
                    return Err(Error::Inconsistent(format!(
                        "relation {ri} is not homogeneous ({prev} vs {d})"
                    )));
                }
            }
            degree = Some(d);
            if d > cap {
                continue;
            }
            let v = vectors.entry(d).or_insert_with(|| vec![0; free.dim(d)]);
            // expand the word applied to the generator in the free module
            let nf = alg.normalize(w);
            for (t, c) in nf.terms() {
                if t.excess(p) > gen.degree as i64 {
                    continue;
                }
                let label = format!("{}{}", t.compact(p), gen.name);
                let col = free
                    .labels(d)
                    .iter()
                    .position(|l| *l == label)
                    .expect("normal form term is a free basis element");
                v[col] = p.add(v[col], p.mul(*coeff, c));
            }
        }
        for (d, v) in vectors {
            if v.iter().any(|&x| x != 0) {
                seeds[d as usize].push(v);
            }
        }
    }
    // Close the relation span under the acting generators, ascending.
    let mut rel_span: Vec<Subspace> =
        (0..=cap).map(|d| Subspace::new(p, free.dim(d))).collect();
    let ops = free.generator_ops();
    for d in 0..=cap {
        for g in &ops {
            let gd = g.degree(p);
            if gd > d {
                continue;
            }
            let src = d - gd;
            let images: Vec<Vec<u32>> = (0..rel_span[src as usize].dim())
                .map(|r| free.apply_gen(*g, src, &rel_span[src as usize].row(r).to_vec()))
                .collect();
            for img in images {
                rel_span[d as usize].insert(&img);
            }
        }
        for v in &seeds[d as usize] {
            rel_span[d as usize].insert(v);
        }
    }
    // Quotient degreewise.
    let mut out = GradedModule::new(p, cap);
    let mut reps: Vec<Vec<usize>> = Vec::with_capacity(cap as usize + 1); // nonpivot columns
    for d in 0..=cap {
        let nonpiv = rel_span[d as usize].nonpivots();
        for &col in &nonpiv {
            out.push_basis(d, free.labels(d)[col].clone());
        }
        reps.push(nonpiv);
    }
    for g in &ops {
        let gd = g.degree(p);
        for d in 0..=cap.saturating_sub(gd) {
            let (rows, cols) = (out.dim(d), out.dim(d + gd));
            if rows == 0 || cols == 0 {
                continue;
            }
            let mut mat = FpMatrix::zeros(p, rows, cols);
            for (r, &col) in reps[d as usize].iter().enumerate() {
                let mut e = vec![0u32; free.dim(d)];
                e[col] = 1;
                let img = free.apply_gen(*g, d, &e);
                let q = rel_span[(d + gd) as usize].quotient_coords(&img);
                for (cix, &val) in q.iter().enumerate() {
                    mat.set(r, cix, val);
                }
            }
            out.set_action(*g, d, mat);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::Prime;

    fn alg(p: u32) -> SteenrodAlgebra {
        SteenrodAlgebra::new(Prime::new(p).unwrap())
    }

    #[test]
    fn free_on_one_generator_mod2() {
        let a = alg(2);
        let m = free_unstable_module(
            &a,
            &[FreeSummand { name: "i".into(), degree: 1 }],
            16,
        );
        for d in 0..=16u32 {
            let expect = usize::from(matches!(d, 1 | 2 | 4 | 8 | 16));
            assert_eq!(m.dim(d), expect, "degree {d}");
        }
        assert_eq!(m.labels(4), &["Sq2Sq1i".to_string()]);
    }

    #[test]
    fn free_on_one_generator_mod3() {
        let a = alg(3);
        let m = free_unstable_module(
            &a,
            &[FreeSummand { name: "z".into(), degree: 1 }],
            20,
        );
        for d in 0..=20u32 {
            let expect = usize::from(matches!(d, 1 | 2 | 6 | 18));
            assert_eq!(m.dim(d), expect, "degree {d}");
        }
        assert_eq!(m.labels(6), &["P1bz".to_string()]);
        assert_eq!(m.labels(18), &["P3P1bz".to_string()]);
    }

    #[test]
    fn quotient_by_bockstein_kills_everything_above() {
        let a = alg(2);
        let pres = ModulePresentation {
            generators: vec![FreeSummand { name: "i".into(), degree: 1 }],
            relations: vec![vec![(
                1,
                OperationWord(vec![Letter::P(1)]),
                0,
            )]],
        };
        let m = realize(&a, &pres, 16).unwrap();
        assert_eq!(m.dim(1), 1);
        for d in 2..=16 {
            assert_eq!(m.dim(d), 0, "degree {d}");
        }
    }

    #[test]
    fn empty_relations_recover_the_free_module() {
        let a = alg(2);
        let pres = ModulePresentation {
            generators: vec![FreeSummand { name: "u".into(), degree: 2 }],
            relations: vec![],
        };
        let m = realize(&a, &pres, 10).unwrap();
        let f = free_unstable_module(&a, &[FreeSummand { name: "u".into(), degree: 2 }], 10);
        for d in 0..=10 {
            assert_eq!(m.dim(d), f.dim(d), "degree {d}");
        }
    }

    #[test]
    fn inhomogeneous_relation_is_rejected() {
        let a = alg(2);
        let pres = ModulePresentation {
            generators: vec![FreeSummand { name: "u".into(), degree: 1 }],
            relations: vec![vec![
                (1, OperationWord(vec![Letter::P(1)]), 0),
                (1, OperationWord(vec![Letter::P(2)]), 0),
            ]],
        };
        assert!(realize(&a, &pres, 8).is_err());
    }
}
