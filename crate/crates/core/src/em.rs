//! Mod-p cohomology of Eilenberg-MacLane spaces as presented algebras.
//!
//! For a cyclic-ish coefficient group and a base degree n, the cohomology is
//! free graded-commutative on classes `w i_n` where `w` runs over admissible
//! words with excess below n, together with the excess-equals-n words that
//! start with the Bockstein. Words of excess exactly n with a leading power
//! operation are p-th powers of shorter classes and fold into the algebra
//! structure instead of generating.

use crate::fp::Prime;
use crate::hopf::{BorelMono, BorelPoly, BorelPresentation, GenKind};
use crate::module::AlgebraGen;
use crate::steenrod::{Letter, OperationWord, SteenrodAlgebra, SteenrodElement};
use crate::{Error, Result};
use std::collections::HashMap;

/// Coefficient group of the space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefGroup {
    /// Z/p for the ambient prime.
    Zp,
    /// The integers.
    Z,
    /// Z/p^r with r >= 2.
    ZpR(u32),
    /// The Prufer group Z/p^infinity.
    Prufer,
}

#[derive(Debug, Clone, Copy)]
pub struct EMSpec {
    pub group: CoefGroup,
    pub n: u32,
}

/// One polynomial-generator tower: a base class plus the word rule that
/// selects which admissible words survive on it.
struct Tower {
    base_name: String,
    base_degree: u32,
    /// Words ending in the Bockstein die on integral classes.
    allow_trailing_b: bool,
}

pub fn em_cohomology(
    alg: &SteenrodAlgebra,
    spec: EMSpec,
    cap: u32,
) -> Result<BorelPresentation> {
    let p = alg.prime();
    let (group, n) = match spec.group {
        CoefGroup::Prufer => (CoefGroup::Z, spec.n + 1),
        g => (g, spec.n),
    };
    if n == 0 {
        return Err(Error::Unsupported(
            "base degree 0 is not a space-level computation".into(),
        ));
    }
    if let CoefGroup::ZpR(r) = group {
        if r < 2 {
            return Err(Error::Inconsistent(
                "use the plain Z/p variant for exponent 1".into(),
            ));
        }
    }
    // The circle carries no operations worth presenting; handle it directly.
    if group == CoefGroup::Z && n == 1 {
        let mut out = BorelPresentation::new(p, cap);
        let kind = if p.is_two() { GenKind::Truncated(1) } else { GenKind::Exterior };
        let g = out.add_gen("i1", 1, kind);
        if !p.is_two() && 2 <= cap {
            out.set_action(AlgebraGen::Bockstein, g, BorelPoly::zero());
        }
        out.validate()?;
        return Ok(out);
    }
    let towers: Vec<Tower> = match group {
        CoefGroup::Zp => vec![Tower {
            base_name: format!("i{n}"),
            base_degree: n,
            allow_trailing_b: true,
        }],
        CoefGroup::Z => vec![Tower {
            base_name: format!("i{n}"),
            base_degree: n,
            allow_trailing_b: false,
        }],
        CoefGroup::ZpR(_) => vec![
            Tower {
                base_name: format!("i{n}"),
                base_degree: n,
                allow_trailing_b: false,
            },
            Tower {
                base_name: format!("k{}", n + 1),
                base_degree: n + 1,
                allow_trailing_b: false,
            },
        ],
        CoefGroup::Prufer => unreachable!(),
    };

    let mut out = BorelPresentation::new(p, cap);
    // (tower, word) -> generator index, for resolving operation values
    let mut lookup: HashMap<(usize, OperationWord), usize> = HashMap::new();
    let mut gen_tower: Vec<usize> = Vec::new();
    let mut gen_word: Vec<OperationWord> = Vec::new();
    for (ti, tower) in towers.iter().enumerate() {
        if tower.base_degree > cap {
            continue;
        }
        for wd in 0..=(cap - tower.base_degree) {
            for w in alg.admissible_basis(wd) {
                if !word_generates(p, &w, tower) {
                    continue;
                }
                let degree = tower.base_degree + wd;
                let name = format!("{}{}", w.compact(p), tower.base_name);
                let kind = if !p.is_two() && degree % 2 == 1 {
                    GenKind::Exterior
                } else {
                    GenKind::Polynomial
                };
                let gi = out.add_gen(name, degree, kind);
                lookup.insert((ti, w.clone()), gi);
                gen_tower.push(ti);
                gen_word.push(w);
            }
        }
    }

    // Action tables: compose, normalize, then resolve each admissible term
    // as zero, a generator, or a p-power of a generator.
    let n_gens = out.gens.len();
    let mut entries = Vec::new();
    for gi in 0..n_gens {
        let ti = gen_tower[gi];
        let tower = &towers[ti];
        let w_elt = SteenrodElement::monomial(p, gen_word[gi].clone());
        for op in out.generator_ops() {
            if out.gens[gi].degree + op.degree(p) > cap {
                continue;
            }
            let letter = match op {
                AlgebraGen::Bockstein => Letter::B,
                AlgebraGen::PPow(j) => Letter::P(p.get().pow(j)),
            };
            let op_elt = SteenrodElement::monomial(p, OperationWord::single(letter));
            let composite = alg.compose(&op_elt, &w_elt);
            let mut value = BorelPoly::zero();
            for (u, c) in composite.terms() {
                let Some((target, e)) = resolve(p, u, tower, ti, &lookup) else {
                    continue;
                };
                let m = BorelMono::single(n_gens, target, 1);
                if let Some(pm) = out.mono_pow(&m, p.get().pow(e)) {
                    value.add_term(p, pm, c);
                }
            }
            entries.push((op, gi, value));
        }
    }
    for (op, gi, value) in entries {
        out.set_action(op, gi, value);
    }
    out.validate()?;
    Ok(out)
}

/// The Bockstein letter: `b` at odd primes, `Sq1` at p = 2.
fn ends_in_bockstein(p: Prime, w: &OperationWord) -> bool {
    match w.0.last() {
        Some(Letter::B) => true,
        Some(Letter::P(1)) => p.is_two(),
        _ => false,
    }
}

fn word_generates(p: Prime, w: &OperationWord, tower: &Tower) -> bool {
    if !tower.allow_trailing_b && ends_in_bockstein(p, w) {
        return false;
    }
    let e = w.excess(p);
    let n = tower.base_degree as i64;
    e < n || (e == n && w.0.first() == Some(&Letter::B))
}

/// Express an admissible word acting on the tower's base class: `None` for
/// zero, otherwise a generator index and the exponent e with the class equal
/// to that generator to the p^e.
fn resolve(
    p: Prime,
    u: &OperationWord,
    tower: &Tower,
    ti: usize,
    lookup: &HashMap<(usize, OperationWord), usize>,
) -> Option<(usize, u32)> {
    if !tower.allow_trailing_b && ends_in_bockstein(p, u) {
        return None;
    }
    if let Some(&g) = lookup.get(&(ti, u.clone())) {
        return Some((g, 0));
    }
    let n = tower.base_degree as i64;
    let e = u.excess(p);
    if e > n {
        return None;
    }
    if e == n && u.0.first() != Some(&Letter::B) {
        // top instability: strip the leading power operation, the class is
        // the p-th power of what remains
        let rest = OperationWord(u.0[1..].to_vec());
        return resolve(p, &rest, tower, ti, lookup).map(|(g, e)| (g, e + 1));
    }
    // Words of excess below n (or with a leading Bockstein at excess n) that
    // survive the trailing rule are generators; we only get here when the
    // lookup is restricted to a smaller window than the caller's degree.
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(p: u32) -> SteenrodAlgebra {
        SteenrodAlgebra::new(Prime::new(p).unwrap())
    }

    fn gens_of(b: &BorelPresentation) -> Vec<(String, u32, GenKind)> {
        b.gens.iter().map(|g| (g.name.clone(), g.degree, g.kind)).collect()
    }

    #[test]
    fn mod3_degree_two_base() {
        let alg = setup(3);
        let b = em_cohomology(&alg, EMSpec { group: CoefGroup::Zp, n: 2 }, 60).unwrap();
        let gens = gens_of(&b);
        let expect: Vec<(&str, u32, GenKind)> = vec![
            ("i2", 2, GenKind::Polynomial),
            ("bi2", 3, GenKind::Exterior),
            ("P1bi2", 7, GenKind::Exterior),
            ("bP1bi2", 8, GenKind::Polynomial),
            ("P3P1bi2", 19, GenKind::Exterior),
            ("bP3P1bi2", 20, GenKind::Polynomial),
            ("P9P3P1bi2", 55, GenKind::Exterior),
            ("bP9P3P1bi2", 56, GenKind::Polynomial),
        ];
        assert_eq!(
            gens,
            expect
                .iter()
                .map(|(s, d, k)| (s.to_string(), *d, *k))
                .collect::<Vec<_>>()
        );
        // b(i2) = bi2, P1(bi2) = P1bi2, P3(bP1bi2) = bP3P1bi2
        let b_i2 = b.action.get(&(AlgebraGen::Bockstein, 0)).unwrap();
        assert_eq!(b.display_poly(b_i2), "bi2");
        let p1_bi2 = b.action.get(&(AlgebraGen::PPow(0), 1)).unwrap();
        assert_eq!(b.display_poly(p1_bi2), "P1bi2");
        let p3_bp1bi2 = b.action.get(&(AlgebraGen::PPow(1), 3)).unwrap();
        assert_eq!(b.display_poly(p3_bp1bi2), "bP3P1bi2");
    }

    #[test]
    fn integral_degree_three_base_mod2() {
        let alg = setup(2);
        let b = em_cohomology(&alg, EMSpec { group: CoefGroup::Z, n: 3 }, 40).unwrap();
        let degs: Vec<u32> = b.gens.iter().map(|g| g.degree).collect();
        assert_eq!(degs, vec![3, 5, 9, 17, 33]);
        assert!(b.gens.iter().all(|g| g.kind == GenKind::Polynomial));
        let series = b.poincare_series(12);
        assert_eq!(series[..13], [1, 0, 0, 1, 0, 1, 1, 0, 1, 2, 1, 1, 2]);
        // Sq1 i5 = Sq1 Sq2 i3 = Sq3 i3 = i3^2
        let i5 = b.gen_index("Sq2i3").unwrap();
        let v = b.action.get(&(AlgebraGen::PPow(0), i5)).unwrap();
        assert_eq!(b.display_poly(v), "i3^2");
        // Sq2 i3 = i5, Sq4 i5 = i9
        let v = b.action.get(&(AlgebraGen::PPow(1), 0)).unwrap();
        assert_eq!(b.display_poly(v), "Sq2i3");
        let v = b.action.get(&(AlgebraGen::PPow(2), i5)).unwrap();
        assert_eq!(b.display_poly(v), "Sq4Sq2i3");
    }

    #[test]
    fn integral_degree_three_base_mod3() {
        let alg = setup(3);
        let b = em_cohomology(&alg, EMSpec { group: CoefGroup::Z, n: 3 }, 60).unwrap();
        let gens = gens_of(&b);
        let expect: Vec<(&str, u32, GenKind)> = vec![
            ("i3", 3, GenKind::Exterior),
            ("P1i3", 7, GenKind::Exterior),
            ("bP1i3", 8, GenKind::Polynomial),
            ("P3P1i3", 19, GenKind::Exterior),
            ("bP3P1i3", 20, GenKind::Polynomial),
            ("P9P3P1i3", 55, GenKind::Exterior),
            ("bP9P3P1i3", 56, GenKind::Polynomial),
        ];
        assert_eq!(
            gens,
            expect
                .iter()
                .map(|(s, d, k)| (s.to_string(), *d, *k))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn small_circle_like_cases() {
        let alg2 = setup(2);
        let rp = em_cohomology(&alg2, EMSpec { group: CoefGroup::Zp, n: 1 }, 20).unwrap();
        assert_eq!(gens_of(&rp), vec![("i1".to_string(), 1, GenKind::Polynomial)]);
        assert!(rp.poincare_series(20).iter().all(|&c| c == 1));
        let s1 = em_cohomology(&alg2, EMSpec { group: CoefGroup::Z, n: 1 }, 20).unwrap();
        assert_eq!(gens_of(&s1), vec![("i1".to_string(), 1, GenKind::Truncated(1))]);
        let alg3 = setup(3);
        let lens = em_cohomology(&alg3, EMSpec { group: CoefGroup::Zp, n: 1 }, 20).unwrap();
        assert_eq!(
            gens_of(&lens),
            vec![
                ("i1".to_string(), 1, GenKind::Exterior),
                ("bi1".to_string(), 2, GenKind::Polynomial),
            ]
        );
        assert!(lens.poincare_series(20).iter().all(|&c| c == 1));
    }

    #[test]
    fn mod_four_splits_into_two_integral_towers() {
        let alg = setup(2);
        let b = em_cohomology(&alg, EMSpec { group: CoefGroup::ZpR(2), n: 2 }, 34).unwrap();
        let degs: Vec<(String, u32)> =
            b.gens.iter().map(|g| (g.name.clone(), g.degree)).collect();
        assert_eq!(
            degs,
            vec![
                ("i2".to_string(), 2),
                ("k3".to_string(), 3),
                ("Sq2k3".to_string(), 5),
                ("Sq4Sq2k3".to_string(), 9),
                ("Sq8Sq4Sq2k3".to_string(), 17),
                ("Sq16Sq8Sq4Sq2k3".to_string(), 33),
            ]
        );
        // the first Bockstein vanishes on both towers
        let k3 = b.gen_index("k3").unwrap();
        let v = b.action.get(&(AlgebraGen::PPow(0), k3)).unwrap();
        assert!(v.is_zero());
        // and the Prufer group in one degree lower gives the same answer
        let pruefer =
            em_cohomology(&alg, EMSpec { group: CoefGroup::Prufer, n: 2 }, 34).unwrap();
        let z3 = em_cohomology(&alg, EMSpec { group: CoefGroup::Z, n: 3 }, 34).unwrap();
        assert_eq!(gens_of(&pruefer), gens_of(&z3));
    }

    /// The composite of two table entries has to agree with the table entry
    /// of the Adem normal form of the composite operation; this exercises
    /// the folding logic against the rewriter.
    #[test]
    fn tables_respect_adem_relations() {
        for (p, cap) in [(2u32, 34u32), (3, 40)] {
            let alg = setup(p);
            let pr = Prime::new(p).unwrap();
            let b = em_cohomology(&alg, EMSpec { group: CoefGroup::Zp, n: 2 }, cap).unwrap();
            let pairs: Vec<(Letter, Letter)> = if p == 2 {
                vec![
                    (Letter::P(1), Letter::P(1)),
                    (Letter::P(1), Letter::P(2)),
                    (Letter::P(2), Letter::P(2)),
                    (Letter::P(2), Letter::P(4)),
                    (Letter::P(4), Letter::P(4)),
                ]
            } else {
                vec![
                    (Letter::P(1), Letter::P(1)),
                    (Letter::P(1), Letter::B),
                    (Letter::P(1), Letter::P(3)),
                    (Letter::P(3), Letter::P(1)),
                    (Letter::B, Letter::P(1)),
                ]
            };
            for gi in 0..b.gens.len() {
                let x = BorelPoly::monomial(BorelMono::single(b.gens.len(), gi, 1));
                for (l1, l2) in &pairs {
                    let w = OperationWord(vec![*l1, *l2]);
                    if b.gens[gi].degree + w.degree(pr) > cap {
                        continue;
                    }
                    let sequential = {
                        let step = b.apply_letter(&alg, *l2, &x).unwrap();
                        b.apply_letter(&alg, *l1, &step).unwrap()
                    };
                    let mut via_normal_form = BorelPoly::zero();
                    for (u, c) in alg.normalize(&w).terms() {
                        let part = b.apply_word(&alg, u, &x).unwrap();
                        via_normal_form.add_scaled(pr, &part, c);
                    }
                    assert_eq!(
                        sequential,
                        via_normal_form,
                        "p={p} gen={} word={}",
                        b.gens[gi].name,
                        w.display(pr)
                    );
                }
            }
        }
    }
}
