//! The acceptance gate. Each criterion prints one PASS/FAIL line; the test
//! fails if any criterion does. Run with `--nocapture` to watch the lines.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use aqh_core::aq::{aq_h0, aq_h1, les, les_check};
use aqh_core::em::{em_cohomology, CoefGroup, EMSpec};
use aqh_core::fp::Prime;
use aqh_core::hopf::{
    frobenius_image, hopf_quotient, subalgebra_by_powers, BorelMono, BorelPoly,
    BorelPresentation, GenKind,
};
use aqh_core::module::{fg_check, AlgebraGen, FgOptions};
use aqh_core::oracle::{
    all_words, candidate_classes, certified_family, chain_aq_homology, check_word_action,
    excess_slow, is_admissible_slow, standard_family,
};
use aqh_core::scenario;
use aqh_core::steenrod::{Letter, OperationWord, SteenrodAlgebra};
use aqh_core::unstable::f_basis;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

type Verdict = Result<String, String>;

fn prime(n: u32) -> Prime {
    Prime::new(n).unwrap()
}

fn pres(pn: u32, cap: u32, gens: &[(&str, u32, GenKind)]) -> BorelPresentation {
    let mut b = BorelPresentation::new(prime(pn), cap);
    for (name, deg, kind) in gens {
        b.add_gen(*name, *deg, *kind);
    }
    b
}

/// Explicit zero entries for every stored operation the window requires and
/// instability does not already pin down.
fn fill_missing_zero(b: &mut BorelPresentation) {
    let ops = b.generator_ops();
    for i in 0..b.gens.len() {
        let d = b.gens[i].degree;
        for &g in &ops {
            if d + g.degree(b.p) > b.cap || b.action.contains_key(&(g, i)) {
                continue;
            }
            if let AlgebraGen::PPow(j) = g {
                let t = b.p.get().pow(j);
                let tau = if b.p.is_two() { t } else { 2 * t };
                if tau >= d {
                    continue;
                }
            }
            b.set_action(g, i, BorelPoly::zero());
        }
    }
}

fn random_word(rng: &mut ChaCha8Rng, p: Prime, max_degree: u32) -> OperationWord {
    loop {
        let len = rng.gen_range(1..=5);
        let letters = (0..len)
            .map(|_| {
                if !p.is_two() && rng.gen_ratio(1, 4) {
                    Letter::B
                } else if p.is_two() {
                    Letter::P(rng.gen_range(1..=13))
                } else {
                    Letter::P(rng.gen_range(1..=8))
                }
            })
            .collect();
        let w = OperationWord(letters);
        let d = w.degree(p);
        if (1..=max_degree).contains(&d) {
            return w;
        }
    }
}

/// Criterion 1. Normal forms against actions: every word exhaustively in
/// low degrees on families certified to separate admissibles, then seeded
/// random words through the full degree budget, inside the time budget.
fn adem_oracle_suite() -> Verdict {
    let start = Instant::now();
    let mut checked = 0usize;
    for &(pn, exhaustive_to, class_cap, word_cap) in
        &[(2u32, 11u32, 14u32, 40u32), (3, 16, 18, 60)]
    {
        let p = prime(pn);
        let alg = SteenrodAlgebra::new(p);
        let candidates = candidate_classes(p, class_cap);
        for d in 1..=exhaustive_to {
            let family = certified_family(p, d, &candidates)
                .ok_or(format!("p={pn}: no separating family in degree {d}"))?;
            for w in all_words(p, d) {
                check_word_action(&alg, &w, &family).map_err(|e| format!("p={pn}: {e}"))?;
                checked += 1;
            }
        }
        let family = standard_family(p);
        let mut rng = ChaCha8Rng::seed_from_u64(7 + pn as u64);
        for _ in 0..1000 {
            let w = random_word(&mut rng, p, word_cap);
            check_word_action(&alg, &w, &family).map_err(|e| format!("p={pn}: {e}"))?;
            checked += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs > 120.0 {
        return Err(format!(
            "{checked} words verified but {secs:.0}s blows the two-minute budget"
        ));
    }
    Ok(format!(
        "{checked} words, degree budgets 40 (p=2) and 60 (p=3), zero mismatches in {secs:.1}s"
    ))
}

/// Criterion 2. F(1) at p = 2 through degree 16, against the enumeration
/// with the separately coded admissibility and excess filters.
fn f1_dimensions() -> Verdict {
    let p = prime(2);
    let alg = SteenrodAlgebra::new(p);
    let mut ones = Vec::new();
    for d in 1..=16u32 {
        let fast = f_basis(&alg, 1, d).len();
        let slow = all_words(p, d - 1)
            .into_iter()
            .filter(|w| is_admissible_slow(p, w) && excess_slow(p, w) <= 1)
            .count();
        if fast != slow {
            return Err(format!("degree {d}: f_basis {fast} vs enumeration {slow}"));
        }
        match fast {
            0 => {}
            1 => ones.push(d),
            n => return Err(format!("degree {d} has dimension {n}")),
        }
    }
    if ones != [1, 2, 4, 8, 16] {
        return Err(format!("dimension-1 degrees are {ones:?}"));
    }
    Ok("dimension 1 exactly in degrees {1,2,4,8,16}, matching the enumeration".into())
}

/// Criterion 3. The sphere scenario's series against independently computed
/// coefficients of (1+t^(2p+1))/(1-t^(2p)) at both primes.
fn sphere_series() -> Verdict {
    let out = scenario::run("sphere").map_err(|e| e.to_string())?;
    let primes = out.json["primes"].as_array().ok_or("missing primes array")?;
    if primes.len() != 2 {
        return Err(format!("expected both primes, got {}", primes.len()));
    }
    for entry in primes {
        let pn = entry["p"].as_u64().ok_or("missing p")? as u32;
        let m = 2 * pn;
        let series = entry["series"].as_array().ok_or("missing series")?;
        if series.len() != 41 {
            return Err(format!("p={pn}: series has {} entries", series.len()));
        }
        for (d, c) in series.iter().enumerate() {
            let d = d as u32;
            let want = u64::from(d % m == 0) + u64::from(d % m == 1 && d >= m + 1);
            if c.as_u64() != Some(want) {
                return Err(format!("p={pn}: coefficient {c} at degree {d}, closed form {want}"));
            }
        }
        if entry["closed_form_ok"] != json!(true) {
            return Err(format!("p={pn}: the scenario itself did not certify the closed form"));
        }
    }
    Ok("series equals (1+t^(2p+1))/(1-t^(2p)) through degree 40 at p=2 and p=3".into())
}

/// Criterion 4. The oddprimes scenario: quotient kinds, the two H1
/// generators, Q generated by i2 alone, exactly two even-part generators.
fn oddprimes_certificates() -> Verdict {
    let out = scenario::run("oddprimes").map_err(|e| e.to_string())?;
    let j = &out.json;
    if j["quotient_kinds_ok"] != json!(true) {
        return Err("a quotient generator is neither exterior nor height-p truncated".into());
    }
    let uncertain = j["quotient_generators"]
        .as_array()
        .ok_or("missing quotient_generators")?
        .iter()
        .filter(|g| g["certain"] != json!(true))
        .count();
    if uncertain > 0 {
        return Err(format!("{uncertain} quotient kinds are only best guesses"));
    }
    let h1 = &j["h1_generation"];
    if h1["ok"] != json!(true) || h1["chosen"] != json!([[6, "xi1(i2)"], [24, "xi1(bP1bi2)"]]) {
        return Err(format!("H1 certificate off: {h1}"));
    }
    if j["h1_generation_below_fails"] != json!(true) {
        return Err("a cut below the degree-24 class also certifies H1".into());
    }
    let q = &j["q_generation"];
    if q["ok"] != json!(true) || q["chosen"] != json!([[2, "i2"]]) {
        return Err(format!("Q certificate off: {q}"));
    }
    let even = &j["even_part_generation"];
    if even["ok"] != json!(true) || even["chosen"] != json!([[2, "i2"], [8, "bP1bi2"]]) {
        return Err(format!("even-part certificate off: {even}"));
    }
    if j["even_part_generation_below_fails"] != json!(true) {
        return Err("the even part certifies below its second generator".into());
    }
    Ok(
        "quotient kinds certain, H1 generated by the classes at 6 and 24, Q by i2, \
         even part by exactly two generators"
            .into(),
    )
}

/// Criterion 5. The henn scenario: every generator cut in 2..=64 must fail
/// with a nonempty witness list.
fn henn_cut_sweep() -> Verdict {
    let out = scenario::run("henn").map_err(|e| e.to_string())?;
    let cuts = out.json["cuts"].as_array().ok_or("missing cuts")?;
    let mut offending = Vec::new();
    for g in 2..=64u64 {
        let entry = cuts
            .iter()
            .find(|c| c["gen_cut"] == json!(g))
            .ok_or(format!("no record for cut {g}"))?;
        let certified = entry["ok"] == json!(true);
        let witnesses = entry["failure_degrees"].as_array().map_or(0, |a| a.len());
        if certified || witnesses == 0 {
            offending.push(g);
        }
    }
    if !offending.is_empty() {
        let required: Vec<u64> = out.json["required_generators"]
            .as_array()
            .map(|a| a.iter().filter_map(|e| e[0].as_u64()).collect())
            .unwrap_or_default();
        return Err(format!(
            "cut(s) {offending:?} certify generation through 66: the module is generated \
             in degrees {required:?}, all within cut 64, and the next generator only \
             appears at degree 128"
        ));
    }
    Ok("every cut in 2..=64 fails with failure-degree witnesses".into())
}

fn frobenius_les_pair(alg: &SteenrodAlgebra, b: &BorelPresentation) -> Result<(), String> {
    let (a, incl) = frobenius_image(alg, b).map_err(|e| e.to_string())?;
    let q = hopf_quotient(alg, b, &a, &incl).map_err(|e| e.to_string())?;
    let st = les(alg, b, &a, &incl, &q).map_err(|e| e.to_string())?;
    let rep = les_check(&st);
    if !rep.ok {
        return Err(format!("exactness failures {:?}", rep.failures));
    }
    Ok(())
}

fn random_shape(rng: &mut ChaCha8Rng, p: Prime) -> (u32, GenKind) {
    if p.is_two() {
        let kind = match rng.gen_range(0..3) {
            0 => GenKind::Polynomial,
            1 => GenKind::Truncated(1),
            _ => GenKind::Truncated(2),
        };
        (rng.gen_range(1..=6), kind)
    } else {
        match rng.gen_range(0..4) {
            0 => (2 * rng.gen_range(1..=4), GenKind::Polynomial),
            1 => (2 * rng.gen_range(1..=4), GenKind::Truncated(1)),
            2 => (2 * rng.gen_range(1..=3), GenKind::Truncated(2)),
            _ => (2 * rng.gen_range(1..=4) - 1, GenKind::Exterior),
        }
    }
}

/// Criterion 6. Six-term exactness over the fixed pairs and twenty seeded
/// random pairs.
fn les_suite() -> Verdict {
    let p3 = prime(3);
    let alg3 = SteenrodAlgebra::new(p3);
    let em = em_cohomology(&alg3, EMSpec { group: CoefGroup::Zp, n: 2 }, 50)
        .map_err(|e| e.to_string())?;
    frobenius_les_pair(&alg3, &em).map_err(|e| format!("K(Z/3,2) Frobenius pair: {e}"))?;
    let mut fixed = 1usize;

    for &(pn, deg) in &[(3u32, 2u32), (3, 4), (3, 6), (2, 2), (2, 4)] {
        let p = prime(pn);
        let alg = SteenrodAlgebra::new(p);
        let mut b = BorelPresentation::new(p, 30);
        b.add_gen("y", deg, GenKind::Polynomial);
        if pn == 3 && deg == 4 {
            // P1 y = y^2, forced up to sign by P1 P1 = 2 P2 on y
            b.set_action(
                AlgebraGen::PPow(0),
                0,
                BorelPoly::monomial(BorelMono::single(1, 0, 2)),
            );
        }
        fill_missing_zero(&mut b);
        b.validate().map_err(|e| format!("F_{pn}[y_{deg}]: {e}"))?;
        frobenius_les_pair(&alg, &b).map_err(|e| format!("F_{pn}[y_{deg}]: {e}"))?;
        fixed += 1;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE);
    let mut passed = 0usize;
    let mut attempts = 0usize;
    while passed < 20 {
        attempts += 1;
        if attempts > 400 {
            return Err(format!("only {passed} random pairs constructible in 400 draws"));
        }
        let pn = if rng.gen_bool(0.5) { 2 } else { 3 };
        let p = prime(pn);
        let alg = SteenrodAlgebra::new(p);
        let cap = rng.gen_range(16..=30);
        let ngens = rng.gen_range(1..=3usize);
        let special = pn == 3 && ngens >= 2 && rng.gen_bool(0.3);
        let mut shapes: Vec<(u32, GenKind)> = Vec::new();
        if special {
            shapes.push((1, GenKind::Exterior));
            shapes.push((2, GenKind::Polynomial));
        }
        while shapes.len() < ngens {
            shapes.push(random_shape(&mut rng, p));
        }
        let mut b = BorelPresentation::new(p, cap);
        for (k, (deg, kind)) in shapes.iter().enumerate() {
            b.add_gen(format!("g{k}"), *deg, *kind);
        }
        if special {
            // Bockstein sends the exterior class onto the polynomial one
            b.set_action(
                AlgebraGen::Bockstein,
                0,
                BorelPoly::monomial(BorelMono::single(b.gens.len(), 1, 1)),
            );
        }
        fill_missing_zero(&mut b);
        if b.validate().is_err() {
            continue;
        }
        let powers: Vec<u32> = (0..b.gens.len()).map(|_| rng.gen_range(0..=2)).collect();
        let Ok((a, incl)) = subalgebra_by_powers(&alg, &b, &powers) else {
            continue;
        };
        let Ok(q) = hopf_quotient(&alg, &b, &a, &incl) else {
            continue;
        };
        let tag = format!("random pair (p={pn}, cap={cap}, shapes {shapes:?}, powers {powers:?})");
        let st = les(&alg, &b, &a, &incl, &q).map_err(|e| format!("{tag}: {e}"))?;
        let rep = les_check(&st);
        if !rep.ok {
            return Err(format!("{tag}: exactness failures {:?}", rep.failures));
        }
        passed += 1;
    }
    Ok(format!(
        "{fixed} fixed pairs and {passed} seeded random pairs all exact ({attempts} draws)"
    ))
}

/// Criterion 7. Chain-level homology of the indecomposables complex against
/// the closed forms, with the H2 position vanishing.
fn chain_oracle_suite() -> Verdict {
    let cases: Vec<(BorelPresentation, u32)> = vec![
        (pres(2, 18, &[("x", 3, GenKind::Polynomial)]), 18),
        (pres(2, 16, &[("x", 2, GenKind::Truncated(2))]), 16),
        (
            pres(2, 10, &[("x", 1, GenKind::Polynomial), ("y", 3, GenKind::Truncated(1))]),
            10,
        ),
        (
            pres(
                2,
                10,
                &[
                    ("x", 1, GenKind::Truncated(1)),
                    ("y", 2, GenKind::Truncated(2)),
                    ("z", 3, GenKind::Polynomial),
                ],
            ),
            10,
        ),
        (pres(3, 14, &[("x", 2, GenKind::Truncated(1))]), 14),
        (
            pres(3, 12, &[("z", 3, GenKind::Exterior), ("x", 4, GenKind::Polynomial)]),
            12,
        ),
        (
            pres(3, 12, &[("x", 2, GenKind::Polynomial), ("z", 5, GenKind::Exterior)]),
            12,
        ),
        (pres(3, 20, &[("x", 2, GenKind::Truncated(2))]), 20),
        (
            pres(
                3,
                10,
                &[
                    ("z", 1, GenKind::Exterior),
                    ("w", 3, GenKind::Exterior),
                    ("y", 4, GenKind::Truncated(1)),
                ],
            ),
            10,
        ),
        (
            pres(2, 12, &[("x", 2, GenKind::Polynomial), ("y", 2, GenKind::Truncated(1))]),
            12,
        ),
    ];
    for (k, (b, through)) in cases.iter().enumerate() {
        let ch = chain_aq_homology(b, *through, true).map_err(|e| format!("case {k}: {e}"))?;
        let Some(h2) = &ch.h2 else {
            return Err(format!("case {k}: H2 position not computed"));
        };
        let n = *through as usize;
        let mut q0 = vec![0usize; n + 1];
        for g in &b.gens {
            if g.degree <= *through {
                q0[g.degree as usize] += 1;
            }
        }
        let mut q1 = vec![0usize; n + 1];
        for c in aq_h1(b) {
            if c.degree <= *through {
                q1[c.degree as usize] += 1;
            }
        }
        for d in 0..=n {
            if ch.h0[d] != q0[d] {
                return Err(format!("case {k} degree {d}: H0 {} vs closed form {}", ch.h0[d], q0[d]));
            }
            if ch.h1[d] != q1[d] {
                return Err(format!("case {k} degree {d}: H1 {} vs closed form {}", ch.h1[d], q1[d]));
            }
            if h2[d] != 0 {
                return Err(format!("case {k} degree {d}: H2 has dimension {}", h2[d]));
            }
        }
    }
    Ok("10 algebras: chain homology matches the closed forms and H2 vanishes".into())
}

/// Criterion 8. Every Frobenius image over the Eilenberg-MacLane library
/// certifies as finitely generated, with room below the window edge.
fn noetherian_spot_suite() -> Verdict {
    let mut worst = 0u32;
    for &pn in &[2u32, 3] {
        let p = prime(pn);
        let alg = SteenrodAlgebra::new(p);
        for n in [2u32, 3] {
            for (gname, group) in [
                ("Z/p", CoefGroup::Zp),
                ("Z", CoefGroup::Z),
                ("Z/p^2", CoefGroup::ZpR(2)),
                ("Z/p^inf", CoefGroup::Prufer),
            ] {
                let tag = format!("p={pn} n={n} {gname}");
                let b = em_cohomology(&alg, EMSpec { group, n }, 40)
                    .map_err(|e| format!("{tag}: {e}"))?;
                let (a, _) = frobenius_image(&alg, &b).map_err(|e| format!("{tag}: {e}"))?;
                let qa = aq_h0(&alg, &a).map_err(|e| format!("{tag}: {e}"))?;
                let full = fg_check(&qa, FgOptions { gen_cut: 40, powers_only: false });
                if !full.ok {
                    return Err(format!("{tag}: QA not generated within the window"));
                }
                let g = full.chosen.iter().map(|&(d, _)| d).max().unwrap_or(0);
                if g >= 40 {
                    return Err(format!("{tag}: generators run to the window edge"));
                }
                let tight = fg_check(&qa, FgOptions { gen_cut: g, powers_only: false });
                if !tight.ok {
                    return Err(format!("{tag}: cut {g} does not certify"));
                }
                worst = worst.max(g);
            }
        }
    }
    Ok(format!(
        "16 Frobenius images certified through degree 40; generator cuts at most {worst}"
    ))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("adem oracle suite", adem_oracle_suite),
        ("F(1) dimensions", f1_dimensions),
        ("sphere series", sphere_series),
        ("oddprimes certificates", oddprimes_certificates),
        ("henn cut sweep", henn_cut_sweep),
        ("six-term exactness suite", les_suite),
        ("chain-level oracle", chain_oracle_suite),
        ("noetherian spot-suite", noetherian_spot_suite),
    ];
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(|| check())).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Err(format!("panic: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {}: PASS - {name}: {detail} [{secs:.1}s]", k + 1),
            Err(reason) => {
                println!("criterion {}: FAIL - {name}: {reason} [{secs:.1}s]", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed acceptance criteria: {failed:?}");
}
