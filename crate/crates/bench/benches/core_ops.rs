use criterion::{black_box, criterion_group, criterion_main, Criterion};

use aqh_core::aq::aq_h0;
use aqh_core::em::{em_cohomology, CoefGroup, EMSpec};
use aqh_core::fp::Prime;
use aqh_core::hopf::frobenius_image;
use aqh_core::module::{fg_check, FgOptions};
use aqh_core::steenrod::{Letter, OperationWord, SteenrodAlgebra};
use aqh_core::unstable::{free_unstable_module, FreeSummand};

fn bench_adem_normalize(c: &mut Criterion) {
    let mut g = c.benchmark_group("adem_normalize");
    for (label, pn, letters) in [
        ("sq_chain_deg40", 2u32, vec![Letter::P(13), Letter::P(11), Letter::P(9), Letter::P(7)]),
        (
            "odd_with_bocksteins_deg60",
            3,
            vec![Letter::P(7), Letter::B, Letter::P(5), Letter::B, Letter::P(2)],
        ),
    ] {
        let p = Prime::new(pn).unwrap();
        let w = OperationWord(letters);
        g.bench_function(label, |bench| {
            bench.iter(|| {
                // a fresh algebra each pass so the relation cache cannot hide the work
                let alg = SteenrodAlgebra::new(p);
                black_box(alg.normalize(black_box(&w)))
            })
        });
    }
    g.finish();
}

fn bench_em_generation(c: &mut Criterion) {
    let mut g = c.benchmark_group("em_generation");
    g.sample_size(20);
    for (label, pn, n, cap) in [("k_z2_3_cap40", 2u32, 3u32, 40u32), ("k_z3_2_cap50", 3, 2, 50)] {
        let p = Prime::new(pn).unwrap();
        let alg = SteenrodAlgebra::new(p);
        g.bench_function(label, |bench| {
            bench.iter(|| {
                let b = em_cohomology(&alg, EMSpec { group: CoefGroup::Z, n }, cap).unwrap();
                black_box(b.gens.len())
            })
        });
    }
    g.finish();
}

fn bench_fg_span_closure(c: &mut Criterion) {
    let mut g = c.benchmark_group("fg_span_closure");
    g.sample_size(20);

    // free module on two generators, certified from its generator degrees
    let p2 = Prime::new(2).unwrap();
    let alg2 = SteenrodAlgebra::new(p2);
    let free = free_unstable_module(
        &alg2,
        &[
            FreeSummand { name: "a".into(), degree: 2 },
            FreeSummand { name: "b".into(), degree: 5 },
        ],
        40,
    );
    g.bench_function("free_two_gens_cap40", |bench| {
        bench.iter(|| black_box(fg_check(&free, FgOptions { gen_cut: 5, powers_only: false })))
    });

    // indecomposables of a Frobenius image out of the EM library
    let p3 = Prime::new(3).unwrap();
    let alg3 = SteenrodAlgebra::new(p3);
    let b = em_cohomology(&alg3, EMSpec { group: CoefGroup::Zp, n: 2 }, 40).unwrap();
    let (a, _) = frobenius_image(&alg3, &b).unwrap();
    let qa = aq_h0(&alg3, &a).unwrap();
    g.bench_function("frobenius_q_cap40", |bench| {
        bench.iter(|| black_box(fg_check(&qa, FgOptions { gen_cut: 24, powers_only: false })))
    });
    g.finish();
}

criterion_group!(benches, bench_adem_normalize, bench_em_generation, bench_fg_span_closure);
criterion_main!(benches);
