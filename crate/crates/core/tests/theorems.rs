use gwgames::fixedpoint::{solve_outcomes, IterOptions};
use gwgames::model::random::{random_poisson_spec, random_table_spec, RandomSpecShape};
use gwgames::model::{tv_distance, ColorSet, OffspringLaw};
use gwgames::theorems::{
    check_part1, check_part2, check_part3, eew_esl_equivalence, pgf_perturbation_bound, spectral_radius,
    spectral_radius_2x2, survival_criterion, Verdict, DEFAULT_ENUMERATION_CAP, MARGIN_TOL,
};
use gwgames::ModelSpec;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sweep_specs(poisson: bool, n: u64) -> impl Iterator<Item = ModelSpec> {
    let shape = RandomSpecShape::default();
    (0..n).map(move |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if poisson {
            random_poisson_spec(&mut rng, &shape)
        } else {
            random_table_spec(&mut rng, &shape)
        }
    })
}

#[test]
fn comparison_inequalities_on_random_specs() {
    for poisson in [false, true] {
        for (i, spec) in sweep_specs(poisson, 100).enumerate() {
            let t = solve_outcomes(&spec, IterOptions::default()).unwrap();
            if !t.converged() {
                continue;
            }
            for report in [check_part1(&spec, &t), check_part2(&spec, &t), check_part3(&spec, &t)] {
                let bad: Vec<_> = report.failures().collect();
                assert!(bad.is_empty(), "poisson={poisson} spec {i}: {bad:?}");
                assert!(report.min_margin() >= -MARGIN_TOL);
            }
        }
    }
}

/// The criterion only reaches colors that lead into a supercritical block;
/// elsewhere Escaper can be stuck or forced into a surely lost position.
#[test]
fn survival_criterion_implies_escape_where_supported() {
    let shape = RandomSpecShape { max_count: 4, max_mean: 3.0, ..RandomSpecShape::default() };
    let mut found = 0;
    let mut seed = 0;
    while found < 50 && seed < 20_000 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        seed += 1;
        let spec = if rng.random::<bool>() {
            random_table_spec(&mut rng, &shape)
        } else {
            random_poisson_spec(&mut rng, &shape)
        };
        let c = survival_criterion(&spec, DEFAULT_ENUMERATION_CAP).unwrap();
        if c.rho.value < 1.2 {
            continue;
        }
        found += 1;
        let t = solve_outcomes(&spec, IterOptions::default()).unwrap();
        assert!(c.supported.iter().any(|&s| s));
        for (j, _) in c.supported.iter().enumerate().filter(|(_, &s)| s) {
            let v = t.eew()[j];
            assert!(v > 10.0 * IterOptions::DEFAULT_TOL, "seed {}: rho {} eew_{j} {v}", seed - 1, c.rho.value);
        }
    }
    assert_eq!(found, 50);
}

#[test]
fn escape_equivalence_when_nobody_is_surely_stuck() {
    for spec in sweep_specs(false, 300).chain(sweep_specs(true, 300)) {
        let t = solve_outcomes(&spec, IterOptions::default()).unwrap();
        let r = eew_esl_equivalence(&spec, &t);
        assert_ne!(r.strengthened, Verdict::Fail, "{r:?}");
        if r.verdict == Verdict::Fail {
            // Escaper is surely stuck from some color.
            let (_, beta) = spec.alpha_beta();
            assert!(beta.as_slice().iter().any(|&b| b >= 1.0 - 1e-12), "{r:?}");
        }
    }
}

#[test]
fn spectral_radius_matches_dense_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let n = rng.random_range(1..=5);
        let a: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| if rng.random::<f64>() < 0.4 { 0.0 } else { 3.0 * rng.random::<f64>() })
                    .collect()
            })
            .collect();
        let dense = DMatrix::from_fn(n, n, |i, j| a[i][j]);
        let oracle = dense.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max);
        let r = spectral_radius(&a, 1e-12);
        assert!((r.value - oracle).abs() <= 1e-8 * oracle.max(1.0), "{a:?}: {} vs {oracle}", r.value);
        assert!(r.lower <= oracle + 1e-9 && oracle <= r.upper + 1e-9);
        if n == 2 {
            assert!((spectral_radius_2x2(&a) - r.value).abs() <= 1e-9);
        }
    }
}

#[test]
fn pgf_perturbation_bound_on_random_pairs() {
    let shape = RandomSpecShape::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let m = 3;
        let chi = gwgames::model::random::random_table_law(&mut rng, m, shape.max_support, shape.max_count);
        let eta = gwgames::model::random::random_table_law(&mut rng, m, shape.max_support, shape.max_count);
        let set = gwgames::model::random::random_proper_subset(&mut rng, m);
        let x: Vec<f64> = (0..m).map(|_| rng.random()).collect();
        let y: Vec<f64> = (0..m).map(|_| rng.random()).collect();
        let b = pgf_perturbation_bound(&chi, &eta, set, &x, &y).unwrap();
        assert!(b.holds(1e-9), "{b:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn same_law_bound_is_lipschitz(means in prop::collection::vec(0.0f64..3.0, 2), x in 0.0f64..1.0, y in 0.0f64..1.0) {
        let law = OffspringLaw::poisson(means).unwrap();
        prop_assert_eq!(tv_distance(&law, &law).unwrap().value, 0.0);
        let b = pgf_perturbation_bound(&law, &law, ColorSet::full(2), &[x, x], &[y, y]).unwrap();
        prop_assert!(b.holds(1e-9));
    }
}
