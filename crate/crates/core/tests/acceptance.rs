//! Acceptance criteria, one PASS/FAIL line each with runtime and tolerance.
//!
//! A criterion listed in `KNOWN_FAILURES` is still run and printed as FAIL;
//! it only stops counting against the exit status. Should it start passing,
//! the run fails so the list gets updated.

mod common;

use std::time::{Duration, Instant};

use common::{enumerable_depth, tree_enumeration, ConfigurationOracle};
use gwgames::casestudies::{
    binary_verdict, poisson_report, poisson_scalar_fixed_points, BinaryParams, PoissonParams, DEFAULT_GRID,
};
use gwgames::fixedpoint::{solve_outcomes, truncated_values, FirstMover, GameKind, IterOptions};
use gwgames::model::random::{
    random_poisson_spec, random_proper_subset, random_table_law, random_table_spec, RandomSpecShape,
};
use gwgames::simulate::{binomial_se, monte_carlo_all, McOptions};
use gwgames::theorems::{
    check_part1, check_part2, check_part3, continuity_sweep, pgf_perturbation_bound, survival_criterion, Verdict,
    DEFAULT_ENUMERATION_CAP, MARGIN_TOL, SWEEP_EPSILONS,
};
use gwgames::ModelSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The literal survival claim has counterexamples; see the decisions ledger.
const KNOWN_FAILURES: &[usize] = &[7];

struct Outcome {
    pass: bool,
    tolerance: &'static str,
    detail: String,
}

struct Criterion {
    id: usize,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn spec_from(seed: u64, poisson: bool, shape: &RandomSpecShape) -> ModelSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if poisson {
        random_poisson_spec(&mut rng, shape)
    } else {
        random_table_spec(&mut rng, shape)
    }
}

fn binary_grid() -> Outcome {
    // Splits of the mass left after the mixed pair among (none, two blue, two red).
    const SPLITS: [[f64; 3]; 5] = [[1.0, 1.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [2.0, 1.0, 0.0]];
    let row = |br: f64, split: [f64; 3]| {
        let total: f64 = split.iter().sum();
        let rest = 1.0 - br;
        [rest * split[0] / total, rest * split[1] / total, rest * split[2] / total, br]
    };
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for i in 0..10 {
        for k in 0..20 {
            let pbr = 0.95 * i as f64 / 9.0;
            let qbr = 0.95 * k as f64 / 19.0;
            let blue = row(pbr, SPLITS[(i + k) % 5]);
            // Red mirrors blue: (none, two red, two blue, mixed).
            let r = row(qbr, SPLITS[(2 * i + 3 * k) % 5]);
            let params = match BinaryParams::new(blue, [r[0], r[2], r[1], r[3]]).and_then(|p| binary_verdict(&p)) {
                Ok(v) => v,
                Err(e) => return fail("1e-6", format!("pbr={pbr} qbr={qbr}: {e}")),
            };
            worst = worst.max(params.max_deviation);
            count += 1;
        }
    }
    let mixed = BinaryParams::new([0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 0.0, 1.0]).and_then(|p| binary_verdict(&p));
    let mixed_ok = mixed.as_ref().is_ok_and(|v| v.draw == 1 && v.max_deviation <= 1e-9);
    Outcome {
        pass: worst <= 1e-6 && mixed_ok,
        tolerance: "1e-6 off the mixed pair, 1e-9 on it",
        detail: format!("{count} grid points, largest draw or escape {worst:.1e}; mixed pair all 1: {mixed_ok}"),
    }
}

fn fail(tolerance: &'static str, detail: String) -> Outcome {
    Outcome { pass: false, tolerance, detail }
}

fn poisson_small() -> Outcome {
    let params = PoissonParams::new(2.0, 0.5, 0.5).unwrap();
    let r = match poisson_report(&params, DEFAULT_GRID) {
        Ok(r) => r,
        Err(e) => return fail("1e-9", e.to_string()),
    };
    let scalar = r.nd_1b();
    let vector = r.outcomes.normal(FirstMover::PlayerOne).draw[0];
    Outcome {
        pass: scalar <= 1e-9 && vector <= 1e-9 && r.conditions.cond13,
        tolerance: "1e-9",
        detail: format!("nd_1b scalar {scalar:.1e}, vector {vector:.1e}, single-root bound {}", r.conditions.cond13),
    }
}

fn poisson_large() -> Outcome {
    let nd = |lambda: f64| {
        poisson_scalar_fixed_points(&PoissonParams::new(lambda, 0.5, 0.5).unwrap(), DEFAULT_GRID).map(|s| s.draw())
    };
    let sweep: Result<Vec<f64>, _> = [5.0, 10.0, 20.0, 40.0, 80.0].into_iter().map(nd).collect();
    let (at50, sweep) = match (nd(50.0), sweep) {
        (Ok(a), Ok(s)) => (a, s),
        (Err(e), _) | (_, Err(e)) => return fail("1e-12", e.to_string()),
    };
    let monotone = sweep.windows(2).all(|w| w[0] <= w[1] + 1e-12);
    let shown: Vec<String> = sweep.iter().map(|d| format!("{d:.4}")).collect();
    Outcome {
        pass: at50 >= 0.9 && monotone,
        tolerance: "monotone within 1e-12",
        detail: format!("nd_1b(50) = {at50:.6}; nd_1b over 5..80: [{}]", shown.join(", ")),
    }
}

fn oracle_equivalence() -> Outcome {
    const TOL: f64 = 1e-12;
    let shape = RandomSpecShape::default();
    let mut worst: f64 = 0.0;
    let mut literal_depths = Vec::new();
    for seed in 0..20 {
        let spec = spec_from(1000 + seed, false, &shape);
        let t = truncated_values(&spec, 5);
        let literal = enumerable_depth(&spec, 5, 20_000.0);
        let lt = truncated_values(&spec, literal);
        literal_depths.push(literal);
        for kind in GameKind::ALL {
            let mut oracle = ConfigurationOracle::new(&spec, kind);
            for mover in FirstMover::ALL {
                let (win, lose) = t.win_lose(kind, mover);
                let (lwin, llose) = lt.win_lose(kind, mover);
                for c in 0..spec.num_colors() {
                    let [w, l, _] = oracle.law(c, 5, mover);
                    worst = worst.max((w - win[c]).abs()).max((l - lose[c]).abs());
                    let [w, l, _] = tree_enumeration(&spec, kind, mover, c, literal);
                    worst = worst.max((w - lwin[c]).abs()).max((l - llose[c]).abs());
                }
            }
        }
    }
    let full = literal_depths.iter().filter(|&&d| d == 5).count();
    Outcome {
        pass: worst <= TOL,
        tolerance: "1e-12",
        detail: format!(
            "largest gap {worst:.1e}; child labelings at depth 5 on 20 specs, whole trees at depth 5 on {full} \
             and at depths {:?} on the rest",
            literal_depths.iter().filter(|&&d| d < 5).collect::<Vec<_>>()
        ),
    }
}

fn monte_carlo_consistency() -> Outcome {
    const DEPTH: usize = 20;
    const SAMPLES: u64 = 100_000;
    // Small trees whose outcomes are genuinely random, chosen before any
    // sampling.
    let random_outcomes = |spec: &ModelSpec| {
        let t = truncated_values(spec, DEPTH);
        let values = [&t.nw[0], &t.nl[0], &t.mw[0], &t.ml[0], &t.nw[1], &t.nl[1], &t.mw[1], &t.ml[1], &t.esw, &t.eel];
        values.iter().filter(|v| (0.02..0.98).contains(&v[0])).count() >= 4
    };
    let specs: Vec<ModelSpec> = (0u64..)
        .map(|s| spec_from(2000 + s, false, &RandomSpecShape::default()))
        .filter(|s| s.expected_population(Some(0), DEPTH) < 200.0 && random_outcomes(s))
        .take(10)
        .collect();
    let mut worst: f64 = 0.0;
    let mut comparisons = 0;
    let mut random = 0;
    for (i, spec) in specs.iter().enumerate() {
        let t = truncated_values(spec, DEPTH);
        let estimates = match monte_carlo_all(spec, McOptions::new(0, DEPTH, SAMPLES, i as u64)) {
            Ok(e) => e,
            Err(e) => return fail("3 se", e.to_string()),
        };
        for est in estimates {
            let (win, lose) = t.win_lose(est.kind, est.mover);
            for (hat, exact) in [(est.win_hat(), win[0]), (est.lose_hat(), lose[0])] {
                let se = binomial_se(exact, SAMPLES);
                let z = if se == 0.0 {
                    if hat == exact { 0.0 } else { f64::INFINITY }
                } else {
                    (hat - exact).abs() / se
                };
                worst = worst.max(z);
                comparisons += 1;
                random += usize::from(se > 0.0);
            }
        }
    }
    Outcome {
        pass: worst <= 3.0,
        tolerance: "3 binomial se",
        detail: format!(
            "{comparisons} comparisons on 10 specs ({random} not sure events), N=1e5, depth 20; \
             largest deviation {worst:.2} se"
        ),
    }
}

fn comparison_suite() -> Outcome {
    let shape = RandomSpecShape::default();
    let mut worst = f64::INFINITY;
    let mut failures = Vec::new();
    let mut part3_asserted = 0;
    for poisson in [false, true] {
        for seed in 0..100 {
            let spec = spec_from(3000 + seed, poisson, &shape);
            let t = match solve_outcomes(&spec, IterOptions::default()) {
                Ok(t) => t,
                Err(e) => return fail("1e-9", e.to_string()),
            };
            for r in [check_part1(&spec, &t), check_part2(&spec, &t)] {
                worst = worst.min(r.min_margin());
                failures.extend(r.failures().map(|c| format!("seed {seed}: {}", c.name)));
            }
            let r3 = check_part3(&spec, &t);
            part3_asserted += r3.checks.iter().filter(|c| c.verdict != Verdict::HypothesisUnmet).count();
            failures.extend(r3.failures().map(|c| format!("seed {seed}: {}", c.name)));
        }
    }
    Outcome {
        pass: failures.is_empty() && worst >= -MARGIN_TOL,
        tolerance: "margin >= -1e-9",
        detail: format!(
            "200 specs; smallest part 1/2 margin {worst:.1e}; {part3_asserted} part 3 orderings asserted; failures {:?}",
            failures
        ),
    }
}

fn survival_suite() -> Outcome {
    let tol = IterOptions::DEFAULT_TOL;
    let shape = RandomSpecShape { max_count: 4, max_mean: 3.0, ..RandomSpecShape::default() };
    let (mut found, mut literal_misses, mut supported_misses) = (0, 0, 0);
    let mut seed = 4000;
    while found < 50 {
        let spec = spec_from(seed, seed % 2 == 1, &shape);
        seed += 1;
        let c = match survival_criterion(&spec, DEFAULT_ENUMERATION_CAP) {
            Ok(c) => c,
            Err(e) => return fail("10 * 1e-12", e.to_string()),
        };
        if c.rho.value < 1.2 {
            continue;
        }
        found += 1;
        let eew = solve_outcomes(&spec, IterOptions::default()).unwrap().eew().clone();
        if eew.as_slice().iter().any(|&v| v <= 10.0 * tol) {
            literal_misses += 1;
        }
        if c.supported.iter().zip(eew.as_slice()).any(|(&s, &v)| s && v <= 10.0 * tol) {
            supported_misses += 1;
        }
    }
    let mixed = BinaryParams::new([0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 0.0, 1.0])
        .and_then(|p| gwgames::casestudies::binary_to_spec(&p))
        .unwrap();
    let silent = survival_criterion(&mixed, DEFAULT_ENUMERATION_CAP).unwrap();
    let mixed_eew = solve_outcomes(&mixed, IterOptions::default()).unwrap().eew().clone();
    let mixed_ok = silent.describe() == "criterion silent" && mixed_eew.as_slice() == [1.0, 1.0];
    Outcome {
        pass: literal_misses == 0 && mixed_ok,
        tolerance: "min eew > 10 * 1e-12",
        detail: format!(
            "{literal_misses} of 50 firing specs have some eew_j at 0; on colors reaching a supercritical block: \
             {supported_misses} misses; mixed pair silent with eew = 1: {mixed_ok}"
        ),
    }
}

fn perturbation_suite() -> Outcome {
    let shape = RandomSpecShape::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5000);
    let mut bound_misses = 0;
    for _ in 0..100 {
        let m = rng.random_range(2..=3);
        let chi = random_table_law(&mut rng, m, shape.max_support, shape.max_count);
        let eta = random_table_law(&mut rng, m, shape.max_support, shape.max_count);
        let set = random_proper_subset(&mut rng, m);
        let x: Vec<f64> = (0..m).map(|_| rng.random()).collect();
        let y: Vec<f64> = (0..m).map(|_| rng.random()).collect();
        if !pgf_perturbation_bound(&chi, &eta, set, &x, &y).is_ok_and(|b| b.holds(1e-9)) {
            bound_misses += 1;
        }
    }
    let mut swept = Vec::new();
    for seed in 5000u64.. {
        if swept.len() == 5 {
            break;
        }
        let spec = spec_from(seed, false, &shape);
        let report = match continuity_sweep(&spec, &SWEEP_EPSILONS, 10, seed) {
            Ok(r) => r,
            Err(e) => return fail("1e-9", e.to_string()),
        };
        if report.normal_draw_zero && report.membership.normal_hypothesis() {
            swept.push((seed, report.normal, report.misere));
        }
    }
    let sweep_ok = swept
        .iter()
        .all(|(_, n, m)| *n == Verdict::Pass && matches!(m, Verdict::Pass | Verdict::HypothesisUnmet));
    Outcome {
        pass: bound_misses == 0 && sweep_ok,
        tolerance: "1e-9 bound, 1e-10 monotone slack",
        detail: format!(
            "pgf bound missed on {bound_misses} of 100 pairs; sweeps over eps {:?} (normal, misere): {:?}",
            SWEEP_EPSILONS,
            swept.iter().map(|(s, n, m)| format!("{s}:{}/{}", n.name(), m.name())).collect::<Vec<_>>()
        ),
    }
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "binary draws vanish off the mixed pair", budget: Duration::from_secs(10), run: binary_grid },
        Criterion { id: 2, name: "poisson lambda=2 has no draw", budget: Duration::from_secs(1), run: poisson_small },
        Criterion { id: 3, name: "poisson draws grow with lambda", budget: Duration::from_secs(5), run: poisson_large },
        Criterion { id: 4, name: "exhaustive enumeration matches recursions", budget: Duration::from_secs(60), run: oracle_equivalence },
        Criterion { id: 5, name: "monte carlo matches truncated values", budget: Duration::from_secs(120), run: monte_carlo_consistency },
        Criterion { id: 6, name: "comparison inequalities", budget: Duration::from_secs(60), run: comparison_suite },
        Criterion { id: 7, name: "spectral criterion implies escape", budget: Duration::from_secs(30), run: survival_suite },
        Criterion { id: 8, name: "pgf bound and continuity sweeps", budget: Duration::from_secs(30), run: perturbation_suite },
    ];
    let mut unexpected = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let in_time = elapsed <= c.budget;
        let pass = outcome.pass && in_time;
        let known = KNOWN_FAILURES.contains(&c.id);
        let note = match (pass, known) {
            (false, true) => " (known failure, see decisions ledger)",
            (true, true) => " (listed as a known failure but passed)",
            _ => "",
        };
        if pass == known {
            unexpected += 1;
        }
        println!(
            "{} {} {}: {:.2}s of {}s, tol {}; {}{}",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.budget.as_secs(),
            outcome.tolerance,
            outcome.detail,
            note
        );
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected result(s)");
        std::process::exit(1);
    }
}
