//! Numerical checks of the structural results: comparisons between the
//! games, continuity in the offspring law, and a spectral criterion for
//! Escaper to survive.

mod comparison;
mod continuity;
mod survival;

pub use comparison::{
    chain_middle, check_part1, check_part2, check_part3, ComparisonReport, InequalityCheck, CONVEXITY_GRID,
    MARGIN_TOL,
};
pub use continuity::{
    continuity_probe, continuity_sweep, membership, pgf_perturbation_bound, s_alpha, ContinuityReport, Membership,
    OutcomeDeltas, PgfBound, ProbeReport, SWEEP_EPSILONS, ZERO_DRAW_TOL,
};
pub use survival::{
    gamma_matrix, spectral_radius, spectral_radius_2x2, supercritical_support, survival_criterion, survival_matrix, SpectralRadius,
    SurvivalCriterion, DEFAULT_ENUMERATION_CAP, SPECTRAL_TOL,
};

use crate::fixedpoint::OutcomeTable;
use crate::model::ModelSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    HypothesisUnmet,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::HypothesisUnmet => "hypothesis-unmet",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Sign of a value that should be either zero or clearly positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Positivity {
    Zero,
    Positive,
    /// Within a factor ten of the threshold either way.
    Unclear,
}

impl Positivity {
    pub fn classify(value: f64, threshold: f64) -> Self {
        if value > 10.0 * threshold {
            Positivity::Positive
        } else if value < 0.1 * threshold {
            Positivity::Zero
        } else {
            Positivity::Unclear
        }
    }
}

/// A stuck chance within this of one counts as one.
pub const SURELY_STUCK_TOL: f64 = 1e-12;

/// Whether Escaper moving first wins with positive probability from every
/// color exactly when Stopper moving first loses with positive probability
/// from every color.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub threshold: f64,
    pub min_eew: f64,
    pub min_esl: f64,
    pub eew: Positivity,
    pub esl: Positivity,
    /// Under the hypothesis that Stopper is never surely stuck.
    pub verdict: Verdict,
    /// Under the stronger hypothesis that neither player is ever surely
    /// stuck. A color where Escaper is surely stuck has `eew_j = 0` while
    /// `esl_j` can be positive, so only this form is sound.
    pub strengthened: Verdict,
}

/// Compares `min_j eew_j > tau` with `min_j esl_j > tau` for
/// `tau = 10 * tol`, reporting values near `tau` as inconclusive.
pub fn eew_esl_equivalence(spec: &ModelSpec, outcomes: &OutcomeTable) -> EquivalenceReport {
    let threshold = 10.0 * outcomes.options().tol;
    let min = |v: &crate::model::ProbVector| v.as_slice().iter().cloned().fold(f64::INFINITY, f64::min);
    let min_eew = min(outcomes.eew());
    let min_esl = min(outcomes.esl());
    let eew = Positivity::classify(min_eew, threshold);
    let esl = Positivity::classify(min_esl, threshold);
    let (alpha, beta) = spec.alpha_beta();
    let never_stuck = |v: &crate::model::ProbVector| v.as_slice().iter().all(|&a| a < 1.0 - SURELY_STUCK_TOL);
    let compare = |hypothesis: bool| {
        if !hypothesis {
            Verdict::HypothesisUnmet
        } else if eew == Positivity::Unclear || esl == Positivity::Unclear {
            Verdict::Inconclusive
        } else if eew == esl {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    };
    let stopper_ok = never_stuck(&alpha);
    EquivalenceReport {
        threshold,
        min_eew,
        min_esl,
        eew,
        esl,
        verdict: compare(stopper_ok),
        strengthened: compare(stopper_ok && never_stuck(&beta)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::casestudies::{binary_to_spec, BinaryParams};
    use crate::fixedpoint::{solve_outcomes, FirstMover, IterOptions};
    use crate::model::{ColorSet, OffspringLaw, PermissibleSets, TableEntry};
    use approx::assert_abs_diff_eq;

    fn binary(blue: [f64; 4], red: [f64; 4]) -> ModelSpec {
        binary_to_spec(&BinaryParams::new(blue, red).unwrap()).unwrap()
    }

    fn mixed_pair() -> ModelSpec {
        binary([0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 0.0, 1.0])
    }

    fn childless() -> ModelSpec {
        binary([1.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0])
    }

    fn solve(spec: &ModelSpec) -> OutcomeTable {
        solve_outcomes(spec, IterOptions::default()).unwrap()
    }

    #[test]
    fn escape_dominates_on_worked_models() {
        let spec = mixed_pair();
        let t = solve(&spec);
        let r = check_part1(&spec, &t);
        assert_eq!(r.verdict(), Verdict::Pass);
        let c = r.checks.iter().find(|c| c.name == "nw1 <= esw" && c.color == 0).unwrap();
        assert_eq!((c.lhs, c.rhs), (0.0, 0.0));
        let spec = childless();
        let t = solve(&spec);
        let r = check_part1(&spec, &t);
        let c = r.checks.iter().find(|c| c.name == "mw1 <= esw").unwrap();
        assert_eq!((c.lhs, c.rhs), (1.0, 1.0));
        assert!(r.min_margin() >= -MARGIN_TOL);
    }

    #[test]
    fn derivative_chains_on_worked_models() {
        for spec in [childless(), mixed_pair(), binary([0.3, 0.2, 0.1, 0.4], [0.2, 0.3, 0.4, 0.1])] {
            let r = check_part2(&spec, &solve(&spec));
            assert_eq!(r.verdict(), Verdict::Pass, "{r:?}");
        }
        let spec = childless();
        let r = check_part2(&spec, &solve(&spec));
        let c = r.checks.iter().find(|c| c.name == "esw >= escape bound").unwrap();
        assert_abs_diff_eq!(c.lhs, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.margin, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn normal_misere_comparison() {
        let spec = childless();
        let r = check_part3(&spec, &solve(&spec));
        assert!(r.hypotheses.contains(&("mean condition (player 1)", true)));
        let c = r.checks.iter().find(|c| c.name == "nw1 <= mw1").unwrap();
        assert_eq!((c.lhs, c.rhs, c.verdict), (0.0, 1.0, Verdict::Pass));

        let half = binary([0.5, 0.0, 0.0, 0.5], [0.5, 0.0, 0.0, 0.5]);
        let t = solve(&half);
        let r = check_part3(&half, &t);
        // alpha = beta = 0.5 and one blue child with chance 0.5: the
        // single-child side is 0.25 < alpha, the mean side 0.25 <= alpha.
        assert!(r.hypotheses.contains(&("single-child condition (player 1)", false)));
        assert!(r.hypotheses.contains(&("mean condition (player 1)", true)));
        assert_eq!(r.verdict(), Verdict::Pass);
        assert!(t.normal(FirstMover::PlayerOne).win.precedes(&t.misere(FirstMover::PlayerOne).win, 1e-9));

        // alpha = 0.3 against 0.16 and 0.96: both conditions fail.
        let spec = binary([0.3, 0.5, 0.0, 0.2], [0.3, 0.0, 0.5, 0.2]);
        let r = check_part3(&spec, &solve(&spec));
        let p1: Vec<_> = r.checks.iter().filter(|c| !c.mirrored).collect();
        assert!(p1.iter().all(|c| c.verdict == Verdict::HypothesisUnmet));
    }

    #[test]
    fn survival_on_two_colors() {
        // Mixed pair: m_br = m_rb = 1 and gamma = 1, so rho = 1 exactly.
        let c = survival_criterion(&mixed_pair(), DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(c.f, vec![0, 1]);
        assert_abs_diff_eq!(c.rho.value, 1.0, epsilon = 1e-12);
        assert!(!c.fires());
        assert_eq!(c.describe(), "criterion silent");
        assert_eq!(c.supported, vec![false, false]);

        let c = survival_criterion(&childless(), DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(c.rho.value, 0.0);
        assert!(!c.fires());

        // Two children of the other color always, one of the own color with
        // chance 0.8: m_br = m_rb = 2 and gamma_bb = gamma_rr = 0.8.
        let row = |own: usize| {
            let mut a = vec![0u32; 2];
            a[own] = 1;
            a[1 - own] = 2;
            let mut b = vec![0u32; 2];
            b[own] = 2;
            b[1 - own] = 2;
            OffspringLaw::table(2, vec![TableEntry { counts: a, prob: 0.8 }, TableEntry { counts: b, prob: 0.2 }])
                .unwrap()
        };
        let spec = ModelSpec::with_uniform_root(vec![row(0), row(1)], PermissibleSets::monochromatic(2).unwrap())
            .unwrap();
        let c = survival_criterion(&spec, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_abs_diff_eq!(c.gamma[0][0], 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(c.mean_matrix[0][1], 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.m2[0][1], 1.6, epsilon = 1e-15);
        assert_eq!((c.m2[0][0], c.m2[1][1]), (0.0, 0.0));
        assert_abs_diff_eq!(c.rho.value, 1.6, epsilon = 1e-9);
        assert!(c.fires());
        assert_eq!(c.supported, vec![true, true]);
        let t = solve(&spec);
        assert!(t.eew().as_slice().iter().all(|&v| v > 1e-6));
    }

    #[test]
    fn enumeration_cap() {
        let spec = ModelSpec::with_uniform_root(
            vec![OffspringLaw::poisson(vec![0.5; 3]).unwrap(); 3],
            PermissibleSets::new(3, vec![ColorSet::from_colors([0, 1]); 3]).unwrap(),
        )
        .unwrap();
        assert!(matches!(survival_criterion(&spec, 4), Err(crate::Error::EnumerationCap { count: 8, cap: 4 })));
        assert_eq!(survival_criterion(&spec, 8).unwrap().candidates, 8);
    }

    #[test]
    fn spectral_radius_handles_reducible_matrices() {
        let a = vec![vec![0.5, 3.0, 0.0], vec![0.0, 0.2, 0.0], vec![0.0, 1.0, 0.7]];
        assert_abs_diff_eq!(spectral_radius(&a, 1e-12).value, 0.7, epsilon = 1e-10);
        let b = vec![vec![0.0, 2.0], vec![0.5, 0.0]];
        assert_abs_diff_eq!(spectral_radius(&b, 1e-12).value, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(spectral_radius_2x2(&b), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn equivalence_on_worked_models() {
        let spec = mixed_pair();
        let r = eew_esl_equivalence(&spec, &solve(&spec));
        assert_eq!((r.eew, r.esl, r.verdict), (Positivity::Positive, Positivity::Positive, Verdict::Pass));
        let spec = binary([0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]);
        let r = eew_esl_equivalence(&spec, &solve(&spec));
        assert_ne!(r.verdict, Verdict::Fail);
        assert_ne!(r.verdict, Verdict::HypothesisUnmet);
        let spec = childless();
        assert_eq!(eew_esl_equivalence(&spec, &solve(&spec)).verdict, Verdict::HypothesisUnmet);
    }

    #[test]
    fn continuity_probes() {
        let spec = binary([0.3, 0.2, 0.1, 0.4], [0.2, 0.3, 0.4, 0.1]);
        let zero = continuity_probe(&spec, 0.0, 3, 1).unwrap();
        assert_eq!(zero.deltas, OutcomeDeltas::default());
        let p = continuity_probe(&spec, 1e-3, 5, 1).unwrap();
        assert!(p.max_d0 <= 1e-3 + 1e-15);
        assert!(p.deltas.normal() < 0.05);
        let sweep = continuity_sweep(&spec, &SWEEP_EPSILONS, 5, 2).unwrap();
        assert!(sweep.normal_draw_zero);
        assert_eq!(sweep.normal, Verdict::Pass);
        assert!(sweep.probes[2].deltas.normal() < sweep.probes[0].deltas.normal());
        let m = sweep.membership;
        assert!(m.d1 && m.d2 && m.d3 && m.d4);
        let poisson = crate::casestudies::poisson_to_spec(&crate::casestudies::PoissonParams::new(1.0, 0.5, 0.5).unwrap())
            .unwrap();
        assert!(continuity_probe(&poisson, 1e-3, 1, 1).is_err());
    }

    #[test]
    fn pgf_bound_and_s_alpha() {
        assert_abs_diff_eq!(s_alpha(0.5), 4.0, epsilon = 1e-15);
        let chi = OffspringLaw::table(2, vec![TableEntry { counts: vec![2, 1], prob: 1.0 }]).unwrap();
        let eta = OffspringLaw::table(
            2,
            vec![TableEntry { counts: vec![2, 1], prob: 0.9 }, TableEntry { counts: vec![0, 0], prob: 0.1 }],
        )
        .unwrap();
        let b = pgf_perturbation_bound(&chi, &eta, ColorSet::full(2), &[0.5, 0.5], &[0.6, 0.4]).unwrap();
        assert!(b.holds(1e-12));
    }
}
