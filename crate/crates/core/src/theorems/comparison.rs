use crate::fixedpoint::{FirstMover, OutcomeTable};
use crate::model::{ColorSet, ModelSpec, ProbVector};
use crate::theorems::Verdict;

/// Slack allowed on every inequality to absorb solver tolerance.
pub const MARGIN_TOL: f64 = 1e-9;

/// Grid per axis on which multivariate table pgfs are tested for convexity.
pub const CONVEXITY_GRID: usize = 9;

/// One inequality `lhs <= rhs` at one color.
#[derive(Clone, Debug, PartialEq)]
pub struct InequalityCheck {
    pub name: &'static str,
    /// 0-indexed.
    pub color: usize,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; the inequality holds when it is at least `-MARGIN_TOL`.
    pub margin: f64,
    pub verdict: Verdict,
    /// Obtained by swapping the players in a printed statement.
    pub mirrored: bool,
}

impl InequalityCheck {
    fn new(name: &'static str, color: usize, lhs: f64, rhs: f64) -> Self {
        let margin = rhs - lhs;
        InequalityCheck {
            name,
            color,
            lhs,
            rhs,
            margin,
            verdict: if margin >= -MARGIN_TOL { Verdict::Pass } else { Verdict::Fail },
            mirrored: false,
        }
    }

    fn unmet(name: &'static str, color: usize, lhs: f64, rhs: f64) -> Self {
        InequalityCheck {
            verdict: Verdict::HypothesisUnmet,
            ..InequalityCheck::new(name, color, lhs, rhs)
        }
    }

    fn mirrored(mut self) -> Self {
        self.mirrored = true;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ComparisonReport {
    pub checks: Vec<InequalityCheck>,
    /// Hypotheses evaluated on the way, as `(name, holds)`.
    pub hypotheses: Vec<(&'static str, bool)>,
}

impl ComparisonReport {
    /// Smallest margin among checks whose hypotheses hold.
    pub fn min_margin(&self) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.verdict != Verdict::HypothesisUnmet)
            .map(|c| c.margin)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn failures(&self) -> impl Iterator<Item = &InequalityCheck> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fail)
    }

    pub fn verdict(&self) -> Verdict {
        if self.failures().next().is_some() {
            Verdict::Fail
        } else if self.checks.iter().any(|c| c.verdict == Verdict::Pass) {
            Verdict::Pass
        } else {
            Verdict::HypothesisUnmet
        }
    }
}

/// Win or loss under normal or misère rules implies the same result for the
/// matching escape game: `nw_1 <= esw`, `nl_2 <= eel`, `mw_1 <= esw`,
/// `ml_2 <= eel`.
pub fn check_part1(spec: &ModelSpec, outcomes: &OutcomeTable) -> ComparisonReport {
    let mut report = ComparisonReport::default();
    let p1 = FirstMover::PlayerOne;
    let p2 = FirstMover::PlayerTwo;
    for j in 0..spec.num_colors() {
        report.checks.push(InequalityCheck::new("nw1 <= esw", j, outcomes.normal(p1).win[j], outcomes.esw()[j]));
        report.checks.push(InequalityCheck::new("nl2 <= eel", j, outcomes.normal(p2).lose[j], outcomes.eel()[j]));
        report.checks.push(InequalityCheck::new("mw1 <= esw", j, outcomes.misere(p1).win[j], outcomes.esw()[j]));
        report.checks.push(InequalityCheck::new("ml2 <= eel", j, outcomes.misere(p2).lose[j], outcomes.eel()[j]));
    }
    report
}

/// The middle term of a chain `value >= middle >= min`:
///
/// ```text
/// stuck + mu (1 - stuck) + sum_{k in set} (v_k - mu) d_k G_{j,set}(1 - v)
/// ```
///
/// with `mu = min_{t in set} v_t`.
pub fn chain_middle(spec: &ModelSpec, j: usize, set: ColorSet, stuck: f64, v: &ProbVector) -> (f64, f64) {
    let law = spec.offspring(j);
    let mu = set.iter().map(|t| v[t]).fold(f64::INFINITY, f64::min);
    let point: Vec<f64> = v.as_slice().iter().map(|x| 1.0 - x).collect();
    let sum: f64 = set
        .iter()
        .map(|k| (v[k] - mu) * law.pgf_partial_unchecked(set, k, &point))
        .sum();
    (stuck + mu * (1.0 - stuck) + sum, mu)
}

/// Lower bounds on `esw`, `mw_1` and `mw_2` from first derivatives of the
/// pgfs at the loss vectors of the opponent.
pub fn check_part2(spec: &ModelSpec, outcomes: &OutcomeTable) -> ComparisonReport {
    let mut report = ComparisonReport::default();
    let (alpha, beta) = spec.alpha_beta();
    let perm = spec.permissible();
    let ml1 = &outcomes.misere(FirstMover::PlayerOne).lose;
    let ml2 = &outcomes.misere(FirstMover::PlayerTwo).lose;
    let mw1 = &outcomes.misere(FirstMover::PlayerOne).win;
    let mw2 = &outcomes.misere(FirstMover::PlayerTwo).win;
    for j in 0..spec.num_colors() {
        let rows: [(&str, &str, f64, ColorSet, f64, &ProbVector); 3] = [
            ("esw >= escape bound", "escape bound >= min eel", outcomes.esw()[j], perm.player_one(j), alpha[j], outcomes.eel()),
            ("mw1 >= misere bound", "misere bound >= min ml2", mw1[j], perm.player_one(j), alpha[j], ml2),
            ("mw2 >= misere bound", "misere bound >= min ml1", mw2[j], perm.player_two(j), beta[j], ml1),
        ];
        for (upper_name, lower_name, value, set, stuck, v) in rows {
            let (middle, mu) = chain_middle(spec, j, set, stuck, v);
            report.checks.push(InequalityCheck::new(upper_name, j, middle, value));
            report.checks.push(InequalityCheck::new(lower_name, j, mu, middle));
        }
    }
    report
}

/// Two sufficient conditions comparing normal and misère outcomes, for each
/// first mover:
///
/// * `a_j <= sum_{i in A_j} b_i d_i G_{j,A_j}(0)` for all `j` gives
///   `nl <= ml`;
/// * `a_j >= sum_{i in A_j} b_i E[X_i | j]` for all `j` gives `nw <= mw`;
///
/// where `A_j` is the first mover's set and `a`, `b` the chances of the first
/// and second mover being stuck. Both also need `G_{j,A_j}` convex; the
/// player-two versions are the mirror images.
pub fn check_part3(spec: &ModelSpec, outcomes: &OutcomeTable) -> ComparisonReport {
    let mut report = ComparisonReport::default();
    let m = spec.num_colors();
    let (alpha, beta) = spec.alpha_beta();
    let zero = vec![0.0; m];
    for mover in FirstMover::ALL {
        let (a, b) = match mover {
            FirstMover::PlayerOne => (&alpha, &beta),
            FirstMover::PlayerTwo => (&beta, &alpha),
        };
        let sets: Vec<ColorSet> = (0..m).map(|j| mover.moves(spec, j)).collect();
        let convex = (0..m).all(|j| spec.offspring(j).pgf_is_convex(sets[j], CONVEXITY_GRID));
        let mut single_child = Vec::with_capacity(m);
        let mut mean = Vec::with_capacity(m);
        for j in 0..m {
            let law = spec.offspring(j);
            single_child.push(
                sets[j]
                    .iter()
                    .map(|i| b[i] * law.pgf_partial_unchecked(sets[j], i, &zero))
                    .sum::<f64>(),
            );
            mean.push(sets[j].iter().map(|i| b[i] * law.mean(i)).sum::<f64>());
        }
        let loss_hyp = convex && (0..m).all(|j| a[j] <= single_child[j] + 1e-15);
        let win_hyp = convex && (0..m).all(|j| a[j] >= mean[j] - 1e-15);
        let mirrored = mover == FirstMover::PlayerTwo;
        let (conv_name, loss_name, win_name, nl_name, nw_name) = match mover {
            FirstMover::PlayerOne => ("pgf convex (player 1)", "single-child condition (player 1)", "mean condition (player 1)", "nl1 <= ml1", "nw1 <= mw1"),
            FirstMover::PlayerTwo => ("pgf convex (player 2)", "single-child condition (player 2)", "mean condition (player 2)", "nl2 <= ml2", "nw2 <= mw2"),
        };
        report.hypotheses.push((conv_name, convex));
        report.hypotheses.push((loss_name, loss_hyp));
        report.hypotheses.push((win_name, win_hyp));
        let normal = outcomes.normal(mover);
        let misere = outcomes.misere(mover);
        for j in 0..m {
            let nl = if loss_hyp {
                InequalityCheck::new(nl_name, j, normal.lose[j], misere.lose[j])
            } else {
                InequalityCheck::unmet(nl_name, j, normal.lose[j], misere.lose[j])
            };
            let nw = if win_hyp {
                InequalityCheck::new(nw_name, j, normal.win[j], misere.win[j])
            } else {
                InequalityCheck::unmet(nw_name, j, normal.win[j], misere.win[j])
            };
            if mirrored {
                report.checks.push(nl.mirrored());
                report.checks.push(nw.mirrored());
            } else {
                report.checks.push(nl);
                report.checks.push(nw);
            }
        }
    }
    report
}
