use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fixedpoint::{solve_outcomes, FirstMover, IterOptions, OutcomeTable};
use crate::model::{d0_distance, ColorSet, ModelSpec, OffspringLaw, ProbVector, TableEntry};
use crate::theorems::Verdict;

/// Perturbation sizes used by [`continuity_sweep`].
pub const SWEEP_EPSILONS: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// Draw values below this count as zero for the continuity clause.
pub const ZERO_DRAW_TOL: f64 = 1e-9;

/// Slack on "nonincreasing" to absorb solver tolerance.
const MODULUS_SLACK: f64 = 1e-10;

/// Which sets of laws the spec belongs to. The mean conditions always hold
/// for the supported laws but are reported for completeness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Membership {
    /// `alpha_j > 0` for all `j`.
    pub d1: bool,
    /// `beta_j > 0` for all `j`.
    pub d2: bool,
    /// Finite mean number of children in `S_j`.
    pub d3: bool,
    /// Finite mean number of children outside `S_j`.
    pub d4: bool,
    /// `G_{j,S_j}(beta_k : k in S_j) > alpha_j` for all `j`.
    pub c1: bool,
    /// `G_{j,[m]\S_j}(alpha_k : k outside S_j) > beta_j` for all `j`.
    pub c2: bool,
}

impl Membership {
    /// Hypothesis under which normal outcomes are semicontinuous.
    pub fn normal_hypothesis(&self) -> bool {
        (self.d1 || self.d4) && (self.d2 || self.d3)
    }

    pub fn misere_hypothesis(&self) -> bool {
        (self.c1 || self.d4) && (self.c2 || self.d3)
    }

    pub fn escape_hypothesis(&self) -> bool {
        self.d3 && self.d4
    }
}

pub fn membership(spec: &ModelSpec) -> Membership {
    let m = spec.num_colors();
    let (alpha, beta) = spec.alpha_beta();
    let perm = spec.permissible();
    let finite = |set: fn(&crate::model::PermissibleSets, usize) -> ColorSet| {
        (0..m).all(|j| spec.offspring(j).restricted_mean(set(perm, j)).is_finite())
    };
    Membership {
        d1: alpha.as_slice().iter().all(|&a| a > 0.0),
        d2: beta.as_slice().iter().all(|&b| b > 0.0),
        d3: finite(|p, j| p.player_one(j)),
        d4: finite(|p, j| p.player_two(j)),
        c1: (0..m).all(|j| spec.offspring(j).pgf_unchecked(perm.player_one(j), beta.as_slice()) > alpha[j]),
        c2: (0..m).all(|j| spec.offspring(j).pgf_unchecked(perm.player_two(j), alpha.as_slice()) > beta[j]),
    }
}

/// Largest observed change of each outcome vector, over colors and movers.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct OutcomeDeltas {
    pub normal_win: f64,
    pub normal_lose: f64,
    pub misere_win: f64,
    pub misere_lose: f64,
    pub esw: f64,
    pub eel: f64,
}

impl OutcomeDeltas {
    fn between(a: &OutcomeTable, b: &OutcomeTable) -> Self {
        let d = |x: &ProbVector, y: &ProbVector| x.sup_distance(y);
        let mut out = OutcomeDeltas {
            esw: d(a.esw(), b.esw()),
            eel: d(a.eel(), b.eel()),
            ..OutcomeDeltas::default()
        };
        for mover in FirstMover::ALL {
            out.normal_win = out.normal_win.max(d(&a.normal(mover).win, &b.normal(mover).win));
            out.normal_lose = out.normal_lose.max(d(&a.normal(mover).lose, &b.normal(mover).lose));
            out.misere_win = out.misere_win.max(d(&a.misere(mover).win, &b.misere(mover).win));
            out.misere_lose = out.misere_lose.max(d(&a.misere(mover).lose, &b.misere(mover).lose));
        }
        out
    }

    fn max_with(self, o: Self) -> Self {
        OutcomeDeltas {
            normal_win: self.normal_win.max(o.normal_win),
            normal_lose: self.normal_lose.max(o.normal_lose),
            misere_win: self.misere_win.max(o.misere_win),
            misere_lose: self.misere_lose.max(o.misere_lose),
            esw: self.esw.max(o.esw),
            eel: self.eel.max(o.eel),
        }
    }

    pub fn normal(&self) -> f64 {
        self.normal_win.max(self.normal_lose)
    }

    pub fn misere(&self) -> f64 {
        self.misere_win.max(self.misere_lose)
    }
}

/// A mass transfer in one table law: a fraction of `epsilon` moves from an
/// existing row to another count vector.
#[derive(Clone, Debug, PartialEq)]
struct Transfer {
    source: usize,
    target: Vec<u32>,
    fraction: f64,
}

fn random_transfers<R: Rng + ?Sized>(rng: &mut R, spec: &ModelSpec) -> Vec<Transfer> {
    spec.offspring_laws()
        .iter()
        .map(|law| {
            let OffspringLaw::Table(entries) = law else { unreachable!("checked by caller") };
            let source = rng.random_range(0..entries.len());
            let top = entries.iter().flat_map(|e| e.counts.iter()).copied().max().unwrap_or(0) + 1;
            let target = loop {
                let t: Vec<u32> = (0..law.num_colors()).map(|_| rng.random_range(0..=top)).collect();
                if t != entries[source].counts {
                    break t;
                }
            };
            Transfer { source, target, fraction: rng.random_range(0.1..=1.0) }
        })
        .collect()
}

fn apply_transfers(spec: &ModelSpec, transfers: &[Transfer], eps: f64) -> Result<ModelSpec> {
    let laws = spec
        .offspring_laws()
        .iter()
        .zip(transfers)
        .map(|(law, t)| {
            let OffspringLaw::Table(entries) = law else { unreachable!("checked by caller") };
            let mut rows = entries.clone();
            let mass = (t.fraction * eps).min(rows[t.source].prob);
            rows[t.source].prob -= mass;
            rows.push(TableEntry { counts: t.target.clone(), prob: mass });
            OffspringLaw::table(law.num_colors(), rows)
        })
        .collect::<Result<Vec<_>>>()?;
    spec.with_offspring(laws)
}

/// Outcome changes under random perturbations of one size.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeReport {
    pub epsilon: f64,
    pub trials: usize,
    /// Largest `d0` distance actually realized; at most `epsilon`.
    pub max_d0: f64,
    pub deltas: OutcomeDeltas,
}

/// Continuity moduli over a range of perturbation sizes.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuityReport {
    pub membership: Membership,
    pub normal_draw_zero: bool,
    pub misere_draw_zero: bool,
    /// Ordered as the requested sizes, largest first.
    pub probes: Vec<ProbeReport>,
    /// Whether the normal moduli shrink with the perturbation size; only
    /// asserted when the normal draw vanishes.
    pub normal: Verdict,
    pub misere: Verdict,
}

fn require_table(spec: &ModelSpec) -> Result<()> {
    if spec.offspring_laws().iter().all(OffspringLaw::is_table) {
        Ok(())
    } else {
        Err(Error::InvalidArgument("perturbation probes need table laws".into()))
    }
}

fn probe_with(spec: &ModelSpec, base: &OutcomeTable, eps: f64, directions: &[Vec<Transfer>]) -> Result<ProbeReport> {
    let mut deltas = OutcomeDeltas::default();
    let mut max_d0: f64 = 0.0;
    for t in directions {
        let perturbed = apply_transfers(spec, t, eps)?;
        max_d0 = max_d0.max(d0_distance(spec, &perturbed)?);
        let outcomes = solve_outcomes(&perturbed, base.options())?;
        deltas = deltas.max_with(OutcomeDeltas::between(base, &outcomes));
    }
    Ok(ProbeReport { epsilon: eps, trials: directions.len(), max_d0, deltas })
}

/// Solves `trials` random perturbations at `d0` distance at most `epsilon`
/// and reports the largest outcome changes.
pub fn continuity_probe(spec: &ModelSpec, epsilon: f64, trials: usize, seed: u64) -> Result<ProbeReport> {
    require_table(spec)?;
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidArgument(format!("perturbation size {epsilon} is negative")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let directions: Vec<_> = (0..trials).map(|_| random_transfers(&mut rng, spec)).collect();
    let base = solve_outcomes(spec, IterOptions::default())?;
    probe_with(spec, &base, epsilon, &directions)
}

fn nonincreasing(values: impl Iterator<Item = f64>) -> bool {
    let v: Vec<f64> = values.collect();
    v.windows(2).all(|w| w[1] <= w[0] + MODULUS_SLACK)
}

/// Probes the same perturbation directions at each size in `epsilons`
/// (largest first) and checks that the moduli shrink when the draw is zero.
pub fn continuity_sweep(spec: &ModelSpec, epsilons: &[f64], trials: usize, seed: u64) -> Result<ContinuityReport> {
    require_table(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let directions: Vec<_> = (0..trials).map(|_| random_transfers(&mut rng, spec)).collect();
    let base = solve_outcomes(spec, IterOptions::default())?;
    let probes = epsilons
        .iter()
        .map(|&eps| probe_with(spec, &base, eps, &directions))
        .collect::<Result<Vec<_>>>()?;
    let zero_draw = |kind: fn(&OutcomeTable, FirstMover) -> f64| {
        FirstMover::ALL.iter().all(|&mv| kind(&base, mv) < ZERO_DRAW_TOL)
    };
    let normal_draw_zero = zero_draw(|t, mv| t.normal(mv).draw.as_slice().iter().cloned().fold(0.0, f64::max));
    let misere_draw_zero = zero_draw(|t, mv| t.misere(mv).draw.as_slice().iter().cloned().fold(0.0, f64::max));
    let membership = membership(spec);
    let verdict = |applies: bool, ok: bool| match (applies, ok) {
        (false, _) => Verdict::HypothesisUnmet,
        (true, true) => Verdict::Pass,
        (true, false) => Verdict::Fail,
    };
    Ok(ContinuityReport {
        normal: verdict(
            normal_draw_zero && membership.normal_hypothesis(),
            nonincreasing(probes.iter().map(|p| p.deltas.normal())),
        ),
        misere: verdict(
            misere_draw_zero && membership.misere_hypothesis(),
            nonincreasing(probes.iter().map(|p| p.deltas.misere())),
        ),
        membership,
        normal_draw_zero,
        misere_draw_zero,
        probes,
    })
}

/// `S_alpha = sum_n n alpha^(n-1) = 1 / (1 - alpha)^2` for `alpha < 1`.
pub fn s_alpha(alpha: f64) -> f64 {
    1.0 / ((1.0 - alpha) * (1.0 - alpha))
}

/// Both sides of `|G_{j,S,chi}(x) - G_{j,S,eta}(y)| <= 2 d + E_{j,S,chi} max_{k in S} |x_k - y_k|`,
/// where `d` is the total variation distance between the two laws.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PgfBound {
    pub lhs: f64,
    pub rhs: f64,
}

impl PgfBound {
    pub fn holds(&self, tol: f64) -> bool {
        self.lhs <= self.rhs + tol
    }
}

pub fn pgf_perturbation_bound(
    chi: &OffspringLaw,
    eta: &OffspringLaw,
    set: ColorSet,
    x: &[f64],
    y: &[f64],
) -> Result<PgfBound> {
    let lhs = (chi.pgf(set, x)? - eta.pgf(set, y)?).abs();
    let tv = crate::model::tv_distance(chi, eta)?;
    let spread = set.iter().map(|k| (x[k] - y[k]).abs()).fold(0.0, f64::max);
    Ok(PgfBound { lhs, rhs: 2.0 * (tv.value + tv.slack) + chi.restricted_mean(set) * spread })
}
