use crate::error::{Error, Result};
use crate::fixedpoint::{solve_outcomes, FirstMover, IterOptions, OutcomeTable};
use crate::model::{monochromatic_two_color, ModelSpec, OffspringLaw};

/// Largest `lambda` accepted; beyond it the nested exponentials lose all
/// precision.
pub const MAX_LAMBDA: f64 = 1e4;

/// Tolerance of the scalar root refinement.
pub const ROOT_TOL: f64 = 1e-12;

/// Agreement required between the scalar and vector routes to a draw
/// probability.
pub const POISSON_CROSS_CHECK_TOL: f64 = 1e-8;

/// Two colors, every vertex having `Poisson(lambda)` children; a blue
/// parent's child is blue with chance `pb`, a red parent's with chance `qb`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoissonParams {
    pub lambda: f64,
    pub pb: f64,
    pub qb: f64,
}

impl PoissonParams {
    pub fn new(lambda: f64, pb: f64, qb: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda <= MAX_LAMBDA) {
            return Err(Error::InvalidArgument(format!(
                "lambda must lie in (0, {MAX_LAMBDA}], got {lambda}"
            )));
        }
        for (name, p) in [("pb", pb), ("qb", qb)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        Ok(PoissonParams { lambda, pb, qb })
    }

    pub fn pr(&self) -> f64 {
        1.0 - self.pb
    }

    pub fn qr(&self) -> f64 {
        1.0 - self.qb
    }

    /// The four move fractions met along two rounds from a root of `color`
    /// (0 blue, 1 red) with `mover` first: the first mover's move, the
    /// reply, the first mover's next move, the next reply.
    pub fn chain(&self, mover: FirstMover, color: usize) -> PoissonChain {
        let (pb, pr, qb, qr) = (self.pb, self.pr(), self.qb, self.qr());
        let [a, b, c, d] = match (mover, color) {
            (FirstMover::PlayerOne, 0) => [pb, pr, qr, qb],
            (FirstMover::PlayerOne, _) => [qr, qb, pb, pr],
            (FirstMover::PlayerTwo, 0) => [pr, qr, qb, pb],
            (FirstMover::PlayerTwo, _) => [qb, pb, pr, qr],
        };
        PoissonChain {
            lambda: self.lambda,
            a,
            b,
            c,
            d,
        }
    }
}

/// Independent Poisson model with means `lambda (pb, pr)` for blue parents
/// and `lambda (qb, qr)` for red ones; Poisson thinning makes this the
/// same tree as colouring `Poisson(lambda)` children independently.
pub fn poisson_to_spec(params: &PoissonParams) -> Result<ModelSpec> {
    let l = params.lambda;
    monochromatic_two_color(
        OffspringLaw::poisson(vec![l * params.pb, l * params.pr()])?,
        OffspringLaw::poisson(vec![l * params.qb, l * params.qr()])?,
    )
}

/// `x -> exp(-lambda a exp(-lambda b x))`, strictly increasing on `[0, 1]`
/// when `a, b > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoissonMap {
    pub lambda: f64,
    pub a: f64,
    pub b: f64,
}

impl PoissonMap {
    pub fn eval(&self, x: f64) -> f64 {
        (-self.lambda * self.a * (-self.lambda * self.b * x).exp()).exp()
    }
}

/// The normal game from one root color and first mover reduces to the
/// scalar map `f1 o f2` with `f1` built from `(a, b)` and `f2` from
/// `(c, d)`: its least fixed point is the first mover's loss probability
/// and its greatest is one minus the win probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoissonChain {
    pub lambda: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl PoissonChain {
    pub fn f1(&self) -> PoissonMap {
        PoissonMap { lambda: self.lambda, a: self.a, b: self.b }
    }

    pub fn f2(&self) -> PoissonMap {
        PoissonMap { lambda: self.lambda, a: self.c, b: self.d }
    }

    pub fn composed(&self, x: f64) -> f64 {
        self.f1().eval(self.f2().eval(x))
    }

    /// Derivative bound: `f1 o f2 - x` is strictly decreasing, so the map
    /// has one fixed point. Evaluated in log space.
    pub fn single_root_condition(&self) -> bool {
        let l = self.lambda;
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let exponent = l * b * (-l * c).exp()
            + l * a * (-l * b * (-l * c * (-l * d).exp()).exp()).exp()
            + l * c * (-l * d).exp();
        let lhs = a.ln() + b.ln() + c.ln() + d.ln();
        lhs <= -4.0 * l.ln() + exponent
    }

    /// Convexity condition of the normal game.
    pub fn normal_condition(&self) -> bool {
        let l = self.lambda;
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        l * c * (-l * d).exp() >= 1.0 && l * a * (-l * b * (-l * c * (-l * d).exp()).exp()).exp() >= 1.0
    }

    pub fn misere_condition(&self) -> bool {
        let l = self.lambda;
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        l * c * (-l * d).exp() >= 1.0 && l * a * (-l * b * (1.0 - (-l * c).exp())).exp() >= 1.0
    }

    pub fn escape_condition(&self) -> bool {
        let l = self.lambda;
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let inner = (-l * c * (-l * d).exp()).exp() - (-l * c).exp();
        l * c * (-l * d).exp() >= 1.0 && l * a * (-l * b * inner).exp() >= 1.0
    }
}

/// A root of `f1 o f2 (x) - x` and the grid cell it was found in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarRoot {
    pub value: f64,
    pub bracket: (f64, f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalarFixedPoints {
    pub roots: Vec<ScalarRoot>,
    pub min_fp: f64,
    pub max_fp: f64,
    /// Iteration from 0 or 1 reached a fixed point the grid scan missed.
    pub grid_too_coarse: bool,
}

impl ScalarFixedPoints {
    /// `max FP - min FP`: the draw probability.
    pub fn draw(&self) -> f64 {
        self.max_fp - self.min_fp
    }
}

/// `f1` and `f2` of the normal game with player one moving first from a
/// blue root.
pub fn poisson_maps(params: &PoissonParams) -> (PoissonMap, PoissonMap) {
    let chain = params.chain(FirstMover::PlayerOne, 0);
    (chain.f1(), chain.f2())
}

/// Fixed points of `f1 o f2` for player one moving first from blue.
pub fn poisson_scalar_fixed_points(params: &PoissonParams, grid: usize) -> Result<ScalarFixedPoints> {
    scalar_fixed_points(&params.chain(FirstMover::PlayerOne, 0), grid)
}

/// Grid scan of `g(x) = f1 o f2 (x) - x` for sign changes, bisection of each
/// to [`ROOT_TOL`], and monotone iteration from `0` and `1` as a check on
/// the extreme roots.
pub fn scalar_fixed_points(chain: &PoissonChain, grid: usize) -> Result<ScalarFixedPoints> {
    if grid < 100 {
        return Err(Error::InvalidArgument(format!("grid must have at least 100 cells, got {grid}")));
    }
    let g = |x: f64| chain.composed(x) - x;
    let mut roots = Vec::new();
    let mut x0 = 0.0;
    let mut g0 = g(x0);
    for i in 1..=grid {
        let x1 = i as f64 / grid as f64;
        let g1 = g(x1);
        if g0 == 0.0 {
            roots.push(ScalarRoot { value: x0, bracket: (x0, x0) });
        } else if g0 * g1 < 0.0 {
            roots.push(ScalarRoot { value: bisect(&g, x0, x1), bracket: (x0, x1) });
        }
        x0 = x1;
        g0 = g1;
    }
    if g0 == 0.0 {
        roots.push(ScalarRoot { value: x0, bracket: (x0, x0) });
    }

    let (low, low_converged) = iterate_scalar(chain, 0.0);
    let (high, high_converged) = iterate_scalar(chain, 1.0);
    let scan_min = roots.first().map_or(f64::NAN, |r| r.value);
    let scan_max = roots.last().map_or(f64::NAN, |r| r.value);
    let certify = |iter: f64, converged: bool, scan: f64, below: bool| {
        if scan.is_nan() {
            return false;
        }
        if converged {
            (iter - scan).abs() <= 1e-9
        } else if below {
            iter <= scan + 1e-9
        } else {
            iter >= scan - 1e-9
        }
    };
    let low_ok = certify(low, low_converged, scan_min, true);
    let high_ok = certify(high, high_converged, scan_max, false);
    Ok(ScalarFixedPoints {
        min_fp: if low_ok { scan_min } else { low },
        max_fp: if high_ok { scan_max } else { high },
        roots,
        grid_too_coarse: !(low_ok && high_ok),
    })
}

fn bisect<G: Fn(f64) -> f64>(g: &G, mut lo: f64, mut hi: f64) -> f64 {
    let g_lo = g(lo);
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if (gm > 0.0) == (g_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn iterate_scalar(chain: &PoissonChain, start: f64) -> (f64, bool) {
    let mut x = start;
    for _ in 0..1_000_000 {
        let y = chain.composed(x);
        let step = (y - x).abs();
        x = y;
        if step < 1e-15 {
            return (x, true);
        }
    }
    (x, false)
}

/// Which game a sufficient condition speaks about, for one root color and
/// first mover.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionRow {
    pub mover: FirstMover,
    /// 0 blue, 1 red.
    pub color: usize,
    /// Unique fixed point of the scalar map: every draw is zero.
    pub single_root: bool,
    pub normal: bool,
    pub misere: bool,
    /// Only meaningful for Stopper first (`mover == PlayerOne`).
    pub escape: Option<bool>,
    /// True for the row printed in closed form (player one, blue). The
    /// other rows are obtained by relabeling colors and players.
    pub printed: bool,
}

/// The sufficient conditions for zero draws.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonConditions {
    /// Single-fixed-point bound for player one from blue.
    pub cond13: bool,
    /// Normal-game convexity condition for player one from blue.
    pub cond14: bool,
    /// Misère condition for player one from blue.
    pub cond15: bool,
    /// Escape condition for a blue root.
    pub cond16: bool,
    /// `lambda <= 2`, which implies the single-fixed-point bound whatever
    /// the color fractions.
    pub cond17: bool,
    pub rows: Vec<ConditionRow>,
}

pub fn poisson_conditions(params: &PoissonParams) -> PoissonConditions {
    let mut rows = Vec::with_capacity(4);
    for mover in FirstMover::ALL {
        for color in 0..2 {
            let chain = params.chain(mover, color);
            rows.push(ConditionRow {
                mover,
                color,
                single_root: chain.single_root_condition(),
                normal: chain.normal_condition(),
                misere: chain.misere_condition(),
                escape: (mover == FirstMover::PlayerOne).then(|| chain.escape_condition()),
                printed: mover == FirstMover::PlayerOne && color == 0,
            });
        }
    }
    let first = rows[0];
    PoissonConditions {
        cond13: first.single_root,
        cond14: first.normal,
        cond15: first.misere,
        cond16: first.escape.unwrap_or(false),
        cond17: params.lambda <= 2.0,
        rows,
    }
}

/// Everything known about one Poisson model, cross-checked.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonReport {
    pub params: PoissonParams,
    pub conditions: PoissonConditions,
    /// Scalar analysis per `(mover, color)`, in the order of
    /// `conditions.rows`.
    pub scalar: Vec<ScalarFixedPoints>,
    pub outcomes: OutcomeTable,
}

impl PoissonReport {
    /// `nd_{1,b}` from the scalar analysis.
    pub fn nd_1b(&self) -> f64 {
        self.scalar[0].draw()
    }
}

/// Runs the scalar analysis for all four `(mover, color)` pairs and the
/// vector solver, and checks that
///
/// * the scalar and vector normal-game draws agree,
/// * each row's single-root and normal conditions force a zero normal draw,
/// * each row's misère condition forces a zero misère draw,
/// * each escape condition forces a zero escape probability.
pub fn poisson_report(params: &PoissonParams, grid: usize) -> Result<PoissonReport> {
    let conditions = poisson_conditions(params);
    let spec = poisson_to_spec(params)?;
    let outcomes = solve_outcomes(&spec, IterOptions::default())?;
    let mut scalar = Vec::with_capacity(4);
    for row in &conditions.rows {
        let s = scalar_fixed_points(&params.chain(row.mover, row.color), grid)?;
        let vector = &outcomes.normal(row.mover);
        let label = format!("player {} from {}", row.mover.number(), color_name(row.color));
        if outcomes.converged() {
            let nd = vector.draw[row.color];
            if (s.draw() - nd).abs() > POISSON_CROSS_CHECK_TOL {
                return Err(Error::Consistency(format!(
                    "{label}: scalar draw {} but vector draw {nd}",
                    s.draw()
                )));
            }
        }
        let zero = |value: f64, what: &str, holds: bool| {
            if holds && value > POISSON_CROSS_CHECK_TOL {
                Err(Error::Consistency(format!("{label}: {what} holds but the probability is {value:e}")))
            } else {
                Ok(())
            }
        };
        zero(s.draw(), "single-root condition", row.single_root)?;
        zero(s.draw(), "normal condition", row.normal)?;
        zero(outcomes.misere(row.mover).draw[row.color], "misère condition", row.misere)?;
        if let Some(escape) = row.escape {
            zero(outcomes.esl()[row.color], "escape condition", escape)?;
        }
        scalar.push(s);
    }
    Ok(PoissonReport {
        params: *params,
        conditions,
        scalar,
        outcomes,
    })
}

pub(crate) fn color_name(color: usize) -> &'static str {
    if color == 0 {
        "blue"
    } else {
        "red"
    }
}
