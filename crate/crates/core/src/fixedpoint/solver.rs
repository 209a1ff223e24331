use crate::fixedpoint::maps::MonotoneMap;
use crate::model::ProbVector;

/// Stopping rule of the monotone iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterOptions {
    /// Stop once a step moves no coordinate by more than this.
    pub tol: f64,
    pub max_iter: usize,
}

impl IterOptions {
    pub const DEFAULT_TOL: f64 = 1e-12;
    pub const DEFAULT_MAX_ITER: usize = 1_000_000;

    pub fn with_tol(tol: f64) -> Self {
        IterOptions { tol, ..Self::default() }
    }
}

impl Default for IterOptions {
    fn default() -> Self {
        IterOptions {
            tol: Self::DEFAULT_TOL,
            max_iter: Self::DEFAULT_MAX_ITER,
        }
    }
}

/// Result of iterating a monotone map from `0` or from `1`.
///
/// Iterates from `0` increase and iterates from `1` decrease, so `point` is a
/// one-sided bound on the extremal fixed point even when `converged` is
/// false.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointResult {
    pub point: ProbVector,
    pub iterations: usize,
    /// Sup-norm length of the final step.
    pub last_delta: f64,
    pub converged: bool,
    /// Largest step against the expected direction; rounding noise only.
    pub monotonicity_defect: f64,
}

/// `min FP(F)`, the limit of `F^n(0)`.
pub fn least_fixed_point<M: MonotoneMap + ?Sized>(map: &M, opts: IterOptions) -> FixedPointResult {
    iterate(map, ProbVector::zeros(map.dim()), 1.0, opts)
}

/// `max FP(F)`, the limit of `F^n(1)`.
pub fn greatest_fixed_point<M: MonotoneMap + ?Sized>(map: &M, opts: IterOptions) -> FixedPointResult {
    iterate(map, ProbVector::ones(map.dim()), -1.0, opts)
}

/// `F^n(start)`.
pub fn iterate_n<M: MonotoneMap + ?Sized>(map: &M, start: &ProbVector, n: usize) -> ProbVector {
    let mut x = start.as_slice().to_vec();
    let mut y = vec![0.0; x.len()];
    for _ in 0..n {
        map.apply_into(&x, &mut y);
        std::mem::swap(&mut x, &mut y);
    }
    ProbVector::from_clamped(x)
}

fn iterate<M: MonotoneMap + ?Sized>(
    map: &M,
    start: ProbVector,
    direction: f64,
    opts: IterOptions,
) -> FixedPointResult {
    let mut x = start.into_vec();
    let mut y = vec![0.0; x.len()];
    let mut last_delta = f64::INFINITY;
    let mut defect: f64 = 0.0;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        map.apply_into(&x, &mut y);
        iterations += 1;
        let mut delta: f64 = 0.0;
        for (a, b) in x.iter().zip(&y) {
            let step = (b - a) * direction;
            delta = delta.max(step.abs());
            defect = defect.max(-step);
        }
        std::mem::swap(&mut x, &mut y);
        last_delta = delta;
        if delta < opts.tol {
            converged = true;
            break;
        }
    }
    if x.is_empty() {
        last_delta = 0.0;
        converged = true;
    }
    FixedPointResult {
        point: ProbVector::from_clamped(x),
        iterations,
        last_delta,
        converged,
        monotonicity_defect: defect,
    }
}
