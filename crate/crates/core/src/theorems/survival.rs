use crate::error::{Error, Result};
use crate::model::ModelSpec;

/// Default bound on the number of candidate maps `f` examined.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

/// Stopping width of the power-iteration bracket.
pub const SPECTRAL_TOL: f64 = 1e-10;

const MAX_POWER_ITER: usize = 1_000_000;

/// Largest eigenvalue of a non-negative matrix with the bracket that
/// certifies it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralRadius {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
}

/// Sufficient condition for Escaper to win with positive probability, for
/// the map `f` that maximizes the spectral radius.
#[derive(Clone, Debug, PartialEq)]
pub struct SurvivalCriterion {
    /// `f[i]` is in `S_i`; 0-indexed.
    pub f: Vec<usize>,
    /// `gamma[i][j]`: chance that a color-`i` vertex has exactly one child
    /// in `S_i`, of color `j`. Zero when `j` is not in `S_i`.
    pub gamma: Vec<Vec<f64>>,
    pub mean_matrix: Vec<Vec<f64>>,
    pub m2: Vec<Vec<f64>>,
    pub rho: SpectralRadius,
    /// Colors from which a strongly connected block of `m2` with spectral
    /// radius above one can be reached. Escaper moving first wins with
    /// positive probability from these colors; other colors may give zero.
    pub supported: Vec<bool>,
    /// Number of maps `f` examined.
    pub candidates: u128,
}

impl SurvivalCriterion {
    /// Strictly above one. At or below one the criterion says nothing.
    pub fn fires(&self) -> bool {
        self.rho.value > 1.0
    }

    pub fn describe(&self) -> &'static str {
        if self.fires() {
            "Escaper wins with positive probability"
        } else {
            "criterion silent"
        }
    }
}

/// `gamma[i][j] = d_j G_{i,S_i}(0)` for `j` in `S_i`.
pub fn gamma_matrix(spec: &ModelSpec) -> Vec<Vec<f64>> {
    let m = spec.num_colors();
    let zero = vec![0.0; m];
    (0..m)
        .map(|i| {
            let set = spec.permissible().player_one(i);
            let law = spec.offspring(i);
            (0..m)
                .map(|j| if set.contains(j) { law.pgf_partial_unchecked(set, j, &zero) } else { 0.0 })
                .collect()
        })
        .collect()
}

/// `m2[i][j] = sum over k outside S_i with f(k) = j of m[i][k] gamma[k][j]`.
pub fn survival_matrix(spec: &ModelSpec, f: &[usize], mean: &[Vec<f64>], gamma: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = spec.num_colors();
    let mut out = vec![vec![0.0; m]; m];
    for (i, row) in out.iter_mut().enumerate() {
        for k in spec.permissible().player_two(i).iter() {
            row[f[k]] += mean[i][k] * gamma[k][f[k]];
        }
    }
    out
}

/// Closed-form largest eigenvalue of a non-negative 2x2 matrix.
pub fn spectral_radius_2x2(a: &[Vec<f64>]) -> f64 {
    let tr = a[0][0] + a[1][1];
    let gap = a[0][0] - a[1][1];
    0.5 * (tr + (gap * gap + 4.0 * a[0][1] * a[1][0]).sqrt())
}

/// Spectral radius of a non-negative square matrix.
///
/// The matrix is split into strongly connected blocks; on each block power
/// iteration runs on `A + I`, which is primitive, and the Collatz-Wielandt
/// quotients bracket the root until the bracket is narrower than `tol`.
pub fn spectral_radius(a: &[Vec<f64>], tol: f64) -> SpectralRadius {
    let n = a.len();
    let reach = reachability(a);
    let mut seen = vec![false; n];
    let mut best = SpectralRadius { value: 0.0, lower: 0.0, upper: 0.0, iterations: 0 };
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let block: Vec<usize> = (0..n).filter(|&j| reach[i][j] && reach[j][i]).collect();
        for &j in &block {
            seen[j] = true;
        }
        let r = block_radius(a, &block, tol);
        if r.value > best.value {
            best = SpectralRadius { iterations: best.iterations + r.iterations, ..r };
        } else {
            best.iterations += r.iterations;
        }
    }
    best
}

/// `reach[i][j]`: whether `j` can be reached from `i` along positive
/// entries, in zero or more steps.
fn reachability(a: &[Vec<f64>]) -> Vec<Vec<bool>> {
    let n = a.len();
    let mut reach = vec![vec![false; n]; n];
    for i in 0..n {
        reach[i][i] = true;
        for j in 0..n {
            if a[i][j] > 0.0 {
                reach[i][j] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    reach
}

/// Colors that reach a strongly connected block with spectral radius above
/// one.
pub fn supercritical_support(a: &[Vec<f64>]) -> Vec<bool> {
    let n = a.len();
    let reach = reachability(a);
    let mut out = vec![false; n];
    for i in 0..n {
        let block: Vec<usize> = (0..n).filter(|&j| reach[i][j] && reach[j][i]).collect();
        if block_radius(a, &block, SPECTRAL_TOL).value > 1.0 {
            for (j, o) in out.iter_mut().enumerate() {
                *o |= reach[j][i];
            }
        }
    }
    out
}

fn block_radius(a: &[Vec<f64>], block: &[usize], tol: f64) -> SpectralRadius {
    let n = block.len();
    if n == 1 {
        let v = a[block[0]][block[0]];
        return SpectralRadius { value: v, lower: v, upper: v, iterations: 0 };
    }
    let mut x = vec![1.0; n];
    let mut y = vec![0.0; n];
    let (mut lower, mut upper) = (0.0, f64::INFINITY);
    let mut iterations = 0;
    while iterations < MAX_POWER_ITER {
        iterations += 1;
        for (r, &bi) in block.iter().enumerate() {
            y[r] = x[r] + block.iter().zip(&x).map(|(&bj, xj)| a[bi][bj] * xj).sum::<f64>();
        }
        let ratios = y.iter().zip(&x).map(|(yi, xi)| yi / xi);
        lower = ratios.clone().fold(f64::INFINITY, f64::min) - 1.0;
        upper = ratios.fold(0.0, f64::max) - 1.0;
        let scale = y.iter().cloned().fold(0.0, f64::max);
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / scale;
        }
        if upper - lower <= tol * upper.max(1.0) {
            break;
        }
    }
    SpectralRadius { value: 0.5 * (lower + upper), lower, upper, iterations }
}

/// Enumerates every `f` with `f(i)` in `S_i` in lexicographic order and
/// keeps the first one with the largest spectral radius.
pub fn survival_criterion(spec: &ModelSpec, cap: u128) -> Result<SurvivalCriterion> {
    let m = spec.num_colors();
    let sets: Vec<Vec<usize>> = (0..m).map(|i| spec.permissible().player_one(i).iter().collect()).collect();
    let count: u128 = sets.iter().map(|s| s.len() as u128).product();
    if count > cap {
        return Err(Error::EnumerationCap { count, cap });
    }
    let mean = spec.mean_matrix();
    let gamma = gamma_matrix(spec);
    let mut digits = vec![0usize; m];
    let mut best: Option<(Vec<usize>, Vec<Vec<f64>>, SpectralRadius)> = None;
    loop {
        let f: Vec<usize> = digits.iter().zip(&sets).map(|(&d, s)| s[d]).collect();
        let m2 = survival_matrix(spec, &f, &mean, &gamma);
        let rho = spectral_radius(&m2, SPECTRAL_TOL);
        if m == 2 {
            let closed = spectral_radius_2x2(&m2);
            if (closed - rho.value).abs() > 1e-9 {
                return Err(Error::Consistency(format!(
                    "power iteration gave {} but the 2x2 closed form gives {closed}",
                    rho.value
                )));
            }
        }
        if best.as_ref().map_or(true, |b| rho.value > b.2.value) {
            best = Some((f, m2, rho));
        }
        // Odometer with the last color varying fastest.
        let mut pos = m;
        loop {
            if pos == 0 {
                let (f, m2, rho) = best.expect("at least one candidate");
                let supported = supercritical_support(&m2);
                return Ok(SurvivalCriterion { f, gamma, mean_matrix: mean, m2, rho, supported, candidates: count });
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < sets[pos].len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}
