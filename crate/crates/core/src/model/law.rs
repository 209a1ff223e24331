//! Offspring laws and their probability generating functions.

use crate::error::{Error, Result};
use crate::model::colors::ColorSet;

/// Probabilities must sum to one within this much; smaller deficits are
/// renormalized away.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// One row of a finite offspring table: `counts[k]` children of color `k`
/// are born with probability `prob`.
#[derive(Clone, Debug, PartialEq)]
pub struct TableEntry {
    pub counts: Vec<u32>,
    pub prob: f64,
}

/// Distribution of the offspring-count vector `(X_1, ..., X_m)` of one
/// parent color.
#[derive(Clone, Debug, PartialEq)]
pub enum OffspringLaw {
    /// Finitely supported law on `N_0^m`. Entries are merged by count vector
    /// and normalized at construction.
    Table(Vec<TableEntry>),
    /// Independent `Poisson(means[k])` counts per color.
    Poisson { means: Vec<f64> },
}

impl OffspringLaw {
    /// Builds a table law over `m` colors, merging duplicate count vectors
    /// and dropping zero-probability rows.
    pub fn table(m: usize, entries: Vec<TableEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidSpec("offspring table is empty".into()));
        }
        let mut merged: Vec<TableEntry> = Vec::with_capacity(entries.len());
        let mut total = 0.0;
        for e in entries {
            if e.counts.len() != m {
                return Err(Error::InvalidSpec(format!(
                    "offspring count vector has {} entries, expected {m}",
                    e.counts.len()
                )));
            }
            if !(e.prob.is_finite() && e.prob >= 0.0) {
                return Err(Error::InvalidSpec(format!(
                    "offspring probability {} is not a non-negative number",
                    e.prob
                )));
            }
            total += e.prob;
            if e.prob == 0.0 {
                continue;
            }
            match merged.iter_mut().find(|x| x.counts == e.counts) {
                Some(x) => x.prob += e.prob,
                None => merged.push(e),
            }
        }
        check_total(total, "offspring table")?;
        if needs_rescale(total, merged.len()) {
            for e in &mut merged {
                e.prob /= total;
            }
        }
        merged.sort_by(|a, b| a.counts.cmp(&b.counts));
        Ok(OffspringLaw::Table(merged))
    }

    /// Point mass on a single count vector.
    pub fn point_mass(counts: Vec<u32>) -> Self {
        OffspringLaw::Table(vec![TableEntry { counts, prob: 1.0 }])
    }

    /// Independent Poisson counts with the given per-color means.
    pub fn poisson(means: Vec<f64>) -> Result<Self> {
        if let Some(bad) = means.iter().find(|mu| !(mu.is_finite() && **mu >= 0.0)) {
            return Err(Error::InvalidSpec(format!(
                "Poisson mean {bad} is not a finite non-negative number"
            )));
        }
        Ok(OffspringLaw::Poisson { means })
    }

    pub fn num_colors(&self) -> usize {
        match self {
            OffspringLaw::Table(entries) => entries[0].counts.len(),
            OffspringLaw::Poisson { means } => means.len(),
        }
    }

    fn check_point(&self, set: ColorSet, x: &[f64]) -> Result<()> {
        let m = self.num_colors();
        if set.is_empty() {
            return Err(Error::EmptyRestriction);
        }
        if let Some(c) = set.iter().find(|&c| c >= m) {
            return Err(Error::ColorOutOfRange { color: c, m });
        }
        if x.len() != m {
            return Err(Error::PointLength {
                got: x.len(),
                expected: m,
            });
        }
        for c in set.iter() {
            let v = x[c];
            if !(-NORMALIZATION_TOL..=1.0 + NORMALIZATION_TOL).contains(&v) {
                return Err(Error::PointOutOfRange { color: c, value: v });
            }
        }
        Ok(())
    }

    /// `G_{j,S}(x)`: the pgf of the marginal law of `(X_k : k in S)`.
    ///
    /// `x` is indexed by color; coordinates outside `set` are ignored.
    pub fn pgf(&self, set: ColorSet, x: &[f64]) -> Result<f64> {
        self.check_point(set, x)?;
        Ok(self.pgf_unchecked(set, x))
    }

    pub(crate) fn pgf_unchecked(&self, set: ColorSet, x: &[f64]) -> f64 {
        match self {
            OffspringLaw::Table(entries) => entries
                .iter()
                .map(|e| e.prob * monomial(&e.counts, set, x, None))
                .sum(),
            OffspringLaw::Poisson { means } => {
                let exponent: f64 = set.iter().map(|k| means[k] * (x[k] - 1.0)).sum();
                exponent.exp()
            }
        }
    }

    /// `∂_k G_{j,S}(x)`.
    pub fn pgf_partial(&self, set: ColorSet, k: usize, x: &[f64]) -> Result<f64> {
        self.check_point(set, x)?;
        if !set.contains(k) {
            return Err(Error::IndexNotInRestriction { index: k });
        }
        Ok(self.pgf_partial_unchecked(set, k, x))
    }

    pub(crate) fn pgf_partial_unchecked(&self, set: ColorSet, k: usize, x: &[f64]) -> f64 {
        match self {
            OffspringLaw::Table(entries) => entries
                .iter()
                .filter(|e| e.counts[k] > 0)
                .map(|e| e.prob * f64::from(e.counts[k]) * monomial(&e.counts, set, x, Some(k)))
                .sum(),
            OffspringLaw::Poisson { means } => means[k] * self.pgf_unchecked(set, x),
        }
    }

    /// `E[X_k]`.
    pub fn mean(&self, k: usize) -> f64 {
        match self {
            OffspringLaw::Table(entries) => entries
                .iter()
                .map(|e| e.prob * f64::from(e.counts[k]))
                .sum(),
            OffspringLaw::Poisson { means } => means[k],
        }
    }

    /// `(E[X_1], ..., E[X_m])`.
    pub fn means(&self) -> Vec<f64> {
        (0..self.num_colors()).map(|k| self.mean(k)).collect()
    }

    /// `E[sum_{k in S} X_k]`, finite for every supported representation.
    pub fn restricted_mean(&self, set: ColorSet) -> f64 {
        set.iter().map(|k| self.mean(k)).sum()
    }

    /// Probability of the exact count vector.
    pub fn pmf(&self, counts: &[u32]) -> f64 {
        match self {
            OffspringLaw::Table(entries) => entries
                .iter()
                .find(|e| e.counts == counts)
                .map_or(0.0, |e| e.prob),
            OffspringLaw::Poisson { means } => means
                .iter()
                .zip(counts)
                .map(|(&mu, &n)| poisson_pmf(mu, n))
                .product(),
        }
    }

    pub fn is_table(&self) -> bool {
        matches!(self, OffspringLaw::Table(_))
    }

    /// Whether `G_{j,S}` is convex on `[0,1]^S`.
    ///
    /// Univariate restrictions and Poisson laws are convex outright. For a
    /// table with `|S| >= 2` the Hessian is tested for positive
    /// semi-definiteness on a grid of `grid^|S|` points, so the answer is a
    /// sampled one.
    pub fn pgf_is_convex(&self, set: ColorSet, grid: usize) -> bool {
        if set.len() <= 1 || !self.is_table() {
            return true;
        }
        let m = self.num_colors();
        let members: Vec<usize> = set.iter().collect();
        let r = members.len();
        let grid = grid.max(2);
        let total = grid.pow(r as u32);
        let mut x = vec![1.0; m];
        for idx in 0..total {
            let mut rem = idx;
            for &c in &members {
                x[c] = (rem % grid) as f64 / (grid - 1) as f64;
                rem /= grid;
            }
            let hessian = self.pgf_hessian(set, &x);
            if !is_positive_semidefinite(hessian, r) {
                return false;
            }
        }
        true
    }

    /// Hessian of `G_{j,S}` at `x`, over the members of `set` in ascending
    /// order, row-major.
    fn pgf_hessian(&self, set: ColorSet, x: &[f64]) -> Vec<f64> {
        let members: Vec<usize> = set.iter().collect();
        let r = members.len();
        let mut h = vec![0.0; r * r];
        if let OffspringLaw::Table(entries) = self {
            for e in entries {
                for (a, &ka) in members.iter().enumerate() {
                    for (b, &kb) in members.iter().enumerate() {
                        let coeff = if ka == kb {
                            let n = f64::from(e.counts[ka]);
                            n * (n - 1.0)
                        } else {
                            f64::from(e.counts[ka]) * f64::from(e.counts[kb])
                        };
                        if coeff == 0.0 {
                            continue;
                        }
                        let mut term = e.prob * coeff;
                        for &c in &members {
                            let mut power = e.counts[c] as i32;
                            if c == ka {
                                power -= 1;
                            }
                            if c == kb {
                                power -= 1;
                            }
                            term *= x[c].powi(power);
                        }
                        h[a * r + b] += term;
                    }
                }
            }
        }
        h
    }
}

/// Product of `x_c^{n_c}` over `c` in `set`, with the exponent of `skip`
/// lowered by one (the derivative's monomial). `0^0 = 1`.
fn monomial(counts: &[u32], set: ColorSet, x: &[f64], skip: Option<usize>) -> f64 {
    set.iter()
        .map(|c| {
            let n = counts[c] as i32 - i32::from(skip == Some(c));
            if n == 0 {
                1.0
            } else {
                x[c].powi(n)
            }
        })
        .product()
}

fn check_total(total: f64, what: &str) -> Result<()> {
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::InvalidSpec(format!(
            "{what} sums to {total}, not 1 (tolerance {NORMALIZATION_TOL:e})"
        )));
    }
    Ok(())
}

/// Validates and renormalizes a probability vector.
pub(crate) fn normalize_probabilities(p: &[f64], what: &str) -> Result<Vec<f64>> {
    if let Some(bad) = p.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::InvalidSpec(format!(
            "{what} has entry {bad}, not a non-negative number"
        )));
    }
    let total: f64 = p.iter().sum();
    check_total(total, what)?;
    if !needs_rescale(total, p.len()) {
        return Ok(p.to_vec());
    }
    Ok(p.iter().map(|v| v / total).collect())
}

/// Totals within rounding of one are left alone, so normalizing twice
/// changes nothing and specs survive a JSON round trip bit for bit.
fn needs_rescale(total: f64, n: usize) -> bool {
    (total - 1.0).abs() > 2.0 * n as f64 * f64::EPSILON
}

pub(crate) fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| f64::from(k).ln()).sum()
}

pub(crate) fn poisson_pmf(mu: f64, n: u32) -> f64 {
    if mu == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    (-mu + f64::from(n) * mu.ln() - ln_factorial(n)).exp()
}

/// Chernoff bound on `P[Poisson(mu) >= n]`, valid for `n > mu`.
pub(crate) fn poisson_upper_tail_bound(mu: f64, n: u32) -> f64 {
    if mu == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let n = f64::from(n);
    if n <= mu {
        return 1.0;
    }
    (-mu + n * (1.0 + mu.ln() - n.ln())).exp().min(1.0)
}

/// Smallest `n` with `P[Poisson(mu) > n] < eps`, certified by the Chernoff
/// bound.
pub(crate) fn poisson_truncation(mu: f64, eps: f64) -> u32 {
    let mut n = mu.ceil() as u32;
    while poisson_upper_tail_bound(mu, n + 1) >= eps {
        n += 1;
    }
    n
}

fn is_positive_semidefinite(h: Vec<f64>, r: usize) -> bool {
    // Symmetric Jacobi sweeps; r is tiny.
    let mut a = h;
    for _ in 0..64 {
        let mut off = 0.0;
        for p in 0..r {
            for q in (p + 1)..r {
                off += a[p * r + q] * a[p * r + q];
            }
        }
        if off < 1e-24 {
            break;
        }
        for p in 0..r {
            for q in (p + 1)..r {
                let apq = a[p * r + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * r + q] - a[p * r + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..r {
                    let akp = a[k * r + p];
                    let akq = a[k * r + q];
                    a[k * r + p] = c * akp - s * akq;
                    a[k * r + q] = s * akp + c * akq;
                }
                for k in 0..r {
                    let apk = a[p * r + k];
                    let aqk = a[q * r + k];
                    a[p * r + k] = c * apk - s * aqk;
                    a[q * r + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let scale = (0..r).map(|i| a[i * r + i].abs()).fold(1.0, f64::max);
    (0..r).all(|i| a[i * r + i] >= -1e-12 * scale)
}
