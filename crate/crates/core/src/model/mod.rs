//! Multi-type Galton-Watson trees: colors, permissible sets, offspring laws.
//!
//! A [`ModelSpec`] fixes the number of colors `m`, the law of the root's
//! color, one [`OffspringLaw`] per parent color and the [`PermissibleSets`].
//! Everything downstream (game maps, simulation, the case studies) reads the
//! model only through the pgf methods exposed here.

mod colors;
mod distance;
mod io;
mod law;
pub mod random;

use std::ops::Index;

pub use colors::{ColorSet, PermissibleSets, MAX_COLORS};
pub use distance::{d0_distance, d0_distance_with_slack, tv_distance, TvDistance, POISSON_TAIL_EPS};
pub use io::{LawFile, SpecFile, TableEntryFile};
pub use law::{OffspringLaw, TableEntry, NORMALIZATION_TOL};

use crate::error::{Error, Result};


/// A point of `[0,1]^m` indexed by color.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    /// Entries within `1e-12` of `[0, 1]` are clamped into it; anything
    /// further out is rejected.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let mut values = values;
        for (c, v) in values.iter_mut().enumerate() {
            if !(-NORMALIZATION_TOL..=1.0 + NORMALIZATION_TOL).contains(v) {
                return Err(Error::PointOutOfRange { color: c, value: *v });
            }
            *v = v.clamp(0.0, 1.0);
        }
        Ok(ProbVector(values))
    }

    pub fn zeros(m: usize) -> Self {
        ProbVector(vec![0.0; m])
    }

    pub fn ones(m: usize) -> Self {
        ProbVector(vec![1.0; m])
    }

    /// Wraps values already known to lie in the cube.
    pub(crate) fn from_clamped(mut values: Vec<f64>) -> Self {
        for v in &mut values {
            *v = v.clamp(0.0, 1.0);
        }
        ProbVector(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// `1 - self`, componentwise.
    #[must_use]
    pub fn complement(&self) -> Self {
        ProbVector(self.0.iter().map(|v| 1.0 - v).collect())
    }

    /// Componentwise `self <= other + tol`.
    pub fn precedes(&self, other: &ProbVector, tol: f64) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a <= *b + tol)
    }

    pub fn sup_distance(&self, other: &ProbVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for ProbVector {
    type Output = f64;

    fn index(&self, color: usize) -> &f64 {
        &self.0[color]
    }
}

/// The rooted multi-type Galton-Watson tree together with the game rules.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpec {
    m: usize,
    root_law: Vec<f64>,
    offspring: Vec<OffspringLaw>,
    permissible: PermissibleSets,
}

impl ModelSpec {
    pub fn new(
        root_law: Vec<f64>,
        offspring: Vec<OffspringLaw>,
        permissible: PermissibleSets,
    ) -> Result<Self> {
        let m = permissible.num_colors();
        colors::validate_color_count(m)?;
        if root_law.len() != m {
            return Err(Error::InvalidSpec(format!(
                "root law has {} entries, expected {m}",
                root_law.len()
            )));
        }
        let root_law = law::normalize_probabilities(&root_law, "root law")?;
        if offspring.len() != m {
            return Err(Error::InvalidSpec(format!(
                "expected {m} offspring laws, got {}",
                offspring.len()
            )));
        }
        for (j, law) in offspring.iter().enumerate() {
            if law.num_colors() != m {
                return Err(Error::InvalidSpec(format!(
                    "offspring law of color {} covers {} colors, expected {m}",
                    j + 1,
                    law.num_colors()
                )));
            }
        }
        Ok(ModelSpec {
            m,
            root_law,
            offspring,
            permissible,
        })
    }

    /// Same model with a uniform root law.
    pub fn with_uniform_root(offspring: Vec<OffspringLaw>, permissible: PermissibleSets) -> Result<Self> {
        let m = permissible.num_colors();
        ModelSpec::new(vec![1.0 / m as f64; m], offspring, permissible)
    }

    pub fn num_colors(&self) -> usize {
        self.m
    }

    pub fn root_law(&self) -> &[f64] {
        &self.root_law
    }

    pub fn offspring(&self, color: usize) -> &OffspringLaw {
        &self.offspring[color]
    }

    pub fn offspring_laws(&self) -> &[OffspringLaw] {
        &self.offspring
    }

    pub fn permissible(&self) -> &PermissibleSets {
        &self.permissible
    }

    /// Replaces the offspring laws, keeping colors, root law and rules.
    pub fn with_offspring(&self, offspring: Vec<OffspringLaw>) -> Result<Self> {
        ModelSpec::new(self.root_law.clone(), offspring, self.permissible.clone())
    }

    /// `alpha_j = G_{j,S_j}(0)` and `beta_j = G_{j,[m]\S_j}(0)`: the chance
    /// that a color-`j` vertex has no child player one (resp. player two)
    /// may move to.
    pub fn alpha_beta(&self) -> (ProbVector, ProbVector) {
        let zero = vec![0.0; self.m];
        let alpha = (0..self.m)
            .map(|j| self.offspring[j].pgf_unchecked(self.permissible.player_one(j), &zero))
            .collect();
        let beta = (0..self.m)
            .map(|j| self.offspring[j].pgf_unchecked(self.permissible.player_two(j), &zero))
            .collect();
        (ProbVector::from_clamped(alpha), ProbVector::from_clamped(beta))
    }

    /// Row `j` of the mean matrix: `(E[X_k | color j] : k)`.
    pub fn mean_vector(&self, color: usize) -> Vec<f64> {
        self.offspring[color].means()
    }

    /// The full mean matrix, `mean_matrix()[i][k] = E[X_k | color i]`.
    pub fn mean_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.m).map(|i| self.mean_vector(i)).collect()
    }

    /// Expected number of vertices in generations `0..=depth` when the root
    /// has the given color (or follows the root law when `None`).
    pub fn expected_population(&self, root: Option<usize>, depth: usize) -> f64 {
        let mut generation: Vec<f64> = match root {
            Some(c) => (0..self.m).map(|k| if k == c { 1.0 } else { 0.0 }).collect(),
            None => self.root_law.clone(),
        };
        let means = self.mean_matrix();
        let mut total: f64 = generation.iter().sum();
        for _ in 0..depth {
            let mut next = vec![0.0; self.m];
            for (i, w) in generation.iter().enumerate() {
                if *w == 0.0 {
                    continue;
                }
                for (k, mu) in means[i].iter().enumerate() {
                    next[k] += w * mu;
                }
            }
            generation = next;
            total += generation.iter().sum::<f64>();
            if !total.is_finite() {
                return f64::INFINITY;
            }
        }
        total
    }
}

/// Two-color model with `S_b = {b}`, `S_r = {r}` (blue is color 0).
pub(crate) fn monochromatic_two_color(blue: OffspringLaw, red: OffspringLaw) -> Result<ModelSpec> {
    ModelSpec::with_uniform_root(vec![blue, red], PermissibleSets::monochromatic(2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn binary_blue(p0: f64, pbb: f64, prr: f64, pbr: f64) -> OffspringLaw {
        OffspringLaw::table(
            2,
            vec![
                TableEntry { counts: vec![0, 0], prob: p0 },
                TableEntry { counts: vec![2, 0], prob: pbb },
                TableEntry { counts: vec![0, 2], prob: prr },
                TableEntry { counts: vec![1, 1], prob: pbr },
            ],
        )
        .unwrap()
    }

    #[test]
    fn alpha_beta_binary() {
        let (p0, pbb, prr, pbr) = (0.1, 0.3, 0.2, 0.4);
        let spec = monochromatic_two_color(binary_blue(p0, pbb, prr, pbr), binary_blue(0.25, 0.25, 0.25, 0.25)).unwrap();
        let (alpha, beta) = spec.alpha_beta();
        assert_abs_diff_eq!(alpha[0], p0 + prr, epsilon = 1e-15);
        assert_abs_diff_eq!(beta[0], p0 + pbb, epsilon = 1e-15);
    }

    #[test]
    fn alpha_beta_childless() {
        let spec = monochromatic_two_color(
            OffspringLaw::point_mass(vec![0, 0]),
            OffspringLaw::point_mass(vec![0, 0]),
        )
        .unwrap();
        let (alpha, beta) = spec.alpha_beta();
        assert_eq!(alpha.as_slice(), &[1.0, 1.0]);
        assert_eq!(beta.as_slice(), &[1.0, 1.0]);
    }

    #[test]
    fn alpha_poisson_against_truncated_table() {
        let lambda = 2.0;
        let pb = 0.5;
        let poisson = OffspringLaw::poisson(vec![lambda * pb, lambda * (1.0 - pb)]).unwrap();
        let spec = monochromatic_two_color(poisson.clone(), poisson).unwrap();
        let (alpha, _) = spec.alpha_beta();
        assert_abs_diff_eq!(alpha[0], (-1.0f64).exp(), epsilon = 1e-15);

        // Table built from the Poisson pmf on {0..30}^2, renormalized.
        let mut entries = Vec::new();
        let mut total = 0.0;
        for a in 0..=30u32 {
            for b in 0..=30u32 {
                let p = law::poisson_pmf(1.0, a) * law::poisson_pmf(1.0, b);
                total += p;
                entries.push(TableEntry { counts: vec![a, b], prob: p });
            }
        }
        for e in &mut entries {
            e.prob /= total;
        }
        let table = OffspringLaw::table(2, entries).unwrap();
        let alpha_table = table.pgf(ColorSet::singleton(0), &[0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(alpha_table, alpha[0], epsilon = 1e-9);
    }

    #[test]
    fn root_law_validation() {
        let laws = vec![OffspringLaw::point_mass(vec![0, 0]), OffspringLaw::point_mass(vec![0, 0])];
        let perm = PermissibleSets::monochromatic(2).unwrap();
        assert!(ModelSpec::new(vec![0.5, 0.6], laws.clone(), perm.clone()).is_err());
        assert!(ModelSpec::new(vec![1.0], laws.clone(), perm.clone()).is_err());
        assert!(ModelSpec::new(vec![0.5, 0.5], laws[..1].to_vec(), perm.clone()).is_err());
        assert!(ModelSpec::new(vec![0.5, 0.5], laws, perm).is_ok());
    }

    #[test]
    fn prob_vector_clamps() {
        let v = ProbVector::new(vec![-1e-13, 1.0 + 1e-13]).unwrap();
        assert_eq!(v.as_slice(), &[0.0, 1.0]);
        assert!(ProbVector::new(vec![-1e-6]).is_err());
    }

    #[test]
    fn population_of_poisson_two() {
        let law = OffspringLaw::poisson(vec![1.0, 1.0]).unwrap();
        let spec = monochromatic_two_color(law.clone(), law).unwrap();
        assert_abs_diff_eq!(spec.expected_population(Some(0), 10), 2047.0, epsilon = 1e-9);
    }
}
