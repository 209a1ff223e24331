//! Random models for property sweeps and statistical tests.

use rand::Rng;

use crate::model::colors::{ColorSet, PermissibleSets};
use crate::model::law::{OffspringLaw, TableEntry};
use crate::model::ModelSpec;

/// Shape of the random models drawn by [`random_table_spec`] and
/// [`random_poisson_spec`].
#[derive(Clone, Debug)]
pub struct RandomSpecShape {
    /// Number of colors, drawn uniformly from this inclusive range.
    pub colors: (usize, usize),
    /// Table rows per law, drawn uniformly from `1..=max_support`.
    pub max_support: usize,
    /// Largest per-color count in a table row.
    pub max_count: u32,
    /// Largest per-color Poisson mean.
    pub max_mean: f64,
}

impl Default for RandomSpecShape {
    fn default() -> Self {
        RandomSpecShape {
            colors: (2, 3),
            max_support: 3,
            max_count: 2,
            max_mean: 1.5,
        }
    }
}

/// A uniformly chosen non-empty proper subset of `0..m`.
pub fn random_proper_subset<R: Rng + ?Sized>(rng: &mut R, m: usize) -> ColorSet {
    let full = ColorSet::full(m).bits();
    loop {
        let bits = rng.random::<u64>() & full;
        if bits != 0 && bits != full {
            return ColorSet::from_colors((0..m).filter(|c| bits & (1u64 << c) != 0));
        }
    }
}

pub fn random_permissible<R: Rng + ?Sized>(rng: &mut R, m: usize) -> PermissibleSets {
    let sets = (0..m).map(|_| random_proper_subset(rng, m)).collect();
    PermissibleSets::new(m, sets).expect("random subsets are proper and non-empty")
}

/// A probability vector with random positive weights.
pub fn random_simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// A table law with `1..=max_support` distinct rows.
pub fn random_table_law<R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    max_support: usize,
    max_count: u32,
) -> OffspringLaw {
    let rows = rng.random_range(1..=max_support.max(1));
    let probs = random_simplex(rng, rows);
    let entries = probs
        .into_iter()
        .map(|prob| TableEntry {
            counts: (0..m).map(|_| rng.random_range(0..=max_count)).collect(),
            prob,
        })
        .collect();
    OffspringLaw::table(m, entries).expect("random tables are normalized")
}

pub fn random_poisson_law<R: Rng + ?Sized>(rng: &mut R, m: usize, max_mean: f64) -> OffspringLaw {
    OffspringLaw::poisson((0..m).map(|_| rng.random::<f64>() * max_mean).collect())
        .expect("random means are finite")
}

fn random_m<R: Rng + ?Sized>(rng: &mut R, shape: &RandomSpecShape) -> usize {
    rng.random_range(shape.colors.0.max(2)..=shape.colors.1.max(shape.colors.0).max(2))
}

pub fn random_table_spec<R: Rng + ?Sized>(rng: &mut R, shape: &RandomSpecShape) -> ModelSpec {
    let m = random_m(rng, shape);
    let laws = (0..m)
        .map(|_| random_table_law(rng, m, shape.max_support, shape.max_count))
        .collect();
    let permissible = random_permissible(rng, m);
    let root = random_simplex(rng, m);
    ModelSpec::new(root, laws, permissible).expect("random specs are valid")
}

pub fn random_poisson_spec<R: Rng + ?Sized>(rng: &mut R, shape: &RandomSpecShape) -> ModelSpec {
    let m = random_m(rng, shape);
    let laws = (0..m)
        .map(|_| random_poisson_law(rng, m, shape.max_mean))
        .collect();
    let permissible = random_permissible(rng, m);
    let root = random_simplex(rng, m);
    ModelSpec::new(root, laws, permissible).expect("random specs are valid")
}
