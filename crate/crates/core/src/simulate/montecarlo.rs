use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fixedpoint::{FirstMover, GameKind};
use crate::model::ModelSpec;
use crate::simulate::solve::{label_vertices, GameLabel};
use crate::simulate::tree::{check_population, sample_with, OffspringSampler, SampleOptions, DEFAULT_POPULATION_CAP};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McOptions {
    pub root_color: usize,
    pub depth: usize,
    pub samples: u64,
    pub seed: u64,
    pub population_cap: f64,
}

impl McOptions {
    pub fn new(root_color: usize, depth: usize, samples: u64, seed: u64) -> Self {
        McOptions {
            root_color,
            depth,
            samples,
            seed,
            population_cap: DEFAULT_POPULATION_CAP,
        }
    }
}

/// Label counts at the root over independent trees.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McEstimate {
    pub kind: GameKind,
    pub mover: FirstMover,
    pub samples: u64,
    pub wins: u64,
    pub losses: u64,
    pub draws: u64,
}

impl McEstimate {
    pub fn win_hat(&self) -> f64 {
        self.wins as f64 / self.samples as f64
    }

    pub fn lose_hat(&self) -> f64 {
        self.losses as f64 / self.samples as f64
    }

    pub fn draw_hat(&self) -> f64 {
        self.draws as f64 / self.samples as f64
    }

    /// Binomial standard error `sqrt(p (1 - p) / N)` at the empirical
    /// frequency.
    pub fn win_se(&self) -> f64 {
        binomial_se(self.win_hat(), self.samples)
    }

    pub fn lose_se(&self) -> f64 {
        binomial_se(self.lose_hat(), self.samples)
    }

    pub fn draw_se(&self) -> f64 {
        binomial_se(self.draw_hat(), self.samples)
    }
}

pub fn binomial_se(p: f64, samples: u64) -> f64 {
    (p * (1.0 - p) / samples as f64).sqrt()
}

/// Estimates the first mover's chances in one game from `samples` trees
/// with the root color fixed.
pub fn monte_carlo(spec: &ModelSpec, kind: GameKind, mover: FirstMover, options: McOptions) -> Result<McEstimate> {
    let all = run(spec, &[(kind, mover)], options)?;
    Ok(all[0])
}

/// Every game and first mover, each evaluated on the same trees.
pub fn monte_carlo_all(spec: &ModelSpec, options: McOptions) -> Result<Vec<McEstimate>> {
    let games: Vec<(GameKind, FirstMover)> = GameKind::ALL
        .into_iter()
        .flat_map(|k| FirstMover::ALL.into_iter().map(move |f| (k, f)))
        .collect();
    run(spec, &games, options)
}

/// Seed of the `index`-th tree of a run.
pub fn tree_seed(seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng.next_u64()
}

fn run(spec: &ModelSpec, games: &[(GameKind, FirstMover)], options: McOptions) -> Result<Vec<McEstimate>> {
    if options.samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    check_population(
        spec,
        options.depth,
        SampleOptions {
            root_color: Some(options.root_color),
            population_cap: options.population_cap,
        },
    )?;
    let samplers: Vec<OffspringSampler> = spec.offspring_laws().iter().map(OffspringSampler::new).collect();
    let zero = vec![[0u64; 3]; games.len()];
    let counts = (0..options.samples)
        .into_par_iter()
        .fold(
            || zero.clone(),
            |mut acc, i| {
                let tree = sample_with(
                    spec,
                    &samplers,
                    options.depth,
                    tree_seed(options.seed, i),
                    Some(options.root_color),
                );
                for (slot, &(kind, mover)) in acc.iter_mut().zip(games) {
                    let label = label_vertices(&tree, kind, mover, spec.permissible())[0];
                    let k = match label {
                        GameLabel::Win => 0,
                        GameLabel::Lose => 1,
                        GameLabel::Draw => 2,
                    };
                    slot[k] += 1;
                }
                acc
            },
        )
        .reduce(
            || zero.clone(),
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    for k in 0..3 {
                        x[k] += y[k];
                    }
                }
                a
            },
        );
    Ok(games
        .iter()
        .zip(counts)
        .map(|(&(kind, mover), [wins, losses, draws])| McEstimate {
            kind,
            mover,
            samples: options.samples,
            wins,
            losses,
            draws,
        })
        .collect())
}
