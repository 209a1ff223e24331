//! Sampled finite trees, exact game solving on them, and Monte Carlo
//! estimates of the finite-depth probabilities.

mod montecarlo;
mod solve;
mod tree;

pub use montecarlo::{binomial_se, monte_carlo, monte_carlo_all, tree_seed, McEstimate, McOptions};
pub use solve::{label_vertices, solve_game_on_tree, GameLabel};
pub use tree::{sample_tree, SampleOptions, SampledTree, DEFAULT_POPULATION_CAP};
