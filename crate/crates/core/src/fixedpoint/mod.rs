//! Game maps, their extremal fixed points, and the finite-depth recursions.
//!
//! The win probability of the first mover is the least fixed point of the
//! game map and its loss probability is one minus the greatest. The draw
//! probability is the gap between the two.

mod maps;
mod outcomes;
mod solver;
mod truncated;

pub use maps::{FirstMover, GameKind, GameMap, MonotoneMap};
pub use outcomes::{solve_game, solve_outcomes, GameOutcome, OutcomeTable, DRAW_CLAMP_TOL};
pub use solver::{greatest_fixed_point, iterate_n, least_fixed_point, FixedPointResult, IterOptions};
pub use truncated::{truncated_sequence, truncated_values, TruncatedValues};
