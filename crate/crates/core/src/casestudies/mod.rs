//! The two worked two-color examples: binary trees and Poisson trees.

mod binary;
mod poisson;

pub use binary::{binary_to_spec, binary_verdict, BinaryParams, BinaryVerdict, BINARY_CROSS_CHECK_TOL};
pub use poisson::{
    poisson_conditions, poisson_maps, poisson_report, poisson_scalar_fixed_points, poisson_to_spec,
    scalar_fixed_points, ConditionRow, PoissonChain, PoissonConditions, PoissonMap, PoissonParams, PoissonReport,
    ScalarFixedPoints, ScalarRoot, MAX_LAMBDA, POISSON_CROSS_CHECK_TOL, ROOT_TOL,
};

/// Grid used by the scalar root scan unless told otherwise.
pub const DEFAULT_GRID: usize = 10_000;
