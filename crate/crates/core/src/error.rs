use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A model specification violated one of its invariants.
    #[error("invalid model: {0}")]
    InvalidSpec(String),

    #[error("pgf restriction must contain at least one color")]
    EmptyRestriction,

    #[error("color {color} is outside the model (m = {m})")]
    ColorOutOfRange { color: usize, m: usize },

    #[error("pgf argument for color {color} is {value}, outside [0, 1]")]
    PointOutOfRange { color: usize, value: f64 },

    #[error("point has {got} coordinates, expected {expected}")]
    PointLength { got: usize, expected: usize },

    #[error("differentiation index {index} is not in the restriction")]
    IndexNotInRestriction { index: usize },

    /// Two models cannot be compared (different `m` or permissible sets).
    #[error("models are not comparable: {0}")]
    Mismatch(String),

    #[error("expected population {expected:.3e} exceeds the cap {cap:.3e}")]
    PopulationCap { expected: f64, cap: f64 },

    #[error("{count} candidate maps exceed the enumeration cap {cap}")]
    EnumerationCap { count: u128, cap: u128 },

    /// Two routes that must agree did not.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("spec file: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
