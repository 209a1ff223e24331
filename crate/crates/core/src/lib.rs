//! Win, lose and draw probabilities of the normal, misère and escape games
//! played on rooted multi-type Galton-Watson trees.

pub mod casestudies;
pub mod error;
pub mod fixedpoint;
pub mod model;
pub mod simulate;
pub mod theorems;

pub use error::{Error, Result};
pub use model::{ColorSet, ModelSpec, OffspringLaw, PermissibleSets, ProbVector, TableEntry};

/// The guide's chapters, compiled so that their snippets run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/spec-files.md")]
    mod spec_files {}
    #[doc = include_str!("../../../book/src/games.md")]
    mod games {}
    #[doc = include_str!("../../../book/src/finite-depth.md")]
    mod finite_depth {}
    #[doc = include_str!("../../../book/src/case-studies.md")]
    mod case_studies {}
    #[doc = include_str!("../../../book/src/comparisons.md")]
    mod comparisons {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
