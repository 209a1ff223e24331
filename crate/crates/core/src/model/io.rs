//! JSON model-spec files.
//!
//! ```json
//! {
//!   "m": 2,
//!   "root_law": [0.5, 0.5],
//!   "permissible": [[1], [2]],
//!   "offspring": [
//!     { "table": [ { "counts": [0, 0], "prob": 0.5 }, { "counts": [1, 1], "prob": 0.5 } ] },
//!     { "poisson": { "means": [1.0, 1.5] } }
//!   ]
//! }
//! ```
//!
//! Colors in `permissible` are 1-indexed, like everything user-facing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::colors::{ColorSet, PermissibleSets};
use crate::model::law::{OffspringLaw, TableEntry};
use crate::model::ModelSpec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub m: usize,
    pub root_law: Vec<f64>,
    pub permissible: Vec<Vec<usize>>,
    pub offspring: Vec<LawFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum LawFile {
    Table(Vec<TableEntryFile>),
    Poisson { means: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntryFile {
    pub counts: Vec<u32>,
    pub prob: f64,
}

impl SpecFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec files always serialize")
    }

    /// Validates the file contents into a model.
    pub fn into_spec(self) -> Result<ModelSpec> {
        let m = self.m;
        if self.permissible.len() != m {
            return Err(Error::InvalidSpec(format!(
                "expected {m} permissible sets, got {}",
                self.permissible.len()
            )));
        }
        let mut sets = Vec::with_capacity(m);
        for (j, colors) in self.permissible.iter().enumerate() {
            let mut set = ColorSet::empty();
            for &c in colors {
                if c == 0 || c > m {
                    return Err(Error::InvalidSpec(format!(
                        "permissible set of color {} names color {c}, outside 1..={m}",
                        j + 1
                    )));
                }
                set = set.with(c - 1);
            }
            sets.push(set);
        }
        let permissible = PermissibleSets::new(m, sets)?;
        let offspring = self
            .offspring
            .into_iter()
            .map(|law| match law {
                LawFile::Table(rows) => OffspringLaw::table(
                    m,
                    rows.into_iter()
                        .map(|r| TableEntry { counts: r.counts, prob: r.prob })
                        .collect(),
                ),
                LawFile::Poisson { means } => {
                    if means.len() != m {
                        return Err(Error::InvalidSpec(format!(
                            "Poisson law has {} means, expected {m}",
                            means.len()
                        )));
                    }
                    OffspringLaw::poisson(means)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        ModelSpec::new(self.root_law, offspring, permissible)
    }
}

impl From<&ModelSpec> for SpecFile {
    fn from(spec: &ModelSpec) -> Self {
        SpecFile {
            m: spec.num_colors(),
            root_law: spec.root_law().to_vec(),
            permissible: spec
                .permissible()
                .sets()
                .iter()
                .map(|s| s.iter().map(|c| c + 1).collect())
                .collect(),
            offspring: spec
                .offspring_laws()
                .iter()
                .map(|law| match law {
                    OffspringLaw::Table(rows) => LawFile::Table(
                        rows.iter()
                            .map(|r| TableEntryFile { counts: r.counts.clone(), prob: r.prob })
                            .collect(),
                    ),
                    OffspringLaw::Poisson { means } => LawFile::Poisson { means: means.clone() },
                })
                .collect(),
        }
    }
}

impl ModelSpec {
    /// Parses a JSON spec file.
    pub fn from_json(text: &str) -> Result<Self> {
        SpecFile::from_json(text)?.into_spec()
    }

    pub fn to_json(&self) -> String {
        SpecFile::from(self).to_json()
    }
}
