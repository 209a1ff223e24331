use std::fmt::Write as _;
use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::model::{ModelSpec, OffspringLaw};

/// Default cap on the expected number of sampled vertices.
pub const DEFAULT_POPULATION_CAP: f64 = 1e7;

/// Stream reserved for the root color, out of reach of vertex indices.
const ROOT_STREAM: u64 = u64::MAX;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleOptions {
    /// Fixes the root color instead of drawing it from the root law.
    pub root_color: Option<usize>,
    /// Refuse to sample when the expected population exceeds this.
    pub population_cap: f64,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions {
            root_color: None,
            population_cap: DEFAULT_POPULATION_CAP,
        }
    }
}

/// A realization of the tree down to `truncation_depth`, stored in
/// breadth-first order so that each vertex's children are contiguous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledTree {
    colors: Vec<u32>,
    parents: Vec<Option<u32>>,
    depths: Vec<u32>,
    children: Vec<Range<u32>>,
    truncation_depth: usize,
}

impl SampledTree {
    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn truncation_depth(&self) -> usize {
        self.truncation_depth
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v] as usize
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parents[v].map(|p| p as usize)
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depths[v] as usize
    }

    pub fn children(&self, v: usize) -> Range<usize> {
        let r = &self.children[v];
        r.start as usize..r.end as usize
    }

    /// One line per vertex: `index parent depth color`, with parent `-` for
    /// the root and colors 1-indexed.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for v in 0..self.len() {
            let parent = self.parent(v).map_or_else(|| "-".to_string(), |p| p.to_string());
            let _ = writeln!(out, "{v} {parent} {} {}", self.depth(v), self.color(v) + 1);
        }
        out
    }

    /// Builds a tree from a parent list in breadth-first order, for tests
    /// and hand-made examples. `parents[0]` must be `None` and parents must
    /// precede their children.
    pub fn from_parents(colors: Vec<usize>, parents: Vec<Option<usize>>, truncation_depth: usize) -> Result<Self> {
        let n = colors.len();
        if n == 0 || parents.len() != n || parents[0].is_some() {
            return Err(Error::InvalidArgument("tree needs a root at index 0".into()));
        }
        let mut depths = vec![0u32; n];
        let mut children = vec![0u32..0u32; n];
        for v in 1..n {
            let p = parents[v].ok_or_else(|| Error::InvalidArgument(format!("vertex {v} has no parent")))?;
            if p >= v {
                return Err(Error::InvalidArgument(format!("parent of {v} does not precede it")));
            }
            if v > 1 && parents[v - 1].is_some_and(|q| q > p) {
                return Err(Error::InvalidArgument("vertices are not in breadth-first order".into()));
            }
            depths[v] = depths[p] + 1;
            if depths[v] as usize > truncation_depth {
                return Err(Error::InvalidArgument(format!("vertex {v} lies below the truncation depth")));
            }
            let r = &mut children[p];
            if r.start == r.end {
                *r = v as u32..v as u32 + 1;
            } else {
                r.end = v as u32 + 1;
            }
        }
        Ok(SampledTree {
            colors: colors.into_iter().map(|c| c as u32).collect(),
            parents: parents.into_iter().map(|p| p.map(|q| q as u32)).collect(),
            depths,
            children,
            truncation_depth,
        })
    }
}

/// Per-color offspring samplers.
pub(crate) enum OffspringSampler {
    Table { cumulative: Vec<f64>, counts: Vec<Vec<u32>> },
    Poisson(Vec<Option<Poisson<f64>>>),
}

impl OffspringSampler {
    pub(crate) fn new(law: &OffspringLaw) -> Self {
        match law {
            OffspringLaw::Table(rows) => {
                let mut acc = 0.0;
                let cumulative = rows
                    .iter()
                    .map(|r| {
                        acc += r.prob;
                        acc
                    })
                    .collect();
                OffspringSampler::Table {
                    cumulative,
                    counts: rows.iter().map(|r| r.counts.clone()).collect(),
                }
            }
            OffspringLaw::Poisson { means } => OffspringSampler::Poisson(
                means
                    .iter()
                    .map(|&mu| if mu > 0.0 { Poisson::new(mu).ok() } else { None })
                    .collect(),
            ),
        }
    }

    pub(crate) fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [u32]) {
        match self {
            OffspringSampler::Table { cumulative, counts } => {
                let u = rng.random::<f64>() * cumulative[cumulative.len() - 1];
                let i = cumulative.partition_point(|&c| c <= u).min(counts.len() - 1);
                out.copy_from_slice(&counts[i]);
            }
            OffspringSampler::Poisson(dists) => {
                for (o, d) in out.iter_mut().zip(dists) {
                    *o = d.as_ref().map_or(0, |d| d.sample(rng) as u32);
                }
            }
        }
    }
}

/// Samples a tree; the same `(spec, depth, seed, options)` always gives the
/// same tree.
///
/// Each vertex draws its offspring from its own stream of a ChaCha8
/// generator keyed by `seed`, indexed by the vertex's breadth-first
/// position.
pub fn sample_tree(spec: &ModelSpec, depth: usize, seed: u64, options: SampleOptions) -> Result<SampledTree> {
    check_population(spec, depth, options)?;
    let samplers: Vec<OffspringSampler> = spec.offspring_laws().iter().map(OffspringSampler::new).collect();
    Ok(sample_with(spec, &samplers, depth, seed, options.root_color))
}

pub(crate) fn check_population(spec: &ModelSpec, depth: usize, options: SampleOptions) -> Result<()> {
    if let Some(c) = options.root_color {
        if c >= spec.num_colors() {
            return Err(Error::ColorOutOfRange { color: c, m: spec.num_colors() });
        }
    }
    let expected = spec.expected_population(options.root_color, depth);
    if expected > options.population_cap {
        return Err(Error::PopulationCap {
            expected,
            cap: options.population_cap,
        });
    }
    Ok(())
}

pub(crate) fn sample_with(
    spec: &ModelSpec,
    samplers: &[OffspringSampler],
    depth: usize,
    seed: u64,
    root_color: Option<usize>,
) -> SampledTree {
    let m = spec.num_colors();
    let template = ChaCha8Rng::seed_from_u64(seed);
    let root = match root_color {
        Some(c) => c,
        None => {
            let mut rng = template.clone();
            rng.set_stream(ROOT_STREAM);
            let u = rng.random::<f64>();
            let mut acc = 0.0;
            let law = spec.root_law();
            law.iter()
                .position(|p| {
                    acc += p;
                    u < acc
                })
                .unwrap_or_else(|| law.iter().rposition(|p| *p > 0.0).unwrap_or(0))
        }
    };
    let mut tree = SampledTree {
        colors: vec![root as u32],
        parents: vec![None],
        depths: vec![0],
        children: Vec::new(),
        truncation_depth: depth,
    };
    let mut counts = vec![0u32; m];
    let mut v = 0;
    while v < tree.colors.len() {
        let start = tree.colors.len() as u32;
        let d = tree.depths[v];
        if (d as usize) < depth {
            let mut rng = template.clone();
            rng.set_stream(v as u64);
            samplers[tree.colors[v] as usize].sample_into(&mut rng, &mut counts);
            for (c, &n) in counts.iter().enumerate() {
                for _ in 0..n {
                    tree.colors.push(c as u32);
                    tree.parents.push(Some(v as u32));
                    tree.depths.push(d + 1);
                }
            }
        }
        tree.children.push(start..tree.colors.len() as u32);
        v += 1;
    }
    tree
}
