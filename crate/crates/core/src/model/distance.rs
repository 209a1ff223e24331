//! Total variation between offspring laws and the `d0` law metric.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::model::law::{poisson_pmf, poisson_truncation, poisson_upper_tail_bound, OffspringLaw};
use crate::model::ModelSpec;

/// Tail mass left outside the enumerated box of a Poisson law.
pub const POISSON_TAIL_EPS: f64 = 1e-10;

/// A total variation distance and the certified slack included in it.
///
/// `value - slack` is a lower bound on the true distance and `value` an
/// upper bound; `slack` is zero when both laws are finite tables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TvDistance {
    pub value: f64,
    pub slack: f64,
}

/// `||a - b||_TV = sup_A |a(A) - b(A)|`, half the `l1` distance.
pub fn tv_distance(a: &OffspringLaw, b: &OffspringLaw) -> Result<TvDistance> {
    let m = a.num_colors();
    if b.num_colors() != m {
        return Err(Error::Mismatch(format!(
            "laws over {m} and {} colors",
            b.num_colors()
        )));
    }
    if a == b {
        return Ok(TvDistance { value: 0.0, slack: 0.0 });
    }
    let box_a = poisson_box(a);
    let box_b = poisson_box(b);
    let bounds: Option<Vec<u32>> = match (&box_a, &box_b) {
        (None, None) => None,
        (Some((x, _)), None) | (None, Some((x, _))) => Some(x.clone()),
        (Some((x, _)), Some((y, _))) => Some(x.iter().zip(y).map(|(p, q)| *p.max(q)).collect()),
    };
    let tail = box_a.as_ref().map_or(0.0, |(_, t)| *t) + box_b.as_ref().map_or(0.0, |(_, t)| *t);

    let pmf_tables = PmfCache::new(a, b, bounds.as_deref());
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut l1 = 0.0;
    if let Some(bounds) = &bounds {
        let mut idx = vec![0u32; m];
        loop {
            l1 += (pmf_tables.pmf_a(&idx) - pmf_tables.pmf_b(&idx)).abs();
            if !advance(&mut idx, bounds) {
                break;
            }
        }
    }
    for law in [a, b] {
        if let OffspringLaw::Table(entries) = law {
            for e in entries {
                let inside = bounds
                    .as_ref()
                    .is_some_and(|bd| e.counts.iter().zip(bd).all(|(c, n)| c <= n));
                if inside || !seen.insert(e.counts.clone()) {
                    continue;
                }
                l1 += (a.pmf(&e.counts) - b.pmf(&e.counts)).abs();
            }
        }
    }
    let slack = 0.5 * tail;
    Ok(TvDistance {
        value: 0.5 * l1 + slack,
        slack,
    })
}

/// `d0 = max_j ||chi_j - eta_j||_TV`, including the Poisson tail slack.
pub fn d0_distance(a: &ModelSpec, b: &ModelSpec) -> Result<f64> {
    d0_distance_with_slack(a, b).map(|d| d.value)
}

/// [`d0_distance`] with the slack of the maximizing color reported.
pub fn d0_distance_with_slack(a: &ModelSpec, b: &ModelSpec) -> Result<TvDistance> {
    if a.num_colors() != b.num_colors() {
        return Err(Error::Mismatch(format!(
            "{} colors versus {}",
            a.num_colors(),
            b.num_colors()
        )));
    }
    if a.permissible() != b.permissible() {
        return Err(Error::Mismatch("permissible sets differ".into()));
    }
    let mut best = TvDistance { value: 0.0, slack: 0.0 };
    for (la, lb) in a.offspring_laws().iter().zip(b.offspring_laws()) {
        let d = tv_distance(la, lb)?;
        if d.value > best.value {
            best = d;
        }
    }
    Ok(best)
}

/// Per-coordinate truncation of a Poisson law and the certified mass
/// outside the box.
fn poisson_box(law: &OffspringLaw) -> Option<(Vec<u32>, f64)> {
    match law {
        OffspringLaw::Table(_) => None,
        OffspringLaw::Poisson { means } => {
            let eps = POISSON_TAIL_EPS / means.len() as f64;
            let bounds: Vec<u32> = means.iter().map(|&mu| poisson_truncation(mu, eps)).collect();
            let tail = means
                .iter()
                .zip(&bounds)
                .map(|(&mu, &n)| poisson_upper_tail_bound(mu, n + 1))
                .sum();
            Some((bounds, tail))
        }
    }
}

fn advance(idx: &mut [u32], bounds: &[u32]) -> bool {
    for (i, b) in idx.iter_mut().zip(bounds) {
        if *i < *b {
            *i += 1;
            return true;
        }
        *i = 0;
    }
    false
}

/// Marginal pmf tables over the box, so Poisson probabilities are products
/// of cached univariate values.
struct PmfCache<'a> {
    a: &'a OffspringLaw,
    b: &'a OffspringLaw,
    a_marginals: Option<Vec<Vec<f64>>>,
    b_marginals: Option<Vec<Vec<f64>>>,
}

impl<'a> PmfCache<'a> {
    fn new(a: &'a OffspringLaw, b: &'a OffspringLaw, bounds: Option<&[u32]>) -> Self {
        let marginals = |law: &OffspringLaw| match (law, bounds) {
            (OffspringLaw::Poisson { means }, Some(bd)) => Some(
                means
                    .iter()
                    .zip(bd)
                    .map(|(&mu, &n)| (0..=n).map(|k| poisson_pmf(mu, k)).collect())
                    .collect(),
            ),
            _ => None,
        };
        PmfCache {
            a,
            b,
            a_marginals: marginals(a),
            b_marginals: marginals(b),
        }
    }

    fn eval(law: &OffspringLaw, marginals: &Option<Vec<Vec<f64>>>, idx: &[u32]) -> f64 {
        match marginals {
            Some(tables) => idx
                .iter()
                .zip(tables)
                .map(|(&k, t)| t[k as usize])
                .product(),
            None => law.pmf(idx),
        }
    }

    fn pmf_a(&self, idx: &[u32]) -> f64 {
        Self::eval(self.a, &self.a_marginals, idx)
    }

    fn pmf_b(&self, idx: &[u32]) -> f64 {
        Self::eval(self.b, &self.b_marginals, idx)
    }
}
