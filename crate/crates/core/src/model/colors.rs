use std::fmt;

use crate::error::{Error, Result};

/// Largest number of colors a model may carry.
pub const MAX_COLORS: usize = 64;

/// A subset of the colors `0..m`, stored as a bit mask.
///
/// Colors are 0-indexed inside the library; anything user-facing adds one.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ColorSet(u64);

impl ColorSet {
    pub const fn empty() -> Self {
        ColorSet(0)
    }

    /// All colors `0..m`.
    pub fn full(m: usize) -> Self {
        debug_assert!(m <= MAX_COLORS);
        if m == MAX_COLORS {
            ColorSet(u64::MAX)
        } else {
            ColorSet((1u64 << m) - 1)
        }
    }

    pub fn singleton(color: usize) -> Self {
        debug_assert!(color < MAX_COLORS);
        ColorSet(1u64 << color)
    }

    pub fn from_colors<I: IntoIterator<Item = usize>>(colors: I) -> Self {
        colors
            .into_iter()
            .fold(ColorSet::empty(), |set, c| set.with(c))
    }

    #[must_use]
    pub fn with(self, color: usize) -> Self {
        ColorSet(self.0 | (1u64 << color))
    }

    pub fn contains(self, color: usize) -> bool {
        color < MAX_COLORS && self.0 & (1u64 << color) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// The complement inside `0..m`.
    pub fn complement(self, m: usize) -> Self {
        ColorSet(!self.0 & ColorSet::full(m).0)
    }

    pub fn is_subset_of(self, other: ColorSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Ascending iteration over the members.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let c = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(c)
            }
        })
    }

    pub fn bits(self) -> u64 {
        self.0
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for ColorSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        ColorSet::from_colors(iter)
    }
}

/// The sets `S_j`: colors a child may have for the edge from a color-`j`
/// parent to be permissible for player one (or Stopper). Player two (or
/// Escaper) uses the complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermissibleSets {
    m: usize,
    sets: Vec<ColorSet>,
}

impl PermissibleSets {
    /// Every set must be non-empty and a proper subset of `0..m`.
    pub fn new(m: usize, sets: Vec<ColorSet>) -> Result<Self> {
        validate_color_count(m)?;
        if sets.len() != m {
            return Err(Error::InvalidSpec(format!(
                "expected {m} permissible sets, got {}",
                sets.len()
            )));
        }
        let full = ColorSet::full(m);
        for (j, s) in sets.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::InvalidSpec(format!(
                    "permissible set of color {} is empty",
                    j + 1
                )));
            }
            if !s.is_subset_of(full) {
                return Err(Error::InvalidSpec(format!(
                    "permissible set of color {} names a color outside 1..={m}",
                    j + 1
                )));
            }
            if *s == full {
                return Err(Error::InvalidSpec(format!(
                    "permissible set of color {} is not a proper subset",
                    j + 1
                )));
            }
        }
        Ok(PermissibleSets { m, sets })
    }

    /// `S_j = {j}` for every color: player one moves along monochromatic
    /// edges only.
    pub fn monochromatic(m: usize) -> Result<Self> {
        PermissibleSets::new(m, (0..m).map(ColorSet::singleton).collect())
    }

    pub fn num_colors(&self) -> usize {
        self.m
    }

    /// `S_j`.
    pub fn player_one(&self, j: usize) -> ColorSet {
        self.sets[j]
    }

    /// `[m] \ S_j`.
    pub fn player_two(&self, j: usize) -> ColorSet {
        self.sets[j].complement(self.m)
    }

    pub fn sets(&self) -> &[ColorSet] {
        &self.sets
    }
}

pub(crate) fn validate_color_count(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidSpec(format!(
            "need at least 2 colors for a proper permissible subset, got {m}"
        )));
    }
    if m > MAX_COLORS {
        return Err(Error::InvalidSpec(format!(
            "at most {MAX_COLORS} colors are supported, got {m}"
        )));
    }
    Ok(())
}
