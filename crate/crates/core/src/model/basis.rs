use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest basis dimension the builders accept unless told otherwise.
pub const DEFAULT_MAX_DIMENSION: usize = 500_000;

/// Atomic level of the Λ-type atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    One,
    Two,
    Three,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::One, Level::Two, Level::Three];

    pub fn index(self) -> usize {
        match self {
            Level::One => 0,
            Level::Two => 1,
            Level::Three => 2,
        }
    }

    /// 1-based label as used in |1⟩, |2⟩, |3⟩.
    pub fn label(self) -> u8 {
        self.index() as u8 + 1
    }
}

/// A basis state |level, n₁, n₂⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisState {
    pub level: Level,
    pub n1: usize,
    pub n2: usize,
}

/// Per-mode Fock cutoffs. Mode i keeps photon numbers 0..=n{i}_max.
///
/// States are ordered lexicographically with the atomic level slowest, then
/// n₁, then n₂:
///
/// `index = (level · (n1_max + 1) + n1) · (n2_max + 1) + n2`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncationSpec {
    pub n1_max: usize,
    pub n2_max: usize,
}

impl TruncationSpec {
    pub fn new(n1_max: usize, n2_max: usize) -> Self {
        Self { n1_max, n2_max }
    }

    /// 3·(n1_max+1)·(n2_max+1), or `None` on overflow.
    pub fn checked_dimension(&self) -> Option<usize> {
        self.n1_max
            .checked_add(1)?
            .checked_mul(self.n2_max.checked_add(1)?)?
            .checked_mul(3)
    }

    pub fn dimension(&self) -> usize {
        self.checked_dimension()
            .expect("truncation dimension overflows usize")
    }

    pub(crate) fn checked_against(&self, max: usize) -> Result<usize> {
        match self.checked_dimension() {
            Some(d) if d <= max => Ok(d),
            Some(d) => Err(Error::DimensionTooLarge {
                dimension: d,
                max,
            }),
            None => Err(invalid("truncation", "dimension overflows usize")),
        }
    }

    pub fn index(&self, s: BasisState) -> usize {
        debug_assert!(s.n1 <= self.n1_max && s.n2 <= self.n2_max);
        (s.level.index() * (self.n1_max + 1) + s.n1) * (self.n2_max + 1) + s.n2
    }

    pub fn state(&self, index: usize) -> BasisState {
        let per_level = (self.n1_max + 1) * (self.n2_max + 1);
        let level = Level::ALL[index / per_level];
        let rem = index % per_level;
        BasisState {
            level,
            n1: rem / (self.n2_max + 1),
            n2: rem % (self.n2_max + 1),
        }
    }

    /// Iterates over basis states in index order.
    pub fn states(&self) -> impl Iterator<Item = BasisState> + '_ {
        Level::ALL.into_iter().flat_map(move |level| {
            (0..=self.n1_max)
                .flat_map(move |n1| (0..=self.n2_max).map(move |n2| BasisState { level, n1, n2 }))
        })
    }

    /// Embeds a vector from the (smaller or equal) truncation `from` into this
    /// one, zero-padding new Fock states and dropping states outside.
    pub fn embed(&self, from: &TruncationSpec, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), from.dimension());
        let mut out = vec![0.0; self.dimension()];
        for (i, s) in from.states().enumerate() {
            if s.n1 <= self.n1_max && s.n2 <= self.n2_max {
                out[self.index(s)] = v[i];
            }
        }
        out
    }
}

/// Widths of the oscillator bases of the two modes.
///
/// Mode i is expanded in the number states |k⟩ of an auxiliary oscillator b
/// with x = s(b + b†)/√2 and p = −i(b − b†)/(s√2), where a = (x + ip)/√2.
/// `s = 1` is the photon Fock basis; other widths span the same space as
/// the cutoff grows but suit squeezed states better.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorScales {
    pub s1: f64,
    pub s2: f64,
}

impl OscillatorScales {
    pub const FOCK: Self = Self { s1: 1.0, s2: 1.0 };

    pub fn new(s1: f64, s2: f64) -> Result<Self> {
        for (name, s) in [("s1", s1), ("s2", s2)] {
            if !(s > 0.0 && s.is_finite()) {
                return Err(invalid(name, format!("oscillator scale must be positive and finite, got {s}")));
            }
        }
        Ok(Self { s1, s2 })
    }

    pub fn of_mode(&self, mode: u8) -> f64 {
        if mode == 1 {
            self.s1
        } else {
            self.s2
        }
    }

    pub fn is_fock(&self) -> bool {
        *self == Self::FOCK
    }
}

impl Default for OscillatorScales {
    fn default() -> Self {
        Self::FOCK
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_counts_all_states() {
        assert_eq!(TruncationSpec::new(2, 3).dimension(), 36);
        assert_eq!(TruncationSpec::new(0, 0).dimension(), 3);
        assert_eq!(TruncationSpec::new(2, 3).states().count(), 36);
    }

    #[test]
    fn index_roundtrip_and_order() {
        let t = TruncationSpec::new(3, 2);
        for (i, s) in t.states().enumerate() {
            assert_eq!(t.index(s), i);
            assert_eq!(t.state(i), s);
        }
        let first = t.state(0);
        assert_eq!((first.level, first.n1, first.n2), (Level::One, 0, 0));
        // n₂ is fastest
        assert_eq!(t.state(1).n2, 1);
        // level is slowest
        assert_eq!(t.state(12).level, Level::Two);
    }

    #[test]
    fn overflow_is_reported() {
        let t = TruncationSpec::new(usize::MAX, 1);
        assert!(t.checked_dimension().is_none());
        assert!(TruncationSpec::new(1000, 1000).checked_against(10_000).is_err());
    }

    #[test]
    fn embed_pads_and_preserves() {
        let small = TruncationSpec::new(1, 1);
        let big = TruncationSpec::new(2, 3);
        let v: Vec<f64> = (0..small.dimension()).map(|i| i as f64 + 1.0).collect();
        let w = big.embed(&small, &v);
        for (i, s) in small.states().enumerate() {
            assert_eq!(w[big.index(s)], v[i]);
        }
        assert_eq!(w.iter().filter(|x| **x != 0.0).count(), v.len());
    }
}
