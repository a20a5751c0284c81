use serde::{Deserialize, Serialize};

use crate::{Error, Level, Result};

/// Couplings of the `e <-> f` (`g1`) and `f <-> g` (`g2`) transitions and the
/// symmetric detuning, all in rad/µs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteractionParams {
    g1: f64,
    g2: f64,
    delta: f64,
}

impl InteractionParams {
    pub fn new(g1: f64, g2: f64, delta: f64) -> Result<Self> {
        if !(g1.is_finite() && g1 > 0.0) {
            return Err(Error::InvalidCoupling { name: "g1", value: g1 });
        }
        if !(g2.is_finite() && g2 > 0.0) {
            return Err(Error::InvalidCoupling { name: "g2", value: g2 });
        }
        if !delta.is_finite() {
            return Err(Error::InvalidDetuning(delta));
        }
        Ok(Self { g1, g2, delta })
    }

    /// Equal couplings `g1 = g2 = g`.
    pub fn symmetric(g: f64, delta: f64) -> Result<Self> {
        Self::new(g, g, delta)
    }

    pub fn g1(&self) -> f64 {
        self.g1
    }

    pub fn g2(&self) -> f64 {
        self.g2
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        Self::new(self.g1, self.g2, delta)
    }
}

/// Label `n` of the invariant subspace `{|e,n>, |f,n+1>, |g,n+2>}`.
///
/// `n = -1` is the doublet `{|f,0>, |g,1>}` and `n = -2` the stationary
/// singleton `{|g,0>}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubspaceIndex(i64);

impl SubspaceIndex {
    pub fn new(n: i64) -> Result<Self> {
        if n < -2 {
            return Err(Error::InvalidSubspace(n));
        }
        Ok(Self(n))
    }

    /// Subspace containing the ket `|level, photons>`.
    pub fn containing(level: Level, photons: u32) -> Self {
        Self(photons as i64 + level.index() as i64 - 2)
    }

    pub fn get(self) -> i64 {
        self.0
    }

    pub fn dim(self) -> usize {
        match self.0 {
            -2 => 1,
            -1 => 2,
            _ => 3,
        }
    }

    /// Basis levels in row order.
    pub fn levels(self) -> &'static [Level] {
        match self.0 {
            -2 => &[Level::G],
            -1 => &[Level::F, Level::G],
            _ => &[Level::E, Level::F, Level::G],
        }
    }

    /// Photon number paired with `level` inside this subspace.
    pub fn photons(self, level: Level) -> Option<u32> {
        let p = self.0 + 2 - level.index() as i64;
        (p >= 0).then_some(p as u32)
    }

    pub fn row_of(self, level: Level) -> Option<usize> {
        self.levels().iter().position(|&l| l == level)
    }

    /// Largest photon number reached inside the subspace (carried by `g`).
    pub fn max_photons(self) -> u32 {
        (self.0 + 2) as u32
    }

    /// Total excitation (`2 #e + #f + photons`) shared by every ket.
    pub fn excitation(self) -> u32 {
        (self.0 + 2) as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_and_nonfinite_couplings() {
        assert!(InteractionParams::new(0.0, 1.0, 0.0).is_err());
        assert!(InteractionParams::new(1.0, -1.0, 0.0).is_err());
        assert!(InteractionParams::new(1.0, 1.0, f64::NAN).is_err());
        assert!(InteractionParams::new(1.0, 1.0, -0.3).is_ok());
    }

    #[test]
    fn subspace_bookkeeping() {
        assert!(SubspaceIndex::new(-3).is_err());
        let s = SubspaceIndex::containing(Level::F, 0);
        assert_eq!(s.get(), -1);
        assert_eq!(s.levels(), &[Level::F, Level::G]);
        assert_eq!(s.photons(Level::G), Some(1));
        assert_eq!(s.photons(Level::E), None);
        assert_eq!(SubspaceIndex::containing(Level::G, 0).dim(), 1);
        let s = SubspaceIndex::containing(Level::G, 3);
        assert_eq!(s.get(), 1);
        assert_eq!(s.photons(Level::E), Some(1));
        assert_eq!(s.excitation(), 3);
    }
}
