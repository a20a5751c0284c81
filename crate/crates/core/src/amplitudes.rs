//! Closed-form evolution of the two-photon Jaynes-Cummings interaction.
//!
//! The interaction only couples kets with the same total excitation
//! `2 #e + #f + photons`, so the dynamics splits into the invariant subspaces
//! `{|e,n>, |f,n+1>, |g,n+2>}` labelled by [`SubspaceIndex`]. On each of them
//! the amplitudes have a closed form in terms of
//!
//! ```text
//! alpha_n  = sqrt(g1^2 (n+1) + g2^2 (n+2))
//! Lambda_n = sqrt(delta^2 / 4 + alpha_n^2)
//! gamma_n  = [Lambda_n cos(Lambda_n t) + i delta/2 sin(Lambda_n t) - Lambda_n e^{i delta t/2}] e^{-i delta t/2}
//! ```
//!
//! [`propagator`] assembles the subspace matrix directly from the subspace
//! label, while [`coefficient`] evaluates one amplitude from the photon number
//! of the target ket (shifting `n -> n-1` for `f` and `n -> n-2` for `g`).
//! The two are deliberately separate code paths and are checked against each
//! other.

use num_complex::Complex64 as C64;

use crate::{Error, InteractionParams, Level, Result, SubspaceIndex};

/// Unitary acting on one invariant subspace for an interaction of length `t`.
///
/// Rows and columns follow [`SubspaceIndex::levels`]: `(e, f, g)` for `n >= 0`,
/// `(f, g)` for `n = -1` and `(g)` for `n = -2`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspacePropagator {
    index: SubspaceIndex,
    time: f64,
    dim: usize,
    entries: Vec<C64>,
}

impl SubspacePropagator {
    pub(crate) fn from_entries(index: SubspaceIndex, time: f64, entries: Vec<C64>) -> Self {
        let dim = index.dim();
        debug_assert_eq!(entries.len(), dim * dim);
        Self { index, time, dim, entries }
    }

    pub fn identity(index: SubspaceIndex, time: f64) -> Self {
        let dim = index.dim();
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for k in 0..dim {
            entries[k * dim + k] = C64::new(1.0, 0.0);
        }
        Self { index, time, dim, entries }
    }

    pub fn index(&self) -> SubspaceIndex {
        self.index
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    /// Amplitude on `to` starting from `from`, both levels of this subspace.
    pub fn element(&self, to: Level, from: Level) -> Option<C64> {
        let r = self.index.row_of(to)?;
        let c = self.index.row_of(from)?;
        Some(self.entry(r, c))
    }

    pub fn column(&self, col: usize) -> Vec<C64> {
        (0..self.dim).map(|r| self.entry(r, col)).collect()
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
        }
        Ok((0..self.dim).map(|r| (0..self.dim).map(|c| self.entry(r, c) * v[c]).sum()).collect())
    }

    /// Matrix product `self * rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &SubspacePropagator) -> Result<SubspacePropagator> {
        if self.index != rhs.index {
            return Err(Error::DimensionMismatch { expected: self.dim, found: rhs.dim });
        }
        let d = self.dim;
        let mut entries = vec![C64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for c in 0..d {
                entries[r * d + c] = (0..d).map(|k| self.entry(r, k) * rhs.entry(k, c)).sum();
            }
        }
        Ok(Self { index: self.index, time: self.time + rhs.time, dim: d, entries })
    }

    /// Largest entrywise deviation of `U^dagger U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0_f64;
        for a in 0..d {
            for b in 0..d {
                let dot: C64 = (0..d).map(|k| self.entry(k, a).conj() * self.entry(k, b)).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    /// Largest entrywise deviation from the identity matrix.
    pub fn identity_defect(&self) -> f64 {
        self.max_abs_diff(&Self::identity(self.index, self.time))
    }

    pub fn max_abs_diff(&self, other: &SubspacePropagator) -> f64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTime(t))
    }
}

fn alpha_sq(n: i64, p: &InteractionParams) -> f64 {
    p.g1().powi(2) * (n + 1).max(0) as f64 + p.g2().powi(2) * (n + 2) as f64
}

/// `alpha_n = sqrt(g1^2 max(n+1, 0) + g2^2 (n+2))`.
pub fn alpha(n: SubspaceIndex, p: &InteractionParams) -> Result<f64> {
    if n.get() < -1 {
        return Err(Error::InvalidSubspace(n.get()));
    }
    Ok(alpha_sq(n.get(), p).sqrt())
}

/// Rabi frequency `Lambda_n = sqrt(delta^2/4 + alpha_n^2)`.
pub fn rabi(n: SubspaceIndex, p: &InteractionParams) -> Result<f64> {
    let a = alpha(n, p)?;
    Ok((p.delta().powi(2) / 4.0 + a * a).sqrt())
}

fn gamma_at(lambda: f64, delta: f64, t: f64) -> C64 {
    let (s, c) = (lambda * t).sin_cos();
    let half = C64::from_polar(1.0, delta * t / 2.0);
    (C64::new(lambda * c, delta / 2.0 * s) - lambda * half) * half.conj()
}

/// `gamma_n(t)`, which vanishes at `t = 0` and is real at resonance.
pub fn gamma(n: SubspaceIndex, t: f64, p: &InteractionParams) -> Result<C64> {
    check_time(t)?;
    let lambda = rabi(n, p)?;
    Ok(gamma_at(lambda, p.delta(), t))
}

/// Closed-form propagator of subspace `n` after an interaction of length `t`.
pub fn propagator(n: SubspaceIndex, t: f64, p: &InteractionParams) -> Result<SubspacePropagator> {
    check_time(t)?;
    if n.get() == -2 {
        // |g,0> is uncoupled.
        return Ok(SubspacePropagator::identity(n, t));
    }
    let k = n.get();
    let delta = p.delta();
    let s1 = p.g1() * ((k + 1).max(0) as f64).sqrt();
    let s2 = p.g2() * ((k + 2) as f64).sqrt();
    let a2 = s1 * s1 + s2 * s2;
    let lambda = (delta * delta / 4.0 + a2).sqrt();
    let gam = gamma_at(lambda, delta, t);
    let (sin, cos) = (lambda * t).sin_cos();
    let ph = C64::from_polar(1.0, delta * t / 2.0);
    let i = C64::i();
    let one = C64::new(1.0, 0.0);
    let scaled = gam / (lambda * a2);

    let ff = C64::new(cos, -delta / (2.0 * lambda) * sin) * ph;
    let fg = -i * (s2 / lambda * sin) * ph;
    let gf = -i * (s2 / lambda * sin) * ph.conj();
    let gg = scaled * (s2 * s2) + one;

    let entries = if k == -1 {
        vec![ff, fg, gf, gg]
    } else {
        let ee = scaled * (s1 * s1) + one;
        let ef = -i * (s1 / lambda * sin) * ph.conj();
        let eg = scaled * (s1 * s2);
        let fe = -i * (s1 / lambda * sin) * ph;
        vec![ee, ef, eg, fe, ff, fg, eg, gf, gg]
    };
    Ok(SubspacePropagator::from_entries(n, t, entries))
}

/// Single amplitude `C_{to}^{(from)}(t)`: the coefficient of `|to>` at time
/// `t` when the atom-field system starts in `|from>`.
///
/// Kets are `(level, photons)`. Kets from different invariant subspaces give
/// zero. The `e` row is evaluated at `n = photons`, the `f` row at
/// `n = photons - 1` and the `g` row at `n = photons - 2`.
pub fn coefficient(to: (Level, u32), from: (Level, u32), t: f64, p: &InteractionParams) -> Result<C64> {
    check_time(t)?;
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let excitation = |(l, n): (Level, u32)| l.excitation() + n;
    if excitation(to) != excitation(from) {
        return Ok(zero);
    }
    let (g1, g2, delta) = (p.g1(), p.g2(), p.delta());
    let i = C64::i();
    let ph = C64::from_polar(1.0, delta * t / 2.0);
    let row_n = to.1 as i64 + to.0.index() as i64 - 2;
    if row_n == -2 {
        return Ok(one);
    }
    let a2 = alpha_sq(row_n, p);
    let lambda = (delta * delta / 4.0 + a2).sqrt();
    let gam = gamma_at(lambda, delta, t);
    let sin = (lambda * t).sin();
    let cos = (lambda * t).cos();
    let nn = to.1 as f64;

    let value = match (to.0, from.0) {
        (Level::E, Level::E) => gam * (g1 * g1 * (nn + 1.0) / (lambda * a2)) + one,
        (Level::E, Level::F) => -i * (g1 * (nn + 1.0).sqrt() / lambda * sin) * ph.conj(),
        (Level::E, Level::G) => gam * (g1 * g2 * ((nn + 1.0) * (nn + 2.0)).sqrt() / (lambda * a2)),
        (Level::F, Level::E) => -i * (g1 * nn.sqrt() / lambda * sin) * ph,
        (Level::F, Level::F) => C64::new(cos, -delta / (2.0 * lambda) * sin) * ph,
        (Level::F, Level::G) => -i * (g2 * (nn + 1.0).sqrt() / lambda * sin) * ph,
        (Level::G, Level::E) => gam * (g1 * g2 * ((nn - 1.0) * nn).sqrt() / (lambda * a2)),
        (Level::G, Level::F) => -i * (g2 * nn.sqrt() / lambda * sin) * ph.conj(),
        (Level::G, Level::G) => gam * (g2 * g2 * nn / (lambda * a2)) + one,
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit() -> InteractionParams {
        InteractionParams::symmetric(1.0, 0.0).unwrap()
    }

    fn sub(n: i64) -> SubspaceIndex {
        SubspaceIndex::new(n).unwrap()
    }

    #[test]
    fn alpha_values() {
        assert!((alpha(sub(0), &unit()).unwrap() - 3f64.sqrt()).abs() < 1e-15);
        assert!((alpha(sub(-1), &unit()).unwrap() - 1.0).abs() < 1e-15);
        let p = InteractionParams::new(1.0, 2.0, 0.0).unwrap();
        assert!((alpha(sub(2), &p).unwrap() - 19f64.sqrt()).abs() < 1e-14);
        assert_eq!(alpha(sub(-2), &unit()), Err(Error::InvalidSubspace(-2)));
    }

    #[test]
    fn rabi_values() {
        assert!((rabi(sub(0), &unit()).unwrap() - 3f64.sqrt()).abs() < 1e-15);
        let p = InteractionParams::symmetric(1.0, 0.2).unwrap();
        assert!((rabi(sub(0), &p).unwrap() - 3.01f64.sqrt()).abs() < 1e-15);
        let p = InteractionParams::symmetric(1.0, 0.1).unwrap();
        assert!((rabi(sub(-1), &p).unwrap() - 1.0025f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gamma_limits() {
        let p = InteractionParams::symmetric(1.3, 0.4).unwrap();
        for n in -1..4 {
            assert!(gamma(sub(n), 0.0, &p).unwrap().norm() < 1e-15);
        }
        let p = unit();
        let lam = 3f64.sqrt();
        let g = gamma(sub(0), 2.5, &p).unwrap();
        assert!(g.im.abs() < 1e-15);
        assert!((g.re - lam * ((lam * 2.5).cos() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn identity_at_zero_time() {
        let p = InteractionParams::new(0.7, 2.1, -0.3).unwrap();
        for n in -2..5 {
            assert!(propagator(sub(n), 0.0, &p).unwrap().identity_defect() < 1e-15);
        }
    }

    #[test]
    fn singleton_is_stationary() {
        let u = propagator(sub(-2), 37.0, &unit()).unwrap();
        assert_eq!(u.dim(), 1);
        assert_eq!(u.entry(0, 0), C64::new(1.0, 0.0));
    }

    #[test]
    fn negative_time_rejected() {
        assert_eq!(propagator(sub(0), -1.0, &unit()), Err(Error::InvalidTime(-1.0)));
    }

    #[test]
    fn half_rabi_period_from_excited_vacuum() {
        // cos(Lambda t) = -1 and g^2 / alpha^2 = 1/3, so C_e = (1/3)(-2) + 1.
        let t = PI / 3f64.sqrt();
        let col = propagator(sub(0), t, &unit()).unwrap().column(0);
        assert!((col[0] - C64::new(1.0 / 3.0, 0.0)).norm() < 1e-14);
        assert!(col[1].norm() < 1e-14);
        assert!((col[2] - C64::new(-2.0 * 2f64.sqrt() / 3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn one_photon_absorption_time() {
        let u = propagator(sub(-1), 4.71, &unit()).unwrap();
        let to_f = u.element(Level::F, Level::G).unwrap();
        let stay = u.element(Level::G, Level::G).unwrap();
        assert!((to_f - C64::new(0.0, 1.0)).norm() < 1e-2);
        let residual = stay.norm_sqr();
        assert!((residual - (4.71f64).cos().powi(2)).abs() < 1e-15);
        assert!((residual - 5.7e-6).abs() < 0.1e-6);
    }

    #[test]
    fn coefficient_matches_propagator_rows() {
        let p = InteractionParams::new(1.1, 0.8, 0.27).unwrap();
        let t = 3.3;
        for photons in 0..6u32 {
            for &to in &Level::ALL {
                let n = SubspaceIndex::containing(to, photons);
                let u = propagator(n, t, &p).unwrap();
                for &from in n.levels() {
                    let from_photons = n.photons(from).unwrap();
                    let c = coefficient((to, photons), (from, from_photons), t, &p).unwrap();
                    let e = u.element(to, from).unwrap();
                    assert!((c - e).norm() < 1e-14, "{to}{photons} <- {from}{from_photons}");
                }
            }
        }
    }

    #[test]
    fn coefficient_across_subspaces_is_zero() {
        let c = coefficient((Level::E, 0), (Level::G, 0), 1.0, &unit()).unwrap();
        assert_eq!(c, C64::new(0.0, 0.0));
    }
}
