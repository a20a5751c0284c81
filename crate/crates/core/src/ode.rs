//! Direct integration of the interaction-picture amplitude equations
//!
//! ```text
//! dC_{e,n}/dt   = -i g1 sqrt(n+1) e^{-i delta t} C_{f,n+1}
//! dC_{f,n+1}/dt = -i g1 sqrt(n+1) e^{+i delta t} C_{e,n} - i g2 sqrt(n+2) e^{+i delta t} C_{g,n+2}
//! dC_{g,n+2}/dt = -i g2 sqrt(n+2) e^{-i delta t} C_{f,n+1}
//! ```
//!
//! with fixed-step classical RK4. This is the ground truth the closed forms
//! in [`crate::amplitudes`] are checked against, so it shares nothing with
//! them beyond [`rabi`], which only sets the default step size.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::amplitudes::{propagator, rabi, SubspacePropagator};
use crate::{Error, InteractionParams, Result, SubspaceIndex};

/// Default step is this fraction of one radian of Rabi phase.
pub const DEFAULT_PHASE_STEP: f64 = 1e-3;

/// Fixed-step RK4 settings.
///
/// Without an explicit step, the step for subspace `n` is
/// `phase_step / Lambda_n` so that every subspace is resolved equally well.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeConfig {
    step: Option<f64>,
    phase_step: f64,
}

impl Default for OdeConfig {
    fn default() -> Self {
        Self { step: None, phase_step: DEFAULT_PHASE_STEP }
    }
}

impl OdeConfig {
    pub fn with_step(step: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidRange(format!("ODE step must be positive, got {step}")));
        }
        Ok(Self { step: Some(step), ..Self::default() })
    }

    pub fn with_phase_step(phase_step: f64) -> Result<Self> {
        if !(phase_step.is_finite() && phase_step > 0.0) {
            return Err(Error::InvalidRange(format!("phase step must be positive, got {phase_step}")));
        }
        Ok(Self { step: None, phase_step })
    }

    pub fn step_for(&self, n: SubspaceIndex, p: &InteractionParams) -> f64 {
        self.step.unwrap_or_else(|| match rabi(n, p) {
            Ok(lambda) => self.phase_step / lambda,
            // Uncoupled singleton: nothing to resolve.
            Err(_) => f64::INFINITY,
        })
    }
}

/// Right-hand side for one subspace, rows `(e, f, g)`. In the doublet the
/// `e` row is kept but decoupled (`s1 = 0`).
struct System {
    s1: f64,
    s2: f64,
    delta: f64,
}

impl System {
    fn new(n: SubspaceIndex, p: &InteractionParams) -> Self {
        let k = n.get();
        Self {
            s1: p.g1() * ((k + 1).max(0) as f64).sqrt(),
            s2: p.g2() * ((k + 2).max(0) as f64).sqrt(),
            delta: p.delta(),
        }
    }

    #[inline]
    fn rhs(&self, phase: C64, c: &[C64; 3]) -> [C64; 3] {
        let mi = C64::new(0.0, -1.0);
        let back = phase.conj();
        [mi * back * c[1] * self.s1, mi * phase * (c[0] * self.s1 + c[2] * self.s2), mi * back * c[1] * self.s2]
    }

    fn integrate(&self, states: &mut [[C64; 3]], t: f64, max_step: f64) {
        if t == 0.0 || states.is_empty() {
            return;
        }
        let steps = (t / max_step).ceil().max(1.0) as u64;
        let h = t / steps as f64;
        let axpy =
            |y: &[C64; 3], k: &[C64; 3], a: f64| -> [C64; 3] { [y[0] + k[0] * a, y[1] + k[1] * a, y[2] + k[2] * a] };
        for i in 0..steps {
            let t0 = i as f64 * h;
            let p0 = C64::from_polar(1.0, self.delta * t0);
            let pm = C64::from_polar(1.0, self.delta * (t0 + 0.5 * h));
            let p1 = C64::from_polar(1.0, self.delta * (t0 + h));
            for y in states.iter_mut() {
                let k1 = self.rhs(p0, y);
                let k2 = self.rhs(pm, &axpy(y, &k1, 0.5 * h));
                let k3 = self.rhs(pm, &axpy(y, &k2, 0.5 * h));
                let k4 = self.rhs(p1, &axpy(y, &k3, h));
                for r in 0..3 {
                    y[r] += (k1[r] + (k2[r] + k3[r]) * 2.0 + k4[r]) * (h / 6.0);
                }
            }
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTime(t))
    }
}

/// Offset of the subspace's first basis row inside the padded `(e, f, g)` frame.
fn row_offset(n: SubspaceIndex) -> usize {
    3 - n.dim()
}

/// Evolve `initial` (in the basis of subspace `n`) for time `t`.
pub fn integrate_subspace(
    n: SubspaceIndex,
    initial: &[C64],
    t: f64,
    p: &InteractionParams,
    cfg: &OdeConfig,
) -> Result<Vec<C64>> {
    check_time(t)?;
    let dim = n.dim();
    if initial.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: initial.len() });
    }
    if n.get() == -2 {
        return Ok(initial.to_vec());
    }
    let off = row_offset(n);
    let mut y = [C64::new(0.0, 0.0); 3];
    y[off..].copy_from_slice(initial);
    System::new(n, p).integrate(std::slice::from_mut(&mut y), t, cfg.step_for(n, p));
    Ok(y[off..].to_vec())
}

/// Propagator obtained by integrating every basis vector of subspace `n`.
pub fn oracle_propagator(
    n: SubspaceIndex,
    t: f64,
    p: &InteractionParams,
    cfg: &OdeConfig,
) -> Result<SubspacePropagator> {
    check_time(t)?;
    let dim = n.dim();
    if n.get() == -2 {
        return Ok(SubspacePropagator::identity(n, t));
    }
    let off = row_offset(n);
    let mut cols: Vec<[C64; 3]> = (0..dim)
        .map(|c| {
            let mut y = [C64::new(0.0, 0.0); 3];
            y[off + c] = C64::new(1.0, 0.0);
            y
        })
        .collect();
    System::new(n, p).integrate(&mut cols, t, cfg.step_for(n, p));
    let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
    for (c, col) in cols.iter().enumerate() {
        for r in 0..dim {
            entries[r * dim + c] = col[off + r];
        }
    }
    Ok(SubspacePropagator::from_entries(n, t, entries))
}

/// Closed form vs oracle at one point.
#[derive(Clone, Debug, Serialize)]
pub struct OracleComparison {
    pub n: i64,
    pub t: f64,
    pub g1: f64,
    pub g2: f64,
    pub delta: f64,
    /// Largest entrywise `|U_closed - U_oracle|`.
    pub max_deviation: f64,
    /// Unitarity defect of the closed form.
    pub unitarity_defect: f64,
}

pub fn compare(n: SubspaceIndex, t: f64, p: &InteractionParams, cfg: &OdeConfig) -> Result<OracleComparison> {
    let closed = propagator(n, t, p)?;
    let oracle = oracle_propagator(n, t, p, cfg)?;
    Ok(OracleComparison {
        n: n.get(),
        t,
        g1: p.g1(),
        g2: p.g2(),
        delta: p.delta(),
        max_deviation: closed.max_abs_diff(&oracle),
        unitarity_defect: closed.unitarity_defect(),
    })
}

/// Points of the standard validation grid: `n in [-2, 4]`,
/// `delta / g in {0, 0.1, 0.5}`, `g in {1, 17.5}`, `t in {0.5, 5, 23, 95}`.
pub fn validation_grid() -> Vec<(SubspaceIndex, f64, InteractionParams)> {
    let mut out = Vec::new();
    for &g in &[1.0, 17.5] {
        for &rel in &[0.0, 0.1, 0.5] {
            let p = InteractionParams::symmetric(g, rel * g).expect("valid grid parameters");
            for n in -2..=4 {
                for &t in &[0.5, 5.0, 23.0, 95.0] {
                    out.push((SubspaceIndex::new(n).expect("n >= -2"), t, p));
                }
            }
        }
    }
    out
}

/// Compare closed forms and oracle on the validation grid.
pub fn check_validation_grid(cfg: &OdeConfig) -> Result<Vec<OracleComparison>> {
    validation_grid().into_par_iter().map(|(n, t, p)| compare(n, t, &p, cfg)).collect()
}

/// Compare closed forms and oracle at `samples` random points, reproducible
/// from `seed`. Times are drawn from `[0, t_max]`, couplings from
/// `[0.1, g_max]` and detuning from `[-g1, g1]`.
pub fn check_random(samples: usize, seed: u64, t_max: f64, g_max: f64) -> Result<Vec<OracleComparison>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<_> = (0..samples)
        .map(|_| {
            let n: i64 = rng.gen_range(-2..=4);
            let g1: f64 = rng.gen_range(0.1..=g_max);
            let g2: f64 = rng.gen_range(0.1..=g_max);
            let delta: f64 = rng.gen_range(-g1..=g1);
            let t: f64 = rng.gen_range(0.0..=t_max);
            (n, g1, g2, delta, t)
        })
        .collect();
    points
        .into_par_iter()
        .map(|(n, g1, g2, delta, t)| {
            let p = InteractionParams::new(g1, g2, delta)?;
            compare(SubspaceIndex::new(n)?, t, &p, &OdeConfig::default())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sub(n: i64) -> SubspaceIndex {
        SubspaceIndex::new(n).unwrap()
    }

    #[test]
    fn zero_length_integration_is_identity() {
        let p = InteractionParams::symmetric(1.0, 0.3).unwrap();
        let init = [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
        let out = integrate_subspace(sub(0), &init, 0.0, &p, &OdeConfig::default()).unwrap();
        assert_eq!(out, init.to_vec());
    }

    #[test]
    fn singleton_never_moves() {
        let p = InteractionParams::symmetric(17.5, 1.75).unwrap();
        let init = [C64::new(0.6, 0.8)];
        let out = integrate_subspace(sub(-2), &init, 42.0, &p, &OdeConfig::default()).unwrap();
        assert_eq!(out, init.to_vec());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let p = InteractionParams::symmetric(1.0, 0.0).unwrap();
        let init = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        let err = integrate_subspace(sub(0), &init, 1.0, &p, &OdeConfig::default()).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 3, found: 2 });
    }

    #[test]
    fn half_rabi_period_analytic_point() {
        let p = InteractionParams::symmetric(1.0, 0.0).unwrap();
        let init = [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
        let t = PI / 3f64.sqrt();
        let out = integrate_subspace(sub(0), &init, t, &p, &OdeConfig::default()).unwrap();
        assert!((out[0] - C64::new(1.0 / 3.0, 0.0)).norm() < 1e-8);
        assert!(out[1].norm() < 1e-8);
        assert!((out[2] - C64::new(-2.0 * 2f64.sqrt() / 3.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn norm_drift_is_small() {
        let p = InteractionParams::symmetric(17.5, 8.75).unwrap();
        let s = 0.5f64.sqrt();
        let init = [C64::new(s, 0.0), C64::new(0.0, s), C64::new(0.0, 0.0)];
        let out = integrate_subspace(sub(1), &init, 100.0, &p, &OdeConfig::default()).unwrap();
        let norm: f64 = out.iter().map(|c| c.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-8, "drift {}", norm - 1.0);
    }

    #[test]
    fn oracle_propagator_columns_match_single_integrations() {
        let p = InteractionParams::new(1.2, 0.7, 0.3).unwrap();
        let cfg = OdeConfig::default();
        let u = oracle_propagator(sub(-1), 3.0, &p, &cfg).unwrap();
        let e1 = [C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
        let col = integrate_subspace(sub(-1), &e1, 3.0, &p, &cfg).unwrap();
        assert_eq!(u.column(1), col);
    }
}
