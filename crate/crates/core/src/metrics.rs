//! Supersinglet targets, fidelity, and the explicit coefficient-product
//! expressions for the vacuum-projected three-atom state.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_complex::Complex64 as C64;

use crate::amplitudes::coefficient;
use crate::level::levels_to_string;
use crate::{Error, InteractionParams, Level, Result};

const NORM_TOLERANCE: f64 = 1e-12;

/// Normalized pure state of `num_atoms` atoms with `levels_per_atom` levels,
/// stored sparsely by configuration. Level labels are integers; for qutrits
/// they follow [`Level::index`] (`g=0`, `f=1`, `e=2`).
#[derive(Clone, Debug, PartialEq)]
pub struct PureAtomicState {
    num_atoms: usize,
    levels_per_atom: u8,
    amplitudes: BTreeMap<Vec<u8>, C64>,
}

impl PureAtomicState {
    pub fn new(num_atoms: usize, levels_per_atom: u8, amplitudes: BTreeMap<Vec<u8>, C64>) -> Result<Self> {
        for config in amplitudes.keys() {
            if config.len() != num_atoms {
                return Err(Error::DimensionMismatch { expected: num_atoms, found: config.len() });
            }
            if let Some(&bad) = config.iter().find(|&&l| l >= levels_per_atom) {
                return Err(Error::Parse(format!("level label {bad} out of range")));
            }
        }
        let norm: f64 = amplitudes.values().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { num_atoms, levels_per_atom, amplitudes })
    }

    /// Qutrit state from `e/f/g` configurations.
    pub fn from_levels<I>(num_atoms: usize, amplitudes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<Level>, C64)>,
    {
        let map = amplitudes.into_iter().map(|(levels, a)| (levels.iter().map(|l| l.index()).collect(), a)).collect();
        Self::new(num_atoms, 3, map)
    }

    pub fn num_atoms(&self) -> usize {
        self.num_atoms
    }

    pub fn levels_per_atom(&self) -> u8 {
        self.levels_per_atom
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitude(&self, config: &[u8]) -> C64 {
        self.amplitudes.get(config).copied().unwrap_or_default()
    }

    pub fn amplitude_of(&self, levels: &[Level]) -> C64 {
        let key: Vec<u8> = levels.iter().map(|l| l.index()).collect();
        self.amplitude(&key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u8>, &C64)> {
        self.amplitudes.iter()
    }

    /// Configurations rendered as level strings (`"efg"`) for qutrits, or as
    /// digit strings otherwise.
    pub fn labelled(&self) -> Vec<(String, C64)> {
        self.amplitudes.iter().map(|(config, a)| (self.label(config), *a)).collect()
    }

    fn label(&self, config: &[u8]) -> String {
        if self.levels_per_atom == 3 {
            let levels: Vec<Level> = config.iter().map(|&i| Level::from_index(i).expect("checked")).collect();
            levels_to_string(&levels)
        } else {
            config.iter().map(|d| d.to_string()).collect()
        }
    }

    /// Same state with atoms `i` and `j` exchanged.
    pub fn swap_atoms(&self, i: usize, j: usize) -> Result<Self> {
        for k in [i, j] {
            if k >= self.num_atoms {
                return Err(Error::AtomIndex { index: k, num_atoms: self.num_atoms });
            }
        }
        let amplitudes = self
            .amplitudes
            .iter()
            .map(|(config, a)| {
                let mut c = config.clone();
                c.swap(i, j);
                (c, *a)
            })
            .collect();
        Ok(Self { amplitudes, ..*self })
    }

    /// Multiply every amplitude by `factor` (intended for unit-modulus phases).
    pub fn scaled(&self, factor: C64) -> Self {
        let amplitudes = self.amplitudes.iter().map(|(c, a)| (c.clone(), a * factor)).collect();
        Self { amplitudes, ..*self }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureAtomicState) -> Result<C64> {
        if self.num_atoms != other.num_atoms {
            return Err(Error::DimensionMismatch { expected: self.num_atoms, found: other.num_atoms });
        }
        if self.levels_per_atom != other.levels_per_atom {
            return Err(Error::DimensionMismatch {
                expected: self.levels_per_atom as usize,
                found: other.levels_per_atom as usize,
            });
        }
        Ok(self.amplitudes.iter().filter_map(|(c, a)| other.amplitudes.get(c).map(|b| a.conj() * b)).sum())
    }
}

impl fmt::Display for PureAtomicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (label, a) in self.labelled() {
            writeln!(f, "|{label}>  {:+.9} {:+.9}i", a.re, a.im)?;
        }
        Ok(())
    }
}

/// Totally antisymmetric state of `n` particles over `n` levels:
/// `1/sqrt(n!) * sum over permutations of (-1)^parity |p_1 ... p_n>`, with the
/// identity permutation `|0 1 ... n-1>` carrying sign `+1`.
///
/// For `n = 3` the labels read `(0, 1, 2) = (g, f, e)`, so `|gfe>` is `+`.
pub fn supersinglet(n: usize) -> Result<PureAtomicState> {
    if !(2..=6).contains(&n) {
        return Err(Error::SupersingletSize(n));
    }
    let count: usize = (1..=n).product();
    let amp = 1.0 / (count as f64).sqrt();
    let amplitudes = (0..n as u8)
        .permutations(n)
        .map(|perm| {
            let inversions =
                (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
            let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
            (perm, C64::new(sign * amp, 0.0))
        })
        .collect();
    PureAtomicState::new(n, n as u8, amplitudes)
}

/// `|<target|state>|^2`.
pub fn fidelity(state: &PureAtomicState, target: &PureAtomicState) -> Result<f64> {
    Ok(target.inner(state)?.norm_sqr().min(1.0))
}

/// Closed-form amplitudes entering the vacuum branch of the three-atom
/// protocol (atoms sent in `e`, `f`, `g` into an empty cavity).
///
/// Field names read `<to>_<from>`, e.g. `f1_e0` is `C_{f1}^{(e0)}(t1)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ProtocolCoefficients {
    // first atom, time t1
    pub e0_e0: C64,
    pub f1_e0: C64,
    pub g2_e0: C64,
    // second atom, time t2
    pub f0_f0: C64,
    pub g1_f0: C64,
    pub f1_f1: C64,
    pub e0_f1: C64,
    pub g2_f1: C64,
    pub f2_f2: C64,
    pub e1_f2: C64,
    // third atom, time t3
    pub f0_g1: C64,
    pub e0_g2: C64,
}

impl ProtocolCoefficients {
    pub fn closed_form(times: [f64; 3], p: &InteractionParams) -> Result<Self> {
        use Level::{E, F, G};
        let [t1, t2, t3] = times;
        let c = |to: (Level, u32), from: (Level, u32), t: f64| coefficient(to, from, t, p);
        Ok(Self {
            e0_e0: c((E, 0), (E, 0), t1)?,
            f1_e0: c((F, 1), (E, 0), t1)?,
            g2_e0: c((G, 2), (E, 0), t1)?,
            f0_f0: c((F, 0), (F, 0), t2)?,
            g1_f0: c((G, 1), (F, 0), t2)?,
            f1_f1: c((F, 1), (F, 1), t2)?,
            e0_f1: c((E, 0), (F, 1), t2)?,
            g2_f1: c((G, 2), (F, 1), t2)?,
            f2_f2: c((F, 2), (F, 2), t2)?,
            e1_f2: c((E, 1), (F, 2), t2)?,
            f0_g1: c((F, 0), (G, 1), t3)?,
            e0_g2: c((E, 0), (G, 2), t3)?,
        })
    }

    /// The seven unnormalized vacuum-branch amplitudes.
    pub fn vacuum_terms(&self) -> [([Level; 3], C64); 7] {
        use Level::{E, F, G};
        [
            ([E, F, G], self.e0_e0 * self.f0_f0),
            ([E, G, F], self.e0_e0 * self.g1_f0 * self.f0_g1),
            ([F, F, F], self.f1_e0 * self.f1_f1 * self.f0_g1),
            ([F, E, G], self.f1_e0 * self.e0_f1),
            ([F, G, E], self.f1_e0 * self.g2_f1 * self.e0_g2),
            ([G, F, E], self.g2_e0 * self.f2_f2 * self.e0_g2),
            ([G, E, F], self.g2_e0 * self.e1_f2 * self.f0_g1),
        ]
    }

    /// Sum of the squared vacuum-branch amplitudes.
    pub fn success_probability(&self) -> f64 {
        self.vacuum_terms().iter().map(|(_, a)| a.norm_sqr()).sum()
    }
}

/// Fidelity with the supersinglet assembled from the six signed overlaps and
/// the normalization `1 / P_S`.
pub fn fidelity_formula(c: &ProtocolCoefficients) -> Result<f64> {
    let ps = c.success_probability();
    if ps == 0.0 {
        return Err(Error::ZeroProbability("vacuum branch of the three-atom protocol".into()));
    }
    let overlap = -(c.e0_e0 * c.f0_f0) + c.e0_e0 * c.g1_f0 * c.f0_g1 + c.f1_e0 * c.e0_f1 - c.f1_e0 * c.g2_f1 * c.e0_g2
        + c.g2_e0 * c.f2_f2 * c.e0_g2
        - c.g2_e0 * c.e1_f2 * c.f0_g1;
    Ok(overlap.norm_sqr() / (6.0 * ps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use Level::{E, F, G};

    #[test]
    fn two_particle_singlet() {
        let s = supersinglet(2).unwrap();
        let r = 0.5f64.sqrt();
        assert_eq!(s.len(), 2);
        assert!((s.amplitude(&[0, 1]) - C64::new(r, 0.0)).norm() < 1e-15);
        assert!((s.amplitude(&[1, 0]) + C64::new(r, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn three_qutrit_signs() {
        let s = supersinglet(3).unwrap();
        let a = 1.0 / 6f64.sqrt();
        let expected =
            [([G, F, E], a), ([G, E, F], -a), ([F, G, E], -a), ([F, E, G], a), ([E, G, F], a), ([E, F, G], -a)];
        assert_eq!(s.len(), 6);
        for (levels, amp) in expected {
            assert!((s.amplitude_of(&levels) - C64::new(amp, 0.0)).norm() < 1e-15, "{levels:?}");
        }
    }

    #[test]
    fn size_guard() {
        assert_eq!(supersinglet(1), Err(Error::SupersingletSize(1)));
        assert_eq!(supersinglet(7), Err(Error::SupersingletSize(7)));
        assert_eq!(supersinglet(6).unwrap().len(), 720);
    }

    #[test]
    fn fidelity_extremes() {
        let s = supersinglet(3).unwrap();
        assert!((fidelity(&s, &s).unwrap() - 1.0).abs() < 1e-15);
        let fff = PureAtomicState::from_levels(3, [(vec![F, F, F], C64::new(1.0, 0.0))]).unwrap();
        assert_eq!(fidelity(&fff, &s).unwrap(), 0.0);
        let two = supersinglet(2).unwrap();
        assert!(fidelity(&two, &s).is_err());
    }

    #[test]
    fn formula_single_ket_overlap() {
        let c = ProtocolCoefficients { f1_e0: C64::new(1.0, 0.0), e0_f1: C64::new(1.0, 0.0), ..Default::default() };
        assert_eq!(c.success_probability(), 1.0);
        assert!((fidelity_formula(&c).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!(fidelity_formula(&ProtocolCoefficients::default()).is_err());
    }

    #[test]
    fn unnormalized_state_rejected() {
        let r = PureAtomicState::from_levels(1, [(vec![E], C64::new(0.5, 0.0))]);
        assert!(matches!(r, Err(Error::NotNormalized(_))));
    }
}
