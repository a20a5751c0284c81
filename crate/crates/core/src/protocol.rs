//! Sequential passage of atoms through the cavity and projective cavity
//! measurement.
//!
//! The joint state is a sparse map from `(atomic configuration, photons)` to
//! amplitude. Atoms are appended in pass order, so position `0` of a
//! configuration is the first atom sent through the cavity. Every pass
//! starts its own interaction clock at zero.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::amplitudes::{propagator, SubspacePropagator};
use crate::level::{levels_to_string, parse_levels};
use crate::metrics::PureAtomicState;
use crate::{Error, InteractionParams, Level, Result, SubspaceIndex};

/// Amplitudes with modulus below this are dropped after every operation.
pub const PRUNE_THRESHOLD: f64 = 1e-15;
pub const DEFAULT_PHOTON_CUTOFF: u32 = 6;
/// Highest photon number reached by the three-atom protocol (`|g,g,g,3>`).
pub const MIN_PHOTON_CUTOFF: u32 = 3;

const ATOM_NORM_TOLERANCE: f64 = 1e-12;
const JOINT_NORM_TOLERANCE: f64 = 1e-10;

/// Normalized single-atom state `C_e|e> + C_f|f> + C_g|g>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtomState {
    amps: [C64; 3],
}

impl AtomState {
    pub fn new(e: C64, f: C64, g: C64) -> Result<Self> {
        let norm = e.norm_sqr() + f.norm_sqr() + g.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > ATOM_NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amps: [e, f, g] })
    }

    pub fn basis(level: Level) -> Self {
        let mut amps = [C64::new(0.0, 0.0); 3];
        amps[slot(level)] = C64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn amplitude(&self, level: Level) -> C64 {
        self.amps[slot(level)]
    }
}

fn slot(level: Level) -> usize {
    match level {
        Level::E => 0,
        Level::F => 1,
        Level::G => 2,
    }
}

/// One atom and how long it interacts with the cavity (µs).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PassSpec {
    pub atom: AtomState,
    duration: f64,
}

impl PassSpec {
    pub fn new(atom: AtomState, duration: f64) -> Result<Self> {
        if !(duration.is_finite() && duration >= 0.0) {
            return Err(Error::InvalidTime(duration));
        }
        Ok(Self { atom, duration })
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }
}

type Ket = (Vec<Level>, u32);

/// Pure state of the atoms that have crossed the cavity plus the cavity mode,
/// truncated at `photon_cutoff` photons.
#[derive(Clone, Debug, PartialEq)]
pub struct JointState {
    num_atoms: usize,
    photon_cutoff: u32,
    amplitudes: BTreeMap<Ket, C64>,
}

/// Empty cavity, no atoms yet.
pub fn vacuum_joint_state(cutoff: u32) -> Result<JointState> {
    JointState::fock(0, cutoff)
}

impl JointState {
    /// Cavity in Fock state `|photons>` with no atoms.
    pub fn fock(photons: u32, cutoff: u32) -> Result<Self> {
        if cutoff < MIN_PHOTON_CUTOFF {
            return Err(Error::CutoffTooSmall { cutoff, min: MIN_PHOTON_CUTOFF });
        }
        if photons > cutoff {
            return Err(Error::PhotonOutOfRange { photons, cutoff });
        }
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert((Vec::new(), photons), C64::new(1.0, 0.0));
        Ok(Self { num_atoms: 0, photon_cutoff: cutoff, amplitudes })
    }

    /// Build from explicit kets; the result must be normalized.
    pub fn from_kets<I>(num_atoms: usize, cutoff: u32, kets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<Level>, u32, C64)>,
    {
        if cutoff < MIN_PHOTON_CUTOFF {
            return Err(Error::CutoffTooSmall { cutoff, min: MIN_PHOTON_CUTOFF });
        }
        let mut amplitudes = BTreeMap::new();
        for (levels, photons, amp) in kets {
            if levels.len() != num_atoms {
                return Err(Error::DimensionMismatch { expected: num_atoms, found: levels.len() });
            }
            if photons > cutoff {
                return Err(Error::PhotonOutOfRange { photons, cutoff });
            }
            if !(amp.re.is_finite() && amp.im.is_finite()) {
                return Err(Error::Parse("non-finite amplitude".into()));
            }
            let key = (levels, photons);
            if amplitudes.insert(key.clone(), amp).is_some() {
                return Err(Error::Parse(format!("duplicate ket |{},{}>", levels_to_string(&key.0), key.1)));
            }
        }
        let state = Self { num_atoms, photon_cutoff: cutoff, amplitudes: pruned(amplitudes) };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > JOINT_NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    pub fn num_atoms(&self) -> usize {
        self.num_atoms
    }

    pub fn photon_cutoff(&self) -> u32 {
        self.photon_cutoff
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitude(&self, levels: &[Level], photons: u32) -> C64 {
        self.amplitudes.get(&(levels.to_vec(), photons)).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[Level], u32, C64)> + '_ {
        self.amplitudes.iter().map(|((l, n), a)| (l.as_slice(), *n, *a))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// Probability of each photon number.
    pub fn photon_distribution(&self) -> BTreeMap<u32, f64> {
        let mut out = BTreeMap::new();
        for ((_, n), a) in &self.amplitudes {
            *out.entry(*n).or_insert(0.0) += a.norm_sqr();
        }
        out
    }

    /// Probability carried by each total excitation `2 #e + #f + photons`.
    pub fn excitation_distribution(&self) -> BTreeMap<u32, f64> {
        let mut out = BTreeMap::new();
        for ((levels, n), a) in &self.amplitudes {
            let x = levels.iter().map(|l| l.excitation()).sum::<u32>() + n;
            *out.entry(x).or_insert(0.0) += a.norm_sqr();
        }
        out
    }

    /// Send one more atom through the cavity.
    ///
    /// Each branch `|config> (x) |atom> (x) |n>` is split over the invariant
    /// subspaces of the new atom and the field, and every piece is evolved by
    /// its closed-form propagator. Fails if any touched subspace reaches past
    /// the photon cutoff.
    pub fn pass_atom(&self, pass: &PassSpec, p: &InteractionParams) -> Result<JointState> {
        let mut cache: HashMap<SubspaceIndex, SubspacePropagator> = HashMap::new();
        let mut out: BTreeMap<Ket, C64> = BTreeMap::new();
        for ((config, photons), amp) in &self.amplitudes {
            for &level in &Level::ALL {
                let atom_amp = pass.atom.amplitude(level);
                if atom_amp == C64::new(0.0, 0.0) {
                    continue;
                }
                let sub = SubspaceIndex::containing(level, *photons);
                if sub.max_photons() > self.photon_cutoff {
                    return Err(Error::CutoffExceeded { photons: sub.max_photons(), cutoff: self.photon_cutoff });
                }
                let u = match cache.get(&sub) {
                    Some(u) => u,
                    None => {
                        let u = propagator(sub, pass.duration, p)?;
                        cache.entry(sub).or_insert(u)
                    }
                };
                let col = sub.row_of(level).expect("level belongs to its own subspace");
                let weight = amp * atom_amp;
                for (row, &to) in sub.levels().iter().enumerate() {
                    let mut levels = Vec::with_capacity(config.len() + 1);
                    levels.extend_from_slice(config);
                    levels.push(to);
                    let n = sub.photons(to).expect("level belongs to subspace");
                    *out.entry((levels, n)).or_default() += u.entry(row, col) * weight;
                }
            }
        }
        Ok(JointState { num_atoms: self.num_atoms + 1, photon_cutoff: self.photon_cutoff, amplitudes: pruned(out) })
    }

    /// Project the cavity onto `|photons>`. Returns the renormalized atomic
    /// state and the probability of the outcome.
    pub fn project_cavity(&self, photons: u32) -> Result<(PureAtomicState, f64)> {
        if photons > self.photon_cutoff {
            return Err(Error::PhotonOutOfRange { photons, cutoff: self.photon_cutoff });
        }
        let branch: Vec<(Vec<Level>, C64)> =
            self.amplitudes.iter().filter(|((_, n), _)| *n == photons).map(|((l, _), a)| (l.clone(), *a)).collect();
        let prob: f64 = branch.iter().map(|(_, a)| a.norm_sqr()).sum();
        if prob == 0.0 {
            return Err(Error::ZeroProbability(format!("cavity in |{photons}>")));
        }
        let scale = 1.0 / prob.sqrt();
        let state = PureAtomicState::from_levels(self.num_atoms, branch.into_iter().map(|(l, a)| (l, a * scale)))?;
        Ok((state, prob))
    }

    /// Measure atom `index` in `level` and discard it. Returns the
    /// renormalized remaining state and the outcome probability.
    pub fn measure_atom(&self, index: usize, level: Level) -> Result<(JointState, f64)> {
        if index >= self.num_atoms {
            return Err(Error::AtomIndex { index, num_atoms: self.num_atoms });
        }
        let mut kept = BTreeMap::new();
        let mut prob = 0.0;
        for ((config, n), a) in &self.amplitudes {
            if config[index] == level {
                let mut rest = config.clone();
                rest.remove(index);
                prob += a.norm_sqr();
                kept.insert((rest, *n), *a);
            }
        }
        if prob == 0.0 {
            return Err(Error::ZeroProbability(format!("atom {index} in |{level}>")));
        }
        let scale = 1.0 / prob.sqrt();
        for a in kept.values_mut() {
            *a *= scale;
        }
        Ok((
            JointState { num_atoms: self.num_atoms - 1, photon_cutoff: self.photon_cutoff, amplitudes: pruned(kept) },
            prob,
        ))
    }

    pub fn to_document(&self) -> JointStateDocument {
        JointStateDocument {
            photon_cutoff: self.photon_cutoff,
            num_atoms: self.num_atoms,
            amplitudes: self
                .amplitudes
                .iter()
                .map(|((l, n), a)| KetAmplitude { levels: levels_to_string(l), n: *n, re: a.re, im: a.im })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("plain data serializes")
    }

    /// Decode the JSON written by [`JointState::to_json`]. All invariants
    /// are re-checked.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: JointStateDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("joint state JSON: {e}")))?;
        JointState::try_from(doc)
    }
}

fn pruned(map: BTreeMap<Ket, C64>) -> BTreeMap<Ket, C64> {
    map.into_iter().filter(|(_, a)| a.norm() >= PRUNE_THRESHOLD).collect()
}

impl fmt::Display for JointState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((levels, n), a) in &self.amplitudes {
            writeln!(f, "|{},{}>  {:+.9} {:+.9}i", levels_to_string(levels), n, a.re, a.im)?;
        }
        Ok(())
    }
}

/// One serialized ket.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KetAmplitude {
    pub levels: String,
    pub n: u32,
    pub re: f64,
    pub im: f64,
}

/// Serialized [`JointState`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointStateDocument {
    pub photon_cutoff: u32,
    pub num_atoms: usize,
    pub amplitudes: Vec<KetAmplitude>,
}

impl TryFrom<JointStateDocument> for JointState {
    type Error = Error;

    fn try_from(doc: JointStateDocument) -> Result<Self> {
        let kets = doc
            .amplitudes
            .into_iter()
            .map(|k| Ok((parse_levels(&k.levels)?, k.n, C64::new(k.re, k.im))))
            .collect::<Result<Vec<_>>>()?;
        JointState::from_kets(doc.num_atoms, doc.photon_cutoff, kets)
    }
}

/// Interaction times of the three protocol atoms (µs).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolTimes {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
}

impl ProtocolTimes {
    pub fn new(t1: f64, t2: f64, t3: f64) -> Result<Self> {
        for t in [t1, t2, t3] {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::InvalidTime(t));
            }
        }
        Ok(Self { t1, t2, t3 })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.t1, self.t2, self.t3]
    }
}

impl FromStr for ProtocolTimes {
    type Err = Error;

    /// Parses `"t1,t2,t3"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected three comma-separated times, got {s:?}")));
        }
        let mut t = [0.0; 3];
        for (slot, part) in t.iter_mut().zip(&parts) {
            *slot = part.parse::<f64>().map_err(|e| Error::Parse(format!("time {part:?}: {e}")))?;
        }
        Self::new(t[0], t[1], t[2])
    }
}

impl fmt::Display for ProtocolTimes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.t1, self.t2, self.t3)
    }
}

/// Pass atoms in `e`, `f`, `g` through an initially empty cavity.
pub fn run_three_atom_protocol(times: ProtocolTimes, p: &InteractionParams, cutoff: u32) -> Result<JointState> {
    let mut state = vacuum_joint_state(cutoff)?;
    for (level, t) in [Level::E, Level::F, Level::G].into_iter().zip(times.as_array()) {
        state = state.pass_atom(&PassSpec::new(AtomState::basis(level), t)?, p)?;
    }
    Ok(state)
}
