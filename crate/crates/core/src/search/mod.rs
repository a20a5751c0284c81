//! Parameter scans over interaction times and detuning.
//!
//! Every point runs the full three-atom protocol and projects the cavity on
//! the vacuum. Grid points are evaluated in parallel but always returned in
//! lexicographic order of `(t1, t2, t3, delta)`, so outputs do not depend on
//! the thread count.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::metrics::{fidelity, supersinglet};
use crate::optimize::grid_then_golden_max;
use crate::protocol::{run_three_atom_protocol, ProtocolTimes, DEFAULT_PHOTON_CUTOFF};
use crate::{Error, InteractionParams, Result};

pub mod tables;

pub use tables::{table, PublishedRow, ReferenceTable, TABLES};

/// Upper bound on the number of values a single axis may expand to.
pub const MAX_AXIS_POINTS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    T1,
    T2,
    T3,
    Delta,
}

impl Axis {
    pub const ALL: [Axis; 4] = [Axis::T1, Axis::T2, Axis::T3, Axis::Delta];

    pub fn name(self) -> &'static str {
        match self {
            Axis::T1 => "t1",
            Axis::T2 => "t2",
            Axis::T3 => "t3",
            Axis::Delta => "delta",
        }
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Axis::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| Error::Parse(format!("unknown axis {s:?}")))
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Inclusive arithmetic range `start, start + step, ..., <= stop`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisRange {
    start: f64,
    stop: f64,
    step: f64,
}

impl AxisRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::InvalidRange(format!("{start}:{stop}:{step} is not finite")));
        }
        if step <= 0.0 {
            return Err(Error::InvalidRange(format!("step must be positive, got {step}")));
        }
        if start > stop {
            return Err(Error::InvalidRange(format!("start {start} exceeds stop {stop}")));
        }
        let range = Self { start, stop, step };
        if range.count_unchecked() > MAX_AXIS_POINTS as f64 {
            return Err(Error::InvalidRange(format!("{start}:{stop}:{step} expands past {MAX_AXIS_POINTS} points")));
        }
        Ok(range)
    }

    pub fn single(value: f64) -> Result<Self> {
        Self::new(value, value, 1.0)
    }

    fn count_unchecked(&self) -> f64 {
        ((self.stop - self.start) / self.step + 1e-9).floor() + 1.0
    }

    pub fn len(&self) -> usize {
        self.count_unchecked() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl FromStr for AxisRange {
    type Err = Error;

    /// `start:stop:step` or a single value.
    fn from_str(s: &str) -> Result<Self> {
        let num =
            |part: &str| part.trim().parse::<f64>().map_err(|e| Error::Parse(format!("range component {part:?}: {e}")));
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [v] => Self::single(num(v)?),
            [a, b, c] => Self::new(num(a)?, num(b)?, num(c)?),
            _ => Err(Error::Parse(format!("expected start:stop:step or a value, got {s:?}"))),
        }
    }
}

impl fmt::Display for AxisRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

/// Gridded axes of a scan.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GridSpec {
    axes: BTreeMap<Axis, AxisRange>,
}

impl GridSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, axis: Axis, range: AxisRange) -> Self {
        self.axes.insert(axis, range);
        self
    }

    pub fn get(&self, axis: Axis) -> Option<&AxisRange> {
        self.axes.get(&axis)
    }

    pub fn num_points(&self) -> usize {
        self.axes.values().map(|r| r.len()).product()
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    /// Whitespace- or `;`-separated `axis=range` entries, e.g.
    /// `"t2=1:50:1; t3=1:100:1"`.
    fn from_str(s: &str) -> Result<Self> {
        let mut grid = GridSpec::new();
        for entry in s.split(|c: char| c == ';' || c.is_whitespace()).filter(|e| !e.is_empty()) {
            let (axis, range) =
                entry.split_once('=').ok_or_else(|| Error::Parse(format!("expected axis=range, got {entry:?}")))?;
            let axis: Axis = axis.parse()?;
            if grid.axes.contains_key(&axis) {
                return Err(Error::Parse(format!("axis {axis} given twice")));
            }
            grid.axes.insert(axis, range.parse()?);
        }
        Ok(grid)
    }
}

/// Values held constant during a scan. `g` is the common coupling `g1 = g2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedParams {
    pub g: f64,
    pub t1: Option<f64>,
    pub t2: Option<f64>,
    pub t3: Option<f64>,
    pub delta: Option<f64>,
}

impl FixedParams {
    pub fn new(g: f64) -> Self {
        Self { g, t1: None, t2: None, t3: None, delta: None }
    }

    pub fn get(&self, axis: Axis) -> Option<f64> {
        match axis {
            Axis::T1 => self.t1,
            Axis::T2 => self.t2,
            Axis::T3 => self.t3,
            Axis::Delta => self.delta,
        }
    }

    pub fn set(mut self, axis: Axis, value: f64) -> Self {
        match axis {
            Axis::T1 => self.t1 = Some(value),
            Axis::T2 => self.t2 = Some(value),
            Axis::T3 => self.t3 = Some(value),
            Axis::Delta => self.delta = Some(value),
        }
        self
    }
}

/// One evaluated parameter point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanRecord {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub g: f64,
    pub delta: f64,
    pub fidelity: f64,
    pub success_prob: f64,
}

impl ScanRecord {
    pub fn times(&self) -> ProtocolTimes {
        ProtocolTimes { t1: self.t1, t2: self.t2, t3: self.t3 }
    }
}

/// Run the protocol at one point and score the vacuum-projected state.
pub fn evaluate(times: ProtocolTimes, g: f64, delta: f64) -> Result<ScanRecord> {
    let p = InteractionParams::symmetric(g, delta)?;
    let joint = run_three_atom_protocol(times, &p, DEFAULT_PHOTON_CUTOFF)?;
    let (atoms, success_prob) = joint.project_cavity(0)?;
    let fidelity = fidelity(&atoms, &supersinglet(3)?)?;
    Ok(ScanRecord { t1: times.t1, t2: times.t2, t3: times.t3, g, delta, fidelity, success_prob })
}

fn evaluate_all(points: Vec<(ProtocolTimes, f64, f64)>) -> Result<Vec<ScanRecord>> {
    points.into_par_iter().map(|(times, g, delta)| evaluate(times, g, delta)).collect()
}

/// Evaluate every point of `grid`, taking the remaining parameters from
/// `fixed`.
pub fn scan(grid: &GridSpec, fixed: &FixedParams) -> Result<Vec<ScanRecord>> {
    let mut axis_values: Vec<Vec<f64>> = Vec::with_capacity(4);
    for axis in Axis::ALL {
        let values = match (grid.get(axis), fixed.get(axis)) {
            (Some(_), Some(_)) => return Err(Error::AxisConflict(axis.name())),
            (Some(r), None) => r.values(),
            (None, Some(v)) => vec![v],
            (None, None) => return Err(Error::MissingAxis(axis.name())),
        };
        axis_values.push(values);
    }
    let total: usize = axis_values.iter().map(Vec::len).product();
    let mut points = Vec::with_capacity(total);
    for &t1 in &axis_values[0] {
        for &t2 in &axis_values[1] {
            for &t3 in &axis_values[2] {
                for &delta in &axis_values[3] {
                    points.push((ProtocolTimes::new(t1, t2, t3)?, fixed.g, delta));
                }
            }
        }
    }
    evaluate_all(points)
}

/// Fidelity and success probability as a function of detuning at fixed times.
pub fn sweep_detuning(times: ProtocolTimes, g: f64, deltas: &[f64]) -> Result<Vec<ScanRecord>> {
    evaluate_all(deltas.iter().map(|&d| (times, g, d)).collect())
}

/// Fidelity over a `(t2, t3)` plane at fixed `t1`. Rows follow `t2`, columns `t3`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Surface {
    pub t1: f64,
    pub g: f64,
    pub delta: f64,
    pub t2: Vec<f64>,
    pub t3: Vec<f64>,
    pub fidelity: Vec<Vec<f64>>,
    pub success_prob: Vec<Vec<f64>>,
}

impl Surface {
    pub fn at(&self, t2: f64, t3: f64) -> Option<(f64, f64)> {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b.abs().max(1.0);
        let i = self.t2.iter().position(|&v| close(v, t2))?;
        let j = self.t3.iter().position(|&v| close(v, t3))?;
        Some((self.fidelity[i][j], self.success_prob[i][j]))
    }
}

pub fn scan_surface(t1: f64, t2: &AxisRange, t3: &AxisRange, g: f64, delta: f64) -> Result<Surface> {
    let grid = GridSpec::new().with(Axis::T2, *t2).with(Axis::T3, *t3);
    let fixed = FixedParams::new(g).set(Axis::T1, t1).set(Axis::Delta, delta);
    let records = scan(&grid, &fixed)?;
    let t2v = t2.values();
    let t3v = t3.values();
    let cols = t3v.len();
    let fidelity = records.chunks(cols).map(|row| row.iter().map(|r| r.fidelity).collect()).collect();
    let success_prob = records.chunks(cols).map(|row| row.iter().map(|r| r.success_prob).collect()).collect();
    Ok(Surface { t1, g, delta, t2: t2v, t3: t3v, fidelity, success_prob })
}

/// Settings for [`refine_optimum`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefineOptions {
    /// Initial half-width of the bracket searched along each axis (µs).
    pub radius: f64,
    /// Stop once the bracket half-width drops below this (µs).
    pub tol: f64,
    /// Grid points per bracket before golden refinement.
    pub samples: usize,
}

impl Default for RefineOptions {
    fn default() -> Self {
        Self { radius: 1.0, tol: 1e-3, samples: 16 }
    }
}

/// Cyclic coordinate ascent on the fidelity, axis order `t1, t2, t3`, with a
/// bracket that halves after every sweep. A move is accepted only when it
/// strictly improves the fidelity, or ties it at a smaller time, so the
/// result is never worse than the seed.
pub fn refine_optimum(seed: ProtocolTimes, g: f64, delta: f64, opts: &RefineOptions) -> Result<ScanRecord> {
    if !(opts.radius.is_finite() && opts.radius > 0.0 && opts.tol > 0.0 && opts.samples > 0) {
        return Err(Error::InvalidRange("refine radius, tolerance and samples must be positive".into()));
    }
    let mut best = evaluate(seed, g, delta)?;
    let mut radius = opts.radius;
    while radius >= opts.tol {
        for axis in 0..3 {
            let mut times = best.times().as_array();
            let centre = times[axis];
            let objective = |x: f64| {
                let mut t = times;
                t[axis] = x;
                ProtocolTimes::new(t[0], t[1], t[2])
                    .and_then(|t| evaluate(t, g, delta))
                    .map_or(f64::NEG_INFINITY, |r| r.fidelity)
            };
            let lo = (centre - radius).max(0.0);
            let hi = centre + radius;
            let (x, _) = grid_then_golden_max(objective, lo, hi, (hi - lo) / opts.samples as f64, opts.tol * 1e-2);
            times[axis] = x;
            let candidate = evaluate(ProtocolTimes::new(times[0], times[1], times[2])?, g, delta)?;
            let better = candidate.fidelity > best.fidelity || (candidate.fidelity == best.fidelity && x < centre);
            if better {
                best = candidate;
            }
        }
        radius *= 0.5;
    }
    Ok(best)
}

/// Recompute every row of a reference table.
pub fn reproduce_table(number: u8) -> Result<Vec<ScanRecord>> {
    let t = table(number).ok_or_else(|| Error::InvalidRange(format!("no table {number}; expected 1-4")))?;
    let points = t
        .rows
        .iter()
        .map(|r| Ok((ProtocolTimes::new(r.times[0], r.times[1], r.times[2])?, t.g, t.delta())))
        .collect::<Result<Vec<_>>>()?;
    evaluate_all(points)
}
