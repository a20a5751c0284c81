//! CSV and JSON emitters.
//!
//! CSV files use LF line endings and render every float with 9 significant
//! digits, so identical inputs produce byte-identical files.

use std::io::{self, Write};

use serde::Serialize;

use crate::detection::{AuxOutcome, CertifiedOutcome};
use crate::metrics::PureAtomicState;
use crate::search::{ScanRecord, Surface};

pub const CSV_HEADER: &str = "t1_us,t2_us,t3_us,g_rad_per_us,delta_rad_per_us,fidelity,success_prob";
pub const CSV_SIGNIFICANT_DIGITS: usize = 9;

/// Render `x` with `sig` significant digits, in positional notation when the
/// decimal exponent lies in `[-5, sig)` and in scientific notation otherwise.
pub fn format_sig(x: f64, sig: usize) -> String {
    let sig = sig.max(1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let exp: i32 =
        sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).expect("scientific formatting always has an exponent");
    if (-5..sig as i32).contains(&exp) {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

fn csv_num(x: f64) -> String {
    format_sig(x, CSV_SIGNIFICANT_DIGITS)
}

pub fn write_records_csv<W: Write>(mut out: W, records: &[ScanRecord]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        let fields = [r.t1, r.t2, r.t3, r.g, r.delta, r.fidelity, r.success_prob].map(csv_num);
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

pub fn records_to_csv(records: &[ScanRecord]) -> String {
    let mut buf = Vec::new();
    write_records_csv(&mut buf, records).expect("writing to memory");
    String::from_utf8(buf).expect("ASCII output")
}

/// Fidelity surface as a matrix: the header row holds the `t3` values, each
/// following row starts with its `t2` value.
pub fn write_surface_csv<W: Write>(mut out: W, s: &Surface) -> io::Result<()> {
    writeln!(
        out,
        "# fidelity; t1_us={} g_rad_per_us={} delta_rad_per_us={}; rows t2_us, columns t3_us",
        csv_num(s.t1),
        csv_num(s.g),
        csv_num(s.delta)
    )?;
    let header: Vec<String> =
        std::iter::once("t2_us\\t3_us".to_string()).chain(s.t3.iter().map(|&v| csv_num(v))).collect();
    writeln!(out, "{}", header.join(","))?;
    for (t2, row) in s.t2.iter().zip(&s.fidelity) {
        let line: Vec<String> = std::iter::once(csv_num(*t2)).chain(row.iter().map(|&v| csv_num(v))).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

#[derive(Serialize)]
pub struct AmplitudeEntry {
    pub levels: String,
    pub re: f64,
    pub im: f64,
}

pub fn amplitude_entries(state: &PureAtomicState) -> Vec<AmplitudeEntry> {
    state.labelled().into_iter().map(|(levels, a)| AmplitudeEntry { levels, re: a.re, im: a.im }).collect()
}

/// JSON body of a `protocol` run: the CSV fields plus the atomic amplitudes.
#[derive(Serialize)]
pub struct ProtocolReport {
    #[serde(flatten)]
    pub record: ScanRecord,
    pub g1: f64,
    pub g2: f64,
    pub projection: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detection: Option<DetectionSummary>,
    pub amplitudes: Vec<AmplitudeEntry>,
}

#[derive(Serialize)]
pub struct DetectionSummary {
    pub t_prime_us: Vec<f64>,
    pub prob_all_g: f64,
    pub error_bound: f64,
    pub vacuum_confidence: f64,
    pub residual_nonvacuum: f64,
}

impl DetectionSummary {
    pub fn from_certified(times: &[f64], c: &CertifiedOutcome) -> Self {
        Self {
            t_prime_us: times.to_vec(),
            prob_all_g: c.success_probability,
            error_bound: c.error_bound,
            vacuum_confidence: c.vacuum_confidence,
            residual_nonvacuum: c.residual_nonvacuum,
        }
    }
}

/// JSON body of a `detect` run.
#[derive(Serialize)]
pub struct DetectReport {
    pub t_prime_us: Vec<f64>,
    pub prob_all_g: f64,
    pub residual_nonvacuum: f64,
    pub steps: Vec<crate::detection::AuxStep>,
}

impl DetectReport {
    pub fn new(times: &[f64], o: &AuxOutcome) -> Self {
        Self {
            t_prime_us: times.to_vec(),
            prob_all_g: o.prob_g,
            residual_nonvacuum: o.residual_nonvacuum,
            steps: o.steps.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(23.0, 9), "23.0000000");
        assert_eq!(format_sig(0.976124194393068, 9), "0.976124194");
        assert_eq!(format_sig(0.6294109892742432, 9), "0.629410989");
        assert_eq!(format_sig(9.9999999999, 9), "10.0000000");
        assert_eq!(format_sig(1.75, 9), "1.75000000");
        assert_eq!(format_sig(0.0, 9), "0");
        assert_eq!(format_sig(-0.1, 9), "-0.100000000");
        assert_eq!(format_sig(5.7e-5, 9), "0.0000570000000");
        assert_eq!(format_sig(5.7e-6, 9), "5.70000000e-6");
        assert_eq!(format_sig(1.234e-7, 9), "1.23400000e-7");
        assert_eq!(format_sig(1.0e12, 9), "1.00000000e12");
    }

    #[test]
    fn csv_layout() {
        let r = ScanRecord { t1: 23.0, t2: 1.0, t3: 45.0, g: 1.0, delta: 0.0, fidelity: 0.5, success_prob: 0.25 };
        let csv = records_to_csv(&[r]);
        let mut lines = csv.split('\n');
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(lines.next(), Some("23.0000000,1.00000000,45.0000000,1.00000000,0,0.500000000,0.250000000"));
        assert_eq!(lines.next(), Some(""));
        assert!(!csv.contains('\r'));
    }
}
