//! Run configuration read from `key = value` files.
//!
//! ```text
//! # couplings in rad/µs
//! g = 17.5
//! delta = 0
//! photon_cutoff = 6
//! format = csv
//! ```
//!
//! Recognised keys: `g` (sets both couplings), `g1`, `g2`, `delta`,
//! `photon_cutoff` (alias `cutoff`), `output`, `format`, `seed`. Blank lines
//! and `#` comments are ignored. Later lines override earlier ones.

use std::env;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::protocol::{DEFAULT_PHOTON_CUTOFF, MIN_PHOTON_CUTOFF};
use crate::{Error, InteractionParams, Result};

/// Relative output paths are resolved against this directory when set.
pub const OUTPUT_DIR_ENV: &str = "SUPERSINGLET_OUTPUT_DIR";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Parse(format!("unknown output format {other:?}"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub g1: f64,
    pub g2: f64,
    pub delta: f64,
    pub photon_cutoff: u32,
    pub output: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { g1: 1.0, g2: 1.0, delta: 0.0, photon_cutoff: DEFAULT_PHOTON_CUTOFF, output: None, format: None, seed: 0 }
    }
}

impl RunConfig {
    /// Parse a configuration file on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply(text)?;
        Ok(cfg)
    }

    /// Apply `key = value` lines on top of the current values.
    pub fn apply(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let ctx = |e: Error| Error::Parse(format!("line {}: {key}: {e}", lineno + 1));
            match key {
                "g" => {
                    let g = parse_f64(value).map_err(ctx)?;
                    self.g1 = g;
                    self.g2 = g;
                }
                "g1" => self.g1 = parse_f64(value).map_err(ctx)?,
                "g2" => self.g2 = parse_f64(value).map_err(ctx)?,
                "delta" => self.delta = parse_f64(value).map_err(ctx)?,
                "photon_cutoff" | "cutoff" => {
                    self.photon_cutoff = value.parse().map_err(|e| ctx(Error::Parse(format!("{value:?}: {e}"))))?
                }
                "output" => {
                    if value.is_empty() {
                        return Err(ctx(Error::Parse("empty path".into())));
                    }
                    self.output = Some(PathBuf::from(value));
                }
                "format" => self.format = Some(value.parse().map_err(ctx)?),
                "seed" => self.seed = value.parse().map_err(|e| ctx(Error::Parse(format!("{value:?}: {e}"))))?,
                other => return Err(Error::Parse(format!("line {}: unknown key {other:?}", lineno + 1))),
            }
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        self.params()?;
        if self.photon_cutoff < MIN_PHOTON_CUTOFF {
            return Err(Error::CutoffTooSmall { cutoff: self.photon_cutoff, min: MIN_PHOTON_CUTOFF });
        }
        Ok(())
    }

    pub fn params(&self) -> Result<InteractionParams> {
        InteractionParams::new(self.g1, self.g2, self.delta)
    }

    /// Output path with relative paths placed under `$SUPERSINGLET_OUTPUT_DIR`.
    pub fn resolved_output(&self) -> Option<PathBuf> {
        self.output.as_deref().map(|p| resolve_output_path(p, env::var_os(OUTPUT_DIR_ENV).as_deref().map(Path::new)))
    }
}

fn parse_f64(value: &str) -> Result<f64> {
    let v: f64 = value.parse().map_err(|e| Error::Parse(format!("{value:?}: {e}")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("{value:?} is not finite")));
    }
    Ok(v)
}

pub fn resolve_output_path(path: &Path, dir: Option<&Path>) -> PathBuf {
    match dir {
        Some(d) if path.is_relative() => d.join(path),
        _ => path.to_path_buf(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = RunConfig::parse("").unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!((c.g1, c.g2, c.delta, c.photon_cutoff), (1.0, 1.0, 0.0, 6));
    }

    #[test]
    fn keys_and_comments() {
        let c = RunConfig::parse(
            "# header\ng = 17.5\ndelta=1.75 # tenth of g\n\ncutoff = 4\nformat = JSON\nseed=7\noutput = out.csv\n",
        )
        .unwrap();
        assert_eq!((c.g1, c.g2, c.delta, c.photon_cutoff, c.seed), (17.5, 17.5, 1.75, 4, 7));
        assert_eq!(c.format, Some(OutputFormat::Json));
        assert_eq!(c.output, Some(PathBuf::from("out.csv")));
    }

    #[test]
    fn errors() {
        assert!(RunConfig::parse("g1 1").is_err());
        assert!(RunConfig::parse("colour = red").is_err());
        assert!(RunConfig::parse("g = 0").is_err());
        assert!(RunConfig::parse("g = nan").is_err());
        assert!(RunConfig::parse("cutoff = 2").is_err());
        assert!(RunConfig::parse("cutoff = -1").is_err());
        assert!(RunConfig::parse("format = xml").is_err());
    }

    #[test]
    fn output_dir_resolution() {
        let dir = Path::new("/data");
        assert_eq!(resolve_output_path(Path::new("a.csv"), Some(dir)), PathBuf::from("/data/a.csv"));
        assert_eq!(resolve_output_path(Path::new("/tmp/a.csv"), Some(dir)), PathBuf::from("/tmp/a.csv"));
        assert_eq!(resolve_output_path(Path::new("a.csv"), None), PathBuf::from("a.csv"));
    }
}
