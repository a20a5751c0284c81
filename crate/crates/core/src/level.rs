use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Atomic level of the ladder `g - f - e`.
///
/// The numeric label (`g=0`, `f=1`, `e=2`) fixes the canonical order used by
/// the supersinglet construction, and coincides with the number of cavity
/// photons the level can release.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Level {
    E,
    F,
    G,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::E, Level::F, Level::G];

    /// Qutrit label: g=0, f=1, e=2.
    pub fn index(self) -> u8 {
        match self {
            Level::G => 0,
            Level::F => 1,
            Level::E => 2,
        }
    }

    pub fn from_index(i: u8) -> Option<Level> {
        match i {
            0 => Some(Level::G),
            1 => Some(Level::F),
            2 => Some(Level::E),
            _ => None,
        }
    }

    /// Excitation carried by the atom: e counts 2, f counts 1, g counts 0.
    pub fn excitation(self) -> u32 {
        self.index() as u32
    }

    pub fn symbol(self) -> char {
        match self {
            Level::E => 'e',
            Level::F => 'f',
            Level::G => 'g',
        }
    }

    pub fn from_symbol(c: char) -> Result<Level> {
        match c {
            'e' => Ok(Level::E),
            'f' => Ok(Level::F),
            'g' => Ok(Level::G),
            other => Err(Error::Parse(format!("unknown atomic level {other:?}"))),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

pub(crate) fn levels_to_string(levels: &[Level]) -> String {
    levels.iter().map(|l| l.symbol()).collect()
}

pub(crate) fn parse_levels(s: &str) -> Result<Vec<Level>> {
    s.chars().map(Level::from_symbol).collect()
}
