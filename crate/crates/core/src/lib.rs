//! Simulation of three ladder-type atoms sent one after another through a
//! single cavity mode under the two-photon Jaynes-Cummings interaction, with
//! post-selection on the cavity vacuum to prepare the three-qutrit
//! supersinglet.
//!
//! The crate is organised bottom-up:
//!
//! * [`amplitudes`]: closed-form propagators on each invariant subspace
//!   `{|e,n>, |f,n+1>, |g,n+2>}`.
//! * [`ode`]: a fixed-step RK4 integrator of the interaction-picture amplitude
//!   equations, used as an independent oracle for the closed forms.
//! * [`protocol`]: the sparse joint atoms-plus-cavity state, atom passes and
//!   cavity projection.
//! * [`metrics`]: supersinglet targets, fidelity, and the explicit
//!   coefficient-product formulas for the three-atom protocol.
//! * [`detection`]: auxiliary ground-state atoms that certify the cavity
//!   vacuum.
//! * [`search`]: grid scans, detuning sweeps, fidelity surfaces and local
//!   refinement over interaction times.
//! * [`config`] and [`report`]: run configuration and CSV/JSON emitters used
//!   by the command-line front end.
//!
//! Units: couplings and detuning in rad/µs, times in µs, so `g * t` is a
//! phase in radians.

pub mod amplitudes;
pub mod config;
pub mod detection;
mod error;
mod level;
pub mod metrics;
pub mod ode;
pub mod optimize;
mod params;
pub mod protocol;
pub mod report;
pub mod search;

pub use error::{Error, Result};
pub use level::Level;
pub use num_complex::Complex64 as C64;
pub use params::{InteractionParams, SubspaceIndex};
