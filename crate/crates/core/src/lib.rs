//! Norm inflation experiments for the semiclassical nonlinear Schrodinger equation
//! on the torus, driven by resonant transport systems for plane-wave data.

pub mod approx;
pub mod cli;
pub mod error;
pub mod inflation;
pub mod modes;
mod ode;
pub mod resonance;
pub mod spectral;
pub mod transport;

pub use error::{Error, Result};
pub use modes::{fl_norm, wiener_norm, ModeField, ModeIndex, NormSpec, Rational, ScalingParams};
