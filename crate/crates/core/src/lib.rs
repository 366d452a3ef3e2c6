//! Thermalized displaced squeezed thermal states of a harmonic oscillator.
//!
//! The state is prepared in thermofield-doubled form: a thermal entangler on
//! the two-mode vacuum, squeezing and displacement on both copies, a second
//! entangler for detector noise, then free evolution. [`analytic`] gives the
//! closed-form wavefunction, densities, moments and photon statistics;
//! [`oracle`] recomputes them by Gaussian phase-space propagation and by
//! truncated Fock-space simulation; [`validate`] runs the cross-checks.

pub mod analytic;
pub mod error;
pub mod exec;
pub mod model;
pub mod oracle;
pub mod validate;

pub use error::{Error, Result};
pub use exec::Execution;
pub use model::{
    coefficients, Coefficients, Displacement, OscillatorParams, Squeeze, StateSpec, Temperature,
    ThermalAngles, ThermalSpec,
};
