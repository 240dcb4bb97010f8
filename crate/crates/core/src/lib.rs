//! Interaction-enhanced double resonance in cold three-level gases.
//!
//! A continuously driven transition makes the population of a third state
//! oscillate, which modulates the contact shift of a probe transition.
//! This crate computes the resulting coherence-dependent shifts, the
//! time-averaged absorption lineshape in a static-field gradient, full
//! sweep spectra with peak metrics, and closed-form linewidth
//! predictions, with a deterministic time-domain oracle for the
//! lineshape and a 2D atomic-hydrogen parameter preset.
//!
//! Units are CGS-Gaussian; all frequencies are angular (rad/s).

pub mod contact;
pub mod error;
pub mod hydrogen;
pub mod lineshape;
pub mod linewidth;
pub mod model;
pub mod oracle;
pub mod quad;
pub mod rabi;
pub mod roots;
pub mod spectrum;

pub use error::{Error, ModelError};
pub use model::{
    validate, FieldProfile, GasSpec, LambdaMatrix, Model, PhysicalConstants, ResonancePair,
    Statistics, CGS,
};
pub use quad::QuadSettings;
pub use spectrum::{SpectrumResult, SweepMode, SweepSpec};
