use thiserror::Error;

use crate::model::Statistics;

/// A single violated parameter-set invariant.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("total density must be positive, got {0} cm^-3")]
    NonPositiveDensity(f64),
    #[error("population fractions must each lie in [0, 1] and sum to 1, got ({0}, {1}, {2})")]
    PopulationSumMismatch(f64, f64, f64),
    #[error("|C13|^2 must lie in [0, 1], got {0}")]
    CoherenceOutOfRange(f64),
    #[error("{0} gyromagnetic ratio must be nonzero")]
    ZeroGyromagneticRatio(&'static str),
    #[error("drive amplitude must be positive, got {0} G")]
    NonPositiveDriveField(f64),
}

/// Errors raised while evaluating the physics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model: {}", format_violations(.0))]
    InvalidModel(Vec<ModelError>),
    #[error("operation requires {expected:?} statistics, gas is {actual:?}")]
    WrongStatistics {
        expected: Statistics,
        actual: Statistics,
    },
    #[error("atomic mass must be positive, got {0} g")]
    NonPositiveMass(f64),
    #[error("delocalization length must be positive, got {0} cm")]
    NonPositiveLength(f64),
    #[error("field gradient must be positive, got {0} G/cm")]
    NonPositiveGradient(f64),
    #[error("effective contact shift is zero; reduced detuning is undefined")]
    ZeroContactShift,
    #[error(
        "quadrature tolerance not met at sweep offset {at:.6e} rad/s: \
         requested {requested:.3e}, achieved {achieved:.3e}"
    )]
    QuadratureFailure {
        at: f64,
        requested: f64,
        achieved: f64,
    },
    #[error("invalid sweep grid: {0}")]
    InvalidSweep(&'static str),
    #[error("spectrum is flat: max-min amplitude below 1e-6 of baseline")]
    FlatSpectrum,
    #[error("parameter scan must cover at least one decade, got ratio {0:.3}")]
    InsufficientRange(f64),
    #[error("histogram binning does not match the model at this field offset")]
    BinningMismatch,
}

fn format_violations(errs: &[ModelError]) -> String {
    errs.iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
