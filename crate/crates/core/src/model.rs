//! Physical quantities, unit conventions and validated parameter sets.
//!
//! The internal unit system is CGS-Gaussian throughout: magnetic fields in
//! gauss, densities in cm^-3, energies in erg, masses in grams. Every
//! frequency is stored in angular form (rad/s); conversion to Hz happens
//! only at I/O boundaries. Population fractions are stored relative to the
//! total density, so absolute populations are products with `n_total`.

use crate::error::ModelError;

/// CGS-Gaussian physical constants used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, erg*s.
    pub hbar: f64,
    /// Electron gyromagnetic ratio, rad s^-1 G^-1.
    pub gamma_electron: f64,
    /// Proton gyromagnetic ratio, rad s^-1 G^-1.
    pub gamma_proton: f64,
    /// Hydrogen atomic mass, g.
    pub hydrogen_mass: f64,
}

/// The constant set used by the presets.
pub const CGS: PhysicalConstants = PhysicalConstants {
    hbar: 1.054_571_817e-27,
    gamma_electron: 1.7608e7,
    gamma_proton: 2.6752e4,
    hydrogen_mass: 1.6735e-24,
};

/// Quantum statistics of the gas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistics {
    Bose,
    Fermi,
}

/// Interaction-strength matrix elements lambda_ij (erg*cm^3) for the five
/// pairs that enter the three-level shift. For bosons these are the
/// symmetric (+) elements, for fermions the antisymmetric (-) ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaMatrix {
    pub l11: f64,
    pub l12: f64,
    pub l22: f64,
    pub l13: f64,
    pub l23: f64,
}

impl LambdaMatrix {
    /// Interaction difference lambda_23 - lambda_13 driving the
    /// third-state shift.
    pub fn delta(&self) -> f64 {
        self.l23 - self.l13
    }
}

/// A three-level gas: statistics, densities, interaction strengths and the
/// |1>-|3> coherence weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasSpec {
    pub statistics: Statistics,
    /// Total number density, cm^-3.
    pub n_total: f64,
    /// Relative populations (f1, f2, f3); must sum to 1.
    pub pop_fractions: [f64; 3],
    pub lambda: LambdaMatrix,
    /// |C13|^2: symmetric-component weight of the 1-3 pair wavefunction.
    pub coherence13: f64,
    /// Atomic mass, g.
    pub mass: f64,
}

impl GasSpec {
    /// Absolute populations (n1, n2, n3) in cm^-3.
    pub fn populations(&self) -> [f64; 3] {
        [
            self.pop_fractions[0] * self.n_total,
            self.pop_fractions[1] * self.n_total,
            self.pop_fractions[2] * self.n_total,
        ]
    }

    /// Coherence-weighted interaction difference |C13|^2 (lambda_23 -
    /// lambda_13). This is the quantity that enters the dynamic shift and
    /// every lineshape formula.
    pub fn delta_lambda_eff(&self) -> f64 {
        self.coherence13 * self.lambda.delta()
    }
}

/// The drive/probe transition pair and the static reference field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonancePair {
    /// Drive-transition effective gyromagnetic ratio, rad s^-1 G^-1.
    pub gamma_d: f64,
    /// Probe-transition effective gyromagnetic ratio, rad s^-1 G^-1.
    pub gamma_p: f64,
    /// Zero-density probe frequency at the reference field, rad/s.
    pub omega12_0: f64,
    /// Drive amplitude H_d, G.
    pub h_drive: f64,
    /// Reference static field at which the drive is resonant, G.
    pub h0: f64,
}

impl ResonancePair {
    /// On-resonance Rabi frequency of the drive transition, rad/s.
    pub fn rabi_frequency(&self) -> f64 {
        self.gamma_d.abs() * self.h_drive
    }
}

/// Linear static-field gradient across the sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldProfile {
    /// |grad H|, G/cm.
    pub gradient_abs: f64,
    /// Sample length along the gradient, cm. `None` means unbounded; the
    /// absorption support is compact so no cutoff is needed.
    pub extent: Option<f64>,
}

impl FieldProfile {
    pub fn unbounded(gradient_abs: f64) -> Self {
        FieldProfile {
            gradient_abs,
            extent: None,
        }
    }
}

/// A validated gas + resonance-pair bundle.
///
/// Immutable after construction; freely shareable between threads.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Model {
    gas: GasSpec,
    pair: ResonancePair,
}

impl Model {
    pub fn gas(&self) -> &GasSpec {
        &self.gas
    }

    pub fn pair(&self) -> &ResonancePair {
        &self.pair
    }

    /// Full modulation amplitude 2 n delta_lambda_eff / hbar at zero
    /// detuning, rad/s. Signed: negative for a negative contact shift.
    pub fn contact_amplitude(&self) -> f64 {
        2.0 * self.gas.n_total * self.gas.delta_lambda_eff() / CGS.hbar
    }

    /// Maximum contact shift of the probe transition in field units
    /// (delta H_c), G. Signed like `contact_amplitude`.
    pub fn delta_h_c(&self) -> f64 {
        self.contact_amplitude() / self.pair.gamma_p
    }

    /// Probe offset in field units for a given absolute probe frequency.
    pub fn probe_offset_field(&self, omega_p: f64) -> f64 {
        (omega_p - self.pair.omega12_0) / self.pair.gamma_p
    }

    /// Absolute probe frequency corresponding to a field-unit offset.
    pub fn omega_p_at(&self, p: f64) -> f64 {
        self.pair.omega12_0 + self.pair.gamma_p * p
    }
}

const POP_SUM_TOL: f64 = 1e-12;

/// Validate a parameter set, returning it unchanged when every invariant
/// holds and the full list of violations otherwise.
///
/// Validation is idempotent: a validated model re-validates to an
/// identical value.
pub fn validate(gas: GasSpec, pair: ResonancePair) -> Result<Model, Vec<ModelError>> {
    let mut errs = Vec::new();
    if !(gas.n_total > 0.0) {
        errs.push(ModelError::NonPositiveDensity(gas.n_total));
    }
    let [f1, f2, f3] = gas.pop_fractions;
    let in_range = gas.pop_fractions.iter().all(|f| (0.0..=1.0).contains(f));
    if !in_range || (f1 + f2 + f3 - 1.0).abs() > POP_SUM_TOL {
        errs.push(ModelError::PopulationSumMismatch(f1, f2, f3));
    }
    if !(0.0..=1.0).contains(&gas.coherence13) {
        errs.push(ModelError::CoherenceOutOfRange(gas.coherence13));
    }
    if pair.gamma_d == 0.0 || !pair.gamma_d.is_finite() {
        errs.push(ModelError::ZeroGyromagneticRatio("drive"));
    }
    if pair.gamma_p == 0.0 || !pair.gamma_p.is_finite() {
        errs.push(ModelError::ZeroGyromagneticRatio("probe"));
    }
    if !(pair.h_drive > 0.0) {
        errs.push(ModelError::NonPositiveDriveField(pair.h_drive));
    }
    if errs.is_empty() {
        Ok(Model { gas, pair })
    } else {
        Err(errs)
    }
}
