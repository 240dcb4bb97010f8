//! Run configuration: flat JSON with unit-suffixed keys, resolved against
//! the presets or an explicit physical parameter set.
//!
//! Frequencies are accepted in Hz and converted to angular form
//! internally. Unknown keys are rejected.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use inedor::contact::lambda_from_scattering_length;
use inedor::hydrogen::{hydrogen_preset, hydrogen_preset_physical_sign};
use inedor::model::{
    validate, FieldProfile, GasSpec, LambdaMatrix, Model, ResonancePair, Statistics,
};
use inedor::quad::QuadSettings;
use inedor::rabi::DEFAULT_FAST_DRIVING_THRESHOLD;
use inedor::spectrum::{SweepMode, SweepSpec};

use crate::CliError;

/// Flat, human-diffable configuration. Every key carries its unit in the
/// name; `preset` excludes the explicit physical keys.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,

    // Gas (explicit mode).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub statistics: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n3d_per_cm3: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n2d_per_cm2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_cm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pop_fractions: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda11_erg_cm3: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda12_erg_cm3: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda22_erg_cm3: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda13_erg_cm3: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda23_erg_cm3: Option<f64>,
    /// Scattering-length difference in pm; shorthand for lambda23 with
    /// lambda13 = 0.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_a_pm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coherence13: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass_g: Option<f64>,

    // Resonance pair (explicit mode).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_drive_rad_per_s_per_gauss: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_probe_rad_per_s_per_gauss: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe_zero_density_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_drive_gauss: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h0_gauss: Option<f64>,

    // Field profile.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gradient_gauss_per_cm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extent_cm: Option<f64>,

    // Sweep.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_center_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_span_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_points: Option<usize>,

    // Numerics.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature_rel_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fast_driving_threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detection_tau_s: Option<f64>,

    // Output paths.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_csv: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary_json: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("bad config {}: {e}", path.display())))
    }

    fn has_explicit_physics(&self) -> bool {
        self.statistics.is_some()
            || self.n3d_per_cm3.is_some()
            || self.n2d_per_cm2.is_some()
            || self.l_cm.is_some()
            || self.pop_fractions.is_some()
            || self.lambda11_erg_cm3.is_some()
            || self.lambda12_erg_cm3.is_some()
            || self.lambda22_erg_cm3.is_some()
            || self.lambda13_erg_cm3.is_some()
            || self.lambda23_erg_cm3.is_some()
            || self.delta_a_pm.is_some()
            || self.coherence13.is_some()
            || self.mass_g.is_some()
            || self.gamma_drive_rad_per_s_per_gauss.is_some()
            || self.gamma_probe_rad_per_s_per_gauss.is_some()
            || self.probe_zero_density_hz.is_some()
            || self.h_drive_gauss.is_some()
            || self.h0_gauss.is_some()
    }
}

/// Everything a subcommand needs, resolved and validated.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub model: Model,
    pub profile: FieldProfile,
    pub sweep: SweepSpec,
    pub settings: QuadSettings,
    pub fast_driving_threshold: f64,
    pub detection_tau: f64,
    pub out_csv: Option<PathBuf>,
    pub summary_json: Option<PathBuf>,
}

fn require(value: Option<f64>, key: &str) -> Result<f64, CliError> {
    value.ok_or_else(|| CliError::Validation(format!("missing required config key `{key}`")))
}

fn build_explicit(cfg: &RunConfig) -> Result<Model, CliError> {
    let statistics = match cfg.statistics.as_deref() {
        Some("bose") => Statistics::Bose,
        Some("fermi") => Statistics::Fermi,
        Some(other) => {
            return Err(CliError::Validation(format!(
                "statistics must be \"bose\" or \"fermi\", got \"{other}\""
            )))
        }
        None => {
            return Err(CliError::Validation(
                "missing required config key `statistics`".into(),
            ))
        }
    };

    let n_total = match (cfg.n3d_per_cm3, cfg.n2d_per_cm2, cfg.l_cm) {
        (Some(n3d), None, None) => n3d,
        (None, Some(n2d), Some(l)) => {
            if !(l > 0.0) {
                return Err(CliError::Validation(format!(
                    "l_cm must be positive, got {l}"
                )));
            }
            n2d / l
        }
        (None, None, None) => {
            return Err(CliError::Validation(
                "missing density: `n3d_per_cm3` or `n2d_per_cm2` + `l_cm`".into(),
            ))
        }
        _ => {
            return Err(CliError::Validation(
                "give either `n3d_per_cm3` alone or `n2d_per_cm2` + `l_cm`".into(),
            ))
        }
    };

    let mass = require(cfg.mass_g, "mass_g")?;
    let lambda = match (cfg.delta_a_pm, cfg.lambda13_erg_cm3, cfg.lambda23_erg_cm3) {
        (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
            return Err(CliError::Validation(
                "give either `delta_a_pm` or explicit lambda entries, not both".into(),
            ))
        }
        (Some(da_pm), None, None) => {
            let a_cm = da_pm * 1e-10;
            let dl = lambda_from_scattering_length(a_cm, mass)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            LambdaMatrix {
                l11: cfg.lambda11_erg_cm3.unwrap_or(0.0),
                l12: cfg.lambda12_erg_cm3.unwrap_or(0.0),
                l22: cfg.lambda22_erg_cm3.unwrap_or(0.0),
                l13: 0.0,
                l23: dl,
            }
        }
        (None, _, _) => LambdaMatrix {
            l11: require(cfg.lambda11_erg_cm3, "lambda11_erg_cm3")?,
            l12: require(cfg.lambda12_erg_cm3, "lambda12_erg_cm3")?,
            l22: require(cfg.lambda22_erg_cm3, "lambda22_erg_cm3")?,
            l13: require(cfg.lambda13_erg_cm3, "lambda13_erg_cm3")?,
            l23: require(cfg.lambda23_erg_cm3, "lambda23_erg_cm3")?,
        },
    };

    let gas = GasSpec {
        statistics,
        n_total,
        pop_fractions: cfg.pop_fractions.unwrap_or([1.0, 0.0, 0.0]),
        lambda,
        coherence13: require(cfg.coherence13, "coherence13")?,
        mass,
    };
    let pair = ResonancePair {
        gamma_d: require(
            cfg.gamma_drive_rad_per_s_per_gauss,
            "gamma_drive_rad_per_s_per_gauss",
        )?,
        gamma_p: require(
            cfg.gamma_probe_rad_per_s_per_gauss,
            "gamma_probe_rad_per_s_per_gauss",
        )?,
        omega12_0: 2.0 * PI * require(cfg.probe_zero_density_hz, "probe_zero_density_hz")?,
        h_drive: require(cfg.h_drive_gauss, "h_drive_gauss")?,
        h0: require(cfg.h0_gauss, "h0_gauss")?,
    };
    validate(gas, pair).map_err(|errs| {
        CliError::Validation(
            errs.iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join("; "),
        )
    })
}

/// Resolve a configuration to a validated model plus run options.
pub fn resolve(cfg: &RunConfig) -> Result<Resolved, CliError> {
    let model = match cfg.preset.as_deref() {
        Some(name) => {
            if cfg.has_explicit_physics() {
                return Err(CliError::Validation(
                    "config must give either `preset` or explicit physical parameters, not both"
                        .into(),
                ));
            }
            match name {
                "hydrogen-2d" => hydrogen_preset().model,
                "hydrogen-2d-physical-sign" => hydrogen_preset_physical_sign().model,
                other => return Err(CliError::Validation(format!(
                    "unknown preset \"{other}\"; available: hydrogen-2d, hydrogen-2d-physical-sign"
                ))),
            }
        }
        None => build_explicit(cfg)?,
    };

    let gradient = cfg.gradient_gauss_per_cm.unwrap_or(1.0);
    if !(gradient > 0.0) {
        return Err(CliError::Validation(format!(
            "gradient_gauss_per_cm must be positive, got {gradient}"
        )));
    }
    let profile = FieldProfile {
        gradient_abs: gradient,
        extent: cfg.extent_cm,
    };

    let mode = match cfg.sweep_mode.as_deref() {
        None | Some("drive") => SweepMode::Drive,
        Some("probe") => SweepMode::Probe,
        Some(other) => {
            return Err(CliError::Validation(format!(
                "sweep_mode must be \"drive\" or \"probe\", got \"{other}\""
            )))
        }
    };
    let default = inedor::spectrum::default_sweep(&model);
    let default_span = match mode {
        SweepMode::Drive => default.span,
        // Same window mapped through the gyromagnetic ratios.
        SweepMode::Probe => default.span * (model.pair().gamma_p / model.pair().gamma_d).abs(),
    };
    let sweep = SweepSpec {
        mode,
        center: 2.0 * PI * cfg.sweep_center_hz.unwrap_or(0.0),
        span: cfg
            .sweep_span_hz
            .map(|hz| 2.0 * PI * hz)
            .unwrap_or(default_span),
        points: cfg.sweep_points.unwrap_or(default.points),
    };

    let settings = QuadSettings {
        rel_tol: cfg.quadrature_rel_tol.unwrap_or(1e-6),
        ..QuadSettings::default()
    };
    if !(settings.rel_tol > 0.0 && settings.rel_tol < 1.0) {
        return Err(CliError::Validation(format!(
            "quadrature_rel_tol must be in (0, 1), got {}",
            settings.rel_tol
        )));
    }

    Ok(Resolved {
        model,
        profile,
        sweep,
        settings,
        fast_driving_threshold: cfg
            .fast_driving_threshold
            .unwrap_or(DEFAULT_FAST_DRIVING_THRESHOLD),
        detection_tau: cfg.detection_tau_s.unwrap_or(1.0),
        out_csv: cfg.out_csv.clone(),
        summary_json: cfg.summary_json.clone(),
    })
}
