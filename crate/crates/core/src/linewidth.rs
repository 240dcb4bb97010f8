//! Linewidth predictions from the stationary point of the mean-field
//! probe-frequency bound, in closed form and exactly, plus power-law
//! scaling fits against the numerically measured spectrum width.

use crate::error::Error;
use crate::model::{FieldProfile, Model};
use crate::quad::QuadSettings;
use crate::roots::newton_bracketed;
use crate::spectrum::{self, SweepMode, SweepSpec};

/// No stationary point exists below |dHc| = (8 sqrt(3) / 9) H_d.
pub const STATIONARY_THRESHOLD_RATIO: f64 = 8.0 * 1.732_050_807_568_877_2 / 9.0;

/// Predicted linewidth quantities. Field offset is signed like the
/// contact shift; the widths are magnitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidthReport {
    /// Stationary field offset of the mean-field bound, G.
    pub h_star: f64,
    /// Probe-side width, rad/s.
    pub delta_omega12: f64,
    /// Drive-side width, rad/s; exactly (gamma_d/gamma_p) * delta_omega12.
    pub delta_omega13: f64,
    /// True when produced by the asymptotic closed form.
    pub closed_form: bool,
}

/// Stationary field offset of the mean-field bound, solving
/// (H_d^2 + h^2)^2 / (H_d^2 h) = 2 |dHc| on the monotone branch
/// h >= H_d/sqrt(3). Returns `None` when no stationary point exists.
pub fn stationary_field_exact(model: &Model) -> Option<f64> {
    let dhc = model.delta_h_c();
    if dhc == 0.0 {
        return None;
    }
    let hd = model.pair().h_drive;
    let target = 2.0 * dhc.abs();
    let g = |h: f64| {
        let u = hd * hd + h * h;
        u * u / (hd * hd * h)
    };
    let dg = |h: f64| {
        let u = hd * hd + h * h;
        u * (3.0 * h * h - hd * hd) / (hd * hd * h * h)
    };
    let lo = hd / 3f64.sqrt();
    if g(lo) > target {
        return None;
    }
    // g(h) >= h^3 / H_d^2, so 1.1x the closed-form offset always brackets.
    let hi = (1.1f64.powi(3) * target * hd * hd).cbrt().max(2.0 * lo);
    let root = newton_bracketed(|h| g(h) - target, dg, lo, hi, 1e-12)?;
    Some(dhc.signum() * root)
}

/// Asymptotic (|dHc| >> H_d) closed-form width:
/// h = (2 |dHc| H_d^2)^(1/3), dw12 = (3/2) gamma_p h, dw13 = (3/2) gamma_d h.
pub fn width_closed_form(model: &Model) -> WidthReport {
    let pair = model.pair();
    let dhc = model.delta_h_c();
    let h = (2.0 * dhc.abs() * pair.h_drive * pair.h_drive).cbrt();
    let delta_omega12 = 1.5 * pair.gamma_p.abs() * h;
    WidthReport {
        h_star: dhc.signum() * h,
        delta_omega12,
        delta_omega13: delta_omega12 * (pair.gamma_d / pair.gamma_p).abs(),
        closed_form: true,
    }
}

/// Width from the exact stationary point, evaluating the mean-field bound
/// there instead of the asymptotic form.
pub fn width_from_bound(model: &Model) -> Option<WidthReport> {
    let pair = model.pair();
    let h_star = stationary_field_exact(model)?;
    let hd2 = pair.h_drive * pair.h_drive;
    let offset = h_star + model.delta_h_c() * hd2 / (hd2 + h_star * h_star);
    let delta_omega12 = (pair.gamma_p * offset).abs();
    Some(WidthReport {
        h_star,
        delta_omega12,
        delta_omega13: delta_omega12 * (pair.gamma_d / pair.gamma_p).abs(),
        closed_form: false,
    })
}

/// Which model parameter a scan varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanParameter {
    Density,
    DriveField,
    Gradient,
}

/// Power-law fit of the measured width against a scanned parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    /// Log-log least-squares exponent.
    pub exponent: f64,
    /// (parameter value, measured max-to-min width in Hz) per scan point.
    pub samples: Vec<(f64, f64)>,
}

/// Measure the numerical spectrum width across a parameter scan and fit
/// the power-law exponent. `factors` multiply the base value and must
/// cover at least one decade. Each sweep window scales with the predicted
/// width so the relative grid resolution stays constant across the scan.
pub fn scaling_fit(
    model: &Model,
    profile: &FieldProfile,
    param: ScanParameter,
    factors: &[f64],
    points_per_sweep: usize,
    settings: &QuadSettings,
) -> Result<ScalingFit, Error> {
    let min = factors.iter().copied().fold(f64::MAX, f64::min);
    let max = factors.iter().copied().fold(f64::MIN, f64::max);
    let ratio = max / min;
    if !(ratio >= 10.0 * (1.0 - 1e-12)) {
        return Err(Error::InsufficientRange(ratio));
    }

    let mut samples = Vec::with_capacity(factors.len());
    for &factor in factors {
        let mut gas = *model.gas();
        let mut pair = *model.pair();
        let mut prof = *profile;
        let value = match param {
            ScanParameter::Density => {
                gas.n_total *= factor;
                gas.n_total
            }
            ScanParameter::DriveField => {
                pair.h_drive *= factor;
                pair.h_drive
            }
            ScanParameter::Gradient => {
                prof.gradient_abs *= factor;
                prof.gradient_abs
            }
        };
        let scaled = crate::model::validate(gas, pair).map_err(Error::InvalidModel)?;
        let spec = SweepSpec {
            mode: SweepMode::Drive,
            center: 0.0,
            span: 20.0 * width_closed_form(&scaled).delta_omega13,
            points: points_per_sweep,
        };
        let result = spectrum::sweep(&spec, &scaled, &prof, settings)?;
        let (_, _, width_hz) = spectrum::peak_metrics(&result)?;
        samples.push((value, width_hz));
    }

    Ok(ScalingFit {
        exponent: log_log_slope(&samples),
        samples,
    })
}

/// Least-squares slope of ln(y) against ln(x).
fn log_log_slope(samples: &[(f64, f64)]) -> f64 {
    let n = samples.len() as f64;
    let (mut sx, mut sy) = (0.0, 0.0);
    for &(x, y) in samples {
        sx += x.ln();
        sy += y.ln();
    }
    let (mx, my) = (sx / n, sy / n);
    let (mut num, mut den) = (0.0, 0.0);
    for &(x, y) in samples {
        let dx = x.ln() - mx;
        num += dx * (y.ln() - my);
        den += dx * dx;
    }
    num / den
}
