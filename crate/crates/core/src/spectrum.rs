//! Gradient-integrated double-resonance spectra.
//!
//! With a linear static-field gradient every field offset is present
//! somewhere in the sample, so the absorption at a fixed probe frequency
//! is the integral of the single-point density over the field, weighted
//! by the number of particles per unit field n / |grad H|. The support of
//! the integrand is compact for every probe frequency: its endpoints are
//! the crossings of the probe level with the Zeeman-only line (h = p) and
//! with the mean-field bound (a cubic in h, up to four crossings total).
//!
//! Sweeping the drive frequency moves the resonance field, which is
//! equivalent to moving the probe offset in field units by
//! p = -(offset)/gamma_d; sweeping the probe moves it by +(offset)/gamma_p.
//! The two spectra are mirror images on the frequency axis.

use rayon::prelude::*;

use crate::error::Error;
use crate::lineshape::weighted_density;
use crate::linewidth;
use crate::model::{FieldProfile, Model};
use crate::quad::{self, QuadSettings};
use crate::roots::cubic_real_roots;

/// Which excitation frequency is swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Drive,
    Probe,
}

/// A sweep grid: `points` offsets spanning `center +- span/2` (rad/s,
/// relative to the nominal resonance).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub mode: SweepMode,
    pub center: f64,
    pub span: f64,
    pub points: usize,
}

impl SweepSpec {
    fn validate(&self) -> Result<(), Error> {
        if !(self.span > 0.0) {
            return Err(Error::InvalidSweep("span must be positive"));
        }
        if self.points < 3 {
            return Err(Error::InvalidSweep("need at least 3 grid points"));
        }
        Ok(())
    }

    /// Grid offsets in ascending order.
    pub fn offsets(&self) -> Vec<f64> {
        if self.points < 2 {
            return vec![self.center; self.points];
        }
        let step = self.span / (self.points - 1) as f64;
        let start = self.center - self.span / 2.0;
        (0..self.points).map(|i| start + step * i as f64).collect()
    }
}

/// Default drive sweep: 20 closed-form drive linewidths around resonance
/// on 2000 points.
pub fn default_sweep(model: &Model) -> SweepSpec {
    let width = linewidth::width_closed_form(model).delta_omega13;
    SweepSpec {
        mode: SweepMode::Drive,
        center: 0.0,
        span: 20.0 * width,
        points: 2000,
    }
}

/// Grid extrema positions and their separation, all in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumMetrics {
    pub max_position: f64,
    pub min_position: f64,
    /// |max_position - min_position|.
    pub max_to_min: f64,
}

/// A computed spectrum: raw amplitudes on the sweep grid plus the
/// far-wing baseline used for normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub mode: SweepMode,
    /// (sweep offset rad/s, amplitude in arbitrary units), ascending.
    pub samples: Vec<(f64, f64)>,
    /// Far-wing amplitude, same arbitrary units.
    pub baseline: f64,
    pub metrics: SpectrumMetrics,
}

impl SpectrumResult {
    /// Amplitudes divided by the far-wing baseline.
    pub fn normalized(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let b = self.baseline;
        self.samples.iter().map(move |&(o, a)| (o, a / b))
    }
}

/// Tangency merge tolerance for nearly-degenerate crossing roots,
/// relative to the drive amplitude.
const ROOT_MERGE_REL: f64 = 1e-9;

/// Maximal field intervals on which the absorption density is supported
/// at probe offset `p` (field units), sorted and disjoint.
fn support_field(p: f64, model: &Model) -> Result<Vec<(f64, f64)>, Error> {
    let dhc = model.delta_h_c();
    if dhc == 0.0 || !dhc.is_finite() {
        return Err(Error::ZeroContactShift);
    }
    let hd = model.pair().h_drive;
    let hd2 = hd * hd;

    // Upper-bound crossings: (p - h)(hd^2 + h^2) = dhc * hd^2, i.e.
    // h^3 - p h^2 + hd^2 h - (p - dhc) hd^2 = 0.
    let mut candidates = cubic_real_roots(-p, hd2, -(p - dhc) * hd2);
    // Lower-bound crossing.
    candidates.push(p);
    candidates.sort_by(f64::total_cmp);
    let merge_tol = ROOT_MERGE_REL * hd;
    candidates.dedup_by(|a, b| (*a - *b).abs() < merge_tol);

    let sin2 = |h: f64| hd2 / (hd2 + h * h);
    let inside = |h: f64| {
        let x = (p - h) / dhc;
        x > 0.0 && x < sin2(h)
    };

    let mut intervals: Vec<(f64, f64)> = Vec::new();
    for pair in candidates.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if inside(0.5 * (a + b)) {
            match intervals.last_mut() {
                Some(last) if last.1 == a => last.1 = b,
                _ => intervals.push((a, b)),
            }
        }
    }
    Ok(intervals)
}

/// Maximal field intervals where the probe at `omega_p` (rad/s, absolute)
/// finds absorbing atoms.
pub fn support_intervals(omega_p: f64, model: &Model) -> Result<Vec<(f64, f64)>, Error> {
    support_field(model.probe_offset_field(omega_p), model)
}

/// Absorption amplitude at probe offset `p` in field units: the density
/// integrated over its support with the endpoint-singularity-absorbing
/// quadrature, times n / |grad H|.
fn amplitude_at_field_offset(
    p: f64,
    model: &Model,
    profile: &FieldProfile,
    settings: &QuadSettings,
) -> Result<f64, Error> {
    if !(profile.gradient_abs > 0.0) {
        return Err(Error::NonPositiveGradient(profile.gradient_abs));
    }
    let dhc = model.delta_h_c();
    let hd = model.pair().h_drive;
    let hd2 = hd * hd;
    let mut intervals = support_field(p, model)?;

    // A finite sample clips the support; the resonance field sits at the
    // sample center.
    if let Some(extent) = profile.extent {
        let half = 0.5 * extent * profile.gradient_abs;
        intervals.retain_mut(|iv| {
            iv.0 = iv.0.max(-half);
            iv.1 = iv.1.min(half);
            iv.0 < iv.1
        });
    }

    let density = |h: f64| weighted_density((p - h) / dhc, hd2 / (hd2 + h * h));
    let mut total = 0.0;
    for &(a, b) in &intervals {
        match quad::integrate_sqrt_endpoints(&density, a, b, settings) {
            Ok(out) => total += out.value,
            Err(unconverged) => {
                return Err(Error::QuadratureFailure {
                    at: p,
                    requested: settings.rel_tol,
                    achieved: unconverged.abs_error
                        / unconverged.value.abs().max(f64::MIN_POSITIVE),
                });
            }
        }
    }
    Ok(total * model.gas().n_total / profile.gradient_abs)
}

/// Map a sweep offset to the probe offset in field units.
fn field_offset_for(mode: SweepMode, offset: f64, model: &Model) -> f64 {
    match mode {
        SweepMode::Drive => -offset / model.pair().gamma_d,
        SweepMode::Probe => offset / model.pair().gamma_p,
    }
}

/// Absorption amplitude at one sweep offset (rad/s relative to the
/// nominal resonance).
pub fn integrate_point(
    offset: f64,
    mode: SweepMode,
    model: &Model,
    profile: &FieldProfile,
    settings: &QuadSettings,
) -> Result<f64, Error> {
    amplitude_at_field_offset(
        field_offset_for(mode, offset, model),
        model,
        profile,
        settings,
    )
}

/// Far-wing amplitude, evaluated 50 linewidth scales away from resonance
/// on both sides and averaged.
pub fn baseline_amplitude(
    model: &Model,
    profile: &FieldProfile,
    settings: &QuadSettings,
) -> Result<f64, Error> {
    let hd = model.pair().h_drive;
    let scale = (2.0 * model.delta_h_c().abs() * hd * hd).cbrt().max(hd);
    let lo = amplitude_at_field_offset(-50.0 * scale, model, profile, settings)?;
    let hi = amplitude_at_field_offset(50.0 * scale, model, profile, settings)?;
    Ok(0.5 * (lo + hi))
}

/// Evaluate a full sweep. Grid points are independent and evaluated in
/// parallel; assembly is order-preserving, so results are deterministic.
pub fn sweep(
    spec: &SweepSpec,
    model: &Model,
    profile: &FieldProfile,
    settings: &QuadSettings,
) -> Result<SpectrumResult, Error> {
    spec.validate()?;
    let offsets = spec.offsets();
    let amplitudes: Vec<Result<f64, Error>> = offsets
        .par_iter()
        .map(|&o| integrate_point(o, spec.mode, model, profile, settings))
        .collect();
    let mut samples = Vec::with_capacity(offsets.len());
    for (o, a) in offsets.iter().zip(amplitudes) {
        samples.push((*o, a?));
    }
    let baseline = baseline_amplitude(model, profile, settings)?;
    let metrics = grid_metrics(&samples);
    Ok(SpectrumResult {
        mode: spec.mode,
        samples,
        baseline,
        metrics,
    })
}

fn grid_metrics(samples: &[(f64, f64)]) -> SpectrumMetrics {
    let mut imax = 0;
    let mut imin = 0;
    for (i, &(_, a)) in samples.iter().enumerate() {
        if a > samples[imax].1 {
            imax = i;
        }
        if a < samples[imin].1 {
            imin = i;
        }
    }
    let max_position = refine_extremum(samples, imax);
    let min_position = refine_extremum(samples, imin);
    SpectrumMetrics {
        max_position,
        min_position,
        max_to_min: (max_position - min_position).abs(),
    }
}

/// Parabolic refinement of an extremum position around grid index `i`.
fn refine_extremum(samples: &[(f64, f64)], i: usize) -> f64 {
    if i == 0 || i + 1 >= samples.len() {
        return samples[i].0;
    }
    let (xm, ym) = samples[i - 1];
    let (x0, y0) = samples[i];
    let (xp, yp) = samples[i + 1];
    let denom = ym - 2.0 * y0 + yp;
    if denom == 0.0 {
        return x0;
    }
    let shift = (0.5 * (ym - yp) / denom).clamp(-0.5, 0.5);
    x0 + shift * 0.5 * (xp - xm)
}

/// Extremum positions (rad/s) and their separation converted to Hz.
///
/// Fails with `FlatSpectrum` when the grid shows no structure above
/// 1e-6 of the baseline.
pub fn peak_metrics(result: &SpectrumResult) -> Result<(f64, f64, f64), Error> {
    if result.samples.len() < 3 {
        return Err(Error::InvalidSweep("need at least 3 samples"));
    }
    let max_amp = result.samples.iter().map(|s| s.1).fold(f64::MIN, f64::max);
    let min_amp = result.samples.iter().map(|s| s.1).fold(f64::MAX, f64::min);
    if max_amp - min_amp < 1e-6 * result.baseline {
        return Err(Error::FlatSpectrum);
    }
    let m = &result.metrics;
    Ok((
        m.max_position,
        m.min_position,
        m.max_to_min / (2.0 * std::f64::consts::PI),
    ))
}
