//! Brute-force time-domain validator for the absorption density.
//!
//! Simulates the instantaneous probe frequency over one drive precession
//! period on a uniform time grid (sufficient by exact periodicity, and
//! deterministic) and histograms population-weighted residence per
//! reduced-detuning bin. Comparing the histogram with the bin-integrated
//! analytic density checks the lineshape formula independently of the
//! spectrum code path. One period traverses the frequency range twice, so
//! the analytic one-traversal density enters the comparison doubled.

use std::f64::consts::PI;

use crate::error::Error;
use crate::model::Model;
use crate::quad::{self, QuadSettings};
use crate::rabi::effective_precession;

/// Population-weighted residence histogram over the reduced detuning.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDensity {
    /// Bin edges in x, length `bins + 1`, spanning [0, sin2_theta].
    pub bin_edges: Vec<f64>,
    /// Population-weighted time fraction per bin.
    pub weights: Vec<f64>,
    pub samples_per_cycle: usize,
    pub cycles: usize,
    /// Support width the binning was built for.
    pub sin2_theta: f64,
}

impl EmpiricalDensity {
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Histogram the population-weighted residence over one precession
/// period at field offset `h`, on `bins` uniform bins in x.
///
/// Preconditions (asserted): `bins >= 10`, `samples >= 10_000`.
pub fn simulate_density(h: f64, model: &Model, bins: usize, samples: usize) -> EmpiricalDensity {
    assert!(bins >= 10, "need at least 10 bins");
    assert!(samples >= 10_000, "need at least 1e4 samples");
    let s = effective_precession(h, model.pair()).sin2_theta;
    let bin_edges: Vec<f64> = (0..=bins).map(|k| s * k as f64 / bins as f64).collect();
    let mut weights = vec![0.0f64; bins];
    let inv_n = 1.0 / samples as f64;
    for i in 0..samples {
        // Midpoint phase grid over half a precession turn: x = s sin^2(phi).
        let phi = PI * (i as f64 + 0.5) * inv_n;
        let sin_phi = phi.sin();
        let x = s * sin_phi * sin_phi;
        let idx = ((sin_phi * sin_phi * bins as f64) as usize).min(bins - 1);
        weights[idx] += (1.0 - x) * inv_n;
    }
    EmpiricalDensity {
        bin_edges,
        weights,
        samples_per_cycle: samples,
        cycles: 1,
        sin2_theta: s,
    }
}

/// Maximum relative deviation between the empirical histogram and the
/// bin-integrated analytic density over the interior bins (the first and
/// last bins touch the endpoint singularities and are excluded).
pub fn compare_to_analytic(
    emp: &EmpiricalDensity,
    model: &Model,
    h: f64,
    settings: &QuadSettings,
) -> Result<f64, Error> {
    let s = effective_precession(h, model.pair()).sin2_theta;
    let bins = emp.weights.len();
    if emp.bin_edges.len() != bins + 1 || bins < 3 {
        return Err(Error::BinningMismatch);
    }
    if (emp.sin2_theta - s).abs() > 1e-9 * s {
        return Err(Error::BinningMismatch);
    }
    let masses = bin_integrated_density(emp, settings, h)?;
    let interior = 1..bins - 1;
    let mut max_dev = 0.0f64;
    for (w, m) in emp.weights[interior.clone()].iter().zip(&masses[interior]) {
        max_dev = max_dev.max((w - m).abs() / m);
    }
    Ok(max_dev)
}

/// Analytic two-traversal mass per bin of `emp`, on the same binning.
pub fn bin_integrated_density(
    emp: &EmpiricalDensity,
    settings: &QuadSettings,
    h: f64,
) -> Result<Vec<f64>, Error> {
    analytic_bin_masses(&emp.bin_edges, emp.sin2_theta, settings).map_err(|achieved| {
        Error::QuadratureFailure {
            at: h,
            requested: settings.rel_tol,
            achieved,
        }
    })
}

/// Two-traversal analytic mass per bin, integrated with the
/// arcsine-substituted quadrature: x = s sin^2(phi) maps each bin to a
/// phi-interval on which the integrand is (1 - s sin^2(phi)) / pi.
fn analytic_bin_masses(edges: &[f64], s: f64, settings: &QuadSettings) -> Result<Vec<f64>, f64> {
    let integrand = |phi: f64| {
        let sp = phi.sin();
        2.0 * (1.0 - s * sp * sp) / PI
    };
    let mut masses = Vec::with_capacity(edges.len() - 1);
    for pair in edges.windows(2) {
        let phi_a = (pair[0] / s).clamp(0.0, 1.0).sqrt().asin();
        let phi_b = (pair[1] / s).clamp(0.0, 1.0).sqrt().asin();
        match quad::adaptive(&integrand, phi_a, phi_b, settings) {
            Ok(out) => masses.push(out.value),
            Err(unconverged) => {
                return Err(unconverged.abs_error / unconverged.value.abs().max(f64::MIN_POSITIVE))
            }
        }
    }
    Ok(masses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hydrogen::hydrogen_preset;
    use crate::lineshape::weighted_density_cdf;
    use approx::assert_relative_eq;

    #[test]
    fn analytic_masses_match_closed_form() {
        let s = 0.437;
        let edges: Vec<f64> = (0..=40).map(|k| s * k as f64 / 40.0).collect();
        let masses = analytic_bin_masses(&edges, s, &QuadSettings::default()).unwrap();
        for (k, pair) in edges.windows(2).enumerate() {
            let closed =
                2.0 * (weighted_density_cdf(pair[1], s) - weighted_density_cdf(pair[0], s));
            assert_relative_eq!(masses[k], closed, max_relative = 1e-10);
        }
    }

    #[test]
    fn hydrogen_histogram_converges() {
        let preset = hydrogen_preset();
        let h_star = crate::linewidth::stationary_field_exact(&preset.model).unwrap();
        let emp = simulate_density(h_star, &preset.model, 100, 1_000_000);
        let dev =
            compare_to_analytic(&emp, &preset.model, h_star, &QuadSettings::default()).unwrap();
        assert!(dev < 1e-2, "deviation {dev}");
    }

    #[test]
    fn far_detuned_weight_stays_low_in_x() {
        let preset = hydrogen_preset();
        let hd = preset.model.pair().h_drive;
        let emp = simulate_density(100.0 * hd, &preset.model, 20, 10_000);
        // Transfer is capped at sin^2(theta) ~ 1e-4.
        assert!(emp.sin2_theta < 1.1e-4);
        assert!(*emp.bin_edges.last().unwrap() <= emp.sin2_theta);
        assert_relative_eq!(emp.total_weight(), 1.0, epsilon = 1e-4);
    }

    #[test]
    fn on_resonance_population_factor_suppresses_full_transfer() {
        let preset = hydrogen_preset();
        let emp = simulate_density(0.0, &preset.model, 50, 100_000);
        // Near x = 1 the initial state is empty: residence weight dies out.
        let last = *emp.weights.last().unwrap();
        assert!(last < 1e-3);
        assert!(last < emp.weights[25]);
        assert!(emp.total_weight() <= 1.0);
    }

    #[test]
    fn identical_inputs_give_zero_deviation() {
        let preset = hydrogen_preset();
        let settings = QuadSettings::default();
        let hd = preset.model.pair().h_drive;
        let mut emp = simulate_density(hd, &preset.model, 40, 10_000);
        emp.weights = analytic_bin_masses(&emp.bin_edges, emp.sin2_theta, &settings).unwrap();
        let dev = compare_to_analytic(&emp, &preset.model, hd, &settings).unwrap();
        assert_eq!(dev, 0.0);
    }

    #[test]
    fn wrong_exponent_is_caught() {
        // Mutation check: a density with 1/x instead of 1/sqrt(x) must
        // disagree with the simulation by far more than the noise floor.
        let preset = hydrogen_preset();
        let emp = simulate_density(3e-3, &preset.model, 50, 200_000);
        let s = emp.sin2_theta;
        let corrupted = |x: f64| {
            if x <= 0.0 || x >= s {
                0.0
            } else {
                (1.0 - x) / (2.0 * PI * x * (s - x).sqrt())
            }
        };
        // Normalize the corrupted density to unit total mass over the
        // interior bins so only the shape is compared.
        let n = 4000;
        let bins = emp.weights.len();
        let masses: Vec<f64> = emp
            .bin_edges
            .windows(2)
            .map(|edge| {
                let step = (edge[1] - edge[0]) / n as f64;
                (0..n)
                    .map(|i| corrupted(edge[0] + (i as f64 + 0.5) * step) * step)
                    .sum()
            })
            .collect();
        let interior_w: f64 = emp.weights[1..bins - 1].iter().sum();
        let interior_m: f64 = masses[1..bins - 1].iter().sum();
        let scale = interior_w / interior_m;
        let max_dev = (1..bins - 1)
            .map(|k| (emp.weights[k] - scale * masses[k]).abs() / (scale * masses[k]))
            .fold(0.0f64, f64::max);
        assert!(max_dev > 0.1, "corrupted density too close: {max_dev}");
    }

    #[test]
    fn refinement_converges_monotonically() {
        let preset = hydrogen_preset();
        let settings = QuadSettings::default();
        let h = 3.0 * preset.model.pair().h_drive;
        let devs: Vec<f64> = [10_000, 100_000, 1_000_000]
            .iter()
            .map(|&n| {
                let emp = simulate_density(h, &preset.model, 50, n);
                compare_to_analytic(&emp, &preset.model, h, &settings).unwrap()
            })
            .collect();
        assert!(devs[1] <= devs[0] + 1e-3);
        assert!(devs[2] <= devs[1] + 1e-3);
        assert!(devs[2] < 1e-2);
    }

    #[test]
    fn histograms_are_bit_identical() {
        let preset = hydrogen_preset();
        let a = simulate_density(5e-3, &preset.model, 64, 50_000);
        let b = simulate_density(5e-3, &preset.model, 64, 50_000);
        assert_eq!(a.weights.len(), b.weights.len());
        for (x, y) in a.weights.iter().zip(&b.weights) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn binning_mismatch_detected() {
        let preset = hydrogen_preset();
        let settings = QuadSettings::default();
        let emp = simulate_density(1e-3, &preset.model, 40, 10_000);
        // Histogram built at a different field offset no longer matches.
        let err = compare_to_analytic(&emp, &preset.model, 5e-3, &settings);
        assert!(matches!(err, Err(Error::BinningMismatch)));
    }
}
