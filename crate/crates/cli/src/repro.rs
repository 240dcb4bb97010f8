//! Reference-value reproduction suite.
//!
//! Each case pairs a CLI invocation with an expected value, a tolerance
//! and the basis of the expectation (pinned parameter, closed form, grid
//! numerics, or an order-of-magnitude reference). The suite is
//! deterministic and runs in seconds.

use std::f64::consts::PI;

use inedor::hydrogen::{
    contact_field_shift, hydrogen_preset, hydrogen_preset_physical_sign, min_detectable_population,
};
use inedor::linewidth::{stationary_field_exact, width_closed_form};
use inedor::model::{FieldProfile, CGS};
use inedor::quad::QuadSettings;
use inedor::rabi::effective_precession;
use inedor::spectrum::{default_sweep, peak_metrics, sweep, SpectrumResult};

use crate::CliError;

#[derive(Debug, Clone, Copy)]
pub enum Expectation {
    Approx { value: f64, rel_tol: f64 },
    Within { lo: f64, hi: f64 },
}

impl Expectation {
    fn check(&self, actual: f64) -> bool {
        match *self {
            Expectation::Approx { value, rel_tol } => {
                (actual - value).abs() <= rel_tol * value.abs()
            }
            Expectation::Within { lo, hi } => actual >= lo && actual <= hi,
        }
    }

    fn describe(&self) -> String {
        match *self {
            Expectation::Approx { value, rel_tol } if rel_tol >= 0.01 => {
                format!("{value:.4e} ± {:.0}%", rel_tol * 100.0)
            }
            Expectation::Approx { value, rel_tol } => {
                format!("{value:.4e} ± {rel_tol:.0e} rel")
            }
            Expectation::Within { lo, hi } => format!("[{lo:.3e}, {hi:.3e}]"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CaseOutcome {
    pub name: &'static str,
    pub invocation: &'static str,
    pub basis: &'static str,
    pub expected: String,
    pub actual: f64,
    pub pass: bool,
}

fn case(
    name: &'static str,
    invocation: &'static str,
    basis: &'static str,
    expectation: Expectation,
    actual: f64,
) -> CaseOutcome {
    CaseOutcome {
        name,
        invocation,
        basis,
        expected: expectation.describe(),
        actual,
        pass: expectation.check(actual),
    }
}

fn spectrum_cases(
    result: &SpectrumResult,
    flipped: &SpectrumResult,
    grid_step: f64,
    predicted_peak: f64,
) -> Result<Vec<CaseOutcome>, CliError> {
    let (max_pos, _, dist_hz) = peak_metrics(result)?;
    let (flip_max, _, _) = peak_metrics(flipped)?;
    let first = result.samples.first().expect("non-empty").1 / result.baseline;
    let last = result.samples.last().expect("non-empty").1 / result.baseline;
    let min_amp = result.samples.iter().map(|s| s.1).fold(f64::MAX, f64::min);
    let max_amp = result.samples.iter().map(|s| s.1).fold(f64::MIN, f64::max);
    let sp = "spectrum --preset hydrogen-2d --out spec.csv";
    Ok(vec![
        case(
            "numeric-330Hz",
            sp,
            "grid numerics",
            Expectation::Approx {
                value: 330.0,
                rel_tol: 0.15,
            },
            dist_hz,
        ),
        case(
            "wings-equal-1pct",
            sp,
            "grid numerics",
            Expectation::Within { lo: 0.99, hi: 1.01 },
            first / last,
        ),
        case(
            "hole-below-baseline",
            sp,
            "grid numerics",
            Expectation::Within { lo: 0.0, hi: 0.9 },
            min_amp / result.baseline,
        ),
        case(
            "peak-above-baseline",
            sp,
            "grid numerics",
            Expectation::Within {
                lo: 1.1,
                hi: f64::INFINITY,
            },
            max_amp / result.baseline,
        ),
        case(
            "peak-at-bound-minimum",
            sp,
            "grid numerics",
            Expectation::Within { lo: 0.0, hi: 2.0 },
            (max_pos - predicted_peak).abs() / grid_step,
        ),
        case(
            "sign-flip-mirrors-peak",
            "spectrum --preset hydrogen-2d-physical-sign --out flip.csv",
            "grid numerics",
            Expectation::Within { lo: 0.0, hi: 2.0 },
            (flip_max + max_pos).abs() / grid_step,
        ),
    ])
}

/// Run every reference case against the hydrogen preset.
pub fn run_repro_suite(settings: &QuadSettings) -> Result<Vec<CaseOutcome>, CliError> {
    let preset = hydrogen_preset();
    let model = preset.model;
    let params = preset.params;
    let profile = FieldProfile::unbounded(1.0);

    let mut cases = Vec::new();

    let lw = "linewidth --preset hydrogen-2d";
    let (_, coeff) = contact_field_shift(params.n_2d, params.l, params.delta_a, CGS.gamma_electron)
        .expect("positive delocalization length");
    cases.push(case(
        "contact-coeff-per-density",
        lw,
        "closed form",
        Expectation::Within {
            lo: 1.0e-18,
            hi: 2.0e-18,
        },
        coeff,
    ));
    cases.push(case(
        "contact-amplitude-89G",
        lw,
        "pinned parameter",
        Expectation::Approx {
            value: 89.0,
            rel_tol: 1e-9,
        },
        model.delta_h_c().abs(),
    ));
    cases.push(case(
        "density-3d-6e19",
        lw,
        "pinned parameter",
        Expectation::Approx {
            value: 6e19,
            rel_tol: 1e-9,
        },
        model.gas().n_total,
    ));

    let closed = width_closed_form(&model);
    cases.push(case(
        "h-5.7e-2G",
        lw,
        "closed form vs reference",
        Expectation::Approx {
            value: 5.7e-2,
            rel_tol: 0.03,
        },
        closed.h_star.abs(),
    ));
    cases.push(case(
        "width-350Hz",
        lw,
        "closed form vs reference",
        Expectation::Approx {
            value: 350.0,
            rel_tol: 0.05,
        },
        closed.delta_omega13 / (2.0 * PI),
    ));
    let exact = stationary_field_exact(&model).expect("stationary point exists");
    cases.push(case(
        "stationary-matches-closed-form",
        lw,
        "closed form",
        Expectation::Approx {
            value: closed.h_star,
            rel_tol: 1e-3,
        },
        exact,
    ));

    cases.push(case(
        "rabi-30-per-s",
        "oracle --preset hydrogen-2d",
        "reference estimate",
        Expectation::Approx {
            value: 30.0,
            rel_tol: 0.15,
        },
        model.pair().rabi_frequency(),
    ));
    let fast = effective_precession(0.0, model.pair()).omega_eff * 1.0;
    cases.push(case(
        "fast-driving-at-1s",
        "spectrum --preset hydrogen-2d",
        "closed form",
        Expectation::Within {
            lo: 10.0,
            hi: f64::INFINITY,
        },
        fast,
    ));

    let min = min_detectable_population(&model, &params, params.source_relative_width);
    cases.push(case(
        "min-detectable-n3-2e6",
        lw,
        "order of magnitude",
        Expectation::Within { lo: 1e6, hi: 4e6 },
        min.n3_min_2d,
    ));
    cases.push(case(
        "min-detectable-fraction-1e-6",
        lw,
        "order of magnitude",
        Expectation::Within { lo: 2e-7, hi: 3e-6 },
        min.fraction,
    ));

    // One full spectrum each for the default and the flipped sign.
    let spec = default_sweep(&model);
    let result = sweep(&spec, &model, &profile, settings)?;
    let flipped_model = hydrogen_preset_physical_sign().model;
    let flipped = sweep(
        &default_sweep(&flipped_model),
        &flipped_model,
        &profile,
        settings,
    )?;
    let grid_step = spec.span / (spec.points - 1) as f64;
    let hd2 = model.pair().h_drive.powi(2);
    let p_min = exact + model.delta_h_c() * hd2 / (hd2 + exact * exact);
    let predicted_peak = -model.pair().gamma_d * p_min;
    cases.extend(spectrum_cases(
        &result,
        &flipped,
        grid_step,
        predicted_peak,
    )?);

    Ok(cases)
}

/// Markdown pass/fail table.
pub fn markdown_report(outcomes: &[CaseOutcome]) -> String {
    let mut out = String::from("# Reference reproduction report\n\n");
    out.push_str("| case | invocation | basis | expected | actual | status |\n");
    out.push_str("|------|------------|-------|----------|--------|--------|\n");
    for c in outcomes {
        out.push_str(&format!(
            "| {} | `inedor {}` | {} | {} | {:.6e} | {} |\n",
            c.name,
            c.invocation,
            c.basis,
            c.expected,
            c.actual,
            if c.pass { "PASS" } else { "FAIL" }
        ));
    }
    let failed = outcomes.iter().filter(|c| !c.pass).count();
    if failed == 0 {
        out.push_str(&format!("\nAll {} cases passed.\n", outcomes.len()));
    } else {
        out.push_str(&format!("\n{failed} of {} cases FAILED.\n", outcomes.len()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_and_reports() {
        let outcomes = run_repro_suite(&QuadSettings::default()).unwrap();
        assert!(outcomes.len() >= 12);
        let report = markdown_report(&outcomes);
        for c in &outcomes {
            assert!(c.pass, "case {} failed: actual {:.6e}", c.name, c.actual);
        }
        assert!(report.contains("All"));
        assert!(report.contains("| numeric-330Hz |"));
    }
}
