//! Drive-transition Rabi dynamics in the relaxation-free approximation.
//!
//! Under continuous excitation the drive-transition population oscillates
//! at the effective precession frequency, and the probe transition is
//! dynamically shifted in proportion to the transferred population. The
//! drive frequency itself is treated as constant (the probe's final state
//! stays essentially empty, so there is no back-action).

use crate::model::{GasSpec, ResonancePair};

/// Default gate for the fast-driving condition: the detector must average
/// over at least this many radians of effective precession.
pub const DEFAULT_FAST_DRIVING_THRESHOLD: f64 = 10.0;

/// Drive-transition state at a fixed static-field offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveState {
    /// Static-field offset from the drive resonance, G.
    pub h: f64,
    /// sin^2(theta13) = H_d^2 / (H_d^2 + h^2): maximum population transfer.
    pub sin2_theta: f64,
    /// Effective precession frequency, rad/s.
    pub omega_eff: f64,
    /// On-resonance Rabi frequency gamma_d * H_d, rad/s.
    pub omega_rabi: f64,
}

/// Outcome of the fast-driving check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FastDriving {
    Pass,
    /// The detector averages too few precession cycles; carries the
    /// achieved omega_eff * tau.
    Warn {
        ratio: f64,
    },
}

/// Effective precession state at field offset `h`:
/// omega_eff = |gamma_d| sqrt(H_d^2 + h^2), sin^2(theta) = H_d^2 / (H_d^2 + h^2).
pub fn effective_precession(h: f64, pair: &ResonancePair) -> DriveState {
    let hd2 = pair.h_drive * pair.h_drive;
    let denom = hd2 + h * h;
    DriveState {
        h,
        sin2_theta: hd2 / denom,
        omega_eff: pair.gamma_d.abs() * denom.sqrt(),
        omega_rabi: pair.rabi_frequency(),
    }
}

/// Populations (n1, n3) after driving an initially |1>-state sample of
/// density `n` for time `t`:
/// n3 = n sin^2(theta) sin^2(omega_eff t / 2), n1 = n - n3.
pub fn populations_at(state: &DriveState, t: f64, n: f64) -> (f64, f64) {
    let s = (state.omega_eff * t / 2.0).sin();
    let n3 = n * state.sin2_theta * s * s;
    (n - n3, n3)
}

/// Instantaneous probe frequency at time `t`:
/// omega12(t) = omega12_0(H0) + gamma_p h
///            + (2 n dl_eff / hbar) sin^2(theta) sin^2(omega_eff t / 2).
pub fn probe_frequency_at(state: &DriveState, t: f64, gas: &GasSpec, pair: &ResonancePair) -> f64 {
    let s = (state.omega_eff * t / 2.0).sin();
    let amplitude = 2.0 * gas.n_total * gas.delta_lambda_eff() / crate::model::CGS.hbar;
    pair.omega12_0 + pair.gamma_p * state.h + amplitude * state.sin2_theta * s * s
}

/// Fast-driving gate: passes iff omega_eff * tau >= threshold.
pub fn fast_driving_check(state: &DriveState, tau: f64, threshold: f64) -> FastDriving {
    let ratio = state.omega_eff * tau;
    if ratio >= threshold {
        FastDriving::Pass
    } else {
        FastDriving::Warn { ratio }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GasSpec, LambdaMatrix, Statistics, CGS};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn hydrogen_like_pair() -> ResonancePair {
        ResonancePair {
            gamma_d: CGS.gamma_proton,
            gamma_p: CGS.gamma_electron,
            omega12_0: CGS.gamma_electron * 4.5e4,
            h_drive: 1e-3,
            h0: 4.5e4,
        }
    }

    fn gas_with_amplitude() -> GasSpec {
        GasSpec {
            statistics: Statistics::Bose,
            n_total: 6e19,
            pop_fractions: [1.0, 0.0, 0.0],
            lambda: LambdaMatrix {
                l11: 0.0,
                l12: 0.0,
                l22: 0.0,
                l13: 0.0,
                l23: 2.5054e-38,
            },
            coherence13: 0.55,
            mass: CGS.hydrogen_mass,
        }
    }

    #[test]
    fn zero_detuning_state() {
        let pair = hydrogen_like_pair();
        let st = effective_precession(0.0, &pair);
        assert_relative_eq!(st.sin2_theta, 1.0, max_relative = 1e-15);
        assert_relative_eq!(st.omega_eff, pair.rabi_frequency(), max_relative = 1e-15);
    }

    #[test]
    fn half_transfer_at_h_equal_hd() {
        let pair = hydrogen_like_pair();
        let st = effective_precession(pair.h_drive, &pair);
        assert_relative_eq!(st.sin2_theta, 0.5, max_relative = 1e-14);
        assert_relative_eq!(
            st.omega_eff,
            2f64.sqrt() * pair.rabi_frequency(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn hydrogen_precession_numbers() {
        let pair = hydrogen_like_pair();
        let st = effective_precession(5.62e-2, &pair);
        assert_relative_eq!(st.omega_eff, 1.50e3, max_relative = 5e-3);
        assert_relative_eq!(st.omega_rabi, 26.752, max_relative = 1e-12);
        assert!((st.omega_eff / st.omega_rabi - 56.0).abs() < 1.0);
    }

    #[test]
    fn drive_state_invariant() {
        let pair = hydrogen_like_pair();
        for h in [0.0, 1e-4, 1e-3, 5e-2, 1.0] {
            let st = effective_precession(h, &pair);
            assert!(st.sin2_theta > 0.0 && st.sin2_theta <= 1.0);
            assert!(st.omega_eff >= st.omega_rabi);
            assert_relative_eq!(
                st.sin2_theta * st.omega_eff * st.omega_eff,
                st.omega_rabi * st.omega_rabi,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn population_evolution() {
        let pair = hydrogen_like_pair();
        let n = 6e19;
        let st = effective_precession(0.0, &pair);
        let (n1, n3) = populations_at(&st, 0.0, n);
        assert_eq!(n3, 0.0);
        assert_eq!(n1, n);
        // Full inversion at resonance after half a precession period.
        let (_, n3) = populations_at(&st, PI / st.omega_eff, n);
        assert_relative_eq!(n3, n, max_relative = 1e-12);
        // Half transfer at h = H_d.
        let st = effective_precession(pair.h_drive, &pair);
        let (n1, n3) = populations_at(&st, PI / st.omega_eff, n);
        assert_relative_eq!(n3, n / 2.0, max_relative = 1e-12);
        assert_eq!(n1 + n3, n);
    }

    #[test]
    fn probe_frequency_time_dependence() {
        let pair = hydrogen_like_pair();
        let gas = gas_with_amplitude();
        let amplitude = 2.0 * gas.n_total * gas.delta_lambda_eff() / CGS.hbar;

        let st = effective_precession(0.0, &pair);
        assert_eq!(probe_frequency_at(&st, 0.0, &gas, &pair), pair.omega12_0);
        let max = probe_frequency_at(&st, PI / st.omega_eff, &gas, &pair);
        assert_relative_eq!(max, pair.omega12_0 + amplitude, max_relative = 1e-12);

        // Time average over one period: half the modulation amplitude.
        let st = effective_precession(2e-3, &pair);
        let period = 2.0 * PI / st.omega_eff;
        let n = 20_000;
        let mean = (0..n)
            .map(|i| probe_frequency_at(&st, (i as f64 + 0.5) * period / n as f64, &gas, &pair))
            .sum::<f64>()
            / n as f64;
        let expected = pair.omega12_0 + pair.gamma_p * st.h + 0.5 * amplitude * st.sin2_theta;
        assert_relative_eq!(mean, expected, max_relative = 1e-9);
    }

    #[test]
    fn probe_frequency_is_periodic() {
        let pair = hydrogen_like_pair();
        let gas = gas_with_amplitude();
        let st = effective_precession(3e-3, &pair);
        let period = 2.0 * PI / st.omega_eff;
        for k in [0.17, 0.43, 0.77] {
            let a = probe_frequency_at(&st, k * period, &gas, &pair);
            let b = probe_frequency_at(&st, k * period + period, &gas, &pair);
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
    }

    #[test]
    fn far_detuned_probe_frequency_is_zeeman_only() {
        // sin^2(theta) -> 0: the contact term disappears for all t.
        let pair = hydrogen_like_pair();
        let gas = gas_with_amplitude();
        let amplitude = 2.0 * gas.n_total * gas.delta_lambda_eff() / CGS.hbar;
        let h = 1e6 * pair.h_drive;
        let st = effective_precession(h, &pair);
        let zeeman = pair.omega12_0 + pair.gamma_p * h;
        for t in [0.0, 1e-3, 0.37, 2.0] {
            let w = probe_frequency_at(&st, t, &gas, &pair);
            assert!((w - zeeman).abs() <= 2e-12 * amplitude.abs());
        }
    }

    #[test]
    fn fast_driving_gate() {
        let pair = hydrogen_like_pair();
        let st = effective_precession(5.62e-2, &pair);
        assert_eq!(
            fast_driving_check(&st, 1.0, DEFAULT_FAST_DRIVING_THRESHOLD),
            FastDriving::Pass
        );
        // Exactly at the threshold passes.
        let ratio = DEFAULT_FAST_DRIVING_THRESHOLD / st.omega_eff;
        assert_eq!(
            fast_driving_check(&st, ratio, DEFAULT_FAST_DRIVING_THRESHOLD),
            FastDriving::Pass
        );
        match fast_driving_check(&st, 0.5 / st.omega_eff, DEFAULT_FAST_DRIVING_THRESHOLD) {
            FastDriving::Warn { ratio } => assert_relative_eq!(ratio, 0.5, max_relative = 1e-12),
            FastDriving::Pass => panic!("expected warning"),
        }
    }
}
