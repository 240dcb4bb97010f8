//! Three-level collisional (contact) shifts of the probe transition.
//!
//! For bosons the shift carries two-level terms plus a coherence-weighted
//! third-state term; for fermions only the third-state term survives. The
//! shift does not depend on the coherence between the two states coupled
//! by the probe itself, so no such parameter appears here.

use crate::error::Error;
use crate::model::{GasSpec, Statistics, CGS};

/// Contact shift of the probe transition split into its contributions.
/// All terms are angular frequencies (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftBreakdown {
    /// Two-level contribution (zero for fermions).
    pub two_level_term: f64,
    /// Third-state contribution, weighted by |C13|^2.
    pub third_state_term: f64,
    pub total: f64,
}

/// Contact shift of a Bose gas:
/// hbar * shift = 2 n1 (l12 - l11) + 2 n2 (l22 - l12) + 2 n3 |C13|^2 (l23 - l13).
pub fn bose_shift(gas: &GasSpec) -> Result<ShiftBreakdown, Error> {
    if gas.statistics != Statistics::Bose {
        return Err(Error::WrongStatistics {
            expected: Statistics::Bose,
            actual: gas.statistics,
        });
    }
    let [n1, n2, n3] = gas.populations();
    let l = &gas.lambda;
    let two_level = (2.0 * n1 * (l.l12 - l.l11) + 2.0 * n2 * (l.l22 - l.l12)) / CGS.hbar;
    let third = 2.0 * n3 * gas.coherence13 * l.delta() / CGS.hbar;
    Ok(ShiftBreakdown {
        two_level_term: two_level,
        third_state_term: third,
        total: two_level + third,
    })
}

/// Contact shift of a Fermi gas:
/// hbar * shift = 2 n3 |C13|^2 (l23 - l13).
pub fn fermi_shift(gas: &GasSpec) -> Result<ShiftBreakdown, Error> {
    if gas.statistics != Statistics::Fermi {
        return Err(Error::WrongStatistics {
            expected: Statistics::Fermi,
            actual: gas.statistics,
        });
    }
    let n3 = gas.populations()[2];
    let third = 2.0 * n3 * gas.coherence13 * gas.lambda.delta() / CGS.hbar;
    Ok(ShiftBreakdown {
        two_level_term: 0.0,
        third_state_term: third,
        total: third,
    })
}

/// Interaction strength lambda = 4 pi hbar^2 a / m for a scattering
/// length `a` (cm) and atomic mass `m` (g). Sign of `a` is preserved.
pub fn lambda_from_scattering_length(a: f64, m: f64) -> Result<f64, Error> {
    if !(m > 0.0) {
        return Err(Error::NonPositiveMass(m));
    }
    Ok(4.0 * std::f64::consts::PI * CGS.hbar * CGS.hbar * a / m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::LambdaMatrix;
    use approx::{assert_relative_eq, relative_eq};

    fn gas(
        statistics: Statistics,
        n: f64,
        fractions: [f64; 3],
        l: LambdaMatrix,
        c13: f64,
    ) -> GasSpec {
        GasSpec {
            statistics,
            n_total: n,
            pop_fractions: fractions,
            lambda: l,
            coherence13: c13,
            mass: CGS.hydrogen_mass,
        }
    }

    #[test]
    fn two_level_bose_shift_vanishes_for_equal_lambdas() {
        // n3 = 0 and l11 = l12 = l22: no shift at all.
        let l = LambdaMatrix {
            l11: 3e-38,
            l12: 3e-38,
            l22: 3e-38,
            l13: 1e-38,
            l23: 5e-38,
        };
        let g = gas(Statistics::Bose, 1e13, [0.6, 0.4, 0.0], l, 1.0);
        let s = bose_shift(&g).unwrap();
        assert_eq!(s.two_level_term, 0.0);
        assert_eq!(s.total, 0.0);
    }

    #[test]
    fn bose_shift_vanishes_when_all_lambdas_equal() {
        let l = LambdaMatrix {
            l11: 2e-38,
            l12: 2e-38,
            l22: 2e-38,
            l13: 2e-38,
            l23: 2e-38,
        };
        let g = gas(Statistics::Bose, 5e12, [0.3, 0.3, 0.4], l, 0.7);
        assert_eq!(bose_shift(&g).unwrap().total, 0.0);
    }

    #[test]
    fn hydrogen_like_bose_shift_in_field_units() {
        // n3 = 6e19 cm^-3, delta a = -30 pm, coherence back-solved so that
        // the full shift equals -89 G on the probe's field scale.
        let delta_lambda = lambda_from_scattering_length(-3e-9, CGS.hydrogen_mass).unwrap();
        let coherence = 89.0 * CGS.hbar * CGS.gamma_electron / (2.0 * 6e19 * delta_lambda.abs());
        let l = LambdaMatrix {
            l11: 0.0,
            l12: 0.0,
            l22: 0.0,
            l13: 0.0,
            l23: delta_lambda,
        };
        let g = gas(Statistics::Bose, 6e19, [0.0, 0.0, 1.0], l, coherence);
        let s = bose_shift(&g).unwrap();
        assert_relative_eq!(s.total / CGS.gamma_electron, -89.0, max_relative = 1e-12);
    }

    #[test]
    fn fermi_shift_zero_cases() {
        let l = LambdaMatrix {
            l11: 0.0,
            l12: 0.0,
            l22: 0.0,
            l13: 1e-38,
            l23: 4e-38,
        };
        // Fully coherent pair: |C13|^2 = 0.
        let g = gas(Statistics::Fermi, 1e12, [0.5, 0.0, 0.5], l, 0.0);
        assert_eq!(fermi_shift(&g).unwrap().total, 0.0);
        // Equal scattering lengths.
        let l_eq = LambdaMatrix { l23: 1e-38, ..l };
        let g = gas(Statistics::Fermi, 1e12, [0.5, 0.0, 0.5], l_eq, 0.5);
        assert_eq!(fermi_shift(&g).unwrap().total, 0.0);
        // Empty third state, arbitrary lambdas.
        let g = gas(Statistics::Fermi, 1e12, [1.0, 0.0, 0.0], l, 0.5);
        assert_eq!(fermi_shift(&g).unwrap().total, 0.0);
    }

    #[test]
    fn fermi_incoherent_limit() {
        // |C13|^2 = 1/2, n3 = 1e12: hbar * shift = n3 * delta_lambda.
        let dl = 3e-38;
        let l = LambdaMatrix {
            l11: 0.0,
            l12: 0.0,
            l22: 0.0,
            l13: 1e-38,
            l23: 1e-38 + dl,
        };
        let g = gas(Statistics::Fermi, 2e12, [0.5, 0.0, 0.5], l, 0.5);
        let s = fermi_shift(&g).unwrap();
        assert_relative_eq!(s.total, 1e12 * dl / CGS.hbar, max_relative = 1e-12);
        assert_eq!(s.two_level_term, 0.0);
    }

    #[test]
    fn wrong_statistics_rejected() {
        let l = LambdaMatrix {
            l11: 0.0,
            l12: 0.0,
            l22: 0.0,
            l13: 0.0,
            l23: 0.0,
        };
        let bose = gas(Statistics::Bose, 1e12, [1.0, 0.0, 0.0], l, 0.5);
        let fermi = gas(Statistics::Fermi, 1e12, [1.0, 0.0, 0.0], l, 0.5);
        assert!(matches!(
            fermi_shift(&bose),
            Err(Error::WrongStatistics { .. })
        ));
        assert!(matches!(
            bose_shift(&fermi),
            Err(Error::WrongStatistics { .. })
        ));
    }

    #[test]
    fn lambda_conversion() {
        assert_eq!(
            lambda_from_scattering_length(0.0, CGS.hydrogen_mass).unwrap(),
            0.0
        );
        // Independently computed: 4*pi*hbar^2*(-3e-9)/1.6735e-24.
        let l = lambda_from_scattering_length(-3e-9, CGS.hydrogen_mass).unwrap();
        assert_relative_eq!(l, -2.5054e-38, max_relative = 1e-4);
        // Linearity in a.
        let l2 = lambda_from_scattering_length(-6e-9, CGS.hydrogen_mass).unwrap();
        assert_relative_eq!(l2, 2.0 * l, max_relative = 1e-14);
        assert!(matches!(
            lambda_from_scattering_length(1e-9, 0.0),
            Err(Error::NonPositiveMass(_))
        ));
    }

    #[test]
    fn shift_is_linear_in_density() {
        let l = LambdaMatrix {
            l11: 1e-38,
            l12: 2e-38,
            l22: 3e-38,
            l13: 1e-38,
            l23: 4e-38,
        };
        let g1 = gas(Statistics::Bose, 1e12, [0.5, 0.2, 0.3], l, 0.6);
        let g3 = gas(Statistics::Bose, 3e12, [0.5, 0.2, 0.3], l, 0.6);
        let s1 = bose_shift(&g1).unwrap();
        let s3 = bose_shift(&g3).unwrap();
        assert!(relative_eq!(s3.total, 3.0 * s1.total, max_relative = 1e-12));
        assert!(relative_eq!(
            s1.total,
            s1.two_level_term + s1.third_state_term,
            max_relative = 1e-12
        ));
    }
}
