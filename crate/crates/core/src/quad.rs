//! Adaptive Gauss-Kronrod quadrature with an arcsine substitution for
//! inverse-square-root endpoint singularities.
//!
//! The 7-15 point rule uses the standard node/weight table. Integrands
//! whose only non-smoothness is a 1/sqrt factor vanishing at one or both
//! interval endpoints are handled by `integrate_sqrt_endpoints`, which
//! substitutes h = a + (b - a) sin^2(phi) and integrates the resulting
//! analytic function of phi.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

/// Abscissae of the 15-point Kronrod rule on [-1, 1] (positive half).
const XGK: [f64; 8] = [
    0.991_455_371_120_813,
    0.949_107_912_342_759,
    0.864_864_423_359_769,
    0.741_531_185_599_394,
    0.586_087_235_467_691,
    0.405_845_151_377_397,
    0.207_784_955_007_898,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529,
    0.063_092_092_629_979,
    0.104_790_010_322_250,
    0.140_653_259_715_525,
    0.169_004_726_639_267,
    0.190_350_578_064_785,
    0.204_432_940_075_298,
    0.209_482_141_084_728,
];

/// Weights of the embedded 7-point Gauss rule (odd-index Kronrod nodes).
const WG: [f64; 4] = [
    0.129_484_966_168_870,
    0.279_705_391_489_277,
    0.381_830_050_505_119,
    0.417_959_183_673_469,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOutcome {
    pub value: f64,
    /// Estimated absolute error.
    pub abs_error: f64,
    pub evaluations: usize,
}

/// Tolerance not reached within the segment budget; carries the best
/// estimate so the caller can report the achieved accuracy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unconverged {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

/// Quadrature knobs: tolerances and the subdivision budget. Convergence
/// requires the summed error to drop below
/// `max(abs_tol, rel_tol * |integral|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_segments: usize,
}

impl Default for QuadSettings {
    fn default() -> Self {
        QuadSettings {
            rel_tol: 1e-6,
            abs_tol: 0.0,
            max_segments: 4000,
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    seq: usize,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error && self.seq == other.seq
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        // Worst error first; sequence number breaks ties deterministically.
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// One 7-15 Gauss-Kronrod evaluation on [a, b]. Returns (kronrod value,
/// error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = f(center);
    let mut kronrod = WGK[7] * f_center;
    let mut gauss = WG[3] * f_center;
    let mut resabs = WGK[7] * f_center.abs();
    let mut fv = [0.0f64; 15];
    fv[7] = f_center;

    for (i, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[i] = f1;
        fv[14 - i] = f2;
        kronrod += WGK[i] * (f1 + f2);
        resabs += WGK[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            gauss += WG[i / 2] * (f1 + f2);
        }
    }

    let mean = kronrod * 0.5;
    let mut resasc = WGK[7] * (f_center - mean).abs();
    for (i, &w) in WGK.iter().enumerate().take(7) {
        resasc += w * ((fv[i] - mean).abs() + (fv[14 - i] - mean).abs());
    }

    let value = kronrod * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * 1.0f64.min((200.0 * err / resasc).powf(1.5));
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (value, err)
}

/// Globally adaptive Gauss-Kronrod integration of `f` over [a, b].
///
/// Splits the segment with the largest error estimate until the summed
/// error drops below `rel_tol * |integral|` (with a small absolute floor)
/// or the segment budget is exhausted.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    settings: &QuadSettings,
) -> Result<QuadOutcome, Unconverged> {
    if a == b {
        return Ok(QuadOutcome {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
        });
    }
    let mut evaluations = 15usize;
    let (value, error) = gk15(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value,
        error,
        seq: 0,
    });
    let mut seq = 1usize;
    let mut total_value = value;
    let mut total_error = error;

    while heap.len() < settings.max_segments {
        let tol = (settings.rel_tol * total_value.abs())
            .max(settings.abs_tol)
            .max(f64::MIN_POSITIVE);
        if total_error <= tol {
            break;
        }
        let worst = heap.pop().expect("heap cannot be empty");
        if worst.b - worst.a <= f64::EPSILON * (worst.a.abs() + worst.b.abs()) {
            // Cannot subdivide further in f64; keep the segment as is.
            total_error -= worst.error;
            heap.push(Segment {
                error: 0.0,
                ..worst
            });
            continue;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1) = gk15(f, worst.a, mid);
        let (v2, e2) = gk15(f, mid, worst.b);
        evaluations += 30;
        total_value += v1 + v2 - worst.value;
        total_error += e1 + e2 - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
            seq,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
            seq: seq + 1,
        });
        seq += 2;
    }

    // Deterministic final sum: accumulate in left-to-right order.
    let mut segments: Vec<Segment> = heap.into_vec();
    segments.sort_by(|s, t| s.a.total_cmp(&t.a));
    let value: f64 = segments.iter().map(|s| s.value).sum();
    let abs_error: f64 = segments.iter().map(|s| s.error).sum();

    let tol = (settings.rel_tol * value.abs())
        .max(settings.abs_tol)
        .max(f64::MIN_POSITIVE);
    if abs_error <= tol {
        Ok(QuadOutcome {
            value,
            abs_error,
            evaluations,
        })
    } else {
        Err(Unconverged {
            value,
            abs_error,
            evaluations,
        })
    }
}

/// Integrate `f` over [a, b] where `f` may diverge like an inverse square
/// root at either endpoint. Substituting h = a + (b - a) sin^2(phi) turns
/// such an integrand into an analytic function of phi on [0, pi/2].
pub fn integrate_sqrt_endpoints<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    settings: &QuadSettings,
) -> Result<QuadOutcome, Unconverged> {
    let width = b - a;
    let g = move |phi: f64| {
        let s = phi.sin();
        let h = a + width * s * s;
        f(h) * width * (2.0 * phi).sin()
    };
    adaptive(&g, 0.0, PI / 2.0, settings)
}
