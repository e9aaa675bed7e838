//! Adaptive Gauss–Kronrod (7/15) integration with a global error heap, and
//! a tanh-sinh rule for integrands with endpoint singularities.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// One G7K15 panel: (Kronrod estimate, |Kronrod − Gauss|).
pub fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive G7K15 on `[a, b]`, bisecting the worst panel until the
/// summed error estimate is below `max(abs_tol, rel_tol·|I|)`.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<Integral> {
    integrate_adaptive_breaks(f, &[a, b], abs_tol, rel_tol, max_panels)
}

/// As [`integrate_adaptive`], starting from the panels delimited by `breaks`
/// (increasing). Useful for oscillatory integrands whose period is known.
pub fn integrate_adaptive_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<Integral> {
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let (value, error) = gk15(&mut f, w[0], w[1]);
        evaluations += 15;
        total += value;
        total_err += error;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }
    if heap.is_empty() {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            evaluations,
        });
    }
    let (lo, hi) = (breaks[0], breaks[breaks.len() - 1]);
    loop {
        if !total.is_finite() {
            return Err(Error::Quadrature {
                op: "integrate_adaptive",
                msg: format!("non-finite integrand on [{lo}, {hi}]"),
            });
        }
        if total_err <= abs_tol.max(rel_tol * total.abs()) {
            break;
        }
        if heap.len() >= max_panels {
            return Err(Error::Quadrature {
                op: "integrate_adaptive",
                msg: format!("panel budget {max_panels} exhausted, error estimate {total_err:.3e}"),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1) = gk15(&mut f, worst.a, mid);
        let (v2, e2) = gk15(&mut f, mid, worst.b);
        evaluations += 30;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    // re-sum to shed accumulated cancellation from the running updates
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = panels.iter().map(|p| p.value).sum();
    let error = panels.iter().map(|p| p.error).sum();
    Ok(Integral {
        value,
        error,
        evaluations,
    })
}

/// Tanh-sinh (double-exponential) quadrature on `[a, b]`.
///
/// The integrand is never evaluated at the endpoints, so integrable power
/// singularities there are handled. Levels halve the step until successive
/// estimates agree to `rel_tol`.
pub fn tanh_sinh<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rel_tol: f64, max_level: usize) -> Result<Integral> {
    use std::f64::consts::FRAC_PI_2;
    let c = 0.5 * (a + b);
    let h_half = 0.5 * (b - a);
    let t_max = 6.5;
    // evaluates the contribution at abscissa parameter t (both sides)
    let mut eval = |t: f64, evaluations: &mut usize| -> f64 {
        let s = FRAC_PI_2 * t.sinh();
        let ch = s.cosh();
        let w = FRAC_PI_2 * t.cosh() / (ch * ch);
        // distance from the endpoint, computed without cancellation
        let gap = h_half / (s.exp() * ch);
        if t == 0.0 {
            *evaluations += 1;
            return w * f(c);
        }
        let mut sum = 0.0;
        let (right, left) = (b - gap, a + gap);
        if right > c && right < b {
            sum += f(right);
            *evaluations += 1;
        }
        if left < c && left > a {
            sum += f(left);
            *evaluations += 1;
        }
        w * sum
    };
    let mut evaluations = 0;
    let mut h = 0.5;
    let mut sum = eval(0.0, &mut evaluations);
    let mut k = 1;
    while k as f64 * h <= t_max {
        sum += eval(k as f64 * h, &mut evaluations);
        k += 1;
    }
    let mut estimate = sum * h * h_half;
    for _ in 0..max_level {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= t_max {
            sum += eval(k as f64 * h, &mut evaluations);
            k += 2;
        }
        let next = sum * h * h_half;
        let diff = (next - estimate).abs();
        estimate = next;
        if !estimate.is_finite() {
            break;
        }
        if diff <= rel_tol * estimate.abs() {
            return Ok(Integral {
                value: estimate,
                error: diff,
                evaluations,
            });
        }
    }
    Err(Error::Quadrature {
        op: "tanh_sinh",
        msg: format!("no convergence on [{a}, {b}] after {max_level} levels"),
    })
}
