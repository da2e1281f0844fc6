//! Adaptive Gauss–Kronrod (G7/K15) integration.
//!
//! Global adaptive bisection: the subinterval with the largest error estimate
//! is split until the summed estimate meets the tolerance. The per-interval
//! estimate is `|K15 − G7|`, which bounds the error of the 7-point rule and is
//! therefore conservative for the 15-point value that is returned.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

// Kronrod abscissae (descending), Kronrod weights, Gauss weights.
// Odd indices of XGK are the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639,
    0.949_107_912_342_758_525,
    0.864_864_423_359_769_073,
    0.741_531_185_599_394_440,
    0.586_087_235_467_691_130,
    0.405_845_151_377_397_167,
    0.207_784_955_007_898_468,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_553,
    0.104_790_010_322_250_184,
    0.140_653_259_715_525_919,
    0.169_004_726_639_267_903,
    0.190_350_578_064_785_410,
    0.204_432_940_075_298_892,
    0.209_482_141_084_727_828,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693,
    0.279_705_391_489_276_668,
    0.381_830_050_505_118_945,
    0.417_959_183_673_469_388,
];

/// Tolerances and limits for [`integrate`].
const INITIAL_SPLIT: usize = 4;

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-15,
            rel_tol: 1e-10,
            max_intervals: 4000,
        }
    }
}

impl QuadOptions {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
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
        self.error.total_cmp(&other.error)
    }
}

/// One G7/K15 panel on `[a, b]`: `(kronrod, |kronrod − gauss|)`.
pub fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn segment<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let (value, error) = gk15(f, a, b);
    Segment { a, b, value, error }
}

/// `∫_a^b f` with global adaptive subdivision over the given panels.
fn adapt<F: FnMut(f64) -> f64>(f: &mut F, points: &[f64], opts: QuadOptions) -> Result<QuadResult> {
    let mut heap = BinaryHeap::new();
    // Segments too narrow to split further; their error stays in the total.
    let mut frozen_value = 0.0;
    let mut frozen_error = 0.0;
    let mut evaluations = 0;
    // Each panel starts pre-split so that a feature missed by both rules on
    // one wide panel still has a chance to show up in the error estimate.
    for w in points.windows(2) {
        if w[1] > w[0] {
            let h = (w[1] - w[0]) / INITIAL_SPLIT as f64;
            for i in 0..INITIAL_SPLIT {
                let a = w[0] + i as f64 * h;
                let b = if i + 1 == INITIAL_SPLIT { w[1] } else { a + h };
                heap.push(segment(f, a, b));
                evaluations += 15;
            }
        }
    }
    loop {
        let (value, error) = heap
            .iter()
            .fold((frozen_value, frozen_error), |(v, e), s| (v + s.value, e + s.error));
        let tol = opts.abs_tol.max(opts.rel_tol * value.abs());
        if error <= tol {
            return Ok(QuadResult {
                value,
                error,
                evaluations,
            });
        }
        let Some(worst) = heap.pop() else {
            return Ok(QuadResult {
                value,
                error,
                evaluations,
            });
        };
        if heap.len() + 2 > opts.max_intervals {
            return Err(Error::Quadrature {
                partial: value,
                error_estimate: error,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b || (worst.b - worst.a) < 1e-14 * mid.abs().max(1e-300) {
            frozen_value += worst.value;
            frozen_error += worst.error;
            continue;
        }
        heap.push(segment(f, worst.a, mid));
        heap.push(segment(f, mid, worst.b));
        evaluations += 30;
    }
}

/// `∫_a^b f(x) dx`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    if a > b {
        let r = integrate(f, b, a, opts)?;
        return Ok(QuadResult { value: -r.value, ..r });
    }
    adapt(&mut f, &[a, b], opts)
}

/// `∫ f` over the union of consecutive panels given by sorted breakpoints.
/// Breakpoints let the caller split at known kinks or peaks.
pub fn integrate_with_breaks<F: FnMut(f64) -> f64>(mut f: F, points: &[f64], opts: QuadOptions) -> Result<QuadResult> {
    debug_assert!(points.windows(2).all(|w| w[0] <= w[1]), "breakpoints must be sorted");
    if points.len() < 2 {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    adapt(&mut f, points, opts)
}

/// `∫_a^∞ f(x) dx` via `x = a + t/(1 − t)`, `t ∈ [0, 1)`. Finite breakpoints
/// above `a` are mapped into `t` space.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    breaks: &[f64],
    opts: QuadOptions,
) -> Result<QuadResult> {
    let mut g = |t: f64| {
        let one_minus = 1.0 - t;
        let x = a + t / one_minus;
        if !x.is_finite() {
            return 0.0;
        }
        let v = f(x);
        if v == 0.0 {
            0.0
        } else {
            v / (one_minus * one_minus)
        }
    };
    let mut points = vec![0.0];
    for &x in breaks {
        if x > a && x.is_finite() {
            let d = x - a;
            points.push(d / (1.0 + d));
        }
    }
    points.push(1.0);
    points.sort_by(f64::total_cmp);
    points.dedup();
    adapt(&mut g, &points, opts)
}
