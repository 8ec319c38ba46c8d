//! Numerical kernels: periodic trapezoid, adaptive Gauss–Kronrod, finite
//! differences and bracketed root finding.
//!
//! All kernels are deterministic. Where node evaluation runs in parallel the
//! values are collected first and summed pairwise in a fixed order, so the
//! result does not depend on the worker count.

use rayon::prelude::*;

use crate::error::{GeomError, Result};

/// Outcome of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    /// `false` when the node cap or depth limit was hit before `tol` was met.
    pub converged: bool,
}

impl QuadResult {
    pub(crate) fn add(self, other: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }

    pub(crate) fn zero() -> QuadResult {
        QuadResult { value: 0.0, error_estimate: 0.0, evaluations: 0, converged: true }
    }
}

/// Upper bound on trapezoid nodes before giving up.
pub const PERIODIC_NODE_CAP: usize = 1 << 20;
const PERIODIC_START: usize = 32;
const PARALLEL_BATCH: usize = 512;

/// Sum with pairwise splitting; fixed order, so results are reproducible.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

fn eval_nodes<F>(f: &F, nodes: Vec<f64>) -> Vec<f64>
where
    F: Fn(f64) -> f64 + Sync,
{
    if nodes.len() >= PARALLEL_BATCH {
        nodes.par_iter().map(|&t| f(t)).collect()
    } else {
        nodes.into_iter().map(f).collect()
    }
}

/// Trapezoid rule for a 2π-periodic integrand over `[0, 2π)`, doubling the
/// node count until successive estimates differ by less than `tol` on two
/// consecutive doublings.
///
/// The error estimate is the last difference. Spectrally accurate for
/// analytic integrands.
pub fn integrate_periodic<F>(f: F, tol: f64) -> QuadResult
where
    F: Fn(f64) -> f64 + Sync,
{
    integrate_periodic_from(f, tol, 0.0)
}

/// [`integrate_periodic`] with the node grid shifted by `offset`.
pub fn integrate_periodic_from<F>(f: F, tol: f64, offset: f64) -> QuadResult
where
    F: Fn(f64) -> f64 + Sync,
{
    let two_pi = std::f64::consts::TAU;
    let mut n = PERIODIC_START;
    let h = two_pi / n as f64;
    let vals = eval_nodes(&f, (0..n).map(|j| offset + j as f64 * h).collect());
    let mut sum = pairwise_sum(&vals);
    let mut estimate = sum * h;
    let mut evaluations = n;
    let mut delta = f64::INFINITY;
    let mut previous_delta;
    while n < PERIODIC_NODE_CAP {
        let h = two_pi / n as f64;
        let mids = eval_nodes(&f, (0..n).map(|j| offset + (j as f64 + 0.5) * h).collect());
        evaluations += n;
        sum += pairwise_sum(&mids);
        n *= 2;
        let next = sum * (two_pi / n as f64);
        previous_delta = delta;
        delta = (next - estimate).abs();
        estimate = next;
        // two quiet doublings in a row guard against aliasing coincidences
        if (delta < tol && previous_delta < tol.max(1e3 * delta)) || !estimate.is_finite() {
            break;
        }
    }
    QuadResult { value: estimate, error_estimate: delta, evaluations, converged: delta < tol }
}

// Gauss–Kronrod 7/15 abscissae and weights (QUADPACK qk15).
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
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let hl = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = hl * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kron * hl, ((kron - gauss) * hl).abs())
}

/// Maximum number of subintervals kept by [`integrate_adaptive`].
pub const ADAPTIVE_MAX_INTERVALS: usize = 4000;

/// Globally adaptive Gauss–Kronrod (7/15) quadrature on `[a, b]`.
///
/// The interval with the largest embedded error estimate is bisected until
/// the summed estimate falls below `tol`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> QuadResult {
    if a == b {
        return QuadResult::zero();
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    // (a, b, value, error)
    let mut pieces: Vec<(f64, f64, f64, f64)> = Vec::new();
    let (v, e) = gk15(&f, lo, hi);
    pieces.push((lo, hi, v, e));
    let mut evaluations = 15;
    loop {
        let total_err: f64 = pieces.iter().map(|p| p.3).sum();
        if total_err <= tol || pieces.len() >= ADAPTIVE_MAX_INTERVALS {
            let value: f64 = pieces.iter().map(|p| p.2).sum();
            return QuadResult {
                value: sign * value,
                error_estimate: total_err,
                evaluations,
                converged: total_err <= tol,
            };
        }
        let (worst, _) =
            pieces.iter().enumerate().fold((0, -1.0), |acc, (i, p)| if p.3 > acc.1 { (i, p.3) } else { acc });
        let (pa, pb, _, _) = pieces.swap_remove(worst);
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            // interval cannot be split further in floating point
            let value: f64 = pieces.iter().map(|p| p.2).sum::<f64>() + gk15(&f, pa, pb).0;
            return QuadResult { value: sign * value, error_estimate: total_err, evaluations, converged: false };
        }
        let (v1, e1) = gk15(&f, pa, mid);
        let (v2, e2) = gk15(&f, mid, pb);
        evaluations += 30;
        pieces.push((pa, mid, v1, e1));
        pieces.push((mid, pb, v2, e2));
    }
}

/// Integrate over consecutive breakpoints `[x0, x1], [x1, x2], …` with
/// [`integrate_adaptive`], splitting `tol` evenly.
pub fn integrate_piecewise<F: Fn(f64) -> f64>(f: F, breaks: &[f64], tol: f64) -> QuadResult {
    let pieces = breaks.len().saturating_sub(1).max(1);
    breaks
        .windows(2)
        .fold(QuadResult::zero(), |acc, w| acc.add(integrate_adaptive(&f, w[0], w[1], tol / pieces as f64)))
}

/// Finite-difference stencil.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    Three,
    Five,
}

/// Central-difference derivative of `f` at `t` with step `h`.
pub fn central_diff<F: Fn(f64) -> f64>(f: F, t: f64, h: f64, stencil: Stencil) -> f64 {
    match stencil {
        Stencil::Three => (f(t + h) - f(t - h)) / (2.0 * h),
        Stencil::Five => (-f(t + 2.0 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2.0 * h)) / (12.0 * h),
    }
}

/// Brent's method on a bracket with `f(lo)·f(hi) ≤ 0`.
///
/// Stops when the bracket is narrower than `tol` (plus a few ulps) or an
/// exact zero is hit.
pub fn find_root_monotone<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa * fb < 0.0) {
        return Err(GeomError::InvalidBracket(fa, fb));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Ok(b)
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
/// Returns `(argmax, max)`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, iterations: usize) -> (f64, f64) {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iterations {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
        if b - a <= 4.0 * f64::EPSILON * (a.abs() + b.abs()).max(1.0) {
            break;
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, LN_2, PI, TAU};

    #[test]
    fn periodic_examples() {
        let r = integrate_periodic(|t| t.sin().powi(2), 1e-12);
        assert!((r.value - PI).abs() < 1e-12, "{r:?}");
        assert!(r.converged);
        let c = 2.5;
        let r = integrate_periodic(|_| c, 1e-12);
        assert!((r.value - TAU * c).abs() < 1e-12);
        // 2π I0(1); reference from a 2^20-node run of the same rule.
        let reference = {
            let n = 1 << 20;
            let h = TAU / n as f64;
            let vals: Vec<f64> = (0..n).map(|j| (j as f64 * h).cos().exp()).collect();
            pairwise_sum(&vals) * h
        };
        let r = integrate_periodic(|t| t.cos().exp(), 1e-12);
        assert!((r.value - reference).abs() < 1e-12);
        assert!((r.value - 7.954_926_521_012_845).abs() < 1e-11);
    }

    #[test]
    fn periodic_reports_nonconvergence() {
        // a jump converges only linearly; a piecewise constant would alias exactly
        let r = integrate_periodic(|t| if t < 1.0 { t } else { 0.0 }, 1e-15);
        assert!(!r.converged);
        assert!(r.error_estimate >= 0.0);
        assert!((r.value - 0.5).abs() < 1e-4);
    }

    #[test]
    fn adaptive_examples() {
        let r = integrate_adaptive(|x| x * x, 0.0, 1.0, 1e-13);
        assert!((r.value - 1.0 / 3.0).abs() < 1e-14);
        let r = integrate_adaptive(f64::tan, 0.0, FRAC_PI_4, 1e-13);
        assert!((r.value - 0.5 * LN_2).abs() < 1e-13);
        let (beta, gamma) = (3.0 * FRAC_PI_4, FRAC_PI_4);
        let r = integrate_adaptive(|p| 1.0 / (beta - p).tan(), 0.0, gamma, 1e-13);
        let exact = (beta.sin() / (beta - gamma).sin()).ln();
        assert!((exact + 0.5 * LN_2).abs() < 1e-15);
        assert!((r.value - exact).abs() < 1e-13);
    }

    #[test]
    fn adaptive_reversed_bounds_and_kinks() {
        let r = integrate_adaptive(|x| x, 1.0, 0.0, 1e-12);
        assert!((r.value + 0.5).abs() < 1e-14);
        let r = integrate_adaptive(|x: f64| (x - 0.3).abs(), 0.0, 1.0, 1e-10);
        assert!((r.value - (0.045 + 0.245)).abs() < 1e-10);
    }

    #[test]
    fn central_diff_examples() {
        let d = central_diff(f64::sin, 0.0, 1e-3, Stencil::Three);
        assert!((d - 1.0).abs() < 1e-6);
        let d = central_diff(f64::sin, 0.0, 1e-3, Stencil::Five);
        assert!((d - 1.0).abs() < 1e-12);
        let d = central_diff(|t| t * t, 3.0, 0.5, Stencil::Three);
        assert_eq!(d, 6.0);
        let d = central_diff(|t| t * t, 3.0, 0.5, Stencil::Five);
        assert_eq!(d, 6.0);
        let d = central_diff(f64::exp, 1.0, 1e-3, Stencil::Five);
        assert!((d - std::f64::consts::E).abs() < 1e-9);
    }

    #[test]
    fn root_examples() {
        let r = find_root_monotone(|x| x - 1.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 1.0).abs() < 1e-14);
        let r = find_root_monotone(|x: f64| x.tanh() - 0.5, 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 0.5f64.atanh()).abs() < 1e-14);
        let r = find_root_monotone(f64::cos, 0.0, PI, 1e-15).unwrap();
        assert!((r - PI / 2.0).abs() < 1e-14);
        assert!(matches!(find_root_monotone(|x| x * x + 1.0, -1.0, 1.0, 1e-10), Err(GeomError::InvalidBracket(..))));
    }

    #[test]
    fn golden_finds_peak() {
        let (x, v) = golden_max(|x| -(x - 0.7f64).powi(2) + 3.0, 0.0, 2.0, 200);
        assert!((x - 0.7).abs() < 1e-7);
        assert!((v - 3.0).abs() < 1e-14);
    }

    #[test]
    fn deterministic_bitwise() {
        let f = |t: f64| (3.0 * t).sin().exp() + t.cos();
        let a = integrate_periodic(f, 1e-13);
        let b = integrate_periodic(f, 1e-13);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}
