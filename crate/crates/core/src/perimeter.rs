//! Perimeter of a body in the plane of constant curvature `k` by every
//! available route: direct arclength, the Minkowski formula about any
//! origin, the unified Cauchy formula over foot angles, the projective
//! Cauchy formulas over ideal points (`k < 0`) and the polar Cauchy formula.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::body::{
    chart_normal_angle, frame_from_jet, ideal_support, ConvexBody, Curve, Jet, TrigCurve, ValidBody, POLE_EPSILON,
};
use crate::curvature::Curvature;
use crate::error::{GeomError, Result};
use crate::models::{compensated_sum, ChartPoint};
use crate::quadrature::{
    central_diff, integrate_adaptive, integrate_periodic, integrate_piecewise, QuadResult, Stencil,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Arclength,
    Minkowski,
    CauchyOmega,
    CauchyPolar,
    ProjectiveW,
    ProjectiveH,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Arclength,
        Method::Minkowski,
        Method::CauchyOmega,
        Method::CauchyPolar,
        Method::ProjectiveW,
        Method::ProjectiveH,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Method::Arclength => "arclength",
            Method::Minkowski => "minkowski",
            Method::CauchyOmega => "cauchy-omega",
            Method::CauchyPolar => "cauchy-polar",
            Method::ProjectiveW => "projective-w",
            Method::ProjectiveH => "projective-h",
        }
    }

    pub fn from_id(s: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.id() == s)
    }

    /// Whether the method can run on this body at all.
    pub fn applies_to(self, body: &ValidBody) -> bool {
        let k = body.k().k();
        match self {
            Method::Arclength | Method::Minkowski => !matches!(body.body(), ConvexBody::Degenerate(_)),
            Method::CauchyOmega => body.is_convex(),
            Method::CauchyPolar => body.is_convex() && body.is_smooth(),
            Method::ProjectiveW | Method::ProjectiveH => body.is_convex() && k < 0.0,
        }
    }
}

/// Extra per-method numbers.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Largest absolute integrand value seen on a fixed sample grid.
    pub max_abs_integrand: f64,
    /// Largest pointwise disagreement between two forms of the integrand.
    pub pointwise_gap: Option<f64>,
    /// Value from an independent second integration path.
    pub second_path: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerimeterReport {
    pub method: Method,
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
    pub diagnostics: Diagnostics,
}

impl PerimeterReport {
    fn from_quad(method: Method, q: QuadResult) -> Result<Self> {
        if !q.value.is_finite() {
            return Err(GeomError::domain(format!("{} integrand is not finite", method.id())));
        }
        Ok(PerimeterReport {
            method,
            value: q.value,
            error_estimate: q.error_estimate.abs(),
            evaluations: q.evaluations,
            converged: q.converged,
            diagnostics: Diagnostics::default(),
        })
    }
}

const SAMPLE_GRID: usize = 256;

fn sample_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    (0..SAMPLE_GRID).map(|i| f(lo + (hi - lo) * (i as f64 + 0.5) / SAMPLE_GRID as f64).abs()).fold(0.0, f64::max)
}

/// Isometry of the chart moving a chosen point to the chart origin: a
/// hyperbolic translation of the Klein disk, a rotation of the sphere or a
/// Euclidean translation. In homogeneous form it is `p ↦ N(p)/D(p)` with
/// `N` affine and `D(p) = 1 + ε τ (e·p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartIsometry {
    e: ChartPoint,
    tau: f64,
    eps: f64,
    perp_scale: f64,
}

impl ChartIsometry {
    pub fn recentering(k: Curvature, origin: ChartPoint) -> Result<Self> {
        let tau = origin.norm();
        let kk = k.k();
        let eps = if kk == 0.0 { 0.0 } else { kk.signum() };
        if eps < 0.0 && !(tau < 1.0) {
            return Err(GeomError::OutsideChart("origin must lie inside the unit disk".into()));
        }
        if !tau.is_finite() {
            return Err(GeomError::OutsideChart("non-finite origin".into()));
        }
        let e = if tau > 0.0 { (1.0 / tau) * origin } else { ChartPoint::new(1.0, 0.0) };
        Ok(ChartIsometry { e, tau, eps, perp_scale: (1.0 + eps * tau * tau).sqrt() })
    }

    fn linear(&self, v: ChartPoint) -> (ChartPoint, f64) {
        let par = self.e.dot(v);
        let perp = self.e.perp().dot(v);
        (par * self.e + (self.perp_scale * perp) * self.e.perp(), self.eps * self.tau * par)
    }

    /// `D(p)`; positive exactly on the hemisphere about the new origin.
    pub fn denominator(&self, p: ChartPoint) -> f64 {
        1.0 + self.eps * self.tau * self.e.dot(p)
    }

    pub fn apply(&self, p: ChartPoint) -> ChartPoint {
        let (n, _) = self.linear(p);
        let n = n - self.tau * self.e;
        (1.0 / self.denominator(p)) * n
    }

    /// Image of a jet under the isometry, by the quotient rule.
    pub fn apply_jet(&self, j: &Jet) -> Jet {
        let d = self.denominator(j.p);
        let q = self.apply(j.p);
        let (n1, d1) = self.linear(j.d1);
        let (n2, d2) = self.linear(j.d2);
        let q1 = (1.0 / d) * (n1 - d1 * q);
        let q2 = (1.0 / d) * (n2 - (2.0 * d1) * q1 - d2 * q);
        Jet { p: q, d1: q1, d2: q2 }
    }
}

struct Mapped<'a> {
    curve: &'a TrigCurve,
    map: ChartIsometry,
}

impl Curve for Mapped<'_> {
    fn jet(&self, t: f64) -> Jet {
        self.map.apply_jet(&self.curve.jet(t))
    }
}

/// Perimeter by direct integration of the intrinsic speed.
pub fn arclength_perimeter(body: &ValidBody, tol: f64) -> Result<PerimeterReport> {
    PerimeterReport::from_quad(Method::Arclength, body.arclength_perimeter(tol)?)
}

fn check_recentered(k: Curvature, pts: impl Iterator<Item = ChartPoint>, map: &ChartIsometry) -> Result<()> {
    for p in pts {
        let d = map.denominator(p);
        if k.k() > 0.0 && !(d > POLE_EPSILON) {
            return Err(GeomError::NearPole);
        }
        if map.apply(p).norm() < POLE_EPSILON {
            return Err(GeomError::NearPole);
        }
    }
    Ok(())
}

/// `ℓ(ρ)² κ_g dθ/dt + k a(ρ) ds/dt` for a curve seen from the chart origin.
fn minkowski_integrand<C: Curve>(k: Curvature, c: &C, t: f64) -> f64 {
    match frame_from_jet(k, t, &c.jet(t)) {
        Ok(f) => {
            let l = k.ell(f.rho);
            l * l * f.kappa_g * f.dtheta_dt + k.k() * k.area_ratio(f.rho) * f.speed
        }
        Err(_) => f64::NAN,
    }
}

/// Minkowski perimeter about `origin` of a smooth closed curve (convexity
/// not required). For `k > 0` the curve must lie in the open hemisphere
/// centred at `origin`.
pub fn minkowski_perimeter(body: &ValidBody, origin: ChartPoint, tol: f64) -> Result<PerimeterReport> {
    let k = body.k();
    let c = match body.body() {
        ConvexBody::Smooth(c) => c,
        ConvexBody::Polygon(_) => return minkowski_perimeter_polygon(body, origin, tol),
        ConvexBody::Degenerate(_) => return Err(GeomError::BadInput("Minkowski needs a closed curve".into())),
    };
    let map = ChartIsometry::recentering(k, origin)?;
    let grid = (0..1024).map(|i| c.point(TAU * i as f64 / 1024.0));
    check_recentered(k, grid, &map)?;
    let mc = Mapped { curve: c, map };
    let f = |t: f64| minkowski_integrand(k, &mc, t);
    let q = integrate_periodic(f, tol);
    if !q.value.is_finite() {
        return Err(GeomError::NearPole);
    }
    let mut r = PerimeterReport::from_quad(Method::Minkowski, q)?;
    r.diagnostics.max_abs_integrand = sample_max(f, 0.0, TAU);
    Ok(r)
}

/// Minkowski perimeter of a geodesic polygon:
/// `Σ ℓ(ρᵢ)(sin α⁺ᵢ − sin α⁻ᵢ) + k Σ ∫_side a(ρ) ds`, with `α⁻ᵢ`, `α⁺ᵢ` the
/// one-sided normal angles at vertex `i`.
pub fn minkowski_perimeter_polygon(body: &ValidBody, origin: ChartPoint, tol: f64) -> Result<PerimeterReport> {
    let k = body.k();
    let v = match body.body() {
        ConvexBody::Polygon(v) => v,
        _ => return Err(GeomError::BadInput("expected a polygon".into())),
    };
    let map = ChartIsometry::recentering(k, origin)?;
    check_recentered(k, v.iter().copied(), &map)?;
    let w: Vec<ChartPoint> = v.iter().map(|&p| map.apply(p)).collect();
    let n = w.len();
    let mut terms = Vec::with_capacity(2 * n);
    let mut err = 0.0;
    let mut evals = 0;
    let mut converged = true;
    for i in 0..n {
        let (a, b) = (w[i], w[(i + 1) % n]);
        let e = b - a;
        let frame_at = |p: ChartPoint| frame_from_jet(k, 0.0, &Jet { p, d1: e, d2: ChartPoint::ORIGIN });
        let (fa, fb) = (frame_at(a)?, frame_at(b)?);
        // −d(ℓ(ρ) sin α) along the side, evaluated at its ends
        terms.push(k.ell(fa.rho) * fa.alpha.sin() - k.ell(fb.rho) * fb.alpha.sin());
        if k.k() != 0.0 {
            let f = |s: f64| {
                let p = a + s * e;
                k.k()
                    * k.area_ratio(k.from_chart_radius(p.norm()).unwrap_or(f64::NAN))
                    * crate::body::chart_speed(k, p, e)
            };
            let q = integrate_adaptive(f, 0.0, 1.0, tol / n as f64);
            err += q.error_estimate;
            evals += q.evaluations;
            converged &= q.converged;
            terms.push(q.value);
        }
    }
    PerimeterReport::from_quad(
        Method::Minkowski,
        QuadResult { value: compensated_sum(&terms), error_estimate: err, evaluations: evals, converged },
    )
}

/// Normal fans `(vertex, start angle, end angle)` of a polygon or
/// degenerate body, with increasing angles.
fn normal_fans(v: &[ChartPoint]) -> Vec<(ChartPoint, f64, f64)> {
    match v.len() {
        1 => vec![(v[0], 0.0, TAU)],
        2 => {
            let a = (v[1] - v[0]).angle();
            vec![(v[1], a - TAU / 4.0, a + TAU / 4.0), (v[0], a + TAU / 4.0, a + 3.0 * TAU / 4.0)]
        }
        n => (0..n)
            .map(|i| {
                let e_in = v[i] - v[(i + n - 1) % n];
                let e_out = v[(i + 1) % n] - v[i];
                let a = (-e_in.x).atan2(e_in.y);
                let b = (-e_out.x).atan2(e_out.y);
                (v[i], a, a + (b - a).rem_euclid(TAU))
            })
            .collect(),
    }
}

/// Unified Cauchy formula `P = ∫ ℓ(r(ω)) dω` over foot angles of support lines.
pub fn cauchy_perimeter_unified(body: &ValidBody, tol: f64) -> Result<PerimeterReport> {
    body.require_convex()?;
    let k = body.k();
    let ell_r = |h: f64| k.from_chart_radius(h).map(|r| k.ell(r)).unwrap_or(f64::NAN);
    match body.body() {
        ConvexBody::Smooth(c) => {
            let f = |w: f64| body.chart_support(w).map(|(h, _)| ell_r(h)).unwrap_or(f64::NAN);
            let q = integrate_periodic(f, tol);
            // second path: integrate over the boundary parameter instead
            let g = |t: f64| {
                let j = c.jet(t);
                let n = ChartPoint::unit(chart_normal_angle(&j));
                ell_r(n.dot(j.p)) * j.d1.cross(j.d2) / j.d1.norm_sq()
            };
            let second = integrate_periodic(g, tol);
            let mut r = PerimeterReport::from_quad(Method::CauchyOmega, q)?;
            r.diagnostics.max_abs_integrand = sample_max(f, 0.0, TAU);
            r.diagnostics.second_path = Some(second.value);
            Ok(r)
        }
        ConvexBody::Polygon(v) | ConvexBody::Degenerate(v) => {
            let mut terms = Vec::new();
            let (mut err, mut evals, mut conv) = (0.0, 0, true);
            let fans = normal_fans(v);
            for &(p, a, b) in &fans {
                let q = integrate_adaptive(|w| ell_r(ChartPoint::unit(w).dot(p)), a, b, tol / fans.len() as f64);
                terms.push(q.value);
                err += q.error_estimate;
                evals += q.evaluations;
                conv &= q.converged;
            }
            PerimeterReport::from_quad(
                Method::CauchyOmega,
                QuadResult { value: compensated_sum(&terms), error_estimate: err, evaluations: evals, converged: conv },
            )
        }
    }
}

/// Angles `φ` where the ideal point crosses the extension of a side of a
/// polygon or segment body: the kinks of `w(φ)` and `h(φ)`.
fn ideal_breakpoints(v: &[ChartPoint]) -> Vec<f64> {
    let pairs: Vec<(usize, usize)> = match v.len() {
        1 => Vec::new(),
        2 => vec![(0, 1)],
        n => (0..n).map(|i| (i, (i + 1) % n)).collect(),
    };
    let mut out = Vec::new();
    for (i, j) in pairs {
        let (p, d) = (v[i], v[j] - v[i]);
        // |p + s d|² = 1
        let a = d.norm_sq();
        let b = p.dot(d);
        let c = -crate::models::one_minus_norm_sq(p);
        let disc = (b * b - a * c).max(0.0).sqrt();
        let q = -(b + b.signum() * disc);
        for s in [q / a, c / q] {
            if s.is_finite() {
                out.push((p + s * d).angle());
            }
        }
    }
    out
}

fn integrate_over_ideal<F: Fn(f64) -> f64 + Sync>(body: &ValidBody, f: F, tol: f64) -> QuadResult {
    match body.vertices() {
        None => integrate_periodic(f, tol),
        Some(v) => {
            let breaks = ideal_breakpoints(v);
            if breaks.is_empty() {
                return integrate_periodic(f, tol);
            }
            let b0 = breaks[0];
            let mut bs: Vec<f64> = breaks.iter().map(|&b| b0 + (b - b0).rem_euclid(TAU)).collect();
            bs.sort_by(f64::total_cmp);
            bs.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
            bs.push(b0 + TAU);
            integrate_piecewise(f, &bs, tol)
        }
    }
}

fn require_hyperbolic(body: &ValidBody) -> Result<f64> {
    body.require_convex()?;
    let k = body.k().k();
    if k >= 0.0 {
        return Err(GeomError::domain("projective Cauchy formulas need k < 0"));
    }
    Ok((-k).sqrt())
}

/// `P = ½ ∫ w(φ) dφ` with `w = cot ψ1 − cot ψ2` the projected width seen
/// from the ideal point `R(φ)`.
pub fn projective_cauchy_w(body: &ValidBody, tol: f64) -> Result<PerimeterReport> {
    let s = require_hyperbolic(body)?;
    let f = |phi: f64| {
        let r = ChartPoint::unit(phi);
        0.5 * ideal_support(body, r, r).w / s
    };
    let mut rep = PerimeterReport::from_quad(Method::ProjectiveW, integrate_over_ideal(body, f, tol))?;
    rep.diagnostics.max_abs_integrand = sample_max(f, 0.0, TAU);
    Ok(rep)
}

/// `P = ∫ h(φ) dφ` with `h = cot ψ1` from the right support line. The
/// intrinsic value `√−k ℓ(r)` of `h` is compared pointwise.
pub fn projective_cauchy_h(body: &ValidBody, tol: f64) -> Result<PerimeterReport> {
    let s = require_hyperbolic(body)?;
    let k = body.k();
    let f = |phi: f64| {
        let r = ChartPoint::unit(phi);
        ideal_support(body, r, r).h / s
    };
    let mut rep = PerimeterReport::from_quad(Method::ProjectiveH, integrate_over_ideal(body, f, tol))?;
    rep.diagnostics.max_abs_integrand = sample_max(f, 0.0, TAU);
    let mut gap: f64 = 0.0;
    for i in 0..SAMPLE_GRID {
        let phi = TAU * (i as f64 + 0.5) / SAMPLE_GRID as f64;
        let sup = body.support_lines_from_ideal(phi)?;
        let r = k.from_chart_radius(sup.right.offset())?;
        gap = gap.max((sup.h - s * k.ell(r)).abs());
    }
    rep.diagnostics.pointwise_gap = Some(gap);
    Ok(rep)
}

/// The two integrands of the polar Cauchy formula at parameter `t`:
/// `ℓ(ρ)² (dω/ds) dθ/dt` with `dω/ds` from the chart normal, and
/// `κ_g ℓ(ρ)² (1 − k a(x))/(1 − k a(r)) dθ/dt` from the intrinsic frame.
pub fn cauchy_polar_integrands(body: &ValidBody, t: f64) -> Result<(f64, f64)> {
    let k = body.k();
    let j = body.jet(t)?;
    let f = frame_from_jet(k, t, &j)?;
    let nu = chart_normal_angle(&j);
    let domega_ds = j.d1.cross(j.d2) / j.d1.norm_sq() / f.speed;
    let n = ChartPoint::unit(nu);
    let h = n.dot(j.p);
    let tau = j.p.dot(n.perp());
    let eps = if k.k() == 0.0 { 0.0 } else { k.k().signum() };
    let r = k.from_chart_radius(h)?;
    let x = k.from_chart_radius(-tau / (1.0 + eps * h * h).sqrt())?;
    let l2 = k.ell(f.rho).powi(2);
    Ok((l2 * domega_ds * f.dtheta_dt, f.kappa_g * l2 * k.ell_c(x) / k.ell_c(r) * f.dtheta_dt))
}

/// Polar Cauchy formula `P = ∫ ℓ(ρ)² dω/ds dθ`; the origin must be interior.
pub fn cauchy_polar(body: &ValidBody, tol: f64) -> Result<PerimeterReport> {
    body.require_convex()?;
    let c = body.curve().ok_or_else(|| GeomError::BadInput("the polar formula needs a smooth boundary".into()))?;
    for i in 0..1024 {
        let j = c.jet(TAU * i as f64 / 1024.0);
        if !(j.p.cross(j.d1) > 0.0) || j.p.norm() < POLE_EPSILON {
            return Err(GeomError::OriginNotInterior);
        }
    }
    let f = |t: f64| cauchy_polar_integrands(body, t).map(|v| v.0).unwrap_or(f64::NAN);
    let mut rep = PerimeterReport::from_quad(Method::CauchyPolar, integrate_periodic(f, tol))?;
    let mut gap: f64 = 0.0;
    let mut big: f64 = 0.0;
    for i in 0..SAMPLE_GRID {
        let (a, b) = cauchy_polar_integrands(body, TAU * (i as f64 + 0.5) / SAMPLE_GRID as f64)?;
        gap = gap.max((a - b).abs());
        big = big.max(a.abs());
    }
    rep.diagnostics.max_abs_integrand = big;
    rep.diagnostics.pointwise_gap = Some(gap);
    Ok(rep)
}

/// Runs one method with the chart origin as the Minkowski origin.
pub fn perimeter(body: &ValidBody, method: Method, tol: f64) -> Result<PerimeterReport> {
    match method {
        Method::Arclength => arclength_perimeter(body, tol),
        Method::Minkowski => minkowski_perimeter(body, ChartPoint::ORIGIN, tol),
        Method::CauchyOmega => cauchy_perimeter_unified(body, tol),
        Method::CauchyPolar => cauchy_polar(body, tol),
        Method::ProjectiveW => projective_cauchy_w(body, tol),
        Method::ProjectiveH => projective_cauchy_h(body, tol),
    }
}

/// Contributions of one polygon side to the two perimeter formulas:
/// `(∫_side ℓ(r) dω, ∫_side k a(ρ) ds)`. The foot angle is constant along a
/// geodesic side, so the first vanishes while the second generally does not.
pub fn side_contributions(body: &ValidBody, side: usize, tol: f64) -> Result<(f64, f64)> {
    let v = match body.body() {
        ConvexBody::Polygon(v) => v,
        _ => return Err(GeomError::BadInput("expected a polygon".into())),
    };
    let n = v.len();
    if side >= n {
        return Err(GeomError::BadInput(format!("side {side} out of range")));
    }
    let k = body.k();
    let (t0, t1) = (TAU * side as f64 / n as f64, TAU * (side + 1) as f64 / n as f64);
    let inner = |t: f64| t.clamp(t0 + 1e-9, t1 - 1e-9);
    let omega = |t: f64| body.jet(inner(t)).map(|j| chart_normal_angle(&j)).unwrap_or(f64::NAN);
    let h = 1e-4 * (t1 - t0);
    let cauchy = integrate_adaptive(
        |t| {
            let j = match body.jet(t) {
                Ok(j) => j,
                Err(_) => return f64::NAN,
            };
            let nu = chart_normal_angle(&j);
            let r = k.from_chart_radius(ChartPoint::unit(nu).dot(j.p)).unwrap_or(f64::NAN);
            k.ell(r) * central_diff(omega, t, h, Stencil::Five)
        },
        t0 + 1e-9,
        t1 - 1e-9,
        tol,
    );
    let mink = integrate_adaptive(
        |t| match body.local_frame(t) {
            Ok(f) => k.k() * k.area_ratio(f.rho) * f.speed,
            Err(_) => f64::NAN,
        },
        t0 + 1e-9,
        t1 - 1e-9,
        tol,
    );
    // the excluded slivers at the ends carry the tiny remainder of the side
    let ends = [t0, t1].map(|t| body.local_frame(inner(t)).map(|f| k.area_ratio(f.rho) * f.speed));
    let sliver = k.k() * 1e-9 * (ends[0].clone()? + ends[1].clone()?);
    Ok((cauchy.value, mink.value + sliver))
}

/// `h(φ)` next to the signed inversive product of the `φ`-normal (oriented
/// towards `R(φ)`) and the right support line through `R(φ)`.
pub fn inversive_h(body: &ValidBody, phi: f64) -> Result<(f64, f64)> {
    let sup = body.support_lines_from_ideal(phi)?;
    let os = crate::models::ChartLine::from_normal(ChartPoint::unit(phi), 0.0)?;
    Ok((sup.h, crate::models::inversive_product(os, sup.right)?))
}

/// The `k = −1` triangle used to show that the Cauchy and Minkowski
/// integrands differ locally.
pub fn witness_triangle() -> ConvexBody {
    ConvexBody::Polygon(vec![ChartPoint::new(0.3, 0.0), ChartPoint::new(0.0, 0.4), ChartPoint::new(-0.2, -0.2)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::validate;
    use crate::models::chart_distance;
    use std::f64::consts::PI;

    fn circle(k: Curvature, c: ChartPoint, r: f64) -> ValidBody {
        validate(ConvexBody::Smooth(TrigCurve::circle(c, r)), k).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn isometry_preserves_distance_and_centres() {
        for k in [Curvature::HYPERBOLIC, Curvature::EUCLIDEAN, Curvature::SPHERE] {
            let o = ChartPoint::new(0.3, -0.2);
            let m = ChartIsometry::recentering(k, o).unwrap();
            assert!(m.apply(o).norm() < 1e-15);
            let (p, q) = (ChartPoint::new(-0.1, 0.5), ChartPoint::new(0.4, 0.1));
            let d0 = chart_distance(k, p, q).unwrap();
            let d1 = chart_distance(k, m.apply(p), m.apply(q)).unwrap();
            assert!((d0 - d1).abs() < 1e-14);
        }
    }

    #[test]
    fn isometry_jet_matches_finite_differences() {
        let c = TrigCurve::new(vec![0.1, 0.4, 0.02, 0.03], vec![0.0, 0.01, 0.35, 0.0, 0.02]).unwrap();
        for k in [Curvature::HYPERBOLIC, Curvature::SPHERE] {
            let m = ChartIsometry::recentering(k, ChartPoint::new(-0.2, 0.25)).unwrap();
            let mc = Mapped { curve: &c, map: m };
            let t = 1.3;
            let j = mc.jet(t);
            let dx = central_diff(|u| mc.point(u).x, t, 1e-4, Stencil::Five);
            let ddy = central_diff(|u| mc.jet(u).d1.y, t, 1e-4, Stencil::Five);
            assert!((dx - j.d1.x).abs() < 1e-10 && (ddy - j.d2.y).abs() < 1e-10);
        }
    }

    #[test]
    fn minkowski_examples() {
        let e = circle(Curvature::EUCLIDEAN, ChartPoint::new(3.0, 0.0), 2.0);
        let v = minkowski_perimeter(&e, ChartPoint::ORIGIN, 1e-12).unwrap().value;
        assert!((v - 4.0 * PI).abs() < 1e-10);
        let h = circle(Curvature::HYPERBOLIC, ChartPoint::ORIGIN, 1f64.tanh());
        let v = minkowski_perimeter(&h, ChartPoint::ORIGIN, 1e-12).unwrap().value;
        assert!(rel(v, TAU * 1f64.sinh()) < 1e-12);
        let hand = 1f64.sinh().powi(2) / 1f64.tanh() * TAU - (1f64.cosh() - 1.0) * TAU * 1f64.sinh();
        assert!(rel(hand, TAU * 1f64.sinh()) < 1e-14);
        let s = circle(Curvature::SPHERE, ChartPoint::ORIGIN, (PI / 6.0).tan());
        let v = minkowski_perimeter(&s, ChartPoint::ORIGIN, 1e-12).unwrap().value;
        assert!(rel(v, PI) < 1e-12);
        let v = minkowski_perimeter(&h, ChartPoint::new(0.5, 0.6), 1e-12).unwrap().value;
        assert!(rel(v, TAU * 1f64.sinh()) < 1e-10);
        let on = minkowski_perimeter(&h, ChartPoint::new(1f64.tanh(), 0.0), 1e-12);
        assert_eq!(on.unwrap_err().code(), "NEAR_POLE");
    }

    #[test]
    fn minkowski_polygon_examples() {
        let sq = validate(
            ConvexBody::Polygon(vec![
                ChartPoint::new(-1.0, -1.0),
                ChartPoint::new(1.0, -1.0),
                ChartPoint::new(1.0, 1.0),
                ChartPoint::new(-1.0, 1.0),
            ]),
            Curvature::EUCLIDEAN,
        )
        .unwrap();
        assert!((minkowski_perimeter_polygon(&sq, ChartPoint::ORIGIN, 1e-12).unwrap().value - 8.0).abs() < 1e-14);
        assert!(
            (minkowski_perimeter_polygon(&sq, ChartPoint::new(3.0, 1.0), 1e-12).unwrap().value - 8.0).abs() < 1e-13
        );
        let tri = validate(witness_triangle(), Curvature::HYPERBOLIC).unwrap();
        let sides = tri.arclength_perimeter(1e-12).unwrap().value;
        let v = minkowski_perimeter_polygon(&tri, ChartPoint::ORIGIN, 1e-12).unwrap().value;
        assert!((v - sides).abs() < 1e-8);
        let g = 0.2;
        let sph = validate(
            ConvexBody::Polygon(vec![
                ChartPoint::new(-g, -g),
                ChartPoint::new(g, -g),
                ChartPoint::new(g, g),
                ChartPoint::new(-g, g),
            ]),
            Curvature::SPHERE,
        )
        .unwrap();
        let sides = sph.arclength_perimeter(1e-12).unwrap().value;
        assert!((minkowski_perimeter_polygon(&sph, ChartPoint::ORIGIN, 1e-12).unwrap().value - sides).abs() < 1e-8);
    }

    #[test]
    fn unified_cauchy_examples() {
        let e = circle(Curvature::EUCLIDEAN, ChartPoint::ORIGIN, 1.0);
        assert!((cauchy_perimeter_unified(&e, 1e-12).unwrap().value - TAU).abs() < 1e-12);
        let h = circle(Curvature::HYPERBOLIC, ChartPoint::ORIGIN, 1f64.tanh());
        let r = cauchy_perimeter_unified(&h, 1e-12).unwrap();
        assert!(rel(r.value, TAU * 1f64.sinh()) < 1e-12);
        assert!(rel(r.diagnostics.second_path.unwrap(), TAU * 1f64.sinh()) < 1e-12);
        let off = circle(Curvature::EUCLIDEAN, ChartPoint::new(5.0, 0.0), 1.0);
        assert!((cauchy_perimeter_unified(&off, 1e-12).unwrap().value - TAU).abs() < 1e-11);
        let tri = validate(witness_triangle(), Curvature::HYPERBOLIC).unwrap();
        let sides = tri.arclength_perimeter(1e-12).unwrap().value;
        assert!((cauchy_perimeter_unified(&tri, 1e-12).unwrap().value - sides).abs() < 1e-10);
        let seg = validate(
            ConvexBody::Degenerate(vec![ChartPoint::new(-0.3, 0.1), ChartPoint::new(0.4, 0.2)]),
            Curvature::SPHERE,
        )
        .unwrap();
        let two = seg.arclength_perimeter(1e-12).unwrap().value;
        assert!((cauchy_perimeter_unified(&seg, 1e-12).unwrap().value - two).abs() < 1e-10);
    }

    #[test]
    fn projective_examples() {
        let k = Curvature::HYPERBOLIC;
        let h = circle(k, ChartPoint::ORIGIN, 1f64.tanh());
        let target = TAU * 1f64.sinh();
        assert!(rel(projective_cauchy_w(&h, 1e-12).unwrap().value, target) < 1e-10);
        let rh = projective_cauchy_h(&h, 1e-12).unwrap();
        assert!(rel(rh.value, target) < 1e-10);
        assert!(rh.diagnostics.pointwise_gap.unwrap() < 1e-10);
        let pt = validate(ConvexBody::Degenerate(vec![ChartPoint::new(0.2, 0.1)]), k).unwrap();
        assert!(projective_cauchy_w(&pt, 1e-12).unwrap().value.abs() < 1e-15);
        assert!(projective_cauchy_h(&pt, 1e-12).unwrap().value.abs() < 1e-12);
        let seg =
            validate(ConvexBody::Degenerate(vec![ChartPoint::new(0.0, -0.4), ChartPoint::new(0.0, 0.4)]), k).unwrap();
        let two = 2.0
            * crate::models::hyperbolic_distance_klein(ChartPoint::new(0.0, -0.4), ChartPoint::new(0.0, 0.4)).unwrap();
        assert!((projective_cauchy_w(&seg, 1e-12).unwrap().value - two).abs() < 1e-10);
        let off = circle(k, ChartPoint::new(0.5, 0.1), 0.3);
        let arc = off.arclength_perimeter(1e-13).unwrap().value;
        let hh = projective_cauchy_h(&off, 1e-12).unwrap();
        assert!(rel(hh.value, arc) < 1e-9);
        assert!((0..64).any(|i| off.support_lines_from_ideal(TAU * i as f64 / 64.0).unwrap().h < 0.0));
        assert!(projective_cauchy_w(&circle(Curvature::EUCLIDEAN, ChartPoint::ORIGIN, 0.5), 1e-8).is_err());
    }

    #[test]
    fn polar_examples() {
        let e = circle(Curvature::EUCLIDEAN, ChartPoint::ORIGIN, 1.7);
        assert!(rel(cauchy_polar(&e, 1e-12).unwrap().value, TAU * 1.7) < 1e-12);
        let h = circle(Curvature::HYPERBOLIC, ChartPoint::ORIGIN, 1f64.tanh());
        let r = cauchy_polar(&h, 1e-12).unwrap();
        assert!(rel(r.value, TAU * 1f64.sinh()) < 1e-12);
        assert!(r.diagnostics.pointwise_gap.unwrap() < 1e-10);
        let hand = 1f64.sinh().powi(2) / 1f64.tanh() / (1.0 + (1f64.cosh() - 1.0)) * TAU;
        assert!(rel(hand, TAU * 1f64.sinh()) < 1e-14);
        let off = circle(Curvature::EUCLIDEAN, ChartPoint::new(3.0, 0.0), 1.0);
        assert_eq!(cauchy_polar(&off, 1e-10).unwrap_err().code(), "ORIGIN_NOT_INTERIOR");
        // at k = 0 the polar integrand equals the Minkowski one pointwise
        let ell =
            validate(ConvexBody::Smooth(TrigCurve::ellipse(ChartPoint::new(0.2, 0.1), 1.5, 0.7)), Curvature::EUCLIDEAN)
                .unwrap();
        let c = ell.curve().unwrap();
        for t in [0.1, 1.0, 2.5, 4.0] {
            let (a, _) = cauchy_polar_integrands(&ell, t).unwrap();
            let m = minkowski_integrand(Curvature::EUCLIDEAN, c, t);
            assert!((a - m).abs() < 1e-12);
        }
    }

    #[test]
    fn h_is_an_inversive_product() {
        let body = circle(Curvature::HYPERBOLIC, ChartPoint::new(0.3, -0.1), 0.4);
        for i in 0..32 {
            let (h, ip) = inversive_h(&body, TAU * i as f64 / 32.0).unwrap();
            assert!((h - ip).abs() < 1e-9, "{h} {ip}");
        }
    }

    #[test]
    fn witness_side_contributions() {
        let tri = validate(witness_triangle(), Curvature::HYPERBOLIC).unwrap();
        for side in 0..3 {
            let (c, m) = side_contributions(&tri, side, 1e-12).unwrap();
            assert!(c.abs() < 1e-10 && m.abs() > 1e-3, "{c} {m}");
        }
    }
}
