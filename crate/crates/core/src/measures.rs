//! Relations between `dθ`, `dω`, `dφ`, `dφ̃` and `ds` along a smooth
//! boundary, the curvature formula in terms of `dω/ds`, and `dr/dω`.

use serde::{Deserialize, Serialize};

use crate::body::{chart_normal_angle, frame_from_jet, support_frame, Curve, SupportFrame, ValidBody};
use crate::curvature::Curvature;
use crate::error::{GeomError, Result};
use crate::models::ChartPoint;
use crate::quadrature::{central_diff, Stencil};

/// `ℓ(y) c(y)` through the circle curvature, with its limit 1 at `y = 0`.
fn ell_times_c(k: Curvature, y: f64) -> f64 {
    match k.circle_curvature(y.abs()) {
        Ok(c) if y != 0.0 => k.ell(y.abs()) * c,
        _ => 1.0,
    }
}

/// Both algebraic forms of the geodesic curvature from `dω/ds`:
/// `(ℓ(r)c(r) / ℓ(x)c(x)) dω/ds` and `((1 − k a(r)) / (1 − k a(x))) dω/ds`.
pub fn kappa_from_omega_forms(k: Curvature, f: &SupportFrame, domega_ds: f64) -> (f64, f64) {
    let a = ell_times_c(k, f.r) / ell_times_c(k, f.x) * domega_ds;
    let b = k.ell_c(f.r) / k.ell_c(f.x) * domega_ds;
    (a, b)
}

/// Geodesic curvature of the boundary from `dω/ds`.
pub fn kappa_from_omega(k: Curvature, f: &SupportFrame, domega_ds: f64) -> f64 {
    kappa_from_omega_forms(k, f, domega_ds).1
}

/// `dr/dω = −ℓ(r)c(r)/c(x)`, which is 0 when `x = 0`.
pub fn dr_domega(k: Curvature, f: &SupportFrame) -> f64 {
    -k.ell_c(f.r) * k.tan_k(f.x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureRatios {
    pub dtheta_ds: f64,
    pub domega_ds: f64,
    pub domega_dtheta: f64,
    /// The `φ` ratios exist only for `k < 0`.
    pub dphi_domega: Option<f64>,
    pub dphi_dtheta: Option<f64>,
    pub dphi_ds: Option<f64>,
    pub dphitilde_domega: Option<f64>,
}

impl MeasureRatios {
    pub const COLUMNS: [&'static str; 7] =
        ["dtheta_ds", "domega_ds", "domega_dtheta", "dphi_domega", "dphi_dtheta", "dphi_ds", "dphitilde_domega"];

    pub fn values(&self) -> [f64; 7] {
        let o = |v: Option<f64>| v.unwrap_or(f64::NAN);
        [
            self.dtheta_ds,
            self.domega_ds,
            self.domega_dtheta,
            o(self.dphi_domega),
            o(self.dphi_dtheta),
            o(self.dphi_ds),
            o(self.dphitilde_domega),
        ]
    }
}

impl ValidBody {
    /// Support frame of the tangent line at boundary parameter `t`.
    pub fn support_frame_at(&self, t: f64) -> Result<SupportFrame> {
        let c = self.curve().ok_or_else(|| GeomError::domain("a boundary support frame needs a smooth body"))?;
        let k = self.k();
        let j = c.jet(t);
        let omega = chart_normal_angle(&j);
        let h = ChartPoint::unit(omega).dot(j.p);
        let frame = frame_from_jet(k, t, &j)?;
        support_frame(k, omega, h, j.p, Some(frame), t)
    }
}

/// Closed-form measure ratios at boundary parameter `t`.
pub fn measure_ratios(body: &ValidBody, t: f64) -> Result<MeasureRatios> {
    let k = body.k();
    let f = body.support_frame_at(t)?;
    let (rho, kg) = (f.frame.rho, f.frame.kappa_g);
    let l2 = k.ell(rho).powi(2);
    let domega_ds = kg * k.ell_c(f.x) / k.ell_c(f.r);
    let domega_dtheta = domega_ds * l2 / k.ell(f.r);
    let (mut dphi_domega, mut dphi_dtheta, mut dphi_ds, mut dphitilde_domega) = (None, None, None, None);
    if k.k() < 0.0 {
        let q = (-k.k()).sqrt() * k.tan_k(f.x);
        dphi_domega = Some(1.0 - q);
        dphitilde_domega = Some(1.0 + q);
        dphi_dtheta = Some((1.0 - q) * kg * k.ell_c(f.x) / k.ell_c(f.r) * l2 / k.ell(f.r));
        dphi_ds = Some((1.0 - q) * domega_ds);
    }
    Ok(MeasureRatios {
        dtheta_ds: k.ell(f.r) / l2,
        domega_ds,
        domega_dtheta,
        dphi_domega,
        dphi_dtheta,
        dphi_ds,
        dphitilde_domega,
    })
}

/// `dφ/dθ` computed in the Poincaré disk from `κ_g`, `ρ`, `α` and `r`
/// (`k < 0`).
pub fn dphi_dtheta_poincare(body: &ValidBody, t: f64) -> Result<f64> {
    let k = body.k();
    if k.k() >= 0.0 {
        return Err(GeomError::domain("dφ/dθ needs k < 0"));
    }
    let s = (-k.k()).sqrt();
    let f = body.support_frame_at(t)?;
    let (rho, r) = (s * f.frame.rho, s * f.r);
    let kg = f.frame.kappa_g / s;
    Ok(kg * (rho.cosh() - f.frame.alpha.sin() * rho.sinh()) / r.cosh().powi(2) * rho.sinh().powi(2) / r.sinh())
}

/// `(θ, ω, Some((φ, φ̃)))`.
pub type BoundaryAngles = (f64, f64, Option<(f64, f64)>);

/// Boundary angles at `t` computed from raw chart geometry: the polar angle,
/// the foot angle of the tangent line, and (`k < 0`) the angles of its two
/// ideal endpoints, ordered as `(φ, φ̃)`.
pub fn boundary_angles(body: &ValidBody, t: f64) -> Result<BoundaryAngles> {
    let c = body.curve().ok_or_else(|| GeomError::domain("boundary angles need a smooth body"))?;
    let j = c.jet(t);
    let theta = j.p.angle();
    let u = j.d1.normalized();
    let omega = (-u.perp()).angle();
    let ends = if body.k().k() < 0.0 {
        // |p + λu|² = 1
        let b = j.p.dot(u);
        let cc = j.p.norm_sq() - 1.0;
        let disc = (b * b - cc).sqrt();
        let (back, fwd) = (-b - disc, -b + disc);
        Some(((j.p + back * u).angle(), (j.p + fwd * u).angle()))
    } else {
        None
    };
    Ok((theta, omega, ends))
}

/// Central-difference estimates of the same ratios, from
/// [`boundary_angles`] and the intrinsic speed at step `h` in `t`.
pub fn finite_difference_ratios(body: &ValidBody, t: f64, h: f64) -> Result<MeasureRatios> {
    let ang = |t0: f64| boundary_angles(body, t0);
    let base = ang(t)?;
    let unwrap = |a: f64, r: f64| r + crate::body::wrap_pi(a - r);
    let d = |sel: &dyn Fn(&BoundaryAngles) -> f64| {
        let r = sel(&base);
        central_diff(|u| ang(u).map(|a| unwrap(sel(&a), r)).unwrap_or(f64::NAN), t, h, Stencil::Five)
    };
    let speed = body.speed(t)?;
    let th = d(&|a| a.0);
    let om = d(&|a| a.1);
    let (mut dphi_domega, mut dphi_dtheta, mut dphi_ds, mut dphitilde_domega) = (None, None, None, None);
    if base.2.is_some() {
        let ph = d(&|a| a.2.map(|e| e.0).unwrap_or(f64::NAN));
        let pt = d(&|a| a.2.map(|e| e.1).unwrap_or(f64::NAN));
        dphi_domega = Some(ph / om);
        dphi_dtheta = Some(ph / th);
        dphi_ds = Some(ph / speed);
        dphitilde_domega = Some(pt / om);
    }
    Ok(MeasureRatios {
        dtheta_ds: th / speed,
        domega_ds: om / speed,
        domega_dtheta: om / th,
        dphi_domega,
        dphi_dtheta,
        dphi_ds,
        dphitilde_domega,
    })
}

/// `dω/ds` by a five-point central difference of the foot angle.
pub fn domega_ds_fd(body: &ValidBody, t: f64, h: f64) -> Result<f64> {
    finite_difference_ratios(body, t, h).map(|m| m.domega_ds)
}

/// `dr/dω` by central differences of `r` and `ω` along the boundary.
pub fn dr_domega_fd(body: &ValidBody, t: f64, h: f64) -> Result<f64> {
    let k = body.k();
    let r_at = |u: f64| -> f64 {
        let c = body.curve().expect("smooth body");
        let j = c.jet(u);
        let n = ChartPoint::unit(chart_normal_angle(&j));
        k.from_chart_radius(n.dot(j.p)).unwrap_or(f64::NAN)
    };
    let dr = central_diff(r_at, t, h, Stencil::Five);
    let om = finite_difference_ratios(body, t, h)?.domega_ds * body.speed(t)?;
    Ok(dr / om)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{validate, ConvexBody, TrigCurve};
    use std::f64::consts::TAU;

    fn blob(k: Curvature) -> ValidBody {
        let c = TrigCurve::new(
            vec![0.05, 0.5, 0.0, 0.04, -0.02, 0.0, 0.01],
            vec![-0.03, 0.0, 0.45, 0.03, 0.02, -0.01, 0.0],
        )
        .unwrap();
        validate(ConvexBody::Smooth(c), k).unwrap()
    }

    #[test]
    fn circle_examples() {
        for k in [Curvature::HYPERBOLIC, Curvature::EUCLIDEAN, Curvature::SPHERE] {
            let b = validate(ConvexBody::Smooth(TrigCurve::circle(ChartPoint::ORIGIN, 0.6)), k).unwrap();
            let f = b.support_frame_at(0.7).unwrap();
            assert!(f.x.abs() < 1e-14);
            let rho = f.frame.rho;
            let kg = kappa_from_omega(k, &f, 1.0 / k.ell(rho));
            assert!((kg - k.circle_curvature(rho).unwrap()).abs() < 1e-12);
            assert!(dr_domega(k, &f).abs() < 1e-14);
            let m = measure_ratios(&b, 0.7).unwrap();
            assert!((m.domega_dtheta - 1.0).abs() < 1e-12);
            if k.k() < 0.0 {
                assert!((m.dphi_domega.unwrap() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn geodesic_side_has_zero_curvature() {
        let k = Curvature::HYPERBOLIC;
        let b = blob(k);
        let f = b.support_frame_at(1.0).unwrap();
        assert_eq!(kappa_from_omega(k, &f, 0.0), 0.0);
    }

    #[test]
    fn euclidean_dr_domega_is_minus_x() {
        let k = Curvature::EUCLIDEAN;
        let b = blob(k);
        for t in [0.3, 2.0, 5.1] {
            let f = b.support_frame_at(t).unwrap();
            assert!((dr_domega(k, &f) + f.x).abs() < 1e-14);
            assert!((dr_domega_fd(&b, t, 1e-4 * TAU).unwrap() + f.x).abs() < 1e-7);
        }
    }

    #[test]
    fn curvature_and_dr_domega_match_finite_differences() {
        for k in [Curvature::HYPERBOLIC, Curvature::SPHERE, Curvature::new(-3.0).unwrap()] {
            let b = blob(k);
            for i in 0..16 {
                let t = TAU * (i as f64 + 0.3) / 16.0;
                let f = b.support_frame_at(t).unwrap();
                let (a1, a2) = kappa_from_omega_forms(k, &f, 0.8);
                assert!((a1 - a2).abs() < 1e-12);
                let fd = domega_ds_fd(&b, t, 1e-4 * TAU).unwrap();
                assert!((kappa_from_omega(k, &f, fd) - f.frame.kappa_g).abs() < 1e-6);
                assert!((dr_domega(k, &f) - dr_domega_fd(&b, t, 1e-4 * TAU).unwrap()).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn ratios_match_oracles() {
        for k in [Curvature::HYPERBOLIC, Curvature::EUCLIDEAN, Curvature::SPHERE, Curvature::new(-0.5).unwrap()] {
            let b = blob(k);
            for i in 0..16 {
                let t = TAU * (i as f64 + 0.1) / 16.0;
                let m = measure_ratios(&b, t).unwrap();
                let o = finite_difference_ratios(&b, t, 1e-4 * TAU).unwrap();
                for (x, y) in m.values().iter().zip(o.values()) {
                    assert!(x.is_nan() && y.is_nan() || (x - y).abs() < 1e-5 * (1.0 + y.abs()), "{k:?} {t} {x} {y}");
                }
                if k.k() < 0.0 {
                    assert!((m.dphi_domega.unwrap() + m.dphitilde_domega.unwrap() - 2.0).abs() < 1e-14);
                    let chain = m.dphi_domega.unwrap() * m.domega_dtheta;
                    assert!((chain - m.dphi_dtheta.unwrap()).abs() < 1e-12 * (1.0 + chain.abs()));
                    let p = dphi_dtheta_poincare(&b, t).unwrap();
                    assert!((p - m.dphi_dtheta.unwrap()).abs() < 1e-10 * (1.0 + p.abs()), "{p} {m:?}");
                    let f = b.support_frame_at(t).unwrap();
                    assert!((0.5 * (f.phi.unwrap() + f.phi_tilde.unwrap()) - f.omega).abs() < 1e-10);
                    let (_, _, ends) = boundary_angles(&b, t).unwrap();
                    let (p0, p1) = ends.unwrap();
                    assert!(crate::body::wrap_pi(p0 - f.phi.unwrap()).abs() < 1e-12);
                    assert!(crate::body::wrap_pi(p1 - f.phi_tilde.unwrap()).abs() < 1e-12);
                }
            }
        }
    }
}
