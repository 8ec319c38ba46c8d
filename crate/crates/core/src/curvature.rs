//! Unified trigonometry for the plane of constant curvature `k`.
//!
//! For a circle of radius `r`, `ell(r)` is its circumference over 2π,
//! `area_ratio(r)` its area over 2π and `circle_curvature(r)` its geodesic
//! curvature:
//!
//! | k      | ell                | area_ratio          | circle_curvature  |
//! |--------|--------------------|---------------------|-------------------|
//! | k > 0  | sin(√k r)/√k       | (1 − cos(√k r))/k   | √k cot(√k r)      |
//! | k = 0  | r                  | r²/2                | 1/r               |
//! | k < 0  | sinh(√−k r)/√−k    | (1 − cosh(√−k r))/k | √−k coth(√−k r)   |
//!
//! Negative radii give negative `ell` and `circle_curvature`; `area_ratio`
//! is even. When `|k|·r²` is tiny the closed forms are replaced by Taylor
//! series in `k·r²` so every function is continuous through `k = 0`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{GeomError, Result};

/// Below this value of `|k|·r²` the series branch is used.
pub const SERIES_THRESHOLD: f64 = 1e-8;

/// Gaussian curvature of the ambient plane.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Curvature(pub f64);

/// The three geometric regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Spherical,
    Euclidean,
    Hyperbolic,
}

impl Curvature {
    pub const EUCLIDEAN: Curvature = Curvature(0.0);
    pub const SPHERE: Curvature = Curvature(1.0);
    pub const HYPERBOLIC: Curvature = Curvature(-1.0);

    pub fn new(k: f64) -> Result<Self> {
        if k.is_finite() {
            Ok(Curvature(k))
        } else {
            Err(GeomError::domain(format!("curvature must be finite, got {k}")))
        }
    }

    #[inline]
    pub fn k(self) -> f64 {
        self.0
    }

    pub fn regime(self) -> Regime {
        if self.0 > 0.0 {
            Regime::Spherical
        } else if self.0 < 0.0 {
            Regime::Hyperbolic
        } else {
            Regime::Euclidean
        }
    }

    /// `√|k|`, or 1 in the Euclidean plane. Chart coordinates are measured in
    /// units of `1/√|k|` for `k ≠ 0`.
    #[inline]
    pub fn chart_scale(self) -> f64 {
        if self.0 == 0.0 {
            1.0
        } else {
            self.0.abs().sqrt()
        }
    }

    #[inline]
    fn use_series(self, r: f64) -> bool {
        (self.0 * r * r).abs() < SERIES_THRESHOLD
    }

    /// Circumference of the radius-`r` circle divided by 2π.
    pub fn ell(self, r: f64) -> f64 {
        let k = self.0;
        if self.use_series(r) {
            let x = k * r * r;
            return r * (1.0 - x / 6.0 + x * x / 120.0);
        }
        let s = k.abs().sqrt();
        if k > 0.0 {
            (s * r).sin() / s
        } else {
            (s * r).sinh() / s
        }
    }

    /// Area of the radius-`|r|` disk divided by 2π.
    pub fn area_ratio(self, r: f64) -> f64 {
        let k = self.0;
        let r = r.abs();
        if self.use_series(r) {
            let x = k * r * r;
            return 0.5 * r * r * (1.0 - x / 12.0 + x * x / 360.0);
        }
        let s = k.abs().sqrt();
        // 1 − cos = 2 sin²(·/2) and cosh − 1 = 2 sinh²(·/2) avoid cancellation.
        if k > 0.0 {
            2.0 * (0.5 * s * r).sin().powi(2) / k
        } else {
            -2.0 * (0.5 * s * r).sinh().powi(2) / k
        }
    }

    /// `1 − k·a(r) = ell(r)·c(r) = ell'(r)`; even in `r`.
    pub fn ell_c(self, r: f64) -> f64 {
        let k = self.0;
        if self.use_series(r) {
            let x = k * r * r;
            return 1.0 - x / 2.0 + x * x / 24.0;
        }
        let s = k.abs().sqrt();
        if k > 0.0 {
            (s * r).cos()
        } else {
            (s * r).cosh()
        }
    }

    /// Geodesic curvature of the radius-`r` circle. Odd in `r`; pole at 0.
    pub fn circle_curvature(self, r: f64) -> Result<f64> {
        if r == 0.0 {
            return Err(GeomError::domain("circle_curvature has a pole at r = 0"));
        }
        let l = self.ell(r);
        if self.0 > 0.0 && (self.0.sqrt() * r).sin().abs() < 1e-15 {
            return Err(GeomError::domain("circle_curvature has a pole at multiples of π/√k"));
        }
        Ok(self.ell_c(r) / l)
    }

    /// `1/c(r) = ell(r)/ell'(r)`: `tan(√k r)/√k`, `r`, or `tanh(√−k r)/√−k`.
    /// Finite at `r = 0`.
    pub fn tan_k(self, r: f64) -> f64 {
        let k = self.0;
        if self.use_series(r) {
            let x = k * r * r;
            return r * (1.0 + x / 3.0 + 2.0 * x * x / 15.0);
        }
        let s = k.abs().sqrt();
        if k > 0.0 {
            (s * r).tan() / s
        } else {
            (s * r).tanh() / s
        }
    }

    /// Inverse of [`Curvature::ell`] on its principal branch.
    pub fn ell_inv(self, y: f64) -> Result<f64> {
        let k = self.0;
        if (k * y * y).abs() < SERIES_THRESHOLD {
            let x = k * y * y;
            return Ok(y * (1.0 + x / 6.0 + 3.0 * x * x / 40.0));
        }
        let s = k.abs().sqrt();
        if k > 0.0 {
            let z = s * y;
            if z.abs() > 1.0 + 1e-15 {
                return Err(GeomError::domain("ell_inv argument exceeds 1/√k"));
            }
            Ok(z.clamp(-1.0, 1.0).asin() / s)
        } else {
            Ok((s * y).asinh() / s)
        }
    }

    /// Inverse of [`Curvature::tan_k`] on its principal branch.
    pub fn tan_inv(self, y: f64) -> Result<f64> {
        let k = self.0;
        if (k * y * y).abs() < SERIES_THRESHOLD {
            let x = k * y * y;
            return Ok(y * (1.0 - x / 3.0 + x * x / 5.0));
        }
        let s = k.abs().sqrt();
        if k > 0.0 {
            Ok((s * y).atan() / s)
        } else {
            let z = s * y;
            if z.abs() >= 1.0 {
                return Err(GeomError::domain("tan_inv argument exceeds 1/√−k"));
            }
            Ok(z.atanh() / s)
        }
    }

    /// Signed intrinsic distance from the chart origin for a point at signed
    /// chart radius `u`.
    pub fn from_chart_radius(self, u: f64) -> Result<f64> {
        self.tan_inv(u / self.chart_scale())
    }

    /// Chart radius of a point at signed intrinsic distance `r` from the origin.
    pub fn to_chart_radius(self, r: f64) -> f64 {
        self.chart_scale() * self.tan_k(r)
    }

    /// Largest admissible leg of a right triangle (`π/(2√k)` on the sphere).
    pub fn max_leg(self) -> f64 {
        if self.0 > 0.0 {
            FRAC_PI_2 / self.0.sqrt()
        } else {
            f64::INFINITY
        }
    }

    /// Hypotenuse of the right triangle with legs `a`, `b`, solving
    /// `ell(c)c(c) = ell(a)c(a)·ell(b)c(b)` in closed form.
    pub fn hypotenuse(self, a: f64, b: f64) -> Result<f64> {
        if a < 0.0 || b < 0.0 || !a.is_finite() || !b.is_finite() {
            return Err(GeomError::domain("legs must be finite and non-negative"));
        }
        let k = self.0;
        if k == 0.0 {
            return Ok(a.hypot(b));
        }
        let s = k.abs().sqrt();
        if k > 0.0 {
            if a >= self.max_leg() || b >= self.max_leg() {
                return Err(GeomError::domain("spherical legs must be shorter than π/(2√k)"));
            }
            // haversines: hav c = hav a + hav b − 2 hav a hav b
            let ha = (0.5 * s * a).sin().powi(2);
            let hb = (0.5 * s * b).sin().powi(2);
            let hc = ha + hb - 2.0 * ha * hb;
            Ok(2.0 * hc.sqrt().asin() / s)
        } else {
            let sa = (0.5 * s * a).sinh().powi(2);
            let sb = (0.5 * s * b).sinh().powi(2);
            let sc = sa + sb + 2.0 * sa * sb;
            Ok(2.0 * sc.sqrt().asinh() / s)
        }
    }

    /// Right triangle from its hypotenuse and the angle `alpha` opposite leg `a`.
    ///
    /// `alpha ∈ {0, π/2}` yields a collapsed triangle with one zero leg.
    pub fn solve_right_triangle(self, hyp_c: f64, angle_alpha: f64) -> Result<RightTriangle> {
        if !(0.0..=FRAC_PI_2).contains(&angle_alpha) {
            return Err(GeomError::domain("angle must lie in [0, π/2]"));
        }
        if hyp_c < 0.0 || hyp_c >= self.max_leg() {
            return Err(GeomError::domain("hypotenuse out of range for this curvature"));
        }
        let leg_a = self.ell_inv(self.ell(hyp_c) * angle_alpha.sin())?;
        let (leg_b, angle_beta) = if angle_alpha == FRAC_PI_2 {
            (0.0, 0.0)
        } else {
            let b = self.adjacent_leg(hyp_c, leg_a, angle_alpha)?;
            // tan β = 1/(ell(a) c(b))
            (b, self.tan_k(b).atan2(self.ell(leg_a)))
        };
        Ok(RightTriangle { leg_a, leg_b, hyp_c, angle_alpha, angle_beta })
    }

    /// Leg adjacent to `alpha`: `tan_k(b) = tan_k(c) cos α`. Far out in the
    /// hyperbolic plane that relation is flat, so `ell_c(b) = ell_c(c)/ell_c(a)`
    /// is used instead.
    fn adjacent_leg(self, hyp_c: f64, leg_a: f64, angle_alpha: f64) -> Result<f64> {
        let k = self.0;
        let y = self.tan_k(hyp_c) * angle_alpha.cos();
        if k < 0.0 && (-k).sqrt() * y > 0.9 {
            let s = (-k).sqrt();
            return Ok((self.ell_c(hyp_c) / self.ell_c(leg_a)).max(1.0).acosh() / s);
        }
        self.tan_inv(y)
    }

    /// Angle of parallelism for the length `a` (hyperbolic only):
    /// `tan β = 1/(√−k ell(a))`.
    pub fn angle_of_parallelism(self, a: f64) -> Result<f64> {
        if self.0 >= 0.0 {
            return Err(GeomError::domain("angle of parallelism needs k < 0"));
        }
        if a < 0.0 {
            return Err(GeomError::domain("length must be non-negative"));
        }
        Ok(1f64.atan2((-self.0).sqrt() * self.ell(a)))
    }

    /// Side opposite `gamma` in the triangle with sides `a`, `b` enclosing
    /// `gamma` (first law of cosines).
    pub fn law_of_cosines_side(self, a: f64, b: f64, gamma: f64) -> Result<f64> {
        let k = self.0;
        if k == 0.0 {
            return Ok((a * a + b * b - 2.0 * a * b * gamma.cos()).max(0.0).sqrt());
        }
        // ell_c(c) = ell_c(a) ell_c(b) + k ell(a) ell(b) cos γ
        let lc = self.ell_c(a) * self.ell_c(b) + k * self.ell(a) * self.ell(b) * gamma.cos();
        let s = k.abs().sqrt();
        if k > 0.0 {
            if lc.abs() > 1.0 + 1e-14 {
                return Err(GeomError::domain("no spherical triangle with these data"));
            }
            Ok(lc.clamp(-1.0, 1.0).acos() / s)
        } else {
            Ok(lc.max(1.0).acosh() / s)
        }
    }
}

/// A right triangle (right angle opposite `hyp_c`). Legs may be zero for
/// collapsed triangles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RightTriangle {
    pub leg_a: f64,
    pub leg_b: f64,
    pub hyp_c: f64,
    pub angle_alpha: f64,
    pub angle_beta: f64,
}

impl RightTriangle {
    /// Residual of `ell(c)c(c) = ell(a)c(a)·ell(b)c(b)`.
    pub fn pythagoras_residual(&self, k: Curvature) -> f64 {
        (k.ell_c(self.hyp_c) - k.ell_c(self.leg_a) * k.ell_c(self.leg_b)).abs()
    }

    /// Largest deviation among the ratios `ell(a)/sin α`, `ell(b)/sin β`,
    /// `ell(c)`, skipping ratios with a vanishing angle.
    pub fn law_of_sines_residual(&self, k: Curvature) -> f64 {
        let c = k.ell(self.hyp_c);
        let mut worst: f64 = 0.0;
        for (side, angle) in [(self.leg_a, self.angle_alpha), (self.leg_b, self.angle_beta)] {
            let s = angle.sin();
            if s > 1e-8 {
                worst = worst.max((k.ell(side) / s - c).abs());
            } else {
                worst = worst.max(k.ell(side).abs());
            }
        }
        worst
    }

    /// Residuals of the four right-triangle identities
    /// `sin β = ell(b)/ell(c)`, `cos β·c(a) = c(c)`, `tan β·ell(a)c(b) = 1`,
    /// `cos β = ell(b)c(b) sin α`, written in pole-free multiplied-out form.
    pub fn identity_residuals(&self, k: Curvature) -> [f64; 4] {
        let (a, b, c) = (self.leg_a, self.leg_b, self.hyp_c);
        let (sb, cb) = self.angle_beta.sin_cos();
        // cos β = c(c)/c(a)      ⇔  cos β · ell_c(a) · ell(c) = ell_c(c) · ell(a)
        // tan β = 1/(ell(a)c(b)) ⇔  sin β · ell(a) · ell_c(b) = cos β · ell(b)
        [
            (sb * k.ell(c) - k.ell(b)).abs(),
            (cb * k.ell_c(a) * k.ell(c) - k.ell_c(c) * k.ell(a)).abs(),
            (sb * k.ell(a) * k.ell_c(b) - cb * k.ell(b)).abs(),
            (cb - k.ell_c(b) * self.angle_alpha.sin()).abs(),
        ]
    }
}
