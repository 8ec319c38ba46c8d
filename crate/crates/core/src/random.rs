//! Seeded generators for test bodies, domains and points.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::body::{validate, ConvexBody, TrigCurve, ValidBody};
use crate::curvature::Curvature;
use crate::hilbert::HilbertDomain;
use crate::models::ChartPoint;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Chart-radius scale of random bodies for curvature `k`: well inside the
/// Klein disk, and well inside the hemisphere.
fn body_scale(k: Curvature) -> f64 {
    match k.k() {
        x if x < 0.0 => 0.45,
        x if x > 0.0 => 0.6,
        _ => 1.0,
    }
}

/// A random smooth strictly convex trigonometric body containing the
/// chart origin: a rotated ellipse with small higher harmonics.
pub fn smooth_body<R: Rng>(rng: &mut R, k: Curvature) -> ValidBody {
    let s = body_scale(k);
    loop {
        let a = s * rng.random_range(0.5..1.0);
        let b = a * rng.random_range(0.55..1.0);
        let rot = rng.random_range(0.0..PI);
        let centre = (0.5 * b) * ChartPoint::new(rng.random_range(-0.25..0.25), rng.random_range(-0.25..0.25));
        let (c, sn) = (rot.cos(), rot.sin());
        let mut x = vec![centre.x, a * c, -b * sn];
        let mut y = vec![centre.y, a * sn, b * c];
        for j in 2..=4 {
            let amp = 0.25 * b / (j * j) as f64;
            for v in [&mut x, &mut y] {
                v.push(amp * rng.random_range(-1.0..1.0));
                v.push(amp * rng.random_range(-1.0..1.0));
            }
        }
        let curve = match TrigCurve::new(x, y) {
            Ok(c) => c,
            Err(_) => continue,
        };
        if let Ok(v) = validate(ConvexBody::Smooth(curve), k) {
            if (0..256).all(|i| {
                let t = TAU * i as f64 / 256.0;
                let j = crate::body::Curve::jet(v.curve().unwrap(), t);
                j.p.cross(j.d1) > 0.02 * b * b
            }) {
                return v;
            }
        }
    }
}

/// Vertices of a random convex polygon inscribed in an affinely
/// distorted circle, counterclockwise, containing the origin.
pub fn polygon_vertices<R: Rng>(rng: &mut R, n: usize) -> Vec<ChartPoint> {
    loop {
        let mut ang: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..TAU)).collect();
        ang.sort_by(f64::total_cmp);
        let gap_ok = (0..n).all(|i| {
            let next = if i + 1 == n { ang[0] + TAU } else { ang[i + 1] };
            let g = next - ang[i];
            g > 0.05 && g < PI - 0.1
        });
        if !gap_ok {
            continue;
        }
        let m = [
            [rng.random_range(0.7..1.3), rng.random_range(-0.3..0.3)],
            [rng.random_range(-0.3..0.3), rng.random_range(0.7..1.3)],
        ];
        if m[0][0] * m[1][1] - m[0][1] * m[1][0] < 0.3 {
            continue;
        }
        return ang
            .iter()
            .map(|&a| {
                let (c, s) = (a.cos(), a.sin());
                ChartPoint::new(m[0][0] * c + m[0][1] * s, m[1][0] * c + m[1][1] * s)
            })
            .collect();
    }
}

pub fn polygon_domain<R: Rng>(rng: &mut R, n: usize) -> HilbertDomain {
    loop {
        let v = polygon_vertices(rng, n);
        if let Ok(d) = HilbertDomain::new(ConvexBody::Polygon(v)) {
            return d;
        }
    }
}

/// A random smooth strictly convex domain with non-elliptic boundary.
pub fn smooth_domain<R: Rng>(rng: &mut R) -> HilbertDomain {
    loop {
        let b = smooth_body(rng, Curvature::EUCLIDEAN);
        if let Ok(d) = HilbertDomain::new(b.body().clone()) {
            return d;
        }
    }
}

/// A point uniform in the disk of radius `r` about `c`.
pub fn point_in_disk<R: Rng>(rng: &mut R, c: ChartPoint, r: f64) -> ChartPoint {
    let rad = r * rng.random_range(0.0f64..1.0).sqrt();
    c + ChartPoint::polar(rad, rng.random_range(0.0..TAU))
}

/// A point of the domain at least `margin` (relative) inside it, by
/// rejection from the bounding box.
pub fn interior_point<R: Rng>(rng: &mut R, d: &HilbertDomain, margin: f64) -> ChartPoint {
    let pts: Vec<ChartPoint> = (0..256).map(|i| d.boundary().point(TAU * i as f64 / 256.0)).collect();
    let (mut lo, mut hi) = (pts[0], pts[0]);
    for p in &pts {
        lo = ChartPoint::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = ChartPoint::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let c = 0.5 * (lo + hi);
    loop {
        let p = ChartPoint::new(rng.random_range(lo.x..hi.x), rng.random_range(lo.y..hi.y));
        let q = c + (1.0 + margin) * (p - c);
        if d.contains(q) && d.contains(p) {
            return p;
        }
    }
}
