//! Fixtures shared by the benchmark targets.

use croftonlab_core::random::{interior_point, polygon_domain, rng, smooth_body};
use croftonlab_core::{validate, ChartPoint, ConvexBody, Curvature, HilbertDomain, TrigCurve, ValidBody};

/// A fixed random smooth body for each curvature regime.
pub fn smooth(k: Curvature) -> ValidBody {
    smooth_body(&mut rng(17), k)
}

/// A regular `n`-gon of chart radius `r` about the origin.
pub fn regular_polygon(n: usize, r: f64, k: Curvature) -> ValidBody {
    let v = (0..n).map(|i| ChartPoint::polar(r, std::f64::consts::TAU * i as f64 / n as f64)).collect();
    validate(ConvexBody::Polygon(v), k).unwrap()
}

pub fn square_domain() -> HilbertDomain {
    let v = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)];
    HilbertDomain::new(ConvexBody::Polygon(v.iter().map(|&(x, y)| ChartPoint::new(x, y)).collect())).unwrap()
}

pub fn ellipse_domain() -> HilbertDomain {
    HilbertDomain::new(ConvexBody::Smooth(TrigCurve::ellipse(ChartPoint::ORIGIN, 1.0, 0.6))).unwrap()
}

/// A random `n`-gon domain with two interior points.
pub fn random_polygon_domain(n: usize) -> (HilbertDomain, ChartPoint, ChartPoint) {
    let mut g = rng(23);
    let d = polygon_domain(&mut g, n);
    let (p, q) = (interior_point(&mut g, &d, 0.05), interior_point(&mut g, &d, 0.05));
    (d, p, q)
}

/// A small ellipse that fits inside every fixture domain.
pub fn inner_body() -> ValidBody {
    validate(ConvexBody::Smooth(TrigCurve::ellipse(ChartPoint::new(0.05, 0.0), 0.35, 0.2)), Curvature::EUCLIDEAN)
        .unwrap()
}
