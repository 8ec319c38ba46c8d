//! The Hilbert metric of a bounded convex domain, its Cauchy perimeter
//! formula and the Crofton measure on oriented lines.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::body::{ideal_support, validate, ConvexBody, Curve, TrigCurve, ValidBody};
use crate::curvature::Curvature;
use crate::error::{GeomError, Result};
use crate::models::{
    canonical_pair, compensated_sum, cross_exact, norm_sq_minus_sq, one_minus_norm_sq, ChartLine, ChartPoint,
};
use crate::quadrature::{find_root_monotone, integrate_periodic, integrate_piecewise, pairwise_sum, QuadResult};

/// Points closer than this to the boundary (along the chord) are rejected.
pub const INTERIOR_MARGIN: f64 = 1e-12;

const CHORD_GRID: usize = 1024;
const ARC_GRID: usize = 256;

/// Number of line samples per independent random stream.
pub const MC_CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regularity {
    Polygon,
    SmoothPositiveCurvature,
}

#[derive(Debug, Clone)]
struct Edge {
    start: ChartPoint,
    dir: ChartPoint,
    len: f64,
    normal: ChartPoint,
}

impl Edge {
    /// Distance of `p` to the edge line, positive inside.
    fn slack(&self, p: ChartPoint) -> f64 {
        cross_exact(self.dir, p - self.start) / self.len
    }
}

/// A bounded convex domain carrying its Hilbert metric.
#[derive(Debug, Clone)]
pub struct HilbertDomain {
    body: ValidBody,
    edges: Vec<Edge>,
    // degree-one boundary: centre and inverse of the affine part
    ellipse: Option<(ChartPoint, [[f64; 2]; 2])>,
    // boundary samples (t, p(t)) closed by the t = 2π entry
    grid: Vec<(f64, ChartPoint)>,
    // cumulative Euclidean arclength at ARC_GRID + 1 equispaced parameters
    arc: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Chord {
    // −a and b − 1 for the chord A = P + aD, B = P + bD through P and Q = P + D
    neg_a: f64,
    b_minus_1: f64,
}

impl HilbertDomain {
    pub fn new(boundary: ConvexBody) -> Result<Self> {
        if matches!(boundary, ConvexBody::Degenerate(_)) {
            return Err(GeomError::BadInput("a Hilbert domain needs nonempty interior".into()));
        }
        let body = validate(boundary, Curvature::EUCLIDEAN)?;
        let mut d = HilbertDomain { body, edges: Vec::new(), ellipse: None, grid: Vec::new(), arc: Vec::new() };
        match d.body.body().clone() {
            ConvexBody::Polygon(v) => {
                let n = v.len();
                d.edges = (0..n)
                    .map(|i| {
                        let dir = v[(i + 1) % n] - v[i];
                        let len = dir.norm();
                        Edge { start: v[i], dir, len, normal: ChartPoint::new(dir.y / len, -dir.x / len) }
                    })
                    .collect();
            }
            ConvexBody::Smooth(c) => {
                if let Some((center, m)) = c.affine_parts() {
                    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
                    let inv = [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]];
                    d.ellipse = Some((center, inv));
                }
                d.grid = (0..=CHORD_GRID)
                    .map(|i| TAU * i as f64 / CHORD_GRID as f64)
                    .map(|t| (t, c.point(t % TAU)))
                    .collect();
                let h = TAU / ARC_GRID as f64;
                let speed = |t: f64| c.jet(t).d1.norm();
                let mut acc = vec![0.0];
                let mut total = 0.0;
                for i in 0..ARC_GRID {
                    total +=
                        crate::quadrature::integrate_adaptive(speed, i as f64 * h, (i + 1) as f64 * h, 1e-15).value;
                    acc.push(total);
                }
                d.arc = acc;
            }
            ConvexBody::Degenerate(_) => unreachable!(),
        }
        Ok(d)
    }

    /// The unit disk, whose Hilbert metric is the Klein model of curvature −1.
    pub fn unit_disk() -> Self {
        HilbertDomain::new(ConvexBody::Smooth(TrigCurve::circle(ChartPoint::ORIGIN, 1.0))).expect("unit disk")
    }

    pub fn boundary(&self) -> &ValidBody {
        &self.body
    }

    pub fn regularity(&self) -> Regularity {
        if self.edges.is_empty() {
            Regularity::SmoothPositiveCurvature
        } else {
            Regularity::Polygon
        }
    }

    /// Euclidean length of the boundary.
    pub fn boundary_length(&self) -> f64 {
        match self.arc.last() {
            Some(&l) => l,
            None => self.edges.iter().map(|e| e.len).sum(),
        }
    }

    fn smooth_curve(&self) -> &TrigCurve {
        self.body.curve().expect("smooth domain")
    }

    fn affine_to_unit(&self, p: ChartPoint) -> ChartPoint {
        let (c, m) = self.ellipse.expect("ellipse");
        let d = p - c;
        ChartPoint::new(m[0][0] * d.x + m[0][1] * d.y, m[1][0] * d.x + m[1][1] * d.y)
    }

    fn affine_dir(&self, d: ChartPoint) -> ChartPoint {
        let (_, m) = self.ellipse.expect("ellipse");
        ChartPoint::new(m[0][0] * d.x + m[0][1] * d.y, m[1][0] * d.x + m[1][1] * d.y)
    }

    /// Boundary parameters `(t_A, t_B)` where the line `p + s·dir` leaves the
    /// smooth domain backwards and forwards.
    fn boundary_params(&self, p: ChartPoint, dir: ChartPoint) -> Result<(f64, f64)> {
        let c = self.smooth_curve();
        if self.ellipse.is_some() {
            let (na, bm) = self.ellipse_roots(p, p + dir)?;
            let a = self.affine_to_unit(p - na * dir);
            let b = self.affine_to_unit(p + (1.0 + bm) * dir);
            return Ok((a.angle(), b.angle()));
        }
        let u = dir.normalized();
        let g = |t: f64| cross_exact(c.point(t % TAU) - p, u);
        let vals: Vec<f64> = self.grid.iter().map(|&(_, q)| cross_exact(q - p, u)).collect();
        let mut roots = Vec::with_capacity(2);
        for i in 0..CHORD_GRID {
            let (g0, g1) = (vals[i], vals[i + 1]);
            // zero counts as negative, so a grid node on the line is found once
            if (g0 > 0.0) != (g1 > 0.0) {
                let (lo, hi) = (self.grid[i].0, self.grid[i + 1].0);
                let mut t = find_root_monotone(g, lo, hi, 1e-15)?;
                // one Newton polish
                let d = c.jet(t).d1.cross(u);
                if d != 0.0 {
                    let step = g(t) / d;
                    if step.abs() < hi - lo {
                        t -= step;
                    }
                }
                roots.push(t);
            }
        }
        if roots.len() != 2 {
            return Err(GeomError::NotInterior);
        }
        let s = |t: f64| (c.point(t) - p).dot(dir);
        if s(roots[0]) < s(roots[1]) {
            Ok((roots[0], roots[1]))
        } else {
            Ok((roots[1], roots[0]))
        }
    }

    fn ellipse_roots(&self, p: ChartPoint, q: ChartPoint) -> Result<(f64, f64)> {
        let u = self.affine_to_unit(p);
        let v = self.affine_to_unit(q);
        let e = self.affine_dir(q - p);
        let ee = e.norm_sq();
        let (fu, fv) = (one_minus_norm_sq(u), one_minus_norm_sq(v));
        if !(fu > 0.0 && fv > 0.0) {
            return Err(GeomError::NotInterior);
        }
        let du = norm_sq_minus_sq(e, cross_exact(u, e)).max(0.0).sqrt();
        let dv = norm_sq_minus_sq(e, cross_exact(v, e)).max(0.0).sqrt();
        let bu = u.dot(e);
        let bv = v.dot(e);
        let neg_a = if bu >= 0.0 { (bu + du) / ee } else { fu / (du - bu) };
        let b_minus_1 = if bv <= 0.0 { (dv - bv) / ee } else { fv / (dv + bv) };
        Ok((neg_a, b_minus_1))
    }

    fn chord(&self, p: ChartPoint, q: ChartPoint) -> Result<Chord> {
        let d = q - p;
        let (neg_a, b_minus_1) = if !self.edges.is_empty() {
            let mut neg_a = f64::INFINITY;
            let mut bm = f64::INFINITY;
            for e in &self.edges {
                let (sp, sq) = (e.slack(p), e.slack(q));
                if !(sp > INTERIOR_MARGIN && sq > INTERIOR_MARGIN) {
                    return Err(GeomError::NotInterior);
                }
                let nd = e.normal.dot(d);
                if nd < 0.0 {
                    neg_a = neg_a.min(sp / -nd);
                } else if nd > 0.0 {
                    bm = bm.min(sq / nd);
                }
            }
            (neg_a, bm)
        } else if self.ellipse.is_some() {
            self.ellipse_roots(p, q)?
        } else {
            let c = self.smooth_curve();
            let (ta, tb) = self.boundary_params(p, d)?;
            let dd = d.norm_sq();
            ((p - c.point(ta)).dot(d) / dd, (c.point(tb) - q).dot(d) / dd)
        };
        let len = d.norm();
        if !(neg_a * len > INTERIOR_MARGIN && b_minus_1 * len > INTERIOR_MARGIN) {
            return Err(GeomError::NotInterior);
        }
        Ok(Chord { neg_a, b_minus_1 })
    }

    /// Whether `p` lies inside the domain, away from the boundary.
    pub fn contains(&self, p: ChartPoint) -> bool {
        if !p.is_finite() {
            return false;
        }
        if !self.edges.is_empty() {
            return self.edges.iter().all(|e| e.slack(p) > INTERIOR_MARGIN);
        }
        if self.ellipse.is_some() {
            return one_minus_norm_sq(self.affine_to_unit(p)) > 0.0
                && self.chord(p, p + ChartPoint::new(1e-3, 0.0)).is_ok();
        }
        match self.boundary_params(p, ChartPoint::new(1.0, 0.0)) {
            Ok((ta, tb)) => {
                let c = self.smooth_curve();
                (p - c.point(ta)).x > INTERIOR_MARGIN && (c.point(tb) - p).x > INTERIOR_MARGIN
            }
            Err(_) => false,
        }
    }

    /// Whether a body lies strictly inside the domain (checked on its
    /// vertices, or on a 1024-point boundary sample).
    pub fn contains_body(&self, k: &ValidBody) -> bool {
        match k.vertices() {
            Some(v) => v.iter().all(|&p| self.contains(p)),
            None => (0..1024).all(|i| self.contains(k.point(TAU * i as f64 / 1024.0))),
        }
    }

    /// Boundary point with outward normal angle `phi`, and whether it is
    /// ambiguous (a flat edge, represented by its midpoint).
    pub fn support_point(&self, phi: f64) -> Result<(ChartPoint, bool)> {
        let s = self.body.support_line_at_omega(phi)?;
        Ok((s.contact, s.edge_contact))
    }

    /// Euclidean boundary curvature `κ` and parameter at arclength `s`.
    pub fn curvature_at_arclength(&self, s: f64) -> Result<(f64, f64)> {
        if self.arc.is_empty() {
            return Err(GeomError::domain("curvature density needs a smooth domain"));
        }
        let l = self.boundary_length();
        let s = s.rem_euclid(l);
        let i = self.arc.partition_point(|&a| a <= s).clamp(1, ARC_GRID) - 1;
        let h = TAU / ARC_GRID as f64;
        let c = self.smooth_curve();
        let t0 = i as f64 * h;
        let base = self.arc[i];
        let f = |t: f64| base + crate::quadrature::integrate_adaptive(|u| c.jet(u).d1.norm(), t0, t, 1e-15).value - s;
        let t = find_root_monotone(f, t0, t0 + h, 1e-15)?;
        let j = c.jet(t);
        Ok((j.d1.cross(j.d2) / j.d1.norm().powi(3), t))
    }
}

/// Hilbert distance `½ log((AQ/AP)(BP/BQ))`.
pub fn hilbert_distance(d: &HilbertDomain, p: ChartPoint, q: ChartPoint) -> Result<f64> {
    if p == q {
        if !d.contains(p) {
            return Err(GeomError::NotInterior);
        }
        return Ok(0.0);
    }
    let (p, q) = canonical_pair(p, q);
    let c = d.chord(p, q)?;
    Ok(0.5 * ((1.0 / c.neg_a).ln_1p() + (1.0 / c.b_minus_1).ln_1p()))
}

/// Projective pseudometric of the angle at `c` bounded by the lines `v` and
/// `w`: `½ |log((VP/VQ)(WQ/WP))|` with `VP` the homogeneous pairing of the
/// line `v` with `P`.
pub fn vertex_pseudometric(c: ChartPoint, v: ChartLine, w: ChartLine, p: ChartPoint, q: ChartPoint) -> Result<f64> {
    let scale = 1e-9 * (1.0 + c.norm());
    if v.side(c).abs() > scale || w.side(c).abs() > scale {
        return Err(GeomError::domain("side lines must pass through the vertex"));
    }
    let (vp, vq, wp, wq) = (v.side(p), v.side(q), w.side(p), w.side(q));
    if vp * vq <= 0.0 || wp * wq <= 0.0 {
        return Err(GeomError::domain("points must lie strictly inside the angle"));
    }
    Ok(0.5 * ((vp / vq).ln() + (wq / wp).ln()).abs())
}

/// Per-vertex pseudometrics `dᵢ(P, Q)` of a polygon domain, and the side of
/// the line `PQ` each vertex lies on (+1 left, −1 right, 0 on it).
pub fn vertex_terms(d: &HilbertDomain, p: ChartPoint, q: ChartPoint) -> Result<Vec<(f64, i8)>> {
    if d.edges.is_empty() {
        return Err(GeomError::domain("the discrete Cauchy sum needs a polygon domain"));
    }
    if !d.contains(p) || !d.contains(q) {
        return Err(GeomError::NotInterior);
    }
    let n = d.edges.len();
    let logs: Vec<f64> = d.edges.iter().map(|e| e.slack(p).ln() - e.slack(q).ln()).collect();
    let dir = q - p;
    Ok((0..n)
        .map(|i| {
            let term = 0.5 * (logs[(i + n - 1) % n] - logs[i]).abs();
            let side = cross_exact(dir, d.edges[i].start - p);
            let s = if term == 0.0 || side == 0.0 {
                0
            } else if side > 0.0 {
                1
            } else {
                -1
            };
            (term, s)
        })
        .collect())
}

/// `½ Σ dᵢ(P, Q)` over the vertices of a polygon domain.
pub fn discrete_cauchy_distance(d: &HilbertDomain, p: ChartPoint, q: ChartPoint) -> Result<f64> {
    let t: Vec<f64> = vertex_terms(d, p, q)?.into_iter().map(|(v, _)| v).collect();
    Ok(0.5 * compensated_sum(&t))
}

/// Sums of `dᵢ` over the vertices left and right of the line `PQ`; each
/// equals the Hilbert distance.
pub fn discrete_cauchy_one_sided(d: &HilbertDomain, p: ChartPoint, q: ChartPoint) -> Result<(f64, f64)> {
    let terms = vertex_terms(d, p, q)?;
    let side = |s: i8| compensated_sum(&terms.iter().filter(|t| t.1 == s).map(|t| t.0).collect::<Vec<_>>());
    Ok((side(1), side(-1)))
}

/// `∫₀^γ (cot(α − φ) − cot(β − φ)) dφ = log(sin α sin(β − γ) / (sin β sin(α − γ)))`.
pub fn angle_arc_integral(alpha: f64, beta: f64, gamma: f64) -> Result<f64> {
    let s = [alpha.sin(), (beta - gamma).sin(), beta.sin(), (alpha - gamma).sin()];
    if s.iter().any(|&v| !(v > 0.0)) {
        return Err(GeomError::domain("angle arc integral needs positive sines"));
    }
    if gamma == 0.0 || alpha == beta {
        return Ok(0.0);
    }
    Ok(s[0].ln() + s[1].ln() - s[2].ln() - s[3].ln())
}

/// Extreme angles subtended by a body at a domain boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiAngles {
    pub psi1: f64,
    pub psi2: f64,
    /// The support point `R(φ)` was not unique; the edge midpoint was used.
    pub nonunique_r: bool,
}

/// ψ-angles of `k` seen from the boundary point of `d` with outward normal
/// angle `phi`.
pub fn psi_angles(d: &HilbertDomain, k: &ValidBody, phi: f64) -> Result<PsiAngles> {
    let (r, nonunique_r) = d.support_point(phi)?;
    let s = ideal_support(k, r, ChartPoint::unit(phi));
    Ok(PsiAngles { psi1: s.psi1, psi2: s.psi2, nonunique_r })
}

fn check_inside(d: &HilbertDomain, k: &ValidBody) -> Result<()> {
    if k.k() != Curvature::EUCLIDEAN {
        return Err(GeomError::BadInput("bodies in a Hilbert domain live in the Euclidean chart".into()));
    }
    if !d.contains_body(k) {
        return Err(GeomError::domain("body must lie strictly inside the domain"));
    }
    Ok(())
}

/// Width `cot ψ1 − cot ψ2` at the boundary point with normal angle `phi`.
fn psi_width(d: &HilbertDomain, k: &ValidBody, phi: f64) -> f64 {
    match d.support_point(phi) {
        Ok((r, _)) => ideal_support(k, r, ChartPoint::unit(phi)).w,
        Err(_) => f64::NAN,
    }
}

/// Hilbert perimeter `½ ∫ (cot ψ1 − cot ψ2) dφ`.
pub fn cauchy_perimeter_hilbert(d: &HilbertDomain, k: &ValidBody, tol: f64) -> Result<QuadResult> {
    check_inside(d, k)?;
    if let ConvexBody::Polygon(v) = d.body.body() {
        let n = v.len();
        let mut terms = Vec::with_capacity(n);
        for (i, &vertex) in v.iter().enumerate() {
            let e_in = &d.edges[(i + n - 1) % n];
            let e_out = &d.edges[i];
            let gamma = e_in.normal.cross(e_out.normal).atan2(e_in.normal.dot(e_out.normal));
            let s = ideal_support(k, vertex, e_in.normal);
            terms.push(0.5 * angle_arc_integral(s.psi1, s.psi2, gamma)?);
        }
        return Ok(QuadResult { value: compensated_sum(&terms), error_estimate: 0.0, evaluations: n, converged: true });
    }
    let f = |phi: f64| 0.5 * psi_width(d, k, phi);
    if k.is_smooth() {
        return Ok(integrate_periodic(f, tol));
    }
    // kinks where R(φ) crosses the extension of an edge of K
    let v = k.vertices().expect("polygon");
    let pairs: Vec<(usize, usize)> = match v.len() {
        1 => Vec::new(),
        2 => vec![(0, 1)],
        m => (0..m).map(|i| (i, (i + 1) % m)).collect(),
    };
    let c = d.smooth_curve();
    let mut breaks = Vec::new();
    for (i, j) in pairs {
        let (ta, tb) = d.boundary_params(v[i], v[j] - v[i])?;
        for t in [ta, tb] {
            let jet = c.jet(t);
            breaks.push((-jet.d1.x).atan2(jet.d1.y));
        }
    }
    if breaks.is_empty() {
        return Ok(integrate_periodic(f, tol));
    }
    let b0 = breaks[0];
    let mut bs: Vec<f64> = breaks.iter().map(|&b| b0 + (b - b0).rem_euclid(TAU)).collect();
    bs.sort_by(f64::total_cmp);
    bs.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    bs.push(b0 + TAU);
    Ok(integrate_piecewise(f, &bs, tol))
}

/// Crofton density `½ κ(s) csc² ψ` at arclength `s` of a smooth domain.
pub fn crofton_density(d: &HilbertDomain, s: f64, psi: f64) -> Result<f64> {
    if !(psi > 0.0 && psi < PI) {
        return Err(GeomError::domain("psi must lie in (0, π)"));
    }
    let (kappa, _) = d.curvature_at_arclength(s)?;
    Ok(0.5 * kappa / psi.sin().powi(2))
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McResult {
    pub estimate: f64,
    pub std_error: f64,
    pub n: usize,
    pub seed: u64,
}

/// A sampled oriented line: its entry point, direction and Crofton weight
/// (density over the sampling density).
fn sample_line(c: &TrigCurve, rng: &mut ChaCha8Rng) -> (ChartPoint, ChartPoint, f64) {
    let t = TAU * rng.random::<f64>();
    let psi = PI * rng.random::<f64>();
    let j = c.jet(t);
    let speed2 = j.d1.norm_sq();
    let dphi_dt = j.d1.cross(j.d2) / speed2;
    let weight = 0.5 * dphi_dt / psi.sin().powi(2) * TAU * PI;
    let dir = (1.0 / speed2.sqrt()) * j.d1;
    (j.p, dir.rotated(psi), weight)
}

/// Runs `score` on `n` sampled oriented lines and returns `½ E[score·weight]`.
fn crofton_mc<F>(d: &HilbertDomain, n: usize, seed: u64, score: F) -> Result<McResult>
where
    F: Fn(ChartPoint, ChartPoint) -> f64 + Sync,
{
    if d.regularity() != Regularity::SmoothPositiveCurvature {
        return Err(GeomError::domain("Crofton sampling needs a smooth domain"));
    }
    if n == 0 {
        return Err(GeomError::BadInput("at least one sample is required".into()));
    }
    let c = d.smooth_curve();
    let chunks = n.div_ceil(MC_CHUNK);
    let partial: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let m = MC_CHUNK.min(n - chunk * MC_CHUNK);
            let mut xs = Vec::with_capacity(m);
            for _ in 0..m {
                let (b, u, w) = sample_line(c, &mut rng);
                let s = score(b, u);
                xs.push(if s == 0.0 { 0.0 } else { s * w });
            }
            let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
            (pairwise_sum(&xs), pairwise_sum(&sq))
        })
        .collect();
    let sum = compensated_sum(&partial.iter().map(|p| p.0).collect::<Vec<_>>());
    let sum_sq = compensated_sum(&partial.iter().map(|p| p.1).collect::<Vec<_>>());
    let nf = n as f64;
    let mean = sum / nf;
    let var = if n > 1 { ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0) } else { 0.0 };
    Ok(McResult { estimate: 0.5 * mean, std_error: 0.5 * (var / nf).sqrt(), n, seed })
}

fn crosses(b: ChartPoint, u: ChartPoint, p: ChartPoint, q: ChartPoint) -> bool {
    (u.cross(p - b) > 0.0) != (u.cross(q - b) > 0.0)
}

/// Crofton estimate of the Hilbert length of a polyline, `½ ∫ n(ℓ) dη(ℓ)`,
/// over oriented lines sampled uniformly in `(t, ψ)`. Deterministic for a
/// given seed whatever the number of worker threads.
pub fn crofton_length_mc(d: &HilbertDomain, curve: &[ChartPoint], n: usize, seed: u64) -> Result<McResult> {
    if curve.iter().any(|&p| !d.contains(p)) {
        return Err(GeomError::NotInterior);
    }
    crofton_mc(d, n, seed, |b, u| curve.windows(2).filter(|w| crosses(b, u, w[0], w[1])).count() as f64)
}

/// Oriented Crofton distance: half the measure of the oriented lines that
/// cut `PQ` with direction less than π counterclockwise from `Q − P`.
/// Every unoriented cutting line is met once, so the value is half the
/// Hilbert distance.
pub fn crofton_oriented_distance_mc(
    d: &HilbertDomain,
    p: ChartPoint,
    q: ChartPoint,
    n: usize,
    seed: u64,
) -> Result<McResult> {
    if !d.contains(p) || !d.contains(q) {
        return Err(GeomError::NotInterior);
    }
    let dir = q - p;
    crofton_mc(d, n, seed, |b, u| if dir.cross(u) > 0.0 && crosses(b, u, p, q) { 1.0 } else { 0.0 })
}

/// Hilbert length of the polygon inscribed in `∂K` at `n` equispaced
/// parameters (the vertices themselves for polygons and degenerate bodies).
pub fn hilbert_perimeter_oracle(d: &HilbertDomain, k: &ValidBody, n: usize) -> Result<f64> {
    if n < 3 {
        return Err(GeomError::BadInput("the inscribed polygon needs at least three vertices".into()));
    }
    check_inside(d, k)?;
    let pts: Vec<ChartPoint> = match k.vertices() {
        Some(v) => v.to_vec(),
        None => (0..n).map(|i| k.point(TAU * i as f64 / n as f64)).collect(),
    };
    let m = pts.len();
    if m == 1 {
        return Ok(0.0);
    }
    let sides: Result<Vec<f64>> =
        (0..m).into_par_iter().map(|i| hilbert_distance(d, pts[i], pts[(i + 1) % m])).collect();
    Ok(pairwise_sum(&sides?))
}

/// `ψ`-width integrand `½(cot ψ1 − cot ψ2)` at `phi`, exposed for checks.
pub fn cauchy_integrand(d: &HilbertDomain, k: &ValidBody, phi: f64) -> f64 {
    0.5 * psi_width(d, k, phi)
}
