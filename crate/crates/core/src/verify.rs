//! Property suites: each check reports the largest deviation it saw and the
//! threshold it must stay under.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::body::{validate, validate_closed_curve, ConvexBody, Curve, TrigCurve, ValidBody};
use crate::curvature::Curvature;
use crate::hilbert::{
    angle_arc_integral, cauchy_perimeter_hilbert, crofton_length_mc, crofton_oriented_distance_mc,
    discrete_cauchy_distance, discrete_cauchy_one_sided, hilbert_distance, hilbert_perimeter_oracle, psi_angles,
    vertex_terms, HilbertDomain,
};
use crate::measures::{
    domega_ds_fd, dphi_dtheta_poincare, dr_domega, dr_domega_fd, finite_difference_ratios, kappa_from_omega,
    kappa_from_omega_forms, measure_ratios,
};
use crate::models::{
    hyperbolic_distance_klein, inversive_product, klein_to_poincare, line_support_data, poincare_to_klein, ChartLine,
    ChartPoint,
};
use crate::perimeter::{
    inversive_h, minkowski_perimeter, perimeter, projective_cauchy_h, projective_cauchy_w, side_contributions,
    witness_triangle, Method,
};
use crate::quadrature::{central_diff, integrate_adaptive, integrate_periodic, Stencil};
use crate::random::{interior_point, point_in_disk, polygon_domain, rng, smooth_body, smooth_domain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Core,
    Hilbert,
    Perimeter,
    Measures,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "core" => Ok(Suite::Core),
            "hilbert" => Ok(Suite::Hilbert),
            "perimeter" => Ok(Suite::Perimeter),
            "measures" => Ok(Suite::Measures),
            "all" => Ok(Suite::All),
            _ => Err(format!("unknown suite {s:?}")),
        }
    }
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Hilbert => "hilbert",
            Suite::Perimeter => "perimeter",
            Suite::Measures => "measures",
            Suite::All => "all",
        }
    }
}

/// One row of a verification report. For `lower_bound` rows the value must
/// be at least the threshold; otherwise at most.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub max_deviation: f64,
    pub threshold: f64,
    pub lower_bound: bool,
    pub pass: bool,
}

struct Outcome {
    value: f64,
    threshold: f64,
    lower_bound: bool,
}

fn upper(value: f64, threshold: f64) -> Outcome {
    Outcome { value, threshold, lower_bound: false }
}

fn lower(value: f64, threshold: f64) -> Outcome {
    Outcome { value, threshold, lower_bound: true }
}

type CheckFn = fn(u64) -> Outcome;

/// Runs a suite. `threshold_scale` multiplies every upper threshold and
/// divides every lower one; 1 is the real contract.
pub fn run_suite(suite: Suite, seed: u64, threshold_scale: f64) -> Vec<Check> {
    let suites: Vec<Suite> = match suite {
        Suite::All => vec![Suite::Core, Suite::Hilbert, Suite::Perimeter, Suite::Measures],
        s => vec![s],
    };
    let mut rows = Vec::new();
    for s in suites {
        for (i, (name, f)) in checks(s).iter().enumerate() {
            let sub = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(1000 * s as u64 + i as u64);
            let o = f(sub);
            let threshold = if o.lower_bound { o.threshold / threshold_scale } else { o.threshold * threshold_scale };
            let pass = if o.lower_bound { o.value >= threshold } else { o.value <= threshold };
            rows.push(Check {
                suite: s.name().to_string(),
                name: name.to_string(),
                max_deviation: o.value,
                threshold,
                lower_bound: o.lower_bound,
                pass,
            });
        }
    }
    rows
}

fn checks(s: Suite) -> Vec<(&'static str, CheckFn)> {
    match s {
        Suite::Core => vec![
            ("ell*c = 1 - k*a", core_ell_c as CheckFn),
            ("d ell/dr = ell*c", core_ell_derivative),
            ("dc/dr = -1/ell^2", core_c_derivative),
            ("series branch continuity", core_series_continuity),
            ("right triangle identities", core_right_triangle),
            ("angle of parallelism limit", core_parallelism),
            ("klein-poincare round trip", core_klein_poincare),
            ("klein distance rotation invariance", core_rotation_invariance),
            ("klein triangle inequality", core_klein_triangle),
            ("inversive product rotation invariance", core_inversive_rotation),
            ("h = (OS, PR)", core_inversive_h),
            ("periodic quadrature accuracy", core_periodic_quadrature),
            ("determinism", core_determinism),
        ],
        Suite::Hilbert => vec![
            ("unit disk = Klein model", hil_disk),
            ("symmetry", hil_symmetry),
            ("identity", hil_identity),
            ("triangle inequality", hil_triangle),
            ("discrete Cauchy distance", hil_discrete),
            ("one-sided vertex sums", hil_one_sided),
            ("collinear vertex contributes zero", hil_skipped_vertex),
            ("angle arc integral vs quadrature", hil_angle_arc),
            ("segment quadrature = 2h", hil_segment_quadrature),
            ("psi ordering 0 < psi1 <= psi2 < pi", hil_psi_order),
            ("inscribed oracle monotone", hil_oracle_monotone),
            ("affine invariance", hil_affine),
            ("Crofton segment length (std errors)", hil_crofton),
            ("oriented distance symmetry (std errors)", hil_oriented),
        ],
        Suite::Perimeter => vec![
            ("method agreement k=-1", per_agree_hyp),
            ("method agreement k=0", per_agree_euc),
            ("method agreement k=1", per_agree_sph),
            ("Minkowski origin independence", per_origin),
            ("Minkowski on non-convex curves", per_nonconvex),
            ("witness: Cauchy integral on a side", per_witness_cauchy),
            ("witness: Minkowski term on a side", per_witness_minkowski),
            ("omega = (phi + phi~)/2", per_phi_symmetry),
            ("one-sided vs two-sided projective", per_projective),
            ("support line round trip", per_support_round_trip),
            ("right triangle bundle at the support", per_a3_bundle),
            ("w = cot psi1 - cot psi2", per_w_consistency),
            ("frame curvature vs ambient lift", per_kappa_ambient),
            ("frame drho/ds, dtheta/ds", per_frame_derivatives),
        ],
        Suite::Measures => vec![
            ("curvature from d omega/ds", mea_kappa),
            ("curvature forms agree", mea_kappa_forms),
            ("dr/d omega", mea_dr),
            ("ratios vs central differences", mea_ratios),
            ("d phi/d theta two forms", mea_poincare),
            ("chain rule", mea_chain),
            ("d phi/d omega + d phi~/d omega = 2", mea_sum),
        ],
        Suite::All => Vec::new(),
    }
}

const CURVATURES: [f64; 7] = [-2.0, -1.0, -1e-12, 0.0, 1e-12, 1.0, 2.0];

fn radii(k: Curvature) -> impl Iterator<Item = f64> {
    let top = (0.95 * k.max_leg()).min(3.0);
    (1..=64).map(move |i| top * i as f64 / 64.0)
}

fn curv(k: f64) -> Curvature {
    Curvature::new(k).expect("finite curvature")
}

fn core_ell_c(_: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    for k in CURVATURES.map(curv) {
        for r in radii(k) {
            let lhs = k.ell(r) * k.circle_curvature(r).unwrap();
            let rhs = 1.0 - k.k() * k.area_ratio(r);
            worst = worst.max((lhs - rhs).abs() / rhs.abs().max(1.0));
        }
    }
    upper(worst, 1e-12)
}

fn core_ell_derivative(_: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    for k in CURVATURES.map(curv) {
        for r in radii(k) {
            let fd = central_diff(|x| k.ell(x), r, 1e-3, Stencil::Five);
            let exact = k.ell(r) * k.circle_curvature(r).unwrap();
            worst = worst.max((fd - exact).abs() / exact.abs().max(1.0));
        }
    }
    upper(worst, 1e-8)
}

fn core_c_derivative(_: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    for k in CURVATURES.map(curv) {
        for r in radii(k).filter(|&r| r > 0.2) {
            let fd = central_diff(|x| k.circle_curvature(x).unwrap(), r, 1e-3, Stencil::Five);
            let exact = -1.0 / k.ell(r).powi(2);
            worst = worst.max((fd - exact).abs() / exact.abs().max(1.0));
        }
    }
    upper(worst, 1e-8)
}

fn core_series_continuity(_: u64) -> Outcome {
    let e = Curvature::EUCLIDEAN;
    let mut worst: f64 = 0.0;
    for k in [curv(1e-12), curv(-1e-12)] {
        for r in [0.1, 0.5, 1.0, 2.0, 5.0] {
            worst = worst
                .max((k.ell(r) - e.ell(r)).abs())
                .max((k.area_ratio(r) - e.area_ratio(r)).abs())
                .max((k.circle_curvature(r).unwrap() - e.circle_curvature(r).unwrap()).abs());
        }
    }
    upper(worst, 1e-9)
}

fn core_right_triangle(seed: u64) -> Outcome {
    let mut g = rng(seed);
    let mut worst: f64 = 0.0;
    for k in [-1.0, -0.3, 0.0, 0.5, 1.0].map(curv) {
        for _ in 0..200 {
            let top = if k.k() > 0.0 { 0.49 * PI / k.k().sqrt() } else { 4.0 };
            let c = g.random_range(0.01..top);
            let alpha = g.random_range(0.01..FRAC_PI_2 - 0.01);
            let t = k.solve_right_triangle(c, alpha).unwrap();
            for r in t.identity_residuals(k) {
                worst = worst.max(r);
            }
        }
    }
    upper(worst, 1e-12)
}

fn core_parallelism(_: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    for k in [-1.0, -0.25, -4.0].map(curv) {
        for b in [0.1, 0.5, 1.0, 2.0] {
            // leg b adjacent to the far vertex: solve with leg_a = b opposite alpha
            let c = 30.0 / (-k.k()).sqrt();
            let alpha = (k.ell(b) / k.ell(c)).asin();
            let t = k.solve_right_triangle(c, alpha).unwrap();
            worst = worst.max((t.angle_beta - k.angle_of_parallelism(b).unwrap()).abs());
        }
    }
    upper(worst, 1e-9)
}

fn core_klein_poincare(seed: u64) -> Outcome {
    let mut g = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let p = point_in_disk(&mut g, ChartPoint::ORIGIN, 0.999);
        let q = poincare_to_klein(klein_to_poincare(p).unwrap()).unwrap();
        worst = worst.max((p - q).norm());
    }
    upper(worst, 1e-14)
}

fn core_rotation_invariance(seed: u64) -> Outcome {
    let mut g = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..2000 {
        let p = point_in_disk(&mut g, ChartPoint::ORIGIN, 0.99);
        let q = point_in_disk(&mut g, ChartPoint::ORIGIN, 0.99);
        let a = g.random_range(0.0..TAU);
        let d0 = hyperbolic_distance_klein(p, q).unwrap();
        let d1 = hyperbolic_distance_klein(p.rotated(a), q.rotated(a)).unwrap();
        worst = worst.max((d0 - d1).abs());
    }
    upper(worst, 1e-10)
}

fn core_klein_triangle(seed: u64) -> Outcome {
    let mut g = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let [p, q, r] = [(); 3].map(|_| point_in_disk(&mut g, ChartPoint::ORIGIN, 0.99));
        let d = |a, b| hyperbolic_distance_klein(a, b).unwrap();
        worst = worst.max(d(p, r) - d(p, q) - d(q, r));
    }
    upper(worst.max(0.0), 1e-12)
}

fn core_inversive_rotation(seed: u64) -> Outcome {
    let mut g = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..2000 {
        let (a1, a2) = (g.random_range(0.0..TAU), g.random_range(0.0..TAU));
        let (d1, d2) = (g.random_range(-0.95..0.95), g.random_range(-0.95..0.95));
        let rot = g.random_range(0.0..TAU);
        let v0 = inversive_product(ChartLine::at_angle(a1, d1), ChartLine::at_angle(a2, d2)).unwrap();
        let v1 = inversive_product(ChartLine::at_angle(a1 + rot, d1), ChartLine::at_angle(a2 + rot, d2)).unwrap();
        worst = worst.max((v0 - v1).abs() / v0.abs().max(1.0));
    }
    upper(worst, 1e-10)
}

fn core_inversive_h(seed: u64) -> Outcome {
    let mut g = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let b = shifted_body(&mut g, Curvature::HYPERBOLIC);
        for i in 0..64 {
            let (h, ip) = inversive_h(&b, TAU * (i as f64 + 0.5) / 64.0).unwrap();
            worst = worst.max((h - ip).abs());
        }
    }
    upper(worst, 1e-9)
}

fn core_periodic_quadrature(_: u64) -> Outcome {
    // 2π I₀(1), 2π/√(1 − 0.25), 2π
    type Case = (fn(f64) -> f64, f64);
    let cases: [Case; 3] = [
        (|t: f64| t.cos().exp(), TAU * 1.266_065_877_752_008_4),
        (|t: f64| 1.0 / (1.0 + 0.5 * t.sin()), TAU / 0.75f64.sqrt()),
        (|t: f64| 1.0 + t.cos(), TAU),
    ];
    let worst = cases.iter().map(|(f, v)| (integrate_periodic(f, 1e-13).value - v).abs()).fold(0.0, f64::max);
    upper(worst, 1e-12)
}

fn core_determinism(seed: u64) -> Outcome {
    let d = HilbertDomain::unit_disk();
    let seg = [ChartPoint::new(-0.2, 0.1), ChartPoint::new(0.3, 0.0)];
    let a = crofton_length_mc(&d, &seg, 20_000, seed).unwrap();
    let b = crofton_length_mc(&d, &seg, 20_000, seed).unwrap();
    let mut g = rng(seed);
    let body = smooth_body(&mut g, Curvature::HYPERBOLIC);
    let p1 = perimeter(&body, Method::CauchyOmega, 1e-10).unwrap().value;
    let p2 = perimeter(&body, Method::CauchyOmega, 1e-10).unwrap().value;
    let same = a.estimate.to_bits() == b.estimate.to_bits()
        && a.std_error.to_bits() == b.std_error.to_bits()
        && p1.to_bits() == p2.to_bits();
    upper(if same { 0.0 } else { 1.0 }, 0.0)
}

/// A random body pushed off the chart origin.
fn shifted_body<R: Rng>(g: &mut R, k: Curvature) -> ValidBody {
    loop {
        let b = smooth_body(g, k);
        let c = b.curve().unwrap();
        let shift = ChartPoint::polar(g.random_range(0.0..0.35), g.random_range(0.0..TAU));
        let mut x = c.x_coeffs().to_vec();
        let mut y = c.y_coeffs().to_vec();
        x[0] += shift.x;
        y[0] += shift.y;
        if let Ok(v) = validate(ConvexBody::Smooth(TrigCurve::new(x, y).unwrap()), k) {
            return v;
        }
    }
}

fn hil_disk(seed: u64) -> Outcome {
    let mut g = rng(seed);
    let d = HilbertDomain::unit_disk();
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let p = point_in_disk(&mut g, ChartPoint::ORIGIN, 0.99);
        let q = point_in_disk(&mut g, ChartPoint::ORIGIN, 0.99);
        worst = worst.max((hilbert_distance(&d, p, q).unwrap() - hyperbolic_distance_klein(p, q).unwrap()).abs());
    }
    upper(worst, 1e-12)
}

/// Random domains of every kind with triples of interior points.
fn triples(seed: u64, count: usize) -> Vec<(HilbertDomain, Vec<[ChartPoint; 3]>)> {
    let mut g = rng(seed);
    let mut out = Vec::new();
    let per = count / 10;
    for i in 0..10 {
        let d = match i % 3 {
            0 => {
                let n = g.random_range(3..=12);
                polygon_domain(&mut g, n)
            }
            1 => HilbertDomain::new(ConvexBody::Smooth(TrigCurve::ellipse(
                ChartPoint::new(g.random_range(-1.0..1.0), g.random_range(-1.0..1.0)),
                g.random_range(0.5..2.0),
                g.random_range(0.5..2.0),
            )))
            .unwrap(),
            _ => smooth_domain(&mut g),
        };
        let ts = (0..per).map(|_| [(); 3].map(|_| interior_point(&mut g, &d, 0.01))).collect();
        out.push((d, ts));
    }
    out
}

fn hil_symmetry(seed: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    for (d, ts) in triples(seed, 3000) {
        for [p, q, _] in ts {
            worst = worst.max((hilbert_distance(&d, p, q).unwrap() - hilbert_distance(&d, q, p).unwrap()).abs());
        }
    }
    upper(worst, 0.0)
}

fn hil_identity(seed: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    for (d, ts) in triples(seed, 1000) {
        for [p, _, _] in ts {
            worst = worst.max(hilbert_distance(&d, p, p).unwrap().abs());
        }
    }
    upper(worst, 0.0)
}

fn hil_triangle(seed: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    for (d, ts) in triples(seed, 10_000) {
        for [p, q, r] in ts {
            let h = |a, b| hilbert_distance(&d, a, b).unwrap();
            worst = worst.max(h(p, r) - h(p, q) - h(q, r));
        }
    }
    upper(worst.max(0.0), 1e-12)
}

fn polygon_pairs(seed: u64, domains: usize, pairs: usize) -> Vec<(HilbertDomain, Vec<(ChartPoint, ChartPoint)>)> {
    let mut g = rng(seed);
    (0..domains)
        .map(|_| {
            let n = g.random_range(3..=12);
            let d = polygon_domain(&mut g, n);
            let ps = (0..pairs).map(|_| (interior_point(&mut g, &d, 0.01), interior_point(&mut g, &d, 0.01))).collect();
            (d, ps)
        })
        .collect()
}

fn hil_discrete(seed: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    for (d, ps) in polygon_pairs(seed, 50, 20) {
        for (p, q) in ps {
            worst =
                worst.max((discrete_cauchy_distance(&d, p, q).unwrap() - hilbert_distance(&d, p, q).unwrap()).abs());
        }
    }
    upper(worst, 1e-12)
}

fn hil_one_sided(seed: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    for (d, ps) in polygon_pairs(seed, 50, 20) {
        for (p, q) in ps {
            let h = hilbert_distance(&d, p, q).unwrap();
            let (l, r) = discrete_cauchy_one_sided(&d, p, q).unwrap();
            worst = worst.max((l - h).abs()).max((r - h).abs());
        }
    }
    upper(worst, 1e-12)
}

fn hil_skipped_vertex(seed: u64) -> Outcome {
    let mut g = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n = g.random_range(3..=12);
        let d = polygon_domain(&mut g, n);
        let v = d.boundary().vertices().unwrap().to_vec();
        let i = g.random_range(0..n);
        let m = interior_point(&mut g, &d, 0.05);
        let (p, q) = (v[i] + 0.3 * (m - v[i]), v[i] + 0.7 * (m - v[i]));
        worst = worst.max(vertex_terms(&d, p, q).unwrap()[i].0);
    }
    upper(worst, 1e-12)
}

fn hil_angle_arc(seed: u64) -> Outcome {
    let mut g = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let gamma = g.random_range(0.0..1.0);
        let alpha = g.random_range(gamma + 0.05..PI - 0.05);
        let beta = g.random_range(alpha..PI - 0.01);
        let closed = angle_arc_integral(alpha, beta, gamma).unwrap();
        let quad = integrate_adaptive(|p| 1.0 / (alpha - p).tan() - 1.0 / (beta - p).tan(), 0.0, gamma, 1e-13).value;
        worst = worst.max((closed - quad).abs());
    }
    upper(worst, 1e-10)
}

fn hil_segment_quadrature(seed: u64) -> Outcome {
    let mut g = rng(seed);
    let mut worst: f64 = 0.0;
    for i in 0..6 {
        let d = if i % 2 == 0 { HilbertDomain::unit_disk() } else { smooth_domain(&mut g) };
        let p = interior_point(&mut g, &d, 0.2);
        let q = interior_point(&mut g, &d, 0.2);
        let seg = validate(ConvexBody::Degenerate(vec![p, q]), Curvature::EUCLIDEAN).unwrap();
        let v = cauchy_perimeter_hilbert(&d, &seg, 1e-11).unwrap().value;
        worst = worst.max((v - 2.0 * hilbert_distance(&d, p, q).unwrap()).abs());
    }
    upper(worst, 1e-8)
}

fn hil_psi_order(seed: u64) -> Outcome {
    let mut g = rng(seed);
    let mut bad = 0usize;
    for i in 0..6 {
        let d = if i % 2 == 0 { polygon_domain(&mut g, 6) } else { smooth_domain(&mut g) };
        let (p, q) = (interior_point(&mut g, &d, 0.2), interior_point(&mut g, &d, 0.2));
        let m = interior_point(&mut g, &d, 0.2);
        let k = validate(ConvexBody::Polygon(ccw([p, q, m].to_vec())), Curvature::EUCLIDEAN);
        let Ok(k) = k else { continue };
        for j in 0..128 {
            let a = psi_angles(&d, &k, TAU * (j as f64 + 0.37) / 128.0).unwrap();
            if !(0.0 < a.psi1 && a.psi1 <= a.psi2 && a.psi2 < PI) {
                bad += 1;
            }
        }
    }
    upper(bad as f64, 0.0)
}

fn ccw(mut v: Vec<ChartPoint>) -> Vec<ChartPoint> {
    if (v[1] - v[0]).cross(v[2] - v[0]) < 0.0 {
        v.swap(1, 2);
    }
    v
}

fn hil_oracle_monotone(seed: u64) -> Outcome {
    let mut g = rng(seed);
    let d = smooth_domain(&mut g);
    let c = d.boundary().curve().unwrap().clone();
    let centre = interior_point(&mut g, &d, 0.3);
    let shrink = |v: &[f64], c0: f64| {
        let mut v: Vec<f64> = v.iter().map(|x| 0.3 * x).collect();
        v[0] += 0.7 * c0;
        v
    };
    let body = TrigCurve::new(shrink(c.x_coeffs(), centre.x), shrink(c.y_coeffs(), centre.y)).unwrap();
    let k = validate(ConvexBody::Smooth(body), Curvature::EUCLIDEAN).unwrap();
    let mut worst: f64 = 0.0;
    let mut prev = hilbert_perimeter_oracle(&d, &k, 16).unwrap();
    for n in [32, 64, 128, 256, 512] {
        let v = hilbert_perimeter_oracle(&d, &k, n).unwrap();
        worst = worst.max(prev - v);
        prev = v;
    }
    upper(worst.max(0.0), 1e-12)
}

fn hil_affine(seed: u64) -> Outcome {
    let mut g = rng(seed);
    let m = [[1.3, 0.4], [-0.2, 0.8]];
    let off = ChartPoint::new(0.7, -0.3);
    let map = |p: ChartPoint| ChartPoint::new(m[0][0] * p.x + m[0][1] * p.y, m[1][0] * p.x + m[1][1] * p.y) + off;
    let mut worst: f64 = 0.0;
    for i in 0..6 {
        let (d, d2) = if i % 2 == 0 {
            let d = polygon_domain(&mut g, 3 + i);
            let v: Vec<ChartPoint> = d.boundary().vertices().unwrap().iter().map(|&p| map(p)).collect();
            (d, HilbertDomain::new(ConvexBody::Polygon(v)).unwrap())
        } else {
            let d = smooth_domain(&mut g);
            let c = d.boundary().curve().unwrap();
            let (x, y) = (c.x_coeffs(), c.y_coeffs());
            let mut nx: Vec<f64> = x.iter().zip(y).map(|(a, b)| m[0][0] * a + m[0][1] * b).collect();
            let mut ny: Vec<f64> = x.iter().zip(y).map(|(a, b)| m[1][0] * a + m[1][1] * b).collect();
            nx[0] += off.x;
            ny[0] += off.y;
            let d2 = HilbertDomain::new(ConvexBody::Smooth(TrigCurve::new(nx, ny).unwrap())).unwrap();
            (d, d2)
        };
        for _ in 0..50 {
            let (p, q) = (interior_point(&mut g, &d, 0.01), interior_point(&mut g, &d, 0.01));
            let a = hilbert_distance(&d, p, q).unwrap();
            let b = hilbert_distance(&d2, map(p), map(q)).unwrap();
            worst = worst.max((a - b).abs());
        }
    }
    upper(worst, 1e-9)
}

fn hil_crofton(seed: u64) -> Outcome {
    let d = HilbertDomain::unit_disk();
    let (p, q) = (ChartPoint::ORIGIN, ChartPoint::new(0.5, 0.0));
    let mc = crofton_length_mc(&d, &[p, q], 200_000, seed).unwrap();
    let h = hilbert_distance(&d, p, q).unwrap();
    upper((mc.estimate - h).abs() / mc.std_error, 3.0)
}

fn hil_oriented(seed: u64) -> Outcome {
    let mut g = rng(seed);
    let d = smooth_domain(&mut g);
    let (p, q) = (interior_point(&mut g, &d, 0.2), interior_point(&mut g, &d, 0.2));
    let a = crofton_oriented_distance_mc(&d, p, q, 200_000, seed).unwrap();
    let b = crofton_oriented_distance_mc(&d, q, p, 200_000, seed ^ 1).unwrap();
    let se = a.std_error.hypot(b.std_error);
    upper((a.estimate - b.estimate).abs() / se, 3.0)
}

fn agreement(seed: u64, k: Curvature, count: usize) -> Outcome {
    let mut g = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let b = smooth_body(&mut g, k);
        let vals: Vec<f64> = Method::ALL
            .iter()
            .filter(|m| m.applies_to(&b))
            .map(|&m| perimeter(&b, m, 1e-11).map(|r| r.value).unwrap_or(f64::NAN))
            .collect();
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let spread = if vals.iter().any(|v| v.is_nan()) { f64::INFINITY } else { (hi - lo) / lo };
        worst = worst.max(spread);
    }
    upper(worst, 1e-6)
}

fn per_agree_hyp(seed: u64) -> Outcome {
    agreement(seed, Curvature::HYPERBOLIC, 20)
}

fn per_agree_euc(seed: u64) -> Outcome {
    agreement(seed, Curvature::EUCLIDEAN, 20)
}

fn per_agree_sph(seed: u64) -> Outcome {
    agreement(seed, Curvature::SPHERE, 20)
}

fn per_origin(seed: u64) -> Outcome {
    let mut g = rng(seed);
    let mut worst: f64 = 0.0;
    for k in [Curvature::HYPERBOLIC, Curvature::EUCLIDEAN, Curvature::SPHERE] {
        let b = smooth_body(&mut g, k);
        let arc = b.arclength_perimeter(1e-12).unwrap().value;
        let mut n = 0;
        while n < 10 {
            let o = point_in_disk(&mut g, ChartPoint::ORIGIN, 0.8);
            if let Ok(r) = minkowski_perimeter(&b, o, 1e-11) {
                worst = worst.max((r.value - arc).abs() / arc);
                n += 1;
            }
        }
    }
    upper(worst, 1e-6)
}

/// The limaçon `r = 1 + 0.8 cos t`, scaled: smooth, star-shaped, not convex.
pub fn limacon(scale: f64) -> TrigCurve {
    let s = scale;
    TrigCurve::new(vec![0.4 * s, s, 0.0, 0.4 * s, 0.0], vec![0.0, 0.0, s, 0.0, 0.4 * s]).expect("limaçon")
}

fn per_nonconvex(_: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    for (k, s) in [(Curvature::HYPERBOLIC, 0.4), (Curvature::EUCLIDEAN, 1.0), (Curvature::SPHERE, 0.5)] {
        let b = validate_closed_curve(ConvexBody::Smooth(limacon(s)), k).unwrap();
        let arc = b.arclength_perimeter(1e-12).unwrap().value;
        for o in [ChartPoint::new(0.1 * s, 0.0), ChartPoint::new(0.5 * s, 0.3 * s), ChartPoint::new(2.0 * s, 0.0)] {
            let m = minkowski_perimeter(&b, o, 1e-11).unwrap().value;
            worst = worst.max((m - arc).abs() / arc);
        }
    }
    upper(worst, 1e-6)
}

fn witness() -> (f64, f64) {
    let tri = validate(witness_triangle(), Curvature::HYPERBOLIC).unwrap();
    let mut c: f64 = 0.0;
    let mut m = f64::INFINITY;
    for side in 0..3 {
        let (a, b) = side_contributions(&tri, side, 1e-12).unwrap();
        c = c.max(a.abs());
        m = m.min(b.abs());
    }
    (c, m)
}

fn per_witness_cauchy(_: u64) -> Outcome {
    upper(witness().0, 1e-10)
}

fn per_witness_minkowski(_: u64) -> Outcome {
    lower(witness().1, 1e-3)
}

fn per_phi_symmetry(seed: u64) -> Outcome {
    let mut g = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let b = shifted_body(&mut g, Curvature::HYPERBOLIC);
        for i in 0..64 {
            let f = b.support_line_at_omega(TAU * i as f64 / 64.0).unwrap().frame;
            worst = worst.max((0.5 * (f.phi.unwrap() + f.phi_tilde.unwrap()) - f.omega).abs());
        }
    }
    upper(worst, 1e-10)
}

fn per_projective(seed: u64) -> Outcome {
    let mut g = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let b = shifted_body(&mut g, Curvature::HYPERBOLIC);
        let w = projective_cauchy_w(&b, 1e-11).unwrap().value;
        let h = projective_cauchy_h(&b, 1e-11).unwrap().value;
        worst = worst.max((w - h).abs() / w);
    }
    upper(worst, 1e-8)
}

fn support_bodies(seed: u64) -> Vec<ValidBody> {
    let mut g = rng(seed);
    [Curvature::HYPERBOLIC, Curvature::EUCLIDEAN, Curvature::SPHERE, curv(-0.4), curv(2.5)]
        .into_iter()
        .map(|k| shifted_body(&mut g, k))
        .collect()
}

fn per_support_round_trip(seed: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    for b in support_bodies(seed) {
        for i in 0..128 {
            let w = TAU * (i as f64 + 0.2) / 128.0;
            let s = b.support_line_at_omega(w).unwrap();
            let (r, om) = line_support_data(b.k(), s.line).unwrap();
            worst = worst.max((r - s.frame.r).abs()).max(crate::body::wrap_pi(om - s.frame.omega).abs());
        }
    }
    upper(worst, 1e-10)
}

fn per_a3_bundle(seed: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    for b in support_bodies(seed) {
        let k = b.k();
        for i in 0..512 {
            let f = b.support_line_at_omega(TAU * (i as f64 + 0.5) / 512.0).unwrap().frame;
            let (rho, a, x, r) = (f.frame.rho, f.frame.alpha, f.x, f.r);
            let wt = f.omega - f.frame.theta;
            let res = [
                k.ell(r) - k.ell(rho) * a.cos(),
                wt.cos() * k.tan_k(rho) - k.tan_k(r),
                f.beta.cos() * k.tan_k(rho) - k.tan_k(x),
                wt.sin() * k.ell(rho) - k.ell(x),
            ];
            worst = res.iter().fold(worst, |w, v| w.max(v.abs()));
        }
    }
    upper(worst, 1e-10)
}

fn per_w_consistency(seed: u64) -> Outcome {
    let mut g = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let b = shifted_body(&mut g, Curvature::HYPERBOLIC);
        for i in 0..64 {
            let s = b.support_lines_from_ideal(TAU * i as f64 / 64.0).unwrap();
            let w = 1.0 / s.psi1.tan() - 1.0 / s.psi2.tan();
            worst = worst.max((w - s.w).abs());
        }
    }
    upper(worst, 1e-12)
}

/// Geodesic curvature from the curve lifted to the sphere, plane or
/// hyperboloid in R³, by nested central differences.
pub fn kappa_g_ambient(k: Curvature, c: &impl Curve, t: f64) -> f64 {
    let kk = k.k();
    let s = kk.abs().sqrt();
    let lift = |u: f64| -> [f64; 3] {
        let p = c.point(u);
        if kk == 0.0 {
            return [p.x, p.y, 0.0];
        }
        let w = (1.0 + kk.signum() * p.norm_sq()).sqrt() * s;
        [p.x / w, p.y / w, 1.0 / w]
    };
    let h = 1e-3;
    let d1 = |u: f64| [0, 1, 2].map(|i| central_diff(|v| lift(v)[i], u, h, Stencil::Five));
    let x1 = d1(t);
    let x2 = [0, 1, 2].map(|i| central_diff(|v| d1(v)[i], t, h, Stencil::Five));
    let x = lift(t);
    let n = if kk == 0.0 { [0.0, 0.0, 1.0] } else { x.map(|v| v * s) };
    let det = n[0] * (x1[1] * x2[2] - x1[2] * x2[1]) - n[1] * (x1[0] * x2[2] - x1[2] * x2[0])
        + n[2] * (x1[0] * x2[1] - x1[1] * x2[0]);
    let sig = if kk < 0.0 { -1.0 } else { 1.0 };
    let speed = (x1[0] * x1[0] + x1[1] * x1[1] + sig * x1[2] * x1[2]).sqrt();
    det / speed.powi(3)
}

fn per_kappa_ambient(seed: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    for b in support_bodies(seed) {
        let c = b.curve().unwrap();
        for i in 0..64 {
            let t = TAU * (i as f64 + 0.3) / 64.0;
            let f = b.local_frame(t).unwrap();
            worst = worst.max((kappa_g_ambient(b.k(), c, t) - f.kappa_g).abs());
        }
    }
    upper(worst, 1e-6)
}

fn per_frame_derivatives(seed: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    for b in support_bodies(seed) {
        let k = b.k();
        for i in 0..64 {
            let t = TAU * (i as f64 + 0.3) / 64.0;
            let f = b.local_frame(t).unwrap();
            let th0 = f.theta;
            let rho = central_diff(|u| b.local_frame(u).unwrap().rho, t, 1e-4, Stencil::Five) / f.speed;
            let th = central_diff(
                |u| th0 + crate::body::wrap_pi(b.local_frame(u).unwrap().theta - th0),
                t,
                1e-4,
                Stencil::Five,
            ) / f.speed;
            worst = worst.max((rho + f.alpha.sin()).abs()).max((th - f.alpha.cos() / k.ell(f.rho)).abs());
        }
    }
    upper(worst, 1e-6)
}

fn measure_bodies(seed: u64, count: usize) -> Vec<ValidBody> {
    let mut g = rng(seed);
    (0..count)
        .map(|i| {
            let k = if i % 2 == 0 { Curvature::HYPERBOLIC } else { Curvature::SPHERE };
            smooth_body(&mut g, k)
        })
        .collect()
}

const FD_STEP: f64 = 1e-4 * TAU;

fn samples(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| TAU * (i as f64 + 0.5) / n as f64)
}

fn mea_kappa(seed: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    for b in measure_bodies(seed, 10) {
        for t in samples(256) {
            let f = b.support_frame_at(t).unwrap();
            let kg = kappa_from_omega(b.k(), &f, domega_ds_fd(&b, t, FD_STEP).unwrap());
            worst = worst.max((kg - f.frame.kappa_g).abs());
        }
    }
    upper(worst, 1e-6)
}

fn mea_kappa_forms(seed: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    for b in measure_bodies(seed, 10) {
        for t in samples(64) {
            let f = b.support_frame_at(t).unwrap();
            let (a, c) = kappa_from_omega_forms(b.k(), &f, f.frame.kappa_g);
            worst = worst.max((a - c).abs());
        }
    }
    upper(worst, 1e-12)
}

fn mea_dr(seed: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    for b in measure_bodies(seed, 10) {
        for t in samples(256) {
            let f = b.support_frame_at(t).unwrap();
            worst = worst.max((dr_domega(b.k(), &f) - dr_domega_fd(&b, t, FD_STEP).unwrap()).abs());
        }
    }
    upper(worst, 1e-6)
}

fn ratio_bodies(seed: u64) -> Vec<ValidBody> {
    let mut g = rng(seed);
    [Curvature::HYPERBOLIC, Curvature::EUCLIDEAN, Curvature::SPHERE, curv(-0.5), Curvature::HYPERBOLIC]
        .into_iter()
        .map(|k| smooth_body(&mut g, k))
        .collect()
}

fn mea_ratios(seed: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    for b in ratio_bodies(seed) {
        for t in samples(128) {
            let m = measure_ratios(&b, t).unwrap();
            let o = finite_difference_ratios(&b, t, FD_STEP).unwrap();
            for (x, y) in m.values().iter().zip(o.values()) {
                if !(x.is_nan() && y.is_nan()) {
                    worst = worst.max((x - y).abs() / y.abs().max(1.0));
                }
            }
        }
    }
    upper(worst, 1e-5)
}

fn mea_poincare(seed: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    for b in ratio_bodies(seed).into_iter().filter(|b| b.k().k() < 0.0) {
        for t in samples(128) {
            let a = measure_ratios(&b, t).unwrap().dphi_dtheta.unwrap();
            let p = dphi_dtheta_poincare(&b, t).unwrap();
            worst = worst.max((a - p).abs() / a.abs().max(1.0));
        }
    }
    upper(worst, 1e-10)
}

fn mea_chain(seed: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    for b in ratio_bodies(seed).into_iter().filter(|b| b.k().k() < 0.0) {
        for t in samples(128) {
            let m = measure_ratios(&b, t).unwrap();
            let chain = m.dphi_domega.unwrap() * m.domega_dtheta;
            worst = worst.max((chain - m.dphi_dtheta.unwrap()).abs() / chain.abs().max(1.0));
        }
    }
    upper(worst, 1e-12)
}

fn mea_sum(seed: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    for b in ratio_bodies(seed).into_iter().filter(|b| b.k().k() < 0.0) {
        for t in samples(128) {
            let m = measure_ratios(&b, t).unwrap();
            worst = worst.max((m.dphi_domega.unwrap() + m.dphitilde_domega.unwrap() - 2.0).abs());
        }
    }
    upper(worst, 1e-12)
}
