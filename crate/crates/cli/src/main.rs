//! `croftonlab`: perimeters, distances, boundary measures and property
//! suites from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error,
//! 3 nonconvergence.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use croftonlab_core::hilbert::{cauchy_perimeter_hilbert, crofton_length_mc, hilbert_perimeter_oracle};
use croftonlab_core::measures::measure_ratios;
use croftonlab_core::models::chart_distance;
use croftonlab_core::perimeter::perimeter;
use croftonlab_core::schema::BodyFile;
use croftonlab_core::verify::{run_suite, Suite};
use croftonlab_core::{
    hilbert_distance, validate, ChartPoint, ConvexBody, Curvature, GeomError, HilbertDomain, MeasureRatios, Method,
    ValidBody,
};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "croftonlab",
    version,
    about = "Integral-geometric perimeter formulas in constant curvature and Hilbert geometries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Space {
    Euclidean,
    Sphere,
    Hyperbolic,
    Hilbert,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Perimeter of a body by one method or all applicable ones.
    Perimeter {
        #[arg(long, value_enum)]
        space: Space,
        /// Curvature; defaults to 0, 1 or -1 by space.
        #[arg(long, allow_hyphen_values = true)]
        k: Option<f64>,
        /// arclength, minkowski, cauchy-omega, cauchy-polar, projective-w,
        /// projective-h, or all. In a Hilbert domain: cauchy, inscribed or all.
        #[arg(long, default_value = "all")]
        method: String,
        #[arg(long)]
        body: PathBuf,
        /// Hilbert domain file; the unit disk when omitted.
        #[arg(long)]
        domain: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Vertex count of the inscribed polygon.
        #[arg(long, default_value_t = 4096)]
        samples: usize,
        #[arg(long, value_enum, default_value = "csv")]
        out: Format,
    },
    /// Distance between two points, or a Crofton estimate of it.
    Distance {
        #[arg(long, value_enum)]
        space: Space,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<f64>,
        /// exact, or crofton for a Monte Carlo estimate (Hilbert only).
        #[arg(long, default_value = "exact")]
        method: String,
        #[arg(long)]
        domain: Option<PathBuf>,
        /// Point as `x,y`.
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, value_enum, default_value = "csv")]
        out: Format,
    },
    /// Run property suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Multiplies every tolerance; values below 1 tighten the suites.
        #[arg(long, default_value_t = 1.0, hide = true)]
        threshold_scale: f64,
        #[arg(long, value_enum, default_value = "csv")]
        out: Format,
    },
    /// Boundary frame, support data and measure ratios at equispaced parameters.
    Measures {
        #[arg(long, value_enum)]
        space: Space,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<f64>,
        #[arg(long)]
        body: PathBuf,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, value_enum, default_value = "csv")]
        out: Format,
    },
}

enum Failure {
    Input(GeomError),
    NotConverged(String),
    Verification(String),
}

impl From<GeomError> for Failure {
    fn from(e: GeomError) -> Self {
        Failure::Input(e)
    }
}

fn bad(msg: impl Into<String>) -> Failure {
    Failure::Input(GeomError::BadInput(msg.into()))
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn curvature(space: Space, k: Option<f64>) -> Result<Curvature, Failure> {
    let (default, sign) = match space {
        Space::Euclidean => (0.0, 0.0),
        Space::Sphere => (1.0, 1.0),
        Space::Hyperbolic => (-1.0, -1.0),
        Space::Hilbert => return Ok(Curvature::EUCLIDEAN),
    };
    let k = k.unwrap_or(default);
    if (k == 0.0) != (sign == 0.0) || k * sign < 0.0 {
        return Err(bad(format!("k = {k} does not match the chosen space")));
    }
    Ok(Curvature::new(k)?)
}

fn read_body(path: &PathBuf) -> Result<BodyFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    Ok(BodyFile::parse(&text)?)
}

fn read_domain(path: &Option<PathBuf>) -> Result<HilbertDomain, Failure> {
    match path {
        None => Ok(HilbertDomain::unit_disk()),
        Some(p) => Ok(HilbertDomain::new(read_body(p)?.to_body()?)?),
    }
}

fn parse_point(s: &str) -> Result<ChartPoint, Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [x, y] => {
            let x: f64 = x.parse().map_err(|_| bad(format!("bad point {s:?}")))?;
            let y: f64 = y.parse().map_err(|_| bad(format!("bad point {s:?}")))?;
            if !(x.is_finite() && y.is_finite()) {
                return Err(bad(format!("bad point {s:?}")));
            }
            Ok(ChartPoint::new(x, y))
        }
        _ => Err(bad(format!("expected x,y, got {s:?}"))),
    }
}

struct Row {
    method: String,
    value: f64,
    error_estimate: f64,
    evaluations: usize,
    converged: bool,
}

fn perimeter_rows(
    space: Space,
    k: Option<f64>,
    method: &str,
    body: &PathBuf,
    domain: &Option<PathBuf>,
    tol: f64,
    samples: usize,
) -> Result<Vec<Row>, Failure> {
    if !(tol > 0.0) {
        return Err(bad("tol must be positive"));
    }
    let file = read_body(body)?;
    let shape = file.to_body()?;
    if space == Space::Hilbert {
        let d = read_domain(domain)?;
        let b = validate(shape, Curvature::EUCLIDEAN)?;
        let methods: Vec<&str> = match method {
            "all" => vec!["cauchy", "inscribed"],
            "cauchy" | "inscribed" => vec![method],
            _ => return Err(bad(format!("method {method:?} is not available in a Hilbert domain"))),
        };
        return methods
            .into_iter()
            .map(|m| {
                Ok(match m {
                    "cauchy" => {
                        let q = cauchy_perimeter_hilbert(&d, &b, tol)?;
                        Row {
                            method: m.into(),
                            value: q.value,
                            error_estimate: q.error_estimate.abs(),
                            evaluations: q.evaluations,
                            converged: q.converged,
                        }
                    }
                    _ => {
                        let v = hilbert_perimeter_oracle(&d, &b, samples)?;
                        Row { method: m.into(), value: v, error_estimate: 0.0, evaluations: samples, converged: true }
                    }
                })
            })
            .collect();
    }
    let k = curvature(space, k)?;
    let b = validate(shape, k)?;
    let methods: Vec<Method> = if method == "all" {
        Method::ALL
            .into_iter()
            .filter(|m| m.applies_to(&b))
            .filter(|m| *m != Method::CauchyPolar || polar_ok(&b))
            .collect()
    } else {
        vec![Method::from_id(method).ok_or_else(|| bad(format!("unknown method {method:?}")))?]
    };
    methods
        .into_iter()
        .map(|m| {
            let r = perimeter(&b, m, tol)?;
            Ok(Row {
                method: m.id().into(),
                value: r.value,
                error_estimate: r.error_estimate,
                evaluations: r.evaluations,
                converged: r.converged,
            })
        })
        .collect()
}

/// Whether the polar formula applies: the origin must be interior.
fn polar_ok(b: &ValidBody) -> bool {
    perimeter(b, Method::CauchyPolar, 1e-3).is_ok()
}

#[allow(clippy::too_many_arguments)]
fn cmd_perimeter(
    space: Space,
    k: Option<f64>,
    method: &str,
    body: &PathBuf,
    domain: &Option<PathBuf>,
    tol: f64,
    samples: usize,
    out: Format,
) -> Result<String, Failure> {
    let rows = perimeter_rows(space, k, method, body, domain, tol, samples)?;
    let text = match out {
        Format::Csv => {
            let mut s = String::from("method,value,error_estimate,evaluations,converged\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    r.method,
                    num(r.value),
                    num(r.error_estimate),
                    r.evaluations,
                    r.converged
                );
            }
            s
        }
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|r| json!({"method": r.method, "value": r.value, "error_estimate": r.error_estimate, "evaluations": r.evaluations, "converged": r.converged}))
                .collect();
            format!("{}\n", serde_json::Value::Array(v))
        }
    };
    if rows.iter().any(|r| !r.converged) {
        print!("{text}");
        return Err(Failure::NotConverged("quadrature did not reach the requested tolerance".into()));
    }
    Ok(text)
}

#[allow(clippy::too_many_arguments)]
fn cmd_distance(
    space: Space,
    k: Option<f64>,
    method: &str,
    domain: &Option<PathBuf>,
    p: &str,
    q: &str,
    seed: u64,
    samples: usize,
    out: Format,
) -> Result<String, Failure> {
    let (p, q) = (parse_point(p)?, parse_point(q)?);
    if method == "crofton" {
        if space != Space::Hilbert {
            return Err(bad("Crofton estimates need --space hilbert"));
        }
        let d = read_domain(domain)?;
        let r = crofton_length_mc(&d, &[p, q], samples, seed)?;
        return Ok(match out {
            Format::Csv => {
                format!("estimate,std_error,n,seed\n{},{},{},{}\n", num(r.estimate), num(r.std_error), r.n, r.seed)
            }
            Format::Json => format!("{}\n", serde_json::to_string(&r).expect("serialisable")),
        });
    }
    if method != "exact" {
        return Err(bad(format!("unknown distance method {method:?}")));
    }
    let v = if space == Space::Hilbert {
        hilbert_distance(&read_domain(domain)?, p, q)?
    } else {
        chart_distance(curvature(space, k)?, p, q)?
    };
    Ok(match out {
        Format::Csv => format!("distance\n{}\n", num(v)),
        Format::Json => format!("{}\n", json!({"distance": v})),
    })
}

fn cmd_verify(suite: &str, seed: u64, scale: f64, out: Format) -> Result<String, Failure> {
    let suite: Suite = suite.parse().map_err(bad)?;
    if !(scale > 0.0) {
        return Err(bad("threshold scale must be positive"));
    }
    let rows = run_suite(suite, seed, scale);
    let text = match out {
        Format::Csv => {
            let mut s = String::from("suite,name,max_deviation,threshold,status\n");
            for r in &rows {
                let rel = if r.lower_bound { ">=" } else { "<=" };
                let _ = writeln!(
                    s,
                    "{},\"{}\",{},{}{},{}",
                    r.suite,
                    r.name,
                    num(r.max_deviation),
                    rel,
                    num(r.threshold),
                    if r.pass { "PASS" } else { "FAIL" }
                );
            }
            s
        }
        Format::Json => format!("{}\n", serde_json::to_string(&rows).expect("serialisable")),
    };
    if rows.iter().all(|r| r.pass) {
        Ok(text)
    } else {
        print!("{text}");
        let n = rows.iter().filter(|r| !r.pass).count();
        Err(Failure::Verification(format!("{n} check(s) failed")))
    }
}

const MEASURE_COLUMNS: [&str; 11] =
    ["t", "s", "rho", "theta", "alpha", "r", "x", "omega", "phi", "phi_tilde", "kappa_g"];

fn cmd_measures(space: Space, k: Option<f64>, body: &PathBuf, samples: usize, out: Format) -> Result<String, Failure> {
    if space == Space::Hilbert {
        return Err(bad("measures need a constant-curvature space"));
    }
    if samples == 0 {
        return Err(bad("samples must be positive"));
    }
    let k = curvature(space, k)?;
    let shape = read_body(body)?.to_body()?;
    if !matches!(shape, ConvexBody::Smooth(_)) {
        return Err(bad("measures need a smooth body"));
    }
    let b = validate(shape, k)?;
    let mut rows = Vec::with_capacity(samples);
    for i in 0..samples {
        let t = std::f64::consts::TAU * i as f64 / samples as f64;
        let f = b.support_frame_at(t)?;
        let s = b.arclength_to(t)?;
        let m = measure_ratios(&b, t)?;
        let nan = f64::NAN;
        let mut row = vec![
            t,
            s,
            f.frame.rho,
            f.frame.theta,
            f.frame.alpha,
            f.r,
            f.x,
            f.omega,
            f.phi.unwrap_or(nan),
            f.phi_tilde.unwrap_or(nan),
            f.frame.kappa_g,
        ];
        row.extend(m.values());
        rows.push(row);
    }
    let names: Vec<&str> = MEASURE_COLUMNS.iter().chain(MeasureRatios::COLUMNS.iter()).copied().collect();
    Ok(match out {
        Format::Csv => {
            let mut s = names.join(",");
            s.push('\n');
            for r in &rows {
                s.push_str(&r.iter().map(|&v| num(v)).collect::<Vec<_>>().join(","));
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let v: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    let m: serde_json::Map<String, serde_json::Value> = names
                        .iter()
                        .zip(r)
                        .map(|(n, &x)| (n.to_string(), if x.is_finite() { json!(x) } else { serde_json::Value::Null }))
                        .collect();
                    serde_json::Value::Object(m)
                })
                .collect();
            format!("{}\n", serde_json::Value::Array(v))
        }
    })
}

fn configure_threads() {
    if let Some(n) = std::env::var("CROFTONLAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Perimeter { space, k, method, body, domain, tol, samples, out } => {
            cmd_perimeter(*space, *k, method, body, domain, *tol, *samples, *out)
        }
        Command::Distance { space, k, method, domain, p, q, seed, samples, out } => {
            cmd_distance(*space, *k, method, domain, p, q, *seed, *samples, *out)
        }
        Command::Verify { suite, seed, threshold_scale, out } => cmd_verify(suite, *seed, *threshold_scale, *out),
        Command::Measures { space, k, body, samples, out } => cmd_measures(*space, *k, body, *samples, *out),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            println!("{}", json!({"error": e.code()}));
            eprintln!("{e}");
            ExitCode::from(2)
        }
        Err(Failure::NotConverged(msg)) => {
            eprintln!("{}", json!({"error": "NONCONVERGED"}));
            eprintln!("{msg}");
            ExitCode::from(3)
        }
    }
}
