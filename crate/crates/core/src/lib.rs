//! Perimeter formulas for convex bodies in the Euclidean plane, the sphere
//! and the hyperbolic plane, and Cauchy and Crofton formulas for planar
//! Hilbert geometries.
//!
//! Points live in a chart where geodesics are straight lines: the plane
//! itself for `k = 0`, the Klein disk for `k < 0` and the gnomonic chart
//! for `k > 0`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod body;
pub mod curvature;
pub mod error;
pub mod hilbert;
pub mod measures;
pub mod models;
pub mod perimeter;
pub mod quadrature;
pub mod random;
pub mod schema;
pub mod verify;

pub use body::{validate, validate_closed_curve, BoundaryFrame, ConvexBody, SupportFrame, TrigCurve, ValidBody};
pub use curvature::{Curvature, Regime, RightTriangle};
pub use error::{GeomError, Result};
pub use hilbert::{hilbert_distance, HilbertDomain, McResult, PsiAngles};
pub use measures::MeasureRatios;
pub use models::{ChartLine, ChartPoint};
pub use perimeter::{Method, PerimeterReport};
pub use quadrature::QuadResult;
