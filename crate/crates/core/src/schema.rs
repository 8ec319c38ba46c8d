//! JSON description of bodies and Hilbert domains.
//!
//! ```json
//! {"kind": "polygon", "vertices": [[x, y], ...]}
//! {"kind": "circle", "center": [x, y], "chart_radius": r}
//! {"kind": "ellipse", "center": [x, y], "a": a, "b": b}
//! {"kind": "trig", "x_coeffs": [a0, a1, b1, ...], "y_coeffs": [...]}
//! {"kind": "segment", "endpoints": [[x, y], [x, y]]}
//! {"kind": "point", "at": [x, y]}
//! ```
//!
//! Any of these may carry `"role": "hilbert_domain"`. Coordinates are chart
//! coordinates.

use serde::{Deserialize, Serialize};

use crate::body::{ConvexBody, TrigCurve};
use crate::error::{GeomError, Result};
use crate::models::ChartPoint;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Shape {
    Polygon { vertices: Vec<[f64; 2]> },
    Circle { center: [f64; 2], chart_radius: f64 },
    Ellipse { center: [f64; 2], a: f64, b: f64 },
    Trig { x_coeffs: Vec<f64>, y_coeffs: Vec<f64> },
    Segment { endpoints: [[f64; 2]; 2] },
    Point { at: [f64; 2] },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Body,
    HilbertDomain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodyFile {
    #[serde(flatten)]
    pub shape: Shape,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<Role>,
}

impl BodyFile {
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(GeomError::BadInput("empty body description".into()));
        }
        serde_json::from_str(text).map_err(|e| GeomError::BadInput(e.to_string()))
    }

    pub fn to_body(&self) -> Result<ConvexBody> {
        let pt = |p: [f64; 2]| ChartPoint::from(p);
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        let body = match &self.shape {
            Shape::Polygon { vertices } => ConvexBody::Polygon(vertices.iter().copied().map(pt).collect()),
            Shape::Circle { center, chart_radius } => {
                if !(*chart_radius > 0.0) {
                    return Err(GeomError::BadInput("chart_radius must be positive".into()));
                }
                ConvexBody::Smooth(TrigCurve::circle(pt(*center), *chart_radius))
            }
            Shape::Ellipse { center, a, b } => {
                if !(*a > 0.0 && *b > 0.0) {
                    return Err(GeomError::BadInput("semi-axes must be positive".into()));
                }
                ConvexBody::Smooth(TrigCurve::ellipse(pt(*center), *a, *b))
            }
            Shape::Trig { x_coeffs, y_coeffs } => {
                ConvexBody::Smooth(TrigCurve::new(x_coeffs.clone(), y_coeffs.clone())?)
            }
            Shape::Segment { endpoints } => ConvexBody::Degenerate(endpoints.iter().copied().map(pt).collect()),
            Shape::Point { at } => ConvexBody::Degenerate(vec![pt(*at)]),
        };
        let ok = match &body {
            ConvexBody::Polygon(v) | ConvexBody::Degenerate(v) => v.iter().all(|p| p.is_finite()),
            ConvexBody::Smooth(c) => finite(c.x_coeffs()) && finite(c.y_coeffs()),
        };
        if !ok {
            return Err(GeomError::BadInput("non-finite coordinate".into()));
        }
        Ok(body)
    }

    pub fn is_domain(&self) -> bool {
        self.role == Some(Role::HilbertDomain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_kind() {
        let c =
            BodyFile::parse(r#"{"kind":"circle","center":[0,0],"chart_radius":0.5,"role":"hilbert_domain"}"#).unwrap();
        assert!(c.is_domain());
        assert!(matches!(c.to_body().unwrap(), ConvexBody::Smooth(_)));
        let p = BodyFile::parse(r#"{"kind":"polygon","vertices":[[0,0],[1,0],[0,1]]}"#).unwrap();
        assert!(!p.is_domain());
        assert_eq!(
            p.to_body().unwrap(),
            ConvexBody::Polygon(vec![ChartPoint::ORIGIN, ChartPoint::new(1.0, 0.0), ChartPoint::new(0.0, 1.0)])
        );
        let t = BodyFile::parse(r#"{"kind":"trig","x_coeffs":[0,0.3,0],"y_coeffs":[0,0,0.2]}"#).unwrap();
        assert!(t.to_body().is_ok());
        assert!(BodyFile::parse(r#"{"kind":"segment","endpoints":[[0,0],[0.1,0]]}"#).unwrap().to_body().is_ok());
        assert!(BodyFile::parse(r#"{"kind":"point","at":[0.1,0]}"#).unwrap().to_body().is_ok());
    }

    #[test]
    fn rejects_bad_input() {
        for text in ["", "  ", "{}", r#"{"kind":"blob"}"#, r#"{"kind":"circle","center":[0,0],"chart_radius":-1}"#] {
            let e = BodyFile::parse(text).and_then(|b| b.to_body());
            assert_eq!(e.unwrap_err().code(), "BAD_INPUT", "{text}");
        }
    }

    #[test]
    fn round_trips() {
        let b =
            BodyFile { shape: Shape::Ellipse { center: [0.1, 0.0], a: 0.5, b: 0.3 }, role: Some(Role::HilbertDomain) };
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(BodyFile::parse(&s).unwrap(), b);
    }
}
