//! JSON scene files.
//!
//! ```json
//! {
//!   "triangle": {"s12": "7", "s13": 6, "s23": "5"},
//!   "centers": [{"x": 1, "y": "1/2", "z": 3}]
//! }
//! ```
//!
//! `"triangle"` may instead give `{"q12", "q13", "q23"}`, squared side
//! lengths, which keeps sides such as `sqrt 2` exact. A single `"center"`
//! object and a `"cosines": {"c12", "c13", "c23"}` object are also accepted.
//! Numbers may be JSON numbers or strings `"p"` / `"p/q"`.

use std::path::Path;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::Value;
use thiserror::Error;

use crate::p3p::{CameraCenter, P3pError, Triangle};
use crate::polyarith::parse_rational;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid JSON at line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
    #[error("field `{field}`: {msg}")]
    Field { field: String, msg: String },
    #[error("field `{field}`: {source}")]
    Degenerate {
        field: String,
        #[source]
        source: P3pError,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub triangle: Triangle,
    pub centers: Vec<CameraCenter>,
    /// Bearing cosines `(c12, c13, c23)` when given directly.
    pub cosines: Option<[f64; 3]>,
}

pub fn ingest_scene(path: impl AsRef<Path>) -> Result<Scene, SceneError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| SceneError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_scene(&text)
}

pub fn parse_scene(text: &str) -> Result<Scene, SceneError> {
    let root: Value = serde_json::from_str(text).map_err(|e| SceneError::Json {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    let tri = object(&root, "triangle", "triangle")?;
    let triangle = if tri.get("q12").is_some() {
        let q = ["q12", "q13", "q23"].map(|k| rational(tri, k, &format!("triangle.{k}")));
        let [a, b, c] = q;
        let (a, b, c) = (a?, b?, c?);
        Triangle::from_squared(a, b, c)
    } else {
        let s = ["s12", "s13", "s23"].map(|k| rational(tri, k, &format!("triangle.{k}")));
        let [a, b, c] = s;
        let (a, b, c) = (a?, b?, c?);
        Triangle::from_squared(&a * &a, &b * &b, &c * &c)
    }
    .map_err(|source| SceneError::Degenerate {
        field: "triangle".into(),
        source,
    })?;

    let mut centers = Vec::new();
    if let Some(c) = root.get("center") {
        centers.push(center(c, "center")?);
    }
    if let Some(list) = root.get("centers") {
        let arr = list.as_array().ok_or_else(|| SceneError::Field {
            field: "centers".into(),
            msg: "expected an array".into(),
        })?;
        for (i, c) in arr.iter().enumerate() {
            centers.push(center(c, &format!("centers[{i}]"))?);
        }
    }
    let cosines = match root.get("cosines") {
        Some(_) => {
            let obj = object(&root, "cosines", "cosines")?;
            let mut c = [0.0; 3];
            for (slot, k) in c.iter_mut().zip(["c12", "c13", "c23"]) {
                let field = format!("cosines.{k}");
                *slot = to_f64(&rational(obj, k, &field)?);
                if !(slot.abs() < 1.0) {
                    return Err(SceneError::Field {
                        field,
                        msg: format!("cosine {slot} is outside (-1, 1)"),
                    });
                }
            }
            Some(c)
        }
        None => None,
    };
    if centers.is_empty() && cosines.is_none() {
        return Err(SceneError::Field {
            field: "centers".into(),
            msg: "a scene needs `center`, `centers` or `cosines`".into(),
        });
    }
    Ok(Scene {
        triangle,
        centers,
        cosines,
    })
}

/// Parses `s12,s13,s23` as used on the command line. Entries are numbers,
/// `p/q`, or `sqrt(p/q)` for a side known by its square.
pub fn parse_triangle(spec: &str) -> Result<Triangle, SceneError> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(SceneError::Field {
            field: "triangle".into(),
            msg: format!("expected three comma-separated sides, got `{spec}`"),
        });
    }
    let mut sq = Vec::with_capacity(3);
    for (p, name) in parts.iter().zip(["s12", "s13", "s23"]) {
        let bad = || SceneError::Field {
            field: format!("triangle.{name}"),
            msg: format!("cannot parse `{p}`"),
        };
        let q = match p.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
            Some(inner) => parse_rational(inner).ok_or_else(bad)?,
            None => {
                let v = parse_rational(p)
                    .or_else(|| p.parse::<f64>().ok().and_then(BigRational::from_float))
                    .ok_or_else(bad)?;
                &v * &v
            }
        };
        sq.push(q);
    }
    let [a, b, c]: [BigRational; 3] = sq.try_into().expect("three sides");
    Triangle::from_squared(a, b, c).map_err(|source| SceneError::Degenerate {
        field: "triangle".into(),
        source,
    })
}

/// Parses `x,y,z`.
pub fn parse_center(spec: &str) -> Result<CameraCenter, SceneError> {
    let v = parse_triple(spec, "center")?;
    Ok(CameraCenter::new(v[0], v[1], v[2]))
}

/// Parses three comma-separated numbers or `p/q` values.
pub fn parse_triple(spec: &str, field: &str) -> Result<[f64; 3], SceneError> {
    let vals: Vec<f64> = spec
        .split(',')
        .map(|p| {
            let p = p.trim();
            parse_rational(p)
                .map(|q| to_f64(&q))
                .or_else(|| p.parse::<f64>().ok())
                .ok_or_else(|| SceneError::Field {
                    field: field.into(),
                    msg: format!("cannot parse `{p}`"),
                })
        })
        .collect::<Result<_, _>>()?;
    vals.try_into().map_err(|v: Vec<f64>| SceneError::Field {
        field: field.into(),
        msg: format!("expected three values, got {}", v.len()),
    })
}

fn object<'a>(v: &'a Value, key: &str, field: &str) -> Result<&'a serde_json::Map<String, Value>, SceneError> {
    v.get(key)
        .ok_or_else(|| SceneError::Field {
            field: field.into(),
            msg: "missing".into(),
        })?
        .as_object()
        .ok_or_else(|| SceneError::Field {
            field: field.into(),
            msg: "expected an object".into(),
        })
}

fn center(v: &Value, field: &str) -> Result<CameraCenter, SceneError> {
    let obj = v.as_object().ok_or_else(|| SceneError::Field {
        field: field.into(),
        msg: "expected an object with x, y, z".into(),
    })?;
    let mut xyz = [0.0; 3];
    for (slot, k) in xyz.iter_mut().zip(["x", "y", "z"]) {
        *slot = to_f64(&rational(obj, k, &format!("{field}.{k}"))?);
    }
    Ok(CameraCenter::new(xyz[0], xyz[1], xyz[2]))
}

fn rational(obj: &serde_json::Map<String, Value>, key: &str, field: &str) -> Result<BigRational, SceneError> {
    let bad = |msg: String| SceneError::Field {
        field: field.into(),
        msg,
    };
    match obj.get(key) {
        None => Err(bad("missing".into())),
        Some(Value::String(s)) => parse_rational(s).ok_or_else(|| bad(format!("cannot parse `{s}` as p/q"))),
        Some(Value::Number(n)) => {
            let f = n.as_f64().ok_or_else(|| bad(format!("`{n}` is not finite")))?;
            BigRational::from_float(f).ok_or_else(|| bad(format!("`{n}` is not finite")))
        }
        Some(other) => Err(bad(format!("expected a number or \"p/q\" string, got {other}"))),
    }
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_scene() {
        let s = parse_scene(r#"{"triangle": {"s12": 1, "s13": 1, "s23": 1}, "center": {"x": 0, "y": 0, "z": 1}}"#)
            .unwrap();
        assert_eq!(s.centers.len(), 1);
        assert!(s.cosines.is_none());
    }

    #[test]
    fn rational_strings_and_centers() {
        let s = parse_scene(
            r#"{"triangle": {"s12": "7", "s13": "6", "s23": "5"},
                "centers": [{"x": "1/2", "y": 1, "z": 2}, {"x": 0, "y": 0, "z": "3/4"}]}"#,
        )
        .unwrap();
        assert_eq!([s.triangle.s12, s.triangle.s13, s.triangle.s23], [7.0, 6.0, 5.0]);
        assert_eq!(s.centers[0].x, 0.5);
        assert_eq!(s.centers[1].z, 0.75);
    }

    #[test]
    fn squared_sides_keep_sqrt_two_exact() {
        let s = parse_scene(r#"{"triangle": {"q12": 2, "q13": 1, "q23": 1}, "cosines": {"c12": 0.1, "c13": 0.2, "c23": "1/3"}}"#)
            .unwrap();
        assert_eq!(s.triangle.squared_sides()[0], BigRational::from_integer(2.into()));
        assert!((s.triangle.s12 - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn command_line_triangles() {
        let t = parse_triangle("sqrt(2),1,1").unwrap();
        assert_eq!(t.squared_sides()[0], BigRational::from_integer(2.into()));
        let t = parse_triangle("7, 6, 5/1").unwrap();
        assert_eq!(t.s23, 5.0);
        assert!(parse_triangle("1,2").is_err());
        assert!(matches!(parse_triangle("1,1,3"), Err(SceneError::Degenerate { .. })));
        assert_eq!(parse_center("4,2,1/2").unwrap(), CameraCenter::new(4.0, 2.0, 0.5));
        assert!(parse_center("4,2,x").is_err());
    }

    #[test]
    fn diagnostics_name_the_field() {
        let e = parse_scene(r#"{"triangle": {"s12": 10, "s13": 1, "s23": 1}, "center": {"x": 0, "y": 0, "z": 1}}"#)
            .unwrap_err();
        assert!(matches!(e, SceneError::Degenerate { ref field, source: P3pError::DegenerateTriangle(_) } if field == "triangle"));
        let e = parse_scene(r#"{"triangle": {"s12": 1, "s13": 1, "s23": 1}, "centers": [{"x": 0, "y": "a", "z": 1}]}"#)
            .unwrap_err();
        assert!(e.to_string().contains("centers[0].y"), "{e}");
        let e = parse_scene("{\n  \"triangle\": ,\n}").unwrap_err();
        assert!(matches!(e, SceneError::Json { line: 2, .. }));
    }
}
