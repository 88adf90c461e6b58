//! Triangle placement and camera-center geometry.

use nalgebra::Vector3;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::P3pError;
use crate::polyarith::rational_to_f64;

/// A planar triangle with vertices `A=(0,0,0)`, `B=(x2,0,0)`, `C=(x3,y3,0)`.
///
/// Squared side lengths are kept exactly so that triangles such as
/// `(sqrt 2, 1, 1)` still have rational data.
#[derive(Debug, Clone, PartialEq)]
pub struct Triangle {
    pub s12: f64,
    pub s13: f64,
    pub s23: f64,
    sq: [BigRational; 3],
    pub x2: f64,
    pub x3: f64,
    pub y3: f64,
    exact_placement: Option<[BigRational; 3]>,
}

/// A camera center in the triangle's placement frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CameraCenter {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl CameraCenter {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        CameraCenter { x, y, z }
    }

    pub fn to_vector(self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn mirrored(self) -> Self {
        CameraCenter { z: -self.z, ..self }
    }

    /// Exact rational value of the binary coordinates.
    pub fn to_exact(self) -> Option<[BigRational; 3]> {
        Some([
            BigRational::from_float(self.x)?,
            BigRational::from_float(self.y)?,
            BigRational::from_float(self.z)?,
        ])
    }
}

/// Builds a triangle from side lengths.
pub fn make_triangle(s12: f64, s13: f64, s23: f64) -> Result<Triangle, P3pError> {
    if !(s12 > 0.0 && s13 > 0.0 && s23 > 0.0) || !(s12 + s13 + s23).is_finite() {
        return Err(P3pError::DegenerateTriangle(format!(
            "side lengths must be positive and finite, got ({s12}, {s13}, {s23})"
        )));
    }
    let sq = [s12, s13, s23].map(|s| {
        let q = BigRational::from_float(s).expect("finite side");
        &q * &q
    });
    Triangle::build(s12, s13, s23, sq)
}

impl Triangle {
    /// Builds a triangle from exact squared side lengths.
    pub fn from_squared(
        q12: BigRational,
        q13: BigRational,
        q23: BigRational,
    ) -> Result<Triangle, P3pError> {
        if !(q12.is_positive() && q13.is_positive() && q23.is_positive()) {
            return Err(P3pError::DegenerateTriangle(
                "squared sides must be positive".into(),
            ));
        }
        let s = [&q12, &q13, &q23].map(|q| rational_to_f64(q).sqrt());
        Triangle::build(s[0], s[1], s[2], [q12, q13, q23])
    }

    fn build(s12: f64, s13: f64, s23: f64, sq: [BigRational; 3]) -> Result<Triangle, P3pError> {
        // 16 * area^2 = 2ab + 2ac + 2bc - a^2 - b^2 - c^2 in squared sides
        let [a, b, c] = &sq;
        let two = BigRational::from_integer(2.into());
        let heron = &two * (a * b + a * c + b * c) - a * a - b * b - c * c;
        if !heron.is_positive() {
            return Err(P3pError::DegenerateTriangle(format!(
                "triangle inequality fails for sides ({s12}, {s13}, {s23})"
            )));
        }
        let x2 = s12;
        let x3 = (s12 * s12 + s13 * s13 - s23 * s23) / (2.0 * s12);
        let y3 = (s13 * s13 - x3 * x3).max(0.0).sqrt();
        if y3 <= 0.0 {
            return Err(P3pError::DegenerateTriangle(format!(
                "zero area for sides ({s12}, {s13}, {s23})"
            )));
        }
        let exact_placement = rational_sqrt(a).and_then(|ex2| {
            let ex3 = (a + b - c) / (&two * &ex2);
            let ey3 = rational_sqrt(&(b - &ex3 * &ex3))?;
            Some([ex2, ex3, ey3])
        });
        let (x2, x3, y3) = match &exact_placement {
            Some([p, q, r]) => (rational_to_f64(p), rational_to_f64(q), rational_to_f64(r)),
            None => (x2, x3, y3),
        };
        Ok(Triangle {
            s12,
            s13,
            s23,
            sq,
            x2,
            x3,
            y3,
            exact_placement,
        })
    }

    /// Exact `(s12^2, s13^2, s23^2)`.
    pub fn squared_sides(&self) -> &[BigRational; 3] {
        &self.sq
    }

    pub fn squared_sides_f64(&self) -> [f64; 3] {
        self.sq.clone().map(|q| rational_to_f64(&q))
    }

    /// `(x2, x3, y3)` as rationals when the placement is rational.
    pub fn exact_placement(&self) -> Option<&[BigRational; 3]> {
        self.exact_placement.as_ref()
    }

    pub fn vertices(&self) -> [Vector3<f64>; 3] {
        [
            Vector3::zeros(),
            Vector3::new(self.x2, 0.0, 0.0),
            Vector3::new(self.x3, self.y3, 0.0),
        ]
    }

    /// `sqrt(s12^2 + s13^2 + s23^2)`, the length scale used by tolerances.
    pub fn scale(&self) -> f64 {
        self.squared_sides_f64().iter().sum::<f64>().sqrt()
    }

    /// Interior angles at A, B, C.
    pub fn angles(&self) -> [f64; 3] {
        let [a, b, c] = self.squared_sides_f64();
        let ang = |opp: f64, p: f64, q: f64, lp: f64, lq: f64| {
            ((p + q - opp) / (2.0 * lp * lq)).clamp(-1.0, 1.0).acos()
        };
        [
            ang(c, a, b, self.s12, self.s13),
            ang(b, a, c, self.s12, self.s23),
            ang(a, b, c, self.s13, self.s23),
        ]
    }

    /// Circumcenter (in the plane) and circumradius.
    pub fn circumcircle(&self) -> ([f64; 2], f64) {
        let cx = self.x2 / 2.0;
        let cy = (self.x3 * self.x3 + self.y3 * self.y3 - self.x2 * self.x3) / (2.0 * self.y3);
        ([cx, cy], (cx * cx + cy * cy).sqrt())
    }
}

/// Exact square root of a non-negative rational, when it is rational.
pub(crate) fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    if q.is_zero() {
        return Some(BigRational::zero());
    }
    let root = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(BigRational::new(root(q.numer())?, root(q.denom())?))
}

/// Distances from `o` to the three vertices.
pub fn distances(t: &Triangle, o: CameraCenter) -> [f64; 3] {
    let p = o.to_vector();
    t.vertices().map(|v| (p - v).norm())
}

/// Exact squared distances when the placement is rational.
pub fn distances_sq_exact(t: &Triangle, o: CameraCenter) -> Option<[BigRational; 3]> {
    let [x2, x3, y3] = t.exact_placement()?;
    let [x, y, z] = o.to_exact()?;
    let z2 = &z * &z;
    let d1 = &x * &x + &y * &y + &z2;
    let dx = &x - x2;
    let d2 = &dx * &dx + &y * &y + &z2;
    let (ux, uy) = (&x - x3, &y - y3);
    let d3 = &ux * &ux + &uy * &uy + &z2;
    Some([d1, d2, d3])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn right_triangle_placement_is_exact() {
        let t = make_triangle(5.0, 4.0, 3.0).unwrap();
        let [x2, x3, y3] = t.exact_placement().unwrap();
        assert_eq!((x2, x3, y3), (&q(5, 1), &q(16, 5), &q(12, 5)));
        let d = distances_sq_exact(&t, CameraCenter::new(4.0, 2.0, 1.0)).unwrap();
        assert_eq!(d, [q(21, 1), q(6, 1), q(9, 5)]);
    }

    #[test]
    fn equilateral_placement() {
        let t = make_triangle(1.0, 1.0, 1.0).unwrap();
        assert!(t.exact_placement().is_none());
        assert!((t.x3 - 0.5).abs() < 1e-15);
        assert!((t.y3 - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let (_, r) = t.circumcircle();
        assert!((r - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn degenerate_triangles_rejected() {
        assert!(matches!(make_triangle(1.0, 1.0, 3.0), Err(P3pError::DegenerateTriangle(_))));
        assert!(matches!(make_triangle(2.0, 1.0, 1.0), Err(P3pError::DegenerateTriangle(_))));
        assert!(make_triangle(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn squared_construction_keeps_rational_data() {
        let t = Triangle::from_squared(q(2, 1), q(1, 1), q(1, 1)).unwrap();
        assert_eq!(t.squared_sides()[0], q(2, 1));
        assert!((t.s12 - 2f64.sqrt()).abs() < 1e-15);
        assert!((t.x3 - 2f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn distances_at_vertex_and_axis() {
        let t = make_triangle(5.0, 4.0, 3.0).unwrap();
        let d = distances(&t, CameraCenter::new(0.0, 0.0, 0.0));
        assert_eq!(d[0], 0.0);
        assert!((d[1] - 5.0).abs() < 1e-15 && (d[2] - 4.0).abs() < 1e-15);
        let e = make_triangle(1.0, 1.0, 1.0).unwrap();
        let ([cx, cy], _) = e.circumcircle();
        let d = distances(&e, CameraCenter::new(cx, cy, 0.7));
        let expect = (1.0 / 3.0 + 0.49f64).sqrt();
        assert!(d.iter().all(|v| (v - expect).abs() < 1e-14));
    }

    #[test]
    fn law_of_sines() {
        for (a, b, c) in [(7.0, 6.0, 5.0), (5.0, 3.0, 3.0), (2.3, 1.7, 1.1)] {
            let t = make_triangle(a, b, c).unwrap();
            let (_, r) = t.circumcircle();
            let ang = t.angles();
            assert!((2.0 * r * ang[0].sin() - c).abs() < 1e-12 * c);
            assert!((ang.iter().sum::<f64>() - std::f64::consts::PI).abs() < 1e-12);
        }
    }
}
