//! Morley triangle and the three generatrices where roots become triple.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use serde::Serialize;

use super::StrataError;
use crate::dualspace::{multiplicity, LocalSystem, Multiplicity};
use crate::p3p::{distances, instance_from_center, CameraCenter, Triangle};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MorleyData {
    /// Vertex nearest side BC.
    pub d: [f64; 2],
    /// Vertex nearest side CA.
    pub e: [f64; 2],
    /// Vertex nearest side AB.
    pub f: [f64; 2],
    pub side: f64,
    /// Polar angles about the circumcenter, ascending in `[0, 2 pi)`.
    pub thetas: Vec<f64>,
    pub generatrix_bases: Vec<[f64; 2]>,
}

fn rotate(v: Vector2<f64>, a: f64) -> Vector2<f64> {
    let (s, c) = a.sin_cos();
    Vector2::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

/// Ray direction from `p` towards `q`, turned by `angle` towards `r`.
fn trisector(p: Vector2<f64>, q: Vector2<f64>, r: Vector2<f64>, angle: f64) -> Vector2<f64> {
    let (u, w) = ((q - p).normalize(), (r - p).normalize());
    let sign = (u.x * w.y - u.y * w.x).signum();
    rotate(u, sign * angle)
}

fn intersect(
    p: Vector2<f64>,
    dp: Vector2<f64>,
    q: Vector2<f64>,
    dq: Vector2<f64>,
) -> Result<Vector2<f64>, StrataError> {
    let m = Matrix2::new(dp.x, -dq.x, dp.y, -dq.y);
    let ts = m
        .lu()
        .solve(&(q - p))
        .ok_or_else(|| StrataError::Degenerate("parallel trisectors".into()))?;
    Ok(p + dp * ts.x)
}

/// Morley triangle from intersecting adjacent interior-angle trisectors.
pub fn morley_triangle(t: &Triangle) -> Result<([f64; 2], [f64; 2], [f64; 2], f64), StrataError> {
    let [a, b, c] = t.vertices().map(|v| Vector2::new(v.x, v.y));
    let [ta, tb, tc] = t.angles().map(|x| x / 3.0);
    let f = intersect(a, trisector(a, b, c, ta), b, trisector(b, a, c, tb))?;
    let d = intersect(b, trisector(b, c, a, tb), c, trisector(c, b, a, tc))?;
    let e = intersect(c, trisector(c, a, b, tc), a, trisector(a, c, b, ta))?;
    let side = ((d - e).norm() + (e - f).norm() + (f - d).norm()) / 3.0;
    Ok(([d.x, d.y], [e.x, e.y], [f.x, f.y], side))
}

/// `8R sin(A/3) sin(B/3) sin(C/3)`.
pub fn morley_side_closed_form(t: &Triangle) -> f64 {
    let (_, r) = t.circumcircle();
    8.0 * r * t.angles().iter().map(|a| (a / 3.0).sin()).product::<f64>()
}

/// Coefficients `[c0, c1, c2, c3]` of the cubic in `sin(theta)`:
/// `8K s^3 - 6K s + N` with `K = s13 s23 s12^2`.
pub fn morley_cubic(t: &Triangle) -> [f64; 4] {
    let [q12, q13, q23] = t.squared_sides_f64();
    let k = t.s13 * t.s23 * q12;
    let n = q12 * q13 + q12 * q23 - q13 * q13 + 2.0 * q13 * q23 - q23 * q23;
    [n, -6.0 * k, 0.0, 8.0 * k]
}

/// Real roots of the cubic by the trigonometric formula
/// `s = sin((asin w + 2 pi k) / 3)` with `w = sin(3 theta) = N / (2K)`.
pub fn morley_cubic_roots(t: &Triangle) -> Result<[f64; 3], StrataError> {
    let [n, mk6, _, _] = morley_cubic(t);
    let k = -mk6 / 6.0;
    let w = n / (2.0 * k);
    if !w.is_finite() || w.abs() > 1.0 + 1e-12 {
        return Err(StrataError::CubicRootFailure { sin3theta: w });
    }
    let a = w.clamp(-1.0, 1.0).asin();
    Ok([0, 1, 2].map(|j| ((a + 2.0 * PI * j as f64) / 3.0).sin()))
}

fn wrap(x: f64) -> f64 {
    x.rem_euclid(2.0 * PI)
}

/// Multiplicity at the probe `circumcenter + R (cos theta, sin theta) + (0, 0, h)`.
pub fn probe_multiplicity(t: &Triangle, theta: f64, h: f64, tau: f64, max_order: u32) -> Result<Multiplicity, StrataError> {
    let o = generatrix_point(t, theta, h);
    let inst = instance_from_center(t, o)?;
    let xi = distances(t, o).map(|x| Complex64::new(x, 0.0));
    Ok(multiplicity(&LocalSystem::new(&inst, &xi), max_order, tau).0)
}

/// The point at height `h` on the cylinder generatrix at angle `theta`.
pub fn generatrix_point(t: &Triangle, theta: f64, h: f64) -> CameraCenter {
    let ([cx, cy], r) = t.circumcircle();
    CameraCenter::new(cx + r * theta.cos(), cy + r * theta.sin(), h)
}

/// The three generatrix angles: every lift `theta` of a cubic root, kept when
/// the probe at height `R` has multiplicity 3.
pub fn morley_angles(t: &Triangle, tau: f64, max_order: u32) -> Result<(Vec<f64>, Vec<[f64; 2]>), StrataError> {
    let roots = morley_cubic_roots(t)?;
    let mut cands: Vec<f64> = Vec::new();
    for s in roots {
        let a = s.clamp(-1.0, 1.0).asin();
        for th in [wrap(a), wrap(PI - a)] {
            let dup = cands.iter().any(|c| {
                let d = (c - th).abs();
                d.min(2.0 * PI - d) < 1e-9
            });
            if !dup {
                cands.push(th);
            }
        }
    }
    let (_, r) = t.circumcircle();
    let mut thetas = Vec::new();
    for th in cands {
        if probe_multiplicity(t, th, r, tau, max_order)? == Multiplicity::Finite(3) {
            thetas.push(th);
        }
    }
    thetas.sort_by(f64::total_cmp);
    if thetas.len() != 3 {
        return Err(StrataError::GeneratrixCount { found: thetas.len() });
    }
    let bases = thetas
        .iter()
        .map(|th| {
            let p = generatrix_point(t, *th, 0.0);
            [p.x, p.y]
        })
        .collect();
    Ok((thetas, bases))
}

/// Morley vertices together with the generatrix angles.
pub fn morley_data(t: &Triangle, tau: f64, max_order: u32) -> Result<MorleyData, StrataError> {
    let (d, e, f, side) = morley_triangle(t)?;
    let (thetas, generatrix_bases) = morley_angles(t, tau, max_order)?;
    Ok(MorleyData {
        d,
        e,
        f,
        side,
        thetas,
        generatrix_bases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::p3p::make_triangle;

    #[test]
    fn equilateral_morley_is_concentric() {
        let t = make_triangle(1.0, 1.0, 1.0).unwrap();
        let (d, e, f, side) = morley_triangle(&t).unwrap();
        let ([cx, cy], _) = t.circumcircle();
        let cen = [(d[0] + e[0] + f[0]) / 3.0, (d[1] + e[1] + f[1]) / 3.0];
        assert!((cen[0] - cx).abs() < 1e-14 && (cen[1] - cy).abs() < 1e-14);
        assert!((side - morley_side_closed_form(&t)).abs() < 1e-14);
        // F sits straight below the center, as C sits straight above it
        assert!((f[0] - cx).abs() < 1e-14);
    }

    #[test]
    fn acute_fixture_side_matches_closed_form() {
        let t = make_triangle(7.0, 6.0, 5.0).unwrap();
        let (d, e, f, side) = morley_triangle(&t).unwrap();
        let dist = |p: [f64; 2], q: [f64; 2]| ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
        for s in [dist(d, e), dist(e, f), dist(f, d)] {
            assert!((s - side).abs() < 1e-12 * side);
        }
        assert!((side - morley_side_closed_form(&t)).abs() < 1e-12 * side);
    }

    #[test]
    fn equilateral_generatrix_angles() {
        let t = make_triangle(1.0, 1.0, 1.0).unwrap();
        let (th, _) = morley_angles(&t, 1e-8, 6).unwrap();
        let expect = [PI / 6.0, 5.0 * PI / 6.0, 3.0 * PI / 2.0];
        for (a, b) in th.iter().zip(expect) {
            assert!((a - b).abs() < 1e-9, "{th:?}");
        }
    }

    #[test]
    fn cubic_residual_and_identity_angle() {
        let t = make_triangle(7.0, 6.0, 5.0).unwrap();
        let (th, _) = morley_angles(&t, 1e-8, 6).unwrap();
        let c = morley_cubic(&t);
        for x in &th {
            let s = x.sin();
            let v = (c[0] + c[1] * s + c[3] * s * s * s) / c[3];
            assert!(v.abs() < 1e-10);
        }
        let [a, b, _] = t.angles().map(|x| x / 3.0);
        let id = wrap(a - b + PI / 6.0);
        assert!(th.iter().any(|x| (x - id).abs() < 1e-9), "{th:?} vs {id}");
    }
}
