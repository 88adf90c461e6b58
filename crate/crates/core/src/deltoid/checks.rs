//! Geometric checks on the fitted surfaces: component membership,
//! tangency with the cylinder, the cusp locus and its non-planarity.

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;
use serde::Serialize;

use super::fit::scaled_center;
use crate::harness::FixtureTriangle;
use crate::p3p::{CameraCenter, Triangle};
use crate::polyarith::ImplicitSurfaceModel;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentMatch {
    /// Component label, or `"fitted"` for the fitted model.
    pub component: String,
    pub value: f64,
}

/// The component of minimum term-mass-normalized value at `e`, over the
/// nontrivial transcribed components and the fitted `e'` model.
pub fn component_membership(
    fixture: &FixtureTriangle,
    e_model: Option<&ImplicitSurfaceModel>,
    circumdiameter: f64,
    e: &[Complex64; 3],
) -> ComponentMatch {
    let mut best = ComponentMatch {
        component: String::new(),
        value: f64::INFINITY,
    };
    for c in fixture.nontrivial() {
        let v = c.poly.normalized_abs_complex(e).expect("three variables");
        if v < best.value {
            best = ComponentMatch {
                component: c.label.clone(),
                value: v,
            };
        }
    }
    if let Some(m) = e_model {
        let scaled: Vec<Complex64> = e.iter().map(|x| x / circumdiameter).collect();
        let v = m.normalized_abs_complex(&scaled);
        if v < best.value {
            best = ComponentMatch {
                component: "fitted".into(),
                value: v,
            };
        }
    }
    best
}

/// Gradient of the circle `x^2 + y^2 - x2 x + k y` defining the cylinder.
fn cylinder_gradient(t: &Triangle, o: &CameraCenter) -> Vector3<f64> {
    let k = (t.x2 * t.x3 - t.x3 * t.x3 - t.y3 * t.y3) / t.y3;
    Vector3::new(2.0 * o.x - t.x2, 2.0 * o.y + k, 0.0)
}

/// `|grad cyl x grad model| / (|grad cyl| |grad model| + eps)` at each probe.
pub fn tangency_check(t: &Triangle, xyz_model: &ImplicitSurfaceModel, probes: &[CameraCenter]) -> Vec<f64> {
    probes
        .iter()
        .map(|o| {
            let gc = cylinder_gradient(t, o);
            let gm = Vector3::from_vec(xyz_model.gradient(&scaled_center(t, o)));
            gc.cross(&gm).norm() / (gc.norm() * gm.norm() + f64::EPSILON)
        })
        .collect()
}

/// `|model value|` at each probe, in scaled coordinates.
pub fn model_values(t: &Triangle, xyz_model: &ImplicitSurfaceModel, probes: &[CameraCenter]) -> Vec<f64> {
    probes
        .iter()
        .map(|o| xyz_model.eval(&scaled_center(t, o)).abs())
        .collect()
}

/// Local picture of the fitted surface at a point of the circumcircle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleCrossing {
    pub value: f64,
    /// Model gradient norm divided by the median at the sample points.
    pub gradient_ratio: f64,
    /// Normalized cross product of the raw gradients.
    pub gradient_cross: f64,
    /// Smallest normalized cross product between the cylinder normal and
    /// the normals of the real branches of the tangent cone, when the model
    /// is singular there and the cone has real branches.
    pub branch_cross: Option<f64>,
}

/// Inspects the fitted surface at circumcircle points.
///
/// The circumcircle lies on the surface as a double curve, so the raw
/// gradient vanishes there. The second-order cone in the plane spanned by
/// the horizontal cylinder normal `n` and the vertical `z` gives the
/// branch tangent planes; each contains the circle tangent.
pub fn circle_crossing(
    t: &Triangle,
    xyz_model: &ImplicitSurfaceModel,
    probes: &[CameraCenter],
    reference: &[Vec<f64>],
) -> Vec<CircleCrossing> {
    let med = median(
        reference
            .iter()
            .map(|p| Vector3::from_vec(xyz_model.gradient(p)).norm())
            .collect(),
    );
    probes
        .iter()
        .map(|o| {
            let p = scaled_center(t, o);
            let gc = cylinder_gradient(t, o);
            let gm = Vector3::from_vec(xyz_model.gradient(&p));
            let h = xyz_model.hessian(&p);
            let h = nalgebra::Matrix3::from_fn(|r, c| h[r][c]);
            let n = gc.normalize();
            let z = Vector3::z();
            let q = nalgebra::Matrix2::new(
                n.dot(&(h * n)),
                n.dot(&(h * z)),
                z.dot(&(h * n)),
                z.dot(&(h * z)),
            );
            let eig = q.symmetric_eigen();
            let (l0, l1) = (eig.eigenvalues[0], eig.eigenvalues[1]);
            let branch_cross = (l0 * l1 < 0.0).then(|| {
                let (v0, v1) = (eig.eigenvectors.column(0), eig.eigenvectors.column(1));
                [1.0, -1.0]
                    .iter()
                    .map(|sgn| {
                        // direction in (n, z) along which the quadratic form vanishes
                        let d = v0 * l1.abs().sqrt() + v1 * (sgn * l0.abs().sqrt());
                        d[0].abs() / d.norm()
                    })
                    .fold(f64::INFINITY, f64::min)
            });
            CircleCrossing {
                value: xyz_model.eval(&p).abs(),
                gradient_ratio: gm.norm() / med,
                gradient_cross: gc.cross(&gm).norm() / (gc.norm() * gm.norm() + f64::EPSILON),
                branch_cross,
            }
        })
        .collect()
}

fn gradient_norm(model: &ImplicitSurfaceModel, p: &[Complex64]) -> f64 {
    model.gradient_complex(p).iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    if v.is_empty() {
        return f64::NAN;
    }
    v[v.len() / 2]
}

/// Gradient norms at `cusp_points` divided by the median gradient norm at
/// `reference` points. Points are in the model's scaled coordinates.
pub fn cusp_check(model: &ImplicitSurfaceModel, cusp_points: &[Vec<Complex64>], reference: &[Vec<Complex64>]) -> Vec<f64> {
    let med = median(reference.iter().map(|p| gradient_norm(model, p)).collect());
    cusp_points.iter().map(|p| gradient_norm(model, p) / med).collect()
}

/// RMS distance of `points` to their least-squares plane.
pub fn plane_fit_residual(points: &[CameraCenter]) -> f64 {
    let n = points.len();
    if n < 4 {
        return 0.0;
    }
    let mean = points.iter().map(|p| p.to_vector()).sum::<Vector3<f64>>() / n as f64;
    let m = DMatrix::from_fn(n, 3, |r, c| (points[r].to_vector() - mean)[c]);
    let sv = m.singular_values();
    let smallest = sv.iter().copied().fold(f64::INFINITY, f64::min);
    smallest / (n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::fixture_by_name;

    #[test]
    fn plane_residual_of_planar_and_helix() {
        let flat: Vec<CameraCenter> = (0..10).map(|i| CameraCenter::new(i as f64, (i * i) as f64, 2.0)).collect();
        assert!(plane_fit_residual(&flat) < 1e-12);
        let helix: Vec<CameraCenter> = (0..40)
            .map(|i| {
                let a = i as f64 * 0.3;
                CameraCenter::new(a.cos(), a.sin(), 0.1 * a)
            })
            .collect();
        assert!(plane_fit_residual(&helix) > 1e-2);
    }

    #[test]
    fn membership_on_a_quadric() {
        let f = fixture_by_name("general_acute").unwrap();
        // 5 a^2 - 2 a b + 5 b^2 = 245 at b = 0, a = 7
        let e = [7.0, 0.0, 3.0].map(|x| Complex64::new(x, 0.0));
        let m = component_membership(&f, None, 1.0, &e);
        assert!(m.value < 1e-15);
        assert!(m.component.starts_with("5*e1p^2"));
    }
}
