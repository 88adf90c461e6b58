//! Pose recovery from distances and center recovery from distances.

use nalgebra::{Matrix3, Vector3};

use super::solver::SolutionTriple;
use super::triangle::{CameraCenter, Triangle};
use super::P3pError;

/// Rigid motion taking world points into the camera frame: `P = R X + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub r: Matrix3<f64>,
    pub t: Vector3<f64>,
}

/// Recovers `(R, t)` with `e_i x_i = R X_i + t` from a physical solution,
/// world points `X` and unit bearing vectors `x`.
pub fn recover_pose(
    sol: &SolutionTriple,
    world: &[Vector3<f64>; 3],
    bearings: &[Vector3<f64>; 3],
) -> Result<Pose, P3pError> {
    if !sol.is_physical {
        return Err(P3pError::NotPhysical);
    }
    let e = sol.real();
    let cam: [Vector3<f64>; 3] = std::array::from_fn(|i| bearings[i].normalize() * e[i]);
    let (w1, w2) = (world[1] - world[0], world[2] - world[0]);
    let wn = w1.cross(&w2);
    if wn.norm() <= 1e-12 * w1.norm() * w2.norm() {
        return Err(P3pError::DegenerateTriangle("world points are collinear".into()));
    }
    let det = cam[0].dot(&cam[1].cross(&cam[2]));
    if det.abs() <= 1e-10 * cam[0].norm() * cam[1].norm() * cam[2].norm() {
        return Err(P3pError::CoplanarDegeneracy);
    }
    let (c1, c2) = (cam[1] - cam[0], cam[2] - cam[0]);
    let mw = Matrix3::from_columns(&[w1, w2, wn]);
    let mc = Matrix3::from_columns(&[c1, c2, c1.cross(&c2)]);
    let inv = mw.try_inverse().ok_or(P3pError::CoplanarDegeneracy)?;
    let r = project_to_rotation(mc * inv);
    let t = cam[0] - r * world[0];
    Ok(Pose { r, t })
}

/// Nearest rotation in the Frobenius norm.
fn project_to_rotation(m: Matrix3<f64>) -> Matrix3<f64> {
    let svd = m.svd(true, true);
    let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
    let mut d = Matrix3::identity();
    if (u * vt).determinant() < 0.0 {
        d[(2, 2)] = -1.0;
    }
    u * d * vt
}

/// The two centers `(x, y, +-z)` at distances `e` from the vertices, positive
/// `z` first.
pub fn locate_center(t: &Triangle, e: &SolutionTriple) -> Result<[CameraCenter; 2], P3pError> {
    if !e.is_physical {
        return Err(P3pError::NotPhysical);
    }
    let [d1, d2, d3] = e.real().map(|v| v * v);
    let x = (d1 - d2 + t.x2 * t.x2) / (2.0 * t.x2);
    let y = (d1 - d3 + t.x3 * t.x3 + t.y3 * t.y3 - 2.0 * t.x3 * x) / (2.0 * t.y3);
    let z2 = d1 - x * x - y * y;
    let tol = 1e-9 * t.scale() * t.scale();
    if z2 < -tol {
        return Err(P3pError::InconsistentDistances { z_sq: z2 });
    }
    let z = z2.max(0.0).sqrt();
    Ok([CameraCenter::new(x, y, z), CameraCenter::new(x, y, -z)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::p3p::{distances, instance_from_center, make_triangle};

    #[test]
    fn identity_scene() {
        let world = [
            Vector3::new(0.2, 0.1, 3.0),
            Vector3::new(-0.5, 0.4, 4.0),
            Vector3::new(0.3, -0.6, 5.0),
        ];
        let bearings = world.map(|p| p.normalize());
        let e = world.map(|p| p.norm());
        let t = make_triangle(
            (world[0] - world[1]).norm(),
            (world[0] - world[2]).norm(),
            (world[1] - world[2]).norm(),
        )
        .unwrap();
        let inst = instance_from_center(&t, CameraCenter::new(0.3, 0.2, 1.0)).unwrap();
        let sol = SolutionTriple::from_real(&inst, e);
        let pose = recover_pose(&sol, &world, &bearings).unwrap();
        assert!((pose.r - Matrix3::identity()).norm() < 1e-12);
        assert!(pose.t.norm() < 1e-12);
    }

    #[test]
    fn locate_round_trip() {
        let t = make_triangle(5.0, 4.0, 3.0).unwrap();
        let o = CameraCenter::new(4.0, 2.0, 1.0);
        let inst = instance_from_center(&t, o).unwrap();
        let sol = SolutionTriple::from_real(&inst, distances(&t, o));
        let [p, m] = locate_center(&t, &sol).unwrap();
        assert!((p.to_vector() - o.to_vector()).norm() < 1e-12);
        assert!((m.to_vector() - o.mirrored().to_vector()).norm() < 1e-12);
    }

    #[test]
    fn locate_rejects_impossible_distances() {
        let t = make_triangle(5.0, 4.0, 3.0).unwrap();
        let inst = instance_from_center(&t, CameraCenter::new(4.0, 2.0, 1.0)).unwrap();
        // too short to reach all three vertices
        let sol = SolutionTriple::from_real(&inst, [0.1, 0.1, 0.1]);
        assert!(matches!(
            locate_center(&t, &sol),
            Err(P3pError::InconsistentDistances { .. })
        ));
    }
}
