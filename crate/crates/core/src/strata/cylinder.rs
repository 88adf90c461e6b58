//! Closed-form predicates: danger cylinder in both coordinate systems,
//! circumcircle, coplanarity volume and the generatrix generators.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::forms::{cayley_menger_form, cylinder_form, eval_at_squares, generatrix_generators};
use crate::p3p::{distances, distances_sq_exact, CameraCenter, Triangle};
use crate::polyarith::SparsePoly;

/// The cylinder form at distances `e`.
pub fn danger_cylinder_value_e(t: &Triangle, e: &[Complex64; 3]) -> Complex64 {
    cylinder_form(t.squared_sides())
        .eval_complex(e)
        .expect("three distance variables")
}

pub fn danger_cylinder_value_e_exact(t: &Triangle, e_sq: &[BigRational; 3]) -> BigRational {
    eval_at_squares(&cylinder_form(t.squared_sides()), e_sq)
}

/// `|value|` after scaling distances and sides by the circumdiameter and the
/// form to unit largest coefficient.
pub fn cylinder_membership_e(t: &Triangle, e: &[Complex64; 3]) -> f64 {
    let (_, r) = circumcircle_data(t);
    let d = 2.0 * r;
    let exact = t.squared_sides().clone().map(|q| {
        q / BigRational::from_float(d * d).expect("finite circumdiameter")
    });
    let form = cylinder_form(&exact);
    let scaled: [Complex64; 3] = e.map(|x| x / d);
    let value = form.eval_complex(&scaled).expect("three variables").norm();
    value / crate::polyarith::rational_to_f64(&form.max_abs_coefficient())
}

/// Circle equation `x^2 + y^2 - x2 x + ((x2 x3 - x3^2 - y3^2)/y3) y` at the
/// projection of `o`; independent of `z`.
pub fn danger_cylinder_value_xyz(t: &Triangle, o: CameraCenter) -> f64 {
    let k = (t.x2 * t.x3 - t.x3 * t.x3 - t.y3 * t.y3) / t.y3;
    o.x * o.x + o.y * o.y - t.x2 * o.x + k * o.y
}

/// Exact circle value when the placement is rational.
pub fn danger_cylinder_value_xyz_exact(t: &Triangle, o: CameraCenter) -> Option<BigRational> {
    let [x2, x3, y3] = t.exact_placement()?;
    let [x, y, _] = o.to_exact()?;
    let k = (x2 * x3 - x3 * x3 - y3 * y3) / y3;
    Some(&x * &x + &y * &y - x2 * &x + k * &y)
}

/// Circle value divided by the squared circumdiameter.
pub fn cylinder_membership_xyz(t: &Triangle, o: CameraCenter) -> f64 {
    let (_, r) = circumcircle_data(t);
    danger_cylinder_value_xyz(t, o).abs() / (4.0 * r * r)
}

/// Whether `o` is on the danger cylinder, and whether that was decided
/// exactly. Exact arithmetic settles membership when it proves the value
/// is zero; otherwise the normalized float test decides, since binary
/// coordinates of a point meant to be on the cylinder are rarely exact.
pub fn on_danger_cylinder(t: &Triangle, o: CameraCenter, tol: f64) -> (bool, bool) {
    if let Some(sq) = distances_sq_exact(t, o) {
        if danger_cylinder_value_e_exact(t, &sq).is_zero() {
            return (true, true);
        }
    }
    let e = distances(t, o).map(|x| Complex64::new(x, 0.0));
    (cylinder_membership_e(t, &e) < tol, false)
}

/// Circumcenter and circumradius.
pub fn circumcircle_data(t: &Triangle) -> ([f64; 2], f64) {
    t.circumcircle()
}

/// Squared volume of the tetrahedron `O ABC` from the distances.
pub fn cayley_menger_volume_sq(t: &Triangle, e: &[Complex64; 3]) -> Complex64 {
    cayley_menger_form(t.squared_sides())
        .eval_complex(e)
        .expect("three distance variables")
}

pub fn cayley_menger_volume_sq_exact(t: &Triangle, e_sq: &[BigRational; 3]) -> BigRational {
    eval_at_squares(&cayley_menger_form(t.squared_sides()), e_sq)
}

/// The four generators cutting out the Morley generatrices.
pub fn i1_generators(t: &Triangle) -> [SparsePoly; 4] {
    generatrix_generators(t.squared_sides())
}

/// Largest term-mass-normalized value of the generators at `e`.
pub fn i1_max_normalized(t: &Triangle, e: &[Complex64; 3]) -> f64 {
    i1_generators(t)
        .iter()
        .map(|g| g.normalized_abs_complex(e).expect("three variables"))
        .fold(0.0, f64::max)
}

/// Whether the projection of `o` sits on `B`, `C` or the antipode of `A`,
/// where the generatrix ideal has spurious points.
pub fn is_i3_point(t: &Triangle, o: CameraCenter, tol: f64) -> bool {
    let ([cx, cy], r) = circumcircle_data(t);
    let targets = [[t.x2, 0.0], [t.x3, t.y3], [2.0 * cx, 2.0 * cy]];
    targets
        .iter()
        .any(|p| ((o.x - p[0]).powi(2) + (o.y - p[1]).powi(2)).sqrt() <= tol * 2.0 * r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::p3p::make_triangle;

    #[test]
    fn right_triangle_cylinder_both_forms() {
        let t = make_triangle(5.0, 4.0, 3.0).unwrap();
        for z in [-3.0, 0.5, 1.0, 10.0] {
            let o = CameraCenter::new(4.0, 2.0, z);
            assert!(danger_cylinder_value_xyz(&t, o).abs() < 1e-13);
            assert!(danger_cylinder_value_xyz_exact(&t, o).unwrap().is_zero());
            assert_eq!(on_danger_cylinder(&t, o, 1e-9), (true, true));
        }
        let ([cx, cy], r) = circumcircle_data(&t);
        assert_eq!((cx, cy, r), (2.5, 0.0, 2.5));
        let c = CameraCenter::new(cx, cy, 1.0);
        assert!((danger_cylinder_value_xyz(&t, c) + r * r).abs() < 1e-14);
    }

    #[test]
    fn volume_matches_base_times_height() {
        let t = make_triangle(5.0, 4.0, 3.0).unwrap();
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(cayley_menger_volume_sq_exact(&t, &[q(21, 1), q(6, 1), q(9, 5)]), q(4, 1));
        let e = distances(&t, CameraCenter::new(1.0, 1.0, 0.0)).map(|x| Complex64::new(x, 0.0));
        assert!(cayley_menger_volume_sq(&t, &e).norm() < 1e-12);
    }

    #[test]
    fn i3_points_detected() {
        let t = make_triangle(7.0, 6.0, 5.0).unwrap();
        assert!(is_i3_point(&t, CameraCenter::new(t.x2, 0.0, 3.0), 1e-9));
        assert!(!is_i3_point(&t, CameraCenter::new(1.0, 1.0, 3.0), 1e-9));
    }
}
