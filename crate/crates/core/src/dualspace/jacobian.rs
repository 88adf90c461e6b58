//! Jacobian of the distance system with the cosines eliminated.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::Serialize;

use super::DualError;
use crate::p3p::Triangle;

/// Row `k` differentiates the equation coupling the two vertices other than
/// `k`, so the diagonal is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobianMatrix(pub Matrix3<Complex64>);

/// Rank decision for a 3x3 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankInfo {
    pub corank: usize,
    /// Left null direction (`u^H J = 0`), unit norm, largest entry real positive.
    #[serde(serialize_with = "ser_cvec")]
    pub u: Vector3<Complex64>,
    /// Right null direction (`J v = 0`), same normalization.
    #[serde(serialize_with = "ser_cvec")]
    pub v: Vector3<Complex64>,
    /// Descending.
    pub singular_values: [f64; 3],
    /// Distance of the decision from the threshold, as a ratio >= 1 when the
    /// nearest singular value is a factor that far from `tau * sigma_1`.
    pub margin: f64,
}

pub(crate) fn ser_cvec<S: serde::Serializer>(
    v: &Vector3<Complex64>,
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::Serialize;
    v.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>().serialize(s)
}

/// The Jacobian at `e` in terms of squared sides and distances only.
pub fn jacobian_at(t: &Triangle, e: &[Complex64; 3]) -> Result<JacobianMatrix, DualError> {
    if let Some(i) = e.iter().position(|x| x.norm() == 0.0) {
        return Err(DualError::ZeroComponent { index: i });
    }
    let [q12, q13, q23] = t.squared_sides_f64();
    let sq = |i: usize, j: usize| match (i.min(j), i.max(j)) {
        (0, 1) => q12,
        (0, 2) => q13,
        _ => q23,
    };
    let mut m = Matrix3::zeros();
    for k in 0..3 {
        for i in (0..3).filter(|&i| i != k) {
            let j = 3 - k - i;
            let e2 = |x: usize| e[x] * e[x];
            m[(k, i)] = (e2(i) - e2(j) + sq(i, j)) / e[i];
        }
    }
    Ok(JacobianMatrix(m))
}

/// Corank by `sigma_i < tau * sigma_1` and the null directions.
pub fn corank_and_nullvec(j: &JacobianMatrix, tau: f64) -> RankInfo {
    let svd = j.0.svd(true, true);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sv = order.map(|i| svd.singular_values[i]);
    let u_mat = svd.u.expect("u requested");
    let vt = svd.v_t.expect("v_t requested");
    let last = order[2];
    let u = normalize_phase(u_mat.column(last).into_owned());
    let v = normalize_phase(vt.row(last).transpose().map(|c| c.conj()));
    let thr = tau * sv[0];
    let corank = if sv[0] == 0.0 {
        3
    } else {
        sv.iter().filter(|s| **s < thr).count()
    };
    let margin = if sv[0] == 0.0 {
        f64::INFINITY
    } else {
        sv.iter()
            .map(|s| if *s < thr { thr / s.max(f64::MIN_POSITIVE) } else { s / thr })
            .fold(f64::INFINITY, f64::min)
    };
    RankInfo {
        corank,
        u,
        v,
        singular_values: sv,
        margin,
    }
}

/// Unit norm with the largest-magnitude entry rotated onto the positive
/// real axis.
pub(crate) fn normalize_phase(v: Vector3<Complex64>) -> Vector3<Complex64> {
    let n = v.norm();
    if n == 0.0 {
        return v;
    }
    let big = v
        .iter()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .copied()
        .unwrap_or(Complex64::new(1.0, 0.0));
    let phase = big.conj() / big.norm();
    v.map(|c| c * phase / n)
}

/// The closed-form left null vector
/// `(1, (-e2^2+e3^2+q23)/(e1^2-e3^2-q13), (e2^2-e3^2+q23)/(e1^2-e2^2-q12))`,
/// or `None` when a denominator vanishes.
pub fn closed_form_left_null(t: &Triangle, e: &[Complex64; 3]) -> Option<Vector3<Complex64>> {
    let [q12, q13, q23] = t.squared_sides_f64();
    let s = e.map(|x| x * x);
    let d2 = s[0] - s[2] - q13;
    let d3 = s[0] - s[1] - q12;
    let scale = s.iter().map(|x| x.norm()).sum::<f64>() + q12 + q13 + q23;
    if d2.norm() < 1e-12 * scale || d3.norm() < 1e-12 * scale {
        return None;
    }
    Some(Vector3::new(
        Complex64::new(1.0, 0.0),
        (-s[1] + s[2] + q23) / d2,
        (s[1] - s[2] + q23) / d3,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::p3p::{distances, make_triangle, CameraCenter};

    fn c3(e: [f64; 3]) -> [Complex64; 3] {
        e.map(|x| Complex64::new(x, 0.0))
    }

    #[test]
    fn equilateral_jacobian() {
        let t = make_triangle(1.0, 1.0, 1.0).unwrap();
        let j = jacobian_at(&t, &c3([1.0, 1.0, 1.0])).unwrap();
        let expect = Matrix3::new(0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0);
        assert!((j.0.map(|c| c.re) - expect).norm() < 1e-15);
        assert!((j.0.determinant().re - 2.0).abs() < 1e-14);
        assert_eq!(corank_and_nullvec(&j, 1e-8).corank, 0);
    }

    #[test]
    fn cylinder_point_has_corank_one() {
        let t = make_triangle(5.0, 4.0, 3.0).unwrap();
        let e = c3(distances(&t, CameraCenter::new(4.0, 2.0, 1.0)));
        let info = corank_and_nullvec(&jacobian_at(&t, &e).unwrap(), 1e-8);
        assert_eq!(info.corank, 1);
        assert!(info.singular_values[2] / info.singular_values[0] < 1e-10);
        let closed = closed_form_left_null(&t, &e).unwrap();
        let cos = (closed.dotc(&info.u)).norm() / closed.norm();
        assert!(cos > 1.0 - 1e-8);
        let j = jacobian_at(&t, &e).unwrap();
        assert!((j.0 * info.v).norm() < 1e-10 * info.singular_values[0]);
    }

    #[test]
    fn zero_matrix_has_full_corank() {
        let info = corank_and_nullvec(&JacobianMatrix(Matrix3::zeros()), 1e-8);
        assert_eq!(info.corank, 3);
    }

    #[test]
    fn zero_component_rejected() {
        let t = make_triangle(5.0, 4.0, 3.0).unwrap();
        assert!(matches!(
            jacobian_at(&t, &c3([0.0, 5.0, 4.0])),
            Err(DualError::ZeroComponent { index: 0 })
        ));
    }
}
