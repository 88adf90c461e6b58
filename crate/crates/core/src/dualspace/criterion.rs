//! The stratification criteria `c_k = u^H Delta_k[f](xi)`.
//!
//! For a breadth-one root with right null vector `v` and left null vector
//! `u` of the Jacobian, the order-`k` dual functional `Delta_k` has top part
//! `(v . d)^k / k!` (coefficient `v^alpha` on `d^alpha / alpha!`). Its lower
//! coefficients are solved, in the minimum-norm least-squares sense, from
//! every shifted closedness row and from the unshifted rows projected off
//! `u`. What is left in the `u` direction is `c_k`; it vanishes exactly when
//! the dual space extends to order `k`.

use nalgebra::{DMatrix, DVector, Vector3};
use num_complex::Complex64;
use num_rational::BigRational;

use super::jacobian::{corank_and_nullvec, normalize_phase};
use super::macaulay::{columns, shifted_row, LocalSystem};
use super::DualError;
use crate::forms::{cylinder_form, eval_at_squares};
use crate::p3p::Triangle;
use crate::polyarith::monomial_basis;

/// `c_1` is the danger-cylinder form evaluated at the solution.
pub fn criterion_c1(t: &Triangle, e: &[Complex64; 3]) -> Complex64 {
    cylinder_form(t.squared_sides())
        .eval_complex(e)
        .expect("three distance variables")
}

/// Exact `c_1` at rational squared distances.
pub fn criterion_c1_exact(t: &Triangle, e_sq: &[BigRational; 3]) -> BigRational {
    eval_at_squares(&cylinder_form(t.squared_sides()), e_sq)
}

/// `c_k` for `k` in `{2, 3}` at the expansion point of `sys`.
///
/// The top part is normalized so its largest coefficient has modulus 1.
pub fn criterion_ck(sys: &LocalSystem, k: u32, tau: f64) -> Result<Complex64, DualError> {
    if !(2..=3).contains(&k) {
        return Err(DualError::UnsupportedOrder(k));
    }
    let jac = sys.jacobian();
    let rank = corank_and_nullvec(&super::JacobianMatrix(jac), tau);
    if rank.corank != 1 {
        return Err(DualError::BreadthViolation {
            corank: rank.corank,
        });
    }
    let u = rank.u;
    let v = normalize_phase(rank.v);
    let vmax = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let v: Vector3<Complex64> = v / Complex64::new(vmax, 0.0);

    let (cols, index) = columns(k);
    let ncols = cols.len();
    let top: Vec<usize> = (0..ncols).filter(|&c| cols[c].degree() == k).collect();
    let free: Vec<usize> = (0..ncols).filter(|&c| cols[c].degree() < k).collect();
    let mut lambda_top = DVector::<Complex64>::zeros(top.len());
    for (t, &c) in top.iter().enumerate() {
        let mut p = Complex64::new(1.0, 0.0);
        for (vi, e) in v.iter().zip(cols[c].exponents()) {
            p *= vi.powu(*e);
        }
        lambda_top[t] = p;
    }

    let neq = sys.num_equations();
    let base: Vec<Vec<Complex64>> = (0..neq)
        .map(|i| shifted_row(sys, i, &[0, 0, 0], k, &index, ncols))
        .collect();
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for beta in monomial_basis(3, k - 1, false).iter().skip(1) {
        for i in 0..neq {
            let mut row = shifted_row(sys, i, beta.exponents(), k, &index, ncols);
            let n = row.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if n > 0.0 {
                row.iter_mut().for_each(|c| *c /= n);
            }
            rows.push(row);
        }
    }
    // (I - u u^H) applied to the unshifted rows
    for i in 0..neq {
        let mut row = base[i].clone();
        for (col, r) in row.iter_mut().enumerate() {
            let mut proj = Complex64::new(0.0, 0.0);
            for l in 0..neq {
                proj += u[l].conj() * base[l][col];
            }
            *r -= u[i] * proj;
        }
        rows.push(row);
    }
    let a_free = DMatrix::from_fn(rows.len(), free.len(), |r, c| rows[r][free[c]]);
    let a_top = DMatrix::from_fn(rows.len(), top.len(), |r, c| rows[r][top[c]]);
    let rhs = -(a_top * &lambda_top);

    let svd = a_free.svd(true, true);
    let s1 = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let thr = tau * s1;
    if let Some(s) = svd
        .singular_values
        .iter()
        .find(|s| **s >= thr / 100.0 && **s < thr * 100.0)
    {
        return Err(DualError::IllConditioned {
            sigma_rel: s / s1.max(f64::MIN_POSITIVE),
        });
    }
    let lambda_free = svd.solve(&rhs, thr).map_err(|_| DualError::IllConditioned {
        sigma_rel: f64::NAN,
    })?;

    let mut lambda = vec![Complex64::new(0.0, 0.0); ncols];
    for (f, &c) in free.iter().enumerate() {
        lambda[c] = lambda_free[f];
    }
    for (t, &c) in top.iter().enumerate() {
        lambda[c] = lambda_top[t];
    }
    let mut ck = Complex64::new(0.0, 0.0);
    for i in 0..neq {
        let b: Complex64 = base[i].iter().zip(&lambda).map(|(r, l)| r * l).sum();
        ck += u[i].conj() * b;
    }
    Ok(ck)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::p3p::{distances, instance_from_center, make_triangle, CameraCenter};

    fn setup(sides: (f64, f64, f64), o: CameraCenter) -> (Triangle, LocalSystem, [Complex64; 3]) {
        let t = make_triangle(sides.0, sides.1, sides.2).unwrap();
        let inst = instance_from_center(&t, o).unwrap();
        let xi = distances(&t, o).map(|x| Complex64::new(x, 0.0));
        let sys = LocalSystem::new(&inst, &xi);
        (t, sys, xi)
    }

    #[test]
    fn regular_point_violates_breadth_one() {
        let (_, sys, _) = setup((7.0, 6.0, 5.0), CameraCenter::new(1.0, 2.0, 3.0));
        assert!(matches!(
            criterion_ck(&sys, 2, 1e-8),
            Err(DualError::BreadthViolation { corank: 0 })
        ));
    }

    #[test]
    fn double_root_has_nonzero_c2() {
        let (t, sys, xi) = setup((5.0, 4.0, 3.0), CameraCenter::new(4.0, 2.0, 1.0));
        assert!(criterion_c1(&t, &xi).norm() < 1e-10);
        let c2 = criterion_ck(&sys, 2, 1e-8).unwrap();
        assert!(c2.norm() > 1e-3, "{c2}");
    }

    #[test]
    fn c1_on_equilateral_axis() {
        let t = make_triangle(1.0, 1.0, 1.0).unwrap();
        for r in [0.7, 1.0, 2.5] {
            let c = criterion_c1(&t, &[Complex64::new(r, 0.0); 3]);
            assert!((c.re + 1.0).abs() < 1e-12 && c.im == 0.0);
        }
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(criterion_c1_exact(&t, &[q(4, 3), q(1, 3), q(1, 3)]), q(0, 1));
    }
}
