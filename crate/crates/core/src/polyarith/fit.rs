//! Nullspace implicitization: fit `sum c_m x^m = 0` through a point cloud.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::poly::{Monomial, SparsePoly};
use super::PolyError;

/// Minimum ratio between the two smallest singular values for the fitted
/// surface to count as unique.
pub const FIT_GAP_RATIO: f64 = 10.0;

/// All monomials in `nvars` variables of total degree `<= max_degree`, in
/// canonical (graded-lex) order. With `even_only`, every exponent is even.
pub fn monomial_basis(nvars: usize, max_degree: u32, even_only: bool) -> Vec<Monomial> {
    fn rec(nvars: usize, left: u32, step: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if cur.len() == nvars {
            out.push(Monomial::new(cur.clone()));
            return;
        }
        let mut e = 0;
        while e <= left {
            cur.push(e);
            rec(nvars, left - e, step, cur, out);
            cur.pop();
            e += step;
        }
    }
    let mut out = Vec::new();
    rec(nvars, max_degree, if even_only { 2 } else { 1 }, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// A fitted implicit equation over a monomial basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImplicitSurfaceModel {
    #[serde(with = "basis_serde")]
    pub basis: Vec<Monomial>,
    /// Unit Euclidean norm; sign fixed so the largest-magnitude entry is positive.
    pub coefficients: Vec<f64>,
    /// RMS of the model value over the held-out samples.
    pub rms_residual: f64,
    pub max_residual: f64,
    pub sample_count: usize,
    /// Smallest singular value of the column-equilibrated evaluation matrix,
    /// relative to the largest.
    pub sigma_min_rel: f64,
    /// Ratio of the second-smallest to the smallest singular value.
    pub sigma_gap: f64,
}

mod basis_serde {
    use super::Monomial;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(b: &[Monomial], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<&[u32]> = b.iter().map(|m| m.exponents()).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Monomial>, D::Error> {
        let v: Vec<Vec<u32>> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(Monomial::new).collect())
    }
}

impl ImplicitSurfaceModel {
    pub fn eval(&self, point: &[f64]) -> f64 {
        self.basis
            .iter()
            .zip(&self.coefficients)
            .map(|(m, c)| c * m.eval_f64(point))
            .sum()
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        self.basis
            .iter()
            .zip(&self.coefficients)
            .map(|(m, c)| m.eval_complex(point) * *c)
            .sum()
    }

    /// `|p(x)| / sum |c_m x^m|`, see [`SparsePoly::normalized_abs_complex`].
    pub fn normalized_abs_complex(&self, point: &[Complex64]) -> f64 {
        let mut value = Complex64::new(0.0, 0.0);
        let mut mass = 0.0;
        for (m, c) in self.basis.iter().zip(&self.coefficients) {
            let t = m.eval_complex(point) * *c;
            value += t;
            mass += t.norm();
        }
        if mass == 0.0 {
            0.0
        } else {
            value.norm() / mass
        }
    }

    pub fn gradient(&self, point: &[f64]) -> Vec<f64> {
        let n = point.len();
        let mut g = vec![0.0; n];
        for (m, c) in self.basis.iter().zip(&self.coefficients) {
            for (i, gi) in g.iter_mut().enumerate() {
                let e = m.exponents()[i];
                if e == 0 {
                    continue;
                }
                let mut d = m.exponents().to_vec();
                d[i] -= 1;
                *gi += c * e as f64 * Monomial::new(d).eval_f64(point);
            }
        }
        g
    }

    pub fn gradient_complex(&self, point: &[Complex64]) -> Vec<Complex64> {
        let n = point.len();
        let mut g = vec![Complex64::new(0.0, 0.0); n];
        for (m, c) in self.basis.iter().zip(&self.coefficients) {
            for (i, gi) in g.iter_mut().enumerate() {
                let e = m.exponents()[i];
                if e == 0 {
                    continue;
                }
                let mut d = m.exponents().to_vec();
                d[i] -= 1;
                *gi += Monomial::new(d).eval_complex(point) * (c * e as f64);
            }
        }
        g
    }

    /// Row-major matrix of second partial derivatives.
    pub fn hessian(&self, point: &[f64]) -> Vec<Vec<f64>> {
        let n = point.len();
        let mut h = vec![vec![0.0; n]; n];
        for (m, c) in self.basis.iter().zip(&self.coefficients) {
            for i in 0..n {
                for j in i..n {
                    let mut d = m.exponents().to_vec();
                    let f1 = d[i] as f64;
                    if d[i] == 0 {
                        continue;
                    }
                    d[i] -= 1;
                    let f2 = d[j] as f64;
                    if d[j] == 0 {
                        continue;
                    }
                    d[j] -= 1;
                    h[i][j] += c * f1 * f2 * Monomial::new(d).eval_f64(point);
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                h[i][j] = h[j][i];
            }
        }
        h
    }

    pub fn coefficient(&self, m: &Monomial) -> f64 {
        self.basis
            .iter()
            .position(|b| b == m)
            .map(|i| self.coefficients[i])
            .unwrap_or(0.0)
    }

    /// |<a, b>| over the union of both bases.
    pub fn cosine_similarity(&self, other: &ImplicitSurfaceModel) -> f64 {
        let dot: f64 = self
            .basis
            .iter()
            .zip(&self.coefficients)
            .map(|(m, c)| c * other.coefficient(m))
            .sum();
        dot.abs()
    }

    /// Converts to a [`SparsePoly`] with the exact binary values of the
    /// float coefficients.
    pub fn to_poly(&self, vars: &[&str]) -> SparsePoly {
        SparsePoly::from_terms(
            vars,
            self.basis
                .iter()
                .zip(&self.coefficients)
                .filter(|(_, c)| **c != 0.0)
                .map(|(m, c)| {
                    (
                        BigRational::from_float(*c).expect("finite coefficient"),
                        m.exponents().to_vec(),
                    )
                }),
        )
    }
}

/// Fits the implicit equation whose coefficient vector is the right singular
/// vector of the sample-by-basis evaluation matrix with the smallest
/// singular value. Every 5th sample (index `4, 9, 14, ...`) is held out for
/// the residual statistics.
///
/// Samples must already be normalized by the caller. Columns are scaled to
/// unit norm before the decomposition.
pub fn fit_implicit(
    samples: &[Vec<f64>],
    basis: &[Monomial],
) -> Result<ImplicitSurfaceModel, PolyError> {
    check_counts(samples.len(), basis.len())?;
    let train: Vec<&Vec<f64>> = samples
        .iter()
        .enumerate()
        .filter(|(i, _)| i % 5 != 4)
        .map(|(_, s)| s)
        .collect();
    for s in samples {
        if s.len() != basis[0].nvars() {
            return Err(PolyError::DimensionMismatch {
                expected: basis[0].nvars(),
                got: s.len(),
            });
        }
    }
    let a = DMatrix::from_fn(train.len(), basis.len(), |r, c| basis[c].eval_f64(train[r]));
    let (coefficients, sigma_min_rel, sigma_gap) = null_direction(a)?;
    let mut model = ImplicitSurfaceModel {
        basis: basis.to_vec(),
        coefficients,
        rms_residual: 0.0,
        max_residual: 0.0,
        sample_count: samples.len(),
        sigma_min_rel,
        sigma_gap,
    };
    let held: Vec<f64> = samples
        .iter()
        .enumerate()
        .filter(|(i, _)| i % 5 == 4)
        .map(|(_, s)| model.eval(s).abs())
        .collect();
    set_residuals(&mut model, &held);
    Ok(model)
}

/// Same as [`fit_implicit`] for complex samples of a real surface: each
/// sample contributes its real and imaginary parts as two rows.
pub fn fit_implicit_complex(
    samples: &[Vec<Complex64>],
    basis: &[Monomial],
) -> Result<ImplicitSurfaceModel, PolyError> {
    check_counts(samples.len(), basis.len())?;
    let train: Vec<&Vec<Complex64>> = samples
        .iter()
        .enumerate()
        .filter(|(i, _)| i % 5 != 4)
        .map(|(_, s)| s)
        .collect();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(2 * train.len());
    for s in &train {
        let vals: Vec<Complex64> = basis.iter().map(|m| m.eval_complex(s)).collect();
        rows.push(vals.iter().map(|v| v.re).collect());
        if vals.iter().any(|v| v.im != 0.0) {
            rows.push(vals.iter().map(|v| v.im).collect());
        }
    }
    let a = DMatrix::from_fn(rows.len(), basis.len(), |r, c| rows[r][c]);
    let (coefficients, sigma_min_rel, sigma_gap) = null_direction(a)?;
    let mut model = ImplicitSurfaceModel {
        basis: basis.to_vec(),
        coefficients,
        rms_residual: 0.0,
        max_residual: 0.0,
        sample_count: samples.len(),
        sigma_min_rel,
        sigma_gap,
    };
    let held: Vec<f64> = samples
        .iter()
        .enumerate()
        .filter(|(i, _)| i % 5 == 4)
        .map(|(_, s)| model.eval_complex(s).norm())
        .collect();
    set_residuals(&mut model, &held);
    Ok(model)
}

fn check_counts(n: usize, m: usize) -> Result<(), PolyError> {
    if m == 0 || n < 2 * m {
        return Err(PolyError::TooFewSamples {
            required: 2 * m,
            basis: m,
            got: n,
        });
    }
    Ok(())
}

fn set_residuals(model: &mut ImplicitSurfaceModel, held: &[f64]) {
    if held.is_empty() {
        return;
    }
    model.rms_residual = (held.iter().map(|r| r * r).sum::<f64>() / held.len() as f64).sqrt();
    model.max_residual = held.iter().cloned().fold(0.0, f64::max);
}

/// Smallest right singular direction of `a` after column equilibration,
/// mapped back to the unscaled basis.
fn null_direction(mut a: DMatrix<f64>) -> Result<(Vec<f64>, f64, f64), PolyError> {
    let m = a.ncols();
    let mut scales = vec![1.0; m];
    for (c, s) in scales.iter_mut().enumerate() {
        let n = a.column(c).norm();
        if n > 0.0 {
            *s = n;
            a.column_mut(c).scale_mut(1.0 / n);
        }
    }
    let svd = a.try_svd(false, true, f64::EPSILON, 0).ok_or(PolyError::SvdFailed)?;
    let vt = svd.v_t.as_ref().ok_or(PolyError::SvdFailed)?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let smin = svd.singular_values[order[0]];
    let s2 = svd.singular_values[order[1]];
    let smax = svd.singular_values[*order.last().unwrap()];
    let gap = if smin > 0.0 { s2 / smin } else { f64::INFINITY };
    if gap < FIT_GAP_RATIO {
        return Err(PolyError::AmbiguousFit {
            gap,
            required: FIT_GAP_RATIO,
        });
    }
    let row = vt.row(order[0]);
    let mut coef: Vec<f64> = (0..m).map(|c| row[c] / scales[c]).collect();
    let norm = coef.iter().map(|c| c * c).sum::<f64>().sqrt();
    let imax = coef
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let sign = if coef[imax] < 0.0 { -1.0 } else { 1.0 };
    for c in coef.iter_mut() {
        *c *= sign / norm;
    }
    Ok((coef, smin / smax, gap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn basis_counts() {
        assert_eq!(monomial_basis(3, 2, false).len(), 10);
        assert_eq!(monomial_basis(3, 12, true).len(), 84);
        let b0 = monomial_basis(3, 0, false);
        assert_eq!(b0, vec![Monomial::one(3)]);
        assert_eq!(monomial_basis(3, 12, false).len(), 455);
    }

    #[test]
    fn basis_is_sorted_and_even() {
        let b = monomial_basis(3, 16, true);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        assert!(b.iter().all(Monomial::is_even));
        assert_eq!(b.len(), 165);
    }

    #[test]
    fn unit_circle() {
        let samples: Vec<Vec<f64>> = (0..40)
            .map(|i| {
                let t = 2.0 * PI * (i as f64 + 0.3) / 40.0;
                vec![t.cos(), t.sin()]
            })
            .collect();
        let basis = monomial_basis(2, 2, false);
        let model = fit_implicit(&samples, &basis).unwrap();
        let s = 1.0 / 3f64.sqrt();
        let expect = [
            (Monomial::new(vec![0, 0]), -s),
            (Monomial::new(vec![2, 0]), s),
            (Monomial::new(vec![0, 2]), s),
            (Monomial::new(vec![1, 0]), 0.0),
            (Monomial::new(vec![0, 1]), 0.0),
            (Monomial::new(vec![1, 1]), 0.0),
        ];
        let sign = model.coefficient(&Monomial::new(vec![2, 0])).signum();
        for (m, v) in expect {
            assert!((sign * model.coefficient(&m) - v).abs() < 1e-12, "{m:?}");
        }
        assert!(model.rms_residual < 1e-10);
        assert!(model.rms_residual <= model.max_residual);
        let h = model.hessian(&[0.2, -0.7]);
        assert!((sign * h[0][0] - 2.0 * s).abs() < 1e-12 && (sign * h[1][1] - 2.0 * s).abs() < 1e-12);
        assert!(h[0][1].abs() < 1e-12 && h[1][0].abs() < 1e-12);
    }

    #[test]
    fn sphere_radius_two() {
        let mut samples = Vec::new();
        for i in 0..12 {
            for j in 0..6 {
                let t = 2.0 * PI * i as f64 / 12.0 + 0.1;
                let p = PI * (j as f64 + 0.5) / 6.0;
                samples.push(vec![2.0 * p.sin() * t.cos(), 2.0 * p.sin() * t.sin(), 2.0 * p.cos()]);
            }
        }
        let basis = monomial_basis(3, 2, true);
        let model = fit_implicit(&samples, &basis).unwrap();
        let c0 = model.coefficient(&Monomial::one(3));
        let cx = model.coefficient(&Monomial::new(vec![2, 0, 0]));
        assert!((c0 / cx + 4.0).abs() < 1e-10);
        for m in [vec![0, 2, 0], vec![0, 0, 2]] {
            assert!((model.coefficient(&Monomial::new(m)) / cx - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn ambiguous_and_underdetermined() {
        let samples: Vec<Vec<f64>> = (0..60)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / 60.0;
                vec![t.cos(), t.sin()]
            })
            .collect();
        // degree 3 admits circle, x*circle, y*circle
        let err = fit_implicit(&samples, &monomial_basis(2, 3, false)).unwrap_err();
        assert!(matches!(err, PolyError::AmbiguousFit { .. }));
        let err = fit_implicit(&samples[..5], &monomial_basis(2, 2, false)).unwrap_err();
        assert!(matches!(err, PolyError::TooFewSamples { .. }));
    }

    #[test]
    fn complex_samples_of_real_circle() {
        // points (cosh t, i sinh t) lie on x^2 + y^2 = 1
        let samples: Vec<Vec<Complex64>> = (0..30)
            .map(|i| {
                let t = 0.1 * i as f64 - 1.5;
                vec![Complex64::new(t.cosh(), 0.0), Complex64::new(0.0, t.sinh())]
            })
            .collect();
        let model = fit_implicit_complex(&samples, &monomial_basis(2, 2, true)).unwrap();
        let c0 = model.coefficient(&Monomial::one(2));
        let cx = model.coefficient(&Monomial::new(vec![2, 0]));
        assert!((c0 / cx + 1.0).abs() < 1e-10);
    }
}
