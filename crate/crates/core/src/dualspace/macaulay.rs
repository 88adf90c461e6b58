//! Truncated local dual spaces through Macaulay matrices.
//!
//! Coordinates are shifted and scaled, `x = xi + rho y` with `rho = |xi|`,
//! and each equation is divided by `rho^2`. Column `alpha` of the order-`k`
//! matrix is the functional `d^alpha / alpha!` at `y = 0`; row `(beta, i)` is
//! the shifted generator `y^beta f_i`. Dual-space functionals of order `<= k`
//! are the null vectors.

use std::collections::HashMap;

use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::p3p::{P3PInstance, PAIRS};
use crate::polyarith::{monomial_basis, Monomial};

type Term = ([u32; 3], Complex64);

/// The distance system expanded around a point.
#[derive(Debug, Clone)]
pub struct LocalSystem {
    pub xi: [Complex64; 3],
    pub rho: f64,
    polys: Vec<Vec<Term>>,
}

impl LocalSystem {
    pub fn new(inst: &P3PInstance, xi: &[Complex64; 3]) -> Self {
        let rho = xi.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
        let r2 = rho * rho;
        let f0 = inst.eval(xi);
        let polys = PAIRS
            .iter()
            .enumerate()
            .map(|(k, &(i, j))| {
                let c = inst.cos(i, j);
                let unit = |a: usize, b: usize| {
                    let mut e = [0u32; 3];
                    e[a] += 1;
                    e[b] += 1;
                    e
                };
                let lin = |a: usize| {
                    let mut e = [0u32; 3];
                    e[a] = 1;
                    e
                };
                vec![
                    ([0, 0, 0], f0[k] / r2),
                    (lin(i), (xi[i] - xi[j] * c) * (2.0 / rho)),
                    (lin(j), (xi[j] - xi[i] * c) * (2.0 / rho)),
                    (unit(i, i), Complex64::new(1.0, 0.0)),
                    (unit(j, j), Complex64::new(1.0, 0.0)),
                    (unit(i, j), Complex64::new(-2.0 * c, 0.0)),
                ]
            })
            .collect();
        LocalSystem {
            xi: *xi,
            rho,
            polys,
        }
    }

    pub fn num_equations(&self) -> usize {
        self.polys.len()
    }

    /// Jacobian of the scaled local equations at `y = 0`.
    pub fn jacobian(&self) -> Matrix3<Complex64> {
        let mut m = Matrix3::zeros();
        for (i, p) in self.polys.iter().enumerate() {
            for (e, c) in p {
                if e.iter().sum::<u32>() == 1 {
                    let v = e.iter().position(|x| *x == 1).expect("linear term");
                    m[(i, v)] += c;
                }
            }
        }
        m
    }

    pub(crate) fn terms(&self, i: usize) -> &[Term] {
        &self.polys[i]
    }
}

/// Columns of the order-`k` matrix and their index map.
pub(crate) fn columns(k: u32) -> (Vec<Monomial>, HashMap<Vec<u32>, usize>) {
    let cols = monomial_basis(3, k, false);
    let index = cols
        .iter()
        .enumerate()
        .map(|(i, m)| (m.exponents().to_vec(), i))
        .collect();
    (cols, index)
}

/// Row of `y^beta f_i` restricted to columns of order `<= k`.
pub(crate) fn shifted_row(
    sys: &LocalSystem,
    i: usize,
    beta: &[u32],
    k: u32,
    index: &HashMap<Vec<u32>, usize>,
    ncols: usize,
) -> Vec<Complex64> {
    let mut row = vec![Complex64::new(0.0, 0.0); ncols];
    for (g, c) in sys.terms(i) {
        let alpha: Vec<u32> = beta.iter().zip(g).map(|(b, g)| b + g).collect();
        if alpha.iter().sum::<u32>() <= k {
            row[index[&alpha]] += c;
        }
    }
    row
}

/// Order-`k` Macaulay matrix with unit-norm rows.
pub fn macaulay_matrix(sys: &LocalSystem, k: u32) -> DMatrix<Complex64> {
    let (cols, index) = columns(k);
    let mut rows = Vec::new();
    if k > 0 {
        for beta in monomial_basis(3, k - 1, false) {
            for i in 0..sys.num_equations() {
                let mut row = shifted_row(sys, i, beta.exponents(), k, &index, cols.len());
                let n = row.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                if n > 0.0 {
                    row.iter_mut().for_each(|c| *c /= n);
                }
                rows.push(row);
            }
        }
    }
    DMatrix::from_fn(rows.len(), cols.len(), |r, c| rows[r][c])
}

/// Nullity of a matrix by `sigma < tau * sigma_1`, with the realized gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimInfo {
    pub dim: usize,
    /// Smallest singular value counted as nonzero, relative to `sigma_1`.
    pub smallest_kept: f64,
    /// Largest singular value counted as zero, relative to `sigma_1`.
    pub largest_dropped: f64,
}

pub(crate) fn nullity(m: &DMatrix<Complex64>, tau: f64) -> DimInfo {
    let ncols = m.ncols();
    if m.nrows() == 0 {
        return DimInfo {
            dim: ncols,
            smallest_kept: f64::INFINITY,
            largest_dropped: 0.0,
        };
    }
    let sv = m.singular_values();
    let s1 = sv.iter().cloned().fold(0.0, f64::max);
    let mut all: Vec<f64> = sv.iter().map(|s| s / s1).collect();
    // a wide matrix has ncols - nrows structural zeros
    all.resize(ncols.max(all.len()), 0.0);
    let kept: Vec<f64> = all.iter().cloned().filter(|s| *s >= tau).collect();
    let dropped = all.iter().cloned().filter(|s| *s < tau).fold(0.0, f64::max);
    DimInfo {
        dim: ncols - kept.len(),
        smallest_kept: kept.iter().cloned().fold(f64::INFINITY, f64::min),
        largest_dropped: dropped,
    }
}

/// Dimension of the dual space truncated at differential order `k`.
pub fn macaulay_dual_dim(sys: &LocalSystem, k: u32, tau: f64) -> DimInfo {
    nullity(&macaulay_matrix(sys, k), tau)
}

/// Multiplicity from stabilized dual-space dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Multiplicity {
    Finite(usize),
    InfiniteSuspected,
}

impl Multiplicity {
    pub fn finite(self) -> Option<usize> {
        match self {
            Multiplicity::Finite(m) => Some(m),
            Multiplicity::InfiniteSuspected => None,
        }
    }
}

impl Serialize for Multiplicity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Finite(m) => s.serialize_u64(*m as u64),
            Multiplicity::InfiniteSuspected => s.serialize_str("infinite_suspected"),
        }
    }
}

impl std::fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Multiplicity::Finite(m) => write!(f, "{m}"),
            Multiplicity::InfiniteSuspected => f.write_str("infinite_suspected"),
        }
    }
}

/// Dual dimensions `d_0, d_1, ...` up to the first repeat, and the
/// multiplicity they imply.
pub fn multiplicity(sys: &LocalSystem, max_order: u32, tau: f64) -> (Multiplicity, Vec<DimInfo>) {
    let mut dims = vec![macaulay_dual_dim(sys, 0, tau)];
    for k in 1..=max_order {
        let d = macaulay_dual_dim(sys, k, tau);
        let prev = dims.last().expect("order 0 present").dim;
        dims.push(d);
        if d.dim == prev {
            return (Multiplicity::Finite(prev), dims);
        }
    }
    (Multiplicity::InfiniteSuspected, dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::p3p::{distances, instance_from_center, make_triangle, CameraCenter};

    fn local(sides: (f64, f64, f64), o: CameraCenter) -> LocalSystem {
        let t = make_triangle(sides.0, sides.1, sides.2).unwrap();
        let inst = instance_from_center(&t, o).unwrap();
        let xi = distances(&t, o).map(|x| Complex64::new(x, 0.0));
        LocalSystem::new(&inst, &xi)
    }

    #[test]
    fn order_zero_is_evaluation() {
        let sys = local((7.0, 6.0, 5.0), CameraCenter::new(1.0, 2.0, 3.0));
        assert_eq!(macaulay_dual_dim(&sys, 0, 1e-8).dim, 1);
    }

    #[test]
    fn regular_point() {
        let sys = local((7.0, 6.0, 5.0), CameraCenter::new(1.0, 2.0, 3.0));
        assert_eq!(macaulay_dual_dim(&sys, 1, 1e-8).dim, 1);
        let (mu, dims) = multiplicity(&sys, 6, 1e-8);
        assert_eq!(mu, Multiplicity::Finite(1));
        assert_eq!(dims.len(), 2);
    }

    #[test]
    fn cylinder_point_is_double() {
        let sys = local((5.0, 4.0, 3.0), CameraCenter::new(4.0, 2.0, 1.0));
        let (mu, dims) = multiplicity(&sys, 6, 1e-8);
        assert_eq!(dims.iter().map(|d| d.dim).collect::<Vec<_>>(), vec![1, 2, 2]);
        assert_eq!(mu, Multiplicity::Finite(2));
        for d in &dims[1..] {
            assert!(d.smallest_kept > 1e-4 && d.largest_dropped < 1e-12, "{d:?}");
        }
    }

    #[test]
    fn circumcircle_point_does_not_stabilize() {
        let t = make_triangle(7.0, 6.0, 5.0).unwrap();
        let ([cx, cy], r) = t.circumcircle();
        let o = CameraCenter::new(cx + r * 1.1f64.cos(), cy + r * 1.1f64.sin(), 0.0);
        let sys = local((7.0, 6.0, 5.0), o);
        let (mu, dims) = multiplicity(&sys, 6, 1e-8);
        assert_eq!(mu, Multiplicity::InfiniteSuspected);
        assert!(dims.windows(2).all(|w| w[0].dim <= w[1].dim));
    }
}
