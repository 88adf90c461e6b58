//! Local dual spaces of the distance system: Jacobian rank, Macaulay
//! dimensions, multiplicity and the incremental criteria `c_1, c_2, c_3`.

mod criterion;
mod jacobian;
mod macaulay;

pub use criterion::{criterion_c1, criterion_c1_exact, criterion_ck};
pub use jacobian::{closed_form_left_null, corank_and_nullvec, jacobian_at, JacobianMatrix, RankInfo};
pub use macaulay::{
    macaulay_dual_dim, macaulay_matrix, multiplicity, DimInfo, LocalSystem, Multiplicity,
};

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::p3p::P3PInstance;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DualError {
    #[error("solution component e{} is zero", index + 1)]
    ZeroComponent { index: usize },
    #[error("criterion needs a corank-one Jacobian, found corank {corank}")]
    BreadthViolation { corank: usize },
    #[error("closedness system has a singular value {sigma_rel:.3e} too close to the rank threshold")]
    IllConditioned { sigma_rel: f64 },
    #[error("criterion order {0} is not supported (expected 2 or 3)")]
    UnsupportedOrder(u32),
}

/// Thresholds used by [`dual_space_report`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualTolerances {
    pub tau_rank: f64,
    pub max_order: u32,
}

impl Default for DualTolerances {
    fn default() -> Self {
        DualTolerances {
            tau_rank: 1e-8,
            max_order: 6,
        }
    }
}

/// Everything the dual-space analysis says about one root.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualSpaceReport {
    pub corank: usize,
    #[serde(serialize_with = "jacobian::ser_cvec")]
    pub null_vector_u: Vector3<Complex64>,
    pub jacobian_singular_values: [f64; 3],
    pub rank_margin: f64,
    pub dims: Vec<usize>,
    pub dim_gaps: Vec<DimInfo>,
    pub mu: Multiplicity,
    pub c1: f64,
    /// `|c_2|`, when the root has breadth one.
    pub c2: Option<f64>,
    /// `|c_3|`, when the root has breadth one and `c_2` vanishes.
    pub c3: Option<f64>,
    pub tolerances_used: DualTolerances,
}

/// Runs the full analysis at `xi`, which must solve `inst`.
pub fn dual_space_report(inst: &P3PInstance, xi: &[Complex64; 3], tol: &DualTolerances) -> DualSpaceReport {
    let sys = LocalSystem::new(inst, xi);
    let rank = corank_and_nullvec(&JacobianMatrix(sys.jacobian()), tol.tau_rank);
    let (mu, dim_gaps) = multiplicity(&sys, tol.max_order, tol.tau_rank);
    let c1 = criterion_c1(&inst.triangle, xi).re;
    let c2 = criterion_ck(&sys, 2, tol.tau_rank).ok().map(|c| c.norm());
    let c3 = if mu.finite().is_some_and(|m| m >= 3) {
        criterion_ck(&sys, 3, tol.tau_rank).ok().map(|c| c.norm())
    } else {
        None
    };
    DualSpaceReport {
        corank: rank.corank,
        null_vector_u: rank.u,
        jacobian_singular_values: rank.singular_values,
        rank_margin: rank.margin,
        dims: dim_gaps.iter().map(|d| d.dim).collect(),
        dim_gaps,
        mu,
        c1,
        c2,
        c3,
        tolerances_used: *tol,
    }
}
