//! Complementary solutions of singular configurations and the deltoidal
//! surface they trace.

mod checks;
mod fit;
mod sweep;

pub use checks::{circle_crossing, component_membership, cusp_check, model_values, plane_fit_residual, tangency_check, CircleCrossing, ComponentMatch};
pub use fit::{e_samples, fit_deltoid_e, fit_deltoid_xyz, scaled_center, xyz_samples, XyzFit, NEAR_SOURCE};
pub use sweep::{
    complements_at, sweep_cylinder, sweep_figure8, CirclePoint, ComplementaryRecord, SweepConfig, SweepFailure,
    SweepOutcome,
};

use thiserror::Error;

use crate::p3p::P3pError;
use crate::polyarith::PolyError;
use crate::strata::StrataError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeltoidError {
    #[error(transparent)]
    P3p(#[from] P3pError),
    #[error(transparent)]
    Strata(#[from] StrataError),
    #[error(transparent)]
    Fit(#[from] PolyError),
    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),
    #[error("source at theta = {theta}, h = {h} is not an isolated root")]
    NotIsolated { theta: f64, h: f64 },
}
