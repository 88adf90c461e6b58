//! Geometric strata of singular configurations: the danger cylinder, the
//! Morley generatrices and the circumcircle, plus the end-to-end classifier.

mod classify;
mod cylinder;
mod morley;

pub use classify::{classify, classify_with, Classification, StratumLabel};
pub use cylinder::{
    cayley_menger_volume_sq, cayley_menger_volume_sq_exact, circumcircle_data, cylinder_membership_e,
    cylinder_membership_xyz, danger_cylinder_value_e, danger_cylinder_value_e_exact, danger_cylinder_value_xyz,
    danger_cylinder_value_xyz_exact, i1_generators, i1_max_normalized, is_i3_point, on_danger_cylinder,
};
pub use morley::{
    generatrix_point, morley_angles, morley_cubic, morley_cubic_roots, morley_data, morley_side_closed_form,
    morley_triangle, probe_multiplicity, MorleyData,
};

use thiserror::Error;

use crate::p3p::P3pError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StrataError {
    #[error(transparent)]
    P3p(#[from] P3pError),
    #[error("degenerate construction: {0}")]
    Degenerate(String),
    #[error("cubic in sin(theta) has no real trigonometric roots (sin 3theta = {sin3theta})")]
    CubicRootFailure { sin3theta: f64 },
    #[error("expected three generatrices with multiplicity 3, found {found}")]
    GeneratrixCount { found: usize },
}
