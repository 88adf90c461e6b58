//! The P3P distance system: instances, solver, pose and center recovery.

mod pose;
mod solver;
mod triangle;

pub use pose::{locate_center, recover_pose, Pose};
pub use solver::{
    canonical_sign, complementary_deflated, complementary_solutions, complementary_with, continuum_samples,
    detect_continuum, instance_from_center, solve, solve_with, P3PInstance, SolutionTriple,
    SolveReport, SolverOptions, PAIRS,
};
pub use triangle::{distances, distances_sq_exact, make_triangle, CameraCenter, Triangle};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum P3pError {
    #[error("degenerate triangle: {0}")]
    DegenerateTriangle(String),
    #[error("camera center coincides with vertex {vertex}")]
    VertexCoincidence { vertex: usize },
    #[error("camera center is collinear with edge {edge:?}")]
    CollinearWithEdge { edge: (usize, usize) },
    #[error("{name} = {value} is outside (-1, 1)")]
    InvalidCosine { name: &'static str, value: f64 },
    #[error("solution set is positive dimensional ({} samples returned)", samples.len())]
    ContinuumDetected { samples: Vec<SolutionTriple> },
    #[error("root polishing failed (residual {residual:.3e})")]
    NumericalFailure { residual: f64 },
    #[error("camera center is coplanar with the three points")]
    CoplanarDegeneracy,
    #[error("distances are not realized by a real point (z^2 = {z_sq:.3e})")]
    InconsistentDistances { z_sq: f64 },
    #[error("solution is not real and positive")]
    NotPhysical,
    #[error("known solution not found among roots (nearest at {distance:.3e})")]
    KnownNotFound { distance: f64 },
}
