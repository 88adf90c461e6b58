//! Fixtures, scene ingestion, tolerance configuration and verification
//! suites shared by the CLI and the acceptance target.

mod fixtures;
mod report;
mod scene;
mod tolerances;
mod verify;

pub use fixtures::{fixture_by_name, fixture_by_sides, load_fixtures, FixtureComponent, FixtureTriangle, E_PRIME_VARS};
pub use report::{Bound, CheckResult, CheckStatus, RunReport};
pub use scene::{ingest_scene, parse_center, parse_scene, parse_triangle, parse_triple, Scene, SceneError};
pub use tolerances::{Tolerances, TOLERANCE_ENV};
pub use verify::{
    random_triangle, run_criterion, run_verify, FixtureRun, Suite, VerifyContext, RATIO_FIXTURES, SWEEP_GRID,
    TANGENCY_FIXTURE,
};
