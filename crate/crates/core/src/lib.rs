//! Singular configurations of the perspective-three-point problem.
//!
//! The crate solves the P3P distance system, measures root multiplicity with
//! local dual spaces, classifies camera centers into the singular strata
//! (danger cylinder, Morley generatrices, circumcircle) and reconstructs the
//! deltoidal surface traced by complementary solutions.

pub mod forms;
pub mod polyarith;
pub mod p3p;
pub mod dualspace;
pub mod strata;
pub mod harness;
pub mod deltoid;
