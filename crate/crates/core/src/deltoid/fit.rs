//! Implicit fits of the complement clouds.

use num_complex::Complex64;
use serde::Serialize;

use super::sweep::ComplementaryRecord;
use super::DeltoidError;
use crate::p3p::{CameraCenter, Triangle};
use crate::polyarith::{fit_implicit, fit_implicit_complex, monomial_basis, ImplicitSurfaceModel, PolyError};

/// Complements closer than this fraction of the triangle scale to their
/// source sit near a cusp, where the deflated roots are ill-conditioned;
/// they are left out of fits.
pub const NEAR_SOURCE: f64 = 5e-2;

/// Scaled `e'` samples of every complement far enough from its source.
pub fn e_samples(t: &Triangle, records: &[ComplementaryRecord]) -> Vec<Vec<Complex64>> {
    let (_, r) = t.circumcircle();
    let d = 2.0 * r;
    records
        .iter()
        .filter(|rec| rec.separation > NEAR_SOURCE * t.scale())
        .map(|rec| rec.complement_e.e.iter().map(|x| x / d).collect())
        .collect()
}

/// Center coordinates divided by the circumdiameter.
pub fn scaled_center(t: &Triangle, c: &CameraCenter) -> Vec<f64> {
    let (_, r) = t.circumcircle();
    let d = 2.0 * r;
    vec![c.x / d, c.y / d, c.z / d]
}

pub fn xyz_samples(t: &Triangle, records: &[ComplementaryRecord]) -> Vec<Vec<f64>> {
    records
        .iter()
        .filter(|rec| rec.separation > NEAR_SOURCE * t.scale())
        .flat_map(|rec| rec.complement_centers.iter().map(|c| scaled_center(t, c)))
        .collect()
}

/// Even-only fit in `e' / 2R`.
pub fn fit_deltoid_e(
    t: &Triangle,
    records: &[ComplementaryRecord],
    degree: u32,
) -> Result<ImplicitSurfaceModel, DeltoidError> {
    let basis = monomial_basis(3, degree, true);
    Ok(fit_implicit_complex(&e_samples(t, records), &basis)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct XyzFit {
    pub model: ImplicitSurfaceModel,
    /// Whether the even-only basis was accepted.
    pub even_basis: bool,
    /// Held-out residual of the even-only attempt, if it ran.
    pub even_rms: Option<f64>,
}

/// Fit in `(x, y, z) / 2R`: the even-only basis first, the full basis when
/// the even one leaves a residual above `max_rms` or is ambiguous.
pub fn fit_deltoid_xyz(
    t: &Triangle,
    records: &[ComplementaryRecord],
    degree: u32,
    max_rms: f64,
) -> Result<XyzFit, DeltoidError> {
    let samples = xyz_samples(t, records);
    let even = fit_implicit(&samples, &monomial_basis(3, degree, true));
    let even_rms = match &even {
        Ok(m) if m.rms_residual <= max_rms => {
            return Ok(XyzFit {
                even_rms: Some(m.rms_residual),
                model: even.unwrap(),
                even_basis: true,
            })
        }
        Ok(m) => Some(m.rms_residual),
        Err(PolyError::AmbiguousFit { .. }) => None,
        Err(e) => return Err(e.clone().into()),
    };
    let model = fit_implicit(&samples, &monomial_basis(3, degree, false))?;
    Ok(XyzFit {
        model,
        even_basis: false,
        even_rms,
    })
}
