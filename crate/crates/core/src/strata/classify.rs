//! End-to-end stratum classifier for a camera center.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use super::cylinder::{circumcircle_data, i1_max_normalized, is_i3_point, on_danger_cylinder};
use super::StrataError;
use crate::dualspace::{dual_space_report, DualSpaceReport, Multiplicity};
use crate::harness::Tolerances;
use crate::p3p::{detect_continuum, distances, instance_from_center, CameraCenter, P3pError, Triangle};

/// Finest stratum containing a center.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum StratumLabel {
    Regular,
    DangerCylinder,
    MorleyGeneratrix,
    Circumcircle,
    Degenerate(String),
}

impl StratumLabel {
    /// Multiplicity the label stands for; `None` for continua and degeneracies.
    pub fn mu(&self) -> Option<usize> {
        match self {
            StratumLabel::Regular => Some(1),
            StratumLabel::DangerCylinder => Some(2),
            StratumLabel::MorleyGeneratrix => Some(3),
            _ => None,
        }
    }
}

impl fmt::Display for StratumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StratumLabel::Regular => write!(f, "Regular"),
            StratumLabel::DangerCylinder => write!(f, "DangerCylinder"),
            StratumLabel::MorleyGeneratrix => write!(f, "MorleyGeneratrix"),
            StratumLabel::Circumcircle => write!(f, "Circumcircle"),
            StratumLabel::Degenerate(r) => write!(f, "Degenerate({r})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub label: StratumLabel,
    /// Absent for degenerate and continuum configurations.
    pub report: Option<DualSpaceReport>,
    /// Normalized danger-cylinder value.
    pub cylinder_value: f64,
    /// Cylinder membership was settled in exact arithmetic.
    pub exact: bool,
    /// Projection at `B`, `C` or the antipode of `A`, where the generatrix
    /// generators can vanish without a triple root. Diagnostic only: the
    /// label follows the multiplicity.
    pub i3_degenerate: bool,
    /// Largest normalized generatrix generator, for cylinder points.
    pub generatrix_residual: Option<f64>,
    /// Multiplicity 3 without the generatrix generators vanishing, or the
    /// reverse.
    pub generatrix_mismatch: bool,
}

/// [`classify_with`] at default tolerances.
pub fn classify(t: &Triangle, o: CameraCenter) -> Result<Classification, StrataError> {
    classify_with(t, o, &Tolerances::default())
}

pub fn classify_with(t: &Triangle, o: CameraCenter, tol: &Tolerances) -> Result<Classification, StrataError> {
    let (_, r) = circumcircle_data(t);
    let degenerate = |reason: String| Classification {
        label: StratumLabel::Degenerate(reason),
        report: None,
        cylinder_value: f64::NAN,
        exact: false,
        i3_degenerate: false,
        generatrix_residual: None,
        generatrix_mismatch: false,
    };
    let inst = match instance_from_center(t, o) {
        Ok(i) => i,
        Err(e @ (P3pError::VertexCoincidence { .. } | P3pError::CollinearWithEdge { .. })) => {
            return Ok(degenerate(e.to_string()))
        }
        Err(e) => return Err(e.into()),
    };
    let e: [Complex64; 3] = distances(t, o).map(|x| Complex64::new(x, 0.0));
    let (on_cyl, exact) = on_danger_cylinder(t, o, tol.membership);
    let cylinder_value = if exact {
        0.0
    } else {
        super::cylinder::cylinder_membership_e(t, &e)
    };
    let mut out = Classification {
        label: StratumLabel::Regular,
        report: None,
        cylinder_value,
        exact,
        i3_degenerate: false,
        generatrix_residual: None,
        generatrix_mismatch: false,
    };
    if on_cyl && o.z.abs() <= tol.membership * 2.0 * r
        && detect_continuum(&inst, tol.continuum_tol) {
            out.label = StratumLabel::Circumcircle;
            return Ok(out);
        }
    let report = dual_space_report(&inst, &e, &tol.dual());
    out.label = match report.mu {
        Multiplicity::Finite(1) => StratumLabel::Regular,
        _ if !on_cyl => StratumLabel::Degenerate(format!("multiplicity {} off the danger cylinder", report.mu)),
        Multiplicity::Finite(2) => StratumLabel::DangerCylinder,
        Multiplicity::Finite(3) => StratumLabel::MorleyGeneratrix,
        Multiplicity::InfiniteSuspected if detect_continuum(&inst, tol.continuum_tol) => StratumLabel::Circumcircle,
        m => StratumLabel::Degenerate(format!("multiplicity {m} on the danger cylinder")),
    };
    if on_cyl {
        let g = i1_max_normalized(t, &e);
        out.generatrix_residual = Some(g);
        out.i3_degenerate = is_i3_point(t, o, 1e-9);
        let vanishes = g < tol.generator_vanish;
        let triple = out.label == StratumLabel::MorleyGeneratrix;
        out.generatrix_mismatch = vanishes != triple && !out.i3_degenerate;
    }
    out.report = Some(report);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::p3p::make_triangle;
    use crate::strata::{generatrix_point, morley_angles};

    #[test]
    fn right_triangle_cylinder_point() {
        let t = make_triangle(5.0, 4.0, 3.0).unwrap();
        let c = classify(&t, CameraCenter::new(4.0, 2.0, 1.0)).unwrap();
        assert_eq!(c.label, StratumLabel::DangerCylinder);
        assert!(c.exact);
        assert_eq!(c.report.unwrap().dims, vec![1, 2, 2]);
    }

    #[test]
    fn generatrix_and_circumcircle() {
        let t = make_triangle(7.0, 6.0, 5.0).unwrap();
        let (_, r) = t.circumcircle();
        let (thetas, _) = morley_angles(&t, 1e-8, 6).unwrap();
        for th in &thetas {
            let c = classify(&t, generatrix_point(&t, *th, r)).unwrap();
            assert_eq!(c.label, StratumLabel::MorleyGeneratrix, "{c:?}");
            assert!(!c.generatrix_mismatch, "{c:?}");
            let on_circle = classify(&t, generatrix_point(&t, *th + 0.4, 0.0)).unwrap();
            assert_eq!(on_circle.label, StratumLabel::Circumcircle);
        }
    }

    #[test]
    fn off_cylinder_is_regular_and_mirror_invariant() {
        let t = make_triangle(7.0, 6.0, 5.0).unwrap();
        let o = CameraCenter::new(2.0, 1.5, 4.0);
        let a = classify(&t, o).unwrap();
        let b = classify(&t, o.mirrored()).unwrap();
        assert_eq!(a.label, StratumLabel::Regular);
        assert_eq!(a.label, b.label);
    }

    #[test]
    fn vertex_is_degenerate() {
        let t = make_triangle(7.0, 6.0, 5.0).unwrap();
        let c = classify(&t, CameraCenter::new(0.0, 0.0, 0.0)).unwrap();
        assert!(matches!(c.label, StratumLabel::Degenerate(_)));
    }
}
