//! Sweeps of camera centers over the danger cylinder and the circles
//! inside it, collecting the complementary solutions.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::DeltoidError;
use crate::dualspace::{multiplicity, LocalSystem, Multiplicity};
use crate::harness::Tolerances;
use crate::p3p::{
    complementary_deflated, distances, instance_from_center, locate_center, solve_with, CameraCenter,
    P3PInstance, SolutionTriple, Triangle,
};
use crate::strata::{generatrix_point, morley_angles};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub triangle: Triangle,
    pub theta_samples: usize,
    pub height_samples: usize,
    /// `(h_min, h_max)` with `h_min > 0`.
    pub height_range: (f64, f64),
    /// Adds the three generatrix angles to the grid.
    pub include_morley: bool,
    /// Grid angles are `2 pi (i + theta_offset) / theta_samples`.
    pub theta_offset: f64,
}

impl SweepConfig {
    /// `theta_samples x height_samples` grid with heights evenly spaced in
    /// `(0, 4R]`.
    pub fn new(triangle: Triangle, theta_samples: usize, height_samples: usize) -> Self {
        let (_, r) = triangle.circumcircle();
        let step = 4.0 * r / height_samples as f64;
        SweepConfig {
            triangle,
            theta_samples,
            height_samples,
            height_range: (step, 4.0 * r),
            include_morley: false,
            theta_offset: 0.37,
        }
    }

    fn validate(&self) -> Result<(), DeltoidError> {
        let (lo, hi) = self.height_range;
        if self.theta_samples < 8 || self.height_samples < 4 {
            return Err(DeltoidError::InvalidConfig(format!(
                "need at least 8 angles and 4 heights, got {} x {}",
                self.theta_samples, self.height_samples
            )));
        }
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err(DeltoidError::InvalidConfig(format!("height range ({lo}, {hi}) must satisfy 0 < h_min <= h_max")));
        }
        Ok(())
    }

    fn heights(&self) -> Vec<f64> {
        let (lo, hi) = self.height_range;
        let n = self.height_samples;
        (0..n).map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplementaryRecord {
    pub theta: f64,
    pub h: f64,
    pub source_center: CameraCenter,
    pub source_mu: usize,
    pub branch_index: usize,
    pub complement_e: SolutionTriple,
    /// Mirror pair `(x, y, +-z)` at distances `|e'|`; empty for complex
    /// complements.
    pub complement_centers: Vec<CameraCenter>,
    pub on_morley_generatrix: bool,
    /// Distance from the complement to the source solution.
    pub separation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepFailure {
    pub theta: f64,
    pub h: f64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepOutcome {
    pub records: Vec<ComplementaryRecord>,
    pub failures: Vec<SweepFailure>,
}

impl SweepOutcome {
    /// Physical complement centers, both mirrors.
    pub fn centers(&self) -> Vec<CameraCenter> {
        self.records.iter().flat_map(|r| r.complement_centers.iter().copied()).collect()
    }
}

/// Mirror centers at distances `|e|` for a real root. The deltoid depends
/// on squared distances only, so roots with negative components also have
/// a center on it.
fn real_centers(inst: &P3PInstance, s: &SolutionTriple) -> Vec<CameraCenter> {
    let scale = inst.triangle.scale();
    if s.e.iter().any(|x| x.im.abs() > 1e-8 * scale) {
        return Vec::new();
    }
    let abs = SolutionTriple::from_real(inst, s.e.map(|x| x.re.abs()));
    locate_center(&inst.triangle, &abs).map(|p| p.to_vec()).unwrap_or_default()
}

/// Complements of the seed solution at `o`, which must be on the cylinder.
pub fn complements_at(
    t: &Triangle,
    theta: f64,
    h: f64,
    on_generatrix: bool,
    tol: &Tolerances,
) -> Result<Vec<ComplementaryRecord>, DeltoidError> {
    let o = generatrix_point(t, theta, h);
    let inst = instance_from_center(t, o)?;
    let seed = distances(t, o).map(|x| Complex64::new(x, 0.0));
    let (mu, _) = multiplicity(&LocalSystem::new(&inst, &seed), tol.max_order, tol.tau_rank);
    let mu = match mu {
        Multiplicity::Finite(m) => m,
        Multiplicity::InfiniteSuspected => return Err(DeltoidError::NotIsolated { theta, h }),
    };
    let comps = complementary_deflated(&inst, &seed, mu, &tol.solver())?;
    Ok(comps
        .into_iter()
        .enumerate()
        .map(|(branch_index, c)| ComplementaryRecord {
            theta,
            h,
            source_center: o,
            source_mu: mu,
            branch_index,
            complement_centers: real_centers(&inst, &c),
            separation: c.distance_to(&seed),
            complement_e: c,
            on_morley_generatrix: on_generatrix,
        })
        .collect())
}

/// Grid sweep; per-point failures are collected, records keep grid order.
pub fn sweep_cylinder(cfg: &SweepConfig, tol: &Tolerances) -> Result<SweepOutcome, DeltoidError> {
    cfg.validate()?;
    let t = &cfg.triangle;
    let mut thetas: Vec<(f64, bool)> = (0..cfg.theta_samples)
        .map(|i| (2.0 * PI * (i as f64 + cfg.theta_offset) / cfg.theta_samples as f64, false))
        .collect();
    if cfg.include_morley {
        let (m, _) = morley_angles(t, tol.tau_rank, tol.max_order)?;
        thetas.extend(m.into_iter().map(|th| (th, true)));
        thetas.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    let grid: Vec<(f64, bool, f64)> = thetas
        .iter()
        .flat_map(|&(th, g)| cfg.heights().into_iter().map(move |h| (th, g, h)))
        .collect();
    let results: Vec<_> = grid
        .par_iter()
        .map(|&(th, g, h)| (th, h, complements_at(t, th, h, g, tol)))
        .collect();
    let mut out = SweepOutcome {
        records: Vec::new(),
        failures: Vec::new(),
    };
    for (theta, h, r) in results {
        match r {
            Ok(recs) => out.records.extend(recs),
            Err(e) => out.failures.push(SweepFailure {
                theta,
                h,
                error: e.to_string(),
            }),
        }
    }
    Ok(out)
}

/// One source center on a horizontal circle and the centers of its other
/// solutions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CirclePoint {
    pub theta: f64,
    pub source_center: CameraCenter,
    /// Number of distinct solutions of the instance.
    pub solution_count: usize,
    pub others: Vec<SolutionTriple>,
    pub other_centers: Vec<CameraCenter>,
}

/// Centers on the circle of radius `fraction * R` about the circumcenter
/// at height `h`, with the centers of the remaining solutions.
pub fn sweep_figure8(
    t: &Triangle,
    fraction: f64,
    h: f64,
    samples: usize,
    tol: &Tolerances,
) -> Result<Vec<CirclePoint>, DeltoidError> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(DeltoidError::InvalidConfig(format!("circle fraction {fraction} not in (0, 1]")));
    }
    let ([cx, cy], r) = t.circumcircle();
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let theta = 2.0 * PI * i as f64 / samples as f64;
            let o = CameraCenter::new(cx + fraction * r * theta.cos(), cy + fraction * r * theta.sin(), h);
            let inst = instance_from_center(t, o)?;
            let seed = distances(t, o).map(|x| Complex64::new(x, 0.0));
            let rep = solve_with(&inst, &tol.solver())?;
            let mu = multiplicity(&LocalSystem::new(&inst, &seed), tol.max_order, tol.tau_rank)
                .0
                .finite()
                .ok_or(DeltoidError::NotIsolated { theta, h })?;
            let others = complementary_deflated(&inst, &seed, mu, &tol.solver())?;
            let other_centers = others
                .iter()
                .filter_map(|s| real_centers(&inst, s).first().copied())
                .map(|p| if h >= 0.0 { p } else { p.mirrored() })
                .collect();
            Ok(CirclePoint {
                theta,
                source_center: o,
                solution_count: rep.solutions.len(),
                others,
                other_centers,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::p3p::make_triangle;

    #[test]
    fn config_validation() {
        let t = make_triangle(1.0, 1.0, 1.0).unwrap();
        let mut cfg = SweepConfig::new(t, 8, 4);
        assert!(cfg.validate().is_ok());
        cfg.height_range = (0.0, 1.0);
        assert!(matches!(cfg.validate(), Err(DeltoidError::InvalidConfig(_))));
        cfg.height_range = (0.1, 1.0);
        cfg.theta_samples = 4;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn equilateral_sweep_residuals_and_mirrors() {
        let t = make_triangle(1.0, 1.0, 1.0).unwrap();
        let out = sweep_cylinder(&SweepConfig::new(t, 16, 4), &Tolerances::default()).unwrap();
        assert!(out.failures.is_empty(), "{:?}", out.failures);
        assert_eq!(out.records.len(), 16 * 4 * 2);
        for r in &out.records {
            assert!(r.complement_e.residual < 1e-9);
            assert_eq!(r.source_mu, 2);
            if let [a, b] = r.complement_centers[..] {
                assert_eq!((a.x, a.y, a.z), (b.x, b.y, -b.z));
            }
        }
    }
}
