//! Every numerical threshold in one record.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dualspace::DualTolerances;
use crate::p3p::SolverOptions;

/// Environment variable naming a JSON file that overrides [`Tolerances`].
pub const TOLERANCE_ENV: &str = "P3PSTRAT_TOLERANCES";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Singular values below `tau_rank * sigma_1` count as zero.
    pub tau_rank: f64,
    /// Normalized danger-cylinder value below which a center is on it.
    pub membership: f64,
    /// Held-out RMS residual accepted for an implicit fit.
    pub fit_residual: f64,
    /// Cusp gradients must be this far below the double-root median.
    pub cusp_ratio: f64,
    /// Solver clustering radius relative to the triangle scale.
    pub cluster_radius: f64,
    /// Relative size under which the eliminant counts as zero.
    pub continuum_tol: f64,
    /// Term-mass-normalized value under which a generator vanishes.
    pub generator_vanish: f64,
    /// `|c_2|` below this counts as vanishing.
    pub c2_floor: f64,
    /// Highest differential order tried for multiplicity.
    pub max_order: u32,
    /// Seed for every random sample.
    pub seed: u64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tau_rank: 1e-8,
            membership: 1e-9,
            fit_residual: 1e-6,
            cusp_ratio: 1e-3,
            cluster_radius: 1e-6,
            continuum_tol: 1e-10,
            generator_vanish: 1e-8,
            c2_floor: 1e-8,
            max_order: 6,
            seed: 20240917,
        }
    }
}

impl Tolerances {
    /// Defaults, overridden by the file named in [`TOLERANCE_ENV`] if set.
    pub fn from_env() -> Result<Self, String> {
        match std::env::var(TOLERANCE_ENV) {
            Ok(path) => {
                let text = std::fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?;
                serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))
            }
            Err(_) => Ok(Tolerances::default()),
        }
    }

    pub fn dual(&self) -> DualTolerances {
        DualTolerances {
            tau_rank: self.tau_rank,
            max_order: self.max_order,
        }
    }

    pub fn solver(&self) -> SolverOptions {
        SolverOptions {
            cluster_radius: self.cluster_radius,
            continuum_tol: self.continuum_tol,
            ..SolverOptions::default()
        }
    }

    /// Hex SHA-256 of the canonical JSON encoding.
    pub fn config_hash(&self) -> String {
        let json = serde_json::to_string(self).expect("tolerances serialize");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_override_keeps_defaults() {
        let t: Tolerances = serde_json::from_str(r#"{"tau_rank": 1e-9}"#).unwrap();
        assert_eq!(t.tau_rank, 1e-9);
        assert_eq!(t.membership, Tolerances::default().membership);
    }

    #[test]
    fn hash_tracks_values() {
        let a = Tolerances::default();
        let b = Tolerances { seed: 7, ..a };
        assert_eq!(a.config_hash(), Tolerances::default().config_hash());
        assert_ne!(a.config_hash(), b.config_hash());
        assert_eq!(a.config_hash().len(), 64);
    }
}
