//! Check results and the run report written by `verify`.

use std::time::Instant;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

/// How the realized value is compared with the tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Bound {
    #[serde(rename = "<")]
    Below,
    #[serde(rename = ">")]
    Above,
    #[serde(rename = "==")]
    Equal,
}

impl Bound {
    pub fn holds(self, value: f64, tolerance: f64) -> bool {
        match self {
            Bound::Below => value < tolerance,
            Bound::Above => value > tolerance,
            Bound::Equal => value == tolerance,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Bound::Below => "<",
            Bound::Above => ">",
            Bound::Equal => "==",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    /// Stable identifier, e.g. `c6.general_acute.ratios`.
    pub id: String,
    pub criterion: u8,
    pub status: CheckStatus,
    pub value: f64,
    pub bound: Bound,
    pub tolerance: f64,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

impl CheckResult {
    pub fn new(id: impl Into<String>, criterion: u8, value: f64, bound: Bound, tolerance: f64) -> Self {
        let status = if bound.holds(value, tolerance) {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        CheckResult {
            id: id.into(),
            criterion,
            status,
            value,
            bound,
            tolerance,
            detail: String::new(),
            runtime_ms: None,
        }
    }

    /// A boolean check, recorded as a 0/1 count against `== 1`.
    pub fn flag(id: impl Into<String>, criterion: u8, ok: bool) -> Self {
        CheckResult::new(id, criterion, if ok { 1.0 } else { 0.0 }, Bound::Equal, 1.0)
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.runtime_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    /// `value bound tolerance`, e.g. `3.1e-9 < 1e-6`.
    pub fn margin(&self) -> String {
        format!("{:.3e} {} {:.3e}", self.value, self.bound.symbol(), self.tolerance)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub suite: String,
    pub seed: u64,
    pub config_hash: String,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

impl RunReport {
    /// Sorts checks by id so the order does not depend on scheduling.
    pub fn new(suite: &str, seed: u64, config_hash: String, mut checks: Vec<CheckResult>) -> Self {
        checks.sort_by(|a, b| (a.criterion, &a.id).cmp(&(b.criterion, &b.id)));
        let passed = checks.iter().filter(|c| c.passed()).count();
        RunReport {
            suite: suite.to_string(),
            seed,
            config_hash,
            passed,
            failed: checks.len() - passed,
            checks,
            runtime_ms: None,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    /// JSON with every runtime field dropped, for reproducibility checks.
    pub fn to_json_without_runtime(&self) -> String {
        let mut r = self.clone();
        r.runtime_ms = None;
        r.checks.iter_mut().for_each(|c| c.runtime_ms = None);
        serde_json::to_string_pretty(&r).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_and_ordering() {
        let a = CheckResult::new("b", 2, 1e-9, Bound::Below, 1e-6);
        let b = CheckResult::new("a", 2, 1e-9, Bound::Above, 1e-6);
        let c = CheckResult::flag("z", 1, true);
        let r = RunReport::new("x", 1, "h".into(), vec![a, b, c]);
        assert_eq!((r.passed, r.failed), (2, 1));
        let ids: Vec<&str> = r.checks.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, ["z", "a", "b"]);
    }

    #[test]
    fn runtime_does_not_enter_stable_json() {
        let c = CheckResult::new("a", 1, 0.0, Bound::Below, 1.0);
        let mut r1 = RunReport::new("s", 3, "h".into(), vec![c.clone().timed(Instant::now())]);
        let r2 = RunReport::new("s", 3, "h".into(), vec![c]);
        r1.runtime_ms = Some(12.0);
        assert_eq!(r1.to_json_without_runtime(), r2.to_json_without_runtime());
        assert_ne!(r1.to_json(), r2.to_json());
    }
}
