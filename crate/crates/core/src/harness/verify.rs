//! Verification suites. Each numbered criterion is a function from a shared
//! context to a list of checks; the CLI and the acceptance target both run
//! them through [`run_criterion`].

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use nalgebra::{Quaternion, UnitQuaternion, Vector3};
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::fixtures::{fixture_by_sides, load_fixtures, FixtureTriangle};
use super::report::{Bound, CheckResult, RunReport};
use super::tolerances::Tolerances;
use crate::deltoid::{
    circle_crossing, component_membership, cusp_check, fit_deltoid_e, fit_deltoid_xyz, plane_fit_residual,
    sweep_cylinder, sweep_figure8, tangency_check, xyz_samples, ComplementaryRecord, SweepConfig, SweepOutcome, XyzFit,
    NEAR_SOURCE,
};
use crate::dualspace::{multiplicity, LocalSystem, Multiplicity};
use crate::p3p::{
    continuum_samples, detect_continuum, distances, distances_sq_exact, instance_from_center, make_triangle, recover_pose, solve_with,
    CameraCenter, P3PInstance, Triangle,
};
use crate::polyarith::{ImplicitSurfaceModel, Monomial};
use crate::strata::{
    classify_with, cylinder_membership_e, danger_cylinder_value_e_exact, generatrix_point, i1_max_normalized,
    morley_data, morley_triangle, StratumLabel,
};

/// Triangles whose leading coefficient ratios are gated.
pub const RATIO_FIXTURES: [&str; 3] = ["general_acute", "equilateral", "general_right"];
/// The triangle the tangency and intersection checks run on.
pub const TANGENCY_FIXTURE: &str = "general_acute";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Solver,
    Strata,
    Deltoid,
    All,
}

impl Suite {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Solver => &[9],
            Suite::Strata => &[1, 2, 3, 4],
            Suite::Deltoid => &[5, 6, 7, 8],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9],
        }
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "solver" => Ok(Suite::Solver),
            "strata" => Ok(Suite::Strata),
            "deltoid" => Ok(Suite::Deltoid),
            "all" => Ok(Suite::All),
            _ => Err(format!("unknown suite `{s}` (expected solver, strata, deltoid or all)")),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Solver => "solver",
            Suite::Strata => "strata",
            Suite::Deltoid => "deltoid",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

/// Sweep grid used by every deltoid check.
pub const SWEEP_GRID: (usize, usize) = (64, 8);

/// Per-fixture sweep and fits, computed once and shared between criteria.
pub struct FixtureRun {
    pub fixture: FixtureTriangle,
    pub triangle: Triangle,
    sweep: OnceLock<Result<(Arc<SweepOutcome>, Duration), String>>,
    e_model: OnceLock<Result<(Arc<ImplicitSurfaceModel>, Duration), String>>,
    xyz: OnceLock<Result<Arc<XyzFit>, String>>,
}

impl FixtureRun {
    fn new(fixture: FixtureTriangle) -> Self {
        let triangle = fixture.triangle().expect("fixtures are valid triangles");
        FixtureRun {
            fixture,
            triangle,
            sweep: OnceLock::new(),
            e_model: OnceLock::new(),
            xyz: OnceLock::new(),
        }
    }

    pub fn name(&self) -> &str {
        self.fixture.name
    }

    pub fn circumdiameter(&self) -> f64 {
        2.0 * self.triangle.circumcircle().1
    }

    /// The 64 x 8 sweep including the generatrix angles, and its runtime.
    pub fn sweep(&self, tol: &Tolerances) -> Result<(Arc<SweepOutcome>, Duration), String> {
        self.sweep
            .get_or_init(|| {
                let start = Instant::now();
                let mut cfg = SweepConfig::new(self.triangle.clone(), SWEEP_GRID.0, SWEEP_GRID.1);
                cfg.include_morley = true;
                sweep_cylinder(&cfg, tol)
                    .map(|s| (Arc::new(s), start.elapsed()))
                    .map_err(|e| e.to_string())
            })
            .clone()
    }

    /// Degree-16 even fit in `e'` and its runtime.
    pub fn e_model(&self, tol: &Tolerances) -> Result<(Arc<ImplicitSurfaceModel>, Duration), String> {
        self.e_model
            .get_or_init(|| {
                let (sweep, _) = self.sweep(tol)?;
                let start = Instant::now();
                fit_deltoid_e(&self.triangle, &sweep.records, 16)
                    .map(|m| (Arc::new(m), start.elapsed()))
                    .map_err(|e| e.to_string())
            })
            .clone()
    }

    /// Degree-12 fit in center coordinates.
    pub fn xyz(&self, tol: &Tolerances) -> Result<Arc<XyzFit>, String> {
        self.xyz
            .get_or_init(|| {
                let (sweep, _) = self.sweep(tol)?;
                fit_deltoid_xyz(&self.triangle, &sweep.records, 12, tol.fit_residual)
                    .map(Arc::new)
                    .map_err(|e| e.to_string())
            })
            .clone()
    }
}

pub struct VerifyContext {
    pub tol: Tolerances,
    pub runs: Vec<FixtureRun>,
}

impl VerifyContext {
    /// All seven fixtures.
    pub fn new(tol: Tolerances) -> Self {
        VerifyContext {
            tol,
            runs: load_fixtures().into_iter().map(FixtureRun::new).collect(),
        }
    }

    /// Only the fixture with the given side lengths.
    pub fn for_sides(tol: Tolerances, sides: [f64; 3]) -> Result<Self, String> {
        let f = fixture_by_sides(sides).ok_or_else(|| format!("no fixture triangle with sides {sides:?}"))?;
        Ok(VerifyContext {
            tol,
            runs: vec![FixtureRun::new(f)],
        })
    }

    fn run(&self, name: &str) -> Option<&FixtureRun> {
        self.runs.iter().find(|r| r.name() == name)
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.tol.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

/// Runs every criterion of `suite` and assembles the report.
pub fn run_verify(suite: Suite, ctx: &VerifyContext) -> RunReport {
    let start = Instant::now();
    let checks = suite.criteria().iter().flat_map(|&c| run_criterion(c, ctx)).collect();
    let mut report = RunReport::new(&suite.to_string(), ctx.tol.seed, ctx.tol.config_hash(), checks);
    report.runtime_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    report
}

pub fn run_criterion(criterion: u8, ctx: &VerifyContext) -> Vec<CheckResult> {
    match criterion {
        1 => exact_cylinder_fixture(ctx),
        2 => cylinder_sampling(ctx),
        3 => triple_stratum(ctx),
        4 => no_quadruple_zeros(ctx),
        5 => component_membership_checks(ctx),
        6 => coefficient_ratios(ctx),
        7 => tangency_and_intersection(ctx),
        8 => cusp_and_double_roots(ctx),
        9 => solver_soundness(ctx),
        _ => vec![CheckResult::flag(format!("c{criterion}.unknown"), criterion, false)
            .with_detail("no such criterion")],
    }
}

fn error_check(id: String, criterion: u8, msg: impl fmt::Display) -> CheckResult {
    CheckResult::flag(id, criterion, false).with_detail(format!("error: {msg}"))
}

fn c64(e: [f64; 3]) -> [Complex64; 3] {
    e.map(|x| Complex64::new(x, 0.0))
}

fn mu_at(inst: &P3PInstance, e: &[Complex64; 3], tol: &Tolerances) -> Multiplicity {
    multiplicity(&LocalSystem::new(inst, e), tol.max_order, tol.tau_rank).0
}

/// Triangle (5,4,3), center (4,2,1).
fn exact_cylinder_fixture(ctx: &VerifyContext) -> Vec<CheckResult> {
    let start = Instant::now();
    let tol = &ctx.tol;
    let t = make_triangle(5.0, 4.0, 3.0).expect("valid triangle");
    let o = CameraCenter::new(4.0, 2.0, 1.0);
    let mut out = Vec::new();
    let exact_zero = distances_sq_exact(&t, o).map(|sq| danger_cylinder_value_e_exact(&t, &sq));
    out.push(
        CheckResult::flag("c1.exact_value", 1, exact_zero.as_ref().is_some_and(|v| v.is_zero()))
            .with_detail(format!("exact cylinder value {exact_zero:?}")),
    );
    match classify_with(&t, o, tol) {
        Ok(c) => {
            out.push(
                CheckResult::flag("c1.label", 1, c.label == StratumLabel::DangerCylinder && c.exact)
                    .with_detail(format!("{} (exact = {})", c.label, c.exact)),
            );
            let dims = c.report.as_ref().map(|r| r.dims.clone()).unwrap_or_default();
            let mu = c.report.as_ref().map(|r| r.mu);
            out.push(
                CheckResult::flag("c1.dual_dims", 1, dims.starts_with(&[1, 2, 2]) && mu == Some(Multiplicity::Finite(2)))
                    .with_detail(format!("dims {dims:?}, mu {mu:?}")),
            );
        }
        Err(e) => out.push(error_check("c1.label".into(), 1, e)),
    }
    // Under a small cosine perturbation a double root splits into two
    // roots at distance O(sqrt(eps)); the others stay O(1) away.
    let inst = instance_from_center(&t, o).expect("generic center");
    let seed = c64(distances(&t, o));
    let mut rng = ctx.rng(1);
    let eps = 1e-6;
    let radius = 1e-2 * t.scale();
    let mut sizes = Vec::new();
    for _ in 0..20 {
        let c = [inst.cos(0, 1), inst.cos(0, 2), inst.cos(1, 2)].map(|c| c + eps * rng.random_range(-1.0..1.0));
        let size = P3PInstance::new(t.clone(), c[0], c[1], c[2])
            .and_then(|p| solve_with(&p, &tol.solver()))
            .map(|r| r.solutions.iter().filter(|s| s.distance_to(&seed) < radius).count())
            .unwrap_or(0);
        sizes.push(size);
    }
    let misses = sizes.iter().filter(|&&s| s != 2).count();
    out.push(
        CheckResult::new("c1.perturbation_cluster", 1, misses as f64, Bound::Equal, 0.0)
            .with_detail(format!("cluster sizes within {radius:.1e}: {sizes:?}")),
    );
    let ms = start.elapsed().as_secs_f64() * 1e3;
    out.push(CheckResult::new("c1.runtime_ms", 1, ms, Bound::Below, 1000.0));
    out
}

/// Random points on and off the cylinder of each fixture.
fn cylinder_sampling(ctx: &VerifyContext) -> Vec<CheckResult> {
    let start = Instant::now();
    let tol = ctx.tol;
    let mut out: Vec<CheckResult> = ctx
        .runs
        .par_iter()
        .enumerate()
        .flat_map_iter(|(k, run)| {
            let t = &run.triangle;
            let ([cx, cy], r) = t.circumcircle();
            let mut rng = ctx.rng(200 + k as u64);
            let on: Vec<CameraCenter> = (0..200)
                .map(|_| {
                    let th = rng.random_range(0.0..2.0 * PI);
                    let h = 4.0 * r * (1.0 - rng.random_range(0.0..1.0));
                    generatrix_point(t, th, h)
                })
                .collect();
            let mut off = Vec::new();
            while off.len() < 200 {
                let (rho, th) = (rng.random_range(0.0..2.0 * r), rng.random_range(0.0..2.0 * PI));
                if (rho * rho - r * r).abs() <= 0.05 * r * r {
                    continue;
                }
                let z = 4.0 * r * (1.0 - rng.random_range(0.0..1.0));
                off.push(CameraCenter::new(cx + rho * th.cos(), cy + rho * th.sin(), z));
            }
            let bad_on: Vec<String> = on
                .par_iter()
                .filter_map(|&o| match classify_with(t, o, &tol) {
                    Ok(c) if c.label.mu().is_some_and(|m| m >= 2) => None,
                    Ok(c) => Some(format!("{o:?}: {}", c.label)),
                    Err(e) => Some(format!("{o:?}: {e}")),
                })
                .collect();
            let bad_off: Vec<String> = off
                .par_iter()
                .filter_map(|&o| match classify_with(t, o, &tol) {
                    Ok(c) if c.label == StratumLabel::Regular => None,
                    Ok(c) => Some(format!("{o:?}: {}", c.label)),
                    Err(e) => Some(format!("{o:?}: {e}")),
                })
                .collect();
            [
                CheckResult::new(format!("c2.{}.cylinder", run.name()), 2, bad_on.len() as f64, Bound::Equal, 0.0)
                    .with_detail(bad_on.first().cloned().unwrap_or_default()),
                CheckResult::new(format!("c2.{}.off_cylinder", run.name()), 2, bad_off.len() as f64, Bound::Equal, 0.0)
                    .with_detail(bad_off.first().cloned().unwrap_or_default()),
            ]
        })
        .collect();
    let secs = start.elapsed().as_secs_f64();
    out.push(CheckResult::new("c2.runtime_s", 2, secs, Bound::Below, 60.0));
    out
}

/// Generatrix probes, `c_2` separation and Morley equilaterality.
fn triple_stratum(ctx: &VerifyContext) -> Vec<CheckResult> {
    let tol = ctx.tol;
    let mut out: Vec<CheckResult> = ctx
        .runs
        .par_iter()
        .enumerate()
        .flat_map_iter(|(k, run)| {
            let t = &run.triangle;
            let name = run.name();
            let (_, r) = t.circumcircle();
            let md = match morley_data(t, tol.tau_rank, tol.max_order) {
                Ok(m) => m,
                Err(e) => return vec![error_check(format!("c3.{name}.morley"), 3, e)],
            };
            let mut mu_bad = Vec::new();
            let mut i1_max: f64 = 0.0;
            let mut c2_morley: f64 = 0.0;
            for &th in &md.thetas {
                let o = generatrix_point(t, th, r);
                match classify_with(t, o, &tol) {
                    Ok(c) => {
                        if c.label != StratumLabel::MorleyGeneratrix {
                            mu_bad.push(format!("theta {th:.6}: {}", c.label));
                        }
                        c2_morley = c2_morley.max(c.report.and_then(|r| r.c2).unwrap_or(f64::INFINITY));
                    }
                    Err(e) => mu_bad.push(format!("theta {th:.6}: {e}")),
                }
                i1_max = i1_max.max(i1_max_normalized(t, &c64(distances(t, o))));
            }
            // generic cylinder points, away from the generatrices
            let mut rng = ctx.rng(300 + k as u64);
            let mut c2_generic = f64::INFINITY;
            let mut generic_bad = Vec::new();
            let mut n = 0;
            while n < 16 {
                let th = rng.random_range(0.0..2.0 * PI);
                let near = md.thetas.iter().any(|m| {
                    let d = (th - m).rem_euclid(2.0 * PI);
                    d.min(2.0 * PI - d) < 0.05
                });
                if near {
                    continue;
                }
                n += 1;
                let o = generatrix_point(t, th, r);
                match classify_with(t, o, &tol) {
                    Ok(c) if c.label == StratumLabel::DangerCylinder => {
                        c2_generic = c2_generic.min(c.report.and_then(|r| r.c2).unwrap_or(0.0));
                    }
                    Ok(c) => generic_bad.push(format!("theta {th:.6}: {}", c.label)),
                    Err(e) => generic_bad.push(format!("theta {th:.6}: {e}")),
                }
            }
            vec![
                CheckResult::new(format!("c3.{name}.generatrix_mu3"), 3, mu_bad.len() as f64, Bound::Equal, 0.0)
                    .with_detail(format!("thetas {:?} {}", md.thetas, mu_bad.join("; "))),
                CheckResult::new(format!("c3.{name}.i1_vanish"), 3, i1_max, Bound::Below, tol.generator_vanish),
                CheckResult::new(format!("c3.{name}.c2_generatrix"), 3, c2_morley, Bound::Below, tol.c2_floor),
                CheckResult::new(format!("c3.{name}.c2_generic"), 3, c2_generic, Bound::Above, tol.c2_floor)
                    .with_detail(generic_bad.join("; ")),
                CheckResult::new(format!("c3.{name}.generic_mu2"), 3, generic_bad.len() as f64, Bound::Equal, 0.0),
            ]
        })
        .collect();

    let mut rng = ctx.rng(399);
    let tris: Vec<Triangle> = (0..1000).map(|_| random_triangle(&mut rng)).collect();
    let spread = tris
        .par_iter()
        .map(|t| match morley_triangle(t) {
            Ok((d, e, f, _)) => {
                let dist = |p: [f64; 2], q: [f64; 2]| (p[0] - q[0]).hypot(p[1] - q[1]);
                let s = [dist(d, e), dist(e, f), dist(f, d)];
                let mean = (s[0] + s[1] + s[2]) / 3.0;
                s.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max) / mean
            }
            Err(_) => f64::INFINITY,
        })
        .reduce(|| 0.0, f64::max);
    out.push(
        CheckResult::new("c3.morley_equilateral", 3, spread, Bound::Below, 1e-12)
            .with_detail("largest relative side deviation over 1000 random triangles"),
    );
    out
}

/// Sides in `[0.3, 1]` with every angle above roughly 8 degrees.
pub fn random_triangle(rng: &mut impl Rng) -> Triangle {
    loop {
        let s: [f64; 3] = std::array::from_fn(|_| rng.random_range(0.3..1.0));
        let ok = (0..3).all(|i| s[i] < 0.9 * (s[(i + 1) % 3] + s[(i + 2) % 3]));
        if ok {
            if let Ok(t) = make_triangle(s[0], s[1], s[2]) {
                if t.angles().iter().all(|a| *a > 0.14) {
                    return t;
                }
            }
        }
    }
}

/// Sweep sources never reach multiplicity 4; circle points are continua.
fn no_quadruple_zeros(ctx: &VerifyContext) -> Vec<CheckResult> {
    let tol = ctx.tol;
    ctx.runs
        .par_iter()
        .flat_map_iter(|run| {
            let name = run.name();
            let t = &run.triangle;
            let mut out = Vec::new();
            match run.sweep(&tol) {
                Ok((sweep, _)) => {
                    let high = sweep.records.iter().filter(|r| r.source_mu >= 4).count();
                    let not_isolated = sweep.failures.len();
                    let max_mu = sweep.records.iter().map(|r| r.source_mu).max().unwrap_or(0);
                    out.push(
                        CheckResult::new(format!("c4.{name}.no_mu4"), 4, (high + not_isolated) as f64, Bound::Equal, 0.0)
                            .with_detail(format!(
                                "{} sources, largest mu {max_mu}, {not_isolated} failures {}",
                                sweep.records.len(),
                                sweep.failures.first().map(|f| f.error.as_str()).unwrap_or("")
                            )),
                    );
                }
                Err(e) => out.push(error_check(format!("c4.{name}.no_mu4"), 4, e)),
            }
            let ([cx, cy], r) = t.circumcircle();
            let missed: Vec<f64> = (0..16)
                .map(|i| 2.0 * PI * (i as f64 + 0.29) / 16.0)
                .filter(|&th| {
                    let o = CameraCenter::new(cx + r * th.cos(), cy + r * th.sin(), 0.0);
                    !instance_from_center(t, o).is_ok_and(|inst| detect_continuum(&inst, tol.continuum_tol))
                })
                .collect();
            out.push(
                CheckResult::new(format!("c4.{name}.circle_continuum"), 4, missed.len() as f64, Bound::Equal, 0.0)
                    .with_detail(format!("16 circle points, missed angles {missed:?}")),
            );
            out
        })
        .collect()
}

/// Every complement lies on a transcribed or fitted component.
fn component_membership_checks(ctx: &VerifyContext) -> Vec<CheckResult> {
    let tol = ctx.tol;
    ctx.runs
        .par_iter()
        .enumerate()
        .flat_map_iter(|(k, run)| {
            let name = run.name();
            let (sweep, model) = match (run.sweep(&tol), run.e_model(&tol)) {
                (Ok((s, _)), Ok((m, _))) => (s, m),
                (Err(e), _) | (_, Err(e)) => return vec![error_check(format!("c5.{name}.membership"), 5, e)],
            };
            let d = run.circumdiameter();
            let mut worst: f64 = 0.0;
            let mut matched: BTreeMap<String, usize> = BTreeMap::new();
            for rec in &sweep.records {
                let m = component_membership(&run.fixture, Some(&model), d, &rec.complement_e.e);
                worst = worst.max(m.value);
                // which transcribed component, if any, holds the point
                let transcribed = component_membership(&run.fixture, None, d, &rec.complement_e.e);
                let key = if transcribed.value < 1e-6 { transcribed.component } else { m.component };
                *matched.entry(key).or_insert(0) += 1;
            }
            let mut rng = ctx.rng(500 + k as u64);
            let controls: Vec<[Complex64; 3]> = (0..200)
                .map(|_| c64(std::array::from_fn(|_| rng.random_range(0.05..1.5) * d)))
                .collect();
            let fitted: Vec<f64> = controls
                .iter()
                .map(|e| component_membership(&run.fixture, Some(&model), d, e).value)
                .collect();
            let transcribed: Vec<f64> = controls
                .iter()
                .map(|e| component_membership(&run.fixture, None, d, e).value)
                .collect();
            let summary = |v: &[f64]| {
                let above = v.iter().filter(|x| **x > 1e-3).count();
                let member = v.iter().filter(|x| **x < 1e-6).count();
                (
                    v.iter().copied().fold(f64::INFINITY, f64::min),
                    format!("{above}/{} above 1e-3, {member} below the membership bound", v.len()),
                )
            };
            let (control, control_note) = summary(&fitted);
            let (control_transcribed, transcribed_note) = summary(&transcribed);
            // Each transcribed component should hold at least one computed
            // solution. Sweep complements cover the degree-16 part; the
            // quadrics and the quartic hold the solution continua of
            // circumcircle sources, one arc per sign pattern.
            let t = &run.triangle;
            let ([cx, cy], r) = t.circumcircle();
            let continua: Vec<[Complex64; 3]> = (0..24)
                .map(|i| 2.0 * PI * (i as f64 + 0.29) / 24.0)
                .filter_map(|th| instance_from_center(t, CameraCenter::new(cx + r * th.cos(), cy + r * th.sin(), 0.0)).ok())
                .flat_map(|inst| continuum_samples(&inst).into_iter().map(|s| s.e))
                .collect();
            let unmatched: Vec<String> = run
                .fixture
                .nontrivial()
                .filter(|c| {
                    !sweep
                        .records
                        .iter()
                        .map(|rec| &rec.complement_e.e)
                        .chain(&continua)
                        .any(|e| c.poly.normalized_abs_complex(e).unwrap_or(f64::INFINITY) < 1e-6)
                })
                .map(|c| c.label.clone())
                .collect();
            vec![
                CheckResult::new(format!("c5.{name}.membership"), 5, worst, Bound::Below, 1e-6)
                    .with_detail(format!("{} complements, matched {matched:?}", sweep.records.len())),
                CheckResult::new(format!("c5.{name}.negative_control"), 5, control, Bound::Above, 1e-3)
                    .with_detail(format!("transcribed and fitted components: {control_note}")),
                CheckResult::new(format!("c5.{name}.negative_control_transcribed"), 5, control_transcribed, Bound::Above, 1e-3)
                    .with_detail(format!("transcribed components only: {transcribed_note}")),
                CheckResult::new(format!("c5.{name}.transcription"), 5, unmatched.len() as f64, Bound::Equal, 0.0)
                    .with_detail(format!(
                        "{} continuum samples; components without a solution: {unmatched:?}",
                        continua.len()
                    )),
            ]
        })
        .collect()
}

/// Leading coefficient ratios of the degree-16 fit.
fn coefficient_ratios(ctx: &VerifyContext) -> Vec<CheckResult> {
    let tol = ctx.tol;
    RATIO_FIXTURES
        .par_iter()
        .filter_map(|name| ctx.run(name))
        .flat_map_iter(|run| {
            let name = run.name();
            let (sweep_time, (model, fit_time)) = match (run.sweep(&tol), run.e_model(&tol)) {
                (Ok((_, st)), Ok(m)) => (st, m),
                (Err(e), _) | (_, Err(e)) => return vec![error_check(format!("c6.{name}.ratios"), 6, e)],
            };
            let lead = model.coefficient(&Monomial::new(vec![8, 8, 0]));
            let mut worst: f64 = 0.0;
            let mut detail = Vec::new();
            for (m, want) in run.fixture.leading_ratios() {
                let got = model.coefficient(&m) / lead;
                let rel = (got - want).abs() / want.abs();
                worst = worst.max(rel);
                detail.push(format!("{:?}: {got:.9} vs {want:.9}", m.exponents()));
            }
            let secs = (sweep_time + fit_time).as_secs_f64();
            vec![
                CheckResult::new(format!("c6.{name}.ratios"), 6, worst, Bound::Below, 1e-5)
                    .with_detail(format!("gap {:.2e}; {}", model.sigma_gap, detail.join(", "))),
                CheckResult::new(format!("c6.{name}.runtime_s"), 6, secs, Bound::Below, 120.0),
            ]
        })
        .collect()
}

/// Angular distance on the circle.
fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// Tangency along the generatrices and the crossing at the circumcircle.
fn tangency_and_intersection(ctx: &VerifyContext) -> Vec<CheckResult> {
    let tol = ctx.tol;
    let Some(run) = ctx.run(TANGENCY_FIXTURE) else {
        return Vec::new();
    };
    let t = &run.triangle;
    let (sweep, fit) = match (run.sweep(&tol), run.xyz(&tol)) {
        (Ok((s, _)), Ok(f)) => (s, f),
        (Err(e), _) | (_, Err(e)) => return vec![error_check("c7.fit".into(), 7, e)],
    };
    let md = match morley_data(t, tol.tau_rank, tol.max_order) {
        Ok(m) => m,
        Err(e) => return vec![error_check("c7.morley".into(), 7, e)],
    };
    let ([cx, cy], r) = t.circumcircle();
    let probes: Vec<CameraCenter> = md
        .thetas
        .iter()
        .flat_map(|&th| [0.5, 1.0, 2.0].map(|k| generatrix_point(t, th, k * r)))
        .collect();
    let cross = tangency_check(t, &fit.model, &probes).into_iter().fold(0.0, f64::max);

    // circle samples away from the vertices and the generatrix bases
    let vertex_angles: Vec<f64> = t.vertices().iter().map(|v| (v.y - cy).atan2(v.x - cx)).collect();
    let circle: Vec<CameraCenter> = (0..24)
        .map(|i| 2.0 * PI * (i as f64 + 0.5) / 24.0)
        .filter(|&th| vertex_angles.iter().chain(&md.thetas).all(|&a| angle_gap(a, th) > 0.15))
        .map(|th| CameraCenter::new(cx + r * th.cos(), cy + r * th.sin(), 0.0))
        .collect();
    let crossings = circle_crossing(t, &fit.model, &circle, &xyz_samples(t, &sweep.records));
    let vanish = crossings.iter().map(|c| c.value).fold(0.0, f64::max);
    let min_cross = crossings.iter().map(|c| c.gradient_cross).fold(f64::INFINITY, f64::min);
    let max_ratio = crossings.iter().map(|c| c.gradient_ratio).fold(0.0, f64::max);
    let branches: Vec<String> = crossings
        .iter()
        .map(|c| c.branch_cross.map_or("-".into(), |b| format!("{b:.1e}")))
        .collect();
    vec![
        CheckResult::new("c7.tangency", 7, cross, Bound::Below, 1e-4)
            .with_detail(format!("{} probes on {} generatrices, h in R/2, R, 2R", probes.len(), md.thetas.len())),
        CheckResult::new("c7.circle_on_surface", 7, vanish, Bound::Below, 1e-7)
            .with_detail(format!("{} circle samples, fit basis {}", circle.len(), if fit.even_basis { "even" } else { "full" })),
        CheckResult::new("c7.circle_cross", 7, min_cross, Bound::Above, 1e-2).with_detail(format!(
            "gradient norm at the circle is at most {max_ratio:.1e} of the median over the cloud; tangent-cone branch cross norms {}",
            branches.join(" ")
        )),
    ]
}

/// Cusp gradients, multiplicity of complements and cusp-curve shape.
fn cusp_and_double_roots(ctx: &VerifyContext) -> Vec<CheckResult> {
    let tol = ctx.tol;
    ctx.runs
        .par_iter()
        .flat_map_iter(|run| {
            let name = run.name();
            let t = &run.triangle;
            let (sweep, model) = match (run.sweep(&tol), run.e_model(&tol)) {
                (Ok((s, _)), Ok((m, _))) => (s, m),
                (Err(e), _) | (_, Err(e)) => return vec![error_check(format!("c8.{name}.cusp"), 8, e)],
            };
            let d = run.circumdiameter();
            let scaled = |e: &[Complex64; 3]| e.iter().map(|x| x / d).collect::<Vec<_>>();
            let triple: Vec<Vec<Complex64>> = sweep
                .records
                .iter()
                .filter(|r| r.source_mu == 3)
                .map(|r| scaled(&r.complement_e.e))
                .collect();
            let double: Vec<Vec<Complex64>> = sweep
                .records
                .iter()
                .filter(|r| r.source_mu == 2)
                .map(|r| scaled(&r.complement_e.e))
                .collect();
            let ratios = cusp_check(&model, &triple, &double);
            let cusp = if ratios.is_empty() { f64::INFINITY } else { ratios.iter().copied().fold(0.0, f64::max) };
            let on_model = triple.iter().map(|p| model.normalized_abs_complex(p)).fold(0.0, f64::max);

            // complements within NEAR_SOURCE of their source belong to a
            // near-triple cluster next to a generatrix and are left out
            let far = |r: &&ComplementaryRecord| r.separation > NEAR_SOURCE * t.scale();
            let excluded = sweep.records.iter().filter(|r| r.source_mu == 2 && !far(r)).count();
            let (doubles, off_cyl) = sweep
                .records
                .par_iter()
                .filter(|r| r.source_mu == 2 && !r.on_morley_generatrix)
                .filter(far)
                .map(|r| {
                    let inst = instance_from_center(t, r.source_center).expect("sweep source is valid");
                    let mu = mu_at(&inst, &r.complement_e.e, &tol);
                    let cyl = cylinder_membership_e(t, &r.complement_e.e);
                    (usize::from(mu != Multiplicity::Finite(1)), cyl)
                })
                .reduce(|| (0, f64::INFINITY), |a, b| (a.0 + b.0, a.1.min(b.1)));

            // cusp curves traced over the sweep heights
            let gen_thetas: Vec<f64> = {
                let mut v: Vec<f64> = sweep.records.iter().filter(|r| r.on_morley_generatrix).map(|r| r.theta).collect();
                v.sort_by(f64::total_cmp);
                v.dedup();
                v
            };
            let planes: Vec<f64> = gen_thetas
                .iter()
                .map(|th| {
                    let pts: Vec<CameraCenter> = sweep
                        .records
                        .iter()
                        .filter(|r| r.on_morley_generatrix && r.theta == *th)
                        .filter_map(|r| r.complement_centers.first().copied())
                        .collect();
                    plane_fit_residual(&pts) / d
                })
                .collect();
            let min_plane = planes.iter().copied().fold(f64::INFINITY, f64::min);

            // trajectory of the complements as the source circles the axis
            let fig8 = sweep_figure8(t, 1.0, d / 2.0, 96, &tol)
                .map(|pts| {
                    let cloud: Vec<CameraCenter> = pts.iter().flat_map(|p| p.other_centers.iter().copied()).collect();
                    plane_fit_residual(&cloud) / d
                })
                .map_err(|e| e.to_string());

            let mut out = vec![
                CheckResult::new(format!("c8.{name}.cusp_gradient"), 8, cusp, Bound::Below, tol.cusp_ratio)
                    .with_detail(format!("{} triple-source complements against {} double-source", triple.len(), double.len())),
                CheckResult::new(format!("c8.{name}.cusp_on_surface"), 8, on_model, Bound::Below, 1e-7),
                CheckResult::new(format!("c8.{name}.no_two_doubles"), 8, doubles as f64, Bound::Equal, 0.0)
                    .with_detail(format!("{excluded} complements within the near-source radius skipped")),
                CheckResult::new(format!("c8.{name}.complements_off_cylinder"), 8, off_cyl, Bound::Above, tol.membership)
                    .with_detail("smallest cylinder value at complements of double roots off the generatrices"),
                CheckResult::new(format!("c8.{name}.cusp_curve_nonplanar"), 8, min_plane, Bound::Above, 1e-2)
                    .with_detail(format!("plane residual / circumdiameter per curve {:?}", planes.iter().map(|p| format!("{p:.3e}")).collect::<Vec<_>>())),
            ];
            out.push(match fig8 {
                Ok(v) => CheckResult::new(format!("c8.{name}.trajectory_nonplanar"), 8, v, Bound::Above, 1e-2)
                    .with_detail("complements of 96 sources on the circle at h = R"),
                Err(e) => error_check(format!("c8.{name}.trajectory_nonplanar"), 8, e),
            });
            out
        })
        .collect()
}

fn random_rotation(rng: &mut impl Rng) -> UnitQuaternion<f64> {
    loop {
        let q: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n = q.iter().map(|x| x * x).sum::<f64>();
        if n > 1e-3 && n <= 1.0 {
            return UnitQuaternion::from_quaternion(Quaternion::new(q[0], q[1], q[2], q[3]));
        }
    }
}

/// Residuals, root counts and pose round trips on random instances.
fn solver_soundness(ctx: &VerifyContext) -> Vec<CheckResult> {
    let tol = ctx.tol;
    let mut rng = ctx.rng(900);
    let cases: Vec<(Triangle, CameraCenter, UnitQuaternion<f64>)> = (0..10_000)
        .map(|_| {
            let t = random_triangle(&mut rng);
            let ([cx, cy], r) = t.circumcircle();
            let o = loop {
                let (rho, th) = (rng.random_range(0.0..2.0 * r), rng.random_range(0.0..2.0 * PI));
                if (rho * rho - r * r).abs() > 0.05 * r * r {
                    let z = rng.random_range(0.2..3.0) * r;
                    break CameraCenter::new(cx + rho * th.cos(), cy + rho * th.sin(), z);
                }
            };
            let rot = random_rotation(&mut rng);
            (t, o, rot)
        })
        .collect();
    struct Outcome {
        residual: f64,
        count_ok: bool,
        pose_err: f64,
        error: Option<String>,
    }
    let outcomes: Vec<Outcome> = cases
        .par_iter()
        .map(|(t, o, rot)| {
            let world = t.vertices();
            let rm = rot.to_rotation_matrix().into_inner();
            let tv = -(rm * o.to_vector());
            let bearings: [Vector3<f64>; 3] = world.map(|x| (rm * x + tv).normalize());
            let cos = |i: usize, j: usize| bearings[i].dot(&bearings[j]);
            let fail = |e: String| Outcome {
                residual: f64::INFINITY,
                count_ok: false,
                pose_err: f64::INFINITY,
                error: Some(e),
            };
            let inst = match P3PInstance::new(t.clone(), cos(0, 1), cos(0, 2), cos(1, 2)) {
                Ok(i) => i,
                Err(e) => return fail(e.to_string()),
            };
            let rep = match solve_with(&inst, &tol.solver()) {
                Ok(r) => r,
                Err(e) => return fail(e.to_string()),
            };
            let scale2 = t.scale() * t.scale();
            let residual = rep.solutions.iter().map(|s| s.residual / scale2).fold(0.0, f64::max);
            let pose_err = rep
                .solutions
                .iter()
                .filter_map(|s| recover_pose(s, &world, &bearings).ok())
                .map(|p| (p.r - rm).norm() + (p.t - tv).norm() / t.scale())
                .fold(f64::INFINITY, f64::min);
            Outcome {
                residual,
                count_ok: rep.solutions.len() == 4,
                pose_err,
                error: None,
            }
        })
        .collect();
    let errors: Vec<&String> = outcomes.iter().filter_map(|o| o.error.as_ref()).collect();
    let residual = outcomes.iter().map(|o| o.residual).fold(0.0, f64::max);
    let bad_count = outcomes.iter().filter(|o| !o.count_ok).count();
    let pose = outcomes.iter().map(|o| o.pose_err).fold(0.0, f64::max);
    vec![
        CheckResult::new("c9.residual", 9, residual, Bound::Below, 1e-10)
            .with_detail(format!("largest residual / scale^2 over 10000 instances; {} solver errors {:?}", errors.len(), errors.first())),
        CheckResult::new("c9.four_clusters", 9, bad_count as f64, Bound::Equal, 0.0)
            .with_detail("instances off the cylinder without exactly 4 distinct roots"),
        CheckResult::new("c9.pose_roundtrip", 9, pose, Bound::Below, 1e-8)
            .with_detail("largest |R - R0|_F + |t - t0| / scale over instances"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        assert_eq!("strata".parse::<Suite>().unwrap(), Suite::Strata);
        assert!("bogus".parse::<Suite>().is_err());
        assert_eq!(Suite::All.criteria().len(), 9);
    }

    #[test]
    fn exact_fixture_passes() {
        let ctx = VerifyContext::new(Tolerances::default());
        let checks = run_criterion(1, &ctx);
        assert!(checks.iter().all(|c| c.passed()), "{checks:#?}");
    }
}
