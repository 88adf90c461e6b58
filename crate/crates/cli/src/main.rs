//! `p3pstrat` command line.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use p3pstrat::deltoid::{fit_deltoid_e, fit_deltoid_xyz, sweep_cylinder, SweepConfig};
use p3pstrat::dualspace::{multiplicity, LocalSystem, Multiplicity};
use p3pstrat::harness::{
    ingest_scene, load_fixtures, parse_center, parse_triangle, parse_triple, run_verify, Suite, Tolerances,
    VerifyContext, E_PRIME_VARS, TOLERANCE_ENV,
};
use p3pstrat::p3p::{instance_from_center, solve_with, P3PInstance, P3pError, SolutionTriple, Triangle};
use p3pstrat::strata::{classify_with, morley_data};

#[derive(Parser)]
#[command(name = "p3pstrat", version, about = "Singular configurations of the P3P problem")]
#[command(after_help = "Tolerances are read from the JSON file named by P3PSTRAT_TOLERANCES, if set.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the distance system for a center, cosines or a scene file.
    Solve {
        /// Side lengths `s12,s13,s23`; `sqrt(q)` allowed.
        #[arg(long, required_unless_present = "scene")]
        triangle: Option<String>,
        /// Camera center `x,y,z`.
        #[arg(long, conflicts_with = "cosines")]
        center: Option<String>,
        /// Bearing cosines `c12,c13,c23`.
        #[arg(long)]
        cosines: Option<String>,
        /// JSON scene file; overrides the other inputs.
        #[arg(long)]
        scene: Option<PathBuf>,
    },
    /// Stratum of a camera center.
    Classify {
        #[arg(long)]
        triangle: String,
        #[arg(long)]
        center: String,
        #[arg(long)]
        json: bool,
    },
    /// Morley triangle, generatrix angles and bases.
    Morley {
        #[arg(long)]
        triangle: String,
        #[arg(long)]
        json: bool,
    },
    /// Complements over a cylinder grid, as CSV.
    Sweep {
        #[arg(long)]
        triangle: String,
        #[arg(long, default_value_t = 64)]
        theta_samples: usize,
        #[arg(long, default_value_t = 8)]
        height_samples: usize,
        /// Add the three generatrix angles to the grid.
        #[arg(long)]
        morley: bool,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Implicit fits of the complement cloud.
    Deltoid {
        #[command(subcommand)]
        action: DeltoidAction,
    },
    /// Run a verification suite and write its JSON report.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(SuiteArg))]
        suite: SuiteArg,
        /// Restrict fixture checks to the fixture with these sides.
        #[arg(long)]
        triangle: Option<String>,
        /// Report path; standard output when absent.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the fixture triangles and their components.
    DumpFixtures {
        /// Write one SparsePoly text file per component into this directory.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DeltoidAction {
    Fit {
        #[arg(long)]
        triangle: String,
        #[arg(long, value_enum, default_value_t = Space::E)]
        space: Space,
        /// Defaults to 16 in `e'` and 12 in `xyz`.
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long, default_value_t = 64)]
        theta_samples: usize,
        #[arg(long, default_value_t = 8)]
        height_samples: usize,
        /// Model in SparsePoly text format; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Residual report as JSON; standard error when absent.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    E,
    Xyz,
}

#[derive(Clone, Copy)]
struct SuiteArg(Suite);

impl std::str::FromStr for SuiteArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.parse().map(SuiteArg)
    }
}

/// `println!` that reports a closed pipe as an error instead of panicking.
macro_rules! out {
    ($($arg:tt)*) => {
        writeln!(io::stdout().lock(), $($arg)*)?
    };
}

fn tolerances() -> Result<Tolerances> {
    Tolerances::from_env().map_err(|e| anyhow::anyhow!("{TOLERANCE_ENV}: {e}"))
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

#[derive(Serialize)]
struct SolutionOut {
    e1: [f64; 2],
    e2: [f64; 2],
    e3: [f64; 2],
    residual: f64,
    physical: bool,
    multiplicity: Option<usize>,
}

fn solution_out(inst: &P3PInstance, s: &SolutionTriple, tol: &Tolerances) -> SolutionOut {
    let [e1, e2, e3] = s.e.map(|c| [c.re, c.im]);
    let mu = match multiplicity(&LocalSystem::new(inst, &s.e), tol.max_order, tol.tau_rank).0 {
        Multiplicity::Finite(m) => Some(m),
        Multiplicity::InfiniteSuspected => None,
    };
    SolutionOut {
        e1,
        e2,
        e3,
        residual: s.residual,
        physical: s.is_physical,
        multiplicity: mu,
    }
}

fn solve_cmd(triangle: Option<String>, center: Option<String>, cosines: Option<String>, scene: Option<PathBuf>) -> Result<()> {
    let tol = tolerances()?;
    let instances: Vec<P3PInstance> = match scene {
        Some(path) => {
            let s = ingest_scene(&path).with_context(|| format!("reading {}", path.display()))?;
            let mut v: Vec<P3PInstance> = s
                .centers
                .iter()
                .map(|o| instance_from_center(&s.triangle, *o))
                .collect::<Result<_, _>>()?;
            if let Some(c) = s.cosines {
                v.push(P3PInstance::new(s.triangle.clone(), c[0], c[1], c[2])?);
            }
            v
        }
        None => {
            let t = parse_triangle(triangle.as_deref().unwrap_or_default())?;
            match (center, cosines) {
                (Some(c), _) => vec![instance_from_center(&t, parse_center(&c)?)?],
                (None, Some(c)) => {
                    let c = parse_triple(&c, "cosines")?;
                    vec![P3PInstance::new(t, c[0], c[1], c[2])?]
                }
                (None, None) => bail!("give --center, --cosines or --scene"),
            }
        }
    };
    let mut results = Vec::new();
    for inst in &instances {
        match solve_with(inst, &tol.solver()) {
            Ok(rep) => {
                let sols: Vec<SolutionOut> = rep.solutions.iter().map(|s| solution_out(inst, s, &tol)).collect();
                results.push(json!({ "continuum": false, "solutions": sols }));
            }
            Err(P3pError::ContinuumDetected { samples }) => {
                let sols: Vec<SolutionOut> = samples
                    .iter()
                    .map(|s| SolutionOut {
                        multiplicity: None,
                        ..solution_out(inst, s, &tol)
                    })
                    .collect();
                results.push(json!({ "continuum": true, "solutions": sols }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let out = if results.len() == 1 { results.remove(0) } else { json!(results) };
    out!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn classify_cmd(triangle: &str, center: &str, as_json: bool) -> Result<()> {
    let tol = tolerances()?;
    let t = parse_triangle(triangle)?;
    let o = parse_center(center)?;
    let c = classify_with(&t, o, &tol)?;
    if as_json {
        out!("{}", serde_json::to_string_pretty(&c)?);
        return Ok(());
    }
    out!("label: {}", c.label);
    out!("cylinder value: {:.3e}{}", c.cylinder_value, if c.exact { " (exact)" } else { "" });
    if let Some(r) = &c.report {
        out!("multiplicity: {:?}", r.mu);
        out!("dual dims: {:?}", r.dims);
        out!("jacobian corank: {}", r.corank);
        if let Some(c2) = r.c2 {
            out!("|c2|: {c2:.3e}");
        }
    }
    if let Some(g) = c.generatrix_residual {
        out!("generatrix residual: {g:.3e}");
    }
    if c.i3_degenerate {
        out!("projection at a vertex or antipode");
    }
    Ok(())
}

fn morley_cmd(triangle: &str, as_json: bool) -> Result<()> {
    let tol = tolerances()?;
    let t = parse_triangle(triangle)?;
    let m = morley_data(&t, tol.tau_rank, tol.max_order)?;
    if as_json {
        out!("{}", serde_json::to_string_pretty(&m)?);
        return Ok(());
    }
    out!("morley vertices: D {:?} E {:?} F {:?}", m.d, m.e, m.f);
    out!("side: {:.15}", m.side);
    for (th, b) in m.thetas.iter().zip(&m.generatrix_bases) {
        out!("theta {th:.15}  base ({:.12}, {:.12})", b[0], b[1]);
    }
    Ok(())
}

fn complex_text(c: Complex64, scale: f64) -> String {
    if c.im.abs() <= 1e-8 * scale {
        format!("{}", c.re)
    } else {
        format!("{}{:+}i", c.re, c.im)
    }
}

fn sweep_config(t: Triangle, theta_samples: usize, height_samples: usize, morley: bool) -> SweepConfig {
    let mut cfg = SweepConfig::new(t, theta_samples, height_samples);
    cfg.include_morley = morley;
    cfg
}

fn sweep_cmd(triangle: &str, nt: usize, nh: usize, morley: bool, out: &Option<PathBuf>) -> Result<()> {
    let tol = tolerances()?;
    let t = parse_triangle(triangle)?;
    let scale = t.scale();
    let outcome = sweep_cylinder(&sweep_config(t, nt, nh, morley), &tol)?;
    let mut w = csv::Writer::from_writer(output(out)?);
    w.write_record([
        "theta", "h", "Ox", "Oy", "Oz", "mu", "branch_index", "e1p", "e2p", "e3p", "Opx", "Opy", "Opz", "on_generatrix",
    ])?;
    for r in &outcome.records {
        let o = r.source_center;
        let e = r.complement_e.e.map(|c| complex_text(c, scale));
        let p = r.complement_centers.first();
        let coord = |f: fn(&p3pstrat::p3p::CameraCenter) -> f64| p.map(|c| f(c).to_string()).unwrap_or_default();
        w.write_record([
            r.theta.to_string(),
            r.h.to_string(),
            o.x.to_string(),
            o.y.to_string(),
            o.z.to_string(),
            r.source_mu.to_string(),
            r.branch_index.to_string(),
            e[0].clone(),
            e[1].clone(),
            e[2].clone(),
            coord(|c| c.x),
            coord(|c| c.y),
            coord(|c| c.z),
            r.on_morley_generatrix.to_string(),
        ])?;
    }
    w.flush()?;
    for f in &outcome.failures {
        eprintln!("skipped theta {:.6} h {:.6}: {}", f.theta, f.h, f.error);
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn deltoid_fit_cmd(
    triangle: &str,
    space: Space,
    degree: Option<u32>,
    nt: usize,
    nh: usize,
    out: &Option<PathBuf>,
    report: &Option<PathBuf>,
) -> Result<()> {
    let tol = tolerances()?;
    let t = parse_triangle(triangle)?;
    let outcome = sweep_cylinder(&sweep_config(t.clone(), nt, nh, true), &tol)?;
    let (model, vars, extra) = match space {
        Space::E => {
            let m = fit_deltoid_e(&t, &outcome.records, degree.unwrap_or(16))?;
            (m, E_PRIME_VARS.to_vec(), json!({}))
        }
        Space::Xyz => {
            let f = fit_deltoid_xyz(&t, &outcome.records, degree.unwrap_or(12), tol.fit_residual)?;
            let extra = json!({ "even_basis": f.even_basis, "even_rms": f.even_rms });
            (f.model, vec!["x", "y", "z"], extra)
        }
    };
    output(out)?.write_all(model.to_poly(&vars).to_text().as_bytes())?;
    let summary = json!({
        "space": match space { Space::E => "e'/2R", Space::Xyz => "(x,y,z)/2R from vertex A" },
        "basis_size": model.basis.len(),
        "sample_count": model.sample_count,
        "rms_residual": model.rms_residual,
        "max_residual": model.max_residual,
        "sigma_min_rel": model.sigma_min_rel,
        "sigma_gap": model.sigma_gap,
        "records": outcome.records.len(),
        "failures": outcome.failures.len(),
        "xyz": extra,
        "config_hash": tol.config_hash(),
    });
    let text = serde_json::to_string_pretty(&summary)?;
    match report {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => eprintln!("{text}"),
    }
    Ok(())
}

fn verify_cmd(suite: Suite, triangle: Option<String>, report: &Option<PathBuf>) -> Result<bool> {
    let tol = tolerances()?;
    let ctx = match triangle {
        Some(spec) => {
            let t = parse_triangle(&spec)?;
            VerifyContext::for_sides(tol, [t.s12, t.s13, t.s23]).map_err(anyhow::Error::msg)?
        }
        None => VerifyContext::new(tol),
    };
    let r = run_verify(suite, &ctx);
    for c in &r.checks {
        let status = if c.passed() { "pass" } else { "FAIL" };
        eprintln!("{status} {} {}", c.id, c.margin());
    }
    eprintln!("{} passed, {} failed", r.passed, r.failed);
    output(report)?.write_all(r.to_json().as_bytes())?;
    Ok(r.all_passed())
}

fn dump_fixtures_cmd(dir: &Option<PathBuf>) -> Result<()> {
    let fixtures = load_fixtures();
    match dir {
        None => out!("{}", serde_json::to_string_pretty(&fixtures)?),
        Some(d) => {
            std::fs::create_dir_all(d)?;
            for f in &fixtures {
                for (i, c) in f.components.iter().enumerate() {
                    let path = d.join(format!("{}_{i}.poly", f.name));
                    std::fs::write(&path, c.poly.to_text()).with_context(|| format!("writing {}", path.display()))?;
                }
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Solve {
            triangle,
            center,
            cosines,
            scene,
        } => solve_cmd(triangle, center, cosines, scene)?,
        Command::Classify { triangle, center, json } => classify_cmd(&triangle, &center, json)?,
        Command::Morley { triangle, json } => morley_cmd(&triangle, json)?,
        Command::Sweep {
            triangle,
            theta_samples,
            height_samples,
            morley,
            out,
        } => sweep_cmd(&triangle, theta_samples, height_samples, morley, &out)?,
        Command::Deltoid {
            action:
                DeltoidAction::Fit {
                    triangle,
                    space,
                    degree,
                    theta_samples,
                    height_samples,
                    out,
                    report,
                },
        } => deltoid_fit_cmd(&triangle, space, degree, theta_samples, height_samples, &out, &report)?,
        Command::Verify { suite, triangle, report } => return verify_cmd(suite.0, triangle, &report),
        Command::DumpFixtures { dir } => dump_fixtures_cmd(&dir)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
