//! Executes one experiment config and writes its reports.
//!
//! Every run writes `manifest.txt` (config echo, engine version, wall time,
//! status) next to the experiment's own report files. Report files other than
//! the manifest are byte-identical across runs with the same config and seed.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use contractive_core::continuation::{
    limit_fixed_point, trace_path, ContinuationError, ContinuationPath, PathConfig,
};
use contractive_core::gallery::{make_map, GalleryEntry, GalleryError};
use contractive_core::metric::verify_contractive;
use contractive_core::picard::{
    orbit_exact, run_stability_experiment, solve_fixed_point, stability_constants, PicardError,
    StabilityExperiment,
};
use contractive_core::{report, Point};
use thiserror::Error;

use crate::config::{ConfigError, ExperimentConfig, ExperimentKind};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Gallery(#[from] GalleryError),
    #[error(transparent)]
    Picard(#[from] PicardError),
    #[error(transparent)]
    Continuation(#[from] ContinuationError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Result of a completed run. `passed` is false when an asserted invariant failed.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub passed: bool,
    pub failures: Vec<String>,
    pub files: Vec<PathBuf>,
}

struct Output {
    files: Vec<(&'static str, String)>,
    failures: Vec<String>,
    asserted: bool,
}

impl Output {
    fn new() -> Output {
        Output {
            files: Vec::new(),
            failures: Vec::new(),
            asserted: true,
        }
    }
}

/// Read, parse and run a config file; `out` and `seed` override the file.
pub fn run_file(
    path: &Path,
    out: Option<&Path>,
    seed: Option<u64>,
) -> Result<RunOutcome, RunError> {
    let text = fs::read_to_string(path).map_err(|source| RunError::Io {
        path: path.into(),
        source,
    })?;
    let mut cfg = ExperimentConfig::parse(&text)?;
    if let Some(out) = out {
        cfg.output = out.to_path_buf();
    }
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    run_config(&cfg)
}

pub fn run_config(cfg: &ExperimentConfig) -> Result<RunOutcome, RunError> {
    let start = Instant::now();
    let entry = make_map(&cfg.map, &cfg.map_params)?;
    let result = match cfg.kind {
        ExperimentKind::Solve => run_solve(cfg, &entry),
        ExperimentKind::Stability => run_stability(cfg, &entry),
        ExperimentKind::Trace => run_trace(cfg, &entry),
        ExperimentKind::Limit => run_limit(cfg, &entry),
        ExperimentKind::Certify => run_certify(cfg, &entry),
    };
    let elapsed = start.elapsed().as_secs_f64();

    fs::create_dir_all(&cfg.output).map_err(|source| RunError::Io {
        path: cfg.output.clone(),
        source,
    })?;
    let (out, error) = match result {
        Ok(out) => (out, None),
        Err((partial, e)) => (partial, Some(e)),
    };
    let mut written = Vec::new();
    for (name, content) in &out.files {
        written.push(write_file(&cfg.output, name, content)?);
    }
    let status = match (&error, out.failures.is_empty()) {
        (Some(_), _) => "error",
        (None, true) => "pass",
        (None, false) if out.asserted => "fail",
        (None, false) => "not-asserted",
    };
    let mut manifest = String::new();
    writeln!(manifest, "engine_version = {}", contractive_core::VERSION).unwrap();
    writeln!(manifest, "experiment = {}", cfg.kind.name()).unwrap();
    writeln!(manifest, "seed = {}", cfg.seed).unwrap();
    writeln!(manifest, "wall_time_s = {elapsed:.6}").unwrap();
    writeln!(manifest, "status = {status}").unwrap();
    if let Some(e) = &error {
        writeln!(manifest, "error = {e}").unwrap();
    }
    for f in &out.failures {
        writeln!(manifest, "failure = {f}").unwrap();
    }
    manifest.push_str("[config]\n");
    for (k, v) in &cfg.entries {
        writeln!(manifest, "{k} = {v}").unwrap();
    }
    written.push(write_file(&cfg.output, "manifest.txt", &manifest)?);

    match error {
        Some(e) => Err(e),
        None => Ok(RunOutcome {
            passed: out.failures.is_empty() || !out.asserted,
            failures: out.failures,
            files: written,
        }),
    }
}

fn write_file(dir: &Path, name: &str, content: &str) -> Result<PathBuf, RunError> {
    let path = dir.join(name);
    fs::write(&path, content).map_err(|source| RunError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

type Run = Result<Output, (Output, RunError)>;

fn fail<E: Into<RunError>>(out: Output, e: E) -> (Output, RunError) {
    (out, e.into())
}

fn point(entry: &GalleryEntry, coords: &[f64]) -> Result<Point, RunError> {
    let p = Point::from_column_slice(coords);
    entry
        .map
        .space()
        .check_dim(&p)
        .map_err(|e| RunError::Gallery(e.into()))?;
    Ok(p)
}

fn coords(p: &Point) -> String {
    p.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn run_solve(cfg: &ExperimentConfig, entry: &GalleryEntry) -> Run {
    let mut out = Output::new();
    let x0 =
        point(entry, cfg.x0.as_deref().unwrap_or_default()).map_err(|e| fail(Output::new(), e))?;
    let sol = match solve_fixed_point(&entry.map, &x0, cfg.tol, cfg.max_iter) {
        Ok(sol) => sol,
        Err(PicardError::NonselfExit(orbit)) => {
            out.files.push(("orbit.csv", report::orbit_csv(&orbit)));
            return Err(fail(out, PicardError::NonselfExit(orbit)));
        }
        Err(e) => return Err(fail(out, e)),
    };
    let orbit = orbit_exact(&entry.map, &x0, sol.iterations).map_err(|e| fail(Output::new(), e))?;
    let steps = orbit.step_distances(&entry.map);
    for (i, w) in steps.windows(2).enumerate() {
        if w[1] > w[0] * (1.0 + 4.0 * f64::EPSILON) + f64::MIN_POSITIVE {
            out.failures.push(format!(
                "step distance grew at iteration {}: {} -> {}",
                i + 1,
                w[0],
                w[1]
            ));
        }
    }
    let mut text = String::new();
    writeln!(text, "map = {}", entry.map.name()).unwrap();
    writeln!(text, "x0 = {}", coords(&x0)).unwrap();
    writeln!(text, "point = {}", coords(&sol.point)).unwrap();
    writeln!(text, "iterations = {}", sol.iterations).unwrap();
    writeln!(text, "residual = {}", sol.residual).unwrap();
    if let Some(xbar) = &entry.known_fixed_point {
        writeln!(
            text,
            "distance_to_known = {}",
            entry.map.distance(&sol.point, xbar)
        )
        .unwrap();
    }
    out.files.push(("solve.txt", text));
    out.files.push(("orbit.csv", report::orbit_csv(&orbit)));
    Ok(out)
}

fn run_stability(cfg: &ExperimentConfig, entry: &GalleryEntry) -> Run {
    let mut out = Output::new();
    let radius = cfg.radius.unwrap_or_default();
    let epsilon = cfg.epsilon.unwrap_or_default();
    let xbar = match &entry.known_fixed_point {
        Some(x) => x.clone(),
        None => {
            let x0 = match &cfg.x0 {
                Some(c) => point(entry, c).map_err(|e| fail(Output::new(), e))?,
                None => entry.map.domain().anchor(entry.map.space()),
            };
            solve_fixed_point(&entry.map, &x0, 1e-12, cfg.max_iter)
                .map_err(|e| fail(Output::new(), e))?
                .point
        }
    };
    let steps = match cfg.steps {
        Some(n) => n,
        None => {
            let c = stability_constants(radius, epsilon, entry.map.modulus())
                .map_err(|e| fail(Output::new(), e))?;
            (2 * c.k).max(1000) as usize
        }
    };
    let exp = StabilityExperiment {
        radius,
        epsilon,
        trials: cfg.trials,
        steps,
        seed: cfg.seed,
        delta_override: cfg.delta,
    };
    let rep =
        run_stability_experiment(&entry.map, &xbar, &exp).map_err(|e| fail(Output::new(), e))?;
    out.asserted = !rep.constants_violated;
    for t in rep.trials.iter().filter(|t| !t.pass) {
        out.failures.push(format!(
            "trial {} drifted to {} > epsilon = {}",
            t.trial, t.worst_distance, epsilon
        ));
    }
    out.files
        .push(("stability.txt", report::stability_text(&rep)));
    Ok(out)
}

fn path_config(cfg: &ExperimentConfig, target_t: f64) -> PathConfig {
    let mut pc = PathConfig::new(cfg.q, cfg.inner_tol, target_t);
    pc.max_inner_iter = cfg.max_inner_iter;
    pc.m_bound = cfg.m_bound;
    pc.r_cap = cfg.r_cap;
    pc
}

fn continuation_failure(out: Output, e: ContinuationError) -> (Output, RunError) {
    let mut out = out;
    if let Some(text) = report::ls_violation_text(&e) {
        out.files.push(("ls_violation.txt", text));
    }
    fail(out, e)
}

fn known_path_deviation(entry: &GalleryEntry, path: &ContinuationPath) -> Option<(f64, f64)> {
    let known = entry.known_path.as_ref()?;
    path.entries
        .iter()
        .map(|e| (e.t, entry.map.distance(&e.x, &known(e.t))))
        .fold(None, |acc: Option<(f64, f64)>, (t, d)| match acc {
            Some((_, best)) if best >= d => acc,
            _ => Some((t, d)),
        })
}

fn run_trace(cfg: &ExperimentConfig, entry: &GalleryEntry) -> Run {
    let mut out = Output::new();
    let pc = path_config(cfg, cfg.target_t.unwrap_or_default());
    let path = trace_path(&entry.map, &pc).map_err(|e| continuation_failure(Output::new(), e))?;
    out.failures = path.audit(&entry.map);
    let last = path.last();
    let mut text = String::new();
    writeln!(text, "map = {}", entry.map.name()).unwrap();
    writeln!(text, "entries = {}", path.entries.len()).unwrap();
    writeln!(text, "t_final = {}", last.t).unwrap();
    writeln!(text, "x_final = {}", coords(&last.x)).unwrap();
    writeln!(text, "m_bound = {}", path.m_bound).unwrap();
    if let Some((t, dev)) = known_path_deviation(entry, &path) {
        let tol = (100.0 * cfg.inner_tol).max(1e-8);
        writeln!(text, "max_known_deviation = {dev}").unwrap();
        writeln!(text, "max_known_deviation_t = {t}").unwrap();
        if dev > tol {
            out.failures.push(format!(
                "path deviates from closed form by {dev} > {tol} at t = {t}"
            ));
        }
    }
    out.files.push(("trace.txt", text));
    out.files.push(("path.csv", report::path_csv(&path)));
    Ok(out)
}

fn run_limit(cfg: &ExperimentConfig, entry: &GalleryEntry) -> Run {
    let mut out = Output::new();
    let pc = path_config(cfg, cfg.target_t.unwrap_or(0.0));
    let res = limit_fixed_point(&entry.map, &pc, cfg.final_tol)
        .map_err(|e| continuation_failure(Output::new(), e))?;
    out.failures = res.path.audit(&entry.map);
    let mut text = String::new();
    writeln!(text, "map = {}", entry.map.name()).unwrap();
    writeln!(text, "x1 = {}", coords(&res.x1)).unwrap();
    writeln!(text, "on_boundary = {}", res.on_boundary).unwrap();
    writeln!(text, "t_final = {}", res.t_final).unwrap();
    writeln!(text, "residual = {}", res.residual).unwrap();
    writeln!(text, "m_bound = {}", res.m_bound).unwrap();
    writeln!(text, "empirical_modulus = {}", res.empirical_modulus).unwrap();
    if let Some(xbar) = &entry.known_fixed_point {
        let d = entry.map.distance(&res.x1, xbar);
        let tol = 2.0 * cfg.final_tol;
        writeln!(text, "distance_to_known = {d}").unwrap();
        if d > tol {
            out.failures
                .push(format!("limit is {d} from the known fixed point (> {tol})"));
        }
    }
    out.files.push(("limit.txt", text));
    out.files.push(("path.csv", report::path_csv(&res.path)));
    Ok(out)
}

fn run_certify(cfg: &ExperimentConfig, entry: &GalleryEntry) -> Run {
    let mut out = Output::new();
    let pairs = entry.sample_pairs(cfg.pairs.unwrap_or_default(), cfg.seed);
    let rep = verify_contractive(&entry.map, &pairs, cfg.slack)
        .map_err(|e| fail(Output::new(), RunError::Gallery(e.into())))?;
    if !rep.pass() {
        out.failures.push(format!(
            "{} of {} pairs violate the modulus (worst excess {})",
            rep.failures(),
            rep.pairs.len(),
            rep.worst_excess()
        ));
    }
    out.files
        .push(("certify.txt", report::contractivity_text(&rep)));
    Ok(out)
}
