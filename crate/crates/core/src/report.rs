//! Plain-text serializations of orbits, experiment reports and paths.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so outputs
//! are byte-identical for identical inputs and parse back exactly.

use std::fmt::Write;

use crate::continuation::{ContinuationError, ContinuationPath};
use crate::metric::{ContractivityReport, Point};
use crate::picard::{Orbit, StabilityReport};

fn coords(p: &Point) -> String {
    p.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn coord_header(prefix: &str, dim: usize) -> String {
    (0..dim)
        .map(|i| format!("{prefix}{i}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Rows `i,x_i...,residual`; the residual of row `i > 0` is `d(x_i, T x_{i-1})`
/// and row 0 carries 0.
pub fn orbit_csv(orbit: &Orbit) -> String {
    let dim = orbit.points.first().map_or(0, |p| p.len());
    let mut out = format!("i,{},residual\n", coord_header("x", dim));
    for (i, p) in orbit.points.iter().enumerate() {
        let r = if i == 0 { 0.0 } else { orbit.residuals[i - 1] };
        writeln!(out, "{i},{},{r}", coords(p)).unwrap();
    }
    out
}

/// Header block of `key = value` lines followed by one record per trial:
/// `trial=<id> x0=<coords> k=<k> delta=<d> worst=<dist> pass=<bool>`.
pub fn stability_text(report: &StabilityReport) -> String {
    let c = &report.constants;
    let mut out = String::new();
    writeln!(out, "map = {}", report.map).unwrap();
    writeln!(out, "xbar = {}", coords(&report.xbar)).unwrap();
    writeln!(out, "M = {}", c.radius).unwrap();
    writeln!(out, "epsilon = {}", c.epsilon).unwrap();
    writeln!(out, "delta0 = {}", c.delta0).unwrap();
    writeln!(out, "delta1 = {}", c.delta1).unwrap();
    writeln!(out, "delta = {}", c.delta).unwrap();
    writeln!(out, "k = {}", c.k).unwrap();
    writeln!(out, "delta_used = {}", report.delta_used).unwrap();
    writeln!(out, "n = {}", report.steps).unwrap();
    writeln!(out, "seed = {}", report.seed).unwrap();
    writeln!(out, "constants_violated = {}", report.constants_violated).unwrap();
    writeln!(
        out,
        "pass_count = {}/{}",
        report.pass_count(),
        report.trials.len()
    )
    .unwrap();
    writeln!(out, "worst_margin = {}", report.worst_margin()).unwrap();
    for t in &report.trials {
        writeln!(
            out,
            "trial={} x0={} k={} delta={} worst={} pass={}",
            t.trial,
            coords(&t.x0),
            t.k,
            t.delta,
            t.worst_distance,
            t.pass
        )
        .unwrap();
    }
    out
}

/// Rows `t,x...,inner_residual,step_bound,r_used`, then a
/// `terminal,x1...,on_boundary` row when the limit was extracted.
pub fn path_csv(path: &ContinuationPath) -> String {
    let dim = path.entries.first().map_or(0, |e| e.x.len());
    let mut out = format!(
        "t,{},inner_residual,step_bound,r_used\n",
        coord_header("x", dim)
    );
    for e in &path.entries {
        writeln!(
            out,
            "{},{},{},{},{}",
            e.t,
            coords(&e.x),
            e.inner_residual,
            e.step_bound,
            e.r_used
        )
        .unwrap();
    }
    if let Some(term) = &path.terminal {
        writeln!(out, "terminal,{},{}", coords(&term.x1), term.on_boundary).unwrap();
    }
    out
}

/// `ls_violation t=<t> x=<coords> lambda=<lambda>`, or `None` for other errors.
pub fn ls_violation_text(err: &ContinuationError) -> Option<String> {
    match err {
        ContinuationError::LsViolation { t, x, lambda } => {
            let xs: Vec<String> = x.iter().map(|v| v.to_string()).collect();
            Some(format!(
                "ls_violation t={t} x={} lambda={lambda}\n",
                xs.join(",")
            ))
        }
        _ => None,
    }
}

/// Header block then `pair=<i> d=<d(x,y)> lhs=<..> rhs=<..> pass=<bool>` per pair.
pub fn contractivity_text(report: &ContractivityReport) -> String {
    let mut out = String::new();
    writeln!(out, "map = {}", report.map).unwrap();
    writeln!(out, "modulus = {}", report.modulus).unwrap();
    writeln!(out, "slack = {}", report.slack).unwrap();
    writeln!(out, "pairs = {}", report.pairs.len()).unwrap();
    writeln!(out, "failures = {}", report.failures()).unwrap();
    writeln!(out, "worst_excess = {}", report.worst_excess()).unwrap();
    writeln!(out, "pass = {}", report.pass()).unwrap();
    for (i, p) in report.pairs.iter().enumerate() {
        writeln!(
            out,
            "pair={i} d={} lhs={} rhs={} pass={}",
            p.distance, p.lhs, p.rhs, p.pass
        )
        .unwrap();
    }
    out
}
