//! Verification reports and how they are written.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use dhmaps::cases::BuildOptions;
use dhmaps::dirac_harmonic::Tolerances;
use dhmaps::grid::Grid;
use serde::Serialize;

use crate::config::{CaseParams, RunConfig};
use crate::error::{CliError, EXIT_CONFIG, EXIT_FAIL, EXIT_PASS};
use crate::registry;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxisReport {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub periodic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridReport {
    pub counts: Vec<usize>,
    pub axes: Vec<AxisReport>,
}

impl From<&Grid> for GridReport {
    fn from(g: &Grid) -> Self {
        GridReport {
            counts: g.counts(),
            axes: g
                .axes()
                .iter()
                .map(|a| AxisReport { lo: a.lo, hi: a.hi, count: a.count, periodic: a.periodic })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualEntry {
    pub max: f64,
    pub mean: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Invalid,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => EXIT_PASS,
            Status::Fail => EXIT_FAIL,
            Status::Invalid => EXIT_CONFIG,
        }
    }
}

/// Report of one `verify` run. Everything except `wall_time_ms` is a
/// function of (case, params, grid, fd_step, tolerances, seed).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub case: String,
    pub params: Option<CaseParams>,
    pub grid: Option<GridReport>,
    pub fd_step: f64,
    pub analytic: bool,
    pub seed: u64,
    pub status: Status,
    /// Violated condition or configuration problem, when `status` is
    /// `invalid`.
    pub error: Option<String>,
    pub residuals: BTreeMap<String, ResidualEntry>,
    pub criteria: BTreeMap<String, bool>,
    pub criteria_values: BTreeMap<String, f64>,
    pub wall_time_ms: u128,
}

impl VerifyReport {
    fn invalid(config: &RunConfig, err: &CliError) -> Self {
        VerifyReport {
            case: config.case.clone(),
            params: config.params.clone(),
            grid: None,
            fd_step: config.fd_step.get(),
            analytic: config.analytic,
            seed: config.seed,
            status: Status::Invalid,
            error: Some(err.to_string()),
            residuals: BTreeMap::new(),
            criteria: BTreeMap::new(),
            criteria_values: BTreeMap::new(),
            wall_time_ms: 0,
        }
    }
}

/// Build the case, evaluate residuals and criteria. Construction or
/// configuration problems give an `invalid` report rather than an error.
pub fn run_case(config: &RunConfig) -> VerifyReport {
    let start = std::time::Instant::now();
    match evaluate(config) {
        Ok(mut r) => {
            r.wall_time_ms = start.elapsed().as_millis();
            r
        }
        Err(e) => VerifyReport::invalid(config, &e),
    }
}

fn evaluate(config: &RunConfig) -> Result<VerifyReport, CliError> {
    let entry = registry::lookup(&config.case)?;
    let opts = BuildOptions { fd_step: config.fd_step, analytic: config.analytic };
    let (case, params) = entry.build(config.params.as_ref(), &opts)?;
    let grid = match &config.grid {
        Some(spec) => spec.apply(&case.grid)?,
        None => case.grid.clone(),
    };
    let mut tols = Tolerances::default();
    for (k, v) in &config.tolerances {
        tols.set(k.clone(), *v);
    }
    let res = case.residuals(Some(&grid), &tols)?;
    let crit = case.criteria_report(Some(&grid))?;
    let residuals: BTreeMap<String, ResidualEntry> = res
        .residuals
        .iter()
        .map(|(k, s)| (k.clone(), ResidualEntry { max: s.max, mean: s.mean, tol: s.tol, pass: s.pass }))
        .collect();
    let status = if res.pass() { Status::Pass } else { Status::Fail };
    Ok(VerifyReport {
        case: entry.name.to_string(),
        params: Some(params),
        grid: Some(GridReport::from(&grid)),
        fd_step: config.fd_step.get(),
        analytic: config.analytic,
        seed: config.seed,
        status,
        error: None,
        residuals,
        criteria: crit.criteria.iter().map(|c| (c.name.to_string(), c.pass)).collect(),
        criteria_values: crit.criteria.iter().map(|c| (c.name.to_string(), c.max)).collect(),
        wall_time_ms: 0,
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Write via a temporary file in the same directory and rename it into
/// place, so readers never see a partial report.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: path.display().to_string(), source };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
