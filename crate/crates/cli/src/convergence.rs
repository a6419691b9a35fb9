//! Residuals against the finite-difference step.

use std::collections::BTreeMap;

use dhmaps::cases::BuildOptions;
use dhmaps::dirac_harmonic::Tolerances;
use serde::Serialize;

use crate::config::{parse_step, RunConfig};
use crate::error::CliError;
use crate::registry;
use crate::report::GridReport;

/// Order expected of central differences before the roundoff floor.
pub const MIN_ORDER: f64 = 1.8;
/// Residuals below this are treated as roundoff and not fitted.
pub const ROUNDOFF_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualSeries {
    /// Max residual at each step.
    pub values: Vec<f64>,
    /// Log-log slope of the values against h.
    pub order: Option<f64>,
    /// Log-log slope of |r(h_i) − r(h_{i+1})| against h_i, the observed
    /// order of the step-dependent part.
    pub difference_order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub case: String,
    pub grid: GridReport,
    pub analytic: bool,
    pub steps: Vec<f64>,
    pub residuals: BTreeMap<String, ResidualSeries>,
    /// Smallest fitted order over all residuals.
    pub order: Option<f64>,
    pub difference_order: Option<f64>,
    pub pass: bool,
    pub wall_time_ms: u128,
}

/// Least-squares slope of log y against log x. `None` if any y is at the
/// floor or there are fewer than two points.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 2 || x.len() != y.len() || y.iter().any(|v| !(v.is_finite() && *v > ROUNDOFF_FLOOR)) {
        return None;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let m = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / m, ly.iter().sum::<f64>() / m);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

fn series(steps: &[f64], values: Vec<f64>) -> ResidualSeries {
    let order = loglog_slope(steps, &values);
    let diffs: Vec<f64> = values.windows(2).map(|w| (w[0] - w[1]).abs()).collect();
    let difference_order = loglog_slope(&steps[..diffs.len()], &diffs);
    ResidualSeries { values, order, difference_order }
}

fn min_opt(it: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    it.flatten().fold(None, |m, v| Some(m.map_or(v, |m: f64| m.min(v))))
}

/// Rebuild the case at every step and record the EL residual maxima.
/// Steps are sorted from largest to smallest.
pub fn convergence_sweep(config: &RunConfig, steps: &[f64]) -> Result<ConvergenceReport, CliError> {
    if steps.len() < 3 {
        return Err(CliError::Config(format!("convergence needs at least 3 steps, got {}", steps.len())));
    }
    let mut steps = steps.to_vec();
    steps.sort_by(|a, b| b.total_cmp(a));
    if steps.windows(2).any(|w| w[0] == w[1]) {
        return Err(CliError::Config("convergence steps must be distinct".into()));
    }
    let entry = registry::lookup(&config.case)?;
    let start = std::time::Instant::now();
    let mut table: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut grid_used = None;
    for &h in &steps {
        let opts = BuildOptions { fd_step: parse_step(h)?, analytic: config.analytic };
        let (case, _) = entry.build(config.params.as_ref(), &opts)?;
        let grid = match &config.grid {
            Some(spec) => spec.apply(&case.grid)?,
            None => case.grid.clone(),
        };
        let report = case.residuals(Some(&grid), &Tolerances::default())?;
        for (name, stat) in report.residuals {
            table.entry(name).or_default().push(stat.max);
        }
        grid_used = Some(grid);
    }
    let residuals: BTreeMap<String, ResidualSeries> =
        table.into_iter().map(|(k, v)| (k, series(&steps, v))).collect();
    let order = min_opt(residuals.values().map(|s| s.order));
    let difference_order = min_opt(residuals.values().map(|s| s.difference_order));
    Ok(ConvergenceReport {
        case: entry.name.to_string(),
        grid: GridReport::from(grid_used.as_ref().expect("at least 3 steps")),
        analytic: config.analytic,
        steps,
        residuals,
        order,
        difference_order,
        pass: order.is_none_or(|p| p >= MIN_ORDER),
        wall_time_ms: start.elapsed().as_millis(),
    })
}
