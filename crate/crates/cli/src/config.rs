//! Run configuration, grid specs and the case parameter file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use dhmaps::fd::FdStep;
use dhmaps::grid::{Axis, Grid};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Per-axis count with an optional range override, e.g. `32x16:-1:1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxisSpec {
    pub count: usize,
    pub range: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec(pub Vec<AxisSpec>);

impl std::str::FromStr for GridSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = |why: &str| CliError::Config(format!("bad grid `{s}`: {why}"));
        let mut axes = Vec::new();
        for tok in s.split('x') {
            let parts: Vec<&str> = tok.split(':').collect();
            let count: usize = parts[0].trim().parse().map_err(|_| bad("count is not an integer"))?;
            if count < 2 {
                return Err(bad("counts must be at least 2"));
            }
            let range = match parts.len() {
                1 => None,
                3 => {
                    let lo: f64 = parts[1].parse().map_err(|_| bad("range bound"))?;
                    let hi: f64 = parts[2].parse().map_err(|_| bad("range bound"))?;
                    if !(lo < hi) {
                        return Err(bad("range must have lo < hi"));
                    }
                    Some((lo, hi))
                }
                _ => return Err(bad("axis is N or N:lo:hi")),
            };
            axes.push(AxisSpec { count, range });
        }
        Ok(GridSpec(axes))
    }
}

impl GridSpec {
    /// Overlay the spec on a case's default grid. A single axis spec
    /// applies to every axis.
    pub fn apply(&self, default: &Grid) -> Result<Grid, CliError> {
        let axes = default.axes();
        let specs: Vec<&AxisSpec> = match self.0.len() {
            1 => vec![&self.0[0]; axes.len()],
            k if k == axes.len() => self.0.iter().collect(),
            k => {
                return Err(CliError::Config(format!(
                    "grid has {k} axes, the case needs {}",
                    axes.len()
                )))
            }
        };
        let out = axes
            .iter()
            .zip(specs)
            .map(|(a, s)| {
                let (lo, hi) = s.range.unwrap_or((a.lo, a.hi));
                Axis { lo, hi, count: s.count, periodic: a.periodic }
            })
            .collect();
        Ok(Grid::new(out)?)
    }
}

pub fn parse_tolerance(s: &str) -> Result<(String, f64), CliError> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("tolerance `{s}` is not name=value")))?;
    let v: f64 = value
        .parse()
        .map_err(|_| CliError::Config(format!("tolerance `{s}` has a non-numeric value")))?;
    if !(v > 0.0) {
        return Err(CliError::Config(format!("tolerance `{s}` must be positive")));
    }
    Ok((name.trim().to_string(), v))
}

pub fn parse_step(h: f64) -> Result<FdStep, CliError> {
    FdStep::new(h).map_err(|e| CliError::Config(e.to_string()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub case: String,
    pub grid: Option<GridSpec>,
    pub fd_step: FdStep,
    pub analytic: bool,
    pub tolerances: BTreeMap<String, f64>,
    pub seed: u64,
    pub params: Option<CaseParams>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(case: impl Into<String>) -> Self {
        RunConfig {
            case: case.into(),
            grid: None,
            fd_step: FdStep::default(),
            analytic: true,
            tolerances: BTreeMap::new(),
            seed: 0,
            params: None,
            out: None,
        }
    }
}

/// A complex number in the parameter file, written `[re, im]`.
pub type C = [f64; 2];

/// Keys of the flat parameter file. Only the keys of the chosen case
/// are read; any key not listed here is rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseParams {
    pub big_r: Option<f64>,
    pub r: Option<RValue>,
    pub m: Option<usize>,
    pub a: Option<C>,
    pub b: Option<C>,
    pub c: Option<Vec<C>>,
    pub d: Option<Vec<C>>,
    pub mu: Option<Vec<C>>,
    pub psi0: Option<Vec<C>>,
    pub psi1: Option<Vec<C>>,
    pub phi: Option<Vec<C>>,
    pub p: Option<usize>,
    pub n: Option<usize>,
}

/// `r` is a radius in one case and a weight vector in another.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RValue {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl CaseParams {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("parameter file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }
}
