use std::collections::BTreeMap;

use nalgebra::DVector;
use num_complex::Complex64;

use super::curvature::{curvature_term, split_along_normal};
use super::dirac::{split_twisted, twisted_dirac};
use super::twisted::{TwistedSpinorField, TwistedValue};
use crate::clifford::inner_unchecked;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::maps::NormalOrientation;

/// Exact-arithmetic identities.
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Residuals built from closed-form derivatives.
pub const ANALYTIC_TOL: f64 = 1e-10;
/// Residuals built from central differences at h = 1e−4.
pub const FD_TOL: f64 = 5e-4;

pub const EL_MAP: &str = "el_map";
pub const EL_SPINOR: &str = "el_spinor";
pub const MAP_TANGENT: &str = "map_tangent";
pub const MAP_NORMAL: &str = "map_normal";
pub const SPINOR_TANGENT: &str = "spinor_tangent";
pub const SPINOR_NORMAL: &str = "spinor_normal";

/// Named tolerances with a fallback.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    default: f64,
    named: BTreeMap<String, f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            default: FD_TOL,
            named: BTreeMap::new(),
        }
    }
}

impl Tolerances {
    pub fn with_default(default: f64) -> Self {
        Tolerances {
            default,
            named: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, name: impl Into<String>, tol: f64) -> &mut Self {
        self.named.insert(name.into(), tol);
        self
    }

    pub fn get(&self, name: &str) -> f64 {
        self.named.get(name).copied().unwrap_or(self.default)
    }

    pub fn named(&self) -> &BTreeMap<String, f64> {
        &self.named
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualStat {
    pub max: f64,
    pub mean: f64,
    pub tol: f64,
    pub pass: bool,
}

impl ResidualStat {
    pub fn from_samples(samples: &[f64], tol: f64) -> Self {
        let max = samples.iter().copied().fold(0.0, f64::max);
        let mean = if samples.is_empty() {
            0.0
        } else {
            samples.iter().sum::<f64>() / samples.len() as f64
        };
        let finite = samples.iter().all(|v| v.is_finite());
        ResidualStat {
            max,
            mean,
            tol,
            pass: finite && max <= tol,
        }
    }
}

/// Max/mean residual norms over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub points: usize,
    pub fd_step: f64,
    pub residuals: BTreeMap<String, ResidualStat>,
}

impl ResidualReport {
    pub fn pass(&self) -> bool {
        self.residuals.values().all(|r| r.pass)
    }

    pub fn get(&self, name: &str) -> Option<&ResidualStat> {
        self.residuals.get(name)
    }
}

/// Residual vectors at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointResiduals {
    /// τ(φ) − R(φ, ψ)
    pub map: DVector<f64>,
    /// D̸ψ
    pub spinor: TwistedValue,
    /// Named scalar norms, including the tangent/normal splits when
    /// shape data was requested.
    pub norms: BTreeMap<&'static str, f64>,
}

/// τ − R, D̸ψ and, for hypersurfaces, their tangent/normal parts at x.
pub fn point_residuals(
    field: &TwistedSpinorField,
    x: &[f64],
    orientation: Option<&NormalOrientation>,
) -> Result<PointResiduals> {
    let map = field.map();
    let model = map.target();
    let y = map.value(x)?;
    let g = model.metric_at(y.as_slice())?;
    let tau = map.tension_field(x)?;
    let r = curvature_term(field, x)?.value;
    let diff = &tau - &r;
    let dirac = twisted_dirac(field, x)?;
    let mut norms = BTreeMap::new();
    norms.insert(EL_MAP, model.norm(y.as_slice(), &diff)?);
    norms.insert(EL_SPINOR, dirac.norm(&g));
    if let Some(o) = orientation {
        let shape = map.shape_data(x, o)?;
        let nu = &shape.normal;
        let (rt, rn) = split_along_normal(model, &y, &r, nu)?;
        let n = map.domain().dim() as f64;
        let rn_res = rn - &shape.mean_curvature * n;
        let (dt, dn) = split_twisted(&dirac, nu, &(&g * nu));
        norms.insert(MAP_TANGENT, model.norm(y.as_slice(), &rt)?);
        norms.insert(MAP_NORMAL, model.norm(y.as_slice(), &rn_res)?);
        norms.insert(SPINOR_TANGENT, dt.norm(&g));
        norms.insert(SPINOR_NORMAL, dn.norm(&g));
    }
    Ok(PointResiduals {
        map: diff,
        spinor: dirac,
        norms,
    })
}

/// Residuals of τ(φ) = R(φ, ψ) and D̸ψ = 0 over a grid.
pub fn el_residuals(
    field: &TwistedSpinorField,
    grid: &Grid,
    tolerances: &Tolerances,
    orientation: Option<&NormalOrientation>,
) -> Result<ResidualReport> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut samples: BTreeMap<&'static str, Vec<f64>> = BTreeMap::new();
    let points = grid.points();
    for p in &points {
        let r = point_residuals(field, p, orientation)?;
        for (k, v) in r.norms {
            samples.entry(k).or_default().push(v);
        }
    }
    let residuals = samples
        .into_iter()
        .map(|(k, v)| (k.to_string(), ResidualStat::from_samples(&v, tolerances.get(k))))
        .collect();
    Ok(ResidualReport {
        points: points.len(),
        fd_step: field.map().step(),
        residuals,
    })
}

/// Midpoint-rule value of L(φ, ψ) = ½∫(|dφ|² + ⟨ψ, D̸ψ⟩).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionValue {
    pub value: f64,
    pub energy: f64,
    /// ∫⟨ψ, D̸ψ⟩, complex before the real part is taken.
    pub spinor_term: Complex64,
}

pub fn action_functional(field: &TwistedSpinorField, grid: &Grid) -> Result<ActionValue> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let map = field.map();
    let model = map.target();
    let mut energy = 0.0;
    let mut spinor = Complex64::new(0.0, 0.0);
    for (p, w) in grid.quadrature() {
        let chart = map.chart_at(&p);
        let y = map.value(&p)?;
        let g = model.metric_at(y.as_slice())?;
        let t = map.frame_push(&p, chart);
        let vol = w * map.domain().volume_density(&p);
        let e: f64 = (0..t.ncols())
            .map(|a| {
                let c = t.column(a).into_owned();
                (&g * &c).dot(&c)
            })
            .sum();
        energy += vol * e;
        let psi = field.eval(&p, chart);
        if psi.coefficient_norm() == 0.0 {
            continue;
        }
        let d = twisted_dirac(field, &p)?;
        let mut s = Complex64::new(0.0, 0.0);
        for a in 0..psi.coord_dim() {
            for b in 0..psi.coord_dim() {
                if g[(a, b)] != 0.0 {
                    s += inner_unchecked(&psi.0[a], &d.0[b]) * g[(a, b)];
                }
            }
        }
        spinor += s * vol;
    }
    Ok(ActionValue {
        value: 0.5 * (energy + spinor.re),
        energy,
        spinor_term: spinor,
    })
}
