use std::sync::Arc;

use super::residuals::{ALGEBRAIC_TOL, ANALYTIC_TOL, FD_TOL};
use crate::clifford::{inner_unchecked, Spinor};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::maps::{NormalOrientation, SmoothMap};
use crate::spinors::{DerivativeMode, SpinorField};

/// Mean-curvature balance is a pointwise algebraic identity fed by a
/// differenced normal; O(h²) error stays far below this.
pub const BALANCE_TOL: f64 = 1e-6;

/// Which sufficient/equivalent conditions to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriteriaSet {
    /// Surface with principal curvatures λ ≠ μ in N³(c), field
    /// e₁·Ψ⊗E₁ − (μ/λ)e₂·Ψ⊗E₂ + χ⊗ν.
    Bicurved { lambda: f64, mu: f64, c: f64 },
    /// Minimal surface in N³(c), field Σe_α·Ψ⊗E_α + Φ⊗ν.
    MinimalSurface { c: f64 },
    /// Totally umbilical hypersurface, n ≥ 3, same field shape.
    Umbilical { c: f64 },
    /// Harmonic map from a surface and a twistor spinor.
    HarmonicTwistor,
}

/// Fields a criteria set may need.
#[derive(Debug, Clone)]
pub struct CriteriaInputs {
    pub map: Arc<SmoothMap>,
    pub psi: Option<SpinorField>,
    pub phi: Option<SpinorField>,
    pub chi: Option<SpinorField>,
    pub orientation: Option<NormalOrientation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub name: String,
    pub max: f64,
    pub tol: f64,
    pub pass: bool,
}

impl CriterionResult {
    fn new(name: &str, max: f64, tol: f64) -> Self {
        CriterionResult {
            name: name.to_string(),
            max,
            tol,
            pass: max.is_finite() && max <= tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CriteriaReport {
    pub criteria: Vec<CriterionResult>,
}

impl CriteriaReport {
    pub fn all_pass(&self) -> bool {
        self.criteria.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&CriterionResult> {
        self.criteria.iter().find(|c| c.name == name)
    }
}

fn need<'a, T>(v: &'a Option<T>, what: &'static str) -> Result<&'a T> {
    v.as_ref().ok_or(Error::Missing(what))
}

fn derivative_tol(f: &SpinorField) -> f64 {
    match f.mode() {
        DerivativeMode::Analytic => ANALYTIC_TOL,
        DerivativeMode::FiniteDifference => FD_TOL,
    }
}

fn max_over(grid: &Grid, mut f: impl FnMut(&[f64]) -> Result<f64>) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut worst: f64 = 0.0;
    for p in grid.points() {
        let v = f(&p)?;
        worst = if v.is_nan() { f64::NAN } else { worst.max(v) };
    }
    Ok(worst)
}

/// e_a·∇_aΨ − e_b·∇_bΨ at x
fn frame_difference(psi: &SpinorField, x: &[f64], a: usize, b: usize) -> Result<Spinor> {
    let rep = psi.rep();
    Ok(rep.apply(a, &psi.covariant_derivative(a, x)?) - rep.apply(b, &psi.covariant_derivative(b, x)?))
}

/// Evaluate each criterion of `set` independently on the grid.
pub fn criteria_report(set: CriteriaSet, inputs: &CriteriaInputs, grid: &Grid) -> Result<CriteriaReport> {
    let map = &inputs.map;
    let mut out = Vec::new();
    match set {
        CriteriaSet::Bicurved { lambda, mu, c } => {
            let psi = need(&inputs.psi, "the spinor Ψ")?;
            let chi = need(&inputs.chi, "the spinor χ")?;
            let orient = need(&inputs.orientation, "a normal orientation")?;
            out.push(CriterionResult::new("chi_harmonic", chi.harmonic_residual(grid)?, ALGEBRAIC_TOL));
            let balance = max_over(grid, |p| {
                let h = map.shape_data(p, orient)?.mean;
                let lhs = c * (mu / lambda - 1.0) * inner_unchecked(&chi.value(p)?, &psi.value(p)?).re;
                Ok((lhs - h).abs())
            })?;
            out.push(CriterionResult::new("mean_curvature_balance", balance, BALANCE_TOL));
            let principal = max_over(grid, |p| {
                let d = frame_difference(psi, p, 0, 1)? - chi.value(p)? * lambda;
                Ok(d.norm())
            })?;
            out.push(CriterionResult::new("principal_spinor_equation", principal, derivative_tol(psi)));
        }
        CriteriaSet::MinimalSurface { c } => {
            let psi = need(&inputs.psi, "the spinor Ψ")?;
            let phi = need(&inputs.phi, "the spinor Φ")?;
            let orient = need(&inputs.orientation, "a normal orientation")?;
            out.push(CriterionResult::new("phi_harmonic", phi.harmonic_residual(grid)?, derivative_tol(phi)));
            out.push(balance_criterion(map, psi, phi, orient, c, grid)?);
            let minimal = max_over(grid, |p| Ok(map.shape_data(p, orient)?.mean.abs()))?;
            out.push(CriterionResult::new("minimal", minimal, BALANCE_TOL));
            let eq = max_over(grid, |p| {
                let l1 = map.shape_data(p, orient)?.shape_operator[(0, 0)];
                Ok((frame_difference(psi, p, 0, 1)? - phi.value(p)? * l1).norm())
            })?;
            out.push(CriterionResult::new("principal_spinor_equation", eq, derivative_tol(psi).max(BALANCE_TOL)));
        }
        CriteriaSet::Umbilical { c } => {
            let psi = need(&inputs.psi, "the spinor Ψ")?;
            let phi = need(&inputs.phi, "the spinor Φ")?;
            let orient = need(&inputs.orientation, "a normal orientation")?;
            let n = map.domain().dim();
            if n < 3 {
                return Err(Error::DimensionMismatch { expected: 3, found: n });
            }
            out.push(CriterionResult::new("phi_harmonic", phi.harmonic_residual(grid)?, derivative_tol(phi)));
            out.push(balance_criterion(map, psi, phi, orient, c, grid)?);
            let spread = max_over(grid, |p| {
                let k = map.shape_data(p, orient)?.principal_curvatures;
                Ok(k.first().unwrap() - k.last().unwrap())
            })?;
            out.push(CriterionResult::new("totally_umbilical", spread, BALANCE_TOL));
            let tw = max_over(grid, |p| psi.twistor_defect(p))?;
            out.push(CriterionResult::new("twistor", tw, derivative_tol(psi)));
            let nf = n as f64;
            let rel = max_over(grid, |p| {
                let h = map.shape_data(p, orient)?.mean;
                let d = psi.dirac(p)? + phi.value(p)? * (nf * h / (nf - 2.0));
                Ok(d.norm())
            })?;
            out.push(CriterionResult::new("dirac_relation", rel, derivative_tol(psi).max(BALANCE_TOL)));
        }
        CriteriaSet::HarmonicTwistor => {
            let psi = need(&inputs.psi, "the spinor Ψ")?;
            let tau = max_over(grid, |p| {
                let y = map.value(p)?;
                map.target().norm(y.as_slice(), &map.tension_field(p)?)
            })?;
            out.push(CriterionResult::new("harmonic_map", tau, FD_TOL));
            let tw = max_over(grid, |p| psi.twistor_defect(p))?;
            out.push(CriterionResult::new("twistor", tw, derivative_tol(psi)));
        }
    }
    Ok(CriteriaReport { criteria: out })
}

/// −2c Re⟨Φ, Ψ⟩ = ⟨H, ν⟩, the balance condition for the Φ⊗ν family.
fn balance_criterion(
    map: &SmoothMap,
    psi: &SpinorField,
    phi: &SpinorField,
    orient: &NormalOrientation,
    c: f64,
    grid: &Grid,
) -> Result<CriterionResult> {
    let v = max_over(grid, |p| {
        let h = map.shape_data(p, orient)?.mean;
        Ok((-2.0 * c * inner_unchecked(&phi.value(p)?, &psi.value(p)?).re - h).abs())
    })?;
    Ok(CriterionResult::new("mean_curvature_balance", v, BALANCE_TOL))
}

/// Σ_β ‖2e_β·∇_βΨ − ∂̸Ψ − λ_βΦ‖, the tangential Dirac condition for the
/// Φ⊗ν family in a principal coordinate frame, maximized over β.
pub fn principal_direction_residual(
    map: &SmoothMap,
    psi: &SpinorField,
    phi: &SpinorField,
    orient: &NormalOrientation,
    x: &[f64],
) -> Result<f64> {
    let rep = psi.rep();
    let shape = map.shape_data(x, orient)?;
    let dirac = psi.dirac(x)?;
    let mut worst: f64 = 0.0;
    for beta in 0..map.domain().dim() {
        let lb = shape.shape_operator[(beta, beta)];
        let r = rep.apply(beta, &psi.covariant_derivative(beta, x)?) * 2.0 - dirac.clone() - phi.value(x)? * lb;
        worst = worst.max(r.norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use nalgebra::DVector;

    use super::*;
    use crate::cases::{Example1Params, Theorem3Params};
    use crate::clifford::CliffordRep;
    use crate::geometry::{Domain, RiemannianModel, SpaceFormKind};
    use crate::grid::Axis;

    fn small(case_grid: &Grid) -> Grid {
        let a = case_grid.axes();
        Grid::new(vec![Axis { count: 5, ..a[0] }, Axis { count: 4, ..a[1] }]).unwrap()
    }

    #[test]
    fn theorem3_criteria_pass() {
        let case = Theorem3Params::reference().build().unwrap();
        let r = case.criteria_report(Some(&small(&case.grid))).unwrap();
        assert_eq!(r.criteria.len(), 3);
        assert!(r.all_pass(), "{r:?}");
    }

    #[test]
    fn non_harmonic_chi_fails_only_first() {
        // χ + (0, ε sin 5θ): unchanged at the 5 periodic θ-nodes, ∂̸ ≠ 0 there
        let case = Theorem3Params::reference().build().unwrap();
        let grid = small(&case.grid);
        let base = case.criteria_report(Some(&grid)).unwrap();
        let mut inputs = case.criteria_inputs();
        let chi = case.chi.clone().unwrap();
        let rep = chi.rep().clone();
        inputs.chi = Some(
            SpinorField::new(Domain::Cylinder { radius: 1.0 }, rep, move |x| {
                chi.value(x).unwrap() + Spinor::from_pairs(&[(0.0, 0.0), (0.1 * (5.0 * x[0]).sin(), 0.0)])
            })
            .unwrap(),
        );
        let r = criteria_report(case.criteria.unwrap(), &inputs, &grid).unwrap();
        assert!(base.get("chi_harmonic").unwrap().pass);
        assert!(!r.get("chi_harmonic").unwrap().pass);
        for name in ["mean_curvature_balance", "principal_spinor_equation"] {
            let (x, y) = (r.get(name).unwrap(), base.get(name).unwrap());
            assert!(x.pass && (x.max - y.max).abs() < 1e-12, "{name}");
        }
    }

    #[test]
    fn missing_fields_reported() {
        let case = Example1Params::reference().build().unwrap();
        let err = criteria_report(CriteriaSet::MinimalSurface { c: 0.0 }, &case.criteria_inputs(), &case.grid);
        assert!(matches!(err, Err(Error::Missing(_))));
    }

    /// Plane z = 0 in ℝ³ with Φ = 0: (2) is twice the twistor residual.
    #[test]
    fn minimal_surface_with_zero_phi() {
        let rep = Arc::new(CliffordRep::new(2).unwrap());
        let domain = Domain::Flat { dim: 2 };
        let target = Arc::new(RiemannianModel::space_form(SpaceFormKind::Flat, 3, 1.0).unwrap());
        let map = Arc::new(SmoothMap::new(domain.clone(), target, |x| DVector::from_vec(vec![x[0], x[1], 0.0])));
        let phi = SpinorField::constant(domain.clone(), rep.clone(), Spinor::zeros(2)).unwrap();
        let grid = Grid::new(vec![Axis::closed(-1.0, 1.0, 4), Axis::closed(-1.0, 1.0, 4)]).unwrap();
        let p1 = Spinor::from_pairs(&[(0.4, 0.1), (-1.0, 0.3)]);
        let p0 = Spinor::from_pairs(&[(1.0, 0.0), (0.0, -0.5)]);
        let r1 = rep.clone();
        let (q0, q1) = (p0.clone(), p1.clone());
        let twistor = SpinorField::new(domain.clone(), rep.clone(), move |x| q0.clone() - r1.act(x, &q1).unwrap() * 0.5).unwrap();
        let not_twistor = SpinorField::new(domain, rep.clone(), move |x| p0.clone() + p1.clone() * (x[0] * x[0] + x[1] * x[1]))
            .unwrap();
        let orient = NormalOrientation::LastComponentPositive;
        for (psi, twist) in [(twistor, true), (not_twistor, false)] {
            let inputs = CriteriaInputs {
                map: map.clone(),
                psi: Some(psi.clone()),
                phi: Some(phi.clone()),
                chi: None,
                orientation: Some(orient.clone()),
            };
            let r = criteria_report(CriteriaSet::MinimalSurface { c: 0.0 }, &inputs, &grid).unwrap();
            assert!(r.get("mean_curvature_balance").unwrap().pass);
            assert!(r.get("minimal").unwrap().pass);
            assert_eq!(r.get("principal_spinor_equation").unwrap().pass, twist);
            for p in grid.points() {
                let lhs = frame_difference(&psi, &p, 0, 1).unwrap().norm();
                let tw = psi.twistor_residual(&p, &[1.0, 0.0]).unwrap().norm();
                assert!((lhs - 2.0 * tw).abs() < 1e-8);
            }
        }
    }
}
