//! Smooth maps into target models, tension fields and hypersurface data.
//!
//! A [`SmoothMap`] returns chart coordinates (or ambient coordinates for
//! embedded targets). Maps into ℂPⁿ may carry several affine charts; all
//! derivatives at a point are taken in the chart selected at that
//! point, so a stencil never straddles two charts.
//!
//! For a codimension-one isometric immersion into a space form,
//! [`SmoothMap::shape_data`] solves for the unit normal ν from
//! q(ν, φ_*e_α) = 0 and q(ν, φ) = 0, and reads the shape operator off
//! the Weingarten equation A e_α = −(∇_{e_α}ν)^T.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{constraint, Error, Result};
use crate::fd::{self, FdStep};
use crate::geometry::{Domain, RiemannianModel};
use crate::grid::Grid;

pub type ChartFn = Arc<dyn Fn(&[f64], usize) -> DVector<f64> + Send + Sync>;
pub type JacobianFn = Arc<dyn Fn(&[f64], usize) -> DMatrix<f64> + Send + Sync>;
pub type ChartSelector = Arc<dyn Fn(&[f64]) -> usize + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(&[f64]) -> DVector<f64> + Send + Sync>;

/// Tolerance for the algebraic constraints on amplitude/phase data.
const CONSTRAINT_TOL: f64 = 1e-12;

#[derive(Clone)]
pub struct SmoothMap {
    domain: Domain,
    target: Arc<RiemannianModel>,
    chart_fn: ChartFn,
    selector: Option<ChartSelector>,
    jacobian: Option<JacobianFn>,
    step: f64,
}

impl fmt::Debug for SmoothMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothMap")
            .field("domain", &self.domain)
            .field("target", &self.target)
            .field("charts", &self.selector.is_some())
            .field("analytic_jacobian", &self.jacobian.is_some())
            .field("step", &self.step)
            .finish()
    }
}

impl SmoothMap {
    pub fn new(
        domain: Domain,
        target: Arc<RiemannianModel>,
        f: impl Fn(&[f64]) -> DVector<f64> + Send + Sync + 'static,
    ) -> Self {
        SmoothMap {
            domain,
            target,
            chart_fn: Arc::new(move |x, _| f(x)),
            selector: None,
            jacobian: None,
            step: fd::DEFAULT_STEP,
        }
    }

    /// Map given in several charts; `select(x)` picks the chart used for
    /// every quantity evaluated at x.
    pub fn with_charts(
        domain: Domain,
        target: Arc<RiemannianModel>,
        f: impl Fn(&[f64], usize) -> DVector<f64> + Send + Sync + 'static,
        select: impl Fn(&[f64]) -> usize + Send + Sync + 'static,
    ) -> Self {
        SmoothMap {
            domain,
            target,
            chart_fn: Arc::new(f),
            selector: Some(Arc::new(select)),
            jacobian: None,
            step: fd::DEFAULT_STEP,
        }
    }

    /// Closed-form coordinate Jacobian (columns ∂_αφ) for single-chart maps.
    pub fn with_jacobian(mut self, j: impl Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static) -> Self {
        self.jacobian = Some(Arc::new(move |x, _| j(x)));
        self
    }

    pub fn with_step(mut self, h: FdStep) -> Self {
        self.step = h.get();
        self
    }

    /// Same map with derivatives forced to central differences.
    pub fn without_jacobian(mut self) -> Self {
        self.jacobian = None;
        self
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn target(&self) -> &Arc<RiemannianModel> {
        &self.target
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn chart_at(&self, x: &[f64]) -> usize {
        self.selector.as_ref().map_or(0, |s| s(x))
    }

    /// φ(x) in the given chart, unchecked.
    pub fn eval(&self, x: &[f64], chart: usize) -> DVector<f64> {
        (self.chart_fn)(x, chart)
    }

    /// φ(x) in the chart selected at x.
    pub fn value(&self, x: &[f64]) -> Result<DVector<f64>> {
        self.domain.check(x)?;
        let y = self.eval(x, self.chart_at(x));
        self.target.check_point(y.as_slice())?;
        Ok(y)
    }

    /// Coordinate Jacobian, columns ∂_αφ.
    pub fn jacobian(&self, x: &[f64], chart: usize) -> DMatrix<f64> {
        if let Some(j) = &self.jacobian {
            return j(x, chart);
        }
        let n = self.domain.dim();
        let cols: Vec<DVector<f64>> = (0..n)
            .map(|a| fd::central(|p| self.eval(p, chart), x, a, self.step))
            .collect();
        DMatrix::from_columns(&cols)
    }

    /// Columns φ_*(e_α) = e^{−u} ∂_αφ.
    pub fn frame_push(&self, x: &[f64], chart: usize) -> DMatrix<f64> {
        self.jacobian(x, chart) * self.domain.frame_scale(x)
    }

    /// Σ_α ∂²_αφ in coordinates.
    fn coordinate_laplacian(&self, x: &[f64], chart: usize) -> DVector<f64> {
        let n = self.domain.dim();
        let mut lap = DVector::zeros(self.target.coord_dim());
        for a in 0..n {
            lap += match &self.jacobian {
                Some(j) => fd::central(|p| j(p, chart).column(a).into_owned(), x, a, self.step),
                None => fd::second(|p| self.eval(p, chart), x, a, self.step),
            };
        }
        lap
    }

    /// τ(φ) = trace ∇dφ at x.
    pub fn tension_field(&self, x: &[f64]) -> Result<DVector<f64>> {
        let y = self.value(x)?;
        let chart = self.chart_at(x);
        let s = self.domain.frame_scale(x);
        let w = s * s;
        let lap = self.coordinate_laplacian(x, chart);
        if self.target.ambient().is_some() {
            return Ok(self.target.project(&y, &(lap * w)));
        }
        let gamma = self.target.christoffels(y.as_slice(), self.step)?;
        let jac = self.jacobian(x, chart);
        let mut tau = lap;
        for a in 0..self.domain.dim() {
            let col = jac.column(a).into_owned();
            tau += gamma.contract(&col, &col);
        }
        Ok(tau * w)
    }

    /// Pullback metric in the coordinate basis ∂_α.
    pub fn pullback_metric(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let y = self.value(x)?;
        let g = self.target.metric_at(y.as_slice())?;
        let j = self.jacobian(x, self.chart_at(x));
        Ok(j.transpose() * g * j)
    }

    /// Largest quadric violation of the image over a grid.
    pub fn image_constraint_residual(&self, grid: &Grid) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for p in grid.points() {
            worst = worst.max(self.target.constraint_residual(&self.value(&p)?));
        }
        Ok(worst)
    }

    /// Unit normal of a codimension-one immersion, sign fixed by `orientation`.
    pub fn normal(&self, x: &[f64], orientation: &NormalOrientation) -> Result<DVector<f64>> {
        self.domain.check(x)?;
        let nu = self.raw_normal(x, self.chart_at(x))?;
        Ok(orient(nu, x, orientation, &self.target))
    }

    fn raw_normal(&self, x: &[f64], chart: usize) -> Result<DVector<f64>> {
        let n = self.domain.dim();
        let dim = self.target.coord_dim();
        if self.target.dim() != n + 1 {
            return Err(Error::Unsupported("a codimension-one immersion"));
        }
        let y = self.eval(x, chart);
        let g = self.target.metric_at(y.as_slice())?;
        let t = self.frame_push(x, chart);
        let gram = t.transpose() * &g * &t;
        let ev = SymmetricEigen::new(gram.clone()).eigenvalues;
        let scale = gram.diagonal().amax().max(1e-300);
        if ev.min() <= 1e-10 * scale {
            return Err(Error::RankDeficient);
        }
        let mut rows: Vec<DVector<f64>> = (0..n).map(|a| &g * t.column(a)).collect();
        if self.target.ambient().is_some() {
            rows.push(&g * &y);
        }
        let a = DMatrix::from_columns(&rows).transpose();
        let ata = a.transpose() * &a;
        let eig = SymmetricEigen::new(ata);
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let top = eig.eigenvalues.amax().max(1e-300);
        if dim > 1 && eig.eigenvalues[order[1]] <= 1e-10 * top {
            return Err(Error::AmbiguousNormal);
        }
        let v = eig.eigenvectors.column(order[0]).into_owned();
        let qvv = (&g * &v).dot(&v);
        if qvv <= 1e-12 {
            return Err(Error::AmbiguousNormal);
        }
        Ok(v / qvv.sqrt())
    }

    /// Normal, shape operator and curvatures at x.
    ///
    /// The frame is the pushed-forward domain frame φ_*(e_α); it need not
    /// be orthonormal, the Gram matrix is taken into account.
    pub fn shape_data(&self, x: &[f64], orientation: &NormalOrientation) -> Result<HypersurfaceData> {
        self.domain.check(x)?;
        let chart = self.chart_at(x);
        let n = self.domain.dim();
        let y = self.eval(x, chart);
        let g = self.target.metric_at(y.as_slice())?;
        let nu = orient(self.raw_normal(x, chart)?, x, orientation, &self.target);
        let t = self.frame_push(x, chart);
        let scale = self.domain.frame_scale(x);
        let mut b = DMatrix::zeros(n, n);
        for a in 0..n {
            let aligned = |p: &[f64]| -> Result<DVector<f64>> {
                let v = self.raw_normal(p, chart)?;
                Ok(if (&g * &v).dot(&nu) < 0.0 { -v } else { v })
            };
            let dnu = fd::try_central(aligned, x, a, self.step)? * scale;
            for beta in 0..n {
                b[(beta, a)] = -(&g * &dnu).dot(&t.column(beta));
            }
        }
        let gram = t.transpose() * &g * &t;
        let sym = (&b + b.transpose()) * 0.5;
        let chol = gram.clone().cholesky().ok_or(Error::RankDeficient)?;
        let linv = chol.l().try_inverse().ok_or(Error::RankDeficient)?;
        let m = &linv * &sym * linv.transpose();
        let eig = SymmetricEigen::new((&m + m.transpose()) * 0.5);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
        let principal: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let dirs: Vec<DVector<f64>> = order
            .iter()
            .map(|&i| linv.transpose() * eig.eigenvectors.column(i))
            .collect();
        let operator = gram.clone().try_inverse().ok_or(Error::RankDeficient)? * &sym;
        let mean = operator.trace() / n as f64;
        Ok(HypersurfaceData {
            mean_curvature: &nu * mean,
            normal: nu,
            second_fundamental_form: b,
            shape_operator: operator,
            principal_curvatures: principal,
            principal_directions: DMatrix::from_columns(&dirs),
            mean,
        })
    }
}

fn orient(
    nu: DVector<f64>,
    x: &[f64],
    orientation: &NormalOrientation,
    target: &RiemannianModel,
) -> DVector<f64> {
    let flip = match orientation {
        NormalOrientation::Reference(f) => {
            let r = f(x);
            let ip = match target.ambient() {
                Some(a) => a.q(&nu, &r),
                None => nu.dot(&r),
            };
            ip < 0.0
        }
        NormalOrientation::LastComponentPositive => nu
            .iter()
            .rev()
            .find(|v| v.abs() > 1e-12)
            .is_some_and(|v| *v < 0.0),
    };
    if flip {
        -nu
    } else {
        nu
    }
}

/// Sign convention for the unit normal.
#[derive(Clone)]
pub enum NormalOrientation {
    /// Last nonzero ambient component positive.
    LastComponentPositive,
    /// Same side as the given reference vector field.
    Reference(VectorFn),
}

impl fmt::Debug for NormalOrientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalOrientation::LastComponentPositive => f.write_str("LastComponentPositive"),
            NormalOrientation::Reference(_) => f.write_str("Reference(..)"),
        }
    }
}

/// Extrinsic data of a hypersurface at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct HypersurfaceData {
    /// Unit normal ν in target coordinates.
    pub normal: DVector<f64>,
    /// b_{βα} = ⟨A e_α, φ_*e_β⟩ as differenced, before symmetrization.
    pub second_fundamental_form: DMatrix<f64>,
    /// Matrix of A in the frame φ_*(e_α).
    pub shape_operator: DMatrix<f64>,
    /// Eigenvalues of A, largest first.
    pub principal_curvatures: Vec<f64>,
    /// Frame coefficients of the principal directions, as columns.
    pub principal_directions: DMatrix<f64>,
    /// trace A / n
    pub mean: f64,
    /// H = (trace A / n) ν
    pub mean_curvature: DVector<f64>,
}

/// Σ r_j μ_j², zero exactly when the torus with amplitudes r_j and frequencies μ_j
/// is conformal.
///
/// Checks r_j > 0, |μ_j| = 1, Σ r_j² = 1 and Σ r_j μ_j = 0 first.
pub fn conformality_defect(r: &[f64], mu: &[Complex64]) -> Result<Complex64> {
    validate_horizontal_data(r, mu)?;
    Ok(r.iter().zip(mu).map(|(rj, mj)| mj * mj * *rj).sum())
}

pub(crate) fn validate_horizontal_data(r: &[f64], mu: &[Complex64]) -> Result<()> {
    if r.len() != mu.len() {
        return Err(Error::DimensionMismatch {
            expected: r.len(),
            found: mu.len(),
        });
    }
    if r.len() < 2 {
        return Err(constraint("at least two homogeneous components", r.len() as f64));
    }
    if let Some(bad) = r.iter().find(|v| !(**v > 0.0)) {
        return Err(constraint("r_j > 0", *bad));
    }
    let modulus = mu.iter().map(|m| (m.norm() - 1.0).abs()).fold(0.0, f64::max);
    if modulus > CONSTRAINT_TOL {
        return Err(constraint("|mu_j| = 1", modulus));
    }
    let norm = (r.iter().map(|v| v * v).sum::<f64>() - 1.0).abs();
    if norm > CONSTRAINT_TOL {
        return Err(constraint("sum r_j^2 = 1", norm));
    }
    let horizontal: Complex64 = r.iter().zip(mu).map(|(rj, mj)| mj * *rj).sum();
    if horizontal.norm() > CONSTRAINT_TOL {
        return Err(constraint("sum r_j mu_j = 0", horizontal.norm()));
    }
    Ok(())
}
