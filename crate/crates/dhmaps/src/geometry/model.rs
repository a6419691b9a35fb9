use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::tensors::{constant_curvature_with_metric, Christoffels, RiemannTensor};
use crate::error::{Error, Result};
use crate::fd;

type MetricFn = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;

/// Default bound on |w| for the Fubini–Study chart.
pub const FS_CHART_BOUND: f64 = 1e4;

/// How the curvature tensor of a model is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Curvature {
    /// Constant sectional curvature c.
    Constant(f64),
    /// Second differences of the chart metric.
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceFormKind {
    Hyperbolic,
    Sphere,
    Flat,
}

/// Quadric {q(x,x) = level} in ℝ^{d} with the diagonal form q.
#[derive(Debug, Clone, PartialEq)]
pub struct Ambient {
    signature: Vec<f64>,
    level: f64,
}

impl Ambient {
    pub fn dim(&self) -> usize {
        self.signature.len()
    }

    pub fn signature(&self) -> &[f64] {
        &self.signature
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn q(&self, v: &DVector<f64>, w: &DVector<f64>) -> f64 {
        self.signature
            .iter()
            .zip(v.iter().zip(w.iter()))
            .map(|(s, (a, b))| s * a * b)
            .sum()
    }

    /// v − q(v,x)/q(x,x) · x
    pub fn project(&self, x: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        let qxx = self.q(x, x);
        v - x * (self.q(v, x) / qxx)
    }

    /// Index-lowered copy: (q v)_A = q_AA v^A.
    pub fn lower(&self, v: &DVector<f64>) -> DVector<f64> {
        DVector::from_fn(v.len(), |a, _| self.signature[a] * v[a])
    }
}

#[derive(Clone)]
enum Repr {
    Chart { metric: MetricFn, bound: f64 },
    Embedded(Ambient),
}

/// A target geometry: chart metric or embedded quadric, plus curvature.
#[derive(Clone)]
pub struct RiemannianModel {
    name: String,
    dim: usize,
    curvature: Curvature,
    repr: Repr,
}

impl fmt::Debug for RiemannianModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RiemannianModel")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("curvature", &self.curvature)
            .field("ambient", &self.ambient())
            .finish()
    }
}

impl RiemannianModel {
    /// Hyperboloid q(x,x) = −R² in ℝ^{m+1}_1, round sphere |x| = R in
    /// ℝ^{m+1}, or the flat chart ℝ^m.
    pub fn space_form(kind: SpaceFormKind, dim: usize, radius: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionOutOfRange { n: 0, max: usize::MAX });
        }
        if kind != SpaceFormKind::Flat && !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::NonPositiveRadius(radius));
        }
        let r2 = radius * radius;
        Ok(match kind {
            SpaceFormKind::Hyperbolic => {
                let mut signature = vec![1.0; dim + 1];
                signature[dim] = -1.0;
                RiemannianModel {
                    name: format!("H^{dim}({radius})"),
                    dim,
                    curvature: Curvature::Constant(-1.0 / r2),
                    repr: Repr::Embedded(Ambient { signature, level: -r2 }),
                }
            }
            SpaceFormKind::Sphere => RiemannianModel {
                name: format!("S^{dim}({radius})"),
                dim,
                curvature: Curvature::Constant(1.0 / r2),
                repr: Repr::Embedded(Ambient {
                    signature: vec![1.0; dim + 1],
                    level: r2,
                }),
            },
            SpaceFormKind::Flat => RiemannianModel::chart(
                format!("R^{dim}"),
                dim,
                Curvature::Constant(0.0),
                move |_| DMatrix::identity(dim, dim),
            ),
        })
    }

    pub fn flat(dim: usize) -> Self {
        RiemannianModel::chart(format!("R^{dim}"), dim, Curvature::Constant(0.0), move |_| {
            DMatrix::identity(dim, dim)
        })
    }

    /// ℂPⁿ in the affine chart [1, w₁, …, wₙ], coordinates
    /// (Re w₁, Im w₁, …), holomorphic sectional curvature 4.
    pub fn fubini_study(n: usize) -> Result<Self> {
        Self::fubini_study_with_bound(n, FS_CHART_BOUND)
    }

    pub fn fubini_study_with_bound(n: usize, bound: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionOutOfRange { n: 0, max: usize::MAX });
        }
        let mut m = RiemannianModel::chart(format!("CP^{n}"), 2 * n, Curvature::Numeric, move |y| {
            fubini_study_metric(n, y)
        });
        if let Repr::Chart { bound: b, .. } = &mut m.repr {
            *b = bound;
        }
        Ok(m)
    }

    /// Chart model from a metric evaluator.
    pub fn chart(
        name: impl Into<String>,
        dim: usize,
        curvature: Curvature,
        metric: impl Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    ) -> Self {
        RiemannianModel {
            name: name.into(),
            dim,
            curvature,
            repr: Repr::Chart {
                metric: Arc::new(metric),
                bound: f64::INFINITY,
            },
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Intrinsic dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of coordinates of a point (chart or ambient).
    pub fn coord_dim(&self) -> usize {
        match &self.repr {
            Repr::Chart { .. } => self.dim,
            Repr::Embedded(a) => a.dim(),
        }
    }

    pub fn curvature(&self) -> Curvature {
        self.curvature
    }

    pub fn ambient(&self) -> Option<&Ambient> {
        match &self.repr {
            Repr::Embedded(a) => Some(a),
            Repr::Chart { .. } => None,
        }
    }

    pub fn check_point(&self, y: &[f64]) -> Result<()> {
        if y.len() != self.coord_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.coord_dim(),
                found: y.len(),
            });
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::OutsideChart(format!("{y:?}")));
        }
        if let Repr::Chart { bound, .. } = &self.repr {
            let r = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            if r > *bound {
                return Err(Error::OutsideChart(format!("|y| = {r:.3e} exceeds {bound:.3e}")));
            }
        }
        Ok(())
    }

    /// |q(y,y) − level| for embedded models, 0 for charts.
    pub fn constraint_residual(&self, y: &DVector<f64>) -> f64 {
        match &self.repr {
            Repr::Embedded(a) => (a.q(y, y) - a.level).abs(),
            Repr::Chart { .. } => 0.0,
        }
    }

    /// Chart metric g(y), or the ambient form q for embedded models.
    pub fn metric_at(&self, y: &[f64]) -> Result<DMatrix<f64>> {
        self.check_point(y)?;
        match &self.repr {
            Repr::Chart { metric, .. } => {
                let g = metric(y);
                let g = (&g + g.transpose()) * 0.5;
                if g.clone().cholesky().is_none() {
                    return Err(Error::SingularMetric);
                }
                Ok(g)
            }
            Repr::Embedded(a) => Ok(DMatrix::from_diagonal(&DVector::from_vec(a.signature.clone()))),
        }
    }

    pub fn inner(&self, y: &[f64], v: &DVector<f64>, w: &DVector<f64>) -> Result<f64> {
        match &self.repr {
            Repr::Embedded(a) => Ok(a.q(v, w)),
            Repr::Chart { .. } => {
                let g = self.metric_at(y)?;
                Ok((g * w).dot(v))
            }
        }
    }

    pub fn norm(&self, y: &[f64], v: &DVector<f64>) -> Result<f64> {
        Ok(self.inner(y, v, v)?.abs().sqrt())
    }

    /// Tangent projection at y (identity on charts).
    pub fn project(&self, y: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        match &self.repr {
            Repr::Embedded(a) => a.project(y, v),
            Repr::Chart { .. } => v.clone(),
        }
    }

    /// Γ^k_{ij} = ½ g^{kl}(∂_i g_{jl} + ∂_j g_{il} − ∂_l g_{ij}) by
    /// central differences of the metric.
    pub fn christoffels(&self, y: &[f64], h: f64) -> Result<Christoffels> {
        let metric = match &self.repr {
            Repr::Chart { metric, .. } => metric,
            Repr::Embedded(_) => return Err(Error::Unsupported("a chart model")),
        };
        let d = self.dim;
        let g = self.metric_at(y)?;
        let ginv = g.try_inverse().ok_or(Error::SingularMetric)?;
        let sym = |p: &[f64]| {
            let m = metric(p);
            (&m + m.transpose()) * 0.5
        };
        let dg: Vec<DMatrix<f64>> = (0..d).map(|l| fd::central(sym, y, l, h)).collect();
        let mut gamma = Christoffels::zeros(d);
        for k in 0..d {
            for i in 0..d {
                for j in i..d {
                    let mut s = 0.0;
                    for l in 0..d {
                        s += ginv[(k, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
                    }
                    gamma.set(k, i, j, 0.5 * s);
                    gamma.set(k, j, i, 0.5 * s);
                }
            }
        }
        Ok(gamma)
    }

    /// Curvature coefficients at y: closed form for constant curvature
    /// (in chart or ambient coordinates), second differences otherwise.
    pub fn riemann(&self, y: &[f64], h: f64) -> Result<RiemannTensor> {
        match (&self.repr, self.curvature) {
            (_, Curvature::Constant(c)) => {
                let g = self.metric_at(y)?;
                Ok(constant_curvature_with_metric(c, &g))
            }
            (Repr::Embedded(_), Curvature::Numeric) => {
                Err(Error::Unsupported("constant curvature on embedded models"))
            }
            (Repr::Chart { .. }, Curvature::Numeric) => self.numeric_riemann(y, h),
        }
    }

    fn numeric_riemann(&self, y: &[f64], h: f64) -> Result<RiemannTensor> {
        let d = self.dim;
        let gamma = self.christoffels(y, h)?;
        let mut dgamma = Vec::with_capacity(d);
        for k in 0..d {
            let mut plus = self.christoffels(&fd::shifted(y, k, h), h)?;
            let minus = self.christoffels(&fd::shifted(y, k, -h), h)?;
            plus.axpy(-1.0, &minus);
            let mut scaled = Christoffels::zeros(d);
            scaled.axpy(0.5 / h, &plus);
            dgamma.push(scaled);
        }
        let mut r = RiemannTensor::zeros(d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in (k + 1)..d {
                        let mut v = dgamma[k].get(i, l, j) - dgamma[l].get(i, k, j);
                        for m in 0..d {
                            v += gamma.get(i, k, m) * gamma.get(m, l, j)
                                - gamma.get(i, l, m) * gamma.get(m, k, j);
                        }
                        r.set_pair(i, j, k, l, v);
                    }
                }
            }
        }
        Ok(r)
    }
}

/// Realified Fubini–Study metric at y = (Re w₁, Im w₁, …).
pub(crate) fn fubini_study_metric(n: usize, y: &[f64]) -> DMatrix<f64> {
    let w: Vec<Complex64> = (0..n).map(|i| Complex64::new(y[2 * i], y[2 * i + 1])).collect();
    let s = 1.0 + w.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let mut g = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let delta = if i == j { s } else { 0.0 };
            let a = (Complex64::new(delta, 0.0) - w[i].conj() * w[j]) / (s * s);
            g[(2 * i, 2 * j)] = a.re;
            g[(2 * i + 1, 2 * j + 1)] = a.re;
            g[(2 * i, 2 * j + 1)] = a.im;
            g[(2 * i + 1, 2 * j)] = -a.im;
        }
    }
    g
}
