//! Spinor fields on chart domains.
//!
//! A [`SpinorField`] is a function x ↦ Ψ(x) ∈ Δₙ on a [`Domain`]. The
//! spinor bundle is trivialized by the orthonormal frame e_α of the
//! domain; on a conformal surface e^{2u}(dx² + dy²) this frame is
//! e_α = e^{−u}∂_α and
//!
//! ```text
//! ∇_{e_α}Ψ = e^{−u}∂_αΨ + ½ ω₁₂(e_α) e₁·e₂·Ψ
//! ```
//!
//! On flat domains ∇ is the coordinate derivative. Derivatives come
//! from a closed form when one was supplied, from central differences
//! otherwise; [`DerivativeMode`] switches between the two.

use std::fmt;
use std::sync::Arc;

use crate::clifford::{CliffordRep, Spinor};
use crate::error::{Error, Result};
use crate::fd::{self, FdStep};
use crate::geometry::Domain;
use crate::grid::Grid;

pub type SpinorFn = Arc<dyn Fn(&[f64]) -> Spinor + Send + Sync>;
pub type PartialFn = Arc<dyn Fn(&[f64], usize) -> Spinor + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMode {
    Analytic,
    FiniteDifference,
}

/// Periodicity is checked on construction to this relative accuracy.
const PERIODICITY_TOL: f64 = 1e-12;

#[derive(Clone)]
pub struct SpinorField {
    domain: Domain,
    rep: Arc<CliffordRep>,
    value: SpinorFn,
    partial: Option<PartialFn>,
    mode: DerivativeMode,
    step: f64,
}

impl fmt::Debug for SpinorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpinorField")
            .field("domain", &self.domain)
            .field("n", &self.rep.n())
            .field("mode", &self.mode)
            .field("step", &self.step)
            .finish()
    }
}

impl SpinorField {
    pub fn new(
        domain: Domain,
        rep: Arc<CliffordRep>,
        value: impl Fn(&[f64]) -> Spinor + Send + Sync + 'static,
    ) -> Result<Self> {
        if rep.n() != domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.dim(),
                found: rep.n(),
            });
        }
        let field = SpinorField {
            domain,
            rep,
            value: Arc::new(value),
            partial: None,
            mode: DerivativeMode::FiniteDifference,
            step: fd::DEFAULT_STEP,
        };
        let probe = (field.value)(&vec![0.1; field.domain.dim()]);
        field.rep.check(&probe)?;
        field.check_periodic()?;
        Ok(field)
    }

    /// The constant field Ψ ≡ s.
    pub fn constant(domain: Domain, rep: Arc<CliffordRep>, s: Spinor) -> Result<Self> {
        let zero = Spinor::zeros(s.dim());
        let f = SpinorField::new(domain, rep, move |_| s.clone())?;
        Ok(f.with_partials(move |_, _| zero.clone()))
    }

    /// Attach closed-form coordinate partials ∂_αΨ and switch to
    /// analytic mode.
    pub fn with_partials(mut self, d: impl Fn(&[f64], usize) -> Spinor + Send + Sync + 'static) -> Self {
        self.partial = Some(Arc::new(d));
        self.mode = DerivativeMode::Analytic;
        self
    }

    pub fn with_mode(mut self, mode: DerivativeMode) -> Self {
        self.mode = if self.partial.is_some() {
            mode
        } else {
            DerivativeMode::FiniteDifference
        };
        self
    }

    pub fn with_step(mut self, h: FdStep) -> Self {
        self.step = h.get();
        self
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn rep(&self) -> &Arc<CliffordRep> {
        &self.rep
    }

    pub fn mode(&self) -> DerivativeMode {
        self.mode
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    fn check_periodic(&self) -> Result<()> {
        let Some(period) = self.domain.period() else {
            return Ok(());
        };
        let mut worst: f64 = 0.0;
        for theta in [0.0, 1.3, 2.9] {
            for t in [-0.5, 0.0, 0.7] {
                let a = (self.value)(&[theta, t]);
                let b = (self.value)(&[theta + period, t]);
                let scale = a.norm().max(1.0);
                worst = worst.max((a - b).norm() / scale);
            }
        }
        if worst > PERIODICITY_TOL {
            return Err(Error::NotPeriodic(worst));
        }
        Ok(())
    }

    pub fn value(&self, x: &[f64]) -> Result<Spinor> {
        self.domain.check(x)?;
        Ok((self.value)(x))
    }

    /// Value without the domain check, for stencil points.
    pub(crate) fn eval(&self, x: &[f64]) -> Spinor {
        (self.value)(x)
    }

    /// Coordinate partial ∂_αΨ (0-based α).
    pub fn partial(&self, x: &[f64], alpha: usize) -> Result<Spinor> {
        self.domain.check(x)?;
        if alpha >= self.domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.domain.dim(),
                found: alpha + 1,
            });
        }
        Ok(match (&self.partial, self.mode) {
            (Some(d), DerivativeMode::Analytic) => d(x, alpha),
            _ => fd::central(|p| (self.value)(p), x, alpha, self.step),
        })
    }

    /// ∇_{e_α}Ψ at x.
    pub fn covariant_derivative(&self, alpha: usize, x: &[f64]) -> Result<Spinor> {
        let d = self.partial(x, alpha)? * self.domain.frame_scale(x);
        Ok(match self.domain.spin_connection(x) {
            Some(omega) => {
                let e12 = self.rep.apply(0, &self.rep.apply(1, &(self.value)(x)));
                d + e12 * (0.5 * omega[alpha])
            }
            None => d,
        })
    }

    /// ∂̸Ψ = Σ_α e_α·∇_{e_α}Ψ
    pub fn dirac(&self, x: &[f64]) -> Result<Spinor> {
        let mut out = Spinor::zeros(self.rep.fiber_dim());
        for alpha in 0..self.domain.dim() {
            out += &self.rep.apply(alpha, &self.covariant_derivative(alpha, x)?);
        }
        Ok(out)
    }

    /// ∇_XΨ + (1/n) X·∂̸Ψ for X = X^α e_α.
    pub fn twistor_residual(&self, x: &[f64], v: &[f64]) -> Result<Spinor> {
        let n = self.domain.dim();
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        let mut out = self.rep.act(v, &self.dirac(x)?)? * (1.0 / n as f64);
        for (alpha, &va) in v.iter().enumerate() {
            if va != 0.0 {
                out += &(self.covariant_derivative(alpha, x)? * va);
            }
        }
        Ok(out)
    }

    /// max over frame directions e_α of the twistor residual norm.
    pub fn twistor_defect(&self, x: &[f64]) -> Result<f64> {
        let n = self.domain.dim();
        let mut worst: f64 = 0.0;
        for alpha in 0..n {
            let mut v = vec![0.0; n];
            v[alpha] = 1.0;
            worst = worst.max(self.twistor_residual(x, &v)?.norm());
        }
        Ok(worst)
    }

    /// max over the grid of ‖∂̸Ψ‖.
    pub fn harmonic_residual(&self, grid: &Grid) -> Result<f64> {
        if grid.is_empty() {
            return Err(Error::EmptyGrid);
        }
        let mut worst: f64 = 0.0;
        for p in grid.points() {
            worst = worst.max(self.dirac(&p)?.norm());
        }
        Ok(worst)
    }
}
