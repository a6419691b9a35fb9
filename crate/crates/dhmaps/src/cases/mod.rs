//! Explicit Dirac-harmonic constructions, assembled and validated.
//!
//! Each constructor checks its side conditions, builds the map, the
//! intrinsic spinors and the twisted field, and returns a
//! [`CasePackage`] that knows which checks it is expected to pass.

mod example1;
mod example2;
mod example3;
mod theorem3;

use std::sync::Arc;

pub use example1::Example1Params;
pub use example2::{f_pr, Example2Params};
pub use example3::Example3Params;
pub use theorem3::Theorem3Params;

use crate::dirac_harmonic::{
    criteria_report, el_residuals, CriteriaInputs, CriteriaReport, CriteriaSet, ResidualReport, Tolerances,
    TwistedSpinorField,
};
use crate::error::Result;
use crate::fd::FdStep;
use crate::grid::Grid;
use crate::maps::{NormalOrientation, SmoothMap};
use crate::spinors::{DerivativeMode, SpinorField};

/// Derivative settings shared by every object a constructor builds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuildOptions {
    pub fd_step: FdStep,
    /// Use closed-form derivatives where the construction has them.
    pub analytic: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            fd_step: FdStep::default(),
            analytic: true,
        }
    }
}

impl BuildOptions {
    pub fn with_step(h: FdStep) -> Self {
        BuildOptions { fd_step: h, ..Self::default() }
    }

    pub(crate) fn spinor(&self, f: SpinorField) -> SpinorField {
        let mode = if self.analytic {
            DerivativeMode::Analytic
        } else {
            DerivativeMode::FiniteDifference
        };
        f.with_step(self.fd_step).with_mode(mode)
    }

    pub(crate) fn map(&self, m: SmoothMap) -> SmoothMap {
        let m = m.with_step(self.fd_step);
        if self.analytic {
            m
        } else {
            m.without_jacobian()
        }
    }
}

/// What the construction claims.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expected {
    /// τ(φ) = R(φ, ψ) and D̸ψ = 0.
    pub dirac_harmonic: bool,
    /// τ(φ) = 0.
    pub harmonic_map: bool,
    /// Constant value of ‖τ(φ)‖, when known in closed form.
    pub tension_norm: Option<f64>,
}

/// A fully assembled (φ, ψ) with its ingredients.
#[derive(Debug, Clone)]
pub struct CasePackage {
    pub name: &'static str,
    pub map: Arc<SmoothMap>,
    pub field: TwistedSpinorField,
    pub psi: Option<SpinorField>,
    pub phi: Option<SpinorField>,
    pub chi: Option<SpinorField>,
    pub orientation: Option<NormalOrientation>,
    pub criteria: Option<CriteriaSet>,
    pub expected: Expected,
    pub grid: Grid,
}

impl CasePackage {
    pub fn criteria_inputs(&self) -> CriteriaInputs {
        CriteriaInputs {
            map: self.map.clone(),
            psi: self.psi.clone(),
            phi: self.phi.clone(),
            chi: self.chi.clone(),
            orientation: self.orientation.clone(),
        }
    }

    /// Euler–Lagrange residuals on `grid` (the default grid if `None`).
    pub fn residuals(&self, grid: Option<&Grid>, tolerances: &Tolerances) -> Result<ResidualReport> {
        el_residuals(&self.field, grid.unwrap_or(&self.grid), tolerances, self.orientation.as_ref())
    }

    /// The construction's own criteria; empty when it has none.
    pub fn criteria_report(&self, grid: Option<&Grid>) -> Result<CriteriaReport> {
        match self.criteria {
            Some(set) => criteria_report(set, &self.criteria_inputs(), grid.unwrap_or(&self.grid)),
            None => Ok(CriteriaReport::default()),
        }
    }
}
