use std::f64::consts::PI;

use super::conformal::{spin_connection_2d, ConformalSurface};
use crate::error::{Error, Result};

/// Chart domain of a map or spinor field, always with an orthonormal
/// frame e_α = e^{−u}∂_α (u = 0 except on conformal surfaces).
#[derive(Debug, Clone)]
pub enum Domain {
    /// Flat ℝⁿ with coordinates x¹..xⁿ.
    Flat { dim: usize },
    /// (ℝ/2πrℤ) × ℝ with coordinates (θ, t).
    Cylinder { radius: f64 },
    /// A plane chart with the metric e^{2u}(dx² + dy²).
    Conformal(ConformalSurface),
}

impl Domain {
    pub fn dim(&self) -> usize {
        match self {
            Domain::Flat { dim } => *dim,
            Domain::Cylinder { .. } | Domain::Conformal(_) => 2,
        }
    }

    pub fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::OutsideDomain(format!("{x:?}")));
        }
        Ok(())
    }

    /// Period of the θ coordinate, when there is one.
    pub fn period(&self) -> Option<f64> {
        match self {
            Domain::Cylinder { radius } => Some(2.0 * PI * radius),
            _ => None,
        }
    }

    pub fn frame_scale(&self, x: &[f64]) -> f64 {
        match self {
            Domain::Conformal(s) => s.frame_scale(x),
            _ => 1.0,
        }
    }

    /// ω₁₂(e₁), ω₁₂(e₂); `None` where the coordinate frame is parallel.
    pub fn spin_connection(&self, x: &[f64]) -> Option<[f64; 2]> {
        match self {
            Domain::Conformal(s) => Some(spin_connection_2d(s, x)),
            _ => None,
        }
    }

    /// Riemannian volume density relative to dx¹⋯dxⁿ.
    pub fn volume_density(&self, x: &[f64]) -> f64 {
        match self {
            Domain::Conformal(s) => (2.0 * s.u(x)).exp(),
            _ => 1.0,
        }
    }

    pub fn is_flat(&self) -> bool {
        !matches!(self, Domain::Conformal(_))
    }
}
