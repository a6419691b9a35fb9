//! Target and domain geometry.
//!
//! Targets are [`RiemannianModel`]s, either a chart with a metric
//! evaluator (flat space, ℂPⁿ with the Fubini–Study metric) or a quadric
//! in a pseudo-euclidean ambient space (spheres, the hyperboloid model
//! of hyperbolic space). Domains are flat ℝⁿ, the flat cylinder
//! (ℝ/2πrℤ)×ℝ, or a conformally flat surface e^{2u}(dx² + dy²).

mod conformal;
mod domain;
mod model;
mod tensors;

pub use conformal::{spin_connection_2d, ConformalSurface};
pub use domain::Domain;
pub use model::{Ambient, Curvature, RiemannianModel, SpaceFormKind};
pub use tensors::{constant_curvature_riemann, Christoffels, RiemannTensor};

use std::sync::Arc;

/// Shared scalar function on a chart.
pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
