use std::fmt;
use std::sync::Arc;

use super::ScalarFn;
use crate::fd;

type GradFn = Arc<dyn Fn(&[f64]) -> [f64; 2] + Send + Sync>;

/// Surface metric e^{2u}(dx² + dy²) on a planar chart.
#[derive(Clone)]
pub struct ConformalSurface {
    u: ScalarFn,
    grad: Option<GradFn>,
    step: f64,
}

impl fmt::Debug for ConformalSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConformalSurface")
            .field("analytic_gradient", &self.grad.is_some())
            .field("step", &self.step)
            .finish()
    }
}

impl ConformalSurface {
    pub fn new(u: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        ConformalSurface {
            u: Arc::new(u),
            grad: None,
            step: fd::DEFAULT_STEP,
        }
    }

    /// Supply ∇u in closed form instead of differencing.
    pub fn with_gradient(mut self, g: impl Fn(&[f64]) -> [f64; 2] + Send + Sync + 'static) -> Self {
        self.grad = Some(Arc::new(g));
        self
    }

    pub fn with_step(mut self, h: fd::FdStep) -> Self {
        self.step = h.get();
        self
    }

    pub fn u(&self, x: &[f64]) -> f64 {
        (self.u)(x)
    }

    /// e^{−u}, the scale taking ∂_α to the unit frame e_α.
    pub fn frame_scale(&self, x: &[f64]) -> f64 {
        (-(self.u)(x)).exp()
    }

    pub fn gradient(&self, x: &[f64]) -> [f64; 2] {
        match &self.grad {
            Some(g) => g(x),
            None => {
                let u = &self.u;
                [
                    fd::central(|p| u(p), x, 0, self.step),
                    fd::central(|p| u(p), x, 1, self.step),
                ]
            }
        }
    }

    /// K = −e^{−2u} Δu by central differences.
    pub fn gauss_curvature(&self, x: &[f64]) -> f64 {
        let u = &self.u;
        let h = self.step.max(1e-3);
        let lap = fd::second(|p| u(p), x, 0, h) + fd::second(|p| u(p), x, 1, h);
        -(-2.0 * u(x)).exp() * lap
    }
}

/// Connection form ω₁₂ evaluated on e₁ = e^{−u}∂_x and e₂ = e^{−u}∂_y.
///
/// With this sign the spinor connection is
/// ∇_{e_α} = e^{−u}∂_α + ½ ω₁₂(e_α) e₁·e₂·.
pub fn spin_connection_2d(surface: &ConformalSurface, x: &[f64]) -> [f64; 2] {
    let s = surface.frame_scale(x);
    let [ux, uy] = surface.gradient(x);
    [-s * uy, s * ux]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_metric_has_no_connection() {
        let s = ConformalSurface::new(|_| 0.0);
        assert_eq!(spin_connection_2d(&s, &[0.3, -0.4]), [0.0, 0.0]);
        assert!(s.gauss_curvature(&[0.3, -0.4]).abs() < 1e-9);
    }

    #[test]
    fn round_metric_curvature() {
        // u = ½ ln 4 − ln(1+|z|²) is the round sphere of curvature 1;
        // Δ ln(1+|z|²) = 4/(1+|z|²)².
        let s = ConformalSurface::new(|p| 0.5 * 4f64.ln() - (1.0 + p[0] * p[0] + p[1] * p[1]).ln());
        for p in [[0.0, 0.0], [0.3, 0.1], [-1.2, 0.7]] {
            let q: f64 = 1.0 + p[0] * p[0] + p[1] * p[1];
            let lap_u = -4.0 / q.powi(2);
            let e2u = 4.0 / q.powi(2);
            let oracle = -lap_u / e2u;
            assert!((s.gauss_curvature(&p) - oracle).abs() < 1e-5);
            assert!((oracle - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn analytic_and_fd_gradient_agree() {
        let u = |p: &[f64]| -(1.0 + p[0] * p[0] + p[1] * p[1]).ln();
        let fd_s = ConformalSurface::new(u);
        let an = ConformalSurface::new(u).with_gradient(|p| {
            let s = 1.0 + p[0] * p[0] + p[1] * p[1];
            [-2.0 * p[0] / s, -2.0 * p[1] / s]
        });
        let x = [0.4, -0.9];
        let a = spin_connection_2d(&an, &x);
        let b = spin_connection_2d(&fd_s, &x);
        assert!((a[0] - b[0]).abs() < 1e-8 && (a[1] - b[1]).abs() < 1e-8);
    }
}
