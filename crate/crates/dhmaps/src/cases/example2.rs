//! Conformal minimal immersions φ_p: S² → ℂPⁿ with the round twistor
//! spinors (Ψ₀ + z·Ψ₁)/√(1+|z|²).

use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;

use super::{BuildOptions, CasePackage, Expected};
use crate::clifford::{CliffordRep, Spinor};
use crate::dirac_harmonic::{assemble_psi_tangent, CriteriaSet};
use crate::error::{constraint, Result};
use crate::geometry::{ConformalSurface, Domain, RiemannianModel};
use crate::grid::{Axis, Grid};
use crate::maps::SmoothMap;
use crate::spinors::SpinorField;

fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || k > n || n < 0 {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// f_{p,r}(z) = p!/(1+|z|²)^p √C(n,r) Σ_k (−1)^k C(r,p−k) C(n−r,k) z^{r−p+k} z̄^k
pub fn f_pr(p: usize, n: usize, r: usize, z: Complex64) -> Complex64 {
    let (p, n, r) = (p as i64, n as i64, r as i64);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in (p - r).max(0)..=p.min(n - r) {
        let coef = binomial(r, p - k) * binomial(n - r, k);
        if coef == 0.0 {
            continue;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += z.powi((r - p + k) as i32) * z.conj().powi(k as i32) * (sign * coef);
    }
    let fact: f64 = (1..=p).map(|i| i as f64).product();
    sum * (fact * binomial(n, r).sqrt() / (1.0 + z.norm_sqr()).powi(p as i32))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Example2Params {
    pub p: usize,
    pub n: usize,
    pub psi0: Spinor,
    pub psi1: Spinor,
}

impl Example2Params {
    /// p = 1, n = 2.
    pub fn reference() -> Self {
        Example2Params {
            p: 1,
            n: 2,
            psi0: Spinor::from_pairs(&[(0.3, -0.2), (1.0, 0.5)]),
            psi1: Spinor::from_pairs(&[(0.6, 0.1), (-0.4, 0.8)]),
        }
    }

    /// n + 2p(n − p), the constant in ds_p² = K/(1+|z|²)² |dz|².
    pub fn metric_constant(&self) -> f64 {
        (self.n + 2 * self.p * (self.n - self.p)) as f64
    }

    /// Conformal factor of ds_p² at x.
    pub fn induced_metric_factor(&self, x: &[f64]) -> f64 {
        self.metric_constant() / (1.0 + x[0] * x[0] + x[1] * x[1]).powi(2)
    }

    /// Homogeneous coordinates (f_{p,0}, …, f_{p,n}) at x.
    pub fn homogeneous(&self, x: &[f64]) -> Vec<Complex64> {
        let z = Complex64::new(x[0], x[1]);
        (0..=self.n).map(|r| f_pr(self.p, self.n, r, z)).collect()
    }

    pub fn build(&self) -> Result<CasePackage> {
        self.build_with(&BuildOptions::default())
    }

    pub fn build_with(&self, opts: &BuildOptions) -> Result<CasePackage> {
        if self.n == 0 {
            return Err(constraint("n >= 1", 0.0));
        }
        if self.p > self.n {
            return Err(constraint("0 <= p <= n", self.p as f64));
        }
        let k = self.metric_constant();
        let surface = ConformalSurface::new(move |x| 0.5 * k.ln() - (1.0 + x[0] * x[0] + x[1] * x[1]).ln())
            .with_gradient(|x| {
                let s = 1.0 + x[0] * x[0] + x[1] * x[1];
                [-2.0 * x[0] / s, -2.0 * x[1] / s]
            })
            .with_step(opts.fd_step);
        let domain = Domain::Conformal(surface);
        let target = Arc::new(RiemannianModel::fubini_study(self.n)?);
        let (hom, hom1) = (self.clone(), self.clone());
        let map = SmoothMap::with_charts(
            domain.clone(),
            target,
            move |x, chart| {
                let f = hom.homogeneous(x);
                let lead = f[chart];
                DVector::from_iterator(
                    2 * (f.len() - 1),
                    f.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != chart)
                        .flat_map(|(_, v)| {
                            let w = v / lead;
                            [w.re, w.im]
                        }),
                )
            },
            move |x| {
                let f = hom1.homogeneous(x);
                (0..f.len()).fold(0, |b, j| if f[j].norm() > f[b].norm() { j } else { b })
            },
        );
        let map = Arc::new(opts.map(map));

        let rep = Arc::new(CliffordRep::new(2)?);
        let (p0, p1) = (self.psi0.clone(), self.psi1.clone());
        let (r1, r2) = (rep.clone(), rep.clone());
        let (q0, q1) = (p0.clone(), p1.clone());
        let psi = SpinorField::new(domain, rep, move |x| {
            let s = (1.0 + x[0] * x[0] + x[1] * x[1]).sqrt();
            (p0.clone() + r1.act(x, &p1).expect("n = 2")) * (1.0 / s)
        })?
        .with_partials(move |x, a| {
            let s = 1.0 + x[0] * x[0] + x[1] * x[1];
            let num = q0.clone() + r2.act(x, &q1).expect("n = 2");
            r2.apply(a, &q1) * s.powf(-0.5) - num * (x[a] * s.powf(-1.5))
        });
        let psi = opts.spinor(psi);
        let field = assemble_psi_tangent(map.clone(), psi.clone())?;
        Ok(CasePackage {
            name: "example2",
            map,
            field,
            psi: Some(psi),
            phi: None,
            chi: None,
            orientation: None,
            criteria: Some(CriteriaSet::HarmonicTwistor),
            expected: Expected {
                dirac_harmonic: true,
                harmonic_map: true,
                tension_norm: Some(0.0),
            },
            grid: Grid::new(vec![Axis::closed(-1.5, 1.5, 9), Axis::closed(-1.5, 1.5, 9)])?,
        })
    }
}
