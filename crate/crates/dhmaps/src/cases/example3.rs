//! The horosphere ℝⁿ → Hⁿ⁺¹(−1), u ↦ (u, |u|²/2, |u|²/2 + 1), with
//! Ψ(X) = Ψ₀ + X·Φ/(n−2) and constant Φ.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::{BuildOptions, CasePackage, Expected};
use crate::clifford::{inner_unchecked, CliffordRep, Spinor};
use crate::dirac_harmonic::{assemble_psi_hypersurface, CriteriaSet};
use crate::error::{constraint, Error, Result};
use crate::geometry::{Domain, RiemannianModel, SpaceFormKind};
use crate::grid::{Axis, Grid};
use crate::maps::{NormalOrientation, SmoothMap, VectorFn};
use crate::spinors::SpinorField;

const MAX_N: usize = 5;
const BALANCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Example3Params {
    pub n: usize,
    pub phi: Spinor,
    pub psi0: Spinor,
}

impl Example3Params {
    /// n = 3, Φ = (1, 0), Ψ₀ = (½, 0).
    pub fn reference() -> Self {
        Example3Params {
            n: 3,
            phi: Spinor::from_pairs(&[(1.0, 0.0), (0.0, 0.0)]),
            psi0: Spinor::from_pairs(&[(0.5, 0.0), (0.0, 0.0)]),
        }
    }

    /// Reference data in dimension n with Φ = e₁ and Ψ₀ = ½e₁ in Δₙ.
    pub fn reference_in(n: usize) -> Result<Self> {
        let dim = CliffordRep::new(n)?.fiber_dim();
        let mut phi = Spinor::zeros(dim);
        let mut psi0 = Spinor::zeros(dim);
        phi.0[0].re = 1.0;
        psi0.0[0].re = 0.5;
        Ok(Example3Params { n, phi, psi0 })
    }

    pub fn build(&self) -> Result<CasePackage> {
        self.build_with(&BuildOptions::default())
    }

    pub fn build_with(&self, opts: &BuildOptions) -> Result<CasePackage> {
        let n = self.n;
        if !(3..=MAX_N).contains(&n) {
            return Err(Error::DimensionOutOfRange { n, max: MAX_N });
        }
        let rep = Arc::new(CliffordRep::new(n)?);
        rep.check(&self.phi)?;
        rep.check(&self.psi0)?;
        let balance = inner_unchecked(&self.phi, &self.psi0).re - 0.5;
        if !(balance.abs() <= BALANCE_TOL) {
            return Err(constraint("Re<Phi, Psi_0> = 1/2", balance));
        }

        let domain = Domain::Flat { dim: n };
        let target = Arc::new(RiemannianModel::space_form(SpaceFormKind::Hyperbolic, n + 1, 1.0)?);
        let map = SmoothMap::new(domain.clone(), target, |u| {
            let s = half_square(u);
            let mut x = u.to_vec();
            x.extend([s, s + 1.0]);
            DVector::from_vec(x)
        })
        .with_jacobian(move |u| {
            let mut j = DMatrix::zeros(n + 2, n);
            for i in 0..n {
                j[(i, i)] = 1.0;
                j[(n, i)] = u[i];
                j[(n + 1, i)] = u[i];
            }
            j
        });
        let map = Arc::new(opts.map(map));
        let normal: VectorFn = Arc::new(|u: &[f64]| {
            let s = half_square(u);
            let mut v: Vec<f64> = u.iter().map(|a| -a).collect();
            v.extend([1.0 - s, -s]);
            DVector::from_vec(v)
        });

        let k = 1.0 / (n as f64 - 2.0);
        let (r1, r2) = (rep.clone(), rep.clone());
        let (f1, f2, p0) = (self.phi.clone(), self.phi.clone(), self.psi0.clone());
        let psi = SpinorField::new(domain.clone(), rep.clone(), move |x| {
            p0.clone() + r1.act(x, &f1).expect("dimension checked") * k
        })?
        .with_partials(move |_, a| r2.apply(a, &f2) * k);
        let psi = opts.spinor(psi);
        let phi = opts.spinor(SpinorField::constant(domain, rep, self.phi.clone())?);
        let field = assemble_psi_hypersurface(map.clone(), psi.clone(), phi.clone(), normal.clone())?;
        Ok(CasePackage {
            name: "example3",
            map,
            field,
            psi: Some(psi),
            phi: Some(phi),
            chi: None,
            orientation: Some(NormalOrientation::Reference(normal)),
            criteria: Some(CriteriaSet::Umbilical { c: -1.0 }),
            expected: Expected {
                dirac_harmonic: true,
                harmonic_map: false,
                tension_norm: Some(n as f64),
            },
            grid: Grid::new(vec![Axis::closed(-1.0, 1.0, 9); n])?,
        })
    }
}

fn half_square(u: &[f64]) -> f64 {
    u.iter().map(|v| v * v).sum::<f64>() / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_relations() {
        let case = Example3Params::reference().build().unwrap();
        let (psi, phi) = (case.psi.unwrap(), case.phi.unwrap());
        let x = [5.0, -2.0, 1.0];
        assert!((psi.dirac(&x).unwrap() + phi.value(&x).unwrap() * 3.0).norm() < 1e-12);
        assert!(psi.twistor_defect(&x).unwrap() < 1e-12);
        assert_eq!(inner_unchecked(&phi.value(&x).unwrap(), &psi.value(&x).unwrap()).re, 0.5);
    }

    #[test]
    fn normal_component_is_phi() {
        let p = Example3Params::reference();
        let case = p.build().unwrap();
        let x = [0.4, 0.1, -0.7];
        let v = case.field.value(&x).unwrap();
        let y = case.map.value(&x).unwrap();
        let amb = case.map.target().ambient().unwrap().clone();
        let NormalOrientation::Reference(nu) = case.orientation.unwrap() else { panic!() };
        let lower = amb.lower(&nu(&x));
        assert!((v.pair(&lower) - p.phi.clone()).norm() < 1e-12);
        assert!(amb.q(&y, &y) + 1.0 < 1e-12);
    }

    #[test]
    fn preconditions() {
        let mut p = Example3Params::reference();
        p.psi0 = Spinor::from_pairs(&[(0.0, 0.5), (0.0, 0.0)]);
        assert!(matches!(p.build(), Err(Error::Constraint { .. })));
        let p = Example3Params { n: 2, ..Example3Params::reference() };
        assert!(matches!(p.build(), Err(Error::DimensionOutOfRange { .. })));
        for n in 3..=5 {
            Example3Params::reference_in(n).unwrap().build().unwrap();
        }
    }
}
