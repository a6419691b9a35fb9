//! Flat tori in ℂPⁿ⁻¹ from unit-modulus frequencies, with twistor spinors
//! Ψ(z) = Ψ₀ − ½ z·Ψ₁ on ℝ².

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{BuildOptions, CasePackage, Expected};
use crate::clifford::{CliffordRep, Spinor};
use crate::dirac_harmonic::{assemble_psi_tangent, CriteriaSet};
use crate::error::Result;
use crate::geometry::{Domain, RiemannianModel};
use crate::grid::{Axis, Grid};
use crate::maps::{conformality_defect, validate_horizontal_data, SmoothMap};
use crate::spinors::SpinorField;

#[derive(Debug, Clone, PartialEq)]
pub struct Example1Params {
    pub r: Vec<f64>,
    pub mu: Vec<Complex64>,
    pub psi0: Spinor,
    pub psi1: Spinor,
}

impl Example1Params {
    /// r = (½, ½, √2/2), μ = (e^{iπ/4}, e^{−iπ/4}, −1): harmonic but not conformal.
    pub fn reference() -> Self {
        let q = std::f64::consts::FRAC_PI_4;
        Example1Params {
            r: vec![0.5, 0.5, 0.5 * 2f64.sqrt()],
            mu: vec![Complex64::from_polar(1.0, q), Complex64::from_polar(1.0, -q), Complex64::new(-1.0, 0.0)],
            psi0: Spinor::from_pairs(&[(1.0, 0.0), (0.0, 0.5)]),
            psi1: Spinor::from_pairs(&[(0.3, -0.2), (0.7, 0.0)]),
        }
    }

    /// Σ r_j μ_j²
    pub fn conformality_defect(&self) -> Result<Complex64> {
        conformality_defect(&self.r, &self.mu)
    }

    pub fn build(&self) -> Result<CasePackage> {
        self.build_with(&BuildOptions::default())
    }

    /// Homogeneous amplitudes √r_j; the conditions on (r, μ) are checked first.
    pub fn build_with(&self, opts: &BuildOptions) -> Result<CasePackage> {
        validate_horizontal_data(&self.r, &self.mu)?;
        self.assemble(opts, 0.5)
    }

    /// Amplitudes r_j taken literally. Not harmonic in general; kept as a
    /// negative control.
    pub fn build_literal_amplitudes(&self, opts: &BuildOptions) -> Result<CasePackage> {
        validate_horizontal_data(&self.r, &self.mu)?;
        self.assemble(opts, 1.0)
    }

    fn assemble(&self, opts: &BuildOptions, power: f64) -> Result<CasePackage> {
        let amp: Vec<f64> = self.r.iter().map(|v| v.powf(power)).collect();
        // all |Z_j| are constant, so one affine chart covers the image
        let j0 = (0..amp.len()).fold(0, |b, j| if amp[j] > amp[b] { j } else { b });
        let others: Vec<usize> = (0..amp.len()).filter(|&j| j != j0).collect();
        let dim = others.len();
        // w_j = (a_j/a_{j0}) exp(i(θ_j − θ_{j0})), θ_j = 2 Im(μ_j z)
        let (ratio, fx, fy): (Vec<f64>, Vec<f64>, Vec<f64>) = {
            let mu0 = self.mu[j0];
            let mut ratio = Vec::new();
            let mut fx = Vec::new();
            let mut fy = Vec::new();
            for &j in &others {
                ratio.push(amp[j] / amp[j0]);
                fx.push(2.0 * (self.mu[j].im - mu0.im));
                fy.push(2.0 * (self.mu[j].re - mu0.re));
            }
            (ratio, fx, fy)
        };
        let w = {
            let (ratio, fx, fy) = (ratio.clone(), fx.clone(), fy.clone());
            move |x: &[f64]| -> Vec<Complex64> {
                (0..ratio.len())
                    .map(|i| Complex64::from_polar(ratio[i], fx[i] * x[0] + fy[i] * x[1]))
                    .collect()
            }
        };
        let w1 = w.clone();
        let domain = Domain::Flat { dim: 2 };
        let target = Arc::new(RiemannianModel::fubini_study(dim)?);
        let map = SmoothMap::new(domain.clone(), target, move |x| {
            DVector::from_iterator(2 * dim, w(x).into_iter().flat_map(|c| [c.re, c.im]))
        })
        .with_jacobian(move |x| {
            let ws = w1(x);
            let mut j = DMatrix::zeros(2 * dim, 2);
            for (i, wi) in ws.iter().enumerate() {
                for (col, f) in [fx[i], fy[i]].into_iter().enumerate() {
                    let d = Complex64::i() * f * wi;
                    j[(2 * i, col)] = d.re;
                    j[(2 * i + 1, col)] = d.im;
                }
            }
            j
        });
        let map = Arc::new(opts.map(map));

        let rep = Arc::new(CliffordRep::new(2)?);
        let (p0, p1) = (self.psi0.clone(), self.psi1.clone());
        let (r1, r2, q1) = (rep.clone(), rep.clone(), p1.clone());
        let psi = SpinorField::new(domain, rep, move |x| p0.clone() - r1.act(x, &p1).expect("n = 2") * 0.5)?
            .with_partials(move |_, a| r2.apply(a, &q1) * -0.5);
        let psi = opts.spinor(psi);
        let field = assemble_psi_tangent(map.clone(), psi.clone())?;
        Ok(CasePackage {
            name: "example1",
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
            grid: Grid::new(vec![Axis::closed(-1.0, 1.0, 9), Axis::closed(-1.0, 1.0, 9)])?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn reference_defect() {
        let d = Example1Params::reference().conformality_defect().unwrap();
        assert!((d.re - 0.5 * 2f64.sqrt()).abs() < 1e-12 && d.im.abs() < 1e-12);
    }

    #[test]
    fn bad_normalization_rejected() {
        let mut p = Example1Params::reference();
        // Σ r_j² = 0.9
        p.r[2] = 0.4f64.sqrt();
        match p.build() {
            Err(Error::Constraint { name, .. }) => assert_eq!(name, "sum r_j^2 = 1"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn constant_spinor_when_psi1_vanishes() {
        let mut p = Example1Params::reference();
        p.psi1 = Spinor::zeros(2);
        let case = p.build().unwrap();
        let psi = case.psi.unwrap();
        assert_eq!(psi.twistor_defect(&[0.3, -0.4]).unwrap(), 0.0);
        assert_eq!(psi.value(&[0.3, -0.4]).unwrap(), p.psi0);
    }

    #[test]
    fn jacobian_matches_differences() {
        let p = Example1Params::reference();
        let exact = p.build().unwrap();
        let fd = p.build_with(&BuildOptions { analytic: false, ..Default::default() }).unwrap();
        let x = [0.37, -0.21];
        let c = exact.map.chart_at(&x);
        assert!((exact.map.jacobian(&x, c) - fd.map.jacobian(&x, c)).amax() < 1e-7);
    }

    #[test]
    fn psi_at_origin_pairs_with_differential() {
        let case = Example1Params::reference().build().unwrap();
        let x = [0.0, 0.0];
        let v = case.field.value(&x).unwrap();
        let rep = case.field.rep().clone();
        let t = case.map.frame_push(&x, 0);
        let p0 = Example1Params::reference().psi0;
        for a in 0..v.coord_dim() {
            let expect = rep.apply(0, &p0) * t[(a, 0)] + rep.apply(1, &p0) * t[(a, 1)];
            assert!((v.0[a].clone() - expect).norm() < 1e-14);
        }
    }
}
