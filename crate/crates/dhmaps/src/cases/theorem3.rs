//! S¹(r) × H¹(√(R²+r²)) in H³(R) with the two-principal-curvature field.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{BuildOptions, CasePackage, Expected};
use crate::clifford::{CliffordRep, Spinor};
use crate::dirac_harmonic::{assemble_psi_bicurved, CriteriaSet};
use crate::error::{constraint, Error, Result};
use crate::geometry::{Domain, RiemannianModel, SpaceFormKind};
use crate::grid::{Axis, Grid};
use crate::maps::{NormalOrientation, SmoothMap, VectorFn};
use crate::spinors::SpinorField;

const CONDITION_TOL: f64 = 1e-10;

/// Parameters of the family. `c[k + m]` and `d[k + m]` hold c_k, d_k
/// for k = −m..=m.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem3Params {
    pub big_r: f64,
    pub r: f64,
    pub m: usize,
    pub a: Complex64,
    pub b: Complex64,
    pub c: Vec<Complex64>,
    pub d: Vec<Complex64>,
}

fn cplx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl Theorem3Params {
    /// R = r = 1, m = 1, a = 1, b = 0, d₀ = 3√2/2, d±1 = 0, c±1 = 1 + i.
    pub fn reference() -> Self {
        let zero = cplx(0.0, 0.0);
        Theorem3Params {
            big_r: 1.0,
            r: 1.0,
            m: 1,
            a: cplx(1.0, 0.0),
            b: zero,
            c: vec![cplx(1.0, 1.0), zero, cplx(1.0, 1.0)],
            d: vec![zero, cplx(1.5 * 2f64.sqrt(), 0.0), zero],
        }
    }

    /// Reference data with d₀ doubled, which breaks the d₀ condition.
    pub fn broken_d0() -> Self {
        let mut p = Self::reference();
        let m = p.m;
        p.d[m] *= 2.0;
        p
    }

    fn rho(&self) -> f64 {
        (self.big_r * self.big_r + self.r * self.r).sqrt()
    }

    /// Principal curvature along ∂_θ.
    pub fn lambda(&self) -> f64 {
        self.rho() / (self.r * self.big_r)
    }

    /// Principal curvature along ∂_t.
    pub fn mu(&self) -> f64 {
        self.r / (self.big_r * self.rho())
    }

    /// Mean curvature (λ + μ)/2.
    pub fn xi(&self) -> f64 {
        let (br, r) = (self.big_r, self.r);
        (br * br + 2.0 * r * r) / (2.0 * br * r * self.rho())
    }

    pub fn curvature(&self) -> f64 {
        -1.0 / (self.big_r * self.big_r)
    }

    fn coeff(v: &[Complex64], m: usize, k: i64) -> Complex64 {
        v[(k + m as i64) as usize]
    }

    /// Re(a d̄₀ + b̄ c₀) minus its required value.
    pub fn d0_condition_residual(&self) -> f64 {
        let (a, b, m) = (self.a, self.b, self.m);
        let lhs = (a * Self::coeff(&self.d, m, 0).conj() + b.conj() * Self::coeff(&self.c, m, 0)).re;
        let (br, r) = (self.big_r, self.r);
        lhs - self.rho() * (br * br + 2.0 * r * r) / (2.0 * r * br)
    }

    /// max over k ≠ 0 of |a d̄_k + b̄ c_{−k}|.
    pub fn mode_condition_residual(&self) -> f64 {
        let m = self.m as i64;
        (1..=m)
            .flat_map(|k| [k, -k])
            .map(|k| (self.a * Self::coeff(&self.d, self.m, k).conj() + self.b.conj() * Self::coeff(&self.c, self.m, -k)).norm())
            .fold(0.0, f64::max)
    }

    fn check_shape(&self) -> Result<()> {
        if !(self.big_r > 0.0 && self.big_r.is_finite()) {
            return Err(Error::NonPositiveRadius(self.big_r));
        }
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(Error::NonPositiveRadius(self.r));
        }
        let len = 2 * self.m + 1;
        for v in [&self.c, &self.d] {
            if v.len() != len {
                return Err(Error::DimensionMismatch { expected: len, found: v.len() });
            }
        }
        Ok(())
    }

    /// Validate both coefficient conditions, then assemble.
    pub fn build(&self) -> Result<CasePackage> {
        self.build_with(&BuildOptions::default())
    }

    pub fn build_with(&self, opts: &BuildOptions) -> Result<CasePackage> {
        self.check_shape()?;
        let scale = self.d0_condition_residual().abs() / self.xi().max(1.0);
        if !(scale <= CONDITION_TOL) {
            return Err(constraint("Re(a conj(d_0) + conj(b) c_0) = sqrt(R^2+r^2)(R^2+2r^2)/(2rR)", self.d0_condition_residual()));
        }
        let modes = self.mode_condition_residual();
        if !(modes <= CONDITION_TOL) {
            return Err(constraint("a conj(d_k) + conj(b) c_{-k} = 0", modes));
        }
        self.assemble(opts)
    }

    /// Assemble without checking the coefficient conditions, for
    /// negative controls.
    pub fn build_unchecked(&self, opts: &BuildOptions) -> Result<CasePackage> {
        self.check_shape()?;
        self.assemble(opts)
    }

    /// (g_k(t), g_k′(t)) for the θ-Fourier mode k of the lower component.
    pub fn g_mode(&self, k: i64, t: f64) -> (Complex64, Complex64) {
        let ck = Self::coeff(&self.c, self.m, k);
        if k == 0 {
            let slope = Complex64::i() * self.lambda() * self.a;
            (slope * t + ck, slope)
        } else {
            let s = k as f64 / self.r;
            let g = ck * (s * t).exp();
            (g, g * s)
        }
    }

    fn assemble(&self, opts: &BuildOptions) -> Result<CasePackage> {
        let (br, r, rho) = (self.big_r, self.r, self.rho());
        let domain = Domain::Cylinder { radius: r };
        let target = Arc::new(RiemannianModel::space_form(SpaceFormKind::Hyperbolic, 3, br)?);
        let map = SmoothMap::new(domain.clone(), target, move |x| {
            let (th, t) = (x[0] / r, x[1] / rho);
            DVector::from_vec(vec![r * th.cos(), r * th.sin(), rho * t.sinh(), rho * t.cosh()])
        })
        .with_jacobian(move |x| {
            let (th, t) = (x[0] / r, x[1] / rho);
            DMatrix::from_column_slice(4, 2, &[-th.sin(), th.cos(), 0.0, 0.0, 0.0, 0.0, t.cosh(), t.sinh()])
        });
        let map = Arc::new(opts.map(map));
        let normal: VectorFn = Arc::new(move |x: &[f64]| {
            let (th, t) = (x[0] / r, x[1] / rho);
            let s = rho / br;
            -DVector::from_vec(vec![s * th.cos(), s * th.sin(), r / br * t.sinh(), r / br * t.cosh()])
        });

        let rep = Arc::new(CliffordRep::new(2)?);
        let lambda = self.lambda();
        let (a, b) = (self.a, self.b);
        let (cs, ds) = (self.c.clone(), self.d.clone());
        let modes = move |x: &[f64]| mode_terms(&cs, &ds, r, x);
        let iv = Complex64::i() * lambda;
        let value = {
            let modes = modes.clone();
            move |x: &[f64]| {
                let (mut f, mut g) = (iv * b * x[1], iv * a * x[1]);
                for (_, up, low) in modes(x) {
                    f += up;
                    g += low;
                }
                Spinor::new(vec![f, g])
            }
        };
        let partials = move |x: &[f64], alpha: usize| {
            let (mut f, mut g) = if alpha == 0 {
                (cplx(0.0, 0.0), cplx(0.0, 0.0))
            } else {
                (iv * b, iv * a)
            };
            for (s, up, low) in modes(x) {
                if alpha == 0 {
                    f += up * cplx(0.0, s);
                    g += low * cplx(0.0, s);
                } else {
                    f += up * -s;
                    g += low * s;
                }
            }
            Spinor::new(vec![f, g])
        };
        let psi = opts.spinor(SpinorField::new(domain.clone(), rep.clone(), value)?.with_partials(partials));
        let chi = opts.spinor(SpinorField::constant(domain, rep, Spinor::new(vec![a, b]))?);

        let mu = self.mu();
        let field = assemble_psi_bicurved(map.clone(), psi.clone(), chi.clone(), lambda, mu, normal.clone())?;
        Ok(CasePackage {
            name: "theorem3",
            map,
            field,
            psi: Some(psi),
            phi: None,
            chi: Some(chi),
            orientation: Some(NormalOrientation::Reference(normal)),
            criteria: Some(CriteriaSet::Bicurved {
                lambda,
                mu,
                c: self.curvature(),
            }),
            expected: Expected {
                dirac_harmonic: true,
                harmonic_map: false,
                tension_norm: Some(2.0 * self.xi()),
            },
            grid: Grid::new(vec![Axis::periodic(0.0, 2.0 * PI * r, 32), Axis::closed(-1.0, 1.0, 16)])?,
        })
    }
}

/// (k/r, d_k e^{k(−t+iθ)/r}, c_k e^{k(t+iθ)/r}) for k = −m..=m.
fn mode_terms(c: &[Complex64], d: &[Complex64], r: f64, x: &[f64]) -> Vec<(f64, Complex64, Complex64)> {
    let m = (c.len() / 2) as i64;
    (-m..=m)
        .map(|k| {
            let s = k as f64 / r;
            let i = (k + m) as usize;
            (s, (cplx(-x[1], x[0]) * s).exp() * d[i], (cplx(x[1], x[0]) * s).exp() * c[i])
        })
        .collect()
}
