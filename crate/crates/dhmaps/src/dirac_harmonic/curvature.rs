use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::twisted::{TwistedSpinorField, TwistedValue};
use crate::clifford::{inner_unchecked, CliffordRep, Spinor};
use crate::error::{Error, Result};
use crate::geometry::{Curvature, RiemannTensor, RiemannianModel};
use crate::maps::VectorFn;
use crate::spinors::SpinorField;

/// R(φ, ψ) at one point. `value` is the real part; the size of the dropped
/// imaginary part is reported through `max_imaginary`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTerm {
    pub value: DVector<f64>,
    pub max_imaginary: f64,
}

/// R(φ, ψ) = ½ R^i_{jkl} ⟨ψ^k, ∇φ^j·ψ^l⟩ ∂_i at x.
pub fn curvature_term(field: &TwistedSpinorField, x: &[f64]) -> Result<CurvatureTerm> {
    let map = field.map();
    map.domain().check(x)?;
    let chart = map.chart_at(x);
    let y = map.eval(x, chart);
    let t = map.frame_push(x, chart);
    let psi = field.eval(x, chart);
    curvature_term_at(map.target(), &y, &t, &psi, field.rep(), map.step())
}

/// Pointwise core of [`curvature_term`]: target point y, frame push
/// T (columns φ_*e_α) and twisted value ψ, all in target coordinates.
pub fn curvature_term_at(
    model: &RiemannianModel,
    y: &DVector<f64>,
    t: &DMatrix<f64>,
    psi: &TwistedValue,
    rep: &CliffordRep,
    h: f64,
) -> Result<CurvatureTerm> {
    let d = model.coord_dim();
    if psi.coord_dim() != d || t.nrows() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: psi.coord_dim(),
        });
    }
    let r = model.riemann(y.as_slice(), h)?;
    let gpsi = gamma_table(rep, psi);
    // I[k][j][l] = ⟨ψ^k, ∇φ^j·ψ^l⟩
    let mut ip = vec![Complex64::new(0.0, 0.0); d * d * d];
    for j in 0..d {
        for l in 0..d {
            let w = grad_dot(t.row(j).iter().copied(), &gpsi[l]);
            for k in 0..d {
                ip[(k * d + j) * d + l] = inner_unchecked(&psi.0[k], &w);
            }
        }
    }
    let mut out = vec![Complex64::new(0.0, 0.0); d];
    for (i, o) in out.iter_mut().enumerate() {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let c = r.get(i, j, k, l);
                    if c != 0.0 {
                        *o += ip[(k * d + j) * d + l] * c;
                    }
                }
            }
        }
        *o *= 0.5;
    }
    Ok(CurvatureTerm {
        value: DVector::from_iterator(d, out.iter().map(|z| z.re)),
        max_imaginary: out.iter().fold(0.0, |m, z| m.max(z.im.abs())),
    })
}

/// γ_α ψ^l for every α, l.
fn gamma_table(rep: &CliffordRep, psi: &TwistedValue) -> Vec<Vec<Spinor>> {
    psi.0
        .iter()
        .map(|s| (0..rep.n()).map(|a| rep.apply(a, s)).collect())
        .collect()
}

/// Σ_α c_α (γ_α ξ) from the precomputed γ_α ξ.
fn grad_dot(coeffs: impl Iterator<Item = f64>, gxi: &[Spinor]) -> Spinor {
    let mut w = Spinor::zeros(gxi[0].dim());
    for (c, g) in coeffs.zip(gxi) {
        if c != 0.0 {
            w += &(g.clone() * c);
        }
    }
    w
}

/// R(φ, ψ) evaluated in an arbitrary frame ε_a of the tangent space of
/// the target (columns of `frame`), then mapped back to coordinates.
pub fn curvature_term_in_frame(
    model: &RiemannianModel,
    y: &DVector<f64>,
    t: &DMatrix<f64>,
    psi: &TwistedValue,
    rep: &CliffordRep,
    frame: &DMatrix<f64>,
    h: f64,
) -> Result<CurvatureTerm> {
    let m = frame.ncols();
    if m != model.dim() || frame.nrows() != model.coord_dim() {
        return Err(Error::Missing("a frame of the target tangent space"));
    }
    let g = model.metric_at(y.as_slice())?;
    let gf = frame.transpose() * &g * frame;
    let gf_inv = gf.try_inverse().ok_or(Error::SingularMetric)?;
    let dual = &gf_inv * frame.transpose() * &g; // ε^a as covectors
    let coeffs: Vec<Spinor> = (0..m).map(|a| psi.pair(&dual.row(a).transpose())).collect();
    let frame_psi = TwistedValue(coeffs);
    let c = &dual * t; // dφ(e_α) = c^a_α ε_a
    let r: RiemannTensor = model.riemann(y.as_slice(), h)?;
    let rf = r.frame_components(frame);
    let cols: Vec<DVector<f64>> = (0..m).map(|a| frame.column(a).into_owned()).collect();
    let gpsi = gamma_table(rep, &frame_psi);
    let mut coef = vec![Complex64::new(0.0, 0.0); m];
    for b in 0..m {
        for cc in 0..m {
            for dd in 0..m {
                let rv = &dual * &rf[(b * m + cc) * m + dd];
                let w = grad_dot(c.row(b).iter().copied(), &gpsi[dd]);
                let ip = inner_unchecked(&frame_psi.0[cc], &w);
                for (a, o) in coef.iter_mut().enumerate() {
                    *o += ip * rv[a];
                }
            }
        }
    }
    let mut re = DVector::zeros(model.coord_dim());
    let mut im = DVector::zeros(model.coord_dim());
    for (a, z) in coef.iter().enumerate() {
        re += &cols[a] * (0.5 * z.re);
        im += &cols[a] * (0.5 * z.im);
    }
    Ok(CurvatureTerm {
        value: re,
        max_imaginary: im.amax(),
    })
}

/// Frame coefficients of the tangent and normal parts of R(φ, ψ) for
/// ψ = Σ_{α<k} e_α·Ψ⊗E_α + Σ_{α≥k} e_α·Φ⊗E_α + χ⊗ν in a space form of
/// curvature c.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitClosedForm {
    /// Coefficients along E_α.
    pub tangent: Vec<f64>,
    /// Coefficient along ν.
    pub normal: f64,
}

/// R^T = c[(n−k) Re⟨e_i·Φ,Ψ⟩ e_i − k Re⟨e_r·Φ,Ψ⟩ e_r],
/// R^N = −c Re⟨χ, kΨ + (n−k)Φ⟩ ν.
pub fn curvature_split_closed_form(
    rep: &CliffordRep,
    c: f64,
    k: usize,
    psi: &Spinor,
    phi: &Spinor,
    chi: &Spinor,
) -> Result<SplitClosedForm> {
    let n = rep.n();
    for s in [psi, phi, chi] {
        rep.check(s)?;
    }
    if k > n {
        return Err(Error::DimensionMismatch { expected: n, found: k });
    }
    let (nk, kf) = ((n - k) as f64, k as f64);
    let tangent = (0..n)
        .map(|a| {
            let re = inner_unchecked(&rep.apply(a, phi), psi).re;
            if a < k {
                c * nk * re
            } else {
                -c * kf * re
            }
        })
        .collect();
    let mix = psi.clone() * kf + phi.clone() * nk;
    Ok(SplitClosedForm {
        tangent,
        normal: -c * inner_unchecked(chi, &mix).re,
    })
}

/// Closed-form split of R(φ, ψ) at x for the adapted field of
/// [`super::assemble_psi_adapted`], as target vectors (tangent, normal).
pub fn curvature_term_splits(
    field: &TwistedSpinorField,
    x: &[f64],
    k: usize,
    psi: &SpinorField,
    phi: &SpinorField,
    chi: &SpinorField,
    normal: &VectorFn,
) -> Result<(DVector<f64>, DVector<f64>)> {
    let map = field.map();
    let Curvature::Constant(c) = map.target().curvature() else {
        return Err(Error::Unsupported("a constant-curvature target"));
    };
    let split = curvature_split_closed_form(field.rep(), c, k, &psi.value(x)?, &phi.value(x)?, &chi.value(x)?)?;
    let t = map.frame_push(x, map.chart_at(x));
    let tangent = &t * DVector::from_vec(split.tangent);
    Ok((tangent, normal(x) * split.normal))
}

/// Split a target vector at y into parts tangent and normal to the unit normal ν.
pub fn split_along_normal(
    model: &RiemannianModel,
    y: &DVector<f64>,
    v: &DVector<f64>,
    nu: &DVector<f64>,
) -> Result<(DVector<f64>, DVector<f64>)> {
    let normal = nu * model.inner(y.as_slice(), v, nu)?;
    Ok((v - &normal, normal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cases::Theorem3Params;
    use crate::dirac_harmonic::tangent_part;
    use crate::maps::NormalOrientation;

    #[test]
    fn tangent_type_field_has_no_curvature_term() {
        let case = Theorem3Params::reference().build().unwrap();
        let f = tangent_part(case.map.clone(), case.psi.clone().unwrap()).unwrap();
        for x in [[0.3, 0.2], [3.0, -0.9]] {
            let r = curvature_term(&f, &x).unwrap();
            assert!(r.value.amax() < 1e-10);
            assert!(r.max_imaginary < 1e-12);
        }
    }

    #[test]
    fn flat_target_has_no_curvature_term() {
        use crate::geometry::Domain;
        use crate::maps::SmoothMap;
        use std::sync::Arc;
        let rep = Arc::new(CliffordRep::new(2).unwrap());
        let map = Arc::new(SmoothMap::new(Domain::Flat { dim: 2 }, Arc::new(RiemannianModel::flat(3)), |x| {
            DVector::from_vec(vec![x[0], x[1] * x[0], x[1].sin()])
        }));
        let f = TwistedSpinorField::new(map, rep, |x, _| {
            TwistedValue(
                (0..3)
                    .map(|i| Spinor::from_pairs(&[(x[0] + i as f64, 0.2), (x[1], -1.0)]))
                    .collect(),
            )
        })
        .unwrap();
        assert_eq!(curvature_term(&f, &[0.4, 0.1]).unwrap().value.amax(), 0.0);
    }

    #[test]
    fn theorem3_splits() {
        // tangent part vanishes, normal part equals H = ξν
        let p = Theorem3Params::reference();
        let case = p.build().unwrap();
        let (psi, chi) = (case.psi.clone().unwrap(), case.chi.clone().unwrap());
        let NormalOrientation::Reference(nu) = case.orientation.clone().unwrap() else { panic!() };
        let ratio = -p.mu() / p.lambda();
        let (psi1, rep) = (psi.clone(), psi.rep().clone());
        let phi = SpinorField::new(case.map.domain().clone(), rep, move |x| psi1.value(x).unwrap() * ratio).unwrap();
        for x in [[0.5, 0.5], [5.0, -0.3]] {
            let (t, n) = curvature_term_splits(&case.field, &x, 1, &psi, &phi, &chi, &nu).unwrap();
            assert!(t.amax() < 1e-14);
            assert!((&n - nu(&x) * p.xi()).amax() < 1e-12);
            let direct = curvature_term(&case.field, &x).unwrap().value;
            assert!((direct - (t + n)).amax() < 1e-10);
        }
    }

    #[test]
    fn normal_part_vanishes_for_orthogonal_chi() {
        let rep = CliffordRep::new(2).unwrap();
        let psi = Spinor::from_pairs(&[(1.0, 0.0), (0.0, 0.0)]);
        let chi = Spinor::from_pairs(&[(0.0, 1.0), (2.0, 0.0)]);
        let s = curvature_split_closed_form(&rep, -1.0, 1, &psi, &psi, &chi).unwrap();
        assert_eq!(s.normal, 0.0);
        assert!(curvature_split_closed_form(&rep, -1.0, 3, &psi, &psi, &chi).is_err());
    }

    #[test]
    fn splits_need_constant_curvature() {
        let case = crate::cases::Example1Params::reference().build().unwrap();
        let psi = case.psi.clone().unwrap();
        let nu: VectorFn = std::sync::Arc::new(|_: &[f64]| DVector::zeros(4));
        let err = curvature_term_splits(&case.field, &[0.0, 0.0], 1, &psi, &psi, &psi, &nu).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }

    #[test]
    fn split_along_normal_recombines() {
        let case = Theorem3Params::reference().build().unwrap();
        let x = [0.9, 0.4];
        let y = case.map.value(&x).unwrap();
        let NormalOrientation::Reference(nu) = case.orientation.clone().unwrap() else { panic!() };
        let v = case.map.frame_push(&x, 0).column(0) * 2.0 + nu(&x) * -0.7;
        let (t, n) = split_along_normal(case.map.target(), &y, &v, &nu(&x)).unwrap();
        assert!((&n + nu(&x) * 0.7).amax() < 1e-14);
        assert!((t + n - v).amax() < 1e-15);
    }
}
