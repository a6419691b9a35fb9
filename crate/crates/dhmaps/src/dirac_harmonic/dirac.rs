use nalgebra::{DMatrix, DVector};

use super::twisted::{TwistedSpinorField, TwistedValue};
use crate::clifford::Spinor;
use crate::error::{constraint, Error, Result};
use crate::fd;
use crate::maps::NormalOrientation;

/// D̸ψ = Σ_β e_β·∇̃_{e_β}ψ at x.
///
/// ∇̃ is the spin connection on the spinor factor and, on the vector
/// factor, the tangential part of the ambient derivative (embedded
/// targets) or the pulled-back Christoffel connection (chart targets).
pub fn twisted_dirac(field: &TwistedSpinorField, x: &[f64]) -> Result<TwistedValue> {
    let map = field.map();
    let domain = map.domain();
    domain.check(x)?;
    let rep = field.rep();
    let chart = map.chart_at(x);
    let y = map.eval(x, chart);
    let model = map.target();
    model.check_point(y.as_slice())?;
    let h = map.step();
    let scale = domain.frame_scale(x);
    let omega = domain.spin_connection(x);
    let psi = field.eval(x, chart);
    let christoffel = match model.ambient() {
        Some(_) => None,
        None => Some((model.christoffels(y.as_slice(), h)?, map.frame_push(x, chart))),
    };
    let d = model.coord_dim();
    let mut out = TwistedValue::zeros(d, rep.fiber_dim());
    for beta in 0..domain.dim() {
        let mut nabla = fd::central(|p| field.eval(p, chart), x, beta, h) * scale;
        if let Some(w) = omega {
            let e12 = TwistedValue(psi.0.iter().map(|s| rep.apply(0, &rep.apply(1, s))).collect());
            nabla = nabla + e12 * (0.5 * w[beta]);
        }
        match &christoffel {
            None => nabla = nabla.project(model, &y),
            Some((gamma, t)) => {
                for a in 0..d {
                    for b in 0..d {
                        let mut coef = 0.0;
                        for c in 0..d {
                            coef += gamma.get(a, b, c) * t[(c, beta)];
                        }
                        if coef != 0.0 {
                            nabla.0[a] += &(psi.0[b].clone() * coef);
                        }
                    }
                }
            }
        }
        out = out + nabla.gamma(rep, beta);
    }
    Ok(out)
}

/// D̸ψ for a hypersurface written in the adapted frame {E_α = φ_*e_α, ν}.
///
/// With ψ = Σ_α ψ^α ⊗ E_α + ψ^ν ⊗ ν and a flat domain,
///
/// ```text
/// D̸ψ = Σ_i ∂̸ψ^i ⊗ ε_i − Σ h_{βα} e_β·ψ^ν ⊗ E_α + Σ h_{βα} e_β·ψ^α ⊗ ν
/// ```
///
/// where h_{βα} = ⟨B(e_β, e_α), ν⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedDirac {
    /// Σ_i ∂̸ψ^i ⊗ ε_i
    pub intrinsic: TwistedValue,
    /// −Σ h_{βα} e_β·ψ^ν ⊗ E_α, from ∇ν = −A.
    pub normal_to_tangent: TwistedValue,
    /// Σ h_{βα} e_β·ψ^α ⊗ ν, from the normal part of ∇E_α.
    pub tangent_to_normal: TwistedValue,
}

impl AdaptedDirac {
    pub fn total(&self) -> TwistedValue {
        self.intrinsic.clone() + self.normal_to_tangent.clone() + self.tangent_to_normal.clone()
    }
}

/// Adapted-frame expansion of D̸ψ at x; an independent route to
/// [`twisted_dirac`] for hypersurfaces over flat domains with an
/// isometric coordinate frame.
pub fn dirac_adapted_expansion(
    field: &TwistedSpinorField,
    x: &[f64],
    orientation: &NormalOrientation,
) -> Result<AdaptedDirac> {
    let map = field.map();
    let domain = map.domain();
    if !domain.is_flat() {
        return Err(Error::Unsupported("a flat domain with parallel coordinate frame"));
    }
    let model = map.target();
    let ambient = model
        .ambient()
        .ok_or(Error::Unsupported("an embedded target"))?;
    let n = domain.dim();
    let rep = field.rep();
    let chart = map.chart_at(x);
    let t = map.frame_push(x, chart);
    let gram = t.transpose() * DMatrix::from_diagonal(&DVector::from_column_slice(ambient.signature())) * &t;
    let off = (gram - DMatrix::identity(n, n)).amax();
    if off > 1e-6 {
        return Err(constraint("isometric coordinate frame", off));
    }
    let shape = map.shape_data(x, orientation)?;
    let hmat = (&shape.second_fundamental_form + shape.second_fundamental_form.transpose()) * 0.5;
    let nu = shape.normal.clone();

    // adapted components ψ^α, ψ^ν as spinor fields of p
    let adapted = |p: &[f64]| -> Result<Vec<Spinor>> {
        let psi = field.eval(p, chart);
        let tp = map.frame_push(p, chart);
        let np = map.normal(p, orientation)?;
        let mut v: Vec<Spinor> = (0..n).map(|a| psi.pair(&ambient.lower(&tp.column(a).into_owned()))).collect();
        v.push(psi.pair(&ambient.lower(&np)));
        Ok(v)
    };
    let h = map.step();
    let here = adapted(x)?;
    let mut frame: Vec<DVector<f64>> = (0..n).map(|a| t.column(a).into_owned()).collect();
    frame.push(nu.clone());
    let d = model.coord_dim();
    let fib = rep.fiber_dim();

    let mut intrinsic = TwistedValue::zeros(d, fib);
    for beta in 0..n {
        let plus = adapted(&fd::shifted(x, beta, h))?;
        let minus = adapted(&fd::shifted(x, beta, -h))?;
        for (i, e) in frame.iter().enumerate() {
            let di = (plus[i].clone() - minus[i].clone()) * (0.5 / h);
            intrinsic.add_outer(&rep.apply(beta, &di), e);
        }
    }
    let psi_nu = &here[n];
    let mut normal_to_tangent = TwistedValue::zeros(d, fib);
    let mut tangent_to_normal = TwistedValue::zeros(d, fib);
    for alpha in 0..n {
        for beta in 0..n {
            let hba = hmat[(beta, alpha)];
            if hba == 0.0 {
                continue;
            }
            normal_to_tangent.add_outer(&(rep.apply(beta, psi_nu) * -hba), &frame[alpha]);
            tangent_to_normal.add_outer(&(rep.apply(beta, &here[alpha]) * hba), &nu);
        }
    }
    Ok(AdaptedDirac {
        intrinsic,
        normal_to_tangent,
        tangent_to_normal,
    })
}

/// Tangent and normal parts of a twisted value along the unit normal ν.
pub fn split_twisted(
    value: &TwistedValue,
    nu: &DVector<f64>,
    lower: &DVector<f64>,
) -> (TwistedValue, TwistedValue) {
    let normal = TwistedValue::outer(&value.pair(lower), nu);
    (value.clone() - normal.clone(), normal)
}
