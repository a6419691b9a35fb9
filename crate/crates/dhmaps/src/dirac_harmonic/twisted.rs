use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::clifford::{inner_unchecked, CliffordRep, Spinor};
use crate::error::{constraint, Error, Result};
use crate::geometry::RiemannianModel;
use crate::maps::{NormalOrientation, SmoothMap, VectorFn};
use crate::spinors::SpinorField;

/// A value of ΣM ⊗ φ⁻¹TN at one point: one spinor per target coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedValue(pub Vec<Spinor>);

impl TwistedValue {
    pub fn zeros(coord_dim: usize, fiber_dim: usize) -> Self {
        TwistedValue(vec![Spinor::zeros(fiber_dim); coord_dim])
    }

    /// s ⊗ v
    pub fn outer(s: &Spinor, v: &DVector<f64>) -> Self {
        TwistedValue(v.iter().map(|&a| s.clone() * a).collect())
    }

    pub fn coord_dim(&self) -> usize {
        self.0.len()
    }

    pub fn add_outer(&mut self, s: &Spinor, v: &DVector<f64>) {
        for (c, &a) in self.0.iter_mut().zip(v.iter()) {
            if a != 0.0 {
                *c += &(s.clone() * a);
            }
        }
    }

    /// γ_α applied in every component.
    pub fn gamma(&self, rep: &CliffordRep, alpha: usize) -> Self {
        TwistedValue(self.0.iter().map(|s| rep.apply(alpha, s)).collect())
    }

    /// Σ_A w_A ψ^A for a covector w.
    pub fn pair(&self, w: &DVector<f64>) -> Spinor {
        let mut out = Spinor::zeros(self.0[0].dim());
        for (c, &a) in self.0.iter().zip(w.iter()) {
            if a != 0.0 {
                out += &(c.clone() * a);
            }
        }
        out
    }

    /// Tangent projection at y, component by component.
    pub fn project(&self, model: &RiemannianModel, y: &DVector<f64>) -> Self {
        match model.ambient() {
            None => self.clone(),
            Some(a) => {
                let qy = a.lower(y);
                let s = self.pair(&qy) * (1.0 / a.q(y, y));
                let mut out = self.clone();
                for (c, &ya) in out.0.iter_mut().zip(y.iter()) {
                    *c -= &(s.clone() * ya);
                }
                out
            }
        }
    }

    /// Re Σ g_AB ⟨ψ^A, φ^B⟩
    pub fn real_inner(&self, other: &TwistedValue, g: &DMatrix<f64>) -> f64 {
        let d = self.0.len();
        let mut s = 0.0;
        for a in 0..d {
            for b in 0..d {
                if g[(a, b)] != 0.0 {
                    s += g[(a, b)] * inner_unchecked(&self.0[a], &other.0[b]).re;
                }
            }
        }
        s
    }

    /// √|Re Σ g_AB ⟨ψ^A, ψ^B⟩|
    pub fn norm(&self, g: &DMatrix<f64>) -> f64 {
        self.real_inner(self, g).abs().sqrt()
    }

    /// Plain euclidean norm of all components.
    pub fn coefficient_norm(&self) -> f64 {
        self.0.iter().map(|s| s.norm().powi(2)).sum::<f64>().sqrt()
    }
}

impl Add for TwistedValue {
    type Output = TwistedValue;
    fn add(mut self, rhs: TwistedValue) -> TwistedValue {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a += b;
        }
        self
    }
}

impl Sub for TwistedValue {
    type Output = TwistedValue;
    fn sub(mut self, rhs: TwistedValue) -> TwistedValue {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a -= b;
        }
        self
    }
}

impl Mul<f64> for TwistedValue {
    type Output = TwistedValue;
    fn mul(self, rhs: f64) -> TwistedValue {
        TwistedValue(self.0.into_iter().map(|s| s * rhs).collect())
    }
}

type ComponentFn = Arc<dyn Fn(&[f64], usize) -> TwistedValue + Send + Sync>;

/// Section of ΣM ⊗ φ⁻¹TN, stored in target coordinates (ambient
/// coordinates for embedded targets).
#[derive(Clone)]
pub struct TwistedSpinorField {
    map: Arc<SmoothMap>,
    rep: Arc<CliffordRep>,
    comps: ComponentFn,
}

impl fmt::Debug for TwistedSpinorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TwistedSpinorField")
            .field("map", &self.map)
            .field("n", &self.rep.n())
            .finish()
    }
}

impl TwistedSpinorField {
    /// Field from components ψ^A(x) in the chart passed as second argument.
    pub fn new(
        map: Arc<SmoothMap>,
        rep: Arc<CliffordRep>,
        comps: impl Fn(&[f64], usize) -> TwistedValue + Send + Sync + 'static,
    ) -> Result<Self> {
        if rep.n() != map.domain().dim() {
            return Err(Error::DimensionMismatch {
                expected: map.domain().dim(),
                found: rep.n(),
            });
        }
        Ok(TwistedSpinorField {
            map,
            rep,
            comps: Arc::new(comps),
        })
    }

    /// The zero section.
    pub fn zero(map: Arc<SmoothMap>, rep: Arc<CliffordRep>) -> Result<Self> {
        let (d, f) = (map.target().coord_dim(), rep.fiber_dim());
        TwistedSpinorField::new(map, rep, move |_, _| TwistedValue::zeros(d, f))
    }

    pub fn map(&self) -> &Arc<SmoothMap> {
        &self.map
    }

    pub fn rep(&self) -> &Arc<CliffordRep> {
        &self.rep
    }

    pub fn eval(&self, x: &[f64], chart: usize) -> TwistedValue {
        (self.comps)(x, chart)
    }

    pub fn value(&self, x: &[f64]) -> Result<TwistedValue> {
        self.map.domain().check(x)?;
        Ok(self.eval(x, self.map.chart_at(x)))
    }

    /// ‖Σ_A q(y)_A ψ^A‖ / |y|: size of the part normal to the quadric.
    pub fn tangency_residual(&self, x: &[f64]) -> Result<f64> {
        let Some(a) = self.map.target().ambient() else {
            return Ok(0.0);
        };
        let y = self.map.value(x)?;
        let psi = self.value(x)?;
        Ok(psi.pair(&a.lower(&y)).norm() / a.q(&y, &y).abs().sqrt())
    }

    /// Sum of two fields over the same map.
    pub fn plus(&self, other: &TwistedSpinorField) -> TwistedSpinorField {
        let (a, b) = (self.comps.clone(), other.comps.clone());
        TwistedSpinorField {
            map: self.map.clone(),
            rep: self.rep.clone(),
            comps: Arc::new(move |x, c| a(x, c) + b(x, c)),
        }
    }
}

fn same_rep(map: &SmoothMap, field: &SpinorField) -> Result<()> {
    if field.rep().n() != map.domain().dim() {
        return Err(Error::DimensionMismatch {
            expected: map.domain().dim(),
            found: field.rep().n(),
        });
    }
    Ok(())
}

/// Σ_α weight_α e_α·Ψ_α ⊗ φ_*(e_α)
fn frame_sum(
    map: &SmoothMap,
    rep: &CliffordRep,
    fields: &[(&SpinorField, f64)],
    x: &[f64],
    chart: usize,
) -> TwistedValue {
    let t = map.frame_push(x, chart);
    let mut out = TwistedValue::zeros(t.nrows(), rep.fiber_dim());
    for (alpha, (field, w)) in fields.iter().enumerate() {
        let s = rep.apply(alpha, &field.eval(x)) * *w;
        out.add_outer(&s, &t.column(alpha).into_owned());
    }
    out
}

/// ψ = Σ_α e_α·Ψ ⊗ φ_*(e_α) on a surface.
pub fn assemble_psi_tangent(map: Arc<SmoothMap>, psi: SpinorField) -> Result<TwistedSpinorField> {
    let n = map.domain().dim();
    if n != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: n });
    }
    tangent_part(map, psi)
}

/// Σ_α e_α·Ψ ⊗ φ_*(e_α) in any dimension.
pub fn tangent_part(map: Arc<SmoothMap>, psi: SpinorField) -> Result<TwistedSpinorField> {
    same_rep(&map, &psi)?;
    let rep = psi.rep().clone();
    let (m, r) = (map.clone(), rep.clone());
    TwistedSpinorField::new(map, rep, move |x, chart| {
        let n = m.domain().dim();
        let fields: Vec<(&SpinorField, f64)> = (0..n).map(|_| (&psi, 1.0)).collect();
        frame_sum(&m, &r, &fields, x, chart)
    })
}

/// ψ = Σ_α e_α·Ψ ⊗ φ_*(e_α) + Φ ⊗ ν
pub fn assemble_psi_hypersurface(
    map: Arc<SmoothMap>,
    psi: SpinorField,
    phi: SpinorField,
    normal: VectorFn,
) -> Result<TwistedSpinorField> {
    if map.target().dim() != map.domain().dim() + 1 {
        return Err(Error::Missing("shape data of a codimension-one immersion"));
    }
    same_rep(&map, &phi)?;
    let tangent = tangent_part(map.clone(), psi)?;
    let rep = phi.rep().clone();
    let normal_part = TwistedSpinorField::new(map, rep, move |x, _| TwistedValue::outer(&phi.eval(x), &normal(x)))?;
    Ok(tangent.plus(&normal_part))
}

/// ψ = Σ_{α<k} e_α·Ψ ⊗ φ_*(e_α) + Σ_{α≥k} e_α·Φ ⊗ φ_*(e_α) + χ ⊗ ν,
/// the frame e_α being principal with the first k directions sharing
/// one principal curvature.
pub fn assemble_psi_adapted(
    map: Arc<SmoothMap>,
    k: usize,
    psi: SpinorField,
    phi: SpinorField,
    chi: SpinorField,
    normal: VectorFn,
) -> Result<TwistedSpinorField> {
    let n = map.domain().dim();
    if map.target().dim() != n + 1 {
        return Err(Error::Missing("shape data of a codimension-one immersion"));
    }
    if k > n {
        return Err(constraint("multiplicity k <= n", k as f64));
    }
    for f in [&psi, &phi, &chi] {
        same_rep(&map, f)?;
    }
    let rep = psi.rep().clone();
    let (m, r) = (map.clone(), rep.clone());
    TwistedSpinorField::new(map, rep, move |x, chart| {
        let fields: Vec<(&SpinorField, f64)> = (0..n).map(|a| (if a < k { &psi } else { &phi }, 1.0)).collect();
        let mut out = frame_sum(&m, &r, &fields, x, chart);
        out.add_outer(&chi.eval(x), &normal(x));
        out
    })
}

/// ψ = e₁·Ψ ⊗ φ_*(e₁) − (μ/λ) e₂·Ψ ⊗ φ_*(e₂) + χ ⊗ ν for a surface
/// whose coordinate frame is principal with curvatures λ, μ.
pub fn assemble_psi_bicurved(
    map: Arc<SmoothMap>,
    psi: SpinorField,
    chi: SpinorField,
    lambda: f64,
    mu: f64,
    normal: VectorFn,
) -> Result<TwistedSpinorField> {
    if lambda == 0.0 {
        return Err(constraint("lambda != 0", lambda));
    }
    if lambda == mu {
        return Err(constraint("lambda != mu", 0.0));
    }
    if map.domain().dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: map.domain().dim(),
        });
    }
    check_principal_frame(&map, &normal)?;
    let ratio = -mu / lambda;
    let (m, r) = (map.clone(), psi.rep().clone());
    TwistedSpinorField::new(map, psi.rep().clone(), move |x, chart| {
        let mut out = frame_sum(&m, &r, &[(&psi, 1.0), (&psi, ratio)], x, chart);
        out.add_outer(&chi.eval(x), &normal(x));
        out
    })
}

/// The pushed-forward coordinate frame must be orthonormal and diagonalize A,
/// up to the O(h²) error of differentiated frames.
fn check_principal_frame(map: &SmoothMap, normal: &VectorFn) -> Result<()> {
    let slack = 10.0 * map.step() * map.step();
    let probe = vec![0.1; map.domain().dim()];
    let orient = NormalOrientation::Reference(normal.clone());
    let chart = map.chart_at(&probe);
    let y = map.eval(&probe, chart);
    let g = map.target().metric_at(y.as_slice())?;
    let t = map.frame_push(&probe, chart);
    let gram = t.transpose() * g * &t;
    let n = gram.nrows();
    let off = (gram - DMatrix::identity(n, n)).amax();
    if off > 1e-8 + slack {
        return Err(constraint("principal frame orthonormal", off));
    }
    let data = map.shape_data(&probe, &orient)?;
    let b = &data.shape_operator;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                worst = worst.max(b[(i, j)].abs());
            }
        }
    }
    if worst > 1e-6 + slack {
        return Err(constraint("frame diagonalizes the shape operator", worst));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cases::{Example1Params, Theorem3Params};

    #[test]
    fn zero_psi_gives_zero_field() {
        let case = Example1Params::reference().build().unwrap();
        let rep = case.field.rep().clone();
        let zero = SpinorField::constant(case.map.domain().clone(), rep, Spinor::zeros(2)).unwrap();
        let f = assemble_psi_tangent(case.map.clone(), zero).unwrap();
        assert_eq!(f.value(&[0.2, 0.4]).unwrap().coefficient_norm(), 0.0);
    }

    #[test]
    fn tangent_field_is_frame_independent() {
        // Σ e'_α·Ψ ⊗ φ_*(e'_α) in a rotated frame
        let case = Example1Params::reference().build().unwrap();
        let psi = case.psi.clone().unwrap();
        let rep = case.field.rep().clone();
        let x = [0.3, -0.7];
        let t = case.map.frame_push(&x, 0);
        let s = psi.value(&x).unwrap();
        for a in [0.4f64, 1.9, -2.5] {
            let frame = [[a.cos(), a.sin()], [-a.sin(), a.cos()]];
            let mut v = TwistedValue::zeros(t.nrows(), 2);
            for e in frame {
                let push = &t * DVector::from_row_slice(&e);
                v.add_outer(&rep.act(&e, &s).unwrap(), &push);
            }
            let d = v - case.field.value(&x).unwrap();
            assert!(d.coefficient_norm() < 1e-12);
        }
    }

    #[test]
    fn hypersurface_field_reductions() {
        let case = Theorem3Params::reference().build().unwrap();
        let map = case.map.clone();
        let psi = case.psi.clone().unwrap();
        let rep = psi.rep().clone();
        let NormalOrientation::Reference(nu) = case.orientation.clone().unwrap() else { panic!() };
        let zero = SpinorField::constant(map.domain().clone(), rep.clone(), Spinor::zeros(2)).unwrap();
        let x = [1.1, 0.3];

        let with_zero_phi = assemble_psi_hypersurface(map.clone(), psi.clone(), zero.clone(), nu.clone()).unwrap();
        let tangent = assemble_psi_tangent(map.clone(), psi).unwrap();
        assert!((with_zero_phi.value(&x).unwrap() - tangent.value(&x).unwrap()).coefficient_norm() < 1e-15);

        let phi = case.chi.clone().unwrap();
        let only_normal = assemble_psi_hypersurface(map, zero, phi.clone(), nu.clone()).unwrap();
        let v = only_normal.value(&x).unwrap();
        let want = TwistedValue::outer(&phi.value(&x).unwrap(), &nu(&x));
        assert!((v - want).coefficient_norm() < 1e-15);
    }

    #[test]
    fn bicurved_matches_adapted_form() {
        // Φ := −(μ/λ)Ψ in the adapted field with k = 1
        let p = Theorem3Params::reference();
        let case = p.build().unwrap();
        let (psi, chi) = (case.psi.clone().unwrap(), case.chi.clone().unwrap());
        let NormalOrientation::Reference(nu) = case.orientation.clone().unwrap() else { panic!() };
        let ratio = -p.mu() / p.lambda();
        assert!((ratio + 0.5).abs() < 1e-15);
        let (psi1, rep) = (psi.clone(), psi.rep().clone());
        let phi = SpinorField::new(case.map.domain().clone(), rep, move |x| psi1.value(x).unwrap() * ratio).unwrap();
        let adapted = assemble_psi_adapted(case.map.clone(), 1, psi, phi, chi, nu).unwrap();
        for x in [[0.0, 0.0], [2.2, -0.8], [4.0, 0.9]] {
            let d = adapted.value(&x).unwrap() - case.field.value(&x).unwrap();
            assert!(d.coefficient_norm() < 1e-14);
        }
    }

    #[test]
    fn bicurved_preconditions() {
        let case = Theorem3Params::reference().build().unwrap();
        let (psi, chi) = (case.psi.clone().unwrap(), case.chi.clone().unwrap());
        let NormalOrientation::Reference(nu) = case.orientation.clone().unwrap() else { panic!() };
        let m = case.map.clone();
        assert!(assemble_psi_bicurved(m.clone(), psi.clone(), chi.clone(), 0.0, 0.5, nu.clone()).is_err());
        assert!(assemble_psi_bicurved(m, psi, chi, 0.7, 0.7, nu).is_err());
    }

    #[test]
    fn embedded_field_is_tangent() {
        let case = Theorem3Params::reference().build().unwrap();
        for p in case.grid.points().iter().step_by(37) {
            assert!(case.field.tangency_residual(p).unwrap() < 1e-10);
        }
    }
}
