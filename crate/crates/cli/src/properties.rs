//! Seeded randomized invariant suites.

use std::collections::BTreeMap;
use std::sync::Arc;

use dhmaps::clifford::{inner, CliffordRep, Spinor};
use dhmaps::dirac_harmonic::{
    curvature_split_closed_form, curvature_term_at, curvature_term_in_frame, TwistedValue,
    ALGEBRAIC_TOL, FD_TOL,
};
use dhmaps::geometry::{Domain, RiemannianModel, SpaceFormKind};
use dhmaps::spinors::SpinorField;
use dhmaps::Complex64;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::CliError;

/// Dimensions exercised by the algebraic and curvature suites.
pub const DIMS: [usize; 4] = [2, 3, 4, 5];

/// Identities that hold exactly up to roundoff but accumulate over
/// O(d³) contractions.
pub const CONTRACTION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyResult {
    pub max: f64,
    pub tol: f64,
    pub pass: bool,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertiesReport {
    pub seed: u64,
    pub trials: usize,
    pub dims: Vec<usize>,
    pub properties: BTreeMap<String, PropertyResult>,
    pub pass: bool,
}

type Check = fn(&mut ChaCha8Rng, &Ctx) -> Result<f64, CliError>;

struct Ctx {
    reps: Vec<Arc<CliffordRep>>,
    fubini_study: RiemannianModel,
}

impl Ctx {
    fn rep(&self, rng: &mut ChaCha8Rng) -> &Arc<CliffordRep> {
        &self.reps[rng.random_range(0..self.reps.len())]
    }
}

/// (name, tolerance, check). Each check draws one sample and returns its
/// violation.
const SUITE: &[(&str, f64, Check)] = &[
    ("clifford_relations", ALGEBRAIC_TOL, clifford_relations),
    ("anti_hermitian", ALGEBRAIC_TOL, anti_hermitian),
    ("skew_symmetry", ALGEBRAIC_TOL, skew_symmetry),
    ("surface_triple_imaginary", ALGEBRAIC_TOL, surface_triple_imaginary),
    ("vector_pairing_imaginary", ALGEBRAIC_TOL, vector_pairing_imaginary),
    ("curvature_term_real", CONTRACTION_TOL, curvature_real_space_form),
    ("curvature_term_real_fubini_study", FD_TOL, curvature_real_fubini_study),
    ("curvature_frame_independence", CONTRACTION_TOL, frame_independence),
    ("clifford_dirac_identity", FD_TOL, clifford_dirac_identity),
    ("curvature_closed_form", CONTRACTION_TOL, closed_form_split),
    ("curvature_closed_form_printed", CONTRACTION_TOL, printed_normal_form),
];

pub fn property_names() -> Vec<&'static str> {
    SUITE.iter().map(|s| s.0).collect()
}

/// Run every suite for `trials` samples. Each property gets its own
/// stream derived from `seed`, so results do not depend on suite order.
pub fn run_properties(seed: u64, trials: usize) -> Result<PropertiesReport, CliError> {
    if trials == 0 {
        return Err(CliError::Config("trials must be at least 1".into()));
    }
    let ctx = Ctx {
        reps: DIMS.iter().map(|&n| Arc::new(CliffordRep::new(n).expect("n <= 5"))).collect(),
        fubini_study: RiemannianModel::fubini_study(2)?,
    };
    let mut properties = BTreeMap::new();
    for (i, (name, tol, check)) in SUITE.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((i as u64 + 1) << 32));
        let mut max: f64 = 0.0;
        let mut finite = true;
        for _ in 0..trials {
            let v = check(&mut rng, &ctx)?;
            finite &= v.is_finite();
            max = max.max(v);
        }
        let pass = finite && max <= *tol;
        properties.insert(name.to_string(), PropertyResult { max, tol: *tol, pass, samples: trials });
    }
    let pass = properties.values().all(|p| p.pass);
    Ok(PropertiesReport { seed, trials, dims: DIMS.to_vec(), properties, pass })
}

fn unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let s = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if s > 1e-3 {
            return v.iter().map(|a| a / s).collect();
        }
    }
}

fn unit_spinor(rng: &mut ChaCha8Rng, dim: usize) -> Spinor {
    loop {
        let s = Spinor::new(
            (0..dim)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect(),
        );
        let r = s.norm();
        if r > 1e-3 {
            return s * (1.0 / r);
        }
    }
}

fn ip(a: &Spinor, b: &Spinor) -> Complex64 {
    inner(a, b).expect("same fiber")
}

fn clifford_relations(rng: &mut ChaCha8Rng, ctx: &Ctx) -> Result<f64, CliError> {
    let rep = ctx.rep(rng);
    let n = rep.n();
    let (v, w) = (unit_vector(rng, n), unit_vector(rng, n));
    let xi = unit_spinor(rng, rep.fiber_dim());
    let vw: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
    let a = rep.act(&v, &rep.act(&w, &xi)?)?;
    let b = rep.act(&w, &rep.act(&v, &xi)?)?;
    Ok((a + b + xi * (2.0 * vw)).norm())
}

fn anti_hermitian(rng: &mut ChaCha8Rng, ctx: &Ctx) -> Result<f64, CliError> {
    let rep = ctx.rep(rng);
    let m = rep.matrix_of(&unit_vector(rng, rep.n()))?;
    Ok((m.adjoint() + &m).iter().fold(0.0, |acc: f64, z| acc.max(z.norm())))
}

fn skew_symmetry(rng: &mut ChaCha8Rng, ctx: &Ctx) -> Result<f64, CliError> {
    let rep = ctx.rep(rng);
    let v = unit_vector(rng, rep.n());
    let (xi, eta) = (unit_spinor(rng, rep.fiber_dim()), unit_spinor(rng, rep.fiber_dim()));
    Ok((ip(&rep.act(&v, &xi)?, &eta) + ip(&xi, &rep.act(&v, &eta)?)).norm())
}

/// Re⟨e_α·Ψ, e_β·e_γ·Ψ⟩ on surfaces.
fn surface_triple_imaginary(rng: &mut ChaCha8Rng, ctx: &Ctx) -> Result<f64, CliError> {
    let rep = &ctx.reps[0];
    let psi = unit_spinor(rng, rep.fiber_dim());
    let mut worst: f64 = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                let z = ip(&rep.apply(a, &psi), &rep.apply(b, &rep.apply(c, &psi)));
                worst = worst.max(z.re.abs());
            }
        }
    }
    Ok(worst)
}

fn vector_pairing_imaginary(rng: &mut ChaCha8Rng, ctx: &Ctx) -> Result<f64, CliError> {
    let rep = ctx.rep(rng);
    let v = unit_vector(rng, rep.n());
    let psi = unit_spinor(rng, rep.fiber_dim());
    Ok(ip(&rep.act(&v, &psi)?, &psi).re.abs())
}

/// A point of the horosphere in Hⁿ⁺¹(R) scaled from u, with orthonormal
/// tangent columns and the unit normal.
fn horosphere(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> (DVector<f64>, DMatrix<f64>, DVector<f64>) {
    let w: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let s = w.iter().map(|a| a * a).sum::<f64>() / 2.0;
    let mut y: Vec<f64> = w.iter().map(|a| a * radius).collect();
    y.extend([s * radius, (s + 1.0) * radius]);
    let mut t = DMatrix::zeros(n + 2, n);
    for i in 0..n {
        t[(i, i)] = 1.0;
        t[(n, i)] = w[i];
        t[(n + 1, i)] = w[i];
    }
    let mut nu: Vec<f64> = w.iter().map(|a| -a).collect();
    nu.extend([1.0 - s, -s]);
    (DVector::from_vec(y), t, DVector::from_vec(nu))
}

struct SpaceFormSample {
    rep: Arc<CliffordRep>,
    model: RiemannianModel,
    radius: f64,
    y: DVector<f64>,
    t: DMatrix<f64>,
    nu: DVector<f64>,
}

fn space_form_sample(rng: &mut ChaCha8Rng, ctx: &Ctx) -> Result<SpaceFormSample, CliError> {
    let rep = ctx.rep(rng).clone();
    let n = rep.n();
    let radius = rng.random_range(0.5..2.0);
    let model = RiemannianModel::space_form(SpaceFormKind::Hyperbolic, n + 1, radius)?;
    let (y, t, nu) = horosphere(rng, n, radius);
    Ok(SpaceFormSample { rep, model, radius, y, t, nu })
}

/// Σ_a s_a ⊗ T_a + s_ν ⊗ ν with independent random spinors.
fn generic_value(rng: &mut ChaCha8Rng, s: &SpaceFormSample) -> TwistedValue {
    let d = s.rep.fiber_dim();
    let mut value = TwistedValue::zeros(s.y.len(), d);
    for a in 0..s.t.ncols() {
        value.add_outer(&unit_spinor(rng, d), &s.t.column(a).into_owned());
    }
    value.add_outer(&unit_spinor(rng, d), &s.nu);
    value
}

fn curvature_real_space_form(rng: &mut ChaCha8Rng, ctx: &Ctx) -> Result<f64, CliError> {
    let s = space_form_sample(rng, ctx)?;
    let value = generic_value(rng, &s);
    Ok(curvature_term_at(&s.model, &s.y, &s.t, &value, &s.rep, 1e-4)?.max_imaginary)
}

fn curvature_real_fubini_study(rng: &mut ChaCha8Rng, ctx: &Ctx) -> Result<f64, CliError> {
    let rep = &ctx.reps[0];
    let model = &ctx.fubini_study;
    let d = model.coord_dim();
    let y = DVector::from_iterator(d, (0..d).map(|_| rng.random_range(-1.0..1.0)));
    let t = DMatrix::from_fn(d, 2, |_, _| rng.random_range(-1.0..1.0));
    let mut value = TwistedValue::zeros(d, rep.fiber_dim());
    for i in 0..d {
        let mut e = DVector::zeros(d);
        e[i] = 1.0;
        value.add_outer(&unit_spinor(rng, rep.fiber_dim()), &e);
    }
    Ok(curvature_term_at(model, &y, &t, &value, rep, 1e-4)?.max_imaginary)
}

fn frame_independence(rng: &mut ChaCha8Rng, ctx: &Ctx) -> Result<f64, CliError> {
    let s = space_form_sample(rng, ctx)?;
    let value = generic_value(rng, &s);
    let n = s.t.ncols();
    let mut basis = s.t.clone().insert_column(n, 0.0);
    basis.set_column(n, &s.nu);
    let mix = DMatrix::from_fn(n + 1, n + 1, |_, _| rng.random_range(-1.0..1.0))
        + DMatrix::identity(n + 1, n + 1) * 2.5;
    let frame = basis * mix;
    let a = curvature_term_at(&s.model, &s.y, &s.t, &value, &s.rep, 1e-4)?;
    let b = curvature_term_in_frame(&s.model, &s.y, &s.t, &value, &s.rep, &frame, 1e-4)?;
    Ok(s.model.norm(s.y.as_slice(), &(a.value - b.value))?.max(b.max_imaginary))
}

/// ∂̸(e_α·Ψ) + 2∇_αΨ + e_α·∂̸Ψ for a random quadratic field on ℝⁿ.
fn clifford_dirac_identity(rng: &mut ChaCha8Rng, ctx: &Ctx) -> Result<f64, CliError> {
    let rep = ctx.rep(rng).clone();
    let (n, d) = (rep.n(), rep.fiber_dim());
    let c0 = unit_spinor(rng, d);
    let c1: Vec<Spinor> = (0..n).map(|_| unit_spinor(rng, d)).collect();
    let c2: Vec<Spinor> = (0..n * n).map(|_| unit_spinor(rng, d)).collect();
    let field = move |x: &[f64]| {
        let mut s = c0.clone();
        for i in 0..x.len() {
            s += &(c1[i].clone() * x[i]);
            for j in 0..x.len() {
                s += &(c2[i * x.len() + j].clone() * (x[i] * x[j]));
            }
        }
        s
    };
    let alpha = rng.random_range(0..n);
    let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let domain = Domain::Flat { dim: n };
    let f = field.clone();
    let psi = SpinorField::new(domain.clone(), rep.clone(), field)?;
    let r = rep.clone();
    let e_psi = SpinorField::new(domain, rep.clone(), move |x| r.apply(alpha, &f(x)))?;
    let lhs = e_psi.dirac(&x)? + psi.covariant_derivative(alpha, &x)? * 2.0 + rep.apply(alpha, &psi.dirac(&x)?);
    Ok(lhs.norm())
}

/// Σ_{α<k} e_α·Ψ⊗E_α + Σ_{α≥k} e_α·Φ⊗E_α + χ⊗ν.
fn adapted_value(s: &SpaceFormSample, k: usize, psi: &Spinor, phi: &Spinor, chi: &Spinor) -> TwistedValue {
    let mut value = TwistedValue::zeros(s.y.len(), s.rep.fiber_dim());
    for a in 0..s.t.ncols() {
        let src = if a < k { psi } else { phi };
        value.add_outer(&s.rep.apply(a, src), &s.t.column(a).into_owned());
    }
    value.add_outer(chi, &s.nu);
    value
}

fn closed_form_split(rng: &mut ChaCha8Rng, ctx: &Ctx) -> Result<f64, CliError> {
    let s = space_form_sample(rng, ctx)?;
    let n = s.rep.n();
    let d = s.rep.fiber_dim();
    let k = rng.random_range(0..=n);
    let (psi, phi, chi) = (unit_spinor(rng, d), unit_spinor(rng, d), unit_spinor(rng, d));
    let value = adapted_value(&s, k, &psi, &phi, &chi);
    let general = curvature_term_at(&s.model, &s.y, &s.t, &value, &s.rep, 1e-4)?.value;
    let c = -1.0 / (s.radius * s.radius);
    let split = curvature_split_closed_form(&s.rep, c, k, &psi, &phi, &chi)?;
    let closed = &s.t * DVector::from_vec(split.tangent) + &s.nu * split.normal;
    Ok(s.model.norm(s.y.as_slice(), &(general - closed))?)
}

/// R^T = 0 and R^N = −2nc Re⟨χ, Ψ⟩ν for ψ = Σ e_α·Ψ⊗E_α + χ⊗ν, as
/// commonly stated.
fn printed_normal_form(rng: &mut ChaCha8Rng, ctx: &Ctx) -> Result<f64, CliError> {
    let s = space_form_sample(rng, ctx)?;
    let n = s.rep.n();
    let d = s.rep.fiber_dim();
    let (psi, chi) = (unit_spinor(rng, d), unit_spinor(rng, d));
    let value = adapted_value(&s, n, &psi, &psi, &chi);
    let general = curvature_term_at(&s.model, &s.y, &s.t, &value, &s.rep, 1e-4)?.value;
    let c = -1.0 / (s.radius * s.radius);
    let stated = &s.nu * (-2.0 * n as f64 * c * ip(&chi, &psi).re);
    Ok(s.model.norm(s.y.as_slice(), &(general - stated))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_a_seed() {
        let a = run_properties(7, 3).unwrap();
        let b = run_properties(7, 3).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let c = run_properties(8, 3).unwrap();
        assert_ne!(a.properties["skew_symmetry"].max, c.properties["skew_symmetry"].max);
    }

    #[test]
    fn single_trial_and_zero_trials() {
        let r = run_properties(1, 1).unwrap();
        assert!(r.properties.values().all(|p| p.samples == 1));
        assert_eq!(r.properties.len(), SUITE.len());
        assert!(run_properties(1, 0).is_err());
    }

    #[test]
    fn only_the_printed_form_fails() {
        let r = run_properties(42, 20).unwrap();
        for (name, p) in &r.properties {
            assert_eq!(p.pass, name != "curvature_closed_form_printed", "{name}: {}", p.max);
        }
        assert!(!r.pass);
    }
}
