//! Complex matrix realizations of the Clifford algebra of euclidean ℝⁿ.
//!
//! Generators γ₁..γₙ act on the fiber Δₙ = ℂ^{2^⌊n/2⌋}. They are
//! anti-Hermitian with γ_αγ_β + γ_βγ_α = −2δ_{αβ}, so the Hermitian
//! product makes Clifford multiplication by a unit vector skew:
//! ⟨v·ξ, η⟩ = −⟨ξ, v·η⟩.
//!
//! For n = 2 the generators are
//!
//! ```text
//! γ₁ = [[0, 1], [−1, 0]]      γ₂ = [[0, i], [i, 0]]
//! ```
//!
//! Larger n come from a tensor recursion: the odd set for n = 2k−1 is
//! tensored with σ_x and one more generator I ⊗ (iσ_y) is appended. For
//! odd n the last generator is a multiple of γ₁⋯γ_{n−1}.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported dimension when no explicit cap is given.
pub const DEFAULT_MAX_DIM: usize = 8;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// An element of the spinor fiber Δₙ.
#[derive(Debug, Clone, PartialEq)]
pub struct Spinor(pub DVector<Complex64>);

impl Spinor {
    pub fn new(components: Vec<Complex64>) -> Self {
        Spinor(DVector::from_vec(components))
    }

    /// Build from (re, im) pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Self {
        Spinor::new(pairs.iter().map(|&(re, im)| Complex64::new(re, im)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Spinor(DVector::from_element(dim, ZERO))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Complex64] {
        self.0.as_slice()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Spinor {
        Spinor(&self.0 * s)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Add for Spinor {
    type Output = Spinor;
    fn add(self, rhs: Spinor) -> Spinor {
        Spinor(self.0 + rhs.0)
    }
}

impl Sub for Spinor {
    type Output = Spinor;
    fn sub(self, rhs: Spinor) -> Spinor {
        Spinor(self.0 - rhs.0)
    }
}

impl Neg for Spinor {
    type Output = Spinor;
    fn neg(self) -> Spinor {
        Spinor(-self.0)
    }
}

impl Mul<f64> for Spinor {
    type Output = Spinor;
    fn mul(self, rhs: f64) -> Spinor {
        Spinor(self.0 * Complex64::new(rhs, 0.0))
    }
}

impl Mul<Complex64> for Spinor {
    type Output = Spinor;
    fn mul(self, rhs: Complex64) -> Spinor {
        Spinor(self.0 * rhs)
    }
}

impl AddAssign<&Spinor> for Spinor {
    fn add_assign(&mut self, rhs: &Spinor) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Spinor> for Spinor {
    fn sub_assign(&mut self, rhs: &Spinor) {
        self.0 -= &rhs.0;
    }
}

/// Hermitian product, conjugate-linear in the first slot.
pub fn inner(xi: &Spinor, eta: &Spinor) -> Result<Complex64> {
    if xi.dim() != eta.dim() {
        return Err(Error::DimensionMismatch {
            expected: xi.dim(),
            found: eta.dim(),
        });
    }
    Ok(inner_unchecked(xi, eta))
}

pub(crate) fn inner_unchecked(xi: &Spinor, eta: &Spinor) -> Complex64 {
    xi.0
        .iter()
        .zip(eta.0.iter())
        .map(|(a, b)| a.conj() * b)
        .sum()
}

/// Generators γ₁..γₙ of Cl(ℝⁿ) acting on Δₙ.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordRep {
    n: usize,
    fiber_dim: usize,
    generators: Vec<DMatrix<Complex64>>,
}

impl CliffordRep {
    /// Representation for 1 ≤ n ≤ [`DEFAULT_MAX_DIM`].
    pub fn new(n: usize) -> Result<Self> {
        Self::with_cap(n, DEFAULT_MAX_DIM)
    }

    pub fn with_cap(n: usize, max: usize) -> Result<Self> {
        if n == 0 || n > max {
            return Err(Error::DimensionOutOfRange { n, max });
        }
        let generators = build_generators(n);
        Ok(CliffordRep {
            n,
            fiber_dim: generators[0].nrows(),
            generators,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }

    pub fn generators(&self) -> &[DMatrix<Complex64>] {
        &self.generators
    }

    /// γ_α for 0-based α.
    pub fn gamma(&self, alpha: usize) -> &DMatrix<Complex64> {
        &self.generators[alpha]
    }

    /// γ_α ξ for 0-based α.
    pub fn apply(&self, alpha: usize, xi: &Spinor) -> Spinor {
        Spinor(&self.generators[alpha] * &xi.0)
    }

    /// Clifford product v·ξ = (Σ v^α γ_α) ξ.
    pub fn act(&self, v: &[f64], xi: &Spinor) -> Result<Spinor> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.len(),
            });
        }
        self.check(xi)?;
        let mut out = Spinor::zeros(self.fiber_dim);
        for (alpha, &va) in v.iter().enumerate() {
            if va != 0.0 {
                out.0 += (&self.generators[alpha] * &xi.0) * Complex64::new(va, 0.0);
            }
        }
        Ok(out)
    }

    /// Matrix of v· in the spinor basis.
    pub fn matrix_of(&self, v: &[f64]) -> Result<DMatrix<Complex64>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.len(),
            });
        }
        let mut m = DMatrix::from_element(self.fiber_dim, self.fiber_dim, ZERO);
        for (g, &va) in self.generators.iter().zip(v) {
            m += g * Complex64::new(va, 0.0);
        }
        Ok(m)
    }

    pub fn check(&self, xi: &Spinor) -> Result<()> {
        if xi.dim() != self.fiber_dim {
            return Err(Error::DimensionMismatch {
                expected: self.fiber_dim,
                found: xi.dim(),
            });
        }
        Ok(())
    }
}

fn mat2(a: [[Complex64; 2]; 2]) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(2, 2, &[a[0][0], a[0][1], a[1][0], a[1][1]])
}

fn build_generators(n: usize) -> Vec<DMatrix<Complex64>> {
    if n == 1 {
        return vec![DMatrix::from_element(1, 1, I)];
    }
    let sigma1 = mat2([[ZERO, ONE], [-ONE, ZERO]]);
    let sigma2 = mat2([[ZERO, I], [I, ZERO]]);
    let mut gens = vec![sigma1, sigma2];
    while gens.len() < n {
        if gens.len() % 2 == 0 {
            let last = odd_completion(&gens);
            gens.push(last);
        } else {
            // γ_a ⊗ σ_x for the current odd set, then I ⊗ iσ_y.
            let sx = mat2([[ZERO, ONE], [ONE, ZERO]]);
            let isy = mat2([[ZERO, ONE], [-ONE, ZERO]]);
            let dim = gens[0].nrows();
            let mut next: Vec<_> = gens.iter().map(|g| g.kronecker(&sx)).collect();
            next.push(DMatrix::<Complex64>::identity(dim, dim).kronecker(&isy));
            gens = next;
        }
    }
    gens
}

/// γ_n = ω γ₁⋯γ_{n−1} with ω ∈ {1, i} chosen so that γ_n² = −I.
fn odd_completion(gens: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
    let dim = gens[0].nrows();
    let mut p = DMatrix::<Complex64>::identity(dim, dim);
    for g in gens {
        p *= g;
    }
    let sq = &p * &p;
    if sq[(0, 0)].re < 0.0 {
        p
    } else {
        p * I
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_abs(m: &DMatrix<Complex64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn n2_generators_are_exact() {
        let rep = CliffordRep::new(2).unwrap();
        assert_eq!(
            rep.gamma(0),
            &DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(-1., 0.), c(0., 0.)])
        );
        assert_eq!(
            rep.gamma(1),
            &DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., 1.), c(0., 1.), c(0., 0.)])
        );
    }

    #[test]
    fn fiber_dimensions() {
        for (n, d) in [(1, 1), (2, 2), (3, 2), (4, 4), (5, 4), (6, 8), (7, 8), (8, 16)] {
            assert_eq!(CliffordRep::new(n).unwrap().fiber_dim(), d, "n={n}");
        }
    }

    #[test]
    fn relations_hold_up_to_cap() {
        for n in 1..=DEFAULT_MAX_DIM {
            let rep = CliffordRep::new(n).unwrap();
            let d = rep.fiber_dim();
            let id = DMatrix::<Complex64>::identity(d, d);
            for a in 0..n {
                let g = rep.gamma(a);
                assert!(max_abs(&(g.adjoint() + g)) == 0.0, "n={n} a={a} not anti-Hermitian");
                for b in 0..n {
                    let h = rep.gamma(b);
                    let expect = if a == b { &id * c(-2.0, 0.0) } else { &id * c(0.0, 0.0) };
                    let ac = g * h + h * g - expect;
                    assert!(max_abs(&ac) <= 1e-13, "n={n} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(matches!(CliffordRep::new(0), Err(Error::DimensionOutOfRange { .. })));
        assert!(matches!(CliffordRep::new(9), Err(Error::DimensionOutOfRange { .. })));
        assert!(CliffordRep::with_cap(9, 10).is_ok());
    }

    #[test]
    fn act_examples() {
        let rep = CliffordRep::new(2).unwrap();
        let xi = Spinor::from_pairs(&[(1.0, 0.0), (0.0, 0.0)]);
        let out = rep.act(&[1.0, 0.0], &xi).unwrap();
        assert_eq!(out, Spinor::from_pairs(&[(0.0, 0.0), (-1.0, 0.0)]));
        let twice = rep.act(&[1.0, 0.0], &out).unwrap();
        assert_eq!(twice, -xi.clone());
        assert!(matches!(
            rep.act(&[1.0, 0.0, 0.0], &xi),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(rep.act(&[1.0, 0.0], &Spinor::zeros(3)).is_err());
    }

    #[test]
    fn unit_vector_acts_isometrically_n3() {
        let rep = CliffordRep::new(3).unwrap();
        let s = 1.0 / 3f64.sqrt();
        let xi = Spinor::from_pairs(&[(0.3, -1.2), (0.7, 0.4)]);
        let out = rep.act(&[s, s, s], &xi).unwrap();
        assert!((out.norm() - xi.norm()).abs() < 1e-14);
    }

    #[test]
    fn inner_convention() {
        let e = Spinor::from_pairs(&[(1.0, 0.0), (0.0, 0.0)]);
        assert_eq!(inner(&e, &e).unwrap(), c(1.0, 0.0));
        // orthogonal pair: zero under any convention
        let eta = Spinor::from_pairs(&[(0.0, 0.0), (0.0, 1.0)]);
        assert_eq!(inner(&e, &eta).unwrap(), c(0.0, 0.0));
        // conjugation sits in the first slot
        let ie = Spinor::from_pairs(&[(0.0, 1.0), (0.0, 0.0)]);
        assert_eq!(inner(&ie, &e).unwrap(), c(0.0, -1.0));
        assert_eq!(inner(&e, &ie).unwrap(), c(0.0, 1.0));
        assert!(inner(&e, &Spinor::zeros(4)).is_err());
    }

    #[test]
    fn odd_generator_is_product() {
        let rep = CliffordRep::new(3).unwrap();
        let p = rep.gamma(0) * rep.gamma(1);
        assert_eq!(rep.gamma(2), &p);
    }
}
