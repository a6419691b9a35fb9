//! Numerical verification of explicit Dirac-harmonic maps.
//!
//! A Dirac-harmonic map is a pair (φ, ψ) of a map φ: M → N and a spinor
//! field ψ along φ (a section of ΣM ⊗ φ⁻¹TN) solving
//!
//! ```text
//! τ(φ) = R(φ, ψ)        D̸ψ = 0
//! ```
//!
//! where τ is the tension field, R(φ, ψ) = ½ R^i_{jkl}⟨ψ^k, ∇φ^j·ψ^l⟩ ∂_i
//! and D̸ is the Dirac operator twisted by the pulled-back Levi-Civita
//! connection. This crate builds such pairs in coordinates and measures
//! how well both equations hold.
//!
//! ```
//! use dhmaps::cases::Theorem3Params;
//!
//! let case = Theorem3Params::reference().build().unwrap();
//! let x = [0.4, 0.2];
//! let tau = case.map.tension_field(&x).unwrap();
//! let norm = case.map.target().norm(&[], &tau).unwrap();
//! assert!((norm - 3.0 / 2f64.sqrt()).abs() < 1e-6);
//! ```

pub mod cases;
pub mod clifford;
pub mod dirac_harmonic;
pub mod error;
pub mod fd;
pub mod geometry;
pub mod grid;
pub mod maps;
pub mod spinors;

pub use clifford::{inner, CliffordRep, Spinor};
pub use error::{Error, Result};
pub use num_complex::Complex64;
