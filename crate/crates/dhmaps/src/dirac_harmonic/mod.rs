//! Spinor fields along maps, the coupled equations and their residuals.
//!
//! A twisted spinor field ψ along φ: M → N is stored as one spinor per
//! target coordinate, ψ = Σ_A ψ^A ⊗ ∂_A (ambient coordinates for
//! embedded targets, chart coordinates otherwise). The Dirac-harmonic
//! system is
//!
//! ```text
//! τ(φ) = R(φ, ψ)        D̸ψ = 0
//! ```
//!
//! [`el_residuals`] measures both over a grid; [`criteria_report`]
//! evaluates the sufficient conditions attached to each construction.

mod criteria;
mod curvature;
mod dirac;
mod residuals;
mod twisted;

pub use criteria::{
    criteria_report, principal_direction_residual, CriteriaInputs, CriteriaReport, CriteriaSet, CriterionResult,
    BALANCE_TOL,
};
pub use curvature::{
    curvature_split_closed_form, curvature_term, curvature_term_at, curvature_term_in_frame, curvature_term_splits,
    split_along_normal, CurvatureTerm, SplitClosedForm,
};
pub use dirac::{dirac_adapted_expansion, split_twisted, twisted_dirac, AdaptedDirac};
pub use residuals::{
    action_functional, el_residuals, point_residuals, ActionValue, PointResiduals, ResidualReport, ResidualStat,
    Tolerances, ALGEBRAIC_TOL, ANALYTIC_TOL, EL_MAP, EL_SPINOR, FD_TOL, MAP_NORMAL, MAP_TANGENT, SPINOR_NORMAL,
    SPINOR_TANGENT,
};
pub use twisted::{
    assemble_psi_adapted, assemble_psi_bicurved, assemble_psi_hypersurface, assemble_psi_tangent, tangent_part,
    TwistedSpinorField, TwistedValue,
};
