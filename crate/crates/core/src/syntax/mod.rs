//! Abstract syntax of the propositional and full languages.

mod bcs;
mod closure;
mod complexity;
mod formula;
mod similarity;
mod surface;

use thiserror::Error;

pub use bcs::{bcs_formula, cost_at_most, cost_minimal, subst_inequality, substituted_atom};
pub use closure::{closure, closure_with_agents};
pub use complexity::{complexity, complexity_prop};
pub use formula::{Agent, Group, LinAtom, PropFormula, SpqFormula, Term};
pub use similarity::{
    canonical_form, class_key, is_tautology_class, similar, CanonicalForm, ClassKey, MAX_CANONICAL_VARS,
};
pub use surface::{desugar, desugar_prop, CmpOp, Surface, SurfaceSum, SurfaceTerm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("agent groups must be nonempty")]
    EmptyGroup,
    #[error("a linear inequality needs at least one term")]
    EmptyLinearSum,
    #[error("formula too large for canonicalization ({0} variables, limit {MAX_CANONICAL_VARS})")]
    TooManyVariables(usize),
    #[error("expected a propositional formula")]
    NotPropositional,
    #[error("integer coefficient overflow")]
    CoefficientOverflow,
}
