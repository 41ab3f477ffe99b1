//! Elimination of queries by reduction axioms, and soundness fuzzing of the
//! whole axiom system.

mod axioms;
mod translate;

use thiserror::Error;

use crate::model::{extension, Model, ModelError};
use crate::syntax::{SpqFormula, SyntaxError};

pub use crate::syntax::subst_inequality;
pub use axioms::{fuzz_soundness, AxiomSchema, Counterexample, FuzzReport, SchemaReport, trial_rng};
pub use translate::{translate, translate_traced, RewriteStep, Rule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("not reducible: common knowledge `{0}` occurs under a query")]
    NotReducible(SpqFormula),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// Whether `φ` holds at every state of `model`.
pub fn validity_check(model: &Model, formula: &SpqFormula) -> Result<bool, ModelError> {
    Ok(extension(model, formula)?.len() == model.len())
}


#[cfg(test)]
mod fuzz_smoke {
    use super::*;

    #[test]
    fn every_schema_survives_a_few_trials() {
        let report = fuzz_soundness(30, 1);
        assert!(report.is_sound(), "{report}");
        assert_eq!(report.schemas.len(), AxiomSchema::ALL.len());
    }
}
