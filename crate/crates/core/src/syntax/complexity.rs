use super::{PropFormula, SpqFormula};

/// The weight used to show that rewriting away queries terminates. Constants
/// count as atoms. Arithmetic saturates rather than wrapping.
pub fn complexity(formula: &SpqFormula) -> u64 {
    match formula {
        SpqFormula::True | SpqFormula::False | SpqFormula::Prop(_) | SpqFormula::Atom(_) => 1,
        SpqFormula::Not(a) | SpqFormula::Know(_, a) | SpqFormula::Common(_, a) => complexity(a).saturating_add(1),
        SpqFormula::And(a, b) => complexity(a).max(complexity(b)).saturating_add(1),
        SpqFormula::Query(_, q, a) => complexity_prop(q).saturating_add(5).saturating_mul(complexity(a)),
    }
}

pub fn complexity_prop(formula: &PropFormula) -> u64 {
    match formula {
        PropFormula::True | PropFormula::False | PropFormula::Var(_) => 1,
        PropFormula::Not(a) => complexity_prop(a).saturating_add(1),
        PropFormula::And(a, b) => complexity_prop(a).max(complexity_prop(b)).saturating_add(1),
    }
}
