//! Bounded satisfiability: enumerate small pre-structures, then realize the
//! assumed inequalities with costs and budgets by linear feasibility.

mod prestructure;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::linarith::{fm_feasible, Feasibility, LinSystem, Rational};
use crate::model::{eval, Model, ModelError, StateId};
use crate::parser::model_to_json;
use crate::reduce::{translate, ReduceError};
use crate::syntax::{closure, SpqFormula, SyntaxError};

pub use prestructure::{partitions, PreStructure, Signature};

/// Atom counts above this make the pattern table too large to enumerate.
pub const MAX_ATOMS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("the state bound must be at least 1")]
    ZeroStates,
    #[error("sat_static needs a query-free formula")]
    HasQueries,
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Clone, Debug)]
pub enum SatVerdict {
    /// A model and a state satisfying the formula, checked by evaluation.
    Sat(Model, StateId),
    /// No model with at most `max_states` states; `closure_size` is `K` in
    /// the theoretical bound `2^K`.
    UnsatUpTo { max_states: usize, closure_size: usize },
    Unsupported(String),
}

impl SatVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatVerdict::Sat(..))
    }
}

impl fmt::Display for SatVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SatVerdict::Sat(model, state) => {
                writeln!(f, "SAT at state {}", state.name)?;
                f.write_str(&model_to_json(model))
            }
            SatVerdict::UnsatUpTo { max_states, closure_size } => {
                write!(f, "UNSAT up to {max_states} states (theoretical bound: 2^{closure_size})")
            }
            SatVerdict::Unsupported(reason) => write!(f, "unsupported: {reason}"),
        }
    }
}

/// Truth values of the atoms at one state, with values realizing them.
type Pattern = (Vec<bool>, BTreeMap<String, Rational>);

/// Every atom-sign pattern whose constraints at a single state are feasible,
/// with the witness for each. States do not share variables, so a pseudo
/// table is realizable iff each row is one of these patterns.
fn feasible_patterns(sig: &Signature) -> Result<Vec<Pattern>, SatError> {
    let k = sig.atoms.len();
    let mut out = Vec::new();
    for bits in 0u32..(1u32 << k) {
        let pattern: Vec<bool> = (0..k).map(|j| bits & (1 << j) != 0).collect();
        if let Feasibility::Feasible(witness) = fm_feasible(&sig.build_i(0, &pattern)?) {
            out.push((pattern, witness));
        }
    }
    Ok(out)
}

/// Odometer over `digits` positions each ranging over `0..base`.
fn next(counter: &mut [usize], base: usize) -> bool {
    for d in counter.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn witness_model(sig: &Signature, pre: &PreStructure, values: &BTreeMap<String, Rational>) -> Result<Model, ModelError> {
    let mut model = Model::new(sig.agents.iter().cloned(), (0..pre.states).map(|w| format!("s{}", w + 1)))?;
    for (agent, part) in &pre.relations {
        model.set_relation(agent, part.clone())?;
    }
    for (letter, row) in &pre.valuation {
        for (w, &b) in row.iter().enumerate() {
            model.set_prop(letter, w, b)?;
        }
    }
    let get = |v: String| values.get(&v).cloned().unwrap_or_else(Rational::zero);
    for i in &sig.agents {
        for w in 0..pre.states {
            model.set_budget(i, w, get(Signature::budget_var(i, w)))?;
            for (c, (_, repr)) in sig.classes.iter().enumerate() {
                model.set_cost(i, w, repr, get(Signature::cost_var(i, c, w)))?;
            }
        }
    }
    Ok(model)
}

/// Searches models with up to `max_states` states for a query-free formula.
/// Every `Sat` witness is re-checked by the reference evaluator.
pub fn sat_static(formula: &SpqFormula, max_states: usize) -> Result<SatVerdict, SatError> {
    if max_states < 1 {
        return Err(SatError::ZeroStates);
    }
    if !formula.is_query_free() {
        return Err(SatError::HasQueries);
    }
    let sig = Signature::of(formula)?;
    if sig.atoms.len() > MAX_ATOMS {
        return Ok(SatVerdict::Unsupported(format!(
            "{} inequality atoms exceed the enumeration limit of {MAX_ATOMS}",
            sig.atoms.len()
        )));
    }
    let patterns = feasible_patterns(&sig)?;
    if !patterns.is_empty() {
        for n in 1..=max_states {
            if let Some(found) = search(&sig, formula, &patterns, n)? {
                return Ok(found);
            }
        }
    }
    Ok(SatVerdict::UnsatUpTo { max_states, closure_size: closure(formula)?.len() })
}

fn search(
    sig: &Signature,
    formula: &SpqFormula,
    patterns: &[Pattern],
    n: usize,
) -> Result<Option<SatVerdict>, SatError> {
    let parts = partitions(n);
    let mut part_choice = vec![0usize; sig.agents.len()];
    loop {
        let relations: BTreeMap<_, _> =
            sig.agents.iter().zip(&part_choice).map(|(a, &k)| (a.clone(), parts[k].clone())).collect();
        let cells = sig.letters.len() * n;
        for bits in 0u64..(1u64 << cells) {
            let valuation = sig
                .letters
                .iter()
                .enumerate()
                .map(|(l, name)| (name.clone(), (0..n).map(|w| bits & (1 << (l * n + w)) != 0).collect()))
                .collect();
            let mut rows = vec![0usize; n];
            let mut pre = PreStructure {
                states: n,
                relations: relations.clone(),
                valuation,
                pseudo: vec![patterns[0].0.clone(); n],
            };
            loop {
                if let Some(w) = pre.extension(sig, formula).iter().position(|&b| b) {
                    return realize(sig, formula, &pre, w).map(Some);
                }
                if !next(&mut rows, patterns.len()) {
                    break;
                }
                for (w, &r) in rows.iter().enumerate() {
                    pre.pseudo[w].clone_from(&patterns[r].0);
                }
            }
        }
        if !next(&mut part_choice, parts.len()) {
            break;
        }
    }
    Ok(None)
}

/// Builds the witness from one shared system with per-state copies of the
/// variables and checks it against the formula.
fn realize(sig: &Signature, formula: &SpqFormula, pre: &PreStructure, w: usize) -> Result<SatVerdict, SatError> {
    let mut sys = LinSystem::new();
    for (v, row) in pre.pseudo.iter().enumerate() {
        sys.extend(sig.build_i(v, row)?.constraints().iter().cloned());
    }
    let values = match fm_feasible(&sys) {
        Feasibility::Feasible(values) => values,
        Feasibility::Infeasible => unreachable!("rows are individually feasible and share no variables"),
    };
    let model = witness_model(sig, pre, &values)?;
    assert!(eval(&model, w, formula)?, "witness fails the reference evaluator");
    let state = model.state_id(w);
    Ok(SatVerdict::Sat(model, state))
}

/// Like [`sat_static`], translating queries away first. Witnesses are checked
/// against the original formula.
pub fn sat_bounded(formula: &SpqFormula, max_states: usize) -> Result<SatVerdict, SatError> {
    if formula.is_query_free() {
        return sat_static(formula, max_states);
    }
    let reduced = match translate(formula) {
        Ok(f) => f,
        Err(ReduceError::NotReducible(_)) => {
            return Ok(SatVerdict::Unsupported("common knowledge under query".to_string()))
        }
        Err(ReduceError::Syntax(e)) => return Err(e.into()),
    };
    let verdict = sat_static(&reduced, max_states)?;
    if let SatVerdict::Sat(model, state) = &verdict {
        assert!(eval(model, state.index, formula)?, "witness fails the original formula");
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::extension;
    use crate::parser::parse_formula;

    fn verdict(s: &str, n: usize) -> SatVerdict {
        sat_bounded(&parse_formula(s).unwrap(), n).unwrap()
    }

    #[test]
    fn axiom_t_refutes() {
        assert!(matches!(verdict("K{i} p & ~p", 2), SatVerdict::UnsatUpTo { max_states: 2, .. }));
    }

    #[test]
    fn similar_costs_conflict() {
        assert!(matches!(verdict("(c[i](p) >= 5) & (c[i](~p) < 5)", 2), SatVerdict::UnsatUpTo { .. }));
        assert!(matches!(verdict("(b[i] < 0)", 2), SatVerdict::UnsatUpTo { .. }));
    }

    #[test]
    fn budget_window() {
        let f = parse_formula("(b[i] >= 3) & K{i} (b[i] < 5)").unwrap();
        match sat_static(&f, 1).unwrap() {
            SatVerdict::Sat(m, w) => {
                let b = m.budget(&"i".into(), w.index).unwrap().clone();
                assert!(b >= Rational::from(3) && b < Rational::from(5));
                assert_eq!(extension(&m, &f).unwrap(), vec![0]);
            }
            other => panic!("expected a witness, got {other}"),
        }
    }

    #[test]
    fn queries() {
        assert!(verdict("[? i : p] K{i} p", 3).is_sat());
        assert!(matches!(verdict("[? G : p] C{G} p", 3), SatVerdict::Unsupported(_)));
    }

    #[test]
    fn zero_bound_is_an_error() {
        assert_eq!(sat_static(&SpqFormula::True, 0).unwrap_err(), SatError::ZeroStates);
    }
}
