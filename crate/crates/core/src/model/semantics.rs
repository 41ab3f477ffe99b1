use std::collections::VecDeque;

use super::{update_mapped, Model, ModelError};
use crate::linarith::Rational;
use crate::syntax::{class_key, Agent, Group, LinAtom, PropFormula, SpqFormula, Term};

/// Classical truth of `A` at `w`; letters without a valuation entry are false.
pub fn eval_prop(model: &Model, w: usize, formula: &PropFormula) -> bool {
    formula.eval(&|p: &str| model.is_true(p, w))
}

pub fn term_value(model: &Model, w: usize, term: &Term) -> Result<Rational, ModelError> {
    match term {
        Term::Budget(i) => model
            .budget(i, w)
            .cloned()
            .ok_or_else(|| ModelError::UnknownAgent(i.name().to_string())),
        Term::Cost(i, a) => model.cost(i, w, a),
    }
}

pub(crate) fn atom_holds(model: &Model, w: usize, atom: &LinAtom) -> Result<bool, ModelError> {
    let mut lhs = Rational::zero();
    for (coeff, term) in atom.summands() {
        lhs += &term_value(model, w, term)?.mul_int(*coeff);
    }
    Ok(lhs >= Rational::from(atom.bound()))
}

fn check_group(model: &Model, group: &Group) -> Result<(), ModelError> {
    match group.iter().find(|a| !model.has_agent(a)) {
        Some(a) => Err(ModelError::UnknownAgent(a.name().to_string())),
        None => Ok(()),
    }
}

/// Each member's share of a query: the cheapest member's cost over `|G|`.
pub fn share(model: &Model, w: usize, group: &Group, question: &PropFormula) -> Result<Rational, ModelError> {
    check_group(model, group)?;
    let key = class_key(question)?;
    let min = group
        .iter()
        .map(|j| model.cost_by_key(j, w, &key))
        .min()
        .expect("groups are nonempty");
    Ok(min.div_count(group.len()))
}

/// Whether every member of `G` can pay its share of the query at `w`.
pub fn bcs_holds(model: &Model, w: usize, group: &Group, question: &PropFormula) -> Result<bool, ModelError> {
    let s = share(model, w, group, question)?;
    Ok(group.iter().all(|i| model.budget(i, w).is_some_and(|b| *b >= s)))
}

/// States `G`-reachable from `w`, in state order. Each relation is
/// reflexive, so this is `w`'s component in the union of `G`'s relations.
pub fn reach_group(model: &Model, group: &Group, w: usize) -> Result<Vec<usize>, ModelError> {
    check_group(model, group)?;
    let parts: Vec<_> = group.iter().map(|a| model.relation(a).expect("checked")).collect();
    let classes: Vec<Vec<Vec<usize>>> = parts.iter().map(|p| p.classes()).collect();
    let mut seen = vec![false; model.len()];
    let mut done_class: Vec<Vec<bool>> = classes.iter().map(|c| vec![false; c.len()]).collect();
    let mut queue = VecDeque::from([w]);
    seen[w] = true;
    while let Some(u) = queue.pop_front() {
        for (k, p) in parts.iter().enumerate() {
            let c = p.class_of(u);
            if done_class[k][c] {
                continue;
            }
            done_class[k][c] = true;
            for &v in &classes[k][c] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    Ok((0..model.len()).filter(|&v| seen[v]).collect())
}

fn know(model: &Model, agent: &Agent, w: usize, body: &SpqFormula) -> Result<bool, ModelError> {
    let part = model
        .relation(agent)
        .ok_or_else(|| ModelError::UnknownAgent(agent.name().to_string()))?;
    for v in part.class_members(w) {
        if !eval(model, v, body)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Truth of `φ` at `w`, following the recursive clauses directly. Queries
/// build the updated model in full.
pub fn eval(model: &Model, w: usize, formula: &SpqFormula) -> Result<bool, ModelError> {
    if w >= model.len() {
        return Err(ModelError::StateOutOfRange(w));
    }
    Ok(match formula {
        SpqFormula::True => true,
        SpqFormula::False => false,
        SpqFormula::Prop(p) => model.is_true(p, w),
        SpqFormula::Atom(atom) => atom_holds(model, w, atom)?,
        SpqFormula::Not(a) => !eval(model, w, a)?,
        SpqFormula::And(a, b) => eval(model, w, a)? && eval(model, w, b)?,
        SpqFormula::Know(i, a) => know(model, i, w, a)?,
        SpqFormula::Common(g, a) => {
            for v in reach_group(model, g, w)? {
                if !eval(model, v, a)? {
                    return Ok(false);
                }
            }
            true
        }
        SpqFormula::Query(g, q, a) => {
            if !bcs_holds(model, w, g, q)? {
                true
            } else {
                let (next, index) = update_mapped(model, g, q)?;
                let w2 = index[w].expect("a state satisfying the constraint survives");
                eval(&next, w2, a)?
            }
        }
    })
}

/// All states where `φ` holds, in state order.
pub fn extension(model: &Model, formula: &SpqFormula) -> Result<Vec<usize>, ModelError> {
    // Rejected even where evaluation would never reach the agent.
    if let Some(a) = formula.agents().iter().find(|a| !model.has_agent(a)) {
        return Err(ModelError::UnknownAgent(a.name().to_string()));
    }
    let mut out = Vec::new();
    for w in 0..model.len() {
        if eval(model, w, formula)? {
            out.push(w);
        }
    }
    Ok(out)
}
