use super::semantics::{bcs_holds, eval_prop, share};
use super::{Model, ModelError};
use crate::syntax::{Group, PropFormula};

/// The model after `G` asks whether `A`. The result has no states when the
/// budget constraint fails everywhere.
pub fn update(model: &Model, group: &Group, question: &PropFormula) -> Result<Model, ModelError> {
    update_mapped(model, group, question).map(|(m, _)| m)
}

/// Like [`update`], also returning for each original state its index in the
/// updated model, if it survives.
pub fn update_mapped(
    model: &Model,
    group: &Group,
    question: &PropFormula,
) -> Result<(Model, Vec<Option<usize>>), ModelError> {
    let mut keep = Vec::new();
    let mut shares = Vec::new();
    for w in 0..model.len() {
        if bcs_holds(model, w, group, question)? {
            keep.push(w);
            shares.push(share(model, w, group, question)?);
        }
    }
    // The answer's extension is taken in the original model.
    let answer: Vec<bool> = keep.iter().map(|&w| eval_prop(model, w, question)).collect();
    let mut next = model.restrict(&keep);
    for (agent, part) in next.relations_mut().iter_mut() {
        if group.contains(agent) {
            *part = part.refine(&answer);
        }
    }
    for i in group.iter() {
        let budgets = next.budgets_mut(i);
        for (b, s) in budgets.iter_mut().zip(&shares) {
            *b -= s;
        }
    }
    let mut index = vec![None; model.len()];
    for (k, &w) in keep.iter().enumerate() {
        index[w] = Some(k);
    }
    Ok((next, index))
}
