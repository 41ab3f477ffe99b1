//! Cheapest sequences of group queries that make a goal true.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;

use thiserror::Error;

use crate::linarith::Rational;
use crate::model::{bcs_holds, eval, share, update_mapped, Model, ModelError};
use crate::syntax::{Group, PropFormula, SpqFormula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("no actions to plan with")]
    NoActions,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A query `G` may perform.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QueryAction {
    pub group: Group,
    pub question: PropFormula,
}

impl QueryAction {
    pub fn new(group: Group, question: PropFormula) -> Self {
        QueryAction { group, question }
    }
}

impl fmt::Display for QueryAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}} : {}", self.group, self.question)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanStep {
    pub action: QueryAction,
    /// The cheapest member's cost, which the group pays jointly.
    pub spent: Rational,
}

impl PlanStep {
    pub fn share(&self) -> Rational {
        self.spent.div_count(self.action.group.len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    pub steps: Vec<PlanStep>,
    pub total_spent: Rational,
}

impl Plan {
    pub fn actions(&self) -> Vec<QueryAction> {
        self.steps.iter().map(|s| s.action.clone()).collect()
    }
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "query {} — spent {}, shares {}", s.action, s.spent, s.share())?;
        }
        write!(f, "total: {}", self.total_spent)
    }
}

/// Surviving states, relations and budgets determine a node up to the
/// parts that updates never change.
type Signature = (Vec<String>, Vec<Vec<usize>>, Vec<Vec<Rational>>);

fn signature(model: &Model) -> Signature {
    let agents = model.agents();
    (
        model.states().to_vec(),
        agents.iter().map(|a| model.relation(a).expect("known").labels().to_vec()).collect(),
        agents
            .iter()
            .map(|a| (0..model.len()).map(|w| model.budget(a, w).expect("known").clone()).collect())
            .collect(),
    )
}

/// The amount `action` spends at `w`, if its budget constraint holds there.
fn step_cost(model: &Model, w: usize, action: &QueryAction) -> Result<Option<Rational>, ModelError> {
    if !bcs_holds(model, w, &action.group, &action.question)? {
        return Ok(None);
    }
    let s = share(model, w, &action.group, &action.question)?;
    let size = i64::try_from(action.group.len()).expect("group size fits in i64");
    Ok(Some(s.mul_int(size)))
}

/// Applies `action` and follows the designated state.
fn apply(model: &Model, w: usize, action: &QueryAction) -> Result<(Model, usize), ModelError> {
    let (next, index) = update_mapped(model, &action.group, &action.question)?;
    Ok((next, index[w].expect("the designated state satisfies the budget constraint")))
}

struct Node {
    model: Model,
    state: usize,
    steps: Vec<PlanStep>,
}

/// Uniform-cost search for a plan of at most `max_depth` queries after which
/// `goal` holds at `state`. Ties go to fewer steps, then to earlier actions.
pub fn plan(
    model: &Model,
    state: &str,
    goal: &SpqFormula,
    actions: &[QueryAction],
    max_depth: usize,
) -> Result<Option<Plan>, PlanError> {
    let w = model.state_index(state).ok_or_else(|| PlanError::UnknownState(state.to_string()))?;
    if actions.is_empty() {
        return Err(PlanError::NoActions);
    }
    for a in actions {
        if let Some(bad) = a.group.iter().find(|i| !model.has_agent(i)) {
            return Err(ModelError::UnknownAgent(bad.name().to_string()).into());
        }
    }
    let mut nodes = vec![Node { model: model.clone(), state: w, steps: Vec::new() }];
    let mut frontier = BinaryHeap::new();
    frontier.push(Reverse((Rational::zero(), 0usize, Vec::<usize>::new(), 0usize)));
    // Nodes pop in order of spending, so an earlier pop of the same
    // signature at no greater depth dominates.
    let mut visited: BTreeMap<Signature, usize> = BTreeMap::new();
    while let Some(Reverse((total, depth, path, id))) = frontier.pop() {
        let node = &nodes[id];
        let sig = signature(&node.model);
        if visited.get(&sig).is_some_and(|&d| d <= depth) {
            continue;
        }
        visited.insert(sig, depth);
        if eval(&node.model, node.state, goal)? {
            let found = Plan { steps: node.steps.clone(), total_spent: total };
            verify(model, w, goal, &found)?;
            return Ok(Some(found));
        }
        if depth == max_depth {
            continue;
        }
        let mut children = Vec::new();
        for (k, action) in actions.iter().enumerate() {
            if let Some(spent) = step_cost(&node.model, node.state, action)? {
                let (next, state) = apply(&node.model, node.state, action)?;
                let mut steps = node.steps.clone();
                steps.push(PlanStep { action: action.clone(), spent: spent.clone() });
                let mut next_path = path.clone();
                next_path.push(k);
                children.push((Node { model: next, state, steps }, &total + &spent, next_path));
            }
        }
        for (child, cost, next_path) in children {
            nodes.push(child);
            frontier.push(Reverse((cost, depth + 1, next_path, nodes.len() - 1)));
        }
    }
    Ok(None)
}

/// Replays a plan, checking every budget constraint, the spending and the goal.
pub fn verify(model: &Model, state: usize, goal: &SpqFormula, plan: &Plan) -> Result<(), ModelError> {
    let (mut current, mut w) = (model.clone(), state);
    let mut total = Rational::zero();
    for step in &plan.steps {
        let spent = step_cost(&current, w, &step.action)?.expect("each step's budget constraint holds");
        assert_eq!(spent, step.spent, "recorded spending matches the replay");
        total += &spent;
        (current, w) = apply(&current, w, &step.action)?;
    }
    assert_eq!(total, plan.total_spent);
    assert!(eval(&current, w, goal)?, "the goal holds after the plan");
    Ok(())
}

/// Every action sequence of length at most `max_depth` that is executable at
/// `state`, with its total spending and whether it reaches the goal.
pub fn enumerate_sequences(
    model: &Model,
    state: usize,
    goal: &SpqFormula,
    actions: &[QueryAction],
    max_depth: usize,
) -> Result<Vec<(Vec<usize>, Rational, bool)>, ModelError> {
    let mut out = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        model: &Model,
        w: usize,
        goal: &SpqFormula,
        actions: &[QueryAction],
        left: usize,
        path: &mut Vec<usize>,
        total: Rational,
        out: &mut Vec<(Vec<usize>, Rational, bool)>,
    ) -> Result<(), ModelError> {
        out.push((path.clone(), total.clone(), eval(model, w, goal)?));
        if left == 0 {
            return Ok(());
        }
        for (k, a) in actions.iter().enumerate() {
            if let Some(spent) = step_cost(model, w, a)? {
                let (next, v) = apply(model, w, a)?;
                path.push(k);
                rec(&next, v, goal, actions, left - 1, path, &total + &spent, out)?;
                path.pop();
            }
        }
        Ok(())
    }
    rec(model, state, goal, actions, max_depth, &mut Vec::new(), Rational::zero(), &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::telescope;
    use crate::parser::parse_formula;

    fn telescope_actions() -> Vec<QueryAction> {
        ["n,m", "n", "m", "l", "n,m,l"]
            .iter()
            .map(|g| QueryAction::new(Group::new(g.split(',')).unwrap(), PropFormula::var("p")))
            .collect()
    }

    #[test]
    fn telescope_plan() {
        let goal = parse_formula("C{n,m} p | C{n,m} ~p").unwrap();
        let found = plan(&telescope(), "w1", &goal, &telescope_actions(), 2).unwrap().unwrap();
        assert_eq!(found.actions(), vec![telescope_actions()[0].clone()]);
        assert_eq!(found.total_spent, Rational::from(20));
        assert_eq!(found.to_string(), "query {m,n} : p — spent 20, shares 10\ntotal: 20");
    }

    #[test]
    fn trivial_goals() {
        let m = telescope();
        let empty = plan(&m, "w1", &SpqFormula::True, &telescope_actions(), 2).unwrap().unwrap();
        assert!(empty.steps.is_empty());
        assert_eq!(empty.total_spent, Rational::zero());
        assert_eq!(plan(&m, "w1", &SpqFormula::False, &telescope_actions(), 3).unwrap(), None);
    }

    #[test]
    fn bad_inputs() {
        let m = telescope();
        assert_eq!(plan(&m, "w9", &SpqFormula::True, &telescope_actions(), 1), Err(PlanError::UnknownState("w9".into())));
        assert_eq!(plan(&m, "w1", &SpqFormula::True, &[], 1), Err(PlanError::NoActions));
    }
}
