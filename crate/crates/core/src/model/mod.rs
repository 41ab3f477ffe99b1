//! Finite models with costs and budgets, their semantics and the query update.

mod partition;
mod semantics;
mod update;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::linarith::Rational;
use crate::syntax::{class_key, Agent, ClassKey, PropFormula, SyntaxError};

pub use partition::Partition;
pub use semantics::{bcs_holds, eval, eval_prop, extension, reach_group, share, term_value};
pub use update::{update, update_mapped};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("a model needs at least one state")]
    NoStates,
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("duplicate agent `{0}`")]
    DuplicateAgent(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("relation of agent `{agent}` is not a partition: {reason}")]
    NotPartition { agent: String, reason: String },
    #[error("no relation given for agent `{0}`")]
    MissingRelation(String),
    #[error("negative budget {value} for agent `{agent}` at state `{state}`")]
    NegativeBudget { agent: String, state: String, value: Box<Rational> },
    #[error("negative cost {value} of `{formula}` for agent `{agent}` at state `{state}`")]
    NegativeCost { agent: String, state: String, formula: String, value: Box<Rational> },
    #[error("tautology-class cost nonzero: `{formula}` costs {value} for agent `{agent}` at state `{state}`")]
    TautologyCost { agent: String, state: String, formula: String, value: Box<Rational> },
    #[error("similar formulas `{first}` and `{second}` have different costs for agent `{agent}` at state `{state}`")]
    ClassConflict { agent: String, state: String, first: String, second: String },
    #[error("state index {0} out of range")]
    StateOutOfRange(usize),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// A state's position in the model's state order together with its name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId {
    pub index: usize,
    pub name: String,
}

/// A cost stored for one ≈-class; `formula` is the representative it was
/// entered with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostEntry {
    pub formula: PropFormula,
    pub value: Rational,
}

/// A finite model. Empty state sets only arise from updates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    agents: Vec<Agent>,
    states: Vec<String>,
    relations: BTreeMap<Agent, Partition>,
    budgets: BTreeMap<Agent, Vec<Rational>>,
    costs: BTreeMap<Agent, Vec<BTreeMap<ClassKey, CostEntry>>>,
    valuation: BTreeMap<String, Vec<bool>>,
}

impl Model {
    /// Every agent starts with the universal relation, zero budgets and
    /// zero costs; no letter is true anywhere.
    pub fn new<A, S>(agents: A, states: S) -> Result<Model, ModelError>
    where
        A: IntoIterator<Item = Agent>,
        S: IntoIterator<Item = String>,
    {
        let mut agent_list: Vec<Agent> = Vec::new();
        for a in agents {
            if agent_list.contains(&a) {
                return Err(ModelError::DuplicateAgent(a.name().to_string()));
            }
            agent_list.push(a);
        }
        agent_list.sort();
        let mut state_list: Vec<String> = Vec::new();
        for s in states {
            if state_list.contains(&s) {
                return Err(ModelError::DuplicateState(s));
            }
            state_list.push(s);
        }
        if state_list.is_empty() {
            return Err(ModelError::NoStates);
        }
        Ok(Self::blank(agent_list, state_list))
    }

    fn blank(agents: Vec<Agent>, states: Vec<String>) -> Model {
        let n = states.len();
        Model {
            relations: agents.iter().map(|a| (a.clone(), Partition::universal(n))).collect(),
            budgets: agents.iter().map(|a| (a.clone(), vec![Rational::zero(); n])).collect(),
            costs: agents.iter().map(|a| (a.clone(), vec![BTreeMap::new(); n])).collect(),
            valuation: BTreeMap::new(),
            agents,
            states,
        }
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn has_agent(&self, agent: &Agent) -> bool {
        self.relations.contains_key(agent)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn state_id(&self, index: usize) -> StateId {
        StateId { index, name: self.states[index].clone() }
    }

    pub fn state_name(&self, index: usize) -> &str {
        &self.states[index]
    }

    fn check_agent(&self, agent: &Agent) -> Result<(), ModelError> {
        if self.has_agent(agent) {
            Ok(())
        } else {
            Err(ModelError::UnknownAgent(agent.name().to_string()))
        }
    }

    fn check_state(&self, state: usize) -> Result<(), ModelError> {
        if state < self.states.len() {
            Ok(())
        } else {
            Err(ModelError::StateOutOfRange(state))
        }
    }

    pub fn relation(&self, agent: &Agent) -> Option<&Partition> {
        self.relations.get(agent)
    }

    pub fn set_relation(&mut self, agent: &Agent, partition: Partition) -> Result<(), ModelError> {
        self.check_agent(agent)?;
        if partition.len() != self.states.len() {
            return Err(ModelError::NotPartition {
                agent: agent.name().to_string(),
                reason: format!("covers {} states, model has {}", partition.len(), self.states.len()),
            });
        }
        self.relations.insert(agent.clone(), partition);
        Ok(())
    }

    pub fn budget(&self, agent: &Agent, state: usize) -> Option<&Rational> {
        self.budgets.get(agent).and_then(|b| b.get(state))
    }

    pub fn set_budget(&mut self, agent: &Agent, state: usize, value: Rational) -> Result<(), ModelError> {
        self.check_agent(agent)?;
        self.check_state(state)?;
        if value.is_negative() {
            return Err(ModelError::NegativeBudget {
                agent: agent.name().to_string(),
                state: self.states[state].clone(),
                value: Box::new(value),
            });
        }
        self.budgets.get_mut(agent).expect("agent checked")[state] = value;
        Ok(())
    }

    /// Sets the cost of `formula`'s ≈-class, replacing any earlier entry for
    /// that class. A zero cost removes the entry.
    pub fn set_cost(&mut self, agent: &Agent, state: usize, formula: &PropFormula, value: Rational) -> Result<(), ModelError> {
        self.check_agent(agent)?;
        self.check_state(state)?;
        let describe = || (agent.name().to_string(), self.states[state].clone(), formula.to_string());
        if value.is_negative() {
            let (agent, state, formula) = describe();
            return Err(ModelError::NegativeCost { agent, state, formula, value: Box::new(value) });
        }
        let key = class_key(formula)?;
        if key.is_tautology_class() && value.is_positive() {
            let (agent, state, formula) = describe();
            return Err(ModelError::TautologyCost { agent, state, formula, value: Box::new(value) });
        }
        let table = &mut self.costs.get_mut(agent).expect("agent checked")[state];
        if value.is_zero() {
            table.remove(&key);
        } else {
            table.insert(key, CostEntry { formula: formula.clone(), value });
        }
        Ok(())
    }

    /// The stored positive-cost classes for `agent` at `state`.
    pub fn cost_entries(&self, agent: &Agent, state: usize) -> Option<&BTreeMap<ClassKey, CostEntry>> {
        self.costs.get(agent).and_then(|c| c.get(state))
    }

    /// Cost of a class; classes without an entry cost 0.
    pub fn cost_by_key(&self, agent: &Agent, state: usize, key: &ClassKey) -> Rational {
        self.cost_entries(agent, state)
            .and_then(|t| t.get(key))
            .map(|e| e.value.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn cost(&self, agent: &Agent, state: usize, formula: &PropFormula) -> Result<Rational, ModelError> {
        self.check_agent(agent)?;
        Ok(self.cost_by_key(agent, state, &class_key(formula)?))
    }

    pub fn valuation(&self) -> &BTreeMap<String, Vec<bool>> {
        &self.valuation
    }

    pub fn is_true(&self, prop: &str, state: usize) -> bool {
        self.valuation.get(prop).is_some_and(|v| v[state])
    }

    pub fn set_prop(&mut self, prop: &str, state: usize, value: bool) -> Result<(), ModelError> {
        self.check_state(state)?;
        let n = self.states.len();
        let row = self.valuation.entry(prop.to_string()).or_insert_with(|| vec![false; n]);
        row[state] = value;
        if row.iter().all(|b| !b) {
            self.valuation.remove(prop);
        }
        Ok(())
    }

    /// Letters true at `state`, in name order.
    pub fn true_props(&self, state: usize) -> Vec<&str> {
        self.valuation
            .iter()
            .filter(|(_, v)| v[state])
            .map(|(p, _)| p.as_str())
            .collect()
    }

    /// The submodel on `keep` (indices in increasing order), with each
    /// agent's partition restricted. Returns the kept states' new indices.
    pub(crate) fn restrict(&self, keep: &[usize]) -> Model {
        let pick = |row: &Vec<Rational>| keep.iter().map(|&w| row[w].clone()).collect::<Vec<_>>();
        Model {
            agents: self.agents.clone(),
            states: keep.iter().map(|&w| self.states[w].clone()).collect(),
            relations: self.relations.iter().map(|(a, p)| (a.clone(), p.restrict(keep))).collect(),
            budgets: self.budgets.iter().map(|(a, b)| (a.clone(), pick(b))).collect(),
            costs: self
                .costs
                .iter()
                .map(|(a, c)| (a.clone(), keep.iter().map(|&w| c[w].clone()).collect()))
                .collect(),
            valuation: self
                .valuation
                .iter()
                .map(|(p, v)| (p.clone(), keep.iter().map(|&w| v[w]).collect::<Vec<bool>>()))
                .filter(|(_, v)| v.iter().any(|b| *b))
                .collect(),
        }
    }

    pub(crate) fn budgets_mut(&mut self, agent: &Agent) -> &mut Vec<Rational> {
        self.budgets.get_mut(agent).expect("known agent")
    }

    pub(crate) fn relations_mut(&mut self) -> &mut BTreeMap<Agent, Partition> {
        &mut self.relations
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m() -> Model {
        Model::new([Agent::new("i")], ["w1".to_string(), "w2".to_string()]).unwrap()
    }

    #[test]
    fn rejects_bad_entries() {
        let mut model = m();
        let i = Agent::new("i");
        assert!(matches!(model.set_budget(&i, 0, Rational::from(-1)), Err(ModelError::NegativeBudget { .. })));
        let taut = PropFormula::or(PropFormula::var("p"), PropFormula::not(PropFormula::var("p")));
        assert!(matches!(model.set_cost(&i, 0, &taut, Rational::from(5)), Err(ModelError::TautologyCost { .. })));
        assert!(model.set_cost(&i, 0, &taut, Rational::zero()).is_ok());
        assert!(matches!(model.set_budget(&Agent::new("x"), 0, Rational::one()), Err(ModelError::UnknownAgent(_))));
        assert!(Model::new([Agent::new("i")], Vec::<String>::new()).is_err());
    }

    #[test]
    fn costs_are_shared_by_similar_formulas() {
        let mut model = m();
        let i = Agent::new("i");
        let p = PropFormula::var("p");
        model.set_cost(&i, 1, &p, Rational::from(20)).unwrap();
        assert_eq!(model.cost(&i, 1, &PropFormula::not(p.clone())).unwrap(), Rational::from(20));
        assert_eq!(model.cost(&i, 1, &PropFormula::and(p.clone(), p.clone())).unwrap(), Rational::from(20));
        assert_eq!(model.cost(&i, 0, &p).unwrap(), Rational::zero());
    }

    #[test]
    fn valuation_normalizes_empty_letters() {
        let mut model = m();
        model.set_prop("p", 0, true).unwrap();
        model.set_prop("p", 0, false).unwrap();
        assert!(model.valuation().is_empty());
    }
}
