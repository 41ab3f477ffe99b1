use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{parse_prop, ParseError, ParseErrorKind};
use crate::linarith::Rational;
use crate::model::{Model, ModelError, Partition};
use crate::syntax::{class_key, Agent, ClassKey, PropFormula};

/// The on-disk form of a model. Rationals are strings `"n"` or `"p/q"`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub agents: Vec<String>,
    pub states: Vec<String>,
    pub relations: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub budgets: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    pub costs: Vec<CostDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostDocument {
    pub agent: String,
    pub state: String,
    pub formula: String,
    pub cost: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("malformed model document: {0}")]
    Malformed(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("bad rational `{value}` in {context}")]
    BadRational { context: String, value: String },
    #[error("cost formula `{formula}`: {error}")]
    CostFormula { formula: String, error: ParseError },
    #[error("cost formula `{0}` is not propositional")]
    NonPropositionalCost(String),
    #[error("state `{state}` listed twice for letter `{prop}`")]
    DuplicateValuation { prop: String, state: String },
}

const WILDCARD: &str = "*";

fn rational(value: &str, context: impl FnOnce() -> String) -> Result<Rational, LoadError> {
    value
        .parse()
        .map_err(|_| LoadError::BadRational { context: context(), value: value.to_string() })
}

/// Parses and validates a model document in JSON form.
pub fn load_model(text: &str) -> Result<Model, LoadError> {
    let doc: ModelDocument = serde_json::from_str(text).map_err(|e| LoadError::Malformed(e.to_string()))?;
    load_model_document(&doc)
}

struct Resolver<'a> {
    model: &'a Model,
}

impl Resolver<'_> {
    fn agent(&self, name: &str) -> Result<Agent, LoadError> {
        let a = Agent::new(name);
        if self.model.has_agent(&a) {
            Ok(a)
        } else {
            Err(ModelError::UnknownAgent(name.to_string()).into())
        }
    }

    fn state(&self, name: &str) -> Result<usize, LoadError> {
        self.model
            .state_index(name)
            .ok_or_else(|| ModelError::UnknownState(name.to_string()).into())
    }

    /// All states for the wildcard, otherwise the named one.
    fn states(&self, name: &str) -> Result<Vec<usize>, LoadError> {
        if name == WILDCARD {
            Ok((0..self.model.len()).collect())
        } else {
            Ok(vec![self.state(name)?])
        }
    }
}

pub fn load_model_document(doc: &ModelDocument) -> Result<Model, LoadError> {
    let mut model = Model::new(
        doc.agents.iter().map(|a| Agent::new(a.as_str())),
        doc.states.iter().cloned(),
    )?;
    let n = model.len();

    for (name, classes) in &doc.relations {
        let agent = Resolver { model: &model }.agent(name)?;
        let mut idx = Vec::with_capacity(classes.len());
        for class in classes {
            let members = class
                .iter()
                .map(|s| Resolver { model: &model }.state(s))
                .collect::<Result<Vec<_>, _>>()?;
            idx.push(members);
        }
        let partition = Partition::from_classes(n, &idx)
            .map_err(|reason| ModelError::NotPartition { agent: name.clone(), reason })?;
        model.set_relation(&agent, partition)?;
    }
    if let Some(a) = model.agents().iter().find(|a| !doc.relations.contains_key(a.name())) {
        return Err(ModelError::MissingRelation(a.name().to_string()).into());
    }

    for (prop, states) in &doc.valuation {
        let mut seen = BTreeSet::new();
        for s in states {
            let w = Resolver { model: &model }.state(s)?;
            if !seen.insert(w) {
                return Err(LoadError::DuplicateValuation { prop: prop.clone(), state: s.clone() });
            }
            model.set_prop(prop, w, true)?;
        }
    }

    for (name, entries) in &doc.budgets {
        let agent = Resolver { model: &model }.agent(name)?;
        // The wildcard first, so specific states override it.
        let ordered = entries
            .iter()
            .filter(|(s, _)| s.as_str() == WILDCARD)
            .chain(entries.iter().filter(|(s, _)| s.as_str() != WILDCARD));
        for (state, value) in ordered {
            let v = rational(value, || format!("budget of `{name}` at `{state}`"))?;
            for w in (Resolver { model: &model }).states(state)? {
                model.set_budget(&agent, w, v.clone())?;
            }
        }
    }

    load_costs(&mut model, &doc.costs)?;
    Ok(model)
}

struct Entry {
    agent: Agent,
    states: Vec<usize>,
    formula: PropFormula,
    key: ClassKey,
    value: Rational,
    text: String,
}

fn load_costs(model: &mut Model, costs: &[CostDocument]) -> Result<(), LoadError> {
    let mut wildcard = Vec::new();
    let mut specific = Vec::new();
    for c in costs {
        let resolver = Resolver { model: &*model };
        let agent = resolver.agent(&c.agent)?;
        let states = resolver.states(&c.state)?;
        let formula = parse_prop(&c.formula).map_err(|error| match error.kind {
            ParseErrorKind::NotPropositional => LoadError::NonPropositionalCost(c.formula.clone()),
            _ => LoadError::CostFormula { formula: c.formula.clone(), error },
        })?;
        let value = rational(&c.cost, || format!("cost of `{}` for `{}` at `{}`", c.formula, c.agent, c.state))?;
        let key = class_key(&formula).map_err(ModelError::from)?;
        let entry = Entry { agent, states, formula, key, value, text: c.formula.clone() };
        if c.state == WILDCARD {
            wildcard.push(entry);
        } else {
            specific.push(entry);
        }
    }
    for level in [&wildcard, &specific] {
        // Two entries at the same level for the same class must agree.
        let mut seen: BTreeMap<(Agent, usize, ClassKey), (&Rational, &str)> = BTreeMap::new();
        for e in level.iter() {
            for &w in &e.states {
                let slot = (e.agent.clone(), w, e.key.clone());
                if let Some((v, first)) = seen.get(&slot) {
                    if **v != e.value {
                        return Err(ModelError::ClassConflict {
                            agent: e.agent.name().to_string(),
                            state: model.state_name(w).to_string(),
                            first: first.to_string(),
                            second: e.text.clone(),
                        }
                        .into());
                    }
                    continue;
                }
                seen.insert(slot, (&e.value, &e.text));
                model.set_cost(&e.agent, w, &e.formula, e.value.clone())?;
            }
        }
    }
    Ok(())
}

/// The document describing `model`, listing budgets and costs per state.
pub fn dump_model(model: &Model) -> ModelDocument {
    let names = |ws: &[usize]| ws.iter().map(|&w| model.state_name(w).to_string()).collect::<Vec<_>>();
    let mut doc = ModelDocument {
        agents: model.agents().iter().map(|a| a.name().to_string()).collect(),
        states: model.states().to_vec(),
        ..ModelDocument::default()
    };
    for agent in model.agents() {
        let part = model.relation(agent).expect("every agent has a relation");
        doc.relations
            .insert(agent.name().to_string(), part.classes().iter().map(|c| names(c)).collect());
        let budgets = (0..model.len())
            .map(|w| (model.state_name(w).to_string(), model.budget(agent, w).expect("known").to_string()))
            .collect();
        doc.budgets.insert(agent.name().to_string(), budgets);
        for w in 0..model.len() {
            for entry in model.cost_entries(agent, w).into_iter().flat_map(|t| t.values()) {
                doc.costs.push(CostDocument {
                    agent: agent.name().to_string(),
                    state: model.state_name(w).to_string(),
                    formula: entry.formula.to_string(),
                    cost: entry.value.to_string(),
                });
            }
        }
    }
    for (prop, row) in model.valuation() {
        let ws: Vec<usize> = (0..model.len()).filter(|&w| row[w]).collect();
        doc.valuation.insert(prop.clone(), names(&ws));
    }
    doc
}

pub fn model_to_json(model: &Model) -> String {
    serde_json::to_string_pretty(&dump_model(model)).expect("documents serialize")
}
