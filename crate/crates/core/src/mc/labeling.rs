use std::collections::{BTreeMap, HashMap};

use super::sublist::{sub_list, EntryKind, OrderedSubList, QueryContext};
use crate::linarith::Rational;
use crate::model::{Model, ModelError, Partition};
use crate::syntax::{class_key, Agent, ClassKey, SpqFormula, Term};

/// What the model looks like after the queries of one context: surviving
/// states, each agent's classes among them, and the budgets left.
#[derive(Clone, Debug)]
pub struct ContextView {
    pub survivors: Vec<bool>,
    /// Class label per original state; only meaningful for survivors.
    pub classes: BTreeMap<Agent, Vec<usize>>,
    pub budgets: BTreeMap<Agent, Vec<Rational>>,
}

/// Labels of every entry over the original states, and the view of each
/// context encountered. For a query marker the labels record where the
/// budget constraint holds in the marker's own context.
#[derive(Clone, Debug)]
pub struct LabelStore {
    pub list: OrderedSubList,
    pub labels: Vec<Vec<bool>>,
    pub contexts: HashMap<QueryContext, ContextView>,
}

impl LabelStore {
    /// States where entry `k` holds, among the survivors of its context.
    pub fn extension_of(&self, k: usize) -> Vec<usize> {
        let view = &self.contexts[&self.list.entries[k].context];
        (0..self.labels[k].len())
            .filter(|&w| view.survivors[w] && self.labels[k][w])
            .collect()
    }
}

/// Compact labels so that ids run over `0..count`.
fn compact(labels: &[usize]) -> (Vec<usize>, usize) {
    let p = Partition::from_labels(labels);
    let count = p.class_count();
    (p.labels().to_vec(), count)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut y = x;
        while self.parent[y] != root {
            let next = self.parent[y];
            self.parent[y] = root;
            y = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// `w` is labelled iff every survivor sharing its class id is `good`.
fn label_by_classes(view_survivors: &[bool], ids: &[usize], count: usize, good: &[bool]) -> Vec<bool> {
    let mut all = vec![true; count];
    for w in 0..ids.len() {
        if view_survivors[w] && !good[w] {
            all[ids[w]] = false;
        }
    }
    (0..ids.len()).map(|w| view_survivors[w] && all[ids[w]]).collect()
}

fn term_keys(atom: &crate::syntax::LinAtom) -> Result<Vec<Option<ClassKey>>, ModelError> {
    atom.summands()
        .iter()
        .map(|(_, t)| match t {
            Term::Budget(_) => Ok(None),
            Term::Cost(_, a) => Ok(Some(class_key(a)?)),
        })
        .collect()
}

/// Runs the labelling algorithm and returns every label it computed.
pub fn label(model: &Model, formula: &SpqFormula) -> Result<LabelStore, ModelError> {
    if let Some(a) = formula.agents().iter().find(|a| !model.has_agent(a)) {
        return Err(ModelError::UnknownAgent(a.name().to_string()));
    }
    let n = model.len();
    let list = sub_list(formula);
    let root = ContextView {
        survivors: vec![true; n],
        classes: model
            .agents()
            .iter()
            .map(|a| (a.clone(), model.relation(a).expect("known").labels().to_vec()))
            .collect(),
        budgets: model
            .agents()
            .iter()
            .map(|a| (a.clone(), (0..n).map(|w| model.budget(a, w).expect("known").clone()).collect()))
            .collect(),
    };
    let mut contexts: HashMap<QueryContext, ContextView> = HashMap::new();
    contexts.insert(QueryContext::default(), root);
    let mut labels: Vec<Vec<bool>> = Vec::with_capacity(list.len());

    for entry in &list.entries {
        let view = &contexts[&entry.context];
        let alive = &view.survivors;
        let row: Vec<bool> = match &entry.kind {
            EntryKind::True => alive.clone(),
            EntryKind::False => vec![false; n],
            EntryKind::Prop(p) => (0..n).map(|w| alive[w] && model.is_true(p, w)).collect(),
            EntryKind::Atom(atom) => {
                let keys = term_keys(atom)?;
                let bound = Rational::from(atom.bound());
                (0..n)
                    .map(|w| {
                        if !alive[w] {
                            return false;
                        }
                        let mut lhs = Rational::zero();
                        for ((coeff, term), key) in atom.summands().iter().zip(&keys) {
                            let value = match (term, key) {
                                (Term::Budget(i), _) => view.budgets[i][w].clone(),
                                (Term::Cost(i, _), Some(k)) => model.cost_by_key(i, w, k),
                                (Term::Cost(..), None) => unreachable!("cost terms have keys"),
                            };
                            lhs += &value.mul_int(*coeff);
                        }
                        lhs >= bound
                    })
                    .collect()
            }
            EntryKind::Not(a) => (0..n).map(|w| alive[w] && !labels[*a][w]).collect(),
            EntryKind::And(a, b) => (0..n).map(|w| labels[*a][w] && labels[*b][w]).collect(),
            EntryKind::Know(i, a) => {
                let (ids, count) = compact(&view.classes[i]);
                label_by_classes(alive, &ids, count, &labels[*a])
            }
            EntryKind::Common(g, a) => {
                let mut uf = UnionFind::new(n);
                for i in g.iter() {
                    let cls = &view.classes[i];
                    let mut first: HashMap<usize, usize> = HashMap::new();
                    for w in (0..n).filter(|&w| alive[w]) {
                        match first.get(&cls[w]) {
                            Some(&v) => uf.union(v, w),
                            None => {
                                first.insert(cls[w], w);
                            }
                        }
                    }
                }
                let ids: Vec<usize> = (0..n).map(|w| uf.find(w)).collect();
                let (ids, count) = compact(&ids);
                label_by_classes(alive, &ids, count, &labels[*a])
            }
            EntryKind::Marker { occurrence, question } => {
                let occ = &list.occurrences[*occurrence];
                let key = class_key(&occ.question)?;
                let size = occ.group.len();
                let mut bcs = vec![false; n];
                let mut shares = vec![Rational::zero(); n];
                for w in (0..n).filter(|&w| alive[w]) {
                    let min = occ
                        .group
                        .iter()
                        .map(|j| model.cost_by_key(j, w, &key))
                        .min()
                        .expect("nonempty group");
                    let s = min.div_count(size);
                    bcs[w] = occ.group.iter().all(|i| view.budgets[i][w] >= s);
                    shares[w] = s;
                }
                let answer = &labels[*question];
                let mut next = view.clone();
                next.survivors = bcs.clone();
                for i in occ.group.iter() {
                    let cls = next.classes.get_mut(i).expect("known agent");
                    let split: Vec<(usize, bool)> = (0..n).map(|w| (cls[w], answer[w])).collect();
                    *cls = Partition::from_labels(&split).labels().to_vec();
                    let budgets = next.budgets.get_mut(i).expect("known agent");
                    for w in (0..n).filter(|&w| bcs[w]) {
                        budgets[w] -= &shares[w];
                    }
                }
                contexts.insert(entry.context.extended(*occurrence), next);
                bcs
            }
            EntryKind::Query { marker, body } => {
                let bcs = &labels[*marker];
                (0..n).map(|w| alive[w] && (!bcs[w] || labels[*body][w])).collect()
            }
        };
        labels.push(row);
    }
    Ok(LabelStore { list, labels, contexts })
}

/// States where `φ` holds, computed by labelling subformulas bottom-up.
pub fn global_check(model: &Model, formula: &SpqFormula) -> Result<Vec<usize>, ModelError> {
    let store = label(model, formula)?;
    let last = store.labels.len() - 1;
    Ok(store.extension_of(last))
}
