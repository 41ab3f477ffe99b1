use std::collections::HashMap;
use std::fmt;

use crate::syntax::{Agent, Group, LinAtom, PropFormula, SpqFormula};

/// One syntactic occurrence of a query operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryOccurrence {
    pub id: usize,
    pub group: Group,
    pub question: PropFormula,
}

/// The sequence of query occurrences whose scope an entry lies in,
/// outermost first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QueryContext(pub Vec<usize>);

impl QueryContext {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn extended(&self, occurrence: usize) -> QueryContext {
        let mut v = self.0.clone();
        v.push(occurrence);
        QueryContext(v)
    }

    pub fn is_proper_prefix_of(&self, other: &QueryContext) -> bool {
        self.0.len() < other.0.len() && other.0.starts_with(&self.0)
    }
}

/// How an entry's labels are computed; children are entry indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EntryKind {
    True,
    False,
    Prop(String),
    Atom(LinAtom),
    Not(usize),
    And(usize, usize),
    Know(Agent, usize),
    Common(Group, usize),
    /// The bare query operator; `question` labels the question at the same context.
    Marker { occurrence: usize, question: usize },
    /// A boxed formula; `body` sits in the context extended by the occurrence.
    Query { marker: usize, body: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubEntry {
    /// `None` for a bare query marker.
    pub formula: Option<SpqFormula>,
    pub context: QueryContext,
    pub kind: EntryKind,
}

impl SubEntry {
    pub fn is_marker(&self) -> bool {
        matches!(self.kind, EntryKind::Marker { .. })
    }
}

/// Subformulas and query markers labelled with their contexts, ordered so
/// that every entry comes after the entries it depends on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedSubList {
    pub entries: Vec<SubEntry>,
    pub occurrences: Vec<QueryOccurrence>,
}

struct Builder {
    entries: Vec<SubEntry>,
    occurrences: Vec<QueryOccurrence>,
    index: HashMap<(SpqFormula, QueryContext), usize>,
}

impl Builder {
    fn push(&mut self, formula: Option<SpqFormula>, context: QueryContext, kind: EntryKind) -> usize {
        let k = self.entries.len();
        if let Some(f) = &formula {
            self.index.insert((f.clone(), context.clone()), k);
        }
        self.entries.push(SubEntry { formula, context, kind });
        k
    }

    fn visit(&mut self, f: &SpqFormula, ctx: &QueryContext) -> usize {
        if let Some(&k) = self.index.get(&(f.clone(), ctx.clone())) {
            return k;
        }
        let kind = match f {
            SpqFormula::True => EntryKind::True,
            SpqFormula::False => EntryKind::False,
            SpqFormula::Prop(p) => EntryKind::Prop(p.clone()),
            SpqFormula::Atom(a) => EntryKind::Atom(a.clone()),
            SpqFormula::Not(a) => EntryKind::Not(self.visit(a, ctx)),
            SpqFormula::And(a, b) => {
                let x = self.visit(a, ctx);
                let y = self.visit(b, ctx);
                EntryKind::And(x, y)
            }
            SpqFormula::Know(i, a) => EntryKind::Know(i.clone(), self.visit(a, ctx)),
            SpqFormula::Common(g, a) => EntryKind::Common(g.clone(), self.visit(a, ctx)),
            SpqFormula::Query(g, q, a) => {
                let question = self.visit(&q.to_spq(), ctx);
                let occurrence = self.occurrences.len();
                self.occurrences.push(QueryOccurrence { id: occurrence, group: g.clone(), question: q.clone() });
                let marker = self.push(None, ctx.clone(), EntryKind::Marker { occurrence, question });
                let body = self.visit(a, &ctx.extended(occurrence));
                EntryKind::Query { marker, body }
            }
        };
        self.push(Some(f.clone()), ctx.clone(), kind)
    }
}

/// The ordered list of labelled subformulas and query markers of `φ`.
pub fn sub_list(formula: &SpqFormula) -> OrderedSubList {
    let mut b = Builder { entries: Vec::new(), occurrences: Vec::new(), index: HashMap::new() };
    b.visit(formula, &QueryContext::default());
    OrderedSubList { entries: b.entries, occurrences: b.occurrences }
}

impl OrderedSubList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Renders an entry as `formula^[?_G^A],…`.
    pub fn describe(&self, k: usize) -> String {
        let e = &self.entries[k];
        let op = |occ: usize| {
            let o = &self.occurrences[occ];
            format!("[?{}:{}]", o.group, o.question)
        };
        let head = match (&e.formula, &e.kind) {
            (_, EntryKind::Marker { occurrence, .. }) => op(*occurrence),
            (Some(f), _) => f.to_string(),
            (None, _) => unreachable!("only markers lack a formula"),
        };
        if e.context.is_empty() {
            head
        } else {
            let ctx: Vec<String> = e.context.0.iter().map(|&o| op(o)).collect();
            format!("({head})^{}", ctx.join(","))
        }
    }
}

impl fmt::Display for OrderedSubList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = (0..self.len()).map(|k| self.describe(k)).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}
