use std::collections::BTreeSet;
use std::fmt;

use super::SyntaxError;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Agent(String);

impl Agent {
    pub fn new(name: impl Into<String>) -> Self {
        Agent(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Agent {
    fn from(s: &str) -> Self {
        Agent::new(s)
    }
}

/// A nonempty set of agents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Group(BTreeSet<Agent>);

impl Group {
    pub fn new<I, A>(members: I) -> Result<Self, SyntaxError>
    where
        I: IntoIterator<Item = A>,
        A: Into<Agent>,
    {
        let set: BTreeSet<Agent> = members.into_iter().map(Into::into).collect();
        if set.is_empty() {
            return Err(SyntaxError::EmptyGroup);
        }
        Ok(Group(set))
    }

    pub fn singleton(agent: impl Into<Agent>) -> Self {
        Group(BTreeSet::from([agent.into()]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    // A group is never empty; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, agent: &Agent) -> bool {
        self.0.contains(agent)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Agent> {
        self.0.iter()
    }

    pub fn members(&self) -> &BTreeSet<Agent> {
        &self.0
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Formulas of the propositional sublanguage.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PropFormula {
    True,
    False,
    Var(String),
    Not(Box<PropFormula>),
    And(Box<PropFormula>, Box<PropFormula>),
}

impl PropFormula {
    pub fn var(name: impl Into<String>) -> Self {
        PropFormula::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: PropFormula) -> Self {
        PropFormula::Not(Box::new(a))
    }

    pub fn and(a: PropFormula, b: PropFormula) -> Self {
        PropFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: PropFormula, b: PropFormula) -> Self {
        Self::not(Self::and(Self::not(a), Self::not(b)))
    }

    pub fn implies(a: PropFormula, b: PropFormula) -> Self {
        Self::not(Self::and(a, Self::not(b)))
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            PropFormula::True | PropFormula::False => {}
            PropFormula::Var(v) => {
                out.insert(v.clone());
            }
            PropFormula::Not(a) => a.collect_vars(out),
            PropFormula::And(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn eval(&self, valuation: &impl Fn(&str) -> bool) -> bool {
        match self {
            PropFormula::True => true,
            PropFormula::False => false,
            PropFormula::Var(v) => valuation(v),
            PropFormula::Not(a) => !a.eval(valuation),
            PropFormula::And(a, b) => a.eval(valuation) && b.eval(valuation),
        }
    }

    /// The same formula as a member of the full language.
    pub fn to_spq(&self) -> SpqFormula {
        match self {
            PropFormula::True => SpqFormula::True,
            PropFormula::False => SpqFormula::False,
            PropFormula::Var(v) => SpqFormula::Prop(v.clone()),
            PropFormula::Not(a) => SpqFormula::not(a.to_spq()),
            PropFormula::And(a, b) => SpqFormula::and(a.to_spq(), b.to_spq()),
        }
    }
}

/// Budget `b_i` or cost `c_i(A)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Budget(Agent),
    Cost(Agent, PropFormula),
}

impl Term {
    pub fn agent(&self) -> &Agent {
        match self {
            Term::Budget(a) | Term::Cost(a, _) => a,
        }
    }
}

/// `z₁t₁ + … + zₙtₙ ≥ z` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinAtom {
    summands: Vec<(i64, Term)>,
    bound: i64,
}

impl LinAtom {
    pub fn new(summands: Vec<(i64, Term)>, bound: i64) -> Result<Self, SyntaxError> {
        if summands.is_empty() {
            return Err(SyntaxError::EmptyLinearSum);
        }
        Ok(LinAtom { summands, bound })
    }

    pub fn summands(&self) -> &[(i64, Term)] {
        &self.summands
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.summands.iter().map(|(_, t)| t)
    }

    /// `-t ≥ -z`, i.e. the atom `t ≤ z`.
    pub fn flipped(&self) -> LinAtom {
        LinAtom {
            summands: self.summands.iter().map(|(c, t)| (-c, t.clone())).collect(),
            bound: -self.bound,
        }
    }
}

/// Formulas of the full language in core form: all abbreviations removed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpqFormula {
    True,
    False,
    Prop(String),
    Atom(LinAtom),
    Not(Box<SpqFormula>),
    And(Box<SpqFormula>, Box<SpqFormula>),
    Know(Agent, Box<SpqFormula>),
    Common(Group, Box<SpqFormula>),
    Query(Group, PropFormula, Box<SpqFormula>),
}

impl SpqFormula {
    pub fn prop(name: impl Into<String>) -> Self {
        SpqFormula::Prop(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: SpqFormula) -> Self {
        SpqFormula::Not(Box::new(a))
    }

    pub fn and(a: SpqFormula, b: SpqFormula) -> Self {
        SpqFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: SpqFormula, b: SpqFormula) -> Self {
        Self::not(Self::and(Self::not(a), Self::not(b)))
    }

    pub fn implies(a: SpqFormula, b: SpqFormula) -> Self {
        Self::not(Self::and(a, Self::not(b)))
    }

    pub fn iff(a: SpqFormula, b: SpqFormula) -> Self {
        Self::and(Self::implies(a.clone(), b.clone()), Self::implies(b, a))
    }

    pub fn know(agent: impl Into<Agent>, a: SpqFormula) -> Self {
        SpqFormula::Know(agent.into(), Box::new(a))
    }

    pub fn common(group: Group, a: SpqFormula) -> Self {
        SpqFormula::Common(group, Box::new(a))
    }

    pub fn query(group: Group, question: PropFormula, a: SpqFormula) -> Self {
        SpqFormula::Query(group, question, Box::new(a))
    }

    /// `E_G φ = ⋀_{i∈G} K_i φ`.
    pub fn everybody(group: &Group, a: SpqFormula) -> Self {
        Self::conj(group.iter().map(|i| Self::know(i.clone(), a.clone())))
    }

    pub fn atom(atom: LinAtom) -> Self {
        SpqFormula::Atom(atom)
    }

    /// Left-nested conjunction; `True` when empty.
    pub fn conj<I: IntoIterator<Item = SpqFormula>>(items: I) -> Self {
        items
            .into_iter()
            .reduce(Self::and)
            .unwrap_or(SpqFormula::True)
    }

    /// Left-nested disjunction; `False` when empty.
    pub fn disj<I: IntoIterator<Item = SpqFormula>>(items: I) -> Self {
        items
            .into_iter()
            .reduce(Self::or)
            .unwrap_or(SpqFormula::False)
    }

    /// The propositional formula this is, if it uses only letters, constants,
    /// negation and conjunction.
    pub fn as_prop(&self) -> Option<PropFormula> {
        Some(match self {
            SpqFormula::True => PropFormula::True,
            SpqFormula::False => PropFormula::False,
            SpqFormula::Prop(p) => PropFormula::Var(p.clone()),
            SpqFormula::Not(a) => PropFormula::not(a.as_prop()?),
            SpqFormula::And(a, b) => PropFormula::and(a.as_prop()?, b.as_prop()?),
            _ => return None,
        })
    }

    pub fn is_query_free(&self) -> bool {
        match self {
            SpqFormula::True | SpqFormula::False | SpqFormula::Prop(_) | SpqFormula::Atom(_) => true,
            SpqFormula::Not(a) | SpqFormula::Know(_, a) | SpqFormula::Common(_, a) => a.is_query_free(),
            SpqFormula::And(a, b) => a.is_query_free() && b.is_query_free(),
            SpqFormula::Query(..) => false,
        }
    }

    pub fn contains_common(&self) -> bool {
        match self {
            SpqFormula::True | SpqFormula::False | SpqFormula::Prop(_) | SpqFormula::Atom(_) => false,
            SpqFormula::Common(..) => true,
            SpqFormula::Not(a) | SpqFormula::Know(_, a) | SpqFormula::Query(_, _, a) => a.contains_common(),
            SpqFormula::And(a, b) => a.contains_common() || b.contains_common(),
        }
    }

    /// First common-knowledge subformula that sits inside the scope of a query.
    pub fn common_under_query(&self) -> Option<&SpqFormula> {
        fn walk(f: &SpqFormula, under: bool) -> Option<&SpqFormula> {
            match f {
                SpqFormula::True | SpqFormula::False | SpqFormula::Prop(_) | SpqFormula::Atom(_) => None,
                SpqFormula::Common(_, a) => {
                    if under {
                        Some(f)
                    } else {
                        walk(a, under)
                    }
                }
                SpqFormula::Not(a) | SpqFormula::Know(_, a) => walk(a, under),
                SpqFormula::And(a, b) => walk(a, under).or_else(|| walk(b, under)),
                SpqFormula::Query(_, _, a) => walk(a, true),
            }
        }
        walk(self, false)
    }

    /// Immediate subformulas; a query's question counts as one.
    pub fn children(&self) -> Vec<SpqFormula> {
        match self {
            SpqFormula::True | SpqFormula::False | SpqFormula::Prop(_) | SpqFormula::Atom(_) => vec![],
            SpqFormula::Not(a) | SpqFormula::Know(_, a) | SpqFormula::Common(_, a) => vec![(**a).clone()],
            SpqFormula::And(a, b) => vec![(**a).clone(), (**b).clone()],
            SpqFormula::Query(_, q, a) => vec![q.to_spq(), (**a).clone()],
        }
    }

    /// `Sub(φ)`: every subformula, children before parents, without repeats.
    pub fn subformulas(&self) -> Vec<SpqFormula> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        fn visit(f: &SpqFormula, seen: &mut BTreeSet<SpqFormula>, out: &mut Vec<SpqFormula>) {
            for child in f.children() {
                visit(&child, seen, out);
            }
            if seen.insert(f.clone()) {
                out.push(f.clone());
            }
        }
        visit(self, &mut seen, &mut out);
        out
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + match self {
            SpqFormula::True | SpqFormula::False | SpqFormula::Prop(_) | SpqFormula::Atom(_) => 0,
            SpqFormula::Not(a) | SpqFormula::Know(_, a) | SpqFormula::Common(_, a) => a.size(),
            SpqFormula::And(a, b) => a.size() + b.size(),
            SpqFormula::Query(_, q, a) => q.to_spq().size() + a.size(),
        }
    }

    pub fn agents(&self) -> BTreeSet<Agent> {
        let mut out = BTreeSet::new();
        self.collect_agents(&mut out);
        out
    }

    fn collect_agents(&self, out: &mut BTreeSet<Agent>) {
        match self {
            SpqFormula::True | SpqFormula::False | SpqFormula::Prop(_) => {}
            SpqFormula::Atom(atom) => out.extend(atom.terms().map(|t| t.agent().clone())),
            SpqFormula::Not(a) => a.collect_agents(out),
            SpqFormula::And(a, b) => {
                a.collect_agents(out);
                b.collect_agents(out);
            }
            SpqFormula::Know(i, a) => {
                out.insert(i.clone());
                a.collect_agents(out);
            }
            SpqFormula::Common(g, a) | SpqFormula::Query(g, _, a) => {
                out.extend(g.iter().cloned());
                a.collect_agents(out);
            }
        }
    }

    /// Propositional letters, including those inside cost terms and questions.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            SpqFormula::True | SpqFormula::False => {}
            SpqFormula::Prop(p) => {
                out.insert(p.clone());
            }
            SpqFormula::Atom(atom) => {
                for t in atom.terms() {
                    if let Term::Cost(_, a) = t {
                        out.extend(a.vars());
                    }
                }
            }
            SpqFormula::Not(a) | SpqFormula::Know(_, a) | SpqFormula::Common(_, a) => a.collect_vars(out),
            SpqFormula::And(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            SpqFormula::Query(_, q, a) => {
                out.extend(q.vars());
                a.collect_vars(out);
            }
        }
    }

    /// Propositional letters that occur as formulas (not only inside terms or questions).
    pub fn letters(&self) -> BTreeSet<String> {
        self.subformulas()
            .into_iter()
            .filter_map(|f| match f {
                SpqFormula::Prop(p) => Some(p),
                _ => None,
            })
            .collect()
    }

    /// Distinct inequality atoms, in first-occurrence order.
    pub fn atoms(&self) -> Vec<LinAtom> {
        let mut out: Vec<LinAtom> = Vec::new();
        for f in self.subformulas() {
            if let SpqFormula::Atom(a) = f {
                if !out.contains(&a) {
                    out.push(a);
                }
            }
        }
        out
    }

    /// Propositional formulas under cost terms.
    pub fn cost_formulas(&self) -> Vec<PropFormula> {
        let mut out: Vec<PropFormula> = Vec::new();
        for atom in self.atoms() {
            for t in atom.terms() {
                if let Term::Cost(_, a) = t {
                    if !out.contains(a) {
                        out.push(a.clone());
                    }
                }
            }
        }
        out
    }
}

impl From<PropFormula> for SpqFormula {
    fn from(p: PropFormula) -> Self {
        p.to_spq()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> SpqFormula {
        SpqFormula::prop("p")
    }

    #[test]
    fn empty_group_rejected() {
        assert_eq!(Group::new(Vec::<Agent>::new()), Err(SyntaxError::EmptyGroup));
        assert_eq!(Group::new(["n", "m", "n"]).unwrap().len(), 2);
    }

    #[test]
    fn subformulas_of_letter() {
        assert_eq!(p().subformulas(), vec![p()]);
    }

    #[test]
    fn subformulas_of_conjunction() {
        let kp = SpqFormula::know("i", p());
        let f = SpqFormula::and(kp.clone(), SpqFormula::prop("q"));
        let subs: BTreeSet<_> = f.subformulas().into_iter().collect();
        let expected: BTreeSet<_> = [p(), SpqFormula::prop("q"), kp, f.clone()].into_iter().collect();
        assert_eq!(subs, expected);
    }

    #[test]
    fn subformulas_of_query() {
        let g = Group::singleton("n");
        let kp = SpqFormula::know("i", p());
        let f = SpqFormula::query(g, PropFormula::var("p"), kp.clone());
        assert_eq!(f.subformulas(), vec![p(), kp, f.clone()]);
    }

    #[test]
    fn common_under_query_detection() {
        let g = Group::new(["a", "b"]).unwrap();
        let ck = SpqFormula::common(g.clone(), p());
        assert!(ck.common_under_query().is_none());
        let q = SpqFormula::query(g.clone(), PropFormula::var("p"), SpqFormula::know("a", ck.clone()));
        assert_eq!(q.common_under_query(), Some(&ck));
        let outer = SpqFormula::common(g.clone(), SpqFormula::query(g, PropFormula::var("p"), p()));
        assert!(outer.common_under_query().is_none());
    }

    #[test]
    fn everybody_expands_to_conjunction() {
        let g = Group::new(["n", "m"]).unwrap();
        let e = SpqFormula::everybody(&g, p());
        assert_eq!(e, SpqFormula::and(SpqFormula::know("m", p()), SpqFormula::know("n", p())));
    }
}
