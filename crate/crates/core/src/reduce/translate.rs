use std::fmt;

use super::ReduceError;
use crate::syntax::{bcs_formula, complexity, complexity_prop, subst_inequality, Group, PropFormula, SpqFormula};

/// The reduction axiom applied at one step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `[?]⊤ ↔ ⊤`.
    Top,
    /// `[?]⊥ ↔ ¬BCS`.
    Bottom,
    Prop,
    Inequality,
    Not,
    And,
    /// Knowledge of an agent outside the group.
    KnowOutside,
    /// Knowledge of a group member.
    KnowMember,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Top => "r_top",
            Rule::Bottom => "r_bot",
            Rule::Prop => "r_p",
            Rule::Inequality => "r_ge",
            Rule::Not => "r_not",
            Rule::And => "r_and",
            Rule::KnowOutside => "r_K1",
            Rule::KnowMember => "r_K2",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One rewrite of a query redex. `after` is the weight of the axiom's right
/// side with BCS and the substituted inequality counted as atoms and `→`
/// as a single connective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteStep {
    pub rule: Rule,
    pub redex: SpqFormula,
    pub before: u64,
    pub after: u64,
}

/// The right side of an axiom, keeping boxes and BCS opaque.
enum Shape {
    Leaf(u64),
    Not(Box<Shape>),
    And(Box<Shape>, Box<Shape>),
    Implies(Box<Shape>, Box<Shape>),
    Know(Box<Shape>),
}

impl Shape {
    fn weight(&self) -> u64 {
        match self {
            Shape::Leaf(c) => *c,
            Shape::Not(a) | Shape::Know(a) => a.weight().saturating_add(1),
            Shape::And(a, b) | Shape::Implies(a, b) => a.weight().max(b.weight()).saturating_add(1),
        }
    }
}

fn leaf(c: u64) -> Box<Shape> {
    Box::new(Shape::Leaf(c))
}

fn boxed_weight(group: &Group, question: &PropFormula, body: &SpqFormula) -> u64 {
    complexity(&SpqFormula::query(group.clone(), question.clone(), body.clone()))
}

struct Translator {
    trace: Vec<RewriteStep>,
}

impl Translator {
    fn record(&mut self, rule: Rule, redex: SpqFormula, shape: Shape) {
        let before = complexity(&redex);
        let after = shape.weight();
        assert!(after < before, "rule {rule} does not decrease complexity on {redex}: {before} -> {after}");
        self.trace.push(RewriteStep { rule, redex, before, after });
    }

    fn translate(&mut self, f: &SpqFormula) -> Result<SpqFormula, ReduceError> {
        Ok(match f {
            SpqFormula::True | SpqFormula::False | SpqFormula::Prop(_) | SpqFormula::Atom(_) => f.clone(),
            SpqFormula::Not(a) => SpqFormula::not(self.translate(a)?),
            SpqFormula::And(a, b) => SpqFormula::and(self.translate(a)?, self.translate(b)?),
            SpqFormula::Know(i, a) => SpqFormula::know(i.clone(), self.translate(a)?),
            SpqFormula::Common(g, a) => SpqFormula::common(g.clone(), self.translate(a)?),
            SpqFormula::Query(g, q, a) => {
                let body = self.translate(a)?;
                self.reduce(g, q, &body)?
            }
        })
    }

    /// Eliminates `[?_G^A]` in front of a query-free body.
    fn reduce(&mut self, g: &Group, q: &PropFormula, body: &SpqFormula) -> Result<SpqFormula, ReduceError> {
        let redex = SpqFormula::query(g.clone(), q.clone(), body.clone());
        let bcs = || bcs_formula(g, q);
        Ok(match body {
            SpqFormula::True => {
                self.record(Rule::Top, redex, Shape::Leaf(1));
                SpqFormula::True
            }
            SpqFormula::False => {
                self.record(Rule::Bottom, redex, Shape::Not(leaf(1)));
                SpqFormula::not(bcs())
            }
            SpqFormula::Prop(_) => {
                self.record(Rule::Prop, redex, Shape::Implies(leaf(1), leaf(1)));
                SpqFormula::implies(bcs(), body.clone())
            }
            SpqFormula::Atom(atom) => {
                self.record(Rule::Inequality, redex, Shape::Implies(leaf(1), leaf(1)));
                SpqFormula::implies(bcs(), subst_inequality(atom, g, q)?)
            }
            SpqFormula::Not(a) => {
                let inner = boxed_weight(g, q, a);
                self.record(Rule::Not, redex, Shape::Implies(leaf(1), Box::new(Shape::Not(leaf(inner)))));
                SpqFormula::implies(bcs(), SpqFormula::not(self.reduce(g, q, a)?))
            }
            SpqFormula::And(a, b) => {
                let shape = Shape::And(leaf(boxed_weight(g, q, a)), leaf(boxed_weight(g, q, b)));
                self.record(Rule::And, redex, shape);
                SpqFormula::and(self.reduce(g, q, a)?, self.reduce(g, q, b)?)
            }
            SpqFormula::Know(i, a) if !g.contains(i) => {
                let inner = boxed_weight(g, q, a);
                self.record(Rule::KnowOutside, redex, Shape::Implies(leaf(1), Box::new(Shape::Know(leaf(inner)))));
                SpqFormula::implies(bcs(), SpqFormula::know(i.clone(), self.reduce(g, q, a)?))
            }
            SpqFormula::Know(i, a) => {
                let inner = boxed_weight(g, q, a);
                let answers = [q.clone(), PropFormula::not(q.clone())];
                let conjunct = |ans: &PropFormula| {
                    let c = complexity_prop(ans);
                    Shape::Implies(
                        leaf(c),
                        Box::new(Shape::Know(Box::new(Shape::Implies(leaf(c), leaf(inner))))),
                    )
                };
                let shape = Shape::Implies(leaf(1), Box::new(Shape::And(Box::new(conjunct(&answers[0])), Box::new(conjunct(&answers[1])))));
                self.record(Rule::KnowMember, redex, shape);
                let reduced = self.reduce(g, q, a)?;
                let parts = answers.iter().map(|ans| {
                    let ans = ans.to_spq();
                    SpqFormula::implies(ans.clone(), SpqFormula::know(i.clone(), SpqFormula::implies(ans, reduced.clone())))
                });
                SpqFormula::implies(bcs(), SpqFormula::conj(parts))
            }
            SpqFormula::Common(..) => return Err(ReduceError::NotReducible(body.clone())),
            SpqFormula::Query(..) => unreachable!("bodies are translated before reduction"),
        })
    }
}

/// Rewrites away every query, innermost first, and records each step.
pub fn translate_traced(formula: &SpqFormula) -> Result<(SpqFormula, Vec<RewriteStep>), ReduceError> {
    if let Some(c) = formula.common_under_query() {
        return Err(ReduceError::NotReducible(c.clone()));
    }
    let mut t = Translator { trace: Vec::new() };
    let out = t.translate(formula)?;
    Ok((out, t.trace))
}

/// An equivalent formula without queries.
pub fn translate(formula: &SpqFormula) -> Result<SpqFormula, ReduceError> {
    translate_traced(formula).map(|(f, _)| f)
}
