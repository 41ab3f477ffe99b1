//! Formulas as written, before abbreviations are expanded.

use num::integer::Integer;
use num::{BigInt, One, ToPrimitive};

use super::{Agent, Group, LinAtom, PropFormula, SpqFormula, SyntaxError, Term};
use crate::linarith::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Ge,
    Le,
    Gt,
    Lt,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SurfaceTerm {
    Constant,
    Budget(Agent),
    Cost(Agent, Box<Surface>),
}

/// `Σ coefficient·term`; a constant summand uses `SurfaceTerm::Constant`.
pub type SurfaceSum = Vec<(Rational, SurfaceTerm)>;

#[derive(Clone, Debug, PartialEq)]
pub enum Surface {
    True,
    False,
    Prop(String),
    Compare(SurfaceSum, CmpOp, SurfaceSum),
    Not(Box<Surface>),
    And(Box<Surface>, Box<Surface>),
    Or(Box<Surface>, Box<Surface>),
    Implies(Box<Surface>, Box<Surface>),
    Iff(Box<Surface>, Box<Surface>),
    Know(Agent, Box<Surface>),
    /// `K̂` for a single agent, `Ê` for a larger group.
    Possible(Group, Box<Surface>),
    Everybody(Group, Box<Surface>),
    Common(Group, Box<Surface>),
    Query(Group, Box<Surface>, Box<Surface>),
    /// `⟨?_G^A⟩φ`.
    QueryDual(Group, Box<Surface>, Box<Surface>),
}

fn lcm_of_denominators<'a>(values: impl Iterator<Item = &'a Rational>) -> BigInt {
    values.fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

fn to_i64(r: &Rational) -> Result<i64, SyntaxError> {
    debug_assert!(r.is_integer());
    r.numer().to_i64().ok_or(SyntaxError::CoefficientOverflow)
}

fn desugar_compare(lhs: &SurfaceSum, op: CmpOp, rhs: &SurfaceSum) -> Result<SpqFormula, SyntaxError> {
    let mut summands: Vec<(Rational, Term)> = Vec::new();
    let mut constant = Rational::zero();
    for (sign, side) in [(1i64, lhs), (-1, rhs)] {
        for (coeff, term) in side {
            let c = coeff.mul_int(sign);
            match term {
                SurfaceTerm::Constant => constant -= &c,
                SurfaceTerm::Budget(a) => summands.push((c, Term::Budget(a.clone()))),
                SurfaceTerm::Cost(a, f) => summands.push((c, Term::Cost(a.clone(), desugar_prop(f)?))),
            }
        }
    }
    // Now `Σ summands op constant`.
    if summands.is_empty() {
        let zero = Rational::zero();
        let holds = match op {
            CmpOp::Ge => zero >= constant,
            CmpOp::Le => zero <= constant,
            CmpOp::Gt => zero > constant,
            CmpOp::Lt => zero < constant,
            CmpOp::Eq => zero == constant,
        };
        return Ok(if holds { SpqFormula::True } else { SpqFormula::False });
    }
    let scale = Rational::from(lcm_of_denominators(summands.iter().map(|(c, _)| c).chain([&constant])));
    let ints = summands
        .iter()
        .map(|(c, t)| Ok((to_i64(&(c * &scale))?, t.clone())))
        .collect::<Result<Vec<_>, SyntaxError>>()?;
    let bound = to_i64(&(&constant * &scale))?;
    let ge = LinAtom::new(ints, bound)?;
    let le = ge.flipped();
    Ok(match op {
        CmpOp::Ge => SpqFormula::Atom(ge),
        CmpOp::Le => SpqFormula::Atom(le),
        CmpOp::Lt => SpqFormula::not(SpqFormula::Atom(ge)),
        CmpOp::Gt => SpqFormula::not(SpqFormula::Atom(le)),
        CmpOp::Eq => SpqFormula::and(SpqFormula::Atom(ge), SpqFormula::Atom(le)),
    })
}

/// Expands every abbreviation into the core constructors.
pub fn desugar(formula: &Surface) -> Result<SpqFormula, SyntaxError> {
    let d = |f: &Surface| desugar(f);
    Ok(match formula {
        Surface::True => SpqFormula::True,
        Surface::False => SpqFormula::False,
        Surface::Prop(p) => SpqFormula::Prop(p.clone()),
        Surface::Compare(lhs, op, rhs) => desugar_compare(lhs, *op, rhs)?,
        Surface::Not(a) => SpqFormula::not(d(a)?),
        Surface::And(a, b) => SpqFormula::and(d(a)?, d(b)?),
        Surface::Or(a, b) => SpqFormula::or(d(a)?, d(b)?),
        Surface::Implies(a, b) => SpqFormula::implies(d(a)?, d(b)?),
        Surface::Iff(a, b) => SpqFormula::iff(d(a)?, d(b)?),
        Surface::Know(i, a) => SpqFormula::know(i.clone(), d(a)?),
        Surface::Possible(g, a) => {
            SpqFormula::not(SpqFormula::everybody(g, SpqFormula::not(d(a)?)))
        }
        Surface::Everybody(g, a) => SpqFormula::everybody(g, d(a)?),
        Surface::Common(g, a) => SpqFormula::common(g.clone(), d(a)?),
        Surface::Query(g, q, a) => SpqFormula::query(g.clone(), desugar_prop(q)?, d(a)?),
        Surface::QueryDual(g, q, a) => SpqFormula::not(SpqFormula::query(
            g.clone(),
            desugar_prop(q)?,
            SpqFormula::not(d(a)?),
        )),
    })
}

/// Expands a formula that must be propositional.
pub fn desugar_prop(formula: &Surface) -> Result<PropFormula, SyntaxError> {
    let d = |f: &Surface| desugar_prop(f);
    Ok(match formula {
        Surface::True => PropFormula::True,
        Surface::False => PropFormula::False,
        Surface::Prop(p) => PropFormula::Var(p.clone()),
        Surface::Not(a) => PropFormula::not(d(a)?),
        Surface::And(a, b) => PropFormula::and(d(a)?, d(b)?),
        Surface::Or(a, b) => PropFormula::or(d(a)?, d(b)?),
        Surface::Implies(a, b) => PropFormula::implies(d(a)?, d(b)?),
        Surface::Iff(a, b) => {
            PropFormula::and(PropFormula::implies(d(a)?, d(b)?), PropFormula::implies(d(b)?, d(a)?))
        }
        _ => return Err(SyntaxError::NotPropositional),
    })
}
