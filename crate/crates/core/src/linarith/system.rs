use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::Rational;

/// Relation of a linear constraint `Σ aᵥ·v  rel  bound`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Ge,
    Gt,
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Eq => "=",
        })
    }
}

/// `Σ coefficients[v]·v  relation  bound` over opaque variable identifiers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinConstraint {
    coefficients: BTreeMap<String, Rational>,
    relation: Relation,
    bound: Rational,
}

impl LinConstraint {
    /// Repeated variables are summed and zero coefficients dropped; a
    /// constraint left with no variables is a ground truth or falsity.
    pub fn new<I, S>(coefficients: I, relation: Relation, bound: Rational) -> Self
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        let mut map: BTreeMap<String, Rational> = BTreeMap::new();
        for (var, coeff) in coefficients {
            *map.entry(var.into()).or_default() += &coeff;
        }
        map.retain(|_, c| !c.is_zero());
        LinConstraint { coefficients: map, relation, bound }
    }

    pub fn ge<I, S>(coefficients: I, bound: Rational) -> Self
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        Self::new(coefficients, Relation::Ge, bound)
    }

    pub fn gt<I, S>(coefficients: I, bound: Rational) -> Self
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        Self::new(coefficients, Relation::Gt, bound)
    }

    pub fn eq<I, S>(coefficients: I, bound: Rational) -> Self
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        Self::new(coefficients, Relation::Eq, bound)
    }

    pub fn coefficients(&self) -> &BTreeMap<String, Rational> {
        &self.coefficients
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn bound(&self) -> &Rational {
        &self.bound
    }

    pub fn is_ground(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Multiplies both sides by `factor`, which must be positive.
    pub fn scaled(&self, factor: &Rational) -> LinConstraint {
        assert!(factor.is_positive(), "scaling factor must be positive");
        LinConstraint {
            coefficients: self
                .coefficients
                .iter()
                .map(|(v, c)| (v.clone(), c * factor))
                .collect(),
            relation: self.relation,
            bound: &self.bound * factor,
        }
    }

    pub fn lhs_value(&self, assignment: &BTreeMap<String, Rational>) -> Rational {
        self.coefficients
            .iter()
            .map(|(v, c)| match assignment.get(v) {
                Some(x) => c * x,
                None => Rational::zero(),
            })
            .sum()
    }

    /// Truth under `assignment`; unassigned variables read as zero.
    pub fn holds(&self, assignment: &BTreeMap<String, Rational>) -> bool {
        let lhs = self.lhs_value(assignment);
        match self.relation {
            Relation::Ge => lhs >= self.bound,
            Relation::Gt => lhs > self.bound,
            Relation::Eq => lhs == self.bound,
        }
    }
}

impl fmt::Display for LinConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            f.write_str("0")?;
        }
        for (idx, (v, c)) in self.coefficients.iter().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*{v}")?;
        }
        write!(f, " {} {}", self.relation, self.bound)
    }
}

/// A finite conjunction of linear constraints.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinSystem {
    constraints: Vec<LinConstraint>,
}

impl LinSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, constraint: LinConstraint) {
        self.constraints.push(constraint);
    }

    pub fn extend<I: IntoIterator<Item = LinConstraint>>(&mut self, constraints: I) {
        self.constraints.extend(constraints);
    }

    pub fn constraints(&self) -> &[LinConstraint] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.constraints
            .iter()
            .flat_map(|c| c.coefficients.keys().cloned())
            .collect()
    }

    pub fn is_satisfied_by(&self, assignment: &BTreeMap<String, Rational>) -> bool {
        self.constraints.iter().all(|c| c.holds(assignment))
    }
}

impl FromIterator<LinConstraint> for LinSystem {
    fn from_iter<T: IntoIterator<Item = LinConstraint>>(iter: T) -> Self {
        LinSystem { constraints: iter.into_iter().collect() }
    }
}

/// Outcome of a feasibility check. A feasible witness assigns every variable
/// of the system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(BTreeMap<String, Rational>),
    Infeasible,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn witness(&self) -> Option<&BTreeMap<String, Rational>> {
        match self {
            Feasibility::Feasible(w) => Some(w),
            Feasibility::Infeasible => None,
        }
    }
}
