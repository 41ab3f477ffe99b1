use std::collections::BTreeMap;

use crate::linarith::{LinConstraint, LinSystem, Rational};
use crate::model::Partition;
use crate::syntax::{class_key, Agent, ClassKey, LinAtom, PropFormula, SpqFormula, SyntaxError, Term};

/// The inequality atoms and cost classes of a static formula, indexed.
#[derive(Clone, Debug)]
pub struct Signature {
    pub agents: Vec<Agent>,
    pub letters: Vec<String>,
    pub atoms: Vec<LinAtom>,
    /// Non-tautological cost classes with a representative formula each.
    pub classes: Vec<(ClassKey, PropFormula)>,
}

impl Signature {
    pub fn of(formula: &SpqFormula) -> Result<Signature, SyntaxError> {
        let mut classes: Vec<(ClassKey, PropFormula)> = Vec::new();
        for a in formula.cost_formulas() {
            let key = class_key(&a)?;
            if !key.is_tautology_class() && !classes.iter().any(|(k, _)| *k == key) {
                classes.push((key, a));
            }
        }
        Ok(Signature {
            agents: formula.agents().into_iter().collect(),
            letters: formula.letters().into_iter().collect(),
            atoms: formula.atoms(),
            classes,
        })
    }

    pub fn budget_var(agent: &Agent, w: usize) -> String {
        format!("b[{agent}]@{w}")
    }

    pub fn cost_var(agent: &Agent, class: usize, w: usize) -> String {
        format!("c[{agent}]#{class}@{w}")
    }

    /// The variable a term denotes at `w`; `None` for tautology-class costs,
    /// which are zero.
    fn term_var(&self, term: &Term, w: usize) -> Result<Option<String>, SyntaxError> {
        Ok(match term {
            Term::Budget(i) => Some(Self::budget_var(i, w)),
            Term::Cost(i, a) => {
                let key = class_key(a)?;
                self.classes
                    .iter()
                    .position(|(k, _)| *k == key)
                    .map(|c| Self::cost_var(i, c, w))
            }
        })
    }

    /// The linear constraints at `w` given the pseudo-truth of each atom:
    /// atoms as assumed, then nonnegativity of every budget and cost.
    /// Similar cost formulas share one variable and tautology-class costs
    /// are the constant zero.
    pub fn build_i(&self, w: usize, pseudo: &[bool]) -> Result<LinSystem, SyntaxError> {
        let mut sys = LinSystem::new();
        for (atom, &truth) in self.atoms.iter().zip(pseudo) {
            let mut coefficients = Vec::new();
            for (a, t) in atom.summands() {
                if let Some(v) = self.term_var(t, w)? {
                    coefficients.push((v, Rational::from(*a)));
                }
            }
            let bound = Rational::from(atom.bound());
            sys.push(if truth {
                LinConstraint::ge(coefficients, bound)
            } else {
                LinConstraint::gt(coefficients.into_iter().map(|(v, a)| (v, -a)), -bound)
            });
        }
        for i in &self.agents {
            sys.push(LinConstraint::ge([(Self::budget_var(i, w), Rational::one())], Rational::zero()));
            for c in 0..self.classes.len() {
                sys.push(LinConstraint::ge([(Self::cost_var(i, c, w), Rational::one())], Rational::zero()));
            }
        }
        Ok(sys)
    }
}

/// A model skeleton whose inequality atoms carry assumed truth values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreStructure {
    pub states: usize,
    pub relations: BTreeMap<Agent, Partition>,
    /// Truth of each letter of the signature, per state.
    pub valuation: BTreeMap<String, Vec<bool>>,
    /// `pseudo[w][k]` is the assumed truth of atom `k` at `w`.
    pub pseudo: Vec<Vec<bool>>,
}

impl PreStructure {
    /// Extension of a query-free formula, reading inequality atoms from the
    /// pseudo-truth table.
    pub fn extension(&self, sig: &Signature, formula: &SpqFormula) -> Vec<bool> {
        let n = self.states;
        match formula {
            SpqFormula::True => vec![true; n],
            SpqFormula::False => vec![false; n],
            SpqFormula::Prop(p) => self.valuation.get(p).cloned().unwrap_or_else(|| vec![false; n]),
            SpqFormula::Atom(a) => {
                let k = sig.atoms.iter().position(|x| x == a).expect("atom of the signature");
                (0..n).map(|w| self.pseudo[w][k]).collect()
            }
            SpqFormula::Not(a) => self.extension(sig, a).into_iter().map(|b| !b).collect(),
            SpqFormula::And(a, b) => {
                let (x, y) = (self.extension(sig, a), self.extension(sig, b));
                x.into_iter().zip(y).map(|(p, q)| p && q).collect()
            }
            SpqFormula::Know(i, a) => {
                let inner = self.extension(sig, a);
                everywhere_in_class(self.relations[i].labels(), &inner)
            }
            SpqFormula::Common(g, a) => {
                let inner = self.extension(sig, a);
                let mut comp: Vec<usize> = (0..n).collect();
                // Merge classes of all members until stable; n is tiny here.
                loop {
                    let mut changed = false;
                    for i in g.iter() {
                        let p = &self.relations[i];
                        for u in 0..n {
                            for v in 0..n {
                                if p.related(u, v) && comp[u] != comp[v] {
                                    let (lo, hi) = (comp[u].min(comp[v]), comp[u].max(comp[v]));
                                    comp.iter_mut().filter(|c| **c == hi).for_each(|c| *c = lo);
                                    changed = true;
                                }
                            }
                        }
                    }
                    if !changed {
                        break;
                    }
                }
                everywhere_in_class(&comp, &inner)
            }
            SpqFormula::Query(..) => panic!("pre-structures evaluate query-free formulas only"),
        }
    }
}

fn everywhere_in_class(labels: &[usize], good: &[bool]) -> Vec<bool> {
    let mut bad = vec![false; labels.iter().max().map_or(0, |m| m + 1)];
    for (w, &l) in labels.iter().enumerate() {
        if !good[w] {
            bad[l] = true;
        }
    }
    labels.iter().map(|&l| !bad[l]).collect()
}

/// Restricted-growth strings of length `n`, i.e. all partitions of `0..n`.
pub fn partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn rec(k: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if k == labels.len() {
            out.push(Partition::from_labels(labels));
            return;
        }
        for l in 0..=max + 1 {
            labels[k] = l;
            rec(k + 1, max.max(l), labels, out);
        }
    }
    if n == 0 {
        return out;
    }
    rec(1, 0, &mut labels, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (1..=5).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, [1, 2, 5, 15, 52]);
    }

    #[test]
    fn similar_costs_share_a_variable() {
        let f = parse_formula("(c[i](p) >= 5) & (c[i](~p) < 5)").unwrap();
        let sig = Signature::of(&f).unwrap();
        assert_eq!(sig.classes.len(), 1);
        let sys = sig.build_i(0, &[true, false]).unwrap();
        let vars = sys.variables();
        assert!(vars.contains("c[i]#0@0"));
        assert_eq!(vars.len(), 2);
    }

    #[test]
    fn pseudo_truth_signs() {
        let f = parse_formula("(b[i] >= 3)").unwrap();
        let sig = Signature::of(&f).unwrap();
        let yes = sig.build_i(0, &[true]).unwrap();
        let no = sig.build_i(0, &[false]).unwrap();
        let three = |v: i64| BTreeMap::from([("b[i]@0".to_string(), Rational::from(v))]);
        assert!(yes.is_satisfied_by(&three(3)) && !yes.is_satisfied_by(&three(2)));
        assert!(no.is_satisfied_by(&three(2)) && !no.is_satisfied_by(&three(3)));
    }
}
