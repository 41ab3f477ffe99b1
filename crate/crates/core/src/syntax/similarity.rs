use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{PropFormula, SyntaxError};

/// Largest number of distinct variables a formula may mention before its
/// truth table is considered too large to build.
pub const MAX_CANONICAL_VARS: usize = 16;

/// Identifies a ≈-class: the Boolean function over its essential variables,
/// stored with a 0 in the first table position.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClassKey {
    vars: Vec<String>,
    table: Vec<u64>,
}

impl ClassKey {
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Tautologies and contradictions share this key.
    pub fn tautology() -> Self {
        ClassKey { vars: Vec::new(), table: vec![0] }
    }

    pub fn is_tautology_class(&self) -> bool {
        self.vars.is_empty()
    }
}

/// A class key together with the polarity of the formula relative to the
/// stored table (`negated` means the formula is the complement).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub key: ClassKey,
    pub negated: bool,
}

struct Table {
    bits: Vec<u64>,
    len: usize,
}

impl Table {
    fn new(len: usize) -> Self {
        Table { bits: vec![0; len.div_ceil(64).max(1)], len }
    }

    fn get(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.bits[i / 64] |= 1 << (i % 64);
    }

    fn complement(&mut self) {
        for i in 0..self.len {
            self.bits[i / 64] ^= 1 << (i % 64);
        }
    }
}

fn truth_table(formula: &PropFormula, vars: &[String]) -> Table {
    let n = vars.len();
    let mut table = Table::new(1 << n);
    let index: BTreeMap<&str, usize> = vars.iter().enumerate().map(|(k, v)| (v.as_str(), k)).collect();
    for row in 0..(1usize << n) {
        let value = formula.eval(&|v: &str| index.get(v).is_some_and(|&k| row >> k & 1 == 1));
        if value {
            table.set(row);
        }
    }
    table
}

pub fn canonical_form(formula: &PropFormula) -> Result<CanonicalForm, SyntaxError> {
    let occurring: Vec<String> = formula.vars().into_iter().collect();
    if occurring.len() > MAX_CANONICAL_VARS {
        return Err(SyntaxError::TooManyVariables(occurring.len()));
    }
    let full = truth_table(formula, &occurring);
    let essential: Vec<String> = occurring
        .iter()
        .enumerate()
        .filter(|(k, _)| (0..full.len).any(|row| full.get(row) != full.get(row ^ (1 << k))))
        .map(|(_, v)| v.clone())
        .collect();
    let mut table = if essential.len() == occurring.len() {
        full
    } else {
        truth_table(formula, &essential)
    };
    let negated = table.get(0);
    if negated {
        table.complement();
    }
    Ok(CanonicalForm { key: ClassKey { vars: essential, table: table.bits }, negated })
}

pub fn class_key(formula: &PropFormula) -> Result<ClassKey, SyntaxError> {
    canonical_form(formula).map(|c| c.key)
}

/// `A ≈ B`: equivalent, or equivalent up to negation.
pub fn similar(a: &PropFormula, b: &PropFormula) -> Result<bool, SyntaxError> {
    Ok(class_key(a)? == class_key(b)?)
}

pub fn is_tautology_class(key: &ClassKey) -> bool {
    key.is_tautology_class()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> PropFormula {
        PropFormula::var("p")
    }
    fn q() -> PropFormula {
        PropFormula::var("q")
    }

    #[test]
    fn letter_similar_to_its_negation() {
        assert!(similar(&p(), &PropFormula::not(p())).unwrap());
        let a = canonical_form(&p()).unwrap();
        let b = canonical_form(&PropFormula::not(p())).unwrap();
        assert_ne!(a.negated, b.negated);
    }

    #[test]
    fn neutral_constant_is_ignored() {
        assert_eq!(class_key(&PropFormula::and(p(), PropFormula::True)).unwrap(), class_key(&p()).unwrap());
    }

    #[test]
    fn double_negation_of_conjunction() {
        let pq = PropFormula::and(p(), q());
        let nn = PropFormula::not(PropFormula::not(pq.clone()));
        assert!(similar(&pq, &nn).unwrap());
        assert!(!similar(&pq, &PropFormula::or(p(), q())).unwrap());
        // p ∧ q and ¬p ∨ ¬q are complements.
        let nand = PropFormula::or(PropFormula::not(p()), PropFormula::not(q()));
        assert!(similar(&pq, &nand).unwrap());
    }

    #[test]
    fn tautology_class_members() {
        let top = class_key(&PropFormula::True).unwrap();
        assert!(is_tautology_class(&top));
        assert!(is_tautology_class(&class_key(&PropFormula::False).unwrap()));
        let lem = PropFormula::or(p(), PropFormula::not(p()));
        assert!(is_tautology_class(&class_key(&lem).unwrap()));
        assert_eq!(class_key(&lem).unwrap(), ClassKey::tautology());
        assert!(!is_tautology_class(&class_key(&p()).unwrap()));
    }

    #[test]
    fn inessential_variables_are_dropped() {
        let f = PropFormula::and(p(), PropFormula::or(q(), PropFormula::not(q())));
        let key = class_key(&f).unwrap();
        assert_eq!(key.vars(), ["p".to_string()]);
    }

    #[test]
    fn too_many_variables() {
        let f = (0..17)
            .map(|k| PropFormula::var(format!("x{k}")))
            .reduce(PropFormula::and)
            .unwrap();
        assert_eq!(class_key(&f), Err(SyntaxError::TooManyVariables(17)));
        let g = (0..16)
            .map(|k| PropFormula::var(format!("x{k}")))
            .reduce(PropFormula::and)
            .unwrap();
        assert!(class_key(&g).is_ok());
    }
}
