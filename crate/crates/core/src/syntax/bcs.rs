use super::{Agent, Group, LinAtom, PropFormula, SpqFormula, SyntaxError, Term};

fn cost(agent: &Agent, a: &PropFormula) -> Term {
    Term::Cost(agent.clone(), a.clone())
}

/// `c_j(A) ≤ c_i(A)`, stored as `-c_j(A) + c_i(A) ≥ 0`.
pub fn cost_at_most(j: &Agent, i: &Agent, a: &PropFormula) -> SpqFormula {
    let atom = LinAtom::new(vec![(-1, cost(j, a)), (1, cost(i, a))], 0).expect("nonempty sum");
    SpqFormula::Atom(atom)
}

/// `j` has a minimal cost for `A` within `G`.
pub fn cost_minimal(j: &Agent, group: &Group, a: &PropFormula) -> SpqFormula {
    SpqFormula::conj(group.iter().map(|k| cost_at_most(j, k, a)))
}

fn group_size(group: &Group) -> i64 {
    i64::try_from(group.len()).expect("group size fits in i64")
}

/// The budget constraint for `G` querying `A` as a formula:
/// `⋁_j ⋀_i (c_j(A) ≤ c_i(A) ∧ |G|·b_i − c_j(A) ≥ 0)`.
pub fn bcs_formula(group: &Group, a: &PropFormula) -> SpqFormula {
    let size = group_size(group);
    SpqFormula::disj(group.iter().map(|j| {
        SpqFormula::conj(group.iter().map(|i| {
            let share = LinAtom::new(vec![(size, Term::Budget(i.clone())), (-1, cost(j, a))], 0)
                .expect("nonempty sum");
            SpqFormula::and(cost_at_most(j, i, a), SpqFormula::Atom(share))
        }))
    }))
}

/// The atom after the query, with each `b_i` (`i ∈ G`) replaced by
/// `b_i − c_j(A)/|G|` and the whole atom multiplied by `|G|`.
pub fn substituted_atom(atom: &LinAtom, group: &Group, a: &PropFormula, j: &Agent) -> Result<LinAtom, SyntaxError> {
    let size = group_size(group);
    let mut summands = Vec::with_capacity(atom.summands().len() + 1);
    for (coeff, term) in atom.summands() {
        let scaled = coeff.checked_mul(size).ok_or(SyntaxError::CoefficientOverflow)?;
        summands.push((scaled, term.clone()));
        if let Term::Budget(i) = term {
            if group.contains(i) {
                summands.push((-coeff, cost(j, a)));
            }
        }
    }
    let bound = atom.bound().checked_mul(size).ok_or(SyntaxError::CoefficientOverflow)?;
    LinAtom::new(summands, bound)
}

/// `(Σ aᵢtᵢ ≥ z)^(G,A)` with the minimal-cost agent left open: a disjunction
/// over `j ∈ G` of "j is minimal and the atom holds with j's share subtracted".
pub fn subst_inequality(atom: &LinAtom, group: &Group, a: &PropFormula) -> Result<SpqFormula, SyntaxError> {
    let disjuncts = group
        .iter()
        .map(|j| {
            let sub = substituted_atom(atom, group, a, j)?;
            Ok(SpqFormula::and(cost_minimal(j, group, a), SpqFormula::Atom(sub)))
        })
        .collect::<Result<Vec<_>, SyntaxError>>()?;
    Ok(SpqFormula::disj(disjuncts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_budget_constraint() {
        let g = Group::singleton("i");
        let a = PropFormula::var("p");
        let i = Agent::new("i");
        let expected = SpqFormula::and(
            cost_at_most(&i, &i, &a),
            SpqFormula::Atom(LinAtom::new(vec![(1, Term::Budget(i.clone())), (-1, cost(&i, &a))], 0).unwrap()),
        );
        assert_eq!(bcs_formula(&g, &a), expected);
    }

    #[test]
    fn substitution_scales_and_adds_cost() {
        let g = Group::new(["n", "m"]).unwrap();
        let a = PropFormula::var("p");
        let atom = LinAtom::new(vec![(1, Term::Budget(Agent::new("n")))], 10).unwrap();
        let sub = substituted_atom(&atom, &g, &a, &Agent::new("m")).unwrap();
        assert_eq!(sub.summands(), &[(2, Term::Budget(Agent::new("n"))), (-1, cost(&Agent::new("m"), &a))]);
        assert_eq!(sub.bound(), 20);
    }

    #[test]
    fn substitution_leaves_outsiders() {
        let g = Group::new(["n", "m"]).unwrap();
        let a = PropFormula::var("p");
        let atom = LinAtom::new(vec![(3, Term::Budget(Agent::new("l")))], 1).unwrap();
        let sub = substituted_atom(&atom, &g, &a, &Agent::new("n")).unwrap();
        assert_eq!(sub.summands(), &[(6, Term::Budget(Agent::new("l")))]);
        assert_eq!(sub.bound(), 2);
    }
}
