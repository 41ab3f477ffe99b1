use std::collections::{BTreeSet, VecDeque};

use super::bcs::{bcs_formula, subst_inequality};
use super::similarity::class_key;
use super::{Agent, LinAtom, PropFormula, SpqFormula, SyntaxError, Term};

fn atom(summands: Vec<(i64, Term)>, bound: i64) -> SpqFormula {
    SpqFormula::Atom(LinAtom::new(summands, bound).expect("nonempty sum"))
}

/// `t = 0` as the conjunction `t ≥ 0 ∧ -t ≥ 0`.
fn cost_is_zero(agent: &Agent, a: PropFormula) -> SpqFormula {
    let t = Term::Cost(agent.clone(), a);
    SpqFormula::and(atom(vec![(1, t.clone())], 0), atom(vec![(-1, t)], 0))
}

fn costs_equal(agent: &Agent, a: &PropFormula, b: &PropFormula) -> SpqFormula {
    let ta = Term::Cost(agent.clone(), a.clone());
    let tb = Term::Cost(agent.clone(), b.clone());
    SpqFormula::and(
        atom(vec![(1, ta.clone()), (-1, tb.clone())], 0),
        atom(vec![(-1, ta), (1, tb)], 0),
    )
}

/// Formulas a single closure member forces, apart from the pairwise cost
/// equalities which depend on the whole set.
fn consequences(f: &SpqFormula, agents: &BTreeSet<Agent>) -> Result<Vec<SpqFormula>, SyntaxError> {
    let mut out = f.children();
    if !matches!(f, SpqFormula::Not(_)) {
        out.push(SpqFormula::not(f.clone()));
    }
    if let Some(a) = f.as_prop() {
        for i in agents {
            out.push(atom(vec![(1, Term::Cost(i.clone(), a.clone()))], 0));
        }
    }
    match f {
        SpqFormula::Common(g, psi) => {
            out.push(SpqFormula::everybody(g, SpqFormula::and((**psi).clone(), f.clone())));
        }
        SpqFormula::Query(g, a, body) => {
            let bcs = bcs_formula(g, a);
            let boxed = |x: SpqFormula| SpqFormula::query(g.clone(), a.clone(), x);
            match &**body {
                SpqFormula::Prop(_) | SpqFormula::True | SpqFormula::False => {
                    out.push(SpqFormula::implies(bcs, (**body).clone()));
                }
                SpqFormula::Atom(at) => out.push(SpqFormula::implies(bcs, subst_inequality(at, g, a)?)),
                SpqFormula::Not(psi) => {
                    out.push(SpqFormula::implies(bcs, SpqFormula::not(boxed((**psi).clone()))));
                }
                SpqFormula::And(x, y) => {
                    out.push(SpqFormula::and(boxed((**x).clone()), boxed((**y).clone())));
                }
                SpqFormula::Know(j, psi) if !g.contains(j) => {
                    out.push(SpqFormula::implies(bcs, SpqFormula::know(j.clone(), boxed((**psi).clone()))));
                }
                SpqFormula::Know(i, psi) => {
                    let answers = [a.to_spq(), SpqFormula::not(a.to_spq())];
                    let conj = SpqFormula::conj(answers.into_iter().map(|a2| {
                        SpqFormula::implies(
                            a2.clone(),
                            SpqFormula::know(i.clone(), SpqFormula::implies(a2, boxed((**psi).clone()))),
                        )
                    }));
                    out.push(SpqFormula::implies(bcs, conj));
                }
                SpqFormula::Common(h, _) => {
                    for i in g.iter().chain(h.iter()) {
                        out.push(boxed(SpqFormula::know(i.clone(), (**body).clone())));
                    }
                }
                SpqFormula::Query(..) => {}
            }
        }
        _ => {}
    }
    Ok(out)
}

/// `cl(φ)` over the agents occurring in φ.
pub fn closure(formula: &SpqFormula) -> Result<BTreeSet<SpqFormula>, SyntaxError> {
    closure_with_agents(formula, &formula.agents())
}

/// `cl(φ)` over an explicit agent set, computed by saturation.
pub fn closure_with_agents(
    formula: &SpqFormula,
    agents: &BTreeSet<Agent>,
) -> Result<BTreeSet<SpqFormula>, SyntaxError> {
    let mut set: BTreeSet<SpqFormula> = BTreeSet::new();
    let mut queue: VecDeque<SpqFormula> = VecDeque::new();
    let mut seed = vec![formula.clone()];
    for i in agents {
        seed.push(atom(vec![(1, Term::Budget(i.clone()))], 0));
        seed.push(cost_is_zero(i, PropFormula::True));
    }
    queue.extend(seed);
    // Propositional members grouped for the pairwise equalities.
    let mut props: Vec<(super::ClassKey, PropFormula)> = Vec::new();
    while let Some(f) = queue.pop_front() {
        if set.contains(&f) {
            continue;
        }
        for g in consequences(&f, agents)? {
            if !set.contains(&g) {
                queue.push_back(g);
            }
        }
        if let Some(a) = f.as_prop() {
            let key = class_key(&a)?;
            for (other_key, b) in &props {
                if *other_key == key {
                    let (lo, hi) = if *b < a { (b, &a) } else { (&a, b) };
                    for i in agents {
                        queue.push_back(costs_equal(i, lo, hi));
                    }
                }
            }
            props.push((key, a));
        }
        set.insert(f);
    }
    Ok(set)
}
