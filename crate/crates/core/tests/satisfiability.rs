use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spq::generate::{random_formula, random_model, GenConfig};
use spq::model::{eval, extension};
use spq::parser::parse_formula;
use spq::reduce::{trial_rng, AxiomSchema};
use spq::sat::{sat_bounded, SatVerdict};
use spq::syntax::{Agent, SpqFormula};

fn verdict(s: &str, n: usize) -> SatVerdict {
    sat_bounded(&parse_formula(s).unwrap(), n).unwrap()
}

fn assert_witness(phi: &SpqFormula, v: &SatVerdict) {
    match v {
        SatVerdict::Sat(m, s) => assert!(eval(m, s.index, phi).unwrap(), "witness fails {phi}"),
        other => panic!("expected a witness for {phi}, got {other}"),
    }
}

#[test]
fn fixture_verdicts() {
    assert!(matches!(verdict("K{i} p & ~p", 2), SatVerdict::UnsatUpTo { max_states: 2, .. }));
    assert!(matches!(verdict("(b[i] < 0)", 2), SatVerdict::UnsatUpTo { max_states: 2, .. }));
    assert!(matches!(verdict("(c[i](p) >= 5) & (c[i](~p) < 5)", 2), SatVerdict::UnsatUpTo { max_states: 2, .. }));
    for s in ["(b[i] >= 3) & K{i} (b[i] < 5)", "[? i : p] K{i} p"] {
        assert_witness(&parse_formula(s).unwrap(), &verdict(s, 2));
    }
    assert!(matches!(verdict("[? G : p] C{G} p", 2), SatVerdict::Unsupported(_)));
}

#[test]
fn unsat_message_names_the_bound() {
    let text = verdict("(b[i] < 0)", 2).to_string();
    assert!(text.starts_with("UNSAT up to 2 states (theoretical bound: 2^"), "{text}");
}

/// The negation of a valid instance has no model of any size.
#[test]
fn negated_axiom_instances_are_unsatisfiable() {
    let agents = [Agent::new("a")];
    let mut checked = 0;
    for (k, schema) in AxiomSchema::ALL.iter().enumerate() {
        if schema.min_agents() > 1 {
            continue;
        }
        let mut found = 0;
        for t in 0..200 {
            if found == 4 {
                break;
            }
            let mut rng = trial_rng(3, k, t);
            let phi = schema.instantiate(&mut rng, &agents, false);
            if phi.common_under_query().is_some() || phi.atoms().len() > 3 || phi.letters().len() > 2 || phi.size() > 40 {
                continue;
            }
            found += 1;
            let neg = SpqFormula::not(phi.clone());
            assert!(
                matches!(sat_bounded(&neg, 2).unwrap(), SatVerdict::UnsatUpTo { .. }),
                "{} instance has a countermodel: {phi}",
                schema.name()
            );
        }
        checked += found;
    }
    assert!(checked >= 20, "only {checked} small instances");
}

/// Anything true somewhere in a small model is found satisfiable.
#[test]
fn formulas_true_in_small_models_are_satisfiable() {
    let cfg = GenConfig { max_states: 2, max_agents: 2, max_depth: 3, max_queries: 1, reducible: true, ..GenConfig::default() };
    let mut hits = 0;
    for seed in 0..300u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_model(&mut rng, &cfg);
        let phi = random_formula(&mut rng, &cfg, m.agents());
        if phi.atoms().len() > 4 || extension(&m, &phi).unwrap().is_empty() {
            continue;
        }
        hits += 1;
        assert_witness(&phi, &sat_bounded(&phi, m.len()).unwrap());
    }
    assert!(hits >= 100, "only {hits} usable samples");
}
