use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spq::fixtures::telescope;
use spq::generate::{random_formula, random_model, random_query_formula, GenConfig, AGENT_NAMES};
use spq::model::extension;
use spq::parser::parse_formula;
use spq::reduce::{fuzz_soundness, translate, translate_traced, AxiomSchema, ReduceError, Rule};
use spq::syntax::{Agent, SpqFormula};

fn reducible() -> GenConfig {
    GenConfig { reducible: true, ..GenConfig::default() }
}

fn agents() -> Vec<Agent> {
    AGENT_NAMES.iter().map(|a| Agent::new(*a)).collect()
}

#[test]
fn translations_are_equivalent_and_every_step_decreases() {
    let cfg = reducible();
    let mut rules: BTreeMap<&str, usize> = BTreeMap::new();
    for seed in 0..600u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_model(&mut rng, &cfg);
        let phi = random_query_formula(&mut rng, &cfg, m.agents());
        let (t, steps) = translate_traced(&phi).unwrap();
        assert!(t.is_query_free(), "{phi} -> {t}");
        assert!(!steps.is_empty());
        assert_eq!(extension(&m, &t).unwrap(), extension(&m, &phi).unwrap(), "seed {seed}: {phi}");
        for s in &steps {
            assert!(s.after < s.before, "{} on {}: {} -> {}", s.rule, s.redex, s.before, s.after);
            *rules.entry(s.rule.name()).or_default() += 1;
        }
    }
    for rule in ["r_p", "r_ge", "r_not", "r_and", "r_K1", "r_K2"] {
        assert!(rules.get(rule).copied().unwrap_or(0) > 0, "{rule} never fired: {rules:?}");
    }
}

/// Redexes built to exercise one rule each, many times over.
#[test]
fn each_rule_decreases_on_many_instances() {
    let cfg = GenConfig { max_depth: 3, max_queries: 0, allow_common: false, ..GenConfig::default() };
    let agents = agents();
    let wraps: [(Rule, &str); 6] = [
        (Rule::Not, "[? a,b : p] ~X"),
        (Rule::And, "[? a,b : p | q] (X & q)"),
        (Rule::KnowOutside, "[? a : q] K{c} X"),
        (Rule::KnowMember, "[? a,b : p] K{a} X"),
        (Rule::Prop, "[? b : r] p"),
        (Rule::Inequality, "[? a,c : p & q] (b[a] + c[a](p) >= 2)"),
    ];
    for (rule, template) in wraps {
        let mut count = 0;
        for seed in 0..200u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = random_formula(&mut rng, &cfg, &agents);
            let outer = parse_formula(template.replace('X', "(r)").as_str()).unwrap();
            let phi = substitute(&outer, &x);
            let (_, steps) = translate_traced(&phi).unwrap();
            assert!(steps.iter().all(|s| s.after < s.before));
            count += steps.iter().filter(|s| s.rule == rule).count();
        }
        assert!(count >= 200, "{rule}: {count}");
    }
}

/// Replaces the placeholder letter `r` with `x`.
fn substitute(f: &SpqFormula, x: &SpqFormula) -> SpqFormula {
    match f {
        SpqFormula::Prop(p) if p == "r" => x.clone(),
        SpqFormula::Not(a) => SpqFormula::not(substitute(a, x)),
        SpqFormula::And(a, b) => SpqFormula::and(substitute(a, x), substitute(b, x)),
        SpqFormula::Know(i, a) => SpqFormula::know(i.clone(), substitute(a, x)),
        SpqFormula::Common(g, a) => SpqFormula::common(g.clone(), substitute(a, x)),
        SpqFormula::Query(g, q, a) => SpqFormula::query(g.clone(), q.clone(), substitute(a, x)),
        other => other.clone(),
    }
}

/// Rewriting an inner box first and then the rest gives an equivalent result.
#[test]
fn rewriting_order_does_not_matter() {
    let cfg = reducible();
    for seed in 0..300u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let m = random_model(&mut rng, &cfg);
        let phi = random_query_formula(&mut rng, &cfg, m.agents());
        let partial = rewrite_first_body(&phi);
        let whole = extension(&m, &translate(&phi).unwrap()).unwrap();
        assert_eq!(extension(&m, &translate(&partial).unwrap()).unwrap(), whole, "{phi}");
    }
}

fn rewrite_first_body(f: &SpqFormula) -> SpqFormula {
    match f {
        SpqFormula::Query(g, q, a) => SpqFormula::query(g.clone(), q.clone(), translate(a).unwrap()),
        SpqFormula::Not(a) => SpqFormula::not(rewrite_first_body(a)),
        SpqFormula::And(a, b) => SpqFormula::and(rewrite_first_body(a), b.as_ref().clone()),
        SpqFormula::Know(i, a) => SpqFormula::know(i.clone(), rewrite_first_body(a)),
        SpqFormula::Common(g, a) => SpqFormula::common(g.clone(), rewrite_first_body(a)),
        other => other.clone(),
    }
}

#[test]
fn common_knowledge_under_a_query_is_rejected() {
    let phi = parse_formula("[? n,m : p] K{l} C{n,m} p").unwrap();
    assert!(matches!(translate(&phi), Err(ReduceError::NotReducible(_))));
    // Outside any query it is left alone.
    let ok = parse_formula("C{n,m} [? n,m : p] p").unwrap();
    let t = translate(&ok).unwrap();
    assert_eq!(extension(&telescope(), &t).unwrap(), extension(&telescope(), &ok).unwrap());
}

#[test]
fn every_schema_is_sound_on_two_hundred_instances() {
    let report = fuzz_soundness(200, 0x53_50_51);
    assert_eq!(report.schemas.len(), AxiomSchema::ALL.len());
    assert!(report.schemas.iter().all(|s| s.trials == 200));
    assert!(report.is_sound(), "{report}");
}
