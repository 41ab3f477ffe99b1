//! Random models and formulas for property tests and fuzzing.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::linarith::Rational;
use crate::model::{Model, Partition};
use crate::syntax::{class_key, Agent, Group, LinAtom, PropFormula, SpqFormula, Term};

pub const AGENT_NAMES: [&str; 3] = ["a", "b", "c"];
pub const LETTERS: [&str; 3] = ["p", "q", "r"];

/// Bounds for random models and formulas.
#[derive(Clone, Debug)]
pub struct GenConfig {
    pub min_states: usize,
    pub max_states: usize,
    pub min_agents: usize,
    pub max_agents: usize,
    pub max_depth: usize,
    pub max_queries: usize,
    pub allow_common: bool,
    /// Forbid common knowledge inside the scope of a query.
    pub reducible: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            min_states: 1,
            max_states: 6,
            min_agents: 1,
            max_agents: 3,
            max_depth: 5,
            max_queries: 2,
            allow_common: true,
            reducible: false,
        }
    }
}

/// Questions and cost formulas are mostly drawn from this pool, so that
/// costs stored in random models are actually read.
pub fn question_pool() -> Vec<PropFormula> {
    let [p, q, r] = LETTERS.map(PropFormula::var);
    vec![
        p.clone(),
        q.clone(),
        r.clone(),
        PropFormula::and(p.clone(), q.clone()),
        PropFormula::or(p.clone(), r.clone()),
        PropFormula::and(q.clone(), PropFormula::not(r.clone())),
        PropFormula::implies(p.clone(), q.clone()),
        PropFormula::and(p, PropFormula::and(q, r)),
    ]
}

/// A value `k/2` with `k` in `0..=20`.
pub fn half_step<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(0..=20), 2).expect("nonzero denominator")
}

pub fn random_partition<R: Rng>(rng: &mut R, n: usize) -> Partition {
    let blocks = rng.gen_range(1..=n);
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..blocks)).collect();
    Partition::from_labels(&labels)
}

pub fn random_model<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Model {
    let n = rng.gen_range(cfg.min_states..=cfg.max_states);
    let k = rng.gen_range(cfg.min_agents..=cfg.max_agents);
    let agents: Vec<Agent> = AGENT_NAMES[..k].iter().map(|a| Agent::new(*a)).collect();
    let mut model = Model::new(agents.clone(), (0..n).map(|w| format!("w{}", w + 1))).expect("valid shape");
    for a in &agents {
        model.set_relation(a, random_partition(rng, n)).expect("sized partition");
    }
    for letter in LETTERS {
        for w in 0..n {
            model.set_prop(letter, w, rng.gen_bool(0.5)).expect("state in range");
        }
    }
    let pool = question_pool();
    for a in &agents {
        for w in 0..n {
            model.set_budget(a, w, half_step(rng)).expect("nonnegative");
            for f in &pool {
                let key = class_key(f).expect("few variables");
                if !key.is_tautology_class() {
                    model.set_cost(a, w, f, half_step(rng)).expect("nonnegative");
                }
            }
        }
    }
    model
}

pub fn random_prop<R: Rng>(rng: &mut R, depth: usize) -> PropFormula {
    if depth == 0 || rng.gen_bool(0.35) {
        return match rng.gen_range(0..12) {
            0 => PropFormula::True,
            1 => PropFormula::False,
            _ => PropFormula::var(*LETTERS.choose(rng).expect("letters")),
        };
    }
    match rng.gen_range(0..3) {
        0 => PropFormula::not(random_prop(rng, depth - 1)),
        1 => PropFormula::and(random_prop(rng, depth - 1), random_prop(rng, depth - 1)),
        _ => PropFormula::or(random_prop(rng, depth - 1), random_prop(rng, depth - 1)),
    }
}

pub fn random_question<R: Rng>(rng: &mut R) -> PropFormula {
    if rng.gen_bool(0.8) {
        question_pool().choose(rng).expect("pool").clone()
    } else {
        random_prop(rng, 2)
    }
}

pub fn random_group<R: Rng>(rng: &mut R, agents: &[Agent]) -> Group {
    let size = rng.gen_range(1..=agents.len());
    Group::new(agents.choose_multiple(rng, size).cloned()).expect("nonempty")
}

pub fn random_term<R: Rng>(rng: &mut R, agents: &[Agent]) -> Term {
    let a = agents.choose(rng).expect("agents").clone();
    if rng.gen_bool(0.5) {
        Term::Budget(a)
    } else {
        Term::Cost(a, random_question(rng))
    }
}

pub fn random_atom<R: Rng>(rng: &mut R, agents: &[Agent]) -> LinAtom {
    let len = rng.gen_range(1..=3);
    let summands = (0..len)
        .map(|_| {
            let c = *[-3, -2, -1, 1, 2, 3].choose(rng).expect("coefficients");
            (c, random_term(rng, agents))
        })
        .collect();
    LinAtom::new(summands, rng.gen_range(-10..=10)).expect("nonempty sum")
}

/// A random formula over `agents`; `allow_common` is overridden inside
/// query scopes when the config asks for reducible formulas.
pub fn random_formula<R: Rng>(rng: &mut R, cfg: &GenConfig, agents: &[Agent]) -> SpqFormula {
    gen_formula(rng, cfg, agents, cfg.max_depth, cfg.max_queries, false)
}

fn gen_formula<R: Rng>(
    rng: &mut R,
    cfg: &GenConfig,
    agents: &[Agent],
    depth: usize,
    queries: usize,
    under_query: bool,
) -> SpqFormula {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..10) {
            0 => SpqFormula::True,
            1 => SpqFormula::False,
            2..=6 => SpqFormula::prop(*LETTERS.choose(rng).expect("letters")),
            _ => SpqFormula::atom(random_atom(rng, agents)),
        };
    }
    let common_ok = cfg.allow_common && !(cfg.reducible && under_query);
    let d = depth - 1;
    loop {
        match rng.gen_range(0..7) {
            0 => return SpqFormula::not(gen_formula(rng, cfg, agents, d, queries, under_query)),
            1 | 2 => {
                let a = gen_formula(rng, cfg, agents, d, queries, under_query);
                let b = gen_formula(rng, cfg, agents, d, queries, under_query);
                return SpqFormula::and(a, b);
            }
            3 => {
                let i = agents.choose(rng).expect("agents").clone();
                return SpqFormula::know(i, gen_formula(rng, cfg, agents, d, queries, under_query));
            }
            4 if common_ok => {
                let g = random_group(rng, agents);
                return SpqFormula::common(g, gen_formula(rng, cfg, agents, d, queries, under_query));
            }
            5 | 6 if queries > 0 => {
                let g = random_group(rng, agents);
                let q = random_question(rng);
                return SpqFormula::query(g, q, gen_formula(rng, cfg, agents, d, queries - 1, true));
            }
            _ => continue,
        }
    }
}

/// A reducible formula that is guaranteed to contain a query.
pub fn random_query_formula<R: Rng>(rng: &mut R, cfg: &GenConfig, agents: &[Agent]) -> SpqFormula {
    loop {
        let f = random_formula(rng, cfg, agents);
        if !f.is_query_free() {
            return f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_models_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cfg = GenConfig::default();
        for _ in 0..100 {
            let m = random_model(&mut rng, &cfg);
            assert!((1..=6).contains(&m.len()));
            assert!((1..=3).contains(&m.agents().len()));
            let f = random_formula(&mut rng, &cfg, m.agents());
            assert!(f.agents().iter().all(|a| m.has_agent(a)));
        }
    }

    #[test]
    fn reducible_formulas_have_no_common_under_query() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let cfg = GenConfig { reducible: true, ..GenConfig::default() };
        let agents: Vec<Agent> = AGENT_NAMES.iter().map(|a| Agent::new(*a)).collect();
        for _ in 0..200 {
            let f = random_query_formula(&mut rng, &cfg, &agents);
            assert!(f.common_under_query().is_none());
        }
    }
}
