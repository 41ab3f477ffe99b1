use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spq::fixtures::telescope;
use spq::generate::{random_formula, random_group, random_model, random_question, GenConfig};
use spq::linarith::Rational;
use spq::planner::{enumerate_sequences, plan, verify, QueryAction};
use spq::syntax::{Group, PropFormula};

/// The best goal-reaching sequence by spending, then length, then action order.
fn brute_force(found: Vec<(Vec<usize>, Rational, bool)>) -> Option<(Rational, Vec<usize>)> {
    found
        .into_iter()
        .filter(|(_, _, ok)| *ok)
        .min_by(|a, b| (&a.1, a.0.len(), &a.0).cmp(&(&b.1, b.0.len(), &b.0)))
        .map(|(path, total, _)| (total, path))
}

#[test]
fn planner_matches_exhaustive_search() {
    let cfg = GenConfig { max_states: 5, max_depth: 3, max_queries: 1, ..GenConfig::default() };
    let mut reachable = 0;
    for seed in 0..300u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_model(&mut rng, &cfg);
        let goal = random_formula(&mut rng, &cfg, m.agents());
        let actions: Vec<QueryAction> = (0..rng.gen_range(1..=4))
            .map(|_| QueryAction::new(random_group(&mut rng, m.agents()), random_question(&mut rng)))
            .collect();
        let depth = rng.gen_range(0..=3);
        let w = rng.gen_range(0..m.len());
        let got = plan(&m, m.state_name(w), &goal, &actions, depth).unwrap();
        let best = brute_force(enumerate_sequences(&m, w, &goal, &actions, depth).unwrap());
        match (&got, &best) {
            (Some(p), Some((total, path))) => {
                reachable += 1;
                verify(&m, w, &goal, p).unwrap();
                assert_eq!(&p.total_spent, total, "seed {seed}");
                let chosen: Vec<QueryAction> = path.iter().map(|&k| actions[k].clone()).collect();
                assert_eq!(p.actions(), chosen, "seed {seed}");
            }
            (None, None) => {}
            _ => panic!("seed {seed}: planner {got:?} but exhaustive search {best:?}"),
        }
    }
    assert!(reachable >= 100, "only {reachable} solvable instances");
}

/// Queries that change nothing still terminate, by signature pruning.
#[test]
fn repeated_useless_queries_terminate() {
    let m = telescope();
    let tautology = PropFormula::or(PropFormula::var("p"), PropFormula::not(PropFormula::var("p")));
    let actions = vec![QueryAction::new(Group::new(["n", "m", "l"]).unwrap(), tautology)];
    let goal = spq::syntax::SpqFormula::know("l", spq::syntax::SpqFormula::prop("p"));
    assert_eq!(plan(&m, "w1", &goal, &actions, 50).unwrap(), None);
}
