use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::generate::{random_atom, random_formula, random_group, random_model, random_prop, random_question, random_term, GenConfig};
use crate::model::Model;
use crate::parser::model_to_json;
use crate::syntax::{bcs_formula, subst_inequality, Agent, LinAtom, PropFormula, SpqFormula, Term};

use super::validity_check;

/// An axiom schema of the proof system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AxiomSchema {
    Taut,
    I1,
    I2,
    I3,
    I4,
    I5,
    I6,
    K,
    T,
    Four,
    Five,
    C,
    BudgetNonneg,
    CostNonneg,
    CostTop,
    CostSimilar,
    RProp,
    RIneq,
    RNot,
    RAnd,
    RK1,
    RK2,
}

fn atom(summands: Vec<(i64, Term)>, bound: i64) -> SpqFormula {
    SpqFormula::atom(LinAtom::new(summands, bound).expect("nonempty sum"))
}

/// `t ≤ c` as `-t ≥ -c`.
fn at_most(t: &Term, c: i64) -> SpqFormula {
    atom(vec![(-1, t.clone())], -c)
}

fn equal_costs(i: &Agent, a: &PropFormula, b: &PropFormula) -> SpqFormula {
    let ca = Term::Cost(i.clone(), a.clone());
    let cb = Term::Cost(i.clone(), b.clone());
    SpqFormula::and(atom(vec![(1, ca.clone()), (-1, cb.clone())], 0), atom(vec![(1, cb), (-1, ca)], 0))
}

/// A formula equivalent to `a` or to its negation, by a random rewrite.
fn similar_variant<R: Rng>(rng: &mut R, a: &PropFormula) -> PropFormula {
    let mut b = a.clone();
    for _ in 0..rng.gen_range(1..=3) {
        b = match rng.gen_range(0..6) {
            0 => PropFormula::not(b),
            1 => PropFormula::not(PropFormula::not(b)),
            2 => PropFormula::and(b.clone(), b),
            3 => PropFormula::or(b, PropFormula::False),
            4 => PropFormula::and(PropFormula::True, b),
            _ => match b {
                PropFormula::And(x, y) => PropFormula::And(y, x),
                other => PropFormula::or(other.clone(), other),
            },
        };
    }
    b
}

fn random_tautology<R: Rng>(rng: &mut R) -> PropFormula {
    let b = random_prop(rng, 2);
    match rng.gen_range(0..4) {
        0 => PropFormula::or(b.clone(), PropFormula::not(b)),
        1 => PropFormula::not(PropFormula::and(b.clone(), PropFormula::not(b))),
        2 => PropFormula::implies(b.clone(), b),
        _ => PropFormula::True,
    }
}

impl AxiomSchema {
    pub const ALL: [AxiomSchema; 22] = [
        AxiomSchema::Taut,
        AxiomSchema::I1,
        AxiomSchema::I2,
        AxiomSchema::I3,
        AxiomSchema::I4,
        AxiomSchema::I5,
        AxiomSchema::I6,
        AxiomSchema::K,
        AxiomSchema::T,
        AxiomSchema::Four,
        AxiomSchema::Five,
        AxiomSchema::C,
        AxiomSchema::BudgetNonneg,
        AxiomSchema::CostNonneg,
        AxiomSchema::CostTop,
        AxiomSchema::CostSimilar,
        AxiomSchema::RProp,
        AxiomSchema::RIneq,
        AxiomSchema::RNot,
        AxiomSchema::RAnd,
        AxiomSchema::RK1,
        AxiomSchema::RK2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomSchema::Taut => "Taut",
            AxiomSchema::I1 => "I1",
            AxiomSchema::I2 => "I2",
            AxiomSchema::I3 => "I3",
            AxiomSchema::I4 => "I4",
            AxiomSchema::I5 => "I5",
            AxiomSchema::I6 => "I6",
            AxiomSchema::K => "K",
            AxiomSchema::T => "T",
            AxiomSchema::Four => "4",
            AxiomSchema::Five => "5",
            AxiomSchema::C => "C",
            AxiomSchema::BudgetNonneg => "B+",
            AxiomSchema::CostNonneg => "c+",
            AxiomSchema::CostTop => "c_top",
            AxiomSchema::CostSimilar => "c_sim",
            AxiomSchema::RProp => "r_p",
            AxiomSchema::RIneq => "r_ge",
            AxiomSchema::RNot => "r_not",
            AxiomSchema::RAnd => "r_and",
            AxiomSchema::RK1 => "r_K1",
            AxiomSchema::RK2 => "r_K2",
        }
    }

    /// Whether instances contain queries.
    pub fn is_dynamic(self) -> bool {
        matches!(
            self,
            AxiomSchema::RProp
                | AxiomSchema::RIneq
                | AxiomSchema::RNot
                | AxiomSchema::RAnd
                | AxiomSchema::RK1
                | AxiomSchema::RK2
        )
    }

    /// Fewest agents an instance needs.
    pub fn min_agents(self) -> usize {
        if self == AxiomSchema::RK1 {
            2
        } else {
            1
        }
    }

    /// A random instance over `agents`. Metavariables for arbitrary formulas
    /// are filled with random formulas that may contain queries unless
    /// `static_only` is set.
    pub fn instantiate<R: Rng>(self, rng: &mut R, agents: &[Agent], static_only: bool) -> SpqFormula {
        let cfg = GenConfig {
            max_depth: 3,
            max_queries: if static_only { 0 } else { 1 },
            ..GenConfig::default()
        };
        let phi = |rng: &mut R| random_formula(rng, &cfg, agents);
        let agent = |rng: &mut R| agents.choose(rng).expect("agents").clone();
        match self {
            AxiomSchema::Taut => {
                let (a, b, c) = (phi(rng), phi(rng), phi(rng));
                match rng.gen_range(0..5) {
                    0 => SpqFormula::or(a.clone(), SpqFormula::not(a)),
                    1 => SpqFormula::implies(SpqFormula::and(a.clone(), b), a),
                    2 => SpqFormula::implies(a.clone(), SpqFormula::implies(b, a)),
                    3 => SpqFormula::implies(
                        SpqFormula::and(SpqFormula::implies(a.clone(), b.clone()), SpqFormula::implies(b, c.clone())),
                        SpqFormula::implies(a, c),
                    ),
                    _ => SpqFormula::iff(
                        SpqFormula::not(SpqFormula::and(a.clone(), b.clone())),
                        SpqFormula::or(SpqFormula::not(a), SpqFormula::not(b)),
                    ),
                }
            }
            AxiomSchema::I1 => {
                let a = random_atom(rng, agents);
                let mut summands = a.summands().to_vec();
                summands.push((0, random_term(rng, agents)));
                SpqFormula::iff(SpqFormula::atom(a.clone()), atom(summands, a.bound()))
            }
            AxiomSchema::I2 => {
                let a = random_atom(rng, agents);
                let mut summands = a.summands().to_vec();
                summands.shuffle(rng);
                SpqFormula::implies(SpqFormula::atom(a.clone()), atom(summands, a.bound()))
            }
            AxiomSchema::I3 => {
                let a = random_atom(rng, agents);
                let other: Vec<(i64, Term)> =
                    a.summands().iter().map(|(_, t)| (rng.gen_range(-3..=3), t.clone())).collect();
                let c2 = rng.gen_range(-10..=10);
                let sum: Vec<(i64, Term)> =
                    a.summands().iter().zip(&other).map(|((x, t), (y, _))| (x + y, t.clone())).collect();
                SpqFormula::implies(
                    SpqFormula::and(SpqFormula::atom(a.clone()), atom(other, c2)),
                    atom(sum, a.bound() + c2),
                )
            }
            AxiomSchema::I4 => {
                let a = random_atom(rng, agents);
                let d = rng.gen_range(1..=4);
                let scaled = a.summands().iter().map(|(x, t)| (d * x, t.clone())).collect();
                SpqFormula::iff(SpqFormula::atom(a.clone()), atom(scaled, d * a.bound()))
            }
            AxiomSchema::I5 => {
                let t = random_term(rng, agents);
                let c = rng.gen_range(-10..=10);
                SpqFormula::or(atom(vec![(1, t.clone())], c), at_most(&t, c))
            }
            AxiomSchema::I6 => {
                let t = random_term(rng, agents);
                let c = rng.gen_range(-10..=10);
                let d = c - rng.gen_range(1..=5);
                SpqFormula::implies(atom(vec![(1, t.clone())], c), SpqFormula::not(at_most(&t, d)))
            }
            AxiomSchema::K => {
                let i = agent(rng);
                let (a, b) = (phi(rng), phi(rng));
                SpqFormula::implies(
                    SpqFormula::know(i.clone(), SpqFormula::implies(a.clone(), b.clone())),
                    SpqFormula::implies(SpqFormula::know(i.clone(), a), SpqFormula::know(i, b)),
                )
            }
            AxiomSchema::T => {
                let a = phi(rng);
                SpqFormula::implies(SpqFormula::know(agent(rng), a.clone()), a)
            }
            AxiomSchema::Four => {
                let (i, a) = (agent(rng), phi(rng));
                let k = SpqFormula::know(i.clone(), a);
                SpqFormula::implies(k.clone(), SpqFormula::know(i, k))
            }
            AxiomSchema::Five => {
                let (i, a) = (agent(rng), phi(rng));
                let nk = SpqFormula::not(SpqFormula::know(i.clone(), a));
                SpqFormula::implies(nk.clone(), SpqFormula::know(i, nk))
            }
            AxiomSchema::C => {
                let g = random_group(rng, agents);
                let a = phi(rng);
                let c = SpqFormula::common(g.clone(), a.clone());
                SpqFormula::implies(c.clone(), SpqFormula::everybody(&g, SpqFormula::and(a, c)))
            }
            AxiomSchema::BudgetNonneg => atom(vec![(1, Term::Budget(agent(rng)))], 0),
            AxiomSchema::CostNonneg => {
                let a = random_question(rng);
                atom(vec![(1, Term::Cost(agent(rng), a))], 0)
            }
            AxiomSchema::CostTop => {
                let top = random_tautology(rng);
                let c = Term::Cost(agent(rng), top);
                SpqFormula::and(atom(vec![(1, c.clone())], 0), at_most(&c, 0))
            }
            AxiomSchema::CostSimilar => {
                let a = random_question(rng);
                let b = similar_variant(rng, &a);
                equal_costs(&agent(rng), &a, &b)
            }
            AxiomSchema::RProp => {
                let (g, q) = (random_group(rng, agents), random_question(rng));
                let p = SpqFormula::prop(*crate::generate::LETTERS.choose(rng).expect("letters"));
                SpqFormula::iff(SpqFormula::query(g.clone(), q.clone(), p.clone()), SpqFormula::implies(bcs_formula(&g, &q), p))
            }
            AxiomSchema::RIneq => {
                let (g, q) = (random_group(rng, agents), random_question(rng));
                let a = random_atom(rng, agents);
                let sub = subst_inequality(&a, &g, &q).expect("small coefficients");
                SpqFormula::iff(
                    SpqFormula::query(g.clone(), q.clone(), SpqFormula::atom(a)),
                    SpqFormula::implies(bcs_formula(&g, &q), sub),
                )
            }
            AxiomSchema::RNot => {
                let (g, q, a) = (random_group(rng, agents), random_question(rng), phi(rng));
                SpqFormula::iff(
                    SpqFormula::query(g.clone(), q.clone(), SpqFormula::not(a.clone())),
                    SpqFormula::implies(bcs_formula(&g, &q), SpqFormula::not(SpqFormula::query(g, q, a))),
                )
            }
            AxiomSchema::RAnd => {
                let (g, q, a, b) = (random_group(rng, agents), random_question(rng), phi(rng), phi(rng));
                SpqFormula::iff(
                    SpqFormula::query(g.clone(), q.clone(), SpqFormula::and(a.clone(), b.clone())),
                    SpqFormula::and(SpqFormula::query(g.clone(), q.clone(), a), SpqFormula::query(g, q, b)),
                )
            }
            AxiomSchema::RK1 => {
                let j = agent(rng);
                let others: Vec<Agent> = agents.iter().filter(|a| **a != j).cloned().collect();
                let g = random_group(rng, &others);
                let (q, a) = (random_question(rng), phi(rng));
                SpqFormula::iff(
                    SpqFormula::query(g.clone(), q.clone(), SpqFormula::know(j.clone(), a.clone())),
                    SpqFormula::implies(bcs_formula(&g, &q), SpqFormula::know(j, SpqFormula::query(g, q, a))),
                )
            }
            AxiomSchema::RK2 => {
                let g = random_group(rng, agents);
                let i = g.iter().collect::<Vec<_>>().choose(rng).map(|a| (*a).clone()).expect("nonempty group");
                let (q, a) = (random_question(rng), phi(rng));
                let inner = SpqFormula::query(g.clone(), q.clone(), a.clone());
                let parts = [q.clone(), PropFormula::not(q.clone())].map(|ans| {
                    let ans = ans.to_spq();
                    SpqFormula::implies(ans.clone(), SpqFormula::know(i.clone(), SpqFormula::implies(ans, inner.clone())))
                });
                SpqFormula::iff(
                    SpqFormula::query(g.clone(), q.clone(), SpqFormula::know(i.clone(), a)),
                    SpqFormula::implies(bcs_formula(&g, &q), SpqFormula::conj(parts)),
                )
            }
        }
    }
}

impl fmt::Display for AxiomSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A model on which an instance is not valid.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub model: Model,
    pub instance: SpqFormula,
}

#[derive(Clone, Debug)]
pub struct SchemaReport {
    pub schema: AxiomSchema,
    pub trials: usize,
    pub failures: usize,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Clone, Debug)]
pub struct FuzzReport {
    pub schemas: Vec<SchemaReport>,
}

impl FuzzReport {
    pub fn failures(&self) -> usize {
        self.schemas.iter().map(|s| s.failures).sum()
    }

    pub fn is_sound(&self) -> bool {
        self.failures() == 0
    }
}

impl fmt::Display for FuzzReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.schemas {
            writeln!(f, "{} {} {}", s.schema, s.trials, s.failures)?;
        }
        for s in &self.schemas {
            for c in &s.counterexamples {
                writeln!(f, "counterexample for {}: {}\n{}", s.schema, c.instance, model_to_json(&c.model))?;
            }
        }
        Ok(())
    }
}

const KEPT_COUNTEREXAMPLES: usize = 3;

/// The generator used for trial `trial` of schema number `schema`.
pub fn trial_rng(seed: u64, schema: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((schema as u64) << 32) | trial as u64);
    rng
}

/// Checks `trials` random instances of every schema, each on a fresh random model.
pub fn fuzz_soundness(trials: usize, seed: u64) -> FuzzReport {
    let schemas = AxiomSchema::ALL
        .iter()
        .enumerate()
        .map(|(k, &schema)| {
            let mut report = SchemaReport { schema, trials, failures: 0, counterexamples: Vec::new() };
            for t in 0..trials {
                let mut rng = trial_rng(seed, k, t);
                let cfg = GenConfig { min_agents: schema.min_agents(), ..GenConfig::default() };
                let model = random_model(&mut rng, &cfg);
                let instance = schema.instantiate(&mut rng, model.agents(), false);
                if !validity_check(&model, &instance).expect("generated instances use model agents") {
                    report.failures += 1;
                    if report.counterexamples.len() < KEPT_COUNTEREXAMPLES {
                        report.counterexamples.push(Counterexample { model, instance });
                    }
                }
            }
            report
        })
        .collect();
    FuzzReport { schemas }
}
