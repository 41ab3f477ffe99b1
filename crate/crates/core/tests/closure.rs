use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spq::generate::{random_formula, GenConfig, AGENT_NAMES};
use spq::parser::parse_formula;
use spq::syntax::{closure, closure_with_agents, Agent, SpqFormula};

/// A named family of formulas indexed by a size parameter.
type Family = (&'static str, fn(usize) -> String);

fn families() -> Vec<Family> {
    vec![
        ("conjunction of knowledge", |n| (0..n).map(|k| format!("K{{a}} p{k}")).collect::<Vec<_>>().join(" & ")),
        ("alternating knowledge", |n| format!("{}p", "K{a} K{b} ".repeat(n))),
        ("query over budgets", |n| {
            let body: Vec<String> = (0..n).map(|k| format!("K{{a}} (p{k} & (b[b] >= {k}))")).collect();
            format!("[? a,b : p0] ({})", body.join(" & "))
        }),
        ("common knowledge of a disjunction", |n| {
            format!("C{{a,b}} ({})", (0..n).map(|k| format!("p{k}")).collect::<Vec<_>>().join(" | "))
        }),
    ]
}

/// Least-squares slope of `log y` against `log x`.
fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let cov: f64 = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = logs.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    cov / var
}

#[test]
fn closure_grows_polynomially() {
    for (name, family) in families() {
        let points: Vec<(f64, f64)> = [2usize, 4, 8, 16]
            .iter()
            .map(|&n| {
                let f = parse_formula(&family(n)).unwrap();
                (f.size() as f64, closure(&f).unwrap().len() as f64)
            })
            .collect();
        let slope = log_log_slope(&points);
        assert!(slope <= 3.0, "{name}: growth exponent {slope:.2} from {points:?}");
    }
}

#[test]
fn closure_is_saturated() {
    let cfg = GenConfig { max_depth: 3, max_queries: 1, ..GenConfig::default() };
    let agents: Vec<Agent> = AGENT_NAMES.iter().map(|a| Agent::new(*a)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..40 {
        let f = random_formula(&mut rng, &cfg, &agents);
        let scope = f.agents();
        let cl = closure(&f).unwrap();
        assert!(cl.contains(&f));
        for g in cl.iter().take(25) {
            let inner = closure_with_agents(g, &scope).unwrap();
            assert!(inner.is_subset(&cl), "closure of {g} escapes closure of {f}");
        }
    }
}

#[test]
fn closure_contains_the_listed_members() {
    let f = parse_formula("[? a,b : p] C{a,b} q").unwrap();
    let cl = closure(&f).unwrap();
    for s in ["q", "~q", "(b[a] >= 0)", "(c[b](true) = 0)", "[? a,b : p] K{a} C{a,b} q", "[? a,b : p] K{b} C{a,b} q"] {
        assert!(cl.contains(&parse_formula(s).unwrap()), "missing {s}");
    }
    let c = parse_formula("C{a,b} q").unwrap();
    let unfolded = SpqFormula::everybody(&c_group(&c), SpqFormula::and(parse_formula("q").unwrap(), c.clone()));
    assert!(closure(&c).unwrap().contains(&unfolded));
}

fn c_group(f: &SpqFormula) -> spq::syntax::Group {
    match f {
        SpqFormula::Common(g, _) => g.clone(),
        _ => unreachable!("a common-knowledge formula"),
    }
}
