use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spq::generate::{random_formula, random_model, GenConfig};
use spq::linarith::Rational;
use spq::model::Partition;
use spq::parser::{load_model, model_to_json, print_formula};
use spq::syntax::Agent;

fn telescope_path() -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", "telescope.json"].iter().collect()
}

fn spq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spq")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn check(model: &Path, formula: &str, algo: &str) -> Output {
    spq(&["check", "--model", model.to_str().unwrap(), "--formula", formula, "--algo", algo])
}

#[test]
fn check_lists_states_in_model_order() {
    let m = telescope_path();
    let o = check(&m, "p", "labeling");
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "w1\nw3\n");
    let o = check(&m, "[? n,m : p] C{n,m} p", "labeling");
    assert_eq!(stdout(&o), "w1\nw3\nw4\n");
}

#[test]
fn malformed_formula_exits_2_with_location() {
    let o = check(&telescope_path(), "p &", "labeling");
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("formula"), "{}", stderr(&o));
}

#[test]
fn both_algorithms_print_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut models = vec![telescope_path()];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cfg = GenConfig::default();
    for k in 0..5 {
        let path = dir.path().join(format!("random{k}.json"));
        std::fs::write(&path, model_to_json(&random_model(&mut rng, &cfg))).unwrap();
        models.push(path);
    }
    let mut formulas: Vec<String> = [
        "p",
        "~p & q",
        "K{l} (b[m] >= 9)",
        "[? n,m : p] C{n,m} p",
        "[? n,m : p] K{l} (C{n,m} p | C{n,m} ~p)",
        "[? n,m : p] [? n,m : p] false",
        "C{n,m,l} (b[l] = 5)",
        "[? l : p] p",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let agents = ["a", "b", "c"].map(Agent::new);
    for _ in 0..10 {
        formulas.push(print_formula(&random_formula(&mut rng, &cfg, &agents[..1])));
    }
    for m in &models {
        for f in &formulas {
            let (a, b) = (check(m, f, "labeling"), check(m, f, "reference"));
            assert_eq!(code(&a), code(&b), "{f} on {}", m.display());
            assert_eq!(a.stdout, b.stdout, "{f} on {}", m.display());
        }
    }
}

#[test]
fn eval_reports_truth_through_exit_code() {
    let m = telescope_path();
    let m = m.to_str().unwrap();
    let o = spq(&["eval", "--model", m, "--state", "w1", "--formula", "[? n,m : p] K{l} (C{n,m} p | C{n,m} ~p)"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "true\n"));
    let o = spq(&["eval", "--model", m, "--state", "w1", "--formula", "(c[n](p) <= b[n])"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (1, "false\n"));
    let o = spq(&["eval", "--model", m, "--state", "w9", "--formula", "p"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("unknown state"));
}

#[test]
fn formula_file_and_conflicting_sources() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("f.txt");
    std::fs::write(&file, "p\n").unwrap();
    let m = telescope_path();
    let (m, file) = (m.to_str().unwrap(), file.to_str().unwrap());
    let o = spq(&["check", "--model", m, "--formula-file", file]);
    assert_eq!(stdout(&o), "w1\nw3\n");
    let o = spq(&["check", "--model", m, "--formula-file", file, "--formula", "q"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn update_writes_the_updated_model() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let m = telescope_path();
    let o = spq(&["update", "--model", m.to_str().unwrap(), "--group", "n,m", "--query", "p", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let u = load_model(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(u.states(), ["w1", "w2"]);
    assert_eq!(u.budget(&Agent::new("n"), 0), Some(&Rational::from(5)));
    assert_eq!(u.budget(&Agent::new("m"), 0), Some(&Rational::from(0)));
    assert_eq!(u.relation(&Agent::new("n")), Some(&Partition::discrete(2)));

    let none = dir.path().join("none.json");
    let o = spq(&["update", "--model", m.to_str().unwrap(), "--group", "l", "--query", "p", "--out", none.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("update yields empty model"));
    assert!(!none.exists());

    let o = spq(&["update", "--model", m.to_str().unwrap(), "--group", "n,m", "--query", "p"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn translate_removes_queries() {
    let o = spq(&["translate", "--formula", "[? G : p] q"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.trim_end().ends_with(" -> q"), "{text}");
    assert!(!text.contains("[?"), "{text}");
    let o = spq(&["translate", "--formula", "[? G : p] C{G} p"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn sat_verdicts_and_exit_codes() {
    let o = spq(&["sat", "--formula", "(b[i] < 0)", "--max-states", "2"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("UNSAT up to 2 states (theoretical bound: 2^"));
    let o = spq(&["sat", "--formula", "(b[i] >= 3) & K{i} (b[i] < 5)"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let (head, json) = text.split_once('\n').unwrap();
    assert!(head.starts_with("SAT at state "), "{head}");
    load_model(json).unwrap();
    let o = spq(&["sat", "--formula", "[? G : p] C{G} p"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn plan_finds_the_joint_query() {
    let m = telescope_path();
    let mut args = vec!["plan", "--model", m.to_str().unwrap(), "--state", "w1", "--formula", "C{n,m} p | C{n,m} ~p", "--max-depth", "2"];
    for a in ["n,m:p", "n:p", "m:p", "l:p", "n,m,l:p"] {
        args.extend(["--action", a]);
    }
    let o = spq(&args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "query {m,n} : p — spent 20, shares 10\ntotal: 20\n");
    let o = spq(&["plan", "--model", m.to_str().unwrap(), "--state", "w1", "--formula", "false", "--action", "n,m:p"]);
    assert_eq!(code(&o), 1);
    let o = spq(&["plan", "--model", m.to_str().unwrap(), "--state", "w1", "--formula", "p", "--action", "nm"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn axioms_report_is_deterministic() {
    let a = spq(&["axioms", "--seed", "9", "--trials", "5"]);
    let b = spq(&["axioms", "--seed", "9", "--trials", "5"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().count(), 22);
    assert!(text.lines().all(|l| l.ends_with(" 5 0")), "{text}");
}

#[test]
fn dot_draws_the_telescope() {
    let o = spq(&["dot", "--model", telescope_path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.matches(" [label=\"w").count(), 4);
    for edge in [
        "\"w1\" -- \"w2\" [label=\"l,m,n\"]",
        "\"w3\" -- \"w4\" [label=\"l,m,n\"]",
        "\"w1\" -- \"w3\" [label=\"l\"]",
        "\"w2\" -- \"w4\" [label=\"l\"]",
    ] {
        assert!(text.contains(edge), "missing {edge} in\n{text}");
    }
    assert_eq!(text.matches(" -- ").count(), 4);
}
