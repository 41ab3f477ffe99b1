//! Command-line front end: model checking, updates, translation,
//! satisfiability, planning, axiom fuzzing and graph export.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use spq::graph::to_dot;
use spq::mc::global_check;
use spq::model::{eval, extension, update, Model};
use spq::parser::{load_model, model_to_json, parse_formula, parse_prop, print_formula};
use spq::planner::{plan, QueryAction};
use spq::reduce::{fuzz_soundness, translate, ReduceError};
use spq::sat::{sat_bounded, SatVerdict};
use spq::syntax::{Group, SpqFormula};

/// Default fuzz seed, the bytes of "SPQ".
const DEFAULT_SEED: u64 = 0x53_50_51;

#[derive(Parser)]
#[command(name = "spq", version, about = "Semi-public query logic toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct FormulaInput {
    /// Formula text.
    #[arg(long)]
    formula: Option<String>,
    /// File holding the formula text.
    #[arg(long, value_name = "FILE")]
    formula_file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Labeling,
    Reference,
}

#[derive(Subcommand)]
enum Command {
    /// List the states where a formula holds.
    Check {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[command(flatten)]
        input: FormulaInput,
        #[arg(long, value_enum, default_value = "labeling")]
        algo: Algo,
    },
    /// Evaluate a formula at one state.
    Eval {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[arg(long)]
        state: String,
        #[command(flatten)]
        input: FormulaInput,
    },
    /// Apply a query and write the updated model.
    Update {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        /// Comma-separated agents.
        #[arg(long)]
        group: String,
        /// Propositional question.
        #[arg(long)]
        query: String,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Rewrite queries away.
    Translate {
        #[command(flatten)]
        input: FormulaInput,
    },
    /// Search small models for one satisfying the formula.
    Sat {
        #[command(flatten)]
        input: FormulaInput,
        #[arg(long, default_value_t = 3)]
        max_states: usize,
    },
    /// Find the cheapest query sequence that makes the goal true at a state.
    Plan {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[arg(long)]
        state: String,
        /// The goal.
        #[command(flatten)]
        input: FormulaInput,
        /// An available query as `agents:question`, e.g. `n,m:p`.
        #[arg(long = "action", required = true)]
        actions: Vec<String>,
        #[arg(long, default_value_t = 3)]
        max_depth: usize,
    },
    /// Check random instances of every axiom schema on random models.
    Axioms {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Print the model as a Graphviz graph.
    Dot {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
    },
}

#[derive(Debug, Error)]
enum CliError {
    /// Bad input: exit code 2.
    #[error("{0}")]
    Invalid(String),
    /// Outside what the procedures handle: exit code 3.
    #[error("{0}")]
    Unsupported(String),
}

impl CliError {
    fn invalid(e: impl std::fmt::Display) -> Self {
        CliError::Invalid(e.to_string())
    }
}

type Outcome = Result<bool, CliError>;

/// Writes to stdout, ignoring a closed pipe so that `spq … | head` exits quietly.
fn emit(text: &str) {
    let _ = io::stdout().lock().write_all(text.as_bytes());
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn model_from(path: &Path) -> Result<Model, CliError> {
    load_model(&read(path)?).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn formula_from(input: &FormulaInput) -> Result<SpqFormula, CliError> {
    let text = match (&input.formula, &input.formula_file) {
        (Some(t), None) => t.clone(),
        (None, Some(p)) => read(p)?,
        _ => unreachable!("clap enforces exactly one formula source"),
    };
    parse_formula(text.trim()).map_err(|e| CliError::Invalid(format!("formula: {e}")))
}

fn group_from(text: &str) -> Result<Group, CliError> {
    Group::new(text.split(',').map(str::trim).filter(|s| !s.is_empty())).map_err(CliError::invalid)
}

fn action_from(text: &str) -> Result<QueryAction, CliError> {
    let (group, question) = text
        .split_once(':')
        .ok_or_else(|| CliError::Invalid(format!("action `{text}` is not of the form agents:question")))?;
    let question = parse_prop(question.trim()).map_err(|e| CliError::Invalid(format!("action `{text}`: {e}")))?;
    Ok(QueryAction::new(group_from(group)?, question))
}

fn state_index(model: &Model, name: &str) -> Result<usize, CliError> {
    model.state_index(name).ok_or_else(|| CliError::Invalid(format!("unknown state `{name}`")))
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Check { model, input, algo } => {
            let m = model_from(&model)?;
            let f = formula_from(&input)?;
            let states = match algo {
                Algo::Labeling => global_check(&m, &f),
                Algo::Reference => extension(&m, &f),
            }
            .map_err(CliError::invalid)?;
            for w in states {
                emit(&format!("{}\n", m.state_name(w)));
            }
            Ok(true)
        }
        Command::Eval { model, state, input } => {
            let m = model_from(&model)?;
            let w = state_index(&m, &state)?;
            let f = formula_from(&input)?;
            let holds = eval(&m, w, &f).map_err(CliError::invalid)?;
            emit(&format!("{holds}\n"));
            Ok(holds)
        }
        Command::Update { model, group, query, out } => {
            let m = model_from(&model)?;
            let g = group_from(&group)?;
            let q = parse_prop(&query).map_err(|e| CliError::Invalid(format!("query: {e}")))?;
            let next = update(&m, &g, &q).map_err(CliError::invalid)?;
            if next.is_empty() {
                eprintln!("update yields empty model");
                return Ok(false);
            }
            fs::write(&out, model_to_json(&next) + "\n")
                .map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", out.display())))?;
            Ok(true)
        }
        Command::Translate { input } => {
            let f = formula_from(&input)?;
            match translate(&f) {
                Ok(t) => {
                    emit(&format!("{}\n", print_formula(&t)));
                    Ok(true)
                }
                Err(e @ ReduceError::NotReducible(_)) => Err(CliError::Unsupported(e.to_string())),
                Err(e) => Err(CliError::invalid(e)),
            }
        }
        Command::Sat { input, max_states } => {
            let f = formula_from(&input)?;
            let verdict = sat_bounded(&f, max_states).map_err(CliError::invalid)?;
            match &verdict {
                SatVerdict::Unsupported(reason) => return Err(CliError::Unsupported(reason.clone())),
                _ => emit(&format!("{verdict}\n")),
            }
            Ok(verdict.is_sat())
        }
        Command::Plan { model, state, input, actions, max_depth } => {
            let m = model_from(&model)?;
            let goal = formula_from(&input)?;
            let actions = actions.iter().map(|a| action_from(a)).collect::<Result<Vec<_>, _>>()?;
            match plan(&m, &state, &goal, &actions, max_depth).map_err(CliError::invalid)? {
                Some(p) => {
                    emit(&format!("{p}\n"));
                    Ok(true)
                }
                None => {
                    emit(&format!("no plan within {max_depth} steps\n"));
                    Ok(false)
                }
            }
        }
        Command::Axioms { seed, trials } => {
            let report = fuzz_soundness(trials, seed);
            emit(&report.to_string());
            Ok(report.is_sound())
        }
        Command::Dot { model } => {
            emit(&to_dot(&model_from(&model)?));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CliError::Invalid(_) => 2,
                CliError::Unsupported(_) => 3,
            })
        }
    }
}
