//! Epistemic logic of semi-public queries: exact-arithmetic Kripke models with
//! costs and budgets, model checking, reduction of queries, bounded
//! satisfiability and query planning.

pub mod fixtures;
pub mod generate;
pub mod graph;
pub mod linarith;
pub mod mc;
pub mod model;
pub mod parser;
pub mod planner;
pub mod reduce;
pub mod sat;
pub mod syntax;
