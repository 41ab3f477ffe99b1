//! Exact rationals and linear feasibility.

mod fm;
mod rational;
mod system;

pub use fm::fm_feasible;
pub use rational::Rational;
pub use system::{Feasibility, LinConstraint, LinSystem, Relation};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid rational literal {0:?}")]
    ParseRational(String),
}
