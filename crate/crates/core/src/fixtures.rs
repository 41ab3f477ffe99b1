//! Bundled example models.

use crate::model::Model;
use crate::parser::load_model;

/// Source of the three-country telescope model.
pub const TELESCOPE_JSON: &str = include_str!("../fixtures/telescope.json");

/// Four states: `w1` (p, b_m = 10), `w2` (¬p, b_m = 10), `w3` (p, b_m = 9)
/// and `w4` (¬p, b_m = 9). `n` and `m` tell the two budgets of `m` apart, `l`
/// cannot tell any states apart.
pub fn telescope() -> Model {
    load_model(TELESCOPE_JSON).expect("bundled fixture is valid")
}
