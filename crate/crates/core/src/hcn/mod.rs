//! Hedonic coalition nets: formulas, decision lists, the net DSL and the
//! encodings of the native classes as nets.

mod convert;
mod decision_list;
mod formula;
mod net;
mod parser;

pub use convert::{additive_net, anonymous_net, b_game_chain_len, b_game_net, fractional_net, to_hcn, w_game_net};
pub use decision_list::{eval_dl, Conjunction, DecisionList, Literal};
pub use formula::Formula;
pub use net::{hcn_value, Condition, HedonicNet, Rule, Semantics};
pub use parser::{parse_decision_list, parse_formula, parse_net, ParseError};

use crate::core_model::Coalition;

pub fn eval_formula(phi: &Formula, s: Coalition) -> bool {
    phi.eval(s)
}
