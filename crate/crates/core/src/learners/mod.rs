//! PAC learners and the pseudo-shattering oracle.

mod kdl;
mod linear;
mod shatter;
mod tables;

pub use kdl::{conjunctions, learn_hcn_kdl, learn_hcn_kdl_net, learn_k_dl};
pub use linear::{families, learn_hcn_linear, learn_linear_net};
pub use shatter::{anonymous_grid, class_r_witnesses, half_size_family, pseudo_shatters, ShatterInstance};
pub use tables::{is_eps_estimate, learn_anonymous, learn_w_games, LearnedAnonymous, LearnedPairs, LearnedValuation};
