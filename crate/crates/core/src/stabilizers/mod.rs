//! PAC stabilizers and the sample resistant core checker.

mod greedy;
mod src_check;
mod wgames;

pub use greedy::{
    friendly_cliques, greedy_cover, individually_rational, known_singletons, residual_max_holds,
    stabilize_bottom_responsive, stabilize_enemy_aversion, GreedyStep,
};
pub use src_check::{check_src, SrcVerdict};
pub use wgames::{
    estimate_sample_size, exact_regime, exact_sample_size, fully_observed, green_players, pair_by_estimate,
    pairing_sample_size, reveal_pairs, stabilize_w_exact, stabilize_w_exact_with_limit, stabilize_w_games, Regime, StabilizeOutcome, WStabilization,
};
