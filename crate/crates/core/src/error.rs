use thiserror::Error;

use crate::core_model::{Coalition, Player};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} needs exhaustive enumeration over n = {n} players, above the limit of {limit}")]
    Guard { what: &'static str, n: usize, limit: usize },

    #[error("player count {0} outside 1..=63")]
    PlayerCount(usize),

    #[error("player {player} is not a member of coalition {coalition}")]
    NotAMember { player: Player, coalition: Coalition },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid sample entry: {0}")]
    InvalidSample(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error(transparent)]
    Parse(#[from] crate::hcn::ParseError),

    #[error("preference row of player {player} has tied values; chain encoding undefined")]
    TiedRow { player: Player },

    #[error("invalid distribution: {0}")]
    Distribution(String),

    #[error("sample is not realizable by the given formulas for player {player}")]
    Inconsistent { player: Player },

    #[error("sample is not anonymous: player {player} saw two values for size {size}")]
    NotAnonymous { player: Player, size: usize },

    #[error("no conjunction of at most {k} literals separates the remaining {remaining} examples")]
    NotKdl { k: usize, remaining: usize },

    #[error("missing singleton value for player {0}")]
    MissingSingleton(Player),

    #[error("exact regime needs every pair observed; missing {0}")]
    InsufficientSample(Coalition),

    #[error("instances disagree on sampled coalition {0}")]
    Disagreement(Coalition),

    #[error("{0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
