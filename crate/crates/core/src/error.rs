use alloc::boxed::Box;
use alloc::string::String;

use thiserror::Error;

use crate::game::Player;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} battlefields, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("allocations sum to {sum}, expected {expected}")]
    ResourceMismatch { sum: u64, expected: u32 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("a decision graph needs at least one battlefield")]
    NoBattlefields,

    #[error("decision graph has no source-to-sink path")]
    EmptySupport,

    /// The true opponent decision is always feasible, so this signals a bug.
    #[error("feasible opponent set is empty ({0})")]
    EmptyFeasibleSet(String),

    #[error("operation requires {expected} feedback")]
    UnsupportedFeedback { expected: &'static str },

    #[error("strategy `{strategy}` for player {player} returned an invalid decision: {reason}")]
    InvalidStrategyOutput {
        player: Player,
        strategy: String,
        reason: String,
    },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("continuous allocation has no positive entry")]
    ZeroProfile,

    #[error("round {round}, player {player}: {source}")]
    AtRound {
        round: usize,
        player: Player,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = core::result::Result<T, Error>;
