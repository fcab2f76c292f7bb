//! Payoff metrics and under-uncertainty estimators for repeated Colonel Blotto games.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! * [`game`]: decisions, the draw-biased payoff function, feedback and round records;
//! * [`graph`]: the layered decision graph whose source-to-sink paths are exactly the
//!   decisions of a player, plus bound and dead-end pruning;
//! * [`bounds`]: per-battlefield bounds on the opponent's allocation recovered from
//!   semi-bandit feedback;
//! * [`estimators`]: Max Payoff, Expected Payoff and their estimators over a feasible set;
//! * [`strategies`]: allocation generators used to drive simulations;
//! * [`metrics`]: NRMSE / RRSD between true and estimated metric series;
//! * [`sim`]: a single seeded game with per-round metric bookkeeping.
//!
//! IO, parallel experiment suites and the command-line tool live in `blotto-lab`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod error;
pub mod estimators;
pub mod game;
pub mod graph;
pub mod metrics;
pub mod sim;
pub mod strategies;

pub use bounds::{AllocationBounds, BattlefieldOutcome, BoundFlags};
pub use error::{Error, Result};
pub use estimators::{DecisionDistribution, FeasibleSet, PayoffEstimator};
pub use game::{Decision, Feedback, FeedbackMode, Game, GameConfig, Observation, PayoffVector, Player, RoundRecord};
pub use graph::{DecisionGraph, PathCountTable};
pub use metrics::{MetricKind, MetricSeries};
pub use strategies::Strategy;

/// Exact rational used for expectations; converted to `f64` only when reporting.
pub type Rational = num_rational::BigRational;
