//! The repeated discrete Colonel Blotto game.
//!
//! Each round both players split a fixed integer budget over `K` battlefields.
//! Battlefield `i` goes to player `p` iff `pi_i + delta_p > phi_i`, where
//! `delta_p` is 1 for the player that wins draws and 0 for the other one, so
//! every battlefield has exactly one winner.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::strategies::Strategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Player {
    A,
    B,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::A, Player::B];

    pub fn opponent(self) -> Player {
        match self {
            Player::A => Player::B,
            Player::B => Player::A,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Player::A => 0,
            Player::B => 1,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::A => "A",
            Player::B => "B",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeedbackMode {
    /// Per-battlefield win/loss vector.
    SemiBandit,
    /// Total payoff only.
    Bandit,
}

impl fmt::Display for FeedbackMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeedbackMode::SemiBandit => "semi-bandit",
            FeedbackMode::Bandit => "bandit",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameConfig {
    battlefields: usize,
    resources: [u32; 2],
    draw_winner: Player,
    horizon: usize,
    feedback_mode: FeedbackMode,
}

impl GameConfig {
    pub fn new(
        battlefields: usize,
        resources_a: u32,
        resources_b: u32,
        draw_winner: Player,
        horizon: usize,
        feedback_mode: FeedbackMode,
    ) -> Result<Self> {
        if battlefields == 0 {
            return Err(Error::InvalidConfig("battlefield count K must be at least 1".into()));
        }
        if resources_a == 0 || resources_b == 0 {
            return Err(Error::InvalidConfig(format!(
                "resources must be at least 1 (N_A={resources_a}, N_B={resources_b})"
            )));
        }
        if horizon == 0 {
            return Err(Error::InvalidConfig("horizon T must be at least 1".into()));
        }
        Ok(Self {
            battlefields,
            resources: [resources_a, resources_b],
            draw_winner,
            horizon,
            feedback_mode,
        })
    }

    /// Semi-bandit game where player B wins draws, as in the reference experiments.
    pub fn semi_bandit(battlefields: usize, resources_a: u32, resources_b: u32, horizon: usize) -> Result<Self> {
        Self::new(
            battlefields,
            resources_a,
            resources_b,
            Player::B,
            horizon,
            FeedbackMode::SemiBandit,
        )
    }

    pub fn battlefields(&self) -> usize {
        self.battlefields
    }

    pub fn resources(&self, player: Player) -> u32 {
        self.resources[player.index()]
    }

    pub fn draw_winner(&self) -> Player {
        self.draw_winner
    }

    /// Draw bias of `player`: 1 if they win ties.
    pub fn delta(&self, player: Player) -> u32 {
        u32::from(self.draw_winner == player)
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn feedback_mode(&self) -> FeedbackMode {
        self.feedback_mode
    }

    pub fn with_horizon(mut self, horizon: usize) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::InvalidConfig("horizon T must be at least 1".into()));
        }
        self.horizon = horizon;
        Ok(self)
    }

    pub fn with_feedback_mode(mut self, mode: FeedbackMode) -> Self {
        self.feedback_mode = mode;
        self
    }
}

/// A full allocation vector for one round. Always sums to `resources`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Decision {
    allocations: Vec<u32>,
    resources: u32,
}

impl Decision {
    pub fn new(allocations: Vec<u32>, resources: u32) -> Result<Self> {
        if allocations.is_empty() {
            return Err(Error::NoBattlefields);
        }
        let sum: u64 = allocations.iter().map(|&a| u64::from(a)).sum();
        if sum != u64::from(resources) {
            return Err(Error::ResourceMismatch {
                sum,
                expected: resources,
            });
        }
        Ok(Self { allocations, resources })
    }

    /// Builds a decision whose budget is the sum of `allocations`.
    ///
    /// Panics if the vector is empty or the sum overflows `u32`.
    pub fn from_allocations(allocations: Vec<u32>) -> Self {
        assert!(!allocations.is_empty(), "a decision needs at least one battlefield");
        let resources = allocations
            .iter()
            .try_fold(0u32, |acc, &a| acc.checked_add(a))
            .expect("allocation total overflows u32");
        Self { allocations, resources }
    }

    pub fn battlefields(&self) -> usize {
        self.allocations.len()
    }

    pub fn resources(&self) -> u32 {
        self.resources
    }

    pub fn allocations(&self) -> &[u32] {
        &self.allocations
    }

    pub fn get(&self, battlefield: usize) -> u32 {
        self.allocations[battlefield]
    }

    pub fn into_allocations(self) -> Vec<u32> {
        self.allocations
    }

    pub(crate) fn check_shape(&self, battlefields: usize, resources: u32) -> Result<()> {
        if self.battlefields() != battlefields {
            return Err(Error::DimensionMismatch {
                expected: battlefields,
                found: self.battlefields(),
            });
        }
        if self.resources != resources {
            return Err(Error::ResourceMismatch {
                sum: u64::from(self.resources),
                expected: resources,
            });
        }
        Ok(())
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, a) in self.allocations.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(">")
    }
}

/// Per-battlefield outcomes from one player's point of view.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PayoffVector {
    won: Vec<bool>,
}

impl PayoffVector {
    pub fn new(won: Vec<bool>) -> Self {
        Self { won }
    }

    /// Parses a 0/1 vector; any nonzero entry counts as a win.
    pub fn from_bits(bits: &[u8]) -> Self {
        Self::new(bits.iter().map(|&b| b != 0).collect())
    }

    pub fn battlefields(&self) -> usize {
        self.won.len()
    }

    pub fn won(&self, battlefield: usize) -> bool {
        self.won[battlefield]
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.won
    }

    pub fn total(&self) -> usize {
        self.won.iter().filter(|&&w| w).count()
    }
}

impl fmt::Display for PayoffVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, &w) in self.won.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(if w { "1" } else { "0" })?;
        }
        f.write_str(">")
    }
}

/// `L_p(pi, phi)` component-wise: battlefield `i` is won iff `pi_i + delta > phi_i`.
pub fn payoff_vector(player: &Decision, opponent: &Decision, delta: u32) -> Result<PayoffVector> {
    if player.battlefields() != opponent.battlefields() {
        return Err(Error::DimensionMismatch {
            expected: player.battlefields(),
            found: opponent.battlefields(),
        });
    }
    Ok(PayoffVector::new(
        player
            .allocations()
            .iter()
            .zip(opponent.allocations())
            .map(|(&mine, &theirs)| u64::from(mine) + u64::from(delta) > u64::from(theirs))
            .collect(),
    ))
}

/// Total payoff, without materialising the vector.
pub fn payoff(player: &[u32], opponent: &[u32], delta: u32) -> usize {
    player
        .iter()
        .zip(opponent)
        .filter(|(&mine, &theirs)| u64::from(mine) + u64::from(delta) > u64::from(theirs))
        .count()
}

/// Generalized regret `L(a, phi) - L(b, phi)`.
pub fn regret(decision_a: &Decision, decision_b: &Decision, opponent: &Decision, delta: u32) -> Result<i64> {
    if decision_a.battlefields() != decision_b.battlefields() {
        return Err(Error::DimensionMismatch {
            expected: decision_a.battlefields(),
            found: decision_b.battlefields(),
        });
    }
    let a = payoff_vector(decision_a, opponent, delta)?.total() as i64;
    let b = payoff_vector(decision_b, opponent, delta)?.total() as i64;
    Ok(a - b)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Feedback {
    SemiBandit(PayoffVector),
    Bandit { total: usize },
}

impl Feedback {
    pub fn from_payoff(payoff: PayoffVector, mode: FeedbackMode) -> Self {
        match mode {
            FeedbackMode::SemiBandit => Feedback::SemiBandit(payoff),
            FeedbackMode::Bandit => Feedback::Bandit { total: payoff.total() },
        }
    }

    pub fn mode(&self) -> FeedbackMode {
        match self {
            Feedback::SemiBandit(_) => FeedbackMode::SemiBandit,
            Feedback::Bandit { .. } => FeedbackMode::Bandit,
        }
    }

    pub fn total(&self) -> usize {
        match self {
            Feedback::SemiBandit(v) => v.total(),
            Feedback::Bandit { total } => *total,
        }
    }

    pub fn payoff_vector(&self) -> Option<&PayoffVector> {
        match self {
            Feedback::SemiBandit(v) => Some(v),
            Feedback::Bandit { .. } => None,
        }
    }
}

/// Everything a player legitimately sees about one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    pub round: usize,
    pub decision: Decision,
    pub feedback: Feedback,
}

/// One player's record of a round.
///
/// The opponent's decision is kept for ground-truth checks only. Strategies and
/// estimators receive an [`Observation`], which does not carry it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    player: Player,
    observation: Observation,
    opponent_decision: Decision,
}

impl RoundRecord {
    pub fn player(&self) -> Player {
        self.player
    }

    pub fn round(&self) -> usize {
        self.observation.round
    }

    pub fn decision(&self) -> &Decision {
        &self.observation.decision
    }

    pub fn feedback(&self) -> &Feedback {
        &self.observation.feedback
    }

    pub fn observation(&self) -> &Observation {
        &self.observation
    }

    /// Simulator ground truth. Not part of what the player observed.
    pub fn opponent_decision(&self) -> &Decision {
        &self.opponent_decision
    }
}

/// A game in progress: configuration plus both players' histories.
#[derive(Debug, Clone)]
pub struct Game {
    config: GameConfig,
    history: Vec<(RoundRecord, RoundRecord)>,
}

impl Game {
    pub fn new(config: GameConfig) -> Self {
        Self {
            config,
            history: Vec::new(),
        }
    }

    pub fn config(&self) -> &GameConfig {
        &self.config
    }

    pub fn history(&self) -> &[(RoundRecord, RoundRecord)] {
        &self.history
    }

    pub fn into_history(self) -> Vec<(RoundRecord, RoundRecord)> {
        self.history
    }

    /// Plays the next round. Player A chooses first, then B, both from `rng`.
    ///
    /// Returns the records for A and B, which are also appended to the history.
    pub fn play_round(
        &mut self,
        strategy_a: &mut dyn Strategy,
        strategy_b: &mut dyn Strategy,
        rng: &mut dyn RngCore,
    ) -> Result<(RoundRecord, RoundRecord)> {
        let round = self.history.len() + 1;
        let k = self.config.battlefields();

        let decision_a = strategy_a.choose(round, rng);
        validate_output(
            &decision_a,
            k,
            self.config.resources(Player::A),
            Player::A,
            strategy_a.name(),
        )?;
        let decision_b = strategy_b.choose(round, rng);
        validate_output(
            &decision_b,
            k,
            self.config.resources(Player::B),
            Player::B,
            strategy_b.name(),
        )?;

        let mode = self.config.feedback_mode();
        let payoff_a = payoff_vector(&decision_a, &decision_b, self.config.delta(Player::A))?;
        let payoff_b = payoff_vector(&decision_b, &decision_a, self.config.delta(Player::B))?;

        let record_a = RoundRecord {
            player: Player::A,
            observation: Observation {
                round,
                decision: decision_a.clone(),
                feedback: Feedback::from_payoff(payoff_a, mode),
            },
            opponent_decision: decision_b.clone(),
        };
        let record_b = RoundRecord {
            player: Player::B,
            observation: Observation {
                round,
                decision: decision_b,
                feedback: Feedback::from_payoff(payoff_b, mode),
            },
            opponent_decision: decision_a,
        };

        strategy_a
            .observe(record_a.observation())
            .map_err(|e| at_round(round, Player::A, e))?;
        strategy_b
            .observe(record_b.observation())
            .map_err(|e| at_round(round, Player::B, e))?;

        self.history.push((record_a.clone(), record_b.clone()));
        Ok((record_a, record_b))
    }
}

pub(crate) fn at_round(round: usize, player: Player, source: Error) -> Error {
    Error::AtRound {
        round,
        player,
        source: alloc::boxed::Box::new(source),
    }
}

fn validate_output(decision: &Decision, k: usize, resources: u32, player: Player, name: &str) -> Result<()> {
    decision
        .check_shape(k, resources)
        .map_err(|e| Error::InvalidStrategyOutput {
            player,
            strategy: name.to_string(),
            reason: e.to_string(),
        })
}
