//! True payoff metrics and their estimators over a feasible opponent set.
//!
//! * Max Payoff: best total payoff against a known opponent decision.
//! * Expected Payoff: mean payoff of the player's decision distribution against it.
//! * Observable Max Payoff / Observable Expected Payoff: the same quantities
//!   averaged over the feasible opponent set.
//! * Supremum Payoff: the smallest Max Payoff over the feasible set, a value the
//!   player can be sure was achievable.
//!
//! Expectations are exact rationals. Under the uniform decision assumption the
//! expected payoff decomposes per battlefield, `E[L] = sum_i P(pi_i + delta > phi_i)`,
//! and the marginals come from path counts rather than enumerating `Pi_p`.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::bounds::{bandit_filter_on, classify_outcomes, opponent_bounds, BoundFlags};
use crate::error::{Error, Result};
use crate::game::{payoff, Decision, Feedback, FeedbackMode};
use crate::graph::DecisionGraph;
use crate::Rational;

/// Greedy Max Payoff: take battlefields in ascending opponent allocation (ties by
/// index), paying `phi_i + 1 - delta` for each, until the budget runs out.
pub fn max_payoff(opponent: &[u32], resources: u32, delta: u32) -> usize {
    let mut order: Vec<(u32, usize)> = opponent.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    order.sort_unstable();
    let mut remaining = i64::from(resources);
    let delta = i64::from(delta);
    let mut wins = 0;
    for (phi, _) in order {
        let phi = i64::from(phi);
        if remaining > phi - delta {
            wins += 1;
            remaining -= phi + 1 - delta;
        } else {
            break;
        }
    }
    wins
}

/// Exhaustive `max over Pi_p` of the payoff. Exponential; for cross-checking only.
pub fn max_payoff_bruteforce(opponent: &Decision, resources: u32, delta: u32) -> Result<usize> {
    let graph = DecisionGraph::new(opponent.battlefields(), resources)?;
    let mut best = 0;
    graph.for_each_path(|pi| best = best.max(payoff(pi, opponent.allocations(), delta)));
    Ok(best)
}

/// How a player's (or opponent's) decision is distributed over a decision set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecisionDistribution {
    /// Uniform over the set in context: `Pi_p` for the player, the feasible set for the opponent.
    Uniform,
    /// Explicit probabilities; non-negative and summing to one.
    Weighted(Vec<(Decision, Rational)>),
}

impl DecisionDistribution {
    pub fn weighted(entries: Vec<(Decision, Rational)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidDistribution("no support".into()));
        }
        if entries.iter().any(|(_, w)| w.is_negative()) {
            return Err(Error::InvalidDistribution("negative weight".into()));
        }
        let total: Rational = entries.iter().map(|(_, w)| w.clone()).sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}, not 1")));
        }
        Ok(DecisionDistribution::Weighted(entries))
    }

    pub fn point(decision: Decision) -> Self {
        DecisionDistribution::Weighted(alloc::vec![(decision, Rational::one())])
    }

    fn check_support(&self, battlefields: usize, resources: u32) -> Result<()> {
        if let DecisionDistribution::Weighted(entries) = self {
            for (d, _) in entries {
                d.check_shape(battlefields, resources)
                    .map_err(|e| Error::InvalidDistribution(format!("support member {d}: {e}")))?;
            }
        }
        Ok(())
    }
}

fn ratio(num: BigUint, den: BigUint) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Per-battlefield win counts for a player drawing uniformly from `Pi_p`.
///
/// `wins[i][b]` is the number of player decisions that win battlefield `i`
/// against an opponent allocation `b`.
#[derive(Debug, Clone)]
pub struct UniformWinTable {
    battlefields: usize,
    resources: u32,
    delta: u32,
    decisions: BigUint,
    wins: Vec<Vec<BigUint>>,
}

impl UniformWinTable {
    pub fn new(battlefields: usize, resources: u32, delta: u32) -> Result<Self> {
        let graph = DecisionGraph::new(battlefields, resources)?;
        let decisions = graph.count_decisions();
        let marginals = graph.allocation_marginals();
        // wins[i][b] = #{pi : pi_i >= b + 1 - delta}; suffix sums over the marginal.
        let wins = marginals
            .into_iter()
            .map(|m| {
                let mut at_least = alloc::vec![BigUint::zero(); m.len() + 1];
                for a in (0..m.len()).rev() {
                    at_least[a] = &at_least[a + 1] + &m[a];
                }
                at_least
            })
            .collect();
        Ok(Self {
            battlefields,
            resources,
            delta,
            decisions,
            wins,
        })
    }

    pub fn resources(&self) -> u32 {
        self.resources
    }

    /// `|Pi_p|`.
    pub fn decisions(&self) -> &BigUint {
        &self.decisions
    }

    fn wins_against(&self, battlefield: usize, opponent_allocation: u32) -> &BigUint {
        let threshold = (u64::from(opponent_allocation) + 1).saturating_sub(u64::from(self.delta));
        let column = &self.wins[battlefield];
        let idx = (threshold as usize).min(column.len() - 1);
        &column[idx]
    }

    /// `|Pi_p| * E[L(pi, phi)]`, an integer.
    pub fn scaled_expected(&self, opponent: &[u32]) -> BigUint {
        opponent.iter().enumerate().map(|(i, &b)| self.wins_against(i, b)).sum()
    }

    pub fn expected(&self, opponent: &Decision) -> Result<Rational> {
        if opponent.battlefields() != self.battlefields {
            return Err(Error::DimensionMismatch {
                expected: self.battlefields,
                found: opponent.battlefields(),
            });
        }
        Ok(ratio(
            self.scaled_expected(opponent.allocations()),
            self.decisions.clone(),
        ))
    }
}

/// Expected Payoff of a player with budget `resources` against `opponent`.
pub fn expected_payoff(
    opponent: &Decision,
    dist: &DecisionDistribution,
    resources: u32,
    delta: u32,
) -> Result<Rational> {
    match dist {
        DecisionDistribution::Uniform => {
            UniformWinTable::new(opponent.battlefields(), resources, delta)?.expected(opponent)
        }
        DecisionDistribution::Weighted(entries) => {
            dist.check_support(opponent.battlefields(), resources)?;
            Ok(entries
                .iter()
                .map(|(pi, w)| {
                    w * Rational::from_integer(BigInt::from(payoff(pi.allocations(), opponent.allocations(), delta)))
                })
                .sum())
        }
    }
}

/// Opponent decisions consistent with what one player observed in a round.
#[derive(Debug, Clone)]
pub struct FeasibleSet {
    decisions: Vec<Decision>,
    origin: FeedbackMode,
}

impl FeasibleSet {
    pub fn new(decisions: Vec<Decision>, origin: FeedbackMode) -> Result<Self> {
        if decisions.is_empty() {
            return Err(Error::EmptyFeasibleSet("no decisions supplied".into()));
        }
        Ok(Self { decisions, origin })
    }

    pub fn decisions(&self) -> &[Decision] {
        &self.decisions
    }

    pub fn origin(&self) -> FeedbackMode {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.decisions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decisions.is_empty()
    }

    pub fn contains(&self, decision: &Decision) -> bool {
        self.decisions.contains(decision)
    }

    fn weights<'a>(&'a self, dist: &'a DecisionDistribution) -> Result<Vec<(&'a Decision, Rational)>> {
        match dist {
            DecisionDistribution::Uniform => {
                let w = Rational::new(BigInt::one(), BigInt::from(self.decisions.len()));
                Ok(self.decisions.iter().map(|d| (d, w.clone())).collect())
            }
            DecisionDistribution::Weighted(entries) => {
                for (d, _) in entries {
                    if !self.contains(d) {
                        return Err(Error::InvalidDistribution(format!("{d} is not in the feasible set")));
                    }
                }
                Ok(entries.iter().map(|(d, w)| (d, w.clone())).collect())
            }
        }
    }
}

/// Builds feasible opponent sets for one player against a fixed opponent budget,
/// reusing the opponent's unpruned decision graph across rounds.
#[derive(Debug, Clone)]
pub struct FeasibleSetBuilder {
    base: DecisionGraph,
    delta: u32,
    flags: BoundFlags,
}

impl FeasibleSetBuilder {
    pub fn new(battlefields: usize, opponent_resources: u32, delta: u32, flags: BoundFlags) -> Result<Self> {
        Ok(Self {
            base: DecisionGraph::new(battlefields, opponent_resources)?,
            delta,
            flags,
        })
    }

    /// The pruned opponent graph for semi-bandit feedback.
    pub fn pruned_graph(&self, pi: &Decision, feedback: &Feedback) -> Result<DecisionGraph> {
        let outcome = classify_outcomes(feedback)?;
        let bounds = opponent_bounds(pi, &outcome, self.delta, self.base.resources(), self.flags)?;
        Ok(self.base.prune_by_bounds(&bounds)?.prune_dead_ends())
    }

    pub fn build(&self, pi: &Decision, feedback: &Feedback) -> Result<FeasibleSet> {
        if pi.battlefields() != self.base.battlefields() {
            return Err(Error::DimensionMismatch {
                expected: self.base.battlefields(),
                found: pi.battlefields(),
            });
        }
        let decisions = match feedback {
            Feedback::SemiBandit(_) => {
                let decisions = self.pruned_graph(pi, feedback)?.decisions();
                if decisions.is_empty() {
                    return Err(Error::EmptyFeasibleSet(format!(
                        "pruning left no path for decision {pi} with feedback {}",
                        feedback.payoff_vector().expect("semi-bandit")
                    )));
                }
                decisions
            }
            Feedback::Bandit { total } => bandit_filter_on(&self.base, pi, *total, self.delta)?,
        };
        FeasibleSet::new(decisions, feedback.mode())
    }
}

/// Feasible opponent set for one observation: bound pruning plus dead-end
/// pruning under semi-bandit feedback, an exhaustive filter under bandit feedback.
pub fn feasible_set(
    pi: &Decision,
    feedback: &Feedback,
    delta: u32,
    opponent_resources: u32,
    flags: BoundFlags,
) -> Result<FeasibleSet> {
    FeasibleSetBuilder::new(pi.battlefields(), opponent_resources, delta, flags)?.build(pi, feedback)
}

/// `E_{phi ~ dist}[max_payoff(phi)]`.
pub fn observable_max_payoff(
    fs: &FeasibleSet,
    dist: &DecisionDistribution,
    resources: u32,
    delta: u32,
) -> Result<Rational> {
    if let DecisionDistribution::Uniform = dist {
        let total: u64 = fs
            .decisions
            .iter()
            .map(|phi| max_payoff(phi.allocations(), resources, delta) as u64)
            .sum();
        return Ok(Rational::new(BigInt::from(total), BigInt::from(fs.len())));
    }
    Ok(fs
        .weights(dist)?
        .into_iter()
        .map(|(phi, w)| w * Rational::from_integer(BigInt::from(max_payoff(phi.allocations(), resources, delta))))
        .sum())
}

/// `min_{phi in fs} max_payoff(phi)`.
pub fn supremum_payoff(fs: &FeasibleSet, resources: u32, delta: u32) -> usize {
    fs.decisions
        .iter()
        .map(|phi| max_payoff(phi.allocations(), resources, delta))
        .min()
        .expect("feasible sets are non-empty")
}

/// `E_{phi ~ dist_opponent} E_{pi ~ dist_self}[L(pi, phi)]`.
pub fn observable_expected_payoff(
    fs: &FeasibleSet,
    dist_opponent: &DecisionDistribution,
    dist_self: &DecisionDistribution,
    resources: u32,
    delta: u32,
) -> Result<Rational> {
    let k = fs.decisions[0].battlefields();
    match dist_self {
        DecisionDistribution::Uniform => {
            let table = UniformWinTable::new(k, resources, delta)?;
            observable_expected_with(&table, fs, dist_opponent)
        }
        DecisionDistribution::Weighted(_) => {
            let mut acc = Rational::zero();
            for (phi, w) in fs.weights(dist_opponent)? {
                acc += w * expected_payoff(phi, dist_self, resources, delta)?;
            }
            Ok(acc)
        }
    }
}

fn observable_expected_with(
    table: &UniformWinTable,
    fs: &FeasibleSet,
    dist_opponent: &DecisionDistribution,
) -> Result<Rational> {
    match dist_opponent {
        DecisionDistribution::Uniform => {
            let total: BigUint = fs
                .decisions
                .iter()
                .map(|phi| table.scaled_expected(phi.allocations()))
                .sum();
            Ok(ratio(total, table.decisions() * BigUint::from(fs.len())))
        }
        DecisionDistribution::Weighted(_) => {
            let mut acc = Rational::zero();
            for (phi, w) in fs.weights(dist_opponent)? {
                acc += w * table.expected(phi)?;
            }
            Ok(acc)
        }
    }
}

/// True metrics for one round (requires the opponent's actual decision).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrueMetrics {
    pub max_payoff: usize,
    pub expected_payoff: Rational,
}

/// Estimates from one round's feasible set, all under the uniform decision assumption.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Estimates {
    pub observable_max: Rational,
    pub supremum: usize,
    pub observable_expected: Rational,
    pub feasible_count: usize,
}

/// Per-player evaluator that caches the player's uniform win table and the
/// opponent's base graph.
#[derive(Debug, Clone)]
pub struct PayoffEstimator {
    resources: u32,
    delta: u32,
    table: UniformWinTable,
    builder: FeasibleSetBuilder,
}

impl PayoffEstimator {
    pub fn new(
        battlefields: usize,
        resources: u32,
        opponent_resources: u32,
        delta: u32,
        flags: BoundFlags,
    ) -> Result<Self> {
        Ok(Self {
            resources,
            delta,
            table: UniformWinTable::new(battlefields, resources, delta)?,
            builder: FeasibleSetBuilder::new(battlefields, opponent_resources, delta, flags)?,
        })
    }

    pub fn feasible_set(&self, pi: &Decision, feedback: &Feedback) -> Result<FeasibleSet> {
        self.builder.build(pi, feedback)
    }

    pub fn truth(&self, opponent: &Decision) -> Result<TrueMetrics> {
        Ok(TrueMetrics {
            max_payoff: max_payoff(opponent.allocations(), self.resources, self.delta),
            expected_payoff: self.table.expected(opponent)?,
        })
    }

    pub fn estimate(&self, fs: &FeasibleSet) -> Result<Estimates> {
        Ok(Estimates {
            observable_max: observable_max_payoff(fs, &DecisionDistribution::Uniform, self.resources, self.delta)?,
            supremum: supremum_payoff(fs, self.resources, self.delta),
            observable_expected: observable_expected_with(&self.table, fs, &DecisionDistribution::Uniform)?,
            feasible_count: fs.len(),
        })
    }
}
