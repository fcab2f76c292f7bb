//! Bounds on the opponent's per-battlefield allocation under semi-bandit feedback.
//!
//! Notation: `pi` is the player's decision, `delta` their draw bias, `N'` the
//! opponent's budget, `Omega` the battlefields the player won and `Lambda` the
//! ones they lost. For `i` in `Omega` the opponent had `phi_i <= pi_i + delta - 1`;
//! for `i` in `Lambda`, `phi_i >= pi_i + delta`.
//!
//! The default bound set is the per-battlefield table used in the reference
//! experiments. The tighter upper bound and the two alternative lower bounds are
//! opt-in through [`BoundFlags`]. Every variant is valid, so enabling them only
//! prunes earlier; after dead-end pruning the feasible set is the same.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::game::{payoff, Decision, Feedback, PayoffVector};
use crate::graph::DecisionGraph;

/// Partition of the battlefields into won (`Omega`) and lost (`Lambda`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BattlefieldOutcome {
    lost: Vec<bool>,
}

impl BattlefieldOutcome {
    pub fn from_payoff(payoff: &PayoffVector) -> Self {
        Self {
            lost: payoff.as_slice().iter().map(|&won| !won).collect(),
        }
    }

    pub fn battlefields(&self) -> usize {
        self.lost.len()
    }

    pub fn is_lost(&self, battlefield: usize) -> bool {
        self.lost[battlefield]
    }

    pub fn won(&self) -> BTreeSet<usize> {
        (0..self.lost.len()).filter(|&i| !self.lost[i]).collect()
    }

    pub fn lost(&self) -> BTreeSet<usize> {
        (0..self.lost.len()).filter(|&i| self.lost[i]).collect()
    }

    pub fn lost_count(&self) -> usize {
        self.lost.iter().filter(|&&l| l).count()
    }
}

/// Splits semi-bandit feedback into won and lost battlefields.
pub fn classify_outcomes(feedback: &Feedback) -> Result<BattlefieldOutcome> {
    match feedback {
        Feedback::SemiBandit(v) => Ok(BattlefieldOutcome::from_payoff(v)),
        Feedback::Bandit { .. } => Err(Error::UnsupportedFeedback {
            expected: "semi-bandit",
        }),
    }
}

/// Inclusive per-battlefield interval `[lower_i, upper_i]` for the opponent's allocation.
///
/// Lower bounds are clamped up to 0 and upper bounds down to `N'`. The other
/// direction is left alone: an upper bound below 0 or a lower bound above `N'`
/// means the interval is empty, and clamping it would invent feasible allocations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllocationBounds {
    lower: Vec<i64>,
    upper: Vec<i64>,
}

impl AllocationBounds {
    pub fn new(lower: Vec<i64>, upper: Vec<i64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        Ok(Self { lower, upper })
    }

    /// `[0, resources]` on every battlefield.
    pub fn vacuous(battlefields: usize, resources: u32) -> Self {
        Self {
            lower: alloc::vec![0; battlefields],
            upper: alloc::vec![i64::from(resources); battlefields],
        }
    }

    pub fn battlefields(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[i64] {
        &self.lower
    }

    pub fn upper(&self) -> &[i64] {
        &self.upper
    }

    pub fn contains(&self, decision: &Decision) -> bool {
        decision.battlefields() == self.battlefields()
            && decision
                .allocations()
                .iter()
                .enumerate()
                .all(|(i, &a)| self.lower[i] <= i64::from(a) && i64::from(a) <= self.upper[i])
    }

    /// Component-wise intersection of two valid bound sets.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        if other.battlefields() != self.battlefields() {
            return Err(Error::DimensionMismatch {
                expected: self.battlefields(),
                found: other.battlefields(),
            });
        }
        Ok(Self {
            lower: self.lower.iter().zip(&other.lower).map(|(a, b)| *a.max(b)).collect(),
            upper: self.upper.iter().zip(&other.upper).map(|(a, b)| *a.min(b)).collect(),
        })
    }

    fn clamped(mut self, resources: u32) -> Self {
        let cap = i64::from(resources);
        for l in &mut self.lower {
            *l = (*l).max(0);
        }
        for u in &mut self.upper {
            *u = (*u).min(cap);
        }
        self
    }
}

/// Which bound variants to apply on top of the per-battlefield table.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct BoundFlags {
    pub tight_upper: bool,
    pub general_lower: bool,
    pub tight_lower: bool,
}

impl BoundFlags {
    pub const TABLE_ONLY: BoundFlags = BoundFlags {
        tight_upper: false,
        general_lower: false,
        tight_lower: false,
    };

    pub const ALL: BoundFlags = BoundFlags {
        tight_upper: true,
        general_lower: true,
        tight_lower: true,
    };
}

struct Terms {
    /// `pi_i + delta` per battlefield.
    effective: Vec<i64>,
    /// Sum of `pi_l + delta` over lost battlefields.
    lost_sum: i64,
    lost_count: i64,
}

fn terms(pi: &Decision, outcome: &BattlefieldOutcome, delta: u32) -> Result<Terms> {
    if outcome.battlefields() != pi.battlefields() {
        return Err(Error::DimensionMismatch {
            expected: pi.battlefields(),
            found: outcome.battlefields(),
        });
    }
    let effective: Vec<i64> = pi
        .allocations()
        .iter()
        .map(|&a| i64::from(a) + i64::from(delta))
        .collect();
    let lost_sum = (0..effective.len())
        .filter(|&i| outcome.is_lost(i))
        .map(|i| effective[i])
        .sum();
    Ok(Terms {
        effective,
        lost_sum,
        lost_count: outcome.lost_count() as i64,
    })
}

/// The per-battlefield table:
///
/// | bound | won (`Omega`)        | lost (`Lambda`)                          |
/// |-------|----------------------|------------------------------------------|
/// | upper | `pi_i + delta - 1`   | `N' - sum_{l in Lambda, l != i} (pi_l + delta)` |
/// | lower | `0`                  | `pi_i + delta`                           |
pub fn table_bounds(
    pi: &Decision,
    outcome: &BattlefieldOutcome,
    delta: u32,
    opponent_resources: u32,
) -> Result<AllocationBounds> {
    let t = terms(pi, outcome, delta)?;
    let n_opp = i64::from(opponent_resources);
    let mut lower = Vec::with_capacity(t.effective.len());
    let mut upper = Vec::with_capacity(t.effective.len());
    for (i, &eff) in t.effective.iter().enumerate() {
        if outcome.is_lost(i) {
            lower.push(eff);
            upper.push(n_opp - (t.lost_sum - eff));
        } else {
            lower.push(0);
            upper.push(eff - 1);
        }
    }
    Ok(AllocationBounds { lower, upper }.clamped(opponent_resources))
}

/// Table bounds with each upper bound replaced by
/// `min(table upper, N' - sum_{l in Lambda \ {i}} (pi_l + delta))`.
///
/// For lost battlefields the two coincide; for won ones the second term is
/// smaller exactly when `N' + 1 < sum_{l in Lambda ∪ {i}} (pi_l + delta)`.
pub fn tight_upper_bounds(
    pi: &Decision,
    outcome: &BattlefieldOutcome,
    delta: u32,
    opponent_resources: u32,
) -> Result<AllocationBounds> {
    let t = terms(pi, outcome, delta)?;
    let table = table_bounds(pi, outcome, delta, opponent_resources)?;
    let n_opp = i64::from(opponent_resources);
    let upper = t
        .effective
        .iter()
        .enumerate()
        .map(|(i, &eff)| {
            let others = if outcome.is_lost(i) {
                t.lost_sum - eff
            } else {
                t.lost_sum
            };
            table.upper[i].min(n_opp - others)
        })
        .collect();
    Ok(AllocationBounds {
        lower: table.lower,
        upper,
    }
    .clamped(opponent_resources))
}

/// Table bounds with each lower bound raised to
/// `pi_i [i in Lambda] + (|Lambda| - 1 - [i in Lambda]) (sum_Lambda (pi + delta) - N')
///  - sum_{w in Omega \ {i}} (pi_w + delta - 1)` where that is larger.
pub fn general_lower_bounds(
    pi: &Decision,
    outcome: &BattlefieldOutcome,
    delta: u32,
    opponent_resources: u32,
) -> Result<AllocationBounds> {
    let t = terms(pi, outcome, delta)?;
    let table = table_bounds(pi, outcome, delta, opponent_resources)?;
    let n_opp = i64::from(opponent_resources);
    let won_slack_total: i64 = (0..t.effective.len())
        .filter(|&i| !outcome.is_lost(i))
        .map(|i| t.effective[i] - 1)
        .sum();
    let lower = t
        .effective
        .iter()
        .enumerate()
        .map(|(i, &eff)| {
            let lost = i64::from(outcome.is_lost(i));
            let own = i64::from(pi.get(i));
            let won_others = if outcome.is_lost(i) {
                won_slack_total
            } else {
                won_slack_total - (eff - 1)
            };
            let value = own * lost + (t.lost_count - 1 - lost) * (t.lost_sum - n_opp) - won_others;
            table.lower[i].max(value)
        })
        .collect();
    Ok(AllocationBounds {
        lower,
        upper: table.upper,
    }
    .clamped(opponent_resources))
}

/// Table bounds with the lower bound raised to
/// `N' - N_p + pi_i - delta [i in Lambda] + (K - 1)(1 - delta)` on battlefields
/// where `Lambda` is empty or `{i}` and
/// `N_p + 2 delta [i in Lambda] < N' + pi_i (1 - [i in Lambda]) + (K - 1)(1 - delta)`.
pub fn tight_lower_bounds(
    pi: &Decision,
    outcome: &BattlefieldOutcome,
    delta: u32,
    opponent_resources: u32,
) -> Result<AllocationBounds> {
    let table = table_bounds(pi, outcome, delta, opponent_resources)?;
    let k = pi.battlefields() as i64;
    let n_p = i64::from(pi.resources());
    let n_opp = i64::from(opponent_resources);
    let d = i64::from(delta);
    let lost_count = outcome.lost_count();
    let lower = (0..pi.battlefields())
        .map(|i| {
            let lost = outcome.is_lost(i);
            let applicable = lost_count == 0 || (lost_count == 1 && lost);
            if !applicable {
                return table.lower[i];
            }
            let ind = i64::from(lost);
            let own = i64::from(pi.get(i));
            let condition = n_p + 2 * d * ind < n_opp + own * (1 - ind) + (k - 1) * (1 - d);
            if !condition {
                return table.lower[i];
            }
            let value = n_opp - n_p + own - d * ind + (k - 1) * (1 - d);
            table.lower[i].max(value)
        })
        .collect();
    Ok(AllocationBounds {
        lower,
        upper: table.upper,
    }
    .clamped(opponent_resources))
}

/// Table bounds intersected with every enabled variant.
pub fn opponent_bounds(
    pi: &Decision,
    outcome: &BattlefieldOutcome,
    delta: u32,
    opponent_resources: u32,
    flags: BoundFlags,
) -> Result<AllocationBounds> {
    let mut bounds = table_bounds(pi, outcome, delta, opponent_resources)?;
    if flags.tight_upper {
        bounds = bounds.intersect(&tight_upper_bounds(pi, outcome, delta, opponent_resources)?)?;
    }
    if flags.general_lower {
        bounds = bounds.intersect(&general_lower_bounds(pi, outcome, delta, opponent_resources)?)?;
    }
    if flags.tight_lower {
        bounds = bounds.intersect(&tight_lower_bounds(pi, outcome, delta, opponent_resources)?)?;
    }
    Ok(bounds)
}

/// Bandit-feedback feasible set: every opponent decision with the observed total payoff.
///
/// Exact but enumerates the opponent's whole decision space.
pub fn bandit_feasible_filter(
    pi: &Decision,
    observed_total: usize,
    delta: u32,
    opponent_resources: u32,
) -> Result<Vec<Decision>> {
    let graph = DecisionGraph::new(pi.battlefields(), opponent_resources)?;
    bandit_filter_on(&graph, pi, observed_total, delta)
}

pub(crate) fn bandit_filter_on(
    graph: &DecisionGraph,
    pi: &Decision,
    observed_total: usize,
    delta: u32,
) -> Result<Vec<Decision>> {
    let mut out = Vec::new();
    let resources = graph.resources();
    graph.for_each_path(|phi| {
        if payoff(pi.allocations(), phi, delta) == observed_total {
            out.push(Decision::new(phi.to_vec(), resources).expect("path weights sum to N"));
        }
    });
    if out.is_empty() {
        return Err(Error::EmptyFeasibleSet(alloc::format!(
            "no opponent decision against {pi} yields total payoff {observed_total}"
        )));
    }
    Ok(out)
}
