use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;

use super::Strategy;
use crate::error::{Error, Result};
use crate::game::{Decision, Feedback, Observation};
use crate::graph::{DecisionGraph, PathCountTable};

pub const DEFAULT_SAMPLES: usize = 1000;

/// Optimistic combinatorial learner over `(battlefield, allocation)` pairs.
///
/// Keeps the empirical win rate of every pair from semi-bandit feedback. Each
/// round it draws `samples` candidate decisions uniformly and plays the one
/// whose summed upper confidence values is largest. Pairs never tried count as
/// infinitely optimistic: candidates are ranked first by how many untried pairs
/// they contain, then by the finite sum. Ties go to the first candidate drawn.
#[derive(Debug, Clone)]
pub struct UcbCombinatorial {
    sampler: PathCountTable,
    samples: usize,
    wins: Vec<f64>,
    pulls: Vec<u64>,
    rounds_seen: u64,
}

impl UcbCombinatorial {
    pub fn new(battlefields: usize, resources: u32, samples: usize) -> Result<Self> {
        if samples == 0 {
            return Err(Error::InvalidConfig("candidate sample size must be at least 1".into()));
        }
        let graph = DecisionGraph::new(battlefields, resources)?;
        let pairs = battlefields * (resources as usize + 1);
        Ok(Self {
            sampler: graph.path_counts(),
            samples,
            wins: vec![0.0; pairs],
            pulls: vec![0; pairs],
            rounds_seen: 0,
        })
    }

    fn pair(&self, battlefield: usize, allocation: u32) -> usize {
        battlefield * (self.sampler.graph().resources() as usize + 1) + allocation as usize
    }

    /// `(untried pairs, sum of finite upper confidence values)`.
    fn score(&self, decision: &Decision, log_t: f64) -> (usize, f64) {
        let mut untried = 0;
        let mut sum = 0.0;
        for (i, &a) in decision.allocations().iter().enumerate() {
            let p = self.pair(i, a);
            let n = self.pulls[p];
            if n == 0 {
                untried += 1;
            } else {
                let n = n as f64;
                sum += self.wins[p] / n + libm::sqrt(1.5 * log_t / n);
            }
        }
        (untried, sum)
    }
}

impl Strategy for UcbCombinatorial {
    fn name(&self) -> &str {
        "ucb"
    }

    fn choose(&mut self, _round: usize, rng: &mut dyn RngCore) -> Decision {
        let log_t = libm::log((self.rounds_seen + 1) as f64);
        let mut best: Option<(Decision, (usize, f64))> = None;
        for _ in 0..self.samples {
            let candidate = self.sampler.sample(rng).expect("full decision graph is never empty");
            let score = self.score(&candidate, log_t);
            let better = match &best {
                None => true,
                Some((_, (u, s))) => score.0 > *u || (score.0 == *u && score.1 > *s),
            };
            if better {
                best = Some((candidate, score));
            }
        }
        best.expect("at least one sample").0
    }

    fn observe(&mut self, observation: &Observation) -> Result<()> {
        let Feedback::SemiBandit(outcome) = &observation.feedback else {
            return Err(Error::UnsupportedFeedback {
                expected: "semi-bandit",
            });
        };
        let decision = &observation.decision;
        if outcome.battlefields() != decision.battlefields() {
            return Err(Error::DimensionMismatch {
                expected: decision.battlefields(),
                found: outcome.battlefields(),
            });
        }
        for (i, &a) in decision.allocations().iter().enumerate() {
            let p = self.pair(i, a);
            self.pulls[p] += 1;
            if outcome.won(i) {
                self.wins[p] += 1.0;
            }
        }
        self.rounds_seen += 1;
        Ok(())
    }
}
