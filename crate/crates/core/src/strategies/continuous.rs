use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;

use super::{discretize, Strategy};
use crate::error::{Error, Result};
use crate::game::{Decision, Feedback, Observation};

/// Produces a continuous allocation profile each round.
pub trait ContinuousAllocator {
    fn name(&self) -> &str;

    /// Non-negative profile with at least one positive entry; need not be normalized.
    fn allocate(&mut self, round: usize) -> Vec<f64>;

    fn update(&mut self, observation: &Observation) -> Result<()>;
}

/// Turns a continuous allocator into a strategy by rounding with [`discretize`].
#[derive(Debug, Clone)]
pub struct Discretized<A> {
    allocator: A,
    resources: u32,
    name: String,
}

impl<A: ContinuousAllocator> Discretized<A> {
    pub fn new(allocator: A, resources: u32) -> Self {
        let name = alloc::format!("{}+discretize", allocator.name());
        Self {
            allocator,
            resources,
            name,
        }
    }

    pub fn allocator(&self) -> &A {
        &self.allocator
    }
}

impl<A: ContinuousAllocator> Strategy for Discretized<A> {
    fn name(&self) -> &str {
        &self.name
    }

    fn choose(&mut self, round: usize, rng: &mut dyn RngCore) -> Decision {
        let profile = self.allocator.allocate(round);
        discretize(&profile, self.resources, rng).expect("allocator returned a usable profile")
    }

    fn observe(&mut self, observation: &Observation) -> Result<()> {
        self.allocator.update(observation)
    }
}

/// Multiplicative weights over battlefields: every lost battlefield has its
/// weight multiplied by `exp(eta)`, and the profile is the normalized weights.
///
/// `c` is carried for configuration compatibility and does not affect behaviour.
#[derive(Debug, Clone)]
pub struct HedgeAllocator {
    log_weights: Vec<f64>,
    eta: f64,
    c: f64,
}

pub const DEFAULT_HEDGE_ETA: f64 = 0.3;
pub const DEFAULT_C: f64 = 2.5;

impl HedgeAllocator {
    pub fn new(battlefields: usize, eta: f64, c: f64) -> Result<Self> {
        if battlefields == 0 {
            return Err(Error::NoBattlefields);
        }
        if !eta.is_finite() || eta < 0.0 {
            return Err(Error::InvalidConfig(alloc::format!(
                "eta must be finite and non-negative, got {eta}"
            )));
        }
        Ok(Self {
            log_weights: vec![0.0; battlefields],
            eta,
            c,
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

impl ContinuousAllocator for HedgeAllocator {
    fn name(&self) -> &str {
        "hedge"
    }

    fn allocate(&mut self, _round: usize) -> Vec<f64> {
        let top = self.log_weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        self.log_weights.iter().map(|w| libm::exp(w - top)).collect()
    }

    fn update(&mut self, observation: &Observation) -> Result<()> {
        let Feedback::SemiBandit(outcome) = &observation.feedback else {
            return Err(Error::UnsupportedFeedback {
                expected: "semi-bandit",
            });
        };
        if outcome.battlefields() != self.log_weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.log_weights.len(),
                found: outcome.battlefields(),
            });
        }
        for (w, &won) in self.log_weights.iter_mut().zip(outcome.as_slice()) {
            if !won {
                *w += self.eta;
            }
        }
        let top = self.log_weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for w in &mut self.log_weights {
            *w -= top;
        }
        Ok(())
    }
}
