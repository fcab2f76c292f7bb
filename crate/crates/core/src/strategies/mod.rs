//! Allocation strategies used to drive simulations.
//!
//! A strategy sees only its own decisions and the feedback it received, through
//! [`Observation`]. None of them is a reproduction of a published allocation
//! algorithm; they exist to generate allocation sequences with different
//! behaviours (uniform, adaptive over paths, optimistic, static, continuous).

mod continuous;
mod discretize;
mod exp3;
mod ucb;

use alloc::string::String;
use alloc::vec::Vec;

use rand::RngCore;

pub use continuous::{ContinuousAllocator, Discretized, HedgeAllocator, DEFAULT_C, DEFAULT_HEDGE_ETA};
pub use discretize::discretize;
pub use exp3::{Exp3Edge, DEFAULT_ETA, DEFAULT_GAMMA};
pub use ucb::{UcbCombinatorial, DEFAULT_SAMPLES};

use crate::error::Result;
use crate::game::{Decision, Observation};
use crate::graph::{DecisionGraph, PathCountTable};

pub trait Strategy {
    fn name(&self) -> &str;

    /// Decision for round `round` (1-based).
    fn choose(&mut self, round: usize, rng: &mut dyn RngCore) -> Decision;

    /// Feedback for the decision just played.
    fn observe(&mut self, observation: &Observation) -> Result<()>;
}

impl<S: Strategy + ?Sized> Strategy for alloc::boxed::Box<S> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn choose(&mut self, round: usize, rng: &mut dyn RngCore) -> Decision {
        (**self).choose(round, rng)
    }

    fn observe(&mut self, observation: &Observation) -> Result<()> {
        (**self).observe(observation)
    }
}

/// Uniform over `Pi_p`, by path-count sampling on the decision graph.
#[derive(Debug, Clone)]
pub struct UniformRandom {
    counts: PathCountTable,
}

impl UniformRandom {
    pub fn new(battlefields: usize, resources: u32) -> Result<Self> {
        Ok(Self {
            counts: DecisionGraph::new(battlefields, resources)?.path_counts(),
        })
    }
}

impl Strategy for UniformRandom {
    fn name(&self) -> &str {
        "uniform"
    }

    fn choose(&mut self, _round: usize, rng: &mut dyn RngCore) -> Decision {
        self.counts.sample(rng).expect("full decision graph is never empty")
    }

    fn observe(&mut self, _observation: &Observation) -> Result<()> {
        Ok(())
    }
}

#[derive(Debug, Clone)]
enum StaticPlan {
    Fixed(Decision),
    Profile(Vec<f64>, u32),
}

/// Plays the same allocation every round: either a fixed decision or a fixed
/// continuous profile passed through [`discretize`].
#[derive(Debug, Clone)]
pub struct StaticStrategy {
    name: String,
    plan: StaticPlan,
}

impl StaticStrategy {
    /// Whole budget on `battlefield` (0-based).
    pub fn concentrated(battlefields: usize, resources: u32, battlefield: usize) -> Result<Self> {
        if battlefield >= battlefields {
            return Err(crate::Error::InvalidConfig(alloc::format!(
                "battlefield {battlefield} out of range for K={battlefields}"
            )));
        }
        let mut allocations = alloc::vec![0; battlefields];
        allocations[battlefield] = resources;
        Ok(Self::fixed(Decision::new(allocations, resources)?))
    }

    pub fn fixed(decision: Decision) -> Self {
        Self {
            name: "static".into(),
            plan: StaticPlan::Fixed(decision),
        }
    }

    pub fn profile(profile: Vec<f64>, resources: u32) -> Result<Self> {
        if profile.is_empty() {
            return Err(crate::Error::NoBattlefields);
        }
        if !profile.iter().any(|&x| x > 0.0) || profile.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(crate::Error::ZeroProfile);
        }
        Ok(Self {
            name: "static-profile".into(),
            plan: StaticPlan::Profile(profile, resources),
        })
    }
}

impl Strategy for StaticStrategy {
    fn name(&self) -> &str {
        &self.name
    }

    fn choose(&mut self, _round: usize, rng: &mut dyn RngCore) -> Decision {
        match &self.plan {
            StaticPlan::Fixed(d) => d.clone(),
            StaticPlan::Profile(x, n) => discretize(x, *n, rng).expect("profile validated at construction"),
        }
    }

    fn observe(&mut self, _observation: &Observation) -> Result<()> {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Feedback, PayoffVector};
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn uniform_outputs_are_valid() {
        let mut s = UniformRandom::new(4, 9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for t in 1..=200 {
            let d = s.choose(t, &mut rng);
            assert_eq!(d.battlefields(), 4);
            assert_eq!(d.allocations().iter().sum::<u32>(), 9);
        }
    }

    #[test]
    fn uniform_is_deterministic_per_seed() {
        let run = |seed| {
            let mut s = UniformRandom::new(3, 10).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (1..=50).map(|t| s.choose(t, &mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(run(5), run(5));
        assert_ne!(run(5), run(6));
    }

    #[test]
    fn concentrated_is_fixed() {
        let mut s = StaticStrategy::concentrated(3, 7, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for t in 1..=5 {
            assert_eq!(s.choose(t, &mut rng).allocations(), &[7, 0, 0]);
        }
        let obs = Observation {
            round: 1,
            decision: Decision::from_allocations(vec![7, 0, 0]),
            feedback: Feedback::SemiBandit(PayoffVector::from_bits(&[1, 0, 0])),
        };
        s.observe(&obs).unwrap();
        assert!(StaticStrategy::concentrated(3, 7, 3).is_err());
    }

    #[test]
    fn profile_delegates_to_discretize() {
        let mut a = StaticStrategy::profile(vec![1.0, 1.0, 1.0], 10).unwrap();
        let mut r1 = ChaCha8Rng::seed_from_u64(4);
        let mut r2 = ChaCha8Rng::seed_from_u64(4);
        for t in 1..=20 {
            let d = a.choose(t, &mut r1);
            assert_eq!(d, discretize(&[1.0, 1.0, 1.0], 10, &mut r2).unwrap());
            assert!(d.allocations().iter().all(|&x| x == 3 || x == 4));
        }
        assert!(StaticStrategy::profile(vec![0.0, 0.0], 3).is_err());
    }
}
