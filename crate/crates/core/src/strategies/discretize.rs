use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::game::Decision;

/// Rounds a continuous allocation profile to an integer decision summing to `resources`.
///
/// `x` is normalized and scaled to `resources`, floored, and the shortfall is
/// handed out one unit per battlefield by sampling indices without replacement,
/// with inclusion probability equal to each fractional remainder. Sampling is
/// systematic over a random permutation, which makes the expected allocation
/// exactly `resources * x / sum(x)`.
pub fn discretize(x: &[f64], resources: u32, rng: &mut dyn RngCore) -> Result<Decision> {
    if x.is_empty() {
        return Err(Error::NoBattlefields);
    }
    if x.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::InvalidConfig(
            "continuous allocations must be finite and non-negative".into(),
        ));
    }
    let sum: f64 = x.iter().sum();
    if sum <= 0.0 {
        return Err(Error::ZeroProfile);
    }
    let n = f64::from(resources);
    let scaled: Vec<f64> = x.iter().map(|v| n * v / sum).collect();
    let mut floors: Vec<u32> = scaled.iter().map(|v| libm::floor(*v) as u32).collect();
    let mut assigned: u64 = floors.iter().map(|&f| u64::from(f)).sum();
    // Floating error can push a floor one unit over budget.
    while assigned > u64::from(resources) {
        let i = (0..floors.len())
            .max_by(|&a, &b| floors[a].cmp(&floors[b]))
            .expect("non-empty");
        floors[i] -= 1;
        assigned -= 1;
    }
    let shortfall = (u64::from(resources) - assigned) as usize;
    if shortfall > 0 {
        let remainders: Vec<f64> = scaled
            .iter()
            .zip(&floors)
            .map(|(v, &f)| (v - f64::from(f)).clamp(0.0, 1.0))
            .collect();
        for i in pick_indices(&remainders, shortfall, rng) {
            floors[i] += 1;
        }
    }
    Decision::new(floors, resources)
}

/// Chooses `count` distinct indices with inclusion probabilities proportional
/// to `weights` (rescaled to sum to `count`).
fn pick_indices(weights: &[f64], count: usize, rng: &mut dyn RngCore) -> Vec<usize> {
    let positive: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] > 0.0).collect();
    let total: f64 = positive.iter().map(|&i| weights[i]).sum();
    let mut chosen: Vec<usize> = Vec::with_capacity(count);

    if positive.len() >= count && total > 0.0 {
        let mut order = positive.clone();
        order.shuffle(rng);
        let scale = count as f64 / total;
        let start: f64 = rng.gen::<f64>();
        let mut next_mark = start;
        let mut cumulative = 0.0;
        for &i in &order {
            cumulative += (weights[i] * scale).min(1.0);
            if chosen.len() < count && cumulative > next_mark {
                chosen.push(i);
                next_mark += 1.0;
            }
        }
    }

    if chosen.len() < count {
        // Only reachable through rounding error: fill by largest remainder.
        let mut rest: Vec<usize> = (0..weights.len()).filter(|i| !chosen.contains(i)).collect();
        rest.sort_by(|&a, &b| {
            weights[b]
                .partial_cmp(&weights[a])
                .unwrap_or(core::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        chosen.extend(rest.into_iter().take(count - chosen.len()));
    }
    chosen
}
