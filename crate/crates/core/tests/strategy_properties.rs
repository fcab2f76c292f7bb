mod common;

use blotto_core::estimators::UniformWinTable;
use blotto_core::game::{payoff, payoff_vector};
use blotto_core::strategies::{
    discretize, Discretized, Exp3Edge, HedgeAllocator, StaticStrategy, UcbCombinatorial, UniformRandom, DEFAULT_C,
};
use blotto_core::{Decision, DecisionGraph, Feedback, FeedbackMode, Observation, Strategy};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn observe(s: &mut dyn Strategy, round: usize, d: Decision, opponent: &Decision, delta: u32, mode: FeedbackMode) {
    let v = payoff_vector(&d, opponent, delta).unwrap();
    s.observe(&Observation {
        round,
        decision: d,
        feedback: Feedback::from_payoff(v, mode),
    })
    .unwrap();
}

#[test]
fn exp3_probabilities_match_path_product_normalization() {
    for (k, n) in [(1, 3), (2, 5), (3, 4), (3, 6)] {
        for gamma in [0.0, 0.25, 1.0] {
            let mut s = Exp3Edge::new(k, n, gamma, 0.3).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64 * 7 + k as u64);
            for t in 1..=25 {
                let d = s.choose(t, &mut rng);
                let opponent = common::random_decision(&mut rng, k, n);
                let mode = if t % 3 == 0 {
                    FeedbackMode::Bandit
                } else {
                    FeedbackMode::SemiBandit
                };
                observe(&mut s, t, d, &opponent, 0, mode);
            }
            let all = DecisionGraph::new(k, n).unwrap().decisions();
            let log_products: Vec<f64> = all
                .iter()
                .map(|d| {
                    let mut at = 0;
                    d.allocations()
                        .iter()
                        .enumerate()
                        .map(|(i, &a)| {
                            let w = s.edge_log_weight(i + 1, at, at + a).unwrap();
                            at += a;
                            w
                        })
                        .sum()
                })
                .collect();
            let top = log_products.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let z: f64 = log_products.iter().map(|l| (l - top).exp()).sum();
            let mut total = 0.0;
            for (d, l) in all.iter().zip(&log_products) {
                let want = gamma / all.len() as f64 + (1.0 - gamma) * (l - top).exp() / z;
                let got = s.path_probability(d);
                assert!(
                    (got - want).abs() <= 1e-9,
                    "K={k} N={n} gamma={gamma} {d}: {got} vs {want}"
                );
                total += got;
            }
            assert!((total - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn exp3_full_exploration_samples_uniformly() {
    let mut s = Exp3Edge::new(3, 4, 1.0, 0.05).unwrap();
    let mut u = UniformRandom::new(3, 4).unwrap();
    let mut r1 = ChaCha8Rng::seed_from_u64(4);
    let mut r2 = ChaCha8Rng::seed_from_u64(4);
    for t in 1..=50 {
        let _ = r2.gen::<f64>();
        assert_eq!(s.choose(t, &mut r1), u.choose(t, &mut r2));
    }
}

#[test]
fn exp3_outperforms_uniform_against_static_opponent() {
    let (k, n) = (3, 10);
    let opponent = Decision::from_allocations(vec![4, 3, 3]);
    let mut s = Exp3Edge::with_defaults(k, n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut late = 0usize;
    let horizon = 3000;
    let tail = 1000;
    for t in 1..=horizon {
        let d = s.choose(t, &mut rng);
        if t > horizon - tail {
            late += payoff(d.allocations(), opponent.allocations(), 0);
        }
        observe(&mut s, t, d, &opponent, 0, FeedbackMode::SemiBandit);
    }
    let uniform = UniformWinTable::new(k, n, 0)
        .unwrap()
        .expected(&opponent)
        .unwrap()
        .to_f64()
        .unwrap();
    let learned = late as f64 / tail as f64;
    assert!(learned > uniform + 0.1, "learned {learned} vs uniform {uniform}");
}

#[test]
fn ucb_exploits_a_concentrated_opponent() {
    let (k, n) = (3, 10);
    let opponent = Decision::from_allocations(vec![10, 0, 0]);
    let mut s = UcbCombinatorial::new(k, n, 1000).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let burn_in = 200;
    let mut good = 0;
    for t in 1..=1000 {
        let d = s.choose(t, &mut rng);
        if t > burn_in && payoff(d.allocations(), opponent.allocations(), 0) >= k - 1 {
            good += 1;
        }
        observe(&mut s, t, d, &opponent, 0, FeedbackMode::SemiBandit);
    }
    assert!(good as f64 > 0.9 * 800.0, "{good} of 800 rounds");
}

#[test]
fn every_strategy_returns_valid_decisions() {
    let (k, n) = (4, 9);
    let mut strategies: Vec<Box<dyn Strategy>> = vec![
        Box::new(UniformRandom::new(k, n).unwrap()),
        Box::new(Exp3Edge::with_defaults(k, n).unwrap()),
        Box::new(UcbCombinatorial::new(k, n, 50).unwrap()),
        Box::new(StaticStrategy::concentrated(k, n, 2).unwrap()),
        Box::new(StaticStrategy::profile(vec![0.1, 0.5, 0.0, 0.4], n).unwrap()),
        Box::new(Discretized::new(HedgeAllocator::new(k, 0.3, DEFAULT_C).unwrap(), n)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for s in &mut strategies {
        for t in 1..=60 {
            let d = s.choose(t, &mut rng);
            assert_eq!(d.battlefields(), k, "{}", s.name());
            assert_eq!(d.allocations().iter().sum::<u32>(), n, "{}", s.name());
            let opponent = common::random_decision(&mut rng, k, 7);
            observe(s.as_mut(), t, d, &opponent, 1, FeedbackMode::SemiBandit);
        }
    }
}

#[test]
fn discretize_is_unbiased() {
    let trials = 100_000;
    let cases: [(&[f64], u32); 4] = [
        (&[0.3, 0.3, 0.4], 10),
        (&[1.0, 2.0, 3.0, 4.0], 7),
        (&[0.17, 0.0, 0.83], 5),
        (&[std::f64::consts::PI, std::f64::consts::E, 1.0], 13),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    for (x, n) in cases {
        let total: f64 = x.iter().sum();
        let target: Vec<f64> = x.iter().map(|v| f64::from(n) * v / total).collect();
        let mut sum = vec![0.0; x.len()];
        let mut sum_sq = vec![0.0; x.len()];
        for _ in 0..trials {
            let d = discretize(x, n, &mut rng).unwrap();
            assert_eq!(d.allocations().iter().sum::<u32>(), n);
            for (i, &a) in d.allocations().iter().enumerate() {
                sum[i] += f64::from(a);
                sum_sq[i] += f64::from(a) * f64::from(a);
            }
        }
        for i in 0..x.len() {
            let mean = sum[i] / trials as f64;
            let var = (sum_sq[i] / trials as f64 - mean * mean).max(0.0);
            let se = (var / trials as f64).sqrt();
            let err = (mean - target[i]).abs();
            assert!(
                err <= 3.0 * se + 1e-9,
                "x={x:?} i={i}: mean {mean} target {} se {se}",
                target[i]
            );
        }
    }
}
