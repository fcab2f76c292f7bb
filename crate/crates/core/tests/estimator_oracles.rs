mod common;

use blotto_core::estimators::{
    feasible_set, max_payoff, max_payoff_bruteforce, observable_max_payoff, supremum_payoff, DecisionDistribution,
};
use blotto_core::game::{payoff, payoff_vector};
use blotto_core::{BoundFlags, Decision, Feedback, FeedbackMode, PayoffEstimator, Rational};
use common::{compositions, random_decision};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn greedy_matches_exhaustive_search() {
    for k in 1..=4 {
        for total in 0..=8 {
            for phi in compositions(k, total) {
                let phi = Decision::new(phi, total).unwrap();
                for n_p in 0..=8 {
                    for delta in 0..=1 {
                        let brute = max_payoff_bruteforce(&phi, n_p, delta).unwrap();
                        let best = compositions(k, n_p)
                            .iter()
                            .map(|a| payoff(a, phi.allocations(), delta))
                            .max()
                            .unwrap();
                        assert_eq!(brute, best);
                        assert_eq!(
                            max_payoff(phi.allocations(), n_p, delta),
                            brute,
                            "phi={phi} N={n_p} delta={delta}"
                        );
                    }
                }
            }
        }
    }
}

fn int(v: usize) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

#[test]
fn estimator_properties_on_random_rounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(31337);
    for _ in 0..2000 {
        let k = rng.gen_range(1..=4);
        let n_p = rng.gen_range(1..=10);
        let n_opp = rng.gen_range(1..=10);
        let delta = rng.gen_range(0..=1);
        let mode = if rng.gen_bool(0.2) {
            FeedbackMode::Bandit
        } else {
            FeedbackMode::SemiBandit
        };
        let pi = random_decision(&mut rng, k, n_p);
        let phi = random_decision(&mut rng, k, n_opp);
        let fb = Feedback::from_payoff(payoff_vector(&pi, &phi, delta).unwrap(), mode);

        let est = PayoffEstimator::new(k, n_p, n_opp, delta, BoundFlags::default()).unwrap();
        let fs = est.feasible_set(&pi, &fb).unwrap();
        assert!(fs.contains(&phi), "true decision missing (mode {mode})");
        assert_eq!(
            fs.decisions(),
            feasible_set(&pi, &fb, delta, n_opp, BoundFlags::default())
                .unwrap()
                .decisions()
        );

        let truth = est.truth(&phi).unwrap();
        let e = est.estimate(&fs).unwrap();
        assert!(e.supremum <= truth.max_payoff, "pessimism");
        let top = fs
            .decisions()
            .iter()
            .map(|d| max_payoff(d.allocations(), n_p, delta))
            .max()
            .unwrap();
        assert!(int(e.supremum) <= e.observable_max);
        assert!(e.observable_max <= int(top));
        assert_eq!(
            e.observable_max,
            observable_max_payoff(&fs, &DecisionDistribution::Uniform, n_p, delta).unwrap()
        );
        assert_eq!(e.supremum, supremum_payoff(&fs, n_p, delta));
        if fs.len() == 1 {
            assert_eq!(e.observable_max, int(truth.max_payoff));
            assert_eq!(e.supremum, truth.max_payoff);
            assert_eq!(e.observable_expected, truth.expected_payoff);
        }
    }
}
