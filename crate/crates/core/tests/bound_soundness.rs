mod common;

use blotto_core::bounds::{
    general_lower_bounds, opponent_bounds, table_bounds, tight_lower_bounds, tight_upper_bounds, BattlefieldOutcome,
};
use blotto_core::game::payoff_vector;
use blotto_core::BoundFlags;
use common::random_decision;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn every_variant_brackets_the_true_allocation() {
    let mut rng = ChaCha8Rng::seed_from_u64(10_000);
    for round in 0..20_000 {
        let k = rng.gen_range(1..=5);
        let n_p = rng.gen_range(1..=12);
        let n_opp = rng.gen_range(1..=12);
        let delta = rng.gen_range(0..=1);
        let pi = random_decision(&mut rng, k, n_p);
        let phi = random_decision(&mut rng, k, n_opp);
        let outcome = BattlefieldOutcome::from_payoff(&payoff_vector(&pi, &phi, delta).unwrap());
        assert_eq!(outcome.won().len() + outcome.lost().len(), k);
        assert!(outcome.won().is_disjoint(&outcome.lost()));

        let table = table_bounds(&pi, &outcome, delta, n_opp).unwrap();
        let variants = [
            ("table", table.clone()),
            ("tight-upper", tight_upper_bounds(&pi, &outcome, delta, n_opp).unwrap()),
            (
                "general-lower",
                general_lower_bounds(&pi, &outcome, delta, n_opp).unwrap(),
            ),
            ("tight-lower", tight_lower_bounds(&pi, &outcome, delta, n_opp).unwrap()),
            (
                "all",
                opponent_bounds(&pi, &outcome, delta, n_opp, BoundFlags::ALL).unwrap(),
            ),
        ];
        for (name, b) in &variants {
            assert!(
                b.contains(&phi),
                "round {round}: {name} excludes phi={phi} (pi={pi}, delta={delta})"
            );
            for i in 0..k {
                assert!(b.lower()[i] >= table.lower()[i], "{name} loosened a lower bound");
                assert!(b.upper()[i] <= table.upper()[i], "{name} loosened an upper bound");
            }
        }
    }
}
