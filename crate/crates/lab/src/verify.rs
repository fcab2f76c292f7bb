//! Brute-force oracle checks shared by the `verify` subcommand and the acceptance suite.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use blotto_core::bounds::{
    bandit_feasible_filter, general_lower_bounds, opponent_bounds, table_bounds, tight_lower_bounds,
    tight_upper_bounds, BattlefieldOutcome,
};
use blotto_core::estimators::{feasible_set, max_payoff, max_payoff_bruteforce};
use blotto_core::game::{payoff, payoff_vector};
use blotto_core::{BoundFlags, Decision, DecisionGraph, Feedback, PayoffVector};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status}  {}: {} ({:.2?})", self.name, self.detail, self.elapsed)
    }
}

fn timed(name: &'static str, body: impl FnOnce() -> Result<String, String>) -> Check {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    match outcome {
        Ok(detail) => Check {
            name,
            passed: true,
            detail,
            elapsed,
        },
        Err(detail) => Check {
            name,
            passed: false,
            detail,
            elapsed,
        },
    }
}

/// All length-`k` non-negative vectors summing to `n`.
pub fn compositions(k: usize, n: u32) -> Vec<Vec<u32>> {
    if k == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for a in 0..=n {
        for mut rest in compositions(k - 1, n - a) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

fn random_decision(rng: &mut ChaCha8Rng, k: usize, n: u32) -> Decision {
    let mut cuts: Vec<u32> = (0..k - 1).map(|_| rng.gen_range(0..=n)).collect();
    cuts.sort_unstable();
    let mut prev = 0;
    let mut v = Vec::with_capacity(k);
    for c in cuts {
        v.push(c - prev);
        prev = c;
    }
    v.push(n - prev);
    Decision::new(v, n).expect("stars and bars sum to n")
}

pub fn decision_counts() -> Check {
    timed("decision counts", || {
        for (k, n, want) in [(3usize, 10u32, 66u32), (3, 15, 136), (5, 15, 3876), (5, 20, 10626)] {
            let got = DecisionGraph::new(k, n).map_err(|e| e.to_string())?.count_decisions();
            if got != BigUint::from(want) {
                return Err(format!("K={k} N={n}: {got} decisions, expected {want}"));
            }
        }
        for k in 1..=4 {
            for n in 0..=8 {
                let g = DecisionGraph::new(k, n).map_err(|e| e.to_string())?;
                let mut paths = Vec::new();
                g.for_each_path(|p| paths.push(p.to_vec()));
                let unique: BTreeSet<_> = paths.iter().cloned().collect();
                let brute: BTreeSet<_> = compositions(k, n).into_iter().collect();
                if unique.len() != paths.len() || unique != brute || g.count_decisions() != BigUint::from(paths.len()) {
                    return Err(format!("path set differs from compositions at K={k} N={n}"));
                }
            }
        }
        Ok("66/136/3876/10626 exact; paths = compositions for K<=4, N<=8".into())
    })
}

pub fn worked_example() -> Check {
    timed("worked pruning example", || {
        let pi = Decision::from_allocations(vec![1, 3, 2]);
        let fb = Feedback::SemiBandit(PayoffVector::from_bits(&[0, 1, 0]));
        let fs = feasible_set(&pi, &fb, 0, 4, BoundFlags::TABLE_ONLY).map_err(|e| e.to_string())?;
        let got: Vec<Vec<u32>> = fs.decisions().iter().map(|d| d.allocations().to_vec()).collect();
        let want = vec![vec![1, 0, 3], vec![1, 1, 2], vec![2, 0, 2]];
        let outcome = BattlefieldOutcome::from_payoff(fb.payoff_vector().expect("semi-bandit"));
        let bounds = table_bounds(&pi, &outcome, 0, 4).map_err(|e| e.to_string())?;
        if got != want {
            return Err(format!("feasible set {got:?}, expected {want:?}"));
        }
        if bounds.lower() != [1, 0, 2] {
            return Err(format!("lower bounds {:?}, expected [1, 0, 2]", bounds.lower()));
        }
        Ok("feasible set {<1,0,3>,<1,1,2>,<2,0,2>}, lower bounds <1,0,2>".into())
    })
}

pub fn feasible_set_oracle(semi_instances: usize, bandit_instances: usize, seed: u64) -> Check {
    timed("feasible-set oracle", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for case in 0..semi_instances {
            let k = rng.gen_range(1..=4);
            let n_p = rng.gen_range(1..=10);
            let n_opp = rng.gen_range(1..=10);
            let delta = rng.gen_range(0..=1);
            let pi = random_decision(&mut rng, k, n_p);
            let phi = random_decision(&mut rng, k, n_opp);
            let observed = payoff_vector(&pi, &phi, delta).map_err(|e| e.to_string())?;
            let fs = feasible_set(
                &pi,
                &Feedback::SemiBandit(observed.clone()),
                delta,
                n_opp,
                BoundFlags::TABLE_ONLY,
            )
            .map_err(|e| format!("case {case}: {e}"))?;
            let got: BTreeSet<Vec<u32>> = fs.decisions().iter().map(|d| d.allocations().to_vec()).collect();
            let want: BTreeSet<Vec<u32>> = compositions(k, n_opp)
                .into_iter()
                .filter(|v| {
                    let cand = Decision::new(v.clone(), n_opp).expect("composition");
                    payoff_vector(&pi, &cand, delta).expect("same shape") == observed
                })
                .collect();
            if got != want {
                return Err(format!(
                    "case {case}: pi={pi} phi={phi} delta={delta}: pipeline {} vs brute force {}",
                    got.len(),
                    want.len()
                ));
            }
        }
        for case in 0..bandit_instances {
            let k = rng.gen_range(1..=4);
            let n_p = rng.gen_range(1..=10);
            let n_opp = rng.gen_range(1..=10);
            let delta = rng.gen_range(0..=1);
            let pi = random_decision(&mut rng, k, n_p);
            let phi = random_decision(&mut rng, k, n_opp);
            let total = payoff(pi.allocations(), phi.allocations(), delta);
            let set =
                bandit_feasible_filter(&pi, total, delta, n_opp).map_err(|e| format!("bandit case {case}: {e}"))?;
            if !set.contains(&phi) {
                return Err(format!("bandit case {case}: true decision {phi} filtered out"));
            }
        }
        Ok(format!(
            "{semi_instances} semi-bandit sets equal brute force; {bandit_instances} bandit sets contain the truth"
        ))
    })
}

pub fn greedy_oracle() -> Check {
    timed("greedy max payoff oracle", || {
        let mut cases = 0usize;
        for k in 1..=4 {
            for total in 0..=8 {
                for phi in compositions(k, total) {
                    let phi = Decision::new(phi, total).expect("composition");
                    for n_p in 0..=8 {
                        for delta in 0..=1 {
                            let brute = max_payoff_bruteforce(&phi, n_p, delta).map_err(|e| e.to_string())?;
                            let greedy = max_payoff(phi.allocations(), n_p, delta);
                            if brute != greedy {
                                return Err(format!(
                                    "phi={phi} N={n_p} delta={delta}: greedy {greedy}, brute force {brute}"
                                ));
                            }
                            cases += 1;
                        }
                    }
                }
            }
        }
        Ok(format!("{cases} cases agree"))
    })
}

pub fn bound_soundness(rounds: usize, seed: u64) -> Check {
    timed("bound soundness", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for round in 0..rounds {
            let k = rng.gen_range(1..=5);
            let n_p = rng.gen_range(1..=12);
            let n_opp = rng.gen_range(1..=12);
            let delta = rng.gen_range(0..=1);
            let pi = random_decision(&mut rng, k, n_p);
            let phi = random_decision(&mut rng, k, n_opp);
            let outcome = BattlefieldOutcome::from_payoff(&payoff_vector(&pi, &phi, delta).map_err(|e| e.to_string())?);
            let variants = [
                ("table", table_bounds(&pi, &outcome, delta, n_opp)),
                ("tight-upper", tight_upper_bounds(&pi, &outcome, delta, n_opp)),
                ("general-lower", general_lower_bounds(&pi, &outcome, delta, n_opp)),
                ("tight-lower", tight_lower_bounds(&pi, &outcome, delta, n_opp)),
                (
                    "combined",
                    opponent_bounds(&pi, &outcome, delta, n_opp, BoundFlags::ALL),
                ),
            ];
            for (name, b) in variants {
                let b = b.map_err(|e| e.to_string())?;
                if !b.contains(&phi) {
                    return Err(format!(
                        "round {round}: {name} bounds exclude phi={phi} (pi={pi}, delta={delta})"
                    ));
                }
            }
        }
        Ok(format!("{rounds} rounds, every variant brackets the truth"))
    })
}

/// The oracle checks run by `blotto-lab verify`.
pub fn all_checks(seed: u64) -> Vec<Check> {
    vec![
        decision_counts(),
        worked_example(),
        feasible_set_oracle(1000, 200, seed),
        greedy_oracle(),
        bound_soundness(10_000, seed ^ 0x00b0_0e0d),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(3, 4).len(), 15);
        assert_eq!(compositions(1, 0), vec![vec![0]]);
    }

    #[test]
    fn small_checks_pass() {
        assert!(worked_example().passed);
        assert!(feasible_set_oracle(50, 20, 1).passed);
        assert!(bound_soundness(200, 2).passed);
    }
}
