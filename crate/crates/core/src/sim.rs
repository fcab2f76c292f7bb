//! One seeded game with per-round truth/estimate bookkeeping for both players.

use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::BoundFlags;
use crate::error::Result;
use crate::estimators::{Estimates, PayoffEstimator, TrueMetrics};
use crate::game::{at_round, Game, GameConfig, Player, RoundRecord};
use crate::metrics::{MetricKind, MetricSeries};
use crate::strategies::Strategy;
use crate::Rational;

/// Series and records for one focal player.
#[derive(Debug, Clone)]
pub struct PlayerReport {
    pub player: Player,
    /// Indexed like [`MetricKind::ALL`].
    pub series: [MetricSeries; 3],
    pub feasible_counts: Vec<usize>,
    pub records: Vec<RoundRecord>,
}

impl PlayerReport {
    fn new(player: Player, horizon: usize) -> Self {
        Self {
            player,
            series: MetricKind::ALL.map(MetricSeries::new),
            feasible_counts: Vec::with_capacity(horizon),
            records: Vec::with_capacity(horizon),
        }
    }

    pub fn series(&self, kind: MetricKind) -> &MetricSeries {
        &self.series[MetricKind::ALL.iter().position(|&k| k == kind).expect("listed kind")]
    }

    fn push(&mut self, truth: TrueMetrics, est: Estimates) {
        let max = int(truth.max_payoff);
        let [obs_max, sup, obs_exp] = &mut self.series;
        obs_max.push(max.clone(), est.observable_max);
        sup.push(max, int(est.supremum));
        obs_exp.push(truth.expected_payoff, est.observable_expected);
        self.feasible_counts.push(est.feasible_count);
    }
}

fn int(v: usize) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

#[derive(Debug, Clone)]
pub struct GameReport {
    pub config: GameConfig,
    pub seed: u64,
    pub strategy_names: [alloc::string::String; 2],
    pub players: [PlayerReport; 2],
}

impl GameReport {
    pub fn player(&self, player: Player) -> &PlayerReport {
        &self.players[player.index()]
    }
}

/// Plays `config.horizon()` rounds with a ChaCha8 stream seeded by `seed` and
/// evaluates the three estimators for both players every round.
pub fn run_game(
    config: &GameConfig,
    strategy_a: &mut dyn Strategy,
    strategy_b: &mut dyn Strategy,
    seed: u64,
    flags: BoundFlags,
) -> Result<GameReport> {
    let k = config.battlefields();
    let estimators = Player::BOTH.map(|p| {
        PayoffEstimator::new(
            k,
            config.resources(p),
            config.resources(p.opponent()),
            config.delta(p),
            flags,
        )
    });
    let [ea, eb] = estimators;
    let estimators = [ea?, eb?];

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut game = Game::new(config.clone());
    let mut players = Player::BOTH.map(|p| PlayerReport::new(p, config.horizon()));

    for _ in 0..config.horizon() {
        let (ra, rb) = game.play_round(strategy_a, strategy_b, &mut rng)?;
        for record in [ra, rb] {
            let p = record.player();
            let evaluate = || -> Result<(TrueMetrics, Estimates)> {
                let est = &estimators[p.index()];
                let truth = est.truth(record.opponent_decision())?;
                let fs = est.feasible_set(record.decision(), record.feedback())?;
                Ok((truth, est.estimate(&fs)?))
            };
            let (truth, est) = evaluate().map_err(|e| at_round(record.round(), p, e))?;
            players[p.index()].push(truth, est);
        }
    }
    for (ra, rb) in game.into_history() {
        players[0].records.push(ra);
        players[1].records.push(rb);
    }
    Ok(GameReport {
        config: config.clone(),
        seed,
        strategy_names: [strategy_a.name().into(), strategy_b.name().into()],
        players,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Decision;
    use crate::strategies::{StaticStrategy, UniformRandom};
    use alloc::vec;

    #[test]
    fn single_battlefield_estimates_are_exact() {
        let config = GameConfig::semi_bandit(1, 5, 3, 20).unwrap();
        let mut a = UniformRandom::new(1, 5).unwrap();
        let mut b = UniformRandom::new(1, 3).unwrap();
        let report = run_game(&config, &mut a, &mut b, 1, BoundFlags::default()).unwrap();
        for p in &report.players {
            assert!(p.feasible_counts.iter().all(|&c| c == 1));
            for s in &p.series {
                assert_eq!(s.truth(), s.estimate());
            }
        }
    }

    #[test]
    fn fixed_decisions_give_constant_series() {
        let config = GameConfig::semi_bandit(3, 6, 6, 8).unwrap();
        let mut a = StaticStrategy::fixed(Decision::from_allocations(vec![2, 2, 2]));
        let mut b = StaticStrategy::fixed(Decision::from_allocations(vec![1, 4, 1]));
        let report = run_game(&config, &mut a, &mut b, 9, BoundFlags::default()).unwrap();
        for p in &report.players {
            for s in &p.series {
                assert!(s.truth().windows(2).all(|w| w[0] == w[1]));
                assert!(s.estimate().windows(2).all(|w| w[0] == w[1]));
            }
            assert_eq!(p.records.len(), 8);
        }
    }

    #[test]
    fn same_seed_same_report() {
        let config = GameConfig::semi_bandit(3, 10, 10, 30).unwrap();
        let run = || {
            let mut a = UniformRandom::new(3, 10).unwrap();
            let mut b = UniformRandom::new(3, 10).unwrap();
            run_game(&config, &mut a, &mut b, 42, BoundFlags::default()).unwrap()
        };
        let (r1, r2) = (run(), run());
        for (p1, p2) in r1.players.iter().zip(&r2.players) {
            assert_eq!(p1.series, p2.series);
            assert_eq!(p1.records, p2.records);
        }
    }
}
