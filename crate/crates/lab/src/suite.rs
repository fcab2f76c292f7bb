//! Game and suite execution: seeding, parallel fan-out and per-game checks.

use anyhow::Context;
use blotto_core::metrics::{ErrorSummary, MetricKind, MetricSeries};
use blotto_core::sim::{run_game, GameReport};
use blotto_core::{BoundFlags, Player};
use rayon::prelude::*;

use crate::config::{RunConfig, Shape, StrategySpec};

/// splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one game, derived from the master seed, the configuration index,
/// the matchup index and the repetition. Repetition 0 ignores the last argument.
pub fn game_seed(master: u64, config_index: usize, matchup_index: usize, repetition: usize) -> u64 {
    let mut s = mix(master);
    s = mix(s ^ config_index as u64);
    s = mix(s ^ matchup_index as u64);
    if repetition > 0 {
        s = mix(s ^ repetition as u64);
    }
    s
}

/// One matchup of one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct GameJob {
    pub config_index: usize,
    pub shape: Shape,
    pub matchup_index: usize,
    pub row: StrategySpec,
    pub col: StrategySpec,
    /// One per repetition.
    pub seeds: Vec<u64>,
}

/// Rounds where a per-round guarantee was checked or broken.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RoundChecks {
    pub rounds: usize,
    pub supremum_above_truth: usize,
    pub singleton_rounds: usize,
    pub singleton_mismatches: usize,
}

impl RoundChecks {
    pub fn merge(&mut self, other: RoundChecks) {
        self.rounds += other.rounds;
        self.supremum_above_truth += other.supremum_above_truth;
        self.singleton_rounds += other.singleton_rounds;
        self.singleton_mismatches += other.singleton_mismatches;
    }
}

#[derive(Debug, Clone)]
pub struct PlayerResult {
    /// Indexed like [`MetricKind::ALL`]; repetitions are concatenated.
    pub series: Vec<MetricSeries>,
    pub checks: RoundChecks,
}

impl PlayerResult {
    pub fn series(&self, kind: MetricKind) -> &MetricSeries {
        &self.series[MetricKind::ALL.iter().position(|&k| k == kind).expect("listed kind")]
    }

    pub fn summary(&self, kind: MetricKind) -> ErrorSummary {
        self.series(kind).summary()
    }
}

#[derive(Debug, Clone)]
pub struct GameResult {
    pub job: GameJob,
    /// Indexed by [`Player::index`].
    pub players: [PlayerResult; 2],
}

impl GameResult {
    pub fn player(&self, p: Player) -> &PlayerResult {
        &self.players[p.index()]
    }
}

fn checks(report: &GameReport, player: Player) -> RoundChecks {
    let r = report.player(player);
    let sup = r.series(MetricKind::Supremum);
    let obs_max = r.series(MetricKind::ObservableMax);
    let obs_exp = r.series(MetricKind::ObservableExpected);
    let mut c = RoundChecks {
        rounds: sup.len(),
        ..Default::default()
    };
    for t in 0..sup.len() {
        if sup.estimate()[t] > sup.truth()[t] {
            c.supremum_above_truth += 1;
        }
        if r.feasible_counts[t] == 1 {
            c.singleton_rounds += 1;
            if sup.estimate()[t] != sup.truth()[t]
                || obs_max.estimate()[t] != obs_max.truth()[t]
                || obs_exp.estimate()[t] != obs_exp.truth()[t]
            {
                c.singleton_mismatches += 1;
            }
        }
    }
    c
}

fn concat(parts: &[&MetricSeries]) -> MetricSeries {
    let kind = parts[0].kind();
    let truth = parts.iter().flat_map(|s| s.truth().iter().cloned()).collect();
    let estimate = parts.iter().flat_map(|s| s.estimate().iter().cloned()).collect();
    MetricSeries::from_values(kind, truth, estimate).expect("parts have paired values")
}

pub fn run_job(config: &RunConfig, job: &GameJob) -> anyhow::Result<GameResult> {
    let game = config.game_config(job.shape)?.with_horizon(config.horizon)?;
    let flags: BoundFlags = config.bounds.into();
    let mut reports = Vec::with_capacity(job.seeds.len());
    for &seed in &job.seeds {
        let mut a = job.row.build(job.shape.k, job.shape.n_a, config.samples)?;
        let mut b = job.col.build(job.shape.k, job.shape.n_b, config.samples)?;
        let report = run_game(&game, a.as_mut(), b.as_mut(), seed, flags).with_context(|| {
            format!(
                "game {} vs {} (K={}, N_A={}, N_B={}, seed {seed})",
                job.row.label(),
                job.col.label(),
                job.shape.k,
                job.shape.n_a,
                job.shape.n_b
            )
        })?;
        reports.push(report);
    }
    let players = Player::BOTH.map(|p| {
        let mut c = RoundChecks::default();
        for r in &reports {
            c.merge(checks(r, p));
        }
        let series = MetricKind::ALL
            .iter()
            .map(|&k| concat(&reports.iter().map(|r| r.player(p).series(k)).collect::<Vec<_>>()))
            .collect();
        PlayerResult { series, checks: c }
    });
    Ok(GameResult {
        job: job.clone(),
        players,
    })
}

/// All ordered strategy pairs for every configuration, row-major per configuration.
pub fn plan(config: &RunConfig) -> Vec<GameJob> {
    let strategies = &config.strategies;
    let mut jobs = Vec::new();
    for (ci, shape) in config.shapes().into_iter().enumerate() {
        for (ri, row) in strategies.iter().enumerate() {
            for (cj, col) in strategies.iter().enumerate() {
                let matchup_index = ri * strategies.len() + cj;
                jobs.push(GameJob {
                    config_index: ci,
                    shape,
                    matchup_index,
                    row: row.clone(),
                    col: col.clone(),
                    seeds: (0..config.repetitions)
                        .map(|r| game_seed(config.seed, ci, matchup_index, r))
                        .collect(),
                });
            }
        }
    }
    jobs
}

/// The single matchup described by `game`, `player_a` and `player_b`.
pub fn single_job(config: &RunConfig) -> GameJob {
    GameJob {
        config_index: 0,
        shape: config.game,
        matchup_index: 0,
        row: config.player_a.clone(),
        col: config.player_b.clone(),
        seeds: (0..config.repetitions)
            .map(|r| game_seed(config.seed, 0, 0, r))
            .collect(),
    }
}

pub struct SuiteResult {
    pub shapes: Vec<Shape>,
    pub strategies: Vec<StrategySpec>,
    /// In [`plan`] order.
    pub games: Vec<GameResult>,
}

impl SuiteResult {
    pub fn cell(&self, config_index: usize, row: usize, col: usize) -> &GameResult {
        let n = self.strategies.len();
        &self.games[config_index * n * n + row * n + col]
    }

    pub fn checks(&self) -> RoundChecks {
        let mut total = RoundChecks::default();
        for g in &self.games {
            for p in &g.players {
                total.merge(p.checks);
            }
        }
        total
    }
}

pub fn run_jobs(config: &RunConfig, jobs: &[GameJob]) -> anyhow::Result<Vec<GameResult>> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.jobs {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().context("starting worker pool")?;
    pool.install(|| jobs.par_iter().map(|job| run_job(config, job)).collect())
}

pub fn run_suite(config: &RunConfig) -> anyhow::Result<SuiteResult> {
    let jobs = plan(config);
    let games = run_jobs(config, &jobs)?;
    Ok(SuiteResult {
        shapes: config.shapes(),
        strategies: config.strategies.clone(),
        games,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SuiteKind;

    #[test]
    fn plan_sizes() {
        let c = RunConfig::default();
        assert_eq!(plan(&c).len(), 96);
        let c = RunConfig {
            suite: SuiteKind::K3,
            ..RunConfig::default()
        };
        assert_eq!(plan(&c).len(), 48);
        let c = RunConfig {
            configs: Some(vec![Shape { k: 2, n_a: 3, n_b: 3 }]),
            strategies: vec![StrategySpec::Uniform, StrategySpec::Ucb { samples: None }],
            ..RunConfig::default()
        };
        assert_eq!(plan(&c).len(), 4);
    }

    #[test]
    fn seeds_are_distinct_per_cell() {
        let jobs = plan(&RunConfig::default());
        let mut seeds: Vec<u64> = jobs.iter().map(|j| j.seeds[0]).collect();
        seeds.sort_unstable();
        seeds.dedup();
        assert_eq!(seeds.len(), 96);
        assert_ne!(game_seed(7, 0, 0, 0), game_seed(7, 0, 0, 1));
    }

    #[test]
    fn single_battlefield_suite_is_exact() {
        let c = RunConfig {
            configs: Some(vec![Shape { k: 1, n_a: 4, n_b: 3 }]),
            strategies: vec![StrategySpec::Uniform, StrategySpec::Exp3Edge { gamma: 0.25, eta: 0.05 }],
            horizon: 30,
            jobs: Some(2),
            ..RunConfig::default()
        };
        let r = run_suite(&c).unwrap();
        assert_eq!(r.games.len(), 4);
        for g in &r.games {
            for p in &g.players {
                for k in MetricKind::ALL {
                    let s = p.summary(k);
                    assert!(s.nrmse.is_none_or(|v| v == 0.0), "{k}: {s}");
                }
                assert_eq!(p.checks.singleton_rounds, 30);
                assert_eq!(p.checks.singleton_mismatches, 0);
            }
        }
    }

    #[test]
    fn repetitions_concatenate_series() {
        let c = RunConfig {
            game: Shape { k: 2, n_a: 3, n_b: 3 },
            horizon: 5,
            repetitions: 3,
            ..RunConfig::default()
        };
        let r = run_job(&c, &single_job(&c)).unwrap();
        assert_eq!(r.player(Player::A).series(MetricKind::Supremum).len(), 15);
        assert_eq!(r.player(Player::B).checks.rounds, 15);
    }
}
