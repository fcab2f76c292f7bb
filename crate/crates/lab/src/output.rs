//! CSV tables, per-round series dumps and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use blotto_core::metrics::{MetricKind, MetricSeries};
use blotto_core::Player;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::config::{RunConfig, Shape, StrategySpec};
use crate::suite::{GameResult, SuiteResult};

pub const TABLE_HEADER: [&str; 4] = ["row_strategy", "col_strategy", "nrmse", "rrsd"];

/// Three decimals, or `undef` when the value is not defined.
pub fn three_decimals(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.3}"),
        None => "undef".to_string(),
    }
}

pub fn config_dir_name(index: usize, shape: Shape) -> String {
    format!("config{index}_K{}_NA{}_NB{}", shape.k, shape.n_a, shape.n_b)
}

fn ensure_dir(path: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(path).with_context(|| format!("creating {}", path.display()))
}

fn write_table(path: &Path, rows: &[(String, String, Option<f64>, Option<f64>)]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(TABLE_HEADER)?;
    for (row, col, nrmse, rrsd) in rows {
        w.write_record([
            row.as_str(),
            col.as_str(),
            &three_decimals(*nrmse),
            &three_decimals(*rrsd),
        ])?;
    }
    w.flush().with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn decimal(r: &blotto_core::Rational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}", r.to_f64().unwrap_or(f64::NAN))
    }
}

pub fn write_series(path: &Path, series: &MetricSeries) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(["t", "y_true", "y_est"])?;
    for (t, (y, e)) in series.truth().iter().zip(series.estimate()).enumerate() {
        w.write_record([(t + 1).to_string(), decimal(y), decimal(e)])?;
    }
    w.flush().with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn dump_game_series(dir: &Path, game: &GameResult) -> anyhow::Result<()> {
    let job = &game.job;
    let matchup = format!("{:02}_{}_vs_{}", job.matchup_index, job.row.kind(), job.col.kind());
    for p in Player::BOTH {
        let d = dir.join(format!("player-{p}")).join(&matchup);
        ensure_dir(&d)?;
        for kind in MetricKind::ALL {
            write_series(&d.join(format!("{}.csv", kind.label())), game.player(p).series(kind))?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestGame {
    pub config_index: usize,
    pub k: usize,
    pub n_a: u32,
    pub n_b: u32,
    pub matchup_index: usize,
    pub row: String,
    pub col: String,
    pub seeds: Vec<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestStrategy {
    pub label: String,
    pub spec: StrategySpec,
    pub stands_in_for: Option<String>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: RunConfig,
    pub strategies: Vec<ManifestStrategy>,
    pub games: Vec<ManifestGame>,
}

impl Manifest {
    pub fn new(command: &str, config: &RunConfig, games: &[GameResult]) -> Self {
        let mut specs: Vec<StrategySpec> = Vec::new();
        for g in games {
            for s in [&g.job.row, &g.job.col] {
                if !specs.contains(s) {
                    specs.push(s.clone());
                }
            }
        }
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config: config.clone(),
            strategies: specs
                .into_iter()
                .map(|spec| ManifestStrategy {
                    label: spec.label(),
                    stands_in_for: spec.stands_in_for().map(str::to_string),
                    note: spec.substitution_note(),
                    spec,
                })
                .collect(),
            games: games
                .iter()
                .map(|g| ManifestGame {
                    config_index: g.job.config_index,
                    k: g.job.shape.k,
                    n_a: g.job.shape.n_a,
                    n_b: g.job.shape.n_b,
                    matchup_index: g.job.matchup_index,
                    row: g.job.row.label(),
                    col: g.job.col.label(),
                    seeds: g.job.seeds.clone(),
                })
                .collect(),
        }
    }

    pub fn write(&self, dir: &Path) -> anyhow::Result<PathBuf> {
        let path = dir.join("manifest.json");
        let text = serde_json::to_string_pretty(self)?;
        fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}

/// Writes one table per (configuration, focal player, metric) plus the manifest.
/// Returns the table paths in writing order.
pub fn write_suite(out: &Path, config: &RunConfig, result: &SuiteResult) -> anyhow::Result<Vec<PathBuf>> {
    ensure_dir(out)?;
    let mut written = Vec::new();
    let n = result.strategies.len();
    for (ci, &shape) in result.shapes.iter().enumerate() {
        let cdir = out.join(config_dir_name(ci, shape));
        for p in Player::BOTH {
            let pdir = cdir.join(format!("player-{p}"));
            ensure_dir(&pdir)?;
            for kind in MetricKind::ALL {
                let mut rows = Vec::with_capacity(n * n);
                for r in 0..n {
                    for c in 0..n {
                        let g = result.cell(ci, r, c);
                        let s = g.player(p).summary(kind);
                        rows.push((g.job.row.label(), g.job.col.label(), s.nrmse, s.rrsd));
                    }
                }
                let path = pdir.join(format!("{}.csv", kind.label()));
                write_table(&path, &rows)?;
                written.push(path);
            }
        }
        if config.dump_series {
            for r in 0..n {
                for c in 0..n {
                    dump_game_series(
                        &out.join("series").join(config_dir_name(ci, shape)),
                        result.cell(ci, r, c),
                    )?;
                }
            }
        }
    }
    Manifest::new("suite", config, &result.games).write(out)?;
    Ok(written)
}

/// Writes the single-game tables (one row each) plus the manifest.
pub fn write_game(out: &Path, config: &RunConfig, game: &GameResult) -> anyhow::Result<Vec<PathBuf>> {
    ensure_dir(out)?;
    let mut written = Vec::new();
    for p in Player::BOTH {
        let pdir = out.join(format!("player-{p}"));
        ensure_dir(&pdir)?;
        for kind in MetricKind::ALL {
            let s = game.player(p).summary(kind);
            let path = pdir.join(format!("{}.csv", kind.label()));
            write_table(&path, &[(game.job.row.label(), game.job.col.label(), s.nrmse, s.rrsd)])?;
            written.push(path);
        }
    }
    if config.dump_series {
        dump_game_series(&out.join("series"), game)?;
    }
    Manifest::new("game", config, std::slice::from_ref(game)).write(out)?;
    Ok(written)
}

/// Plain-text tables with `NRMSE±RRSD` cells, one block per configuration, player and metric.
pub fn render_suite(result: &SuiteResult) -> String {
    use std::fmt::Write;
    let n = result.strategies.len();
    let labels: Vec<String> = result.strategies.iter().map(StrategySpec::label).collect();
    let width = labels.iter().map(String::len).max().unwrap_or(0).max(11);
    let mut s = String::new();
    for (ci, shape) in result.shapes.iter().enumerate() {
        for p in Player::BOTH {
            for kind in MetricKind::ALL {
                let _ = writeln!(
                    s,
                    "K={} N_A={} N_B={}  player {p}  {kind}",
                    shape.k, shape.n_a, shape.n_b
                );
                let _ = write!(s, "{:width$}", "");
                for l in &labels {
                    let _ = write!(s, "  {l:>width$}");
                }
                s.push('\n');
                for (r, label) in labels.iter().enumerate() {
                    let _ = write!(s, "{label:width$}");
                    for c in 0..n {
                        let cell = result.cell(ci, r, c).player(p).summary(kind).to_string();
                        let _ = write!(s, "  {cell:>width$}");
                    }
                    s.push('\n');
                }
                s.push('\n');
            }
        }
    }
    s
}

pub fn render_game(game: &GameResult) -> String {
    let mut s = format!(
        "{} vs {}  K={} N_A={} N_B={}\n",
        game.job.row.label(),
        game.job.col.label(),
        game.job.shape.k,
        game.job.shape.n_a,
        game.job.shape.n_b
    );
    for p in Player::BOTH {
        for kind in MetricKind::ALL {
            let sum = game.player(p).summary(kind);
            s += &format!("player {p}  {:<32} {sum}\n", kind.label());
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn decimals() {
        assert_eq!(three_decimals(Some(0.0821)), "0.082");
        assert_eq!(three_decimals(Some(0.0)), "0.000");
        assert_eq!(three_decimals(None), "undef");
    }

    #[test]
    fn rational_rendering() {
        let half = blotto_core::Rational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(decimal(&half), "0.5");
        assert_eq!(decimal(&blotto_core::Rational::from_integer(BigInt::from(3))), "3");
    }
}
