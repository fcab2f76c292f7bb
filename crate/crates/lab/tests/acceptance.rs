//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p blotto-lab --test acceptance`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use blotto_core::metrics::MetricKind;
use blotto_core::Player;
use blotto_lab::config::{RunConfig, StrategySpec};
use blotto_lab::output;
use blotto_lab::suite::{run_suite, SuiteResult};
use blotto_lab::verify::{self, Check};

const SEED: u64 = 7;

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: u32, title: &str, passed: bool, detail: &str) {
        let status = if passed { "PASS" } else { "FAIL" };
        println!("[{status}] criterion {id:>2}  {title}: {detail}");
        if !passed {
            self.failures += 1;
        }
    }

    fn check(&mut self, id: u32, title: &str, check: Check, budget: Duration) {
        let within = check.elapsed <= budget;
        let detail = format!("{} [{:.2?}, budget {:?}]", check.detail, check.elapsed, budget);
        self.line(id, title, check.passed && within, &detail);
    }
}

fn csv_files(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    fn walk(dir: &Path, root: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) {
        for entry in std::fs::read_dir(dir).expect("readable output dir") {
            let path = entry.expect("dir entry").path();
            if path.is_dir() {
                walk(&path, root, out);
            } else if path.extension().is_some_and(|e| e == "csv") {
                let rel = path.strip_prefix(root).expect("under root").to_path_buf();
                out.insert(rel, std::fs::read(&path).expect("readable csv"));
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}

fn uniform_index(result: &SuiteResult) -> usize {
    result
        .strategies
        .iter()
        .position(|s| *s == StrategySpec::Uniform)
        .expect("default strategies include uniform")
}

fn main() {
    let mut report = Report { failures: 0 };

    report.check(
        1,
        "decision-space cardinality",
        verify::decision_counts(),
        Duration::from_secs(1),
    );
    report.check(
        2,
        "worked pruning example",
        verify::worked_example(),
        Duration::from_secs(1),
    );
    report.check(
        3,
        "feasible-set oracle equivalence",
        verify::feasible_set_oracle(1000, 200, 3),
        Duration::from_secs(60),
    );
    report.check(
        4,
        "greedy max payoff oracle",
        verify::greedy_oracle(),
        Duration::from_secs(60),
    );
    report.check(
        5,
        "bound soundness",
        verify::bound_soundness(10_000, 5),
        Duration::from_secs(120),
    );

    let config = RunConfig {
        seed: SEED,
        ..RunConfig::default()
    };
    let start = Instant::now();
    let result = run_suite(&config).expect("suite runs");
    let suite_time = start.elapsed();
    let checks = result.checks();

    report.line(
        6,
        "supremum payoff never exceeds max payoff",
        checks.supremum_above_truth == 0,
        &format!(
            "{} violations in {} player-rounds over {} games [{suite_time:.1?}]",
            checks.supremum_above_truth,
            checks.rounds,
            result.games.len()
        ),
    );

    let u = uniform_index(&result);
    let mut worst_k3 = 0.0f64;
    let mut k3_detail = Vec::new();
    for (ci, shape) in result.shapes.iter().enumerate().filter(|(_, s)| s.k == 3) {
        for p in Player::BOTH {
            let s = result.cell(ci, u, u).player(p).summary(MetricKind::ObservableMax);
            let n = s.nrmse.unwrap_or(f64::INFINITY);
            let r = s.rrsd.unwrap_or(f64::INFINITY);
            worst_k3 = worst_k3.max(n).max(r);
            k3_detail.push(format!("({},{},{}) {p}: {s}", shape.k, shape.n_a, shape.n_b));
        }
    }
    report.line(
        7,
        "observable max payoff accuracy, K=3 uniform vs uniform (<= 0.005)",
        worst_k3 <= 0.005,
        &format!("worst {worst_k3:.4}; {}", k3_detail.join("; ")),
    );

    let reference = result
        .shapes
        .iter()
        .position(|s| s.k == 3 && s.n_a == 10 && s.n_b == 10)
        .expect("suite contains K=3, 10 vs 10");
    let cell = result
        .cell(reference, u, u)
        .player(Player::A)
        .summary(MetricKind::ObservableExpected);
    let near = |v: Option<f64>| v.is_some_and(|x| (x - 0.082).abs() <= 0.04);
    let mut worst = (0.0f64, String::new());
    for g in &result.games {
        for p in Player::BOTH {
            let n = g
                .player(p)
                .summary(MetricKind::ObservableExpected)
                .nrmse
                .unwrap_or(f64::INFINITY);
            if n >= worst.0 {
                worst = (
                    n,
                    format!(
                        "K={} N_A={} N_B={} {} vs {} player {p}",
                        g.job.shape.k,
                        g.job.shape.n_a,
                        g.job.shape.n_b,
                        g.job.row.label(),
                        g.job.col.label()
                    ),
                );
            }
        }
    }
    report.line(
        8,
        "observable expected payoff accuracy",
        near(cell.nrmse) && near(cell.rrsd) && worst.0 < 0.26,
        &format!(
            "uniform vs uniform K=3 10/10 player A {cell} (target .082+-.04); max NRMSE over suite {:.3} at {}",
            worst.0, worst.1
        ),
    );

    report.line(
        9,
        "estimators exact on singleton feasible sets",
        checks.singleton_mismatches == 0 && checks.singleton_rounds > 0,
        &format!(
            "{} mismatches in {} singleton rounds",
            checks.singleton_mismatches, checks.singleton_rounds
        ),
    );

    let dir = tempfile::tempdir().expect("temp dir");
    let first = dir.path().join("library");
    let second = dir.path().join("cli");
    output::write_suite(&first, &config, &result).expect("write suite output");
    let status = Command::new(env!("CARGO_BIN_EXE_blotto-lab"))
        .args(["suite", "--seed", "7", "--out"])
        .arg(&second)
        .stdout(std::process::Stdio::null())
        .status()
        .expect("launch blotto-lab");
    let (a, b) = (csv_files(&first), csv_files(&second));
    let differing: Vec<_> = a.keys().filter(|k| a.get(*k) != b.get(*k)).collect();
    report.line(
        10,
        "determinism of suite --seed 7",
        status.success() && !a.is_empty() && a.len() == b.len() && differing.is_empty(),
        &format!("{} CSVs compared, {} differ (cli {status})", a.len(), differing.len()),
    );

    println!("{} of 10 criteria failed", report.failures);
    if report.failures > 0 {
        std::process::exit(1);
    }
}
