use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use blotto_core::{BoundFlags, Decision, PayoffVector};
use blotto_lab::config::{BoundsSpec, DrawWinner, Feedback, RunConfig, Shape, StrategySpec, SuiteKind};
use blotto_lab::{demo, output, suite, verify, OUT_ENV};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "blotto-lab",
    version,
    about = "Payoff-estimator experiments for repeated Colonel Blotto games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play one matchup and report estimator errors for both players.
    Game(GameArgs),
    /// Run every ordered strategy pair on every configuration.
    Suite(SuiteArgs),
    /// Run the brute-force oracle checks.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the bound and dead-end pruning steps for one observed round.
    PruneDemo(DemoArgs),
}

#[derive(Args)]
struct Common {
    /// JSON config file (a run manifest also works).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; the BLOTTO_LAB_OUT environment variable takes precedence.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated: table-only, tight-upper, tight-lower, general-lower, all.
    #[arg(long)]
    bounds: Option<String>,
    /// Candidate sample size for ucb strategies.
    #[arg(long)]
    samples: Option<usize>,
    /// Also write per-round `t,y_true,y_est` files.
    #[arg(long)]
    dump_series: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    repetitions: Option<usize>,
    /// Rounds per game.
    #[arg(long = "T")]
    horizon: Option<usize>,
    #[arg(long, value_enum)]
    feedback: Option<FeedbackArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FeedbackArg {
    SemiBandit,
    Bandit,
}

#[derive(Clone, Copy, ValueEnum)]
enum WinnerArg {
    A,
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Paper,
    K3,
}

#[derive(Args)]
struct GameArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long = "K")]
    k: Option<usize>,
    #[arg(long = "NA")]
    n_a: Option<u32>,
    #[arg(long = "NB")]
    n_b: Option<u32>,
    /// Player that wins tied battlefields.
    #[arg(long, value_enum)]
    draw_winner: Option<WinnerArg>,
    /// Strategy kind for player A.
    #[arg(long)]
    player_a: Option<String>,
    /// Strategy kind for player B.
    #[arg(long)]
    player_b: Option<String>,
}

#[derive(Args)]
struct SuiteArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    suite: Option<SuiteArg>,
    /// Comma-separated strategy kinds, in table order.
    #[arg(long)]
    strategies: Option<String>,
}

#[derive(Args)]
struct DemoArgs {
    /// Own decision, comma-separated.
    #[arg(long, default_value = "1,3,2")]
    pi: String,
    /// Observed payoff vector, comma-separated 0/1.
    #[arg(long, default_value = "0,1,0")]
    payoff: String,
    #[arg(long, default_value_t = 0)]
    delta: u32,
    #[arg(long, default_value_t = 4)]
    opponent_resources: u32,
    #[arg(long, default_value = "table-only")]
    bounds: String,
}

fn base_config(common: &Common) -> anyhow::Result<RunConfig> {
    let mut c = match &common.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(v) = common.seed {
        c.seed = v;
    }
    if let Some(v) = &common.out {
        c.out = Some(v.clone());
    }
    if let Some(v) = &common.bounds {
        c.bounds = BoundsSpec::parse(v)?;
    }
    if let Some(v) = common.samples {
        c.samples = v;
    }
    if common.dump_series {
        c.dump_series = true;
    }
    if let Some(v) = common.jobs {
        c.jobs = Some(v);
    }
    if let Some(v) = common.repetitions {
        c.repetitions = v;
    }
    if let Some(v) = common.horizon {
        c.horizon = v;
    }
    if let Some(v) = common.feedback {
        c.feedback = match v {
            FeedbackArg::SemiBandit => Feedback::SemiBandit,
            FeedbackArg::Bandit => Feedback::Bandit,
        };
    }
    if let Ok(dir) = std::env::var(OUT_ENV) {
        if !dir.is_empty() {
            c.out = Some(PathBuf::from(dir));
        }
    }
    Ok(c)
}

fn out_dir(c: &RunConfig) -> PathBuf {
    c.out.clone().unwrap_or_else(|| PathBuf::from("blotto-results"))
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> anyhow::Result<Vec<T>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|_| anyhow::anyhow!("{what}: cannot parse `{s}`"))
        })
        .collect()
}

fn run_game_command(args: GameArgs) -> anyhow::Result<()> {
    let mut c = base_config(&args.common)?;
    let Shape { k, n_a, n_b } = c.game;
    c.game = Shape {
        k: args.k.unwrap_or(k),
        n_a: args.n_a.unwrap_or(n_a),
        n_b: args.n_b.unwrap_or(n_b),
    };
    if let Some(w) = args.draw_winner {
        c.draw_winner = match w {
            WinnerArg::A => DrawWinner::A,
            WinnerArg::B => DrawWinner::B,
        };
    }
    if let Some(kind) = &args.player_a {
        c.player_a = StrategySpec::from_kind(kind).context("player-a")?;
    }
    if let Some(kind) = &args.player_b {
        c.player_b = StrategySpec::from_kind(kind).context("player-b")?;
    }
    c.validate()?;
    let out = out_dir(&c);
    c.out = Some(out.clone());
    let job = suite::single_job(&c);
    let result = suite::run_jobs(&c, std::slice::from_ref(&job))?.remove(0);
    print!("{}", output::render_game(&result));
    let written = output::write_game(&out, &c, &result)?;
    println!(
        "wrote {} tables and manifest.json under {}",
        written.len(),
        out.display()
    );
    Ok(())
}

fn run_suite_command(args: SuiteArgs) -> anyhow::Result<()> {
    let mut c = base_config(&args.common)?;
    if let Some(s) = args.suite {
        c.suite = match s {
            SuiteArg::Paper => SuiteKind::Paper,
            SuiteArg::K3 => SuiteKind::K3,
        };
        c.configs = None;
    }
    if let Some(list) = &args.strategies {
        c.strategies = list
            .split(',')
            .map(|s| StrategySpec::from_kind(s.trim()))
            .collect::<anyhow::Result<_>>()
            .context("strategies")?;
    }
    c.validate()?;
    let out = out_dir(&c);
    c.out = Some(out.clone());
    let result = suite::run_suite(&c)?;
    print!("{}", output::render_suite(&result));
    let checks = result.checks();
    if checks.supremum_above_truth > 0 || checks.singleton_mismatches > 0 {
        bail!(
            "estimator guarantee violated: supremum above truth in {} rounds, singleton mismatch in {} rounds",
            checks.supremum_above_truth,
            checks.singleton_mismatches
        );
    }
    let written = output::write_suite(&out, &c, &result)?;
    println!(
        "{} games; wrote {} tables and manifest.json under {}",
        result.games.len(),
        written.len(),
        out.display()
    );
    Ok(())
}

fn run_verify(seed: u64) -> anyhow::Result<()> {
    let checks = verify::all_checks(seed);
    for c in &checks {
        println!("{c}");
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        bail!("{failed} of {} checks failed", checks.len());
    }
    Ok(())
}

fn run_demo(args: DemoArgs) -> anyhow::Result<()> {
    let pi: Vec<u32> = parse_list(&args.pi, "pi")?;
    let bits: Vec<u8> = parse_list(&args.payoff, "payoff")?;
    if pi.is_empty() {
        bail!("pi: needs at least one battlefield");
    }
    if bits.iter().any(|&b| b > 1) {
        bail!("payoff: entries must be 0 or 1");
    }
    if args.delta > 1 {
        bail!("delta: must be 0 or 1");
    }
    let total = pi.iter().map(|&v| u64::from(v)).sum::<u64>();
    let pi = Decision::new(pi, u32::try_from(total).context("pi: budget too large")?)?;
    let flags: BoundFlags = BoundsSpec::parse(&args.bounds)?.into();
    let text = demo::prune_demo(
        &pi,
        &PayoffVector::from_bits(&bits),
        args.delta,
        args.opponent_resources,
        flags,
    )?;
    print!("{text}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Game(args) => run_game_command(args),
        Command::Suite(args) => run_suite_command(args),
        Command::Verify { seed } => run_verify(seed),
        Command::PruneDemo(args) => run_demo(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
