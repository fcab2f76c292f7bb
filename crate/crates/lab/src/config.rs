//! Run configuration: JSON file and/or command-line flags, validated into a [`RunConfig`].

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use blotto_core::strategies::{
    Discretized, Exp3Edge, HedgeAllocator, StaticStrategy, UcbCombinatorial, UniformRandom, DEFAULT_C, DEFAULT_ETA,
    DEFAULT_GAMMA, DEFAULT_HEDGE_ETA, DEFAULT_SAMPLES,
};
use blotto_core::{BoundFlags, FeedbackMode, GameConfig, Player, Strategy};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DrawWinner {
    A,
    B,
}

impl From<DrawWinner> for Player {
    fn from(w: DrawWinner) -> Self {
        match w {
            DrawWinner::A => Player::A,
            DrawWinner::B => Player::B,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Feedback {
    SemiBandit,
    Bandit,
}

impl From<Feedback> for FeedbackMode {
    fn from(f: Feedback) -> Self {
        match f {
            Feedback::SemiBandit => FeedbackMode::SemiBandit,
            Feedback::Bandit => FeedbackMode::Bandit,
        }
    }
}

/// Battlefields and budgets of one game configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Shape {
    pub k: usize,
    pub n_a: u32,
    pub n_b: u32,
}

/// The six configurations simulated in the reference experiments.
pub const EXPERIMENT_SHAPES: [Shape; 6] = [
    Shape { k: 3, n_a: 10, n_b: 10 },
    Shape { k: 3, n_a: 15, n_b: 10 },
    Shape { k: 3, n_a: 15, n_b: 15 },
    Shape { k: 5, n_a: 15, n_b: 15 },
    Shape { k: 5, n_a: 20, n_b: 15 },
    Shape { k: 5, n_a: 20, n_b: 20 },
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteKind {
    /// All six experiment configurations.
    Paper,
    /// Only the `K = 3` configurations.
    K3,
}

impl SuiteKind {
    pub fn shapes(self) -> Vec<Shape> {
        match self {
            SuiteKind::Paper => EXPERIMENT_SHAPES.to_vec(),
            SuiteKind::K3 => EXPERIMENT_SHAPES.iter().copied().filter(|s| s.k == 3).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StrategySpec {
    Uniform,
    Exp3Edge {
        #[serde(default = "default_gamma")]
        gamma: f64,
        #[serde(default = "default_eta")]
        eta: f64,
    },
    /// `samples` falls back to the run-level oracle sample size.
    Ucb {
        #[serde(default)]
        samples: Option<usize>,
    },
    StaticConcentrated {
        #[serde(default)]
        battlefield: usize,
    },
    StaticProfile {
        profile: Vec<f64>,
    },
    HedgeContinuous {
        #[serde(default = "default_hedge_eta")]
        eta: f64,
        #[serde(default = "default_c")]
        c: f64,
    },
}

fn default_gamma() -> f64 {
    DEFAULT_GAMMA
}
fn default_eta() -> f64 {
    DEFAULT_ETA
}
fn default_hedge_eta() -> f64 {
    DEFAULT_HEDGE_ETA
}
fn default_c() -> f64 {
    DEFAULT_C
}

impl StrategySpec {
    /// Parses a bare kind name with default parameters.
    pub fn from_kind(kind: &str) -> anyhow::Result<Self> {
        Ok(match kind {
            "uniform" => StrategySpec::Uniform,
            "exp3-edge" => StrategySpec::Exp3Edge {
                gamma: DEFAULT_GAMMA,
                eta: DEFAULT_ETA,
            },
            "ucb" => StrategySpec::Ucb { samples: None },
            "static-concentrated" => StrategySpec::StaticConcentrated { battlefield: 0 },
            "hedge-continuous" => StrategySpec::HedgeContinuous {
                eta: DEFAULT_HEDGE_ETA,
                c: DEFAULT_C,
            },
            "static-profile" => bail!("static-profile needs a profile; declare it in a config file"),
            other => bail!(
                "unknown strategy kind `{other}` (expected uniform, exp3-edge, ucb, static-concentrated, static-profile or hedge-continuous)"
            ),
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            StrategySpec::Uniform => "uniform",
            StrategySpec::Exp3Edge { .. } => "exp3-edge",
            StrategySpec::Ucb { .. } => "ucb",
            StrategySpec::StaticConcentrated { .. } => "static-concentrated",
            StrategySpec::StaticProfile { .. } => "static-profile",
            StrategySpec::HedgeContinuous { .. } => "hedge-continuous",
        }
    }

    /// Reference algorithm whose slot this strategy fills in the suite, if any.
    pub fn stands_in_for(&self) -> Option<&'static str> {
        match self {
            StrategySpec::Uniform => Some("Random"),
            StrategySpec::Exp3Edge { .. } => Some("Edge"),
            StrategySpec::Ucb { .. } => Some("CUCB-DRA"),
            StrategySpec::HedgeContinuous { .. } => Some("MARA"),
            _ => None,
        }
    }

    /// Row/column label used in result tables, e.g. `ucb[CUCB-DRA]`.
    pub fn label(&self) -> String {
        match self.stands_in_for() {
            Some(slot) => format!("{}[{slot}]", self.kind()),
            None => self.kind().to_string(),
        }
    }

    pub fn substitution_note(&self) -> Option<String> {
        let note = match self {
            StrategySpec::Uniform => "uniform over the decision set; same sampling rule as Random",
            StrategySpec::Exp3Edge { .. } => {
                "exponential weights over decision-graph edges with uniform exploration; the Edge update rule is not reproduced"
            }
            StrategySpec::Ucb { .. } => {
                "per (battlefield, allocation) upper confidence values maximized over sampled decisions; CUCB-DRA internals are not reproduced"
            }
            StrategySpec::HedgeContinuous { .. } => {
                "multiplicative weights over battlefields rounded by discretize; MARA internals are not reproduced"
            }
            _ => return None,
        };
        Some(note.to_string())
    }

    fn validate(&self, key: &str) -> anyhow::Result<()> {
        match self {
            StrategySpec::Exp3Edge { gamma, eta } => {
                if !(0.0..=1.0).contains(gamma) {
                    bail!("{key}.gamma: must lie in [0, 1], got {gamma}");
                }
                if !eta.is_finite() || *eta < 0.0 {
                    bail!("{key}.eta: must be finite and non-negative, got {eta}");
                }
            }
            StrategySpec::Ucb { samples: Some(0) } => bail!("{key}.samples: must be at least 1"),
            StrategySpec::StaticProfile { profile } => {
                if profile.iter().any(|v| !v.is_finite() || *v < 0.0) || !profile.iter().any(|v| *v > 0.0) {
                    bail!("{key}.profile: entries must be finite, non-negative and not all zero");
                }
            }
            StrategySpec::HedgeContinuous { eta, .. } if !eta.is_finite() || *eta < 0.0 => {
                bail!("{key}.eta: must be finite and non-negative, got {eta}")
            }
            _ => {}
        }
        Ok(())
    }

    pub fn build(&self, k: usize, resources: u32, default_samples: usize) -> blotto_core::Result<Box<dyn Strategy>> {
        Ok(match self {
            StrategySpec::Uniform => Box::new(UniformRandom::new(k, resources)?),
            StrategySpec::Exp3Edge { gamma, eta } => Box::new(Exp3Edge::new(k, resources, *gamma, *eta)?),
            StrategySpec::Ucb { samples } => {
                Box::new(UcbCombinatorial::new(k, resources, samples.unwrap_or(default_samples))?)
            }
            StrategySpec::StaticConcentrated { battlefield } => {
                Box::new(StaticStrategy::concentrated(k, resources, *battlefield)?)
            }
            StrategySpec::StaticProfile { profile } => {
                if profile.len() != k {
                    return Err(blotto_core::Error::DimensionMismatch {
                        expected: k,
                        found: profile.len(),
                    });
                }
                Box::new(StaticStrategy::profile(profile.clone(), resources)?)
            }
            StrategySpec::HedgeContinuous { eta, c } => {
                Box::new(Discretized::new(HedgeAllocator::new(k, *eta, *c)?, resources))
            }
        })
    }
}

/// The four strategies filling the reference algorithm slots, in table order.
pub fn default_strategies() -> Vec<StrategySpec> {
    vec![
        StrategySpec::HedgeContinuous {
            eta: DEFAULT_HEDGE_ETA,
            c: DEFAULT_C,
        },
        StrategySpec::Ucb { samples: None },
        StrategySpec::Exp3Edge {
            gamma: DEFAULT_GAMMA,
            eta: DEFAULT_ETA,
        },
        StrategySpec::Uniform,
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsSpec {
    pub tight_upper: bool,
    pub general_lower: bool,
    pub tight_lower: bool,
}

impl BoundsSpec {
    /// Comma-separated list of `table-only`, `tight-upper`, `tight-lower`, `general-lower`, `all`.
    pub fn parse(list: &str) -> anyhow::Result<Self> {
        let mut spec = BoundsSpec::default();
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "table-only" => {}
                "tight-upper" => spec.tight_upper = true,
                "tight-lower" => spec.tight_lower = true,
                "general-lower" => spec.general_lower = true,
                "all" => {
                    spec = BoundsSpec {
                        tight_upper: true,
                        general_lower: true,
                        tight_lower: true,
                    }
                }
                other => bail!(
                    "bounds: unknown variant `{other}` (expected table-only, tight-upper, tight-lower, general-lower or all)"
                ),
            }
        }
        Ok(spec)
    }
}

impl From<BoundsSpec> for BoundFlags {
    fn from(b: BoundsSpec) -> Self {
        BoundFlags {
            tight_upper: b.tight_upper,
            general_lower: b.general_lower,
            tight_lower: b.tight_lower,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Shape of the single game run by `game`.
    pub game: Shape,
    pub draw_winner: DrawWinner,
    pub horizon: usize,
    pub feedback: Feedback,
    pub player_a: StrategySpec,
    pub player_b: StrategySpec,
    pub suite: SuiteKind,
    /// Overrides the suite's configuration list when present.
    pub configs: Option<Vec<Shape>>,
    pub strategies: Vec<StrategySpec>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub bounds: BoundsSpec,
    /// Candidate sample size for `ucb` strategies without their own.
    pub samples: usize,
    pub dump_series: bool,
    /// Worker threads; `None` uses every available core.
    pub jobs: Option<usize>,
    pub repetitions: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            game: EXPERIMENT_SHAPES[0],
            draw_winner: DrawWinner::B,
            horizon: 1000,
            feedback: Feedback::SemiBandit,
            player_a: StrategySpec::Uniform,
            player_b: StrategySpec::Uniform,
            suite: SuiteKind::Paper,
            configs: None,
            strategies: default_strategies(),
            seed: 0,
            out: None,
            bounds: BoundsSpec::default(),
            samples: DEFAULT_SAMPLES,
            dump_series: false,
            jobs: None,
            repetitions: 1,
        }
    }
}

impl RunConfig {
    /// Reads a config file. A run manifest is accepted too; its `config` entry is used.
    pub fn from_file(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let inner = match value {
            serde_json::Value::Object(mut map) if map.contains_key("config") && map.contains_key("games") => {
                map.remove("config").expect("checked")
            }
            other => other,
        };
        let config: RunConfig = serde_json::from_value(inner)?;
        Ok(config)
    }

    pub fn shapes(&self) -> Vec<Shape> {
        self.configs.clone().unwrap_or_else(|| self.suite.shapes())
    }

    pub fn game_config(&self, shape: Shape) -> blotto_core::Result<GameConfig> {
        GameConfig::new(
            shape.k,
            shape.n_a,
            shape.n_b,
            self.draw_winner.into(),
            self.horizon,
            self.feedback.into(),
        )
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        validate_shape(&self.game, "game")?;
        if let Some(configs) = &self.configs {
            if configs.is_empty() {
                bail!("configs: must list at least one configuration");
            }
            for (i, s) in configs.iter().enumerate() {
                validate_shape(s, &format!("configs[{i}]"))?;
            }
        }
        if self.horizon == 0 {
            bail!("horizon: must be at least 1");
        }
        if self.samples == 0 {
            bail!("samples: must be at least 1");
        }
        if self.repetitions == 0 {
            bail!("repetitions: must be at least 1");
        }
        if self.jobs == Some(0) {
            bail!("jobs: must be at least 1");
        }
        if self.strategies.is_empty() {
            bail!("strategies: must list at least one strategy");
        }
        self.player_a.validate("player_a")?;
        self.player_b.validate("player_b")?;
        for (i, s) in self.strategies.iter().enumerate() {
            s.validate(&format!("strategies[{i}]"))?;
        }
        let bandit = self.feedback == Feedback::Bandit;
        let needs_semi =
            |s: &StrategySpec| matches!(s, StrategySpec::Ucb { .. } | StrategySpec::HedgeContinuous { .. });
        if bandit {
            for (key, s) in [("player_a", &self.player_a), ("player_b", &self.player_b)] {
                if needs_semi(s) {
                    bail!("{key}: {} needs semi-bandit feedback", s.kind());
                }
            }
        }
        Ok(())
    }
}

fn validate_shape(s: &Shape, key: &str) -> anyhow::Result<()> {
    if s.k == 0 {
        bail!("{key}.k: must be at least 1");
    }
    if s.n_a == 0 {
        bail!("{key}.n_a: must be at least 1");
    }
    if s.n_b == 0 {
        bail!("{key}.n_b: must be at least 1");
    }
    Ok(())
}
