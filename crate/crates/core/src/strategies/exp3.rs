use alloc::vec;
use alloc::vec::Vec;

use num_traits::ToPrimitive;
use rand::{Rng, RngCore};

use super::Strategy;
use crate::error::{Error, Result};
use crate::game::{Decision, Feedback, Observation};
use crate::graph::{DecisionGraph, PathCountTable};

/// Exponential weights over the edges of the player's decision graph.
///
/// With probability `gamma` the decision is drawn from the exploration
/// distribution (uniform over `Pi_p`); otherwise a path is drawn with
/// probability proportional to the product of its edge weights. After each
/// round, every edge on the played path receives the importance-weighted
/// update `w_e <- w_e * exp(eta * r_e / p_e)`, where `r_e` is the payoff on that
/// edge's battlefield and `p_e` the probability the edge was selected.
#[derive(Debug, Clone)]
pub struct Exp3Edge {
    uniform: PathCountTable,
    uniform_paths: PathTables,
    log_weights: Vec<f64>,
    weighted: Option<PathTables>,
    gamma: f64,
    eta: f64,
}

pub const DEFAULT_GAMMA: f64 = 0.25;
pub const DEFAULT_ETA: f64 = 0.05;

/// Forward/backward sums of path weight products, with each layer's weights
/// rescaled by its largest one. Every path uses one edge per layer, so the
/// rescaling does not change path probabilities.
#[derive(Debug, Clone)]
struct PathTables {
    forward: Vec<f64>,
    backward: Vec<f64>,
    layer_shift: Vec<f64>,
}

impl PathTables {
    fn build(graph: &DecisionGraph, log_weights: &[f64]) -> Self {
        let k = graph.battlefields();
        let n_max = graph.resources();
        let stride = n_max as usize + 1;
        let mut layer_shift = vec![f64::NEG_INFINITY; k + 1];
        for (layer, shift) in layer_shift.iter_mut().enumerate().skip(1) {
            for from in 0..=n_max {
                for to in graph.out_edges(layer - 1, from) {
                    let slot = graph.edge_slot(layer, from, to).expect("listed edge");
                    *shift = shift.max(log_weights[slot]);
                }
            }
        }
        let scaled = |layer: usize, from: u32, to: u32| -> f64 {
            let slot = graph.edge_slot(layer, from, to).expect("listed edge");
            libm::exp(log_weights[slot] - layer_shift[layer])
        };

        let mut backward = vec![0.0; (k + 1) * stride];
        if graph.has_vertex(k, n_max) {
            backward[k * stride + n_max as usize] = 1.0;
        }
        for layer in (0..k).rev() {
            for n in 0..=n_max {
                if !graph.has_vertex(layer, n) {
                    continue;
                }
                backward[layer * stride + n as usize] = graph
                    .out_edges(layer, n)
                    .map(|to| scaled(layer + 1, n, to) * backward[(layer + 1) * stride + to as usize])
                    .sum();
            }
        }
        let mut forward = vec![0.0; (k + 1) * stride];
        forward[0] = 1.0;
        for layer in 1..=k {
            for n in 0..=n_max {
                if !graph.has_vertex(layer, n) {
                    continue;
                }
                forward[layer * stride + n as usize] = graph
                    .in_edges(layer, n)
                    .map(|from| forward[(layer - 1) * stride + from as usize] * scaled(layer, from, n))
                    .sum();
            }
        }
        Self {
            forward,
            backward,
            layer_shift,
        }
    }
}

impl Exp3Edge {
    pub fn new(battlefields: usize, resources: u32, gamma: f64, eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidConfig(alloc::format!(
                "gamma must lie in [0, 1], got {gamma}"
            )));
        }
        if !eta.is_finite() || eta < 0.0 {
            return Err(Error::InvalidConfig(alloc::format!(
                "eta must be finite and non-negative, got {eta}"
            )));
        }
        let graph = DecisionGraph::new(battlefields, resources)?;
        let log_weights = vec![0.0; graph.edge_slots()];
        let uniform_paths = PathTables::build(&graph, &log_weights);
        Ok(Self {
            uniform: graph.path_counts(),
            uniform_paths,
            log_weights,
            weighted: None,
            gamma,
            eta,
        })
    }

    pub fn with_defaults(battlefields: usize, resources: u32) -> Result<Self> {
        Self::new(battlefields, resources, DEFAULT_GAMMA, DEFAULT_ETA)
    }

    fn graph(&self) -> &DecisionGraph {
        self.uniform.graph()
    }

    fn stride(&self) -> usize {
        self.graph().resources() as usize + 1
    }

    fn weighted(&mut self) -> &PathTables {
        if self.weighted.is_none() {
            self.weighted = Some(PathTables::build(self.uniform.graph(), &self.log_weights));
        }
        self.weighted.as_ref().expect("just built")
    }

    fn scaled_weight(&self, tables: &PathTables, layer: usize, from: u32, to: u32) -> f64 {
        let slot = self.graph().edge_slot(layer, from, to).expect("edge of the full graph");
        libm::exp(self.log_weights[slot] - tables.layer_shift[layer])
    }

    fn sample_weighted(&mut self, rng: &mut dyn RngCore) -> Decision {
        let tables = self.weighted().clone();
        let stride = self.stride();
        let g = self.graph();
        let mut allocations = Vec::with_capacity(g.battlefields());
        let mut n = 0u32;
        for layer in 0..g.battlefields() {
            let here = tables.backward[layer * stride + n as usize];
            let mut target = rng.gen::<f64>() * here;
            let mut chosen = None;
            for to in g.out_edges(layer, n) {
                let mass =
                    self.scaled_weight(&tables, layer + 1, n, to) * tables.backward[(layer + 1) * stride + to as usize];
                chosen = Some(to);
                if target < mass {
                    break;
                }
                target -= mass;
            }
            let to = chosen.expect("every vertex of the full graph has a successor");
            allocations.push(to - n);
            n = to;
        }
        Decision::new(allocations, g.resources()).expect("path weights sum to N")
    }

    /// Log-weight of edge `(layer-1, from) -> (layer, to)`, if the edge exists.
    pub fn edge_log_weight(&self, layer: usize, from: u32, to: u32) -> Option<f64> {
        self.graph()
            .edge_slot(layer, from, to)
            .map(|slot| self.log_weights[slot])
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Probability that the next `choose` returns `decision`.
    pub fn path_probability(&mut self, decision: &Decision) -> f64 {
        let total = self.uniform.total().to_f64().unwrap_or(f64::INFINITY);
        let tables = self.weighted().clone();
        let mut product = 1.0;
        let mut n = 0u32;
        for (layer, &a) in decision.allocations().iter().enumerate() {
            if self.graph().edge_slot(layer + 1, n, n + a).is_none() {
                return 0.0;
            }
            product *= self.scaled_weight(&tables, layer + 1, n, n + a);
            n += a;
        }
        self.gamma / total + (1.0 - self.gamma) * product / tables.backward[0]
    }

    /// Probability that the next `choose` uses edge `(layer-1, from) -> (layer, to)`.
    fn edge_probability(&mut self, layer: usize, from: u32, to: u32) -> f64 {
        let stride = self.stride();
        let tables = self.weighted().clone();
        let u = &self.uniform_paths;
        let tail = (layer - 1) * stride + from as usize;
        let head = layer * stride + to as usize;
        let explore = u.forward[tail] * u.backward[head] / u.backward[0];
        let exploit = tables.forward[tail] * self.scaled_weight(&tables, layer, from, to) * tables.backward[head]
            / tables.backward[0];
        self.gamma * explore + (1.0 - self.gamma) * exploit
    }
}

impl Strategy for Exp3Edge {
    fn name(&self) -> &str {
        "exp3-edge"
    }

    fn choose(&mut self, _round: usize, rng: &mut dyn RngCore) -> Decision {
        if rng.gen::<f64>() < self.gamma {
            self.uniform.sample(rng).expect("full decision graph is never empty")
        } else {
            self.sample_weighted(rng)
        }
    }

    fn observe(&mut self, observation: &Observation) -> Result<()> {
        let decision = &observation.decision;
        let k = self.graph().battlefields();
        if decision.battlefields() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: decision.battlefields(),
            });
        }
        let rewards: Vec<f64> = match &observation.feedback {
            Feedback::SemiBandit(v) => v.as_slice().iter().map(|&w| if w { 1.0 } else { 0.0 }).collect(),
            Feedback::Bandit { total } => vec![*total as f64 / k as f64; k],
        };
        let mut updates = Vec::with_capacity(k);
        let mut n = 0u32;
        for (i, &a) in decision.allocations().iter().enumerate() {
            let layer = i + 1;
            let slot = self.graph().edge_slot(layer, n, n + a).ok_or(Error::ResourceMismatch {
                sum: u64::from(decision.resources()),
                expected: self.graph().resources(),
            })?;
            let p = self.edge_probability(layer, n, n + a);
            if rewards[i] > 0.0 && p > 0.0 {
                updates.push((slot, self.eta * rewards[i] / p));
            }
            n += a;
        }
        for (slot, step) in updates {
            self.log_weights[slot] += step;
        }
        self.weighted = None;
        Ok(())
    }
}
