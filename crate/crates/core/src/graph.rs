//! Layered decision graphs.
//!
//! `G(K, N)` has a source `s = (0, 0)`, a sink `d = (K, N)` and interior vertices
//! `(i, n)` for `i` in `1..K` and `n` in `0..=N`. An edge `(i-1, n') -> (i, n)`
//! exists for every `n' <= n` and carries weight `n - n'`, the allocation to
//! battlefield `i`. Every source-to-sink path therefore spells out one decision
//! and every decision has exactly one path.
//!
//! Vertices and edges live in dense presence masks over the `(K+1) x (N+1)`
//! lattice, so pruning never allocates a new topology: a pruned graph is the
//! same lattice with fewer flags set.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::bounds::AllocationBounds;
use crate::error::{Error, Result};
use crate::game::Decision;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionGraph {
    battlefields: usize,
    resources: u32,
    stride: usize,
    vertices: Vec<bool>,
    edges: Vec<bool>,
}

impl DecisionGraph {
    /// Builds the full graph `G(K, N)`.
    pub fn new(battlefields: usize, resources: u32) -> Result<Self> {
        if battlefields == 0 {
            return Err(Error::NoBattlefields);
        }
        let stride = resources as usize + 1;
        let mut graph = Self {
            battlefields,
            resources,
            stride,
            vertices: vec![false; (battlefields + 1) * stride],
            edges: vec![false; battlefields * stride * stride],
        };
        let last = resources as usize;
        for layer in 0..=battlefields {
            for n in 0..=last {
                let present = match layer {
                    0 => n == 0,
                    l if l == battlefields => n == last,
                    _ => true,
                };
                graph.vertices[layer * stride + n] = present;
            }
        }
        for layer in 1..=battlefields {
            for to in 0..=last {
                if !graph.vertices[layer * stride + to] {
                    continue;
                }
                for from in 0..=to {
                    if graph.vertices[(layer - 1) * stride + from] {
                        let slot = graph.slot(layer, from, to);
                        graph.edges[slot] = true;
                    }
                }
            }
        }
        Ok(graph)
    }

    pub fn battlefields(&self) -> usize {
        self.battlefields
    }

    pub fn resources(&self) -> u32 {
        self.resources
    }

    #[inline]
    fn vertex(&self, layer: usize, n: usize) -> usize {
        layer * self.stride + n
    }

    /// Index of edge `(layer-1, from) -> (layer, to)` in the edge mask.
    #[inline]
    fn slot(&self, layer: usize, from: usize, to: usize) -> usize {
        debug_assert!(layer >= 1 && layer <= self.battlefields && from <= to);
        ((layer - 1) * self.stride + to) * self.stride + from
    }

    /// Number of per-edge slots, for callers that attach data to edges.
    pub fn edge_slots(&self) -> usize {
        self.edges.len()
    }

    /// Slot of edge `(layer-1, from) -> (layer, to)` if that edge is present.
    pub fn edge_slot(&self, layer: usize, from: u32, to: u32) -> Option<usize> {
        if layer == 0 || layer > self.battlefields || from > to || to > self.resources {
            return None;
        }
        let slot = self.slot(layer, from as usize, to as usize);
        self.edges[slot].then_some(slot)
    }

    pub fn has_vertex(&self, layer: usize, n: u32) -> bool {
        layer <= self.battlefields && n <= self.resources && self.vertices[self.vertex(layer, n as usize)]
    }

    pub fn has_edge(&self, layer: usize, from: u32, to: u32) -> bool {
        self.edge_slot(layer, from, to).is_some()
    }

    /// Successors of `(layer, n)` in ascending edge weight.
    pub fn out_edges(&self, layer: usize, n: u32) -> impl Iterator<Item = u32> + '_ {
        let valid = layer < self.battlefields && n <= self.resources;
        let start = if valid { n } else { self.resources + 1 };
        (start..=self.resources).filter(move |&to| self.edges[self.slot(layer + 1, n as usize, to as usize)])
    }

    /// Predecessors of `(layer, n)`, in ascending `n'`.
    pub fn in_edges(&self, layer: usize, n: u32) -> impl Iterator<Item = u32> + '_ {
        let valid = layer >= 1 && layer <= self.battlefields && n <= self.resources;
        let end = if valid { n + 1 } else { 0 };
        (0..end).filter(move |&from| self.edges[self.slot(layer, from as usize, n as usize)])
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.iter().filter(|&&v| v).count()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().filter(|&&e| e).count()
    }

    fn remove_vertex(&mut self, layer: usize, n: usize) {
        let v = self.vertex(layer, n);
        self.vertices[v] = false;
        if layer >= 1 {
            for from in 0..=n {
                let slot = self.slot(layer, from, n);
                self.edges[slot] = false;
            }
        }
        if layer < self.battlefields {
            for to in n..self.stride {
                let slot = self.slot(layer + 1, n, to);
                self.edges[slot] = false;
            }
        }
    }

    /// Removes every edge into battlefield `i` whose weight falls outside `[lower_i, upper_i]`.
    ///
    /// Vertices are left in place; follow with [`prune_dead_ends`](Self::prune_dead_ends).
    pub fn prune_by_bounds(&self, bounds: &AllocationBounds) -> Result<Self> {
        if bounds.battlefields() != self.battlefields {
            return Err(Error::DimensionMismatch {
                expected: self.battlefields,
                found: bounds.battlefields(),
            });
        }
        let mut pruned = self.clone();
        for layer in 1..=self.battlefields {
            let lower = bounds.lower()[layer - 1];
            let upper = bounds.upper()[layer - 1];
            for to in 0..self.stride {
                for from in 0..=to {
                    let weight = (to - from) as i64;
                    if weight < lower || weight > upper {
                        let slot = self.slot(layer, from, to);
                        pruned.edges[slot] = false;
                    }
                }
            }
        }
        Ok(pruned)
    }

    /// Iteratively removes vertices (other than the sink) with no outgoing edges,
    /// sweeping layers from `K-1` down to `0`. Afterwards every vertex reaches the sink.
    pub fn prune_dead_ends(&self) -> Self {
        let mut pruned = self.clone();
        let k = self.battlefields;
        let mut out_degree = vec![0usize; (k + 1) * self.stride];
        for layer in 0..k {
            for n in 0..self.stride {
                out_degree[self.vertex(layer, n)] = pruned.out_edges(layer, n as u32).count();
            }
        }
        for layer in (0..k).rev() {
            for n in (0..self.stride).rev() {
                let v = self.vertex(layer, n);
                if !pruned.vertices[v] || out_degree[v] != 0 {
                    continue;
                }
                if layer >= 1 {
                    for from in 0..=n {
                        let slot = self.slot(layer, from, n);
                        if pruned.edges[slot] {
                            pruned.edges[slot] = false;
                            out_degree[self.vertex(layer - 1, from)] -= 1;
                        }
                    }
                }
                pruned.vertices[v] = false;
            }
        }
        pruned
    }

    /// Removes vertices other than the source that cannot be reached from it.
    /// The path set is unchanged.
    pub fn prune_unreachable(&self) -> Self {
        let mut pruned = self.clone();
        let source = self.vertex(0, 0);
        for layer in 1..=self.battlefields {
            for n in 0..self.stride {
                let v = self.vertex(layer, n);
                if !pruned.vertices[v] {
                    continue;
                }
                if pruned.in_edges(layer, n as u32).next().is_none() {
                    pruned.remove_vertex(layer, n);
                }
            }
        }
        if !pruned.vertices[source] {
            // Nothing downstream can be reached without a source.
            for layer in 1..=self.battlefields {
                for n in 0..self.stride {
                    pruned.remove_vertex(layer, n);
                }
            }
        }
        pruned
    }

    /// Visits every source-to-sink path depth-first, in ascending edge weight.
    pub fn for_each_path<F: FnMut(&[u32])>(&self, mut visit: F) {
        if !self.has_vertex(0, 0) {
            return;
        }
        let mut allocations = vec![0u32; self.battlefields];
        self.walk(0, 0, &mut allocations, &mut visit);
    }

    fn walk<F: FnMut(&[u32])>(&self, layer: usize, n: u32, allocations: &mut [u32], visit: &mut F) {
        if layer == self.battlefields {
            visit(allocations);
            return;
        }
        for to in self.out_edges(layer, n) {
            if !self.has_vertex(layer + 1, to) {
                continue;
            }
            allocations[layer] = to - n;
            self.walk(layer + 1, to, allocations, visit);
        }
    }

    /// All decisions whose paths survive in the graph, in lexicographic order.
    pub fn decisions(&self) -> Vec<Decision> {
        let mut out = Vec::new();
        let resources = self.resources;
        self.for_each_path(|a| {
            out.push(Decision::new(a.to_vec(), resources).expect("path weights sum to N"));
        });
        out
    }

    pub fn path_counts(&self) -> PathCountTable {
        PathCountTable::new(self.clone())
    }

    /// Number of source-to-sink paths, by dynamic programming over the lattice.
    pub fn count_decisions(&self) -> BigUint {
        self.path_counts().total().clone()
    }

    pub fn has_path(&self) -> bool {
        !self.count_decisions().is_zero()
    }

    /// Uniformly random decision among the surviving paths.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Decision> {
        self.path_counts().sample(rng)
    }

    /// Number of surviving paths with each allocation on each battlefield:
    /// `result[i][a]` counts paths whose battlefield `i` gets `a`.
    pub fn allocation_marginals(&self) -> Vec<Vec<BigUint>> {
        let k = self.battlefields;
        let backward = self.path_counts();
        let mut forward = vec![BigUint::zero(); (k + 1) * self.stride];
        if self.has_vertex(0, 0) {
            forward[self.vertex(0, 0)] = BigUint::one();
        }
        let mut marginals = vec![vec![BigUint::zero(); self.stride]; k];
        for layer in 1..=k {
            for to in 0..self.stride {
                if !self.vertices[self.vertex(layer, to)] {
                    continue;
                }
                let mut reaching = BigUint::zero();
                for from in self.in_edges(layer, to as u32) {
                    let f = &forward[self.vertex(layer - 1, from as usize)];
                    if f.is_zero() {
                        continue;
                    }
                    reaching += f;
                    let through = f * backward.count(layer, to as u32);
                    marginals[layer - 1][to - from as usize] += through;
                }
                forward[self.vertex(layer, to)] = reaching;
            }
        }
        marginals
    }
}

/// Debug edge list, one `(i,n')->(i,n):w` line per edge.
impl fmt::Display for DecisionGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for layer in 1..=self.battlefields {
            for from in 0..self.stride {
                for to in from..self.stride {
                    if self.edges[self.slot(layer, from, to)] {
                        writeln!(f, "({},{})->({},{}):{}", layer - 1, from, layer, to, to - from)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Number of paths from each vertex to the sink.
///
/// Counts are arbitrary precision. When the total fits in a `u64` a machine-word
/// mirror is kept so sampling stays cheap.
#[derive(Debug, Clone)]
pub struct PathCountTable {
    graph: DecisionGraph,
    counts: Vec<BigUint>,
    small: Option<Vec<u64>>,
}

impl PathCountTable {
    pub fn new(graph: DecisionGraph) -> Self {
        let k = graph.battlefields;
        let mut counts = vec![BigUint::zero(); graph.vertices.len()];
        let sink = graph.vertex(k, graph.resources as usize);
        if graph.vertices[sink] {
            counts[sink] = BigUint::one();
        }
        for layer in (0..k).rev() {
            for n in 0..graph.stride {
                let v = graph.vertex(layer, n);
                if !graph.vertices[v] {
                    continue;
                }
                let mut total = BigUint::zero();
                for to in graph.out_edges(layer, n as u32) {
                    total += &counts[graph.vertex(layer + 1, to as usize)];
                }
                counts[v] = total;
            }
        }
        let small = counts.iter().map(|c| c.to_u64()).collect::<Option<Vec<_>>>();
        Self { graph, counts, small }
    }

    pub fn graph(&self) -> &DecisionGraph {
        &self.graph
    }

    /// Paths from the source, i.e. the number of decisions in the graph.
    pub fn total(&self) -> &BigUint {
        &self.counts[0]
    }

    pub fn count(&self, layer: usize, n: u32) -> &BigUint {
        &self.counts[self.graph.vertex(layer, n as usize)]
    }

    /// The `rank`-th decision in depth-first, ascending-weight order.
    pub fn unrank(&self, rank: &BigUint) -> Option<Decision> {
        if rank >= self.total() {
            return None;
        }
        if let (Some(small), Some(r)) = (&self.small, rank.to_u64()) {
            return Some(self.unrank_small(small, r));
        }
        let g = &self.graph;
        let mut rank = rank.clone();
        let mut allocations = Vec::with_capacity(g.battlefields);
        let mut n = 0u32;
        for layer in 0..g.battlefields {
            let mut next = None;
            for to in g.out_edges(layer, n) {
                let c = self.count(layer + 1, to);
                if &rank < c {
                    next = Some(to);
                    break;
                }
                rank -= c;
            }
            let to = next.expect("rank below subtree total");
            allocations.push(to - n);
            n = to;
        }
        Some(Decision::new(allocations, g.resources).expect("path weights sum to N"))
    }

    fn unrank_small(&self, small: &[u64], mut rank: u64) -> Decision {
        let g = &self.graph;
        let mut allocations = Vec::with_capacity(g.battlefields);
        let mut n = 0u32;
        for layer in 0..g.battlefields {
            let mut next = None;
            for to in g.out_edges(layer, n) {
                let c = small[g.vertex(layer + 1, to as usize)];
                if rank < c {
                    next = Some(to);
                    break;
                }
                rank -= c;
            }
            let to = next.expect("rank below subtree total");
            allocations.push(to - n);
            n = to;
        }
        Decision::new(allocations, g.resources).expect("path weights sum to N")
    }

    /// Draws a decision with probability exactly `1 / total()`.
    ///
    /// Equivalent to walking from the source and taking each out-edge with
    /// probability proportional to its successor's path count.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Decision> {
        if self.total().is_zero() {
            return Err(Error::EmptySupport);
        }
        if let Some(small) = &self.small {
            let r = rng.gen_range(0..small[0]);
            return Ok(self.unrank_small(small, r));
        }
        let r = rng.gen_biguint_below(self.total());
        Ok(self.unrank(&r).expect("rank drawn below total"))
    }
}
