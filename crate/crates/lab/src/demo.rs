//! Step-by-step printout of the bound and dead-end pruning pipeline for one round.

use std::fmt::Write;

use blotto_core::bounds::{opponent_bounds, BattlefieldOutcome};
use blotto_core::{BoundFlags, Decision, DecisionGraph, PayoffVector};

fn angle(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("<{}>", parts.join(","))
}

fn one_based(set: &std::collections::BTreeSet<usize>) -> String {
    let parts: Vec<String> = set.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn prune_demo(
    pi: &Decision,
    payoff: &PayoffVector,
    delta: u32,
    opponent_resources: u32,
    flags: BoundFlags,
) -> blotto_core::Result<String> {
    let k = pi.battlefields();
    let outcome = BattlefieldOutcome::from_payoff(payoff);
    let bounds = opponent_bounds(pi, &outcome, delta, opponent_resources, flags)?;
    let full = DecisionGraph::new(k, opponent_resources)?;
    let bounded = full.prune_by_bounds(&bounds)?;
    let trimmed = bounded.prune_dead_ends();

    let mut s = String::new();
    let _ = writeln!(
        s,
        "own decision {pi}, payoff {payoff}, draw bias {delta}, opponent budget {opponent_resources}"
    );
    let _ = writeln!(
        s,
        "won {}  lost {}",
        one_based(&outcome.won()),
        one_based(&outcome.lost())
    );
    let _ = writeln!(
        s,
        "opponent bounds: lower {}  upper {}",
        angle(bounds.lower()),
        angle(bounds.upper())
    );
    let _ = writeln!(
        s,
        "graph: {} vertices, {} edges, {} decisions",
        full.vertex_count(),
        full.edge_count(),
        full.count_decisions()
    );

    let mut removed = Vec::new();
    for layer in 1..=k {
        for to in 0..=opponent_resources {
            for from in 0..=to {
                if full.has_edge(layer, from, to) && !bounded.has_edge(layer, from, to) {
                    removed.push(format!("({},{from})->({layer},{to}):{}", layer - 1, to - from));
                }
            }
        }
    }
    let _ = writeln!(s, "bound pruning removes {} edges:", removed.len());
    for e in &removed {
        let _ = writeln!(s, "  {e}");
    }

    let mut dead = Vec::new();
    for layer in (0..k).rev() {
        for n in 0..=opponent_resources {
            if bounded.has_vertex(layer, n) && !trimmed.has_vertex(layer, n) {
                dead.push(format!("({layer},{n})"));
            }
        }
    }
    let _ = writeln!(
        s,
        "dead-end pruning removes {} vertices: {}",
        dead.len(),
        dead.join(" ")
    );

    let decisions = trimmed.decisions();
    let _ = writeln!(s, "feasible opponent decisions ({}):", decisions.len());
    for d in &decisions {
        let _ = writeln!(s, "  {d}");
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example() {
        let out = prune_demo(
            &Decision::from_allocations(vec![1, 3, 2]),
            &PayoffVector::from_bits(&[0, 1, 0]),
            0,
            4,
            BoundFlags::TABLE_ONLY,
        )
        .unwrap();
        assert!(out.contains("lower <1,0,2>  upper <2,2,3>"), "{out}");
        assert!(out.contains("(2,0) (2,3) (2,4) (1,3) (1,4)"), "{out}");
        assert!(
            out.contains("feasible opponent decisions (3):\n  <1,0,3>\n  <1,1,2>\n  <2,0,2>\n"),
            "{out}"
        );
    }
}
