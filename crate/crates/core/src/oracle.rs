//! Brute-force reference counter.
//!
//! Enumerates every injective mapping of pattern vertices to data vertices
//! (backtracking in plain pattern-vertex order, pruning on violated pattern
//! edges) and divides by the automorphism count. Independent of schedules,
//! restrictions, and the set-intersection executor; intended for small
//! graphs.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pattern::{automorphisms, Pattern};

/// Number of injective, edge-preserving assignments (every automorphic image
/// counted separately).
pub fn injective_map_count(graph: &Graph, pattern: &Pattern) -> u64 {
    let n = pattern.vertex_count();
    let mut map = vec![0u32; n];
    let mut used = vec![false; graph.vertex_count()];
    let mut count = 0u64;
    assign(graph, pattern, 0, &mut map, &mut used, &mut count);
    count
}

fn assign(
    graph: &Graph,
    pattern: &Pattern,
    depth: usize,
    map: &mut Vec<u32>,
    used: &mut Vec<bool>,
    count: &mut u64,
) {
    if depth == pattern.vertex_count() {
        *count += 1;
        return;
    }
    'candidates: for v in 0..graph.vertex_count() as u32 {
        if used[v as usize] {
            continue;
        }
        for prev in 0..depth {
            if pattern.adjacent(depth, prev) && !graph.contains_edge(v, map[prev]) {
                continue 'candidates;
            }
        }
        map[depth] = v;
        used[v as usize] = true;
        assign(graph, pattern, depth + 1, map, used, count);
        used[v as usize] = false;
    }
}

/// Embedding count: injective assignments divided by |Aut(pattern)|.
pub fn embedding_count(graph: &Graph, pattern: &Pattern) -> Result<u64> {
    let assignments = injective_map_count(graph, pattern);
    let group_order = automorphisms(pattern).order() as u64;
    if assignments % group_order != 0 {
        return Err(Error::Internal(format!(
            "assignment count {assignments} not divisible by group order {group_order}"
        )));
    }
    Ok(assignments / group_order)
}
