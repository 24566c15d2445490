//! Seed-fixed synthetic graph generators for tests and benchmarks.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

/// Erdős–Rényi G(n, p) with a fixed seed. Isolated vertices do not survive
/// edge-list construction, so the built graph may have fewer vertices.
pub fn er_graph(n: u32, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, 1));
    }
    Graph::from_edges(edges).expect("generator produced at least one edge")
}

/// Complete graph on n vertices.
pub fn complete_graph(n: u32) -> Graph {
    let edges: Vec<(u32, u32)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    Graph::from_edges(edges).expect("complete graph has edges")
}

/// Power-law graph with exactly `target_edges` distinct edges, grown by
/// preferential attachment with triad formation (Holme-Kim style): each new
/// vertex attaches `target_edges / vertices` edges, and after the first
/// preferential link every further link closes a triangle with probability
/// `triad_prob` by picking a neighbor of the previous target. Scale-free
/// degrees plus tunable clustering, deterministic per seed.
pub fn powerlaw_graph(vertices: u32, target_edges: usize, triad_prob: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = vertices as usize;
    let m = (target_edges / v).max(1);

    let mut seen: std::collections::HashSet<(u32, u32)> =
        std::collections::HashSet::with_capacity(target_edges * 2);
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(target_edges + m * m);
    let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); v];
    // one endpoint entry per edge side: sampling uniformly from this list is
    // degree-proportional
    let mut endpoints: Vec<u32> = Vec::with_capacity(2 * target_edges);

    let mut add_edge = |a: u32,
                        b: u32,
                        edges: &mut Vec<(u32, u32)>,
                        adjacency: &mut Vec<Vec<u32>>,
                        endpoints: &mut Vec<u32>|
     -> bool {
        if a == b {
            return false;
        }
        let key = if a < b { (a, b) } else { (b, a) };
        if !seen.insert(key) {
            return false;
        }
        edges.push(key);
        adjacency[a as usize].push(b);
        adjacency[b as usize].push(a);
        endpoints.push(a);
        endpoints.push(b);
        true
    };

    // seed clique on the first m+1 vertices
    let core = (m + 1).min(v) as u32;
    for a in 0..core {
        for b in (a + 1)..core {
            add_edge(a, b, &mut edges, &mut adjacency, &mut endpoints);
        }
    }

    for u in core..v as u32 {
        // anchor by preferential attachment, then settle the remaining links
        // inside the anchor's neighborhood: the new vertex joins one dense
        // patch instead of scattering triangles across the graph
        let mut anchor: Option<u32> = None;
        let mut attached = 0;
        let mut attempts = 0;
        while attached < m && attempts < 50 * m {
            attempts += 1;
            let candidate = match anchor {
                Some(a) if rng.gen_bool(triad_prob) => {
                    let neighbors = &adjacency[a as usize];
                    neighbors[rng.gen_range(0..neighbors.len())]
                }
                _ => endpoints[rng.gen_range(0..endpoints.len())],
            };
            if add_edge(u, candidate, &mut edges, &mut adjacency, &mut endpoints) {
                if anchor.is_none() {
                    anchor = Some(candidate);
                }
                attached += 1;
            }
        }
    }

    // top up to the exact edge target with degree-proportional pairs
    let mut attempts = 0;
    while edges.len() < target_edges && attempts < 100 * target_edges {
        attempts += 1;
        let a = endpoints[rng.gen_range(0..endpoints.len())];
        let b = endpoints[rng.gen_range(0..endpoints.len())];
        add_edge(a, b, &mut edges, &mut adjacency, &mut endpoints);
    }
    edges.truncate(target_edges);

    // growth order makes low ids hubs; shuffle labels so vertex ids carry
    // no degree information, as in real edge lists
    let mut relabel: Vec<u32> = (0..v as u32).collect();
    relabel.shuffle(&mut rng);
    let edges: Vec<(u32, u32)> = edges
        .into_iter()
        .map(|(a, b)| (relabel[a as usize], relabel[b as usize]))
        .collect();

    Graph::from_edges(edges).expect("power-law generator produced edges")
}
