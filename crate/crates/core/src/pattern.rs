//! Patterns and their automorphism groups.
//!
//! A pattern is a small connected simple graph (at most 8 vertices) stored as
//! bitmask adjacency rows. The automorphism group is found by filtering all
//! n! bijections for edge preservation, which is exact at this size.

use std::fmt;

use crate::error::{Error, Result};

/// Upper bound on pattern size; keeps group enumeration and the n! schedule
/// search within interactive budgets.
pub const MAX_PATTERN_VERTICES: usize = 8;

/// Connected unlabeled pattern with its independence number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    n: usize,
    adj: [u8; MAX_PATTERN_VERTICES],
    independence_number: usize,
}

impl Pattern {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Pattern> {
        if !(2..=MAX_PATTERN_VERTICES).contains(&n) {
            return Err(Error::Pattern(format!(
                "vertex count {n} outside [2, {MAX_PATTERN_VERTICES}]"
            )));
        }
        let mut adj = [0u8; MAX_PATTERN_VERTICES];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Pattern(format!(
                    "edge ({u},{v}) references a vertex >= {n}"
                )));
            }
            if u == v {
                return Err(Error::Pattern(format!("self-loop on vertex {u}")));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        let pattern = Pattern {
            n,
            adj,
            independence_number: independence_number(n, &adj),
        };
        if !pattern.is_connected() {
            return Err(Error::Pattern("pattern must be connected".into()));
        }
        Ok(pattern)
    }

    /// Parses either `"n:u-v,u-v,..."` or an n^2-character 0/1 adjacency
    /// string (row-major, symmetric, zero diagonal).
    pub fn parse(spec: &str) -> Result<Pattern> {
        let spec = spec.trim();
        if let Some((head, tail)) = spec.split_once(':') {
            let n: usize = head
                .trim()
                .parse()
                .map_err(|_| Error::Pattern(format!("bad vertex count {head:?}")))?;
            let mut edges = Vec::new();
            for part in tail.split(',') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                let (u, v) = part
                    .split_once('-')
                    .ok_or_else(|| Error::Pattern(format!("bad edge {part:?}")))?;
                let u: usize = u
                    .trim()
                    .parse()
                    .map_err(|_| Error::Pattern(format!("bad vertex {u:?}")))?;
                let v: usize = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Pattern(format!("bad vertex {v:?}")))?;
                edges.push((u, v));
            }
            Pattern::from_edges(n, &edges)
        } else {
            let chars: Vec<char> = spec.chars().collect();
            let n = (chars.len() as f64).sqrt().round() as usize;
            if n * n != chars.len() {
                return Err(Error::Pattern(format!(
                    "adjacency string length {} is not a perfect square",
                    chars.len()
                )));
            }
            let mut edges = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    let c = chars[i * n + j];
                    let set = match c {
                        '0' => false,
                        '1' => true,
                        other => {
                            return Err(Error::Pattern(format!(
                                "adjacency string contains {other:?}"
                            )))
                        }
                    };
                    if set {
                        if i == j {
                            return Err(Error::Pattern("nonzero diagonal".into()));
                        }
                        if chars[j * n + i] != '1' {
                            return Err(Error::Pattern("asymmetric adjacency string".into()));
                        }
                        if i < j {
                            edges.push((i, j));
                        }
                    }
                }
            }
            Pattern::from_edges(n, &edges)
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Independence number: largest pairwise-nonadjacent vertex set size.
    pub fn independence_number(&self) -> usize {
        self.independence_number
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u] & (1 << v) != 0
    }

    /// Adjacency row of `v` as a bitmask over vertices.
    pub fn adjacency_mask(&self, v: usize) -> u8 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if self.adjacent(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    fn is_connected(&self) -> bool {
        let mut seen: u8 = 1;
        let mut frontier: u8 = 1;
        while frontier != 0 {
            let mut next: u8 = 0;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adj[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen.count_ones() as usize >= self.n
    }

    /// True when `mask` picks a pairwise-nonadjacent vertex set.
    pub fn is_independent_mask(&self, mask: u8) -> bool {
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            if self.adj[v] & mask != 0 {
                return false;
            }
        }
        true
    }

    /// True when the vertices of `mask` induce a connected subgraph.
    pub fn is_connected_induced(&self, mask: u8) -> bool {
        if mask == 0 {
            return false;
        }
        let start = mask.trailing_zeros() as usize;
        let mut seen: u8 = 1 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next: u8 = 0;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adj[v] & mask;
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == mask
    }
}

fn independence_number(n: usize, adj: &[u8; MAX_PATTERN_VERTICES]) -> usize {
    let mut best = 0;
    for mask in 0u16..(1 << n) {
        let mask = mask as u8;
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let mut ok = true;
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            if adj[v] & mask != 0 {
                ok = false;
                break;
            }
        }
        if ok {
            best = size;
        }
    }
    best
}

/// Bijection on pattern vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Permutation> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &v in &map {
            if v >= n || seen[v] {
                return Err(Error::Pattern(format!("{map:?} is not a bijection")));
            }
            seen[v] = true;
        }
        Ok(Permutation { map })
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation {
            map: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, v: usize) -> usize {
        self.map[v]
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// self ∘ other: applies `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            map: (0..self.map.len()).map(|v| self.apply(other.apply(v))).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut map = vec![0; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            map[v] = i;
        }
        Permutation { map }
    }

    pub fn preserves_edges(&self, pattern: &Pattern) -> bool {
        for (u, v) in pattern.edges() {
            if !pattern.adjacent(self.apply(u), self.apply(v)) {
                return false;
            }
        }
        true
    }

    /// Canonical disjoint-cycle form: each cycle starts at its minimum
    /// element, cycles ordered by that minimum, 1-cycles included.
    pub fn disjoint_cycles(&self) -> Vec<Vec<usize>> {
        let n = self.map.len();
        let mut visited = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut cycle = vec![start];
            visited[start] = true;
            let mut v = self.apply(start);
            while v != start {
                visited[v] = true;
                cycle.push(v);
                v = self.apply(v);
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// All transpositions in the disjoint-cycle form: pairs (v, p[v]) with
    /// p[p[v]] = v and p[v] != v, smaller vertex first, each reported once.
    pub fn two_cycles(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for v in 0..self.map.len() {
            let w = self.apply(v);
            if w > v && self.apply(w) == v {
                out.push((v, w));
            }
        }
        out
    }

    /// Rebuilds a permutation from disjoint cycles (inverse of
    /// `disjoint_cycles`, used by round-trip tests).
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Permutation> {
        let mut map: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            for i in 0..cycle.len() {
                map[cycle[i]] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::new(map)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in self.disjoint_cycles() {
            write!(f, "(")?;
            for (i, v) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Decomposes one k-cycle into a product of 2-cycles:
/// (a1,...,ak) = (a1,ak)(a1,ak-1)...(a1,a2), applied right to left.
pub fn transposition_product(cycle: &[usize]) -> Vec<(usize, usize)> {
    (1..cycle.len()).rev().map(|i| (cycle[0], cycle[i])).collect()
}

/// The automorphism group of a pattern, identity included.
#[derive(Debug, Clone)]
pub struct PermutationGroup {
    perms: Vec<Permutation>,
}

impl PermutationGroup {
    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.perms.binary_search(p).is_ok()
    }
}

/// Exact automorphism group via brute-force bijection filtering.
pub fn automorphisms(pattern: &Pattern) -> PermutationGroup {
    let n = pattern.vertex_count();
    let mut perms = Vec::new();
    let mut map = vec![0usize; n];
    let mut used = vec![false; n];
    search_bijections(pattern, 0, &mut map, &mut used, &mut perms);
    perms.sort();
    PermutationGroup { perms }
}

fn search_bijections(
    pattern: &Pattern,
    depth: usize,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Permutation>,
) {
    let n = pattern.vertex_count();
    if depth == n {
        out.push(Permutation { map: map.clone() });
        return;
    }
    'candidates: for image in 0..n {
        if used[image] {
            continue;
        }
        // prefix check: edges between depth and earlier vertices must map to edges
        for prev in 0..depth {
            if pattern.adjacent(depth, prev) != pattern.adjacent(image, map[prev]) {
                continue 'candidates;
            }
        }
        map[depth] = image;
        used[image] = true;
        search_bijections(pattern, depth + 1, map, used, out);
        used[image] = false;
    }
}

/// Named patterns used by the test suite, the benchmark harness, and the CLI.
pub fn preset(name: &str) -> Option<Pattern> {
    let spec = match name {
        "path3" => "3:0-1,1-2",
        "triangle" => "3:0-1,1-2,2-0",
        "rectangle" => "4:0-1,1-2,2-3,3-0",
        "house" => "5:0-1,0-2,1-3,2-3,0-4,1-4",
        "cycle5" => "5:0-1,1-2,2-3,3-4,4-0",
        // six-cycle 3-0-4-2-5-1-3 with two extra chords at vertex 0; the
        // three-vertex independent tail {3,4,5} makes it the canonical
        // inclusion-exclusion counting benchmark
        "cycle6" => "6:0-1,0-2,0-3,1-3,0-4,2-4,1-5,2-5",
        "hexagon" => "6:0-1,1-2,2-3,3-4,4-5,5-0",
        "k4" => "4:0-1,0-2,0-3,1-2,1-3,2-3",
        "k5" => "5:0-1,0-2,0-3,0-4,1-2,1-3,1-4,2-3,2-4,3-4",
        "house-tail" => "6:0-1,0-2,1-3,2-3,0-4,1-4,4-5",
        "prism" => "6:0-1,1-2,0-2,3-4,4-5,3-5,0-3,1-4,2-5",
        "k33" => "6:0-3,0-4,0-5,1-3,1-4,1-5,2-3,2-4,2-5",
        _ => return None,
    };
    Some(Pattern::parse(spec).expect("preset patterns are valid"))
}

/// The benchmark suite: 11 named patterns covering paths, cycles, cliques,
/// and the 6-vertex evaluation shapes.
pub fn suite() -> Vec<(&'static str, Pattern)> {
    [
        "path3",
        "triangle",
        "rectangle",
        "house",
        "cycle5",
        "cycle6",
        "k4",
        "k5",
        "house-tail",
        "prism",
        "k33",
    ]
    .iter()
    .map(|&name| (name, preset(name).unwrap()))
    .collect()
}
