//! Immutable data graph in CSR form with sorted neighborhoods.
//!
//! The graph is built once from an edge list (self-loops and duplicate edges
//! are dropped), queried concurrently afterwards. Neighbor slices are strictly
//! ascending, which is what makes linear-merge intersections possible.

use std::collections::HashMap;
use std::io::BufRead;

use crate::error::{Error, Result};

/// Undirected simple graph stored as compressed sparse rows.
///
/// Vertex ids are compacted to `0..vertex_count` in first-appearance order of
/// the input; the original ids are kept for output mapping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edge_count: u64,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    triangle_count: u64,
    original_ids: Option<Vec<u32>>,
}

/// Counts of input lines dropped while sanitizing an edge list.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct LoadStats {
    pub self_loops_dropped: u64,
    pub duplicates_dropped: u64,
}

impl Graph {
    /// Builds a graph from raw (possibly messy) edge pairs. Vertex ids are
    /// compacted in first-appearance order; self-loops and duplicates go away.
    pub fn from_edges<I>(edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let (graph, _) = Graph::from_edges_with_stats(edges)?;
        Ok(graph)
    }

    pub fn from_edges_with_stats<I>(edges: I) -> Result<(Graph, LoadStats)>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut stats = LoadStats::default();
        let mut id_map: HashMap<u32, u32> = HashMap::new();
        let mut original_ids: Vec<u32> = Vec::new();
        let mut pairs: Vec<(u32, u32)> = Vec::new();

        let mut compact = |raw: u32, original_ids: &mut Vec<u32>| -> u32 {
            *id_map.entry(raw).or_insert_with(|| {
                original_ids.push(raw);
                (original_ids.len() - 1) as u32
            })
        };

        for (u, v) in edges {
            if u == v {
                stats.self_loops_dropped += 1;
                continue;
            }
            let cu = compact(u, &mut original_ids);
            let cv = compact(v, &mut original_ids);
            let (a, b) = if cu < cv { (cu, cv) } else { (cv, cu) };
            pairs.push((a, b));
        }

        if pairs.is_empty() {
            return Err(Error::EmptyGraph);
        }

        pairs.sort_unstable();
        let before = pairs.len();
        pairs.dedup();
        stats.duplicates_dropped = (before - pairs.len()) as u64;

        let vertex_count = original_ids.len();
        let edge_count = pairs.len() as u64;

        let mut degrees = vec![0usize; vertex_count];
        for &(a, b) in &pairs {
            degrees[a as usize] += 1;
            degrees[b as usize] += 1;
        }

        let mut offsets = vec![0usize; vertex_count + 1];
        for v in 0..vertex_count {
            offsets[v + 1] = offsets[v] + degrees[v];
        }

        let mut neighbors = vec![0u32; offsets[vertex_count]];
        let mut cursor = offsets.clone();
        for &(a, b) in &pairs {
            neighbors[cursor[a as usize]] = b;
            cursor[a as usize] += 1;
            neighbors[cursor[b as usize]] = a;
            cursor[b as usize] += 1;
        }
        for v in 0..vertex_count {
            neighbors[offsets[v]..offsets[v + 1]].sort_unstable();
        }

        let identity = original_ids
            .iter()
            .enumerate()
            .all(|(i, &raw)| raw as usize == i);

        let mut graph = Graph {
            vertex_count,
            edge_count,
            offsets,
            neighbors,
            triangle_count: 0,
            original_ids: if identity { None } else { Some(original_ids) },
        };
        graph.triangle_count = count_triangles(&graph);
        Ok((graph, stats))
    }

    /// Reconstructs a graph from already-valid CSR arrays (cache loading).
    pub(crate) fn from_csr_parts(
        vertex_count: usize,
        edge_count: u64,
        triangle_count: u64,
        offsets: Vec<usize>,
        neighbors: Vec<u32>,
    ) -> Graph {
        Graph {
            vertex_count,
            edge_count,
            offsets,
            neighbors,
            triangle_count,
            original_ids: None,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    pub fn triangle_count(&self) -> u64 {
        self.triangle_count
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn neighbor_array(&self) -> &[u32] {
        &self.neighbors
    }

    /// Sorted neighbor slice of `v`.
    pub fn neighbors(&self, v: u32) -> &[u32] {
        let v = v as usize;
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: u32) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn contains_edge(&self, u: u32, v: u32) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Maps a compact vertex id back to the id used in the input file.
    pub fn original_id(&self, v: u32) -> u32 {
        match &self.original_ids {
            Some(map) => map[v as usize],
            None => v,
        }
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count)
            .map(|v| self.offsets[v + 1] - self.offsets[v])
            .max()
            .unwrap_or(0)
    }
}

/// Parses a whitespace-separated "u v" edge list; `#` starts a comment line.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let (graph, stats) = load_edge_list_with_stats(reader)?;
    if stats.self_loops_dropped > 0 || stats.duplicates_dropped > 0 {
        log::warn!(
            "edge list sanitized: {} self-loops and {} duplicate edges dropped",
            stats.self_loops_dropped,
            stats.duplicates_dropped
        );
    }
    Ok(graph)
}

pub fn load_edge_list_with_stats<R: BufRead>(reader: R) -> Result<(Graph, LoadStats)> {
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let u = parse_vertex(fields.next(), line_no)?;
        let v = parse_vertex(fields.next(), line_no)?;
        if fields.next().is_some() {
            return Err(Error::Parse {
                line: line_no,
                message: "expected exactly two vertex ids".into(),
            });
        }
        edges.push((u, v));
    }
    Graph::from_edges_with_stats(edges)
}

fn parse_vertex(field: Option<&str>, line: usize) -> Result<u32> {
    let text = field.ok_or_else(|| Error::Parse {
        line,
        message: "missing vertex id".into(),
    })?;
    text.parse::<u32>().map_err(|_| Error::Parse {
        line,
        message: format!("invalid vertex id {text:?}"),
    })
}

/// A strictly ascending set of vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VertexSet {
    elems: Vec<u32>,
}

impl VertexSet {
    /// Wraps an already strictly-ascending id list.
    pub fn from_sorted(elems: Vec<u32>) -> VertexSet {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        VertexSet { elems }
    }

    pub fn from_unsorted(mut elems: Vec<u32>) -> VertexSet {
        elems.sort_unstable();
        elems.dedup();
        VertexSet { elems }
    }

    pub fn elems(&self) -> &[u32] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.elems.binary_search(&v).is_ok()
    }

    /// Linear-merge intersection of two ascending sets.
    pub fn intersect(&self, other: &VertexSet) -> VertexSet {
        let mut out = Vec::with_capacity(self.len().min(other.len()));
        intersect_sorted_into(&self.elems, &other.elems, &mut out);
        VertexSet { elems: out }
    }
}

/// Merges two ascending slices into `out` (cleared first). No hashing, O(n+m).
pub fn intersect_sorted_into(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

/// In-place variant: keeps only elements of `acc` that also occur in `b`.
pub fn intersect_sorted_in_place(acc: &mut Vec<u32>, b: &[u32]) {
    let mut write = 0;
    let mut j = 0;
    for read in 0..acc.len() {
        let x = acc[read];
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j < b.len() && b[j] == x {
            acc[write] = x;
            write += 1;
            j += 1;
        }
    }
    acc.truncate(write);
}

/// Intersection that switches to binary probing when one input is much
/// shorter than the other; same output as the linear merge.
pub(crate) fn intersect_adaptive_into(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if small.len() * 16 < large.len() {
        out.clear();
        let mut rest = large;
        for &x in small {
            let pos = rest.partition_point(|&y| y < x);
            if pos < rest.len() && rest[pos] == x {
                out.push(x);
                rest = &rest[pos + 1..];
            } else {
                rest = &rest[pos..];
            }
        }
    } else {
        intersect_sorted_into(a, b, out);
    }
}

/// Exact unordered-triangle count. Marker-array based so the merge-sum
/// identity in the tests stays an independent check.
pub fn count_triangles(graph: &Graph) -> u64 {
    let n = graph.vertex_count;
    let mut marked = vec![false; n];
    let mut count = 0u64;
    for u in 0..n as u32 {
        for &w in graph.neighbors(u) {
            marked[w as usize] = true;
        }
        for &v in graph.neighbors(u) {
            if v <= u {
                continue;
            }
            for &w in graph.neighbors(v) {
                if w > v && marked[w as usize] {
                    count += 1;
                }
            }
        }
        for &w in graph.neighbors(u) {
            marked[w as usize] = false;
        }
    }
    count
}
