//! Tail counting via the Inclusion-Exclusion Principle.
//!
//! The innermost independent loops of a counting run bind pairwise-nonadjacent
//! pattern vertices, so their candidate sets S_1..S_k depend only on the outer
//! prefix. The number of tuples with all-distinct entries is counted by
//! inclusion-exclusion over the pairwise equality events A_{i,j}; the
//! cardinality of an event intersection factors over the connected components
//! of the graph the pairs induce on the k slots.
//!
//! [`event_intersection_cardinality`] and [`distinct_tuple_count`] are the
//! direct reference forms. The engine uses [`TailEvaluator`], which expands
//! the alternating sum once per tail length and then evaluates it per prefix
//! with count-only merges (prefix-bound vertices are excluded on the fly, so
//! no candidate set is ever copied).

use crate::error::{Error, Result};
use crate::graph::{intersect_sorted_in_place, intersect_sorted_into};

/// Cardinality of |A_{i1,j1} ∩ ... ∩ A_{im,jm}|: add an undirected edge per
/// pair over k slot-vertices, intersect the sets of each connected component,
/// multiply the component cardinalities (singletons contribute |S_i|).
pub fn event_intersection_cardinality(pairs: &[(usize, usize)], sets: &[&[u32]]) -> u64 {
    let k = sets.len();
    let mut parent: Vec<usize> = (0..k).collect();
    for &(i, j) in pairs {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a] = b;
        }
    }

    let mut product = 1u64;
    let mut scratch = Vec::new();
    let mut members = Vec::new();
    for root in 0..k {
        if find(&mut parent, root) != root {
            continue;
        }
        members.clear();
        for v in 0..k {
            if find(&mut parent, v) == root {
                members.push(v);
            }
        }
        let card = if members.len() == 1 {
            sets[members[0]].len() as u64
        } else {
            intersect_sorted_into(sets[members[0]], sets[members[1]], &mut scratch);
            for &m in &members[2..] {
                intersect_sorted_in_place(&mut scratch, sets[m]);
            }
            scratch.len() as u64
        };
        product = product.saturating_mul(card);
    }
    product
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

/// |S_IEP|: the number of (e_1,...,e_k) with e_i in S_i and all entries
/// distinct, via the alternating sum over all subsets of the C(k,2) equality
/// events. Checked arithmetic; the result is provably nonnegative.
pub fn distinct_tuple_count(sets: &[&[u32]]) -> Result<i64> {
    let k = sets.len();
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| ((i + 1)..k).map(move |j| (i, j)))
        .collect();
    let mut total: i64 = 0;
    let mut subset_pairs = Vec::with_capacity(pairs.len());
    for subset in 0u32..(1 << pairs.len()) {
        subset_pairs.clear();
        for (idx, &p) in pairs.iter().enumerate() {
            if subset & (1 << idx) != 0 {
                subset_pairs.push(p);
            }
        }
        let card = event_intersection_cardinality(&subset_pairs, sets);
        let card = i64::try_from(card).map_err(|_| Error::Overflow)?;
        let signed = if subset.count_ones() % 2 == 0 {
            card
        } else {
            -card
        };
        total = total.checked_add(signed).ok_or(Error::Overflow)?;
    }
    Ok(total)
}

/// How a component-intersection cardinality is obtained per prefix.
#[derive(Debug, Clone)]
enum TailOp {
    /// |S_a ∩ S_b| with prefix exclusion, optionally materialized for reuse.
    Pair {
        mask: u32,
        a: usize,
        b: usize,
        store: Option<usize>,
    },
    /// |stored ∩ S_member|; the stored base already excludes the prefix.
    Extend {
        mask: u32,
        base: usize,
        member: usize,
        store: Option<usize>,
    },
}

/// Reusable intersection buffers for one evaluator.
#[derive(Debug, Clone, Default)]
pub struct TailScratch {
    stores: Vec<Vec<u32>>,
}

/// Precompiled tail evaluator: the subset expansion only depends on the tail
/// length, so the signed coefficient of every component-mask product is
/// computed once and reused for every prefix.
#[derive(Debug, Clone)]
pub struct TailEvaluator {
    tail_len: usize,
    /// (coefficient, component masks with >= 2 members)
    terms: Vec<(i64, Vec<u32>)>,
    ops: Vec<TailOp>,
    store_count: usize,
}

impl TailEvaluator {
    pub fn new(tail_len: usize) -> TailEvaluator {
        let pairs: Vec<(usize, usize)> = (0..tail_len)
            .flat_map(|i| ((i + 1)..tail_len).map(move |j| (i, j)))
            .collect();
        let mut coefficients: std::collections::HashMap<Vec<u32>, i64> =
            std::collections::HashMap::new();

        for subset in 0u32..(1 << pairs.len()) {
            let mut parent: Vec<usize> = (0..tail_len).collect();
            for (idx, &(i, j)) in pairs.iter().enumerate() {
                if subset & (1 << idx) != 0 {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
            let mut masks = vec![0u32; tail_len];
            for v in 0..tail_len {
                masks[find(&mut parent, v)] |= 1 << v;
            }
            let mut key: Vec<u32> = masks.into_iter().filter(|&m| m != 0).collect();
            key.sort_unstable();
            let sign = if subset.count_ones() % 2 == 0 { 1 } else { -1 };
            *coefficients.entry(key).or_insert(0) += sign;
        }

        let mut terms: Vec<(i64, Vec<u32>)> = coefficients
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(key, c)| (c, key))
            .collect();
        terms.sort_by(|a, b| a.1.cmp(&b.1));

        // every multi-member mask needed by a term, plus the chain of
        // sub-masks each one is folded up from
        let mut needed: std::collections::BTreeSet<u32> = terms
            .iter()
            .flat_map(|(_, masks)| masks.iter().copied())
            .filter(|m| m.count_ones() >= 2)
            .collect();
        let mut materialize: std::collections::BTreeSet<u32> = Default::default();
        let mut frontier: Vec<u32> = needed.iter().copied().collect();
        while let Some(mask) = frontier.pop() {
            if mask.count_ones() < 3 {
                continue;
            }
            let top = 31 - mask.leading_zeros();
            let rest = mask & !(1 << top);
            materialize.insert(rest);
            if needed.insert(rest) {
                frontier.push(rest);
            }
        }

        let mut by_popcount: Vec<u32> = needed.into_iter().collect();
        by_popcount.sort_by_key(|m| (m.count_ones(), *m));

        let mut store_of: std::collections::HashMap<u32, usize> = Default::default();
        let mut store_count = 0;
        let mut ops = Vec::with_capacity(by_popcount.len());
        for mask in by_popcount {
            let store = if materialize.contains(&mask) {
                let idx = store_count;
                store_count += 1;
                store_of.insert(mask, idx);
                Some(idx)
            } else {
                None
            };
            let top = 31 - mask.leading_zeros();
            let rest = mask & !(1 << top);
            if rest.count_ones() == 1 {
                ops.push(TailOp::Pair {
                    mask,
                    a: rest.trailing_zeros() as usize,
                    b: top as usize,
                    store,
                });
            } else {
                ops.push(TailOp::Extend {
                    mask,
                    base: store_of[&rest],
                    member: top as usize,
                    store,
                });
            }
        }

        TailEvaluator {
            tail_len,
            terms,
            ops,
            store_count,
        }
    }

    pub fn tail_len(&self) -> usize {
        self.tail_len
    }

    pub fn scratch(&self) -> TailScratch {
        TailScratch {
            stores: vec![Vec::new(); self.store_count],
        }
    }

    /// Evaluates |S_IEP| where S_i = sets[i] minus the prefix-bound vertices
    /// in `excluded`. Only count merges run unless a 3-way-or-deeper
    /// component needs an intermediate intersection.
    pub fn evaluate(
        &self,
        sets: &[&[u32]],
        excluded: &[u32],
        scratch: &mut TailScratch,
        merges: &mut u64,
    ) -> Result<i64> {
        debug_assert_eq!(sets.len(), self.tail_len);
        let mut cards = [0i64; 1 << 7];
        for (i, s) in sets.iter().enumerate() {
            let hits = excluded
                .iter()
                .filter(|&&b| s.binary_search(&b).is_ok())
                .count();
            let card = (s.len() - hits) as i64;
            if card == 0 {
                return Ok(0); // empty factor in the universe product
            }
            cards[1 << i] = card;
        }

        for op in &self.ops {
            match *op {
                TailOp::Pair { mask, a, b, store } => {
                    *merges += 1;
                    match store {
                        Some(idx) => {
                            let mut buf = std::mem::take(&mut scratch.stores[idx]);
                            merge_excluding_into(sets[a], sets[b], excluded, &mut buf);
                            cards[mask as usize] = buf.len() as i64;
                            scratch.stores[idx] = buf;
                        }
                        None => {
                            cards[mask as usize] =
                                count_common_excluding(sets[a], sets[b], excluded) as i64;
                        }
                    }
                }
                TailOp::Extend {
                    mask,
                    base,
                    member,
                    store,
                } => {
                    *merges += 1;
                    match store {
                        Some(idx) => {
                            let base_buf = std::mem::take(&mut scratch.stores[base]);
                            let mut buf = std::mem::take(&mut scratch.stores[idx]);
                            // the base already excludes the prefix
                            crate::graph::intersect_adaptive_into(
                                &base_buf,
                                sets[member],
                                &mut buf,
                            );
                            cards[mask as usize] = buf.len() as i64;
                            scratch.stores[idx] = buf;
                            scratch.stores[base] = base_buf;
                        }
                        None => {
                            cards[mask as usize] =
                                count_common(&scratch.stores[base], sets[member]) as i64;
                        }
                    }
                }
            }
        }

        let mut total: i64 = 0;
        for (coef, masks) in &self.terms {
            let mut term = *coef;
            for &m in masks {
                term = term
                    .checked_mul(cards[m as usize])
                    .ok_or(Error::Overflow)?;
            }
            total = total.checked_add(term).ok_or(Error::Overflow)?;
        }
        Ok(total)
    }
}

/// Number of common elements of two ascending slices, skipping `excluded`
/// values; probes the larger side when the sizes are lopsided.
pub(crate) fn count_common_excluding(a: &[u32], b: &[u32], excluded: &[u32]) -> u64 {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut count = 0u64;
    if small.len() * 16 < large.len() {
        let mut rest = large;
        for &x in small {
            let pos = rest.partition_point(|&y| y < x);
            if pos < rest.len() && rest[pos] == x {
                if !excluded.contains(&x) {
                    count += 1;
                }
                rest = &rest[pos + 1..];
            } else {
                rest = &rest[pos..];
            }
        }
    } else {
        let (mut i, mut j) = (0, 0);
        while i < small.len() && j < large.len() {
            match small[i].cmp(&large[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if !excluded.contains(&small[i]) {
                        count += 1;
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    count
}

pub(crate) fn count_common(a: &[u32], b: &[u32]) -> u64 {
    count_common_excluding(a, b, &[])
}

fn merge_excluding_into(a: &[u32], b: &[u32], excluded: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if !excluded.contains(&a[i]) {
                    out.push(a[i]);
                }
                i += 1;
                j += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_pair_of_sets() {
        let s: Vec<u32> = vec![1, 2, 3, 4, 5];
        let sets = [s.clone(), s.clone()];
        let refs: Vec<&[u32]> = sets.iter().map(|v| v.as_slice()).collect();
        assert_eq!(distinct_tuple_count(&refs).unwrap(), 25 - 5);
    }

    #[test]
    fn disjoint_triple_is_plain_product() {
        let a: Vec<u32> = vec![1, 2];
        let b: Vec<u32> = vec![10, 11, 12];
        let c: Vec<u32> = vec![20];
        let refs: Vec<&[u32]> = vec![&a, &b, &c];
        assert_eq!(distinct_tuple_count(&refs).unwrap(), 6);
    }

    #[test]
    fn worked_component_example() {
        // pairs {(0,1),(1,2),(3,4)} over six sets: |S0∩S1∩S2| * |S3∩S4| * |S5|
        let sets: Vec<Vec<u32>> = vec![
            vec![1, 2, 3, 4],
            vec![2, 3, 4, 5],
            vec![3, 4, 9],
            vec![1, 7, 8],
            vec![7, 8, 9],
            vec![1, 2, 3],
        ];
        let refs: Vec<&[u32]> = sets.iter().map(|v| v.as_slice()).collect();
        let got = event_intersection_cardinality(&[(0, 1), (1, 2), (3, 4)], &refs);
        assert_eq!(got, 2 * 2 * 3);
    }

    #[test]
    fn no_pairs_gives_universe_size() {
        let sets: Vec<Vec<u32>> = vec![vec![1, 2], vec![3], vec![4, 5, 6]];
        let refs: Vec<&[u32]> = sets.iter().map(|v| v.as_slice()).collect();
        assert_eq!(event_intersection_cardinality(&[], &refs), 6);
    }

    #[test]
    fn all_pairs_gives_full_intersection() {
        let sets: Vec<Vec<u32>> = vec![vec![1, 2, 3], vec![2, 3, 4], vec![3, 4, 5]];
        let refs: Vec<&[u32]> = sets.iter().map(|v| v.as_slice()).collect();
        assert_eq!(
            event_intersection_cardinality(&[(0, 1), (0, 2), (1, 2)], &refs),
            1
        );
    }

    fn brute_force_distinct(sets: &[Vec<u32>], excluded: &[u32]) -> i64 {
        fn rec(sets: &[Vec<u32>], excluded: &[u32], chosen: &mut Vec<u32>, depth: usize) -> i64 {
            if depth == sets.len() {
                return 1;
            }
            let mut total = 0;
            for &v in &sets[depth] {
                if !chosen.contains(&v) && !excluded.contains(&v) {
                    chosen.push(v);
                    total += rec(sets, excluded, chosen, depth + 1);
                    chosen.pop();
                }
            }
            total
        }
        rec(sets, excluded, &mut Vec::new(), 0)
    }

    #[test]
    fn matches_brute_force_on_random_sets() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(123);
        for t in 2..=5usize {
            let evaluator = TailEvaluator::new(t);
            let mut scratch = evaluator.scratch();
            for round in 0..40 {
                let sets: Vec<Vec<u32>> = (0..t)
                    .map(|_| {
                        let len = rng.gen_range(0..8);
                        let mut s: Vec<u32> =
                            (0..len).map(|_| rng.gen_range(0..14u32)).collect();
                        s.sort_unstable();
                        s.dedup();
                        s
                    })
                    .collect();
                let excluded: Vec<u32> = if round % 2 == 0 {
                    vec![rng.gen_range(0..14u32), 99]
                } else {
                    Vec::new()
                };

                let expected = brute_force_distinct(&sets, &excluded);

                // reference path on pre-filtered sets
                let filtered: Vec<Vec<u32>> = sets
                    .iter()
                    .map(|s| {
                        s.iter()
                            .copied()
                            .filter(|v| !excluded.contains(v))
                            .collect()
                    })
                    .collect();
                let refs: Vec<&[u32]> = filtered.iter().map(|v| v.as_slice()).collect();
                assert_eq!(distinct_tuple_count(&refs).unwrap(), expected);

                // engine path with on-the-fly exclusion
                let raw_refs: Vec<&[u32]> = sets.iter().map(|v| v.as_slice()).collect();
                let mut merges = 0u64;
                assert_eq!(
                    evaluator
                        .evaluate(&raw_refs, &excluded, &mut scratch, &mut merges)
                        .unwrap(),
                    expected
                );
            }
        }
    }
}
