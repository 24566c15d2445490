//! Symmetry-breaking restriction sets.
//!
//! A restriction `a > b` keeps only embeddings whose data-vertex id at pattern
//! vertex `a` exceeds the id at `b`. A complete set of restrictions keeps
//! exactly one representative per automorphism orbit. Sets are generated by a
//! recursive search over the 2-cycles of the automorphism group: each branch
//! adds a restriction on a transposition, filters the group through the
//! conflict check, and recurses until only the identity survives.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::pattern::{automorphisms, Pattern, Permutation, PermutationGroup};

/// Ordered-pair constraint: data id of `greater` exceeds data id of `lesser`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Restriction {
    pub greater: usize,
    pub lesser: usize,
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{} > v{}", self.greater, self.lesser)
    }
}

/// Deduplicated restriction list in canonical (greater, lesser) order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RestrictionSet {
    restrictions: Vec<Restriction>,
}

impl RestrictionSet {
    pub fn new(mut restrictions: Vec<Restriction>) -> RestrictionSet {
        restrictions.sort();
        restrictions.dedup();
        RestrictionSet { restrictions }
    }

    pub fn empty() -> RestrictionSet {
        RestrictionSet::default()
    }

    pub fn restrictions(&self) -> &[Restriction] {
        &self.restrictions
    }

    pub fn len(&self) -> usize {
        self.restrictions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.restrictions.is_empty()
    }

    pub fn with(&self, extra: Restriction) -> RestrictionSet {
        let mut restrictions = self.restrictions.clone();
        restrictions.push(extra);
        RestrictionSet::new(restrictions)
    }

    /// The relation as a relation must be a strict partial order fragment.
    pub fn is_acyclic(&self) -> bool {
        let mut edges = Vec::with_capacity(self.restrictions.len());
        for r in &self.restrictions {
            edges.push((r.greater, r.lesser));
        }
        digraph_is_acyclic(&edges)
    }
}

impl fmt::Display for RestrictionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.restrictions.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Returns true when `perm` is NOT eliminated by `rs`: the directed graph
/// with edges (greater -> lesser) and (perm(greater) -> perm(lesser)) for
/// every restriction is acyclic. A cycle means the permuted copy of an
/// embedding would need contradictory id orderings, so the permutation is
/// dead.
pub fn no_conflict(perm: &Permutation, rs: &RestrictionSet) -> bool {
    let mut edges = Vec::with_capacity(rs.len() * 2);
    for r in rs.restrictions() {
        edges.push((r.greater, r.lesser));
        edges.push((perm.apply(r.greater), perm.apply(r.lesser)));
    }
    digraph_is_acyclic(&edges)
}

fn digraph_is_acyclic(edges: &[(usize, usize)]) -> bool {
    let mut succ = [0u8; 8];
    let mut nodes: u8 = 0;
    for &(a, b) in edges {
        succ[a] |= 1 << b;
        nodes |= (1 << a) | (1 << b);
    }
    // Kahn-style elimination on at most 8 nodes.
    let mut remaining = nodes;
    loop {
        let mut removed_any = false;
        let mut m = remaining;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            let mut has_incoming = false;
            let mut others = remaining & !(1 << v);
            while others != 0 {
                let u = others.trailing_zeros() as usize;
                others &= others - 1;
                if succ[u] & (1 << v) != 0 {
                    has_incoming = true;
                    break;
                }
            }
            if !has_incoming {
                remaining &= !(1 << v);
                removed_any = true;
            }
        }
        if remaining == 0 {
            return true;
        }
        if !removed_any {
            return false;
        }
    }
}

/// Number of the n! relative id orderings that satisfy every restriction.
/// An ordering assigns distinct ranks to pattern vertices; a restriction
/// `a > b` holds when rank(a) > rank(b).
pub fn satisfying_ordering_count(n: usize, rs: &RestrictionSet) -> u64 {
    let mut ranks: Vec<usize> = (0..n).collect();
    let mut count = 0u64;
    permute_count(&mut ranks, 0, rs, &mut count);
    count
}

fn permute_count(ranks: &mut Vec<usize>, k: usize, rs: &RestrictionSet, count: &mut u64) {
    if k == ranks.len() {
        let ok = rs
            .restrictions()
            .iter()
            .all(|r| ranks[r.greater] > ranks[r.lesser]);
        if ok {
            *count += 1;
        }
        return;
    }
    for i in k..ranks.len() {
        ranks.swap(k, i);
        permute_count(ranks, k + 1, rs, count);
        ranks.swap(k, i);
    }
}

/// Completeness check: on the complete graph K_n every injective assignment
/// is an embedding, so a matcher with `rs` finds exactly the assignments
/// whose relative id order satisfies the set, and a matcher without
/// restrictions finds all n! of them. The set is complete when
/// with = without / |Aut| holds as an exact integer identity.
pub fn validate(pattern: &Pattern, group: &PermutationGroup, rs: &RestrictionSet) -> bool {
    let n = pattern.vertex_count();
    let without: u64 = (1..=n as u64).product();
    let aut = group.order() as u64;
    if without % aut != 0 {
        return false;
    }
    satisfying_ordering_count(n, rs) == without / aut
}

/// Options for the restriction-set search.
#[derive(Debug, Clone, Copy)]
pub struct GenOptions {
    /// Stop after this many distinct valid sets (in discovery order).
    pub max_sets: usize,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions { max_sets: 64 }
    }
}

/// Generates every distinct complete restriction set (up to the configured
/// cap), canonically sorted. Patterns with a trivial automorphism group get
/// a single empty set.
pub fn res_set_generation(pattern: &Pattern, options: &GenOptions) -> Result<Vec<RestrictionSet>> {
    let group = automorphisms(pattern);
    res_set_generation_with_group(pattern, &group, options)
}

pub fn res_set_generation_with_group(
    pattern: &Pattern,
    group: &PermutationGroup,
    options: &GenOptions,
) -> Result<Vec<RestrictionSet>> {
    if group.order() == 1 {
        return Ok(vec![RestrictionSet::empty()]);
    }

    let mut search = Search {
        pattern,
        options: *options,
        visited: HashSet::new(),
        found: Vec::new(),
        emitted: HashSet::new(),
    };
    let all: Vec<Permutation> = group.perms().to_vec();
    search.generate(&all, &RestrictionSet::empty(), group);

    if search.found.is_empty() {
        return Err(Error::Generation(format!(
            "no valid restriction set found for a pattern with {} automorphisms",
            group.order()
        )));
    }
    let mut sets = search.found;
    sets.sort();
    Ok(sets)
}

struct Search<'a> {
    pattern: &'a Pattern,
    options: GenOptions,
    visited: HashSet<RestrictionSet>,
    found: Vec<RestrictionSet>,
    emitted: HashSet<RestrictionSet>,
}

impl Search<'_> {
    fn generate(
        &mut self,
        pg: &[Permutation],
        res_set: &RestrictionSet,
        group: &PermutationGroup,
    ) {
        if self.found.len() >= self.options.max_sets {
            return;
        }
        if pg.len() <= 1 {
            if validate(self.pattern, group, res_set) && self.emitted.insert(res_set.clone()) {
                self.found.push(res_set.clone());
            }
            return;
        }
        for perm in pg {
            for (v, w) in perm.two_cycles() {
                // branch on both orientations; the validator is the arbiter
                for (greater, lesser) in [(v, w), (w, v)] {
                    let new_set = res_set.with(Restriction { greater, lesser });
                    if new_set.len() == res_set.len() {
                        continue; // restriction already present
                    }
                    if !new_set.is_acyclic() {
                        continue; // contradictory relation, can never validate
                    }
                    if !self.visited.insert(new_set.clone()) {
                        continue;
                    }
                    let remaining: Vec<Permutation> = pg
                        .iter()
                        .filter(|p| no_conflict(p, &new_set))
                        .cloned()
                        .collect();
                    self.generate(&remaining, &new_set, group);
                    if self.found.len() >= self.options.max_sets {
                        return;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::preset;

    fn r(greater: usize, lesser: usize) -> Restriction {
        Restriction { greater, lesser }
    }

    #[test]
    fn rectangle_rotation_is_eliminated_by_paper_pair() {
        // rectangle preset: cycle 0-1-2-3; rotation by one step
        let rotation = Permutation::new(vec![1, 2, 3, 0]).unwrap();
        let rs = RestrictionSet::new(vec![r(1, 3), r(0, 2)]);
        assert!(!no_conflict(&rotation, &rs));
    }

    #[test]
    fn identity_never_conflicts_with_acyclic_sets() {
        let id = Permutation::identity(4);
        let rs = RestrictionSet::new(vec![r(0, 1), r(1, 2), r(0, 3)]);
        assert!(no_conflict(&id, &rs));
    }

    #[test]
    fn mirror_eliminated_by_its_own_two_cycle() {
        let mirror = Permutation::new(vec![0, 3, 2, 1]).unwrap();
        let rs = RestrictionSet::new(vec![r(1, 3)]);
        assert!(!no_conflict(&mirror, &rs));
    }

    #[test]
    fn triangle_validation_examples() {
        let pattern = preset("triangle").unwrap();
        let group = automorphisms(&pattern);
        let chain = RestrictionSet::new(vec![r(0, 1), r(1, 2)]);
        assert!(validate(&pattern, &group, &chain));
        let half = RestrictionSet::new(vec![r(0, 1)]);
        assert!(!validate(&pattern, &group, &half));
    }

    #[test]
    fn triangle_sets_all_validate_and_pin_single_orderings() {
        let pattern = preset("triangle").unwrap();
        let group = automorphisms(&pattern);
        let sets = res_set_generation(&pattern, &GenOptions::default()).unwrap();
        assert!(!sets.is_empty());
        for set in &sets {
            assert!(validate(&pattern, &group, set), "{set}");
            assert_eq!(satisfying_ordering_count(3, set), 1);
        }
        // the classic two-restriction chains are among the outputs
        assert!(sets.contains(&RestrictionSet::new(vec![r(0, 1), r(1, 2)])));
    }

    #[test]
    fn path_pattern_single_swap() {
        let pattern = preset("path3").unwrap();
        let sets = res_set_generation(&pattern, &GenOptions::default()).unwrap();
        assert_eq!(
            sets,
            vec![
                RestrictionSet::new(vec![r(0, 2)]),
                RestrictionSet::new(vec![r(2, 0)]),
            ]
        );
    }

    #[test]
    fn rectangle_emits_multiple_distinct_sets() {
        let pattern = preset("rectangle").unwrap();
        let group = automorphisms(&pattern);
        let sets = res_set_generation(&pattern, &GenOptions::default()).unwrap();
        assert!(sets.len() >= 2, "got {}", sets.len());
        for set in &sets {
            assert!(validate(&pattern, &group, set), "{set}");
            // complete elimination of every non-identity automorphism
            for p in group.perms() {
                if !p.is_identity() {
                    assert!(!no_conflict(p, set), "{p} survives {set}");
                }
            }
        }
    }

    #[test]
    fn asymmetric_pattern_gets_single_empty_set() {
        // path 0-1-2-3-4-5 with chord 1-3: the two degree-3 vertices have
        // different neighbor-degree profiles, so the group is trivial
        let pattern = Pattern::parse("6:0-1,1-2,2-3,3-4,4-5,1-3").unwrap();
        let group = automorphisms(&pattern);
        assert_eq!(group.order(), 1);
        let sets = res_set_generation(&pattern, &GenOptions::default()).unwrap();
        assert_eq!(sets, vec![RestrictionSet::empty()]);
    }

    #[test]
    fn orbit_identity_holds_for_suite() {
        for (name, pattern) in crate::pattern::suite() {
            let group = automorphisms(&pattern);
            let n = pattern.vertex_count();
            let n_fact: u64 = (1..=n as u64).product();
            let sets = res_set_generation(&pattern, &GenOptions::default()).unwrap();
            for set in &sets {
                assert_eq!(
                    satisfying_ordering_count(n, set) * group.order() as u64,
                    n_fact,
                    "{name}: {set}"
                );
            }
        }
    }

    #[test]
    fn cap_limits_output() {
        let pattern = preset("k5").unwrap();
        let sets = res_set_generation(&pattern, &GenOptions { max_sets: 7 }).unwrap();
        assert_eq!(sets.len(), 7);
    }

    #[test]
    fn display_forms() {
        let rs = RestrictionSet::new(vec![r(2, 0), r(1, 0)]);
        assert_eq!(rs.to_string(), "v1 > v0, v2 > v0");
    }
}
