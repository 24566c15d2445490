//! Plan execution: nested-loop interpretation of a configuration over a
//! graph, with sorted-merge intersections, restriction pruning, optional
//! inclusion-exclusion tail counting, and a work-stealing parallel runtime.

pub mod iep;
mod parallel;

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::graph::{intersect_sorted_in_place, Graph};
use crate::pattern::{automorphisms, Pattern};
use crate::restriction::{no_conflict, Restriction, RestrictionSet};
use crate::schedule::Configuration;

/// Whether the engine counts embeddings or also lists them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Count,
    List,
}

#[derive(Debug, Clone)]
pub struct MatchOptions {
    pub mode: Mode,
    pub iep: bool,
    pub workers: usize,
    /// Outer-loop depth packed into parallel tasks; defaults to 2 for
    /// patterns with at least 4 vertices, 1 otherwise.
    pub prefix_depth: Option<usize>,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions {
            mode: Mode::Count,
            iep: false,
            workers: 1,
            prefix_depth: None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct MatchStats {
    /// Tasks claimed from the pool (0 for a single-threaded run).
    pub tasks: u64,
    /// Sorted-merge passes performed.
    pub intersections: u64,
    pub wall: Duration,
}

#[derive(Debug, Clone)]
pub struct MatchResult {
    pub count: u64,
    /// One assignment per embedding, data-vertex ids in schedule order;
    /// present in listing mode only.
    pub embeddings: Option<Vec<Vec<u32>>>,
    pub stats: MatchStats,
}

/// Number of automorphisms the outer-loop restrictions fail to eliminate
/// once the innermost `tail_len` loops lose their restrictions; the raw
/// inclusion-exclusion count divides by this factor.
pub fn iep_correction_factor(pattern: &Pattern, config: &Configuration, tail_len: usize) -> u64 {
    let outer_set = outer_restrictions(config, tail_len);
    automorphisms(pattern)
        .perms()
        .iter()
        .filter(|p| no_conflict(p, &outer_set))
        .count() as u64
}

fn outer_restrictions(config: &Configuration, tail_len: usize) -> RestrictionSet {
    let n = config.loop_plan.loops.len();
    let outer: Vec<Restriction> = config.loop_plan.loops[..n - tail_len]
        .iter()
        .flat_map(|step| step.restrictions.iter().copied())
        .collect();
    RestrictionSet::new(outer)
}

/// The exact overcount multiplicity of a raw inclusion-exclusion run: every
/// embedding orbit must contribute the same number of assignments satisfying
/// the surviving outer restrictions, or the division is undefined.
///
/// For a ranking r of the pattern vertices, the orbit whose representative
/// induces r contributes |{q in Aut : r satisfies q(outer)}| assignments.
/// When that count is the same for all n! rankings it is the divisor; when
/// it varies the configuration cannot be corrected and the caller falls
/// back to plain counting.
fn orbit_constancy_factor(
    pattern: &Pattern,
    config: &Configuration,
    tail_len: usize,
) -> Option<u64> {
    let n = pattern.vertex_count();
    let outer = outer_restrictions(config, tail_len);
    let group = automorphisms(pattern);
    if outer.is_empty() {
        return Some(group.order() as u64);
    }
    let n_fact: u64 = (1..=n as u64).product();
    if n_fact
        .saturating_mul(group.order() as u64)
        .saturating_mul(outer.len() as u64)
        > 200_000_000
    {
        return None; // scan too large; skip the optimization
    }

    // precompute each automorphism's image of the outer restrictions
    let images: Vec<Vec<(usize, usize)>> = group
        .perms()
        .iter()
        .map(|q| {
            outer
                .restrictions()
                .iter()
                .map(|r| (q.apply(r.greater), q.apply(r.lesser)))
                .collect()
        })
        .collect();

    let mut ranks: Vec<usize> = (0..n).collect();
    let mut factor: Option<u64> = None;
    if scan_rankings(&mut ranks, 0, &images, &mut factor) {
        factor
    } else {
        None
    }
}

fn scan_rankings(
    ranks: &mut Vec<usize>,
    k: usize,
    images: &[Vec<(usize, usize)>],
    factor: &mut Option<u64>,
) -> bool {
    if k == ranks.len() {
        let c = images
            .iter()
            .filter(|image| image.iter().all(|&(a, b)| ranks[a] > ranks[b]))
            .count() as u64;
        return match *factor {
            None => {
                *factor = Some(c);
                true
            }
            Some(x) => x == c,
        };
    }
    for i in k..ranks.len() {
        ranks.swap(k, i);
        let ok = scan_rankings(ranks, k + 1, images, factor);
        ranks.swap(k, i);
        if !ok {
            return false;
        }
    }
    true
}

/// Executes a configuration over a graph.
pub fn run(
    graph: &Graph,
    pattern: &Pattern,
    config: &Configuration,
    opts: &MatchOptions,
) -> Result<MatchResult> {
    let start = Instant::now();
    let plan = ExecPlan::compile(graph, pattern, config, opts)?;
    let workers = opts.workers.max(1);

    let outcome = if workers == 1 {
        let mut ctx = Ctx::new(&plan);
        descend(&plan, &mut ctx, 0)?;
        RunOutcome {
            raw_count: ctx.raw_count,
            embeddings: ctx.embeddings,
            merges: ctx.merges,
            tasks: 0,
        }
    } else {
        let depth = effective_prefix_depth(&plan, pattern, opts)?;
        parallel::run(&plan, workers, depth)?
    };

    if plan.x == 0 || outcome.raw_count % plan.x != 0 {
        return Err(Error::Internal(format!(
            "raw count {} not divisible by correction factor {}",
            outcome.raw_count, plan.x
        )));
    }
    Ok(MatchResult {
        count: outcome.raw_count / plan.x,
        embeddings: outcome.embeddings,
        stats: MatchStats {
            tasks: outcome.tasks,
            intersections: outcome.merges,
            wall: start.elapsed(),
        },
    })
}

fn effective_prefix_depth(
    plan: &ExecPlan<'_>,
    pattern: &Pattern,
    opts: &MatchOptions,
) -> Result<usize> {
    let n = pattern.vertex_count();
    let requested = match opts.prefix_depth {
        Some(d) => {
            if d < 1 || d > n - 1 {
                return Err(Error::Usage(format!(
                    "prefix depth {d} outside [1, {}]",
                    n - 1
                )));
            }
            d
        }
        None => {
            if n >= 4 {
                2
            } else {
                1
            }
        }
    };
    // never partition past the loops that exist outside the IEP tail
    let cap = if plan.tail_len >= 2 {
        n - plan.tail_len
    } else {
        n - 1
    };
    Ok(requested.min(cap).max(1))
}

pub(crate) struct RunOutcome {
    pub raw_count: u64,
    pub embeddings: Option<Vec<Vec<u32>>>,
    pub merges: u64,
    pub tasks: u64,
}

#[derive(Debug, Clone, Copy)]
enum Source {
    /// Every data vertex (outermost loop).
    All,
    /// Neighborhood of the value bound at a position.
    Neigh(usize),
    /// A materialized intersection buffer.
    Slot(usize),
}

#[derive(Debug, Clone)]
struct ExecBuild {
    target: usize,
    slot: usize,
    inputs: Vec<usize>,
}

#[derive(Debug, Clone)]
struct ExecLoop {
    source: Source,
    builds: Vec<ExecBuild>,
    lower: Vec<usize>,
    upper: Vec<usize>,
}

pub(crate) struct ExecPlan<'g> {
    graph: &'g Graph,
    n: usize,
    loops: Vec<ExecLoop>,
    slot_count: usize,
    /// Innermost loops replaced by inclusion-exclusion (0 = disabled).
    tail_len: usize,
    x: u64,
    evaluator: Option<iep::TailEvaluator>,
    /// Input positions of an innermost intersection evaluated as a count
    /// merge instead of being materialized (counting mode only).
    fused_leaf: Option<[usize; 2]>,
    list: bool,
}

impl<'g> ExecPlan<'g> {
    fn compile(
        graph: &'g Graph,
        pattern: &Pattern,
        config: &Configuration,
        opts: &MatchOptions,
    ) -> Result<ExecPlan<'g>> {
        if opts.iep && opts.mode == Mode::List {
            return Err(Error::Usage(
                "inclusion-exclusion counting cannot list embeddings".into(),
            ));
        }
        if opts.iep && pattern.independence_number() < 2 {
            return Err(Error::Usage(
                "inclusion-exclusion counting needs at least 2 pairwise-nonadjacent \
                 pattern vertices"
                    .into(),
            ));
        }

        let n = pattern.vertex_count();
        let plan = &config.loop_plan;
        let mut x = 1u64;
        let mut tail_len = 0usize;
        if opts.iep {
            let t = plan.independent_tail_len(pattern);
            if t >= 2 {
                // a well-defined correction factor is required; without one
                // the run silently stays on the plain counting path
                if let Some(factor) = orbit_constancy_factor(pattern, config, t) {
                    tail_len = t;
                    x = factor;
                }
            }
        }

        let mut slot_of = vec![usize::MAX; n];
        let mut slot_count = 0;
        for (i, step) in plan.loops.iter().enumerate() {
            if step.recipe.len() >= 2 {
                slot_of[i] = slot_count;
                slot_count += 1;
            }
        }

        let mut loops: Vec<ExecLoop> = plan
            .loops
            .iter()
            .enumerate()
            .map(|(i, step)| {
                let source = match step.recipe.len() {
                    0 => Source::All,
                    1 => Source::Neigh(step.recipe[0]),
                    _ => Source::Slot(slot_of[i]),
                };
                let builds = step
                    .builds
                    .iter()
                    .map(|b| ExecBuild {
                        target: b.target,
                        slot: slot_of[b.target],
                        inputs: b.inputs.clone(),
                    })
                    .collect();
                // restrictions in tail loops do not exist under IEP
                let in_tail = tail_len >= 2 && i >= n - tail_len;
                ExecLoop {
                    source,
                    builds,
                    lower: if in_tail { Vec::new() } else { step.lower_bounds.clone() },
                    upper: if in_tail { Vec::new() } else { step.upper_bounds.clone() },
                }
            })
            .collect();

        // an innermost 2-way intersection built one loop up is consumed
        // exactly once per build; counting runs merge-count it directly
        let mut fused_leaf = None;
        if opts.mode == Mode::Count && tail_len == 0 && n >= 2 {
            let leaf_recipe = &plan.loops[n - 1].recipe;
            if leaf_recipe.len() == 2 && leaf_recipe[1] == n - 2 {
                let inputs = [leaf_recipe[0], leaf_recipe[1]];
                loops[n - 2].builds.retain(|b| b.target != n - 1);
                fused_leaf = Some(inputs);
            }
        }

        Ok(ExecPlan {
            graph,
            n,
            loops,
            slot_count,
            tail_len,
            x,
            evaluator: if tail_len >= 2 {
                Some(iep::TailEvaluator::new(tail_len))
            } else {
                None
            },
            fused_leaf,
            list: opts.mode == Mode::List,
        })
    }
}

pub(crate) struct Ctx {
    bound: [u32; 8],
    slots: Vec<Vec<u32>>,
    tail_scratch: iep::TailScratch,
    raw_count: u64,
    embeddings: Option<Vec<Vec<u32>>>,
    merges: u64,
}

impl Ctx {
    pub(crate) fn new(plan: &ExecPlan<'_>) -> Ctx {
        Ctx {
            bound: [0; 8],
            slots: vec![Vec::new(); plan.slot_count],
            tail_scratch: plan
                .evaluator
                .as_ref()
                .map(|e| e.scratch())
                .unwrap_or_default(),
            raw_count: 0,
            embeddings: if plan.list { Some(Vec::new()) } else { None },
            merges: 0,
        }
    }
}

fn candidate_bounds(plan: &ExecPlan<'_>, ctx: &Ctx, depth: usize) -> (u32, u32) {
    let step = &plan.loops[depth];
    let mut lo = 0u32;
    let mut hi = u32::MAX;
    for &p in &step.lower {
        lo = lo.max(ctx.bound[p].saturating_add(1));
    }
    for &p in &step.upper {
        hi = hi.min(ctx.bound[p]);
    }
    (lo, hi)
}

fn run_build(plan: &ExecPlan<'_>, ctx: &mut Ctx, build: &ExecBuild) {
    let mut out = std::mem::take(&mut ctx.slots[build.slot]);
    let a = plan.graph.neighbors(ctx.bound[build.inputs[0]]);
    let b = plan.graph.neighbors(ctx.bound[build.inputs[1]]);
    crate::graph::intersect_adaptive_into(a, b, &mut out);
    ctx.merges += 1;
    for &p in &build.inputs[2..] {
        intersect_sorted_in_place(&mut out, plan.graph.neighbors(ctx.bound[p]));
        ctx.merges += 1;
    }
    ctx.slots[build.slot] = out;
}

pub(crate) fn run_prefix_builds(plan: &ExecPlan<'_>, ctx: &mut Ctx, depth: usize) {
    for d in 0..depth {
        for i in 0..plan.loops[d].builds.len() {
            let build = plan.loops[d].builds[i].clone();
            if build.target >= depth {
                run_build(plan, ctx, &build);
            }
        }
    }
}

/// Core nested-loop interpreter from `depth` downward.
pub(crate) fn descend(plan: &ExecPlan<'_>, ctx: &mut Ctx, depth: usize) -> Result<()> {
    let n = plan.n;

    if plan.tail_len >= 2 && depth == n - plan.tail_len {
        return evaluate_tail(plan, ctx);
    }

    if depth == n {
        // reached only in listing mode
        let assignment = ctx.bound[..n].to_vec();
        debug_assert!(all_distinct(&assignment));
        ctx.raw_count += 1;
        if let Some(embeddings) = &mut ctx.embeddings {
            embeddings.push(assignment);
        }
        return Ok(());
    }

    let (lo, hi) = candidate_bounds(plan, ctx, depth);
    if lo >= hi {
        return Ok(());
    }
    let counting_leaf = depth == n - 1 && !plan.list && plan.tail_len == 0;

    if counting_leaf {
        if let Some(inputs) = plan.fused_leaf {
            let a = clamp_slice(plan.graph.neighbors(ctx.bound[inputs[0]]), lo, hi);
            let b = clamp_slice(plan.graph.neighbors(ctx.bound[inputs[1]]), lo, hi);
            ctx.raw_count += iep::count_common_excluding(a, b, &ctx.bound[..depth]);
            ctx.merges += 1;
            return Ok(());
        }
    }

    match plan.loops[depth].source {
        Source::All => {
            let end = hi.min(plan.graph.vertex_count() as u32);
            if counting_leaf {
                if end > lo {
                    let mut cnt = (end - lo) as u64;
                    for p in 0..depth {
                        let b = ctx.bound[p];
                        if b >= lo && b < end {
                            cnt -= 1;
                        }
                    }
                    ctx.raw_count += cnt;
                }
                return Ok(());
            }
            for v in lo..end {
                step_candidate(plan, ctx, depth, v)?;
            }
        }
        Source::Neigh(pos) => {
            let owner = ctx.bound[pos];
            let slice = plan.graph.neighbors(owner);
            let start = slice.partition_point(|&x| x < lo);
            let end = start + slice[start..].partition_point(|&x| x < hi);
            if counting_leaf {
                ctx.raw_count += clamped_count(slice, start, end, &ctx.bound[..depth]);
                return Ok(());
            }
            for idx in start..end {
                let v = slice[idx];
                step_candidate(plan, ctx, depth, v)?;
            }
        }
        Source::Slot(slot) => {
            let start = ctx.slots[slot].partition_point(|&x| x < lo);
            let end = start + ctx.slots[slot][start..].partition_point(|&x| x < hi);
            if counting_leaf {
                ctx.raw_count += clamped_count(&ctx.slots[slot], start, end, &ctx.bound[..depth]);
                return Ok(());
            }
            for idx in start..end {
                // re-borrow per index: deeper recursion rebuilds other slots only
                let v = ctx.slots[slot][idx];
                step_candidate(plan, ctx, depth, v)?;
            }
        }
    }
    Ok(())
}

#[inline]
fn step_candidate(plan: &ExecPlan<'_>, ctx: &mut Ctx, depth: usize, v: u32) -> Result<()> {
    if ctx.bound[..depth].contains(&v) {
        return Ok(());
    }
    ctx.bound[depth] = v;
    for i in 0..plan.loops[depth].builds.len() {
        let build = plan.loops[depth].builds[i].clone();
        run_build(plan, ctx, &build);
    }
    descend(plan, ctx, depth + 1)
}

fn clamp_slice(slice: &[u32], lo: u32, hi: u32) -> &[u32] {
    let start = slice.partition_point(|&x| x < lo);
    let end = start + slice[start..].partition_point(|&x| x < hi);
    &slice[start..end]
}

/// Candidates surviving the clamp minus bound vertices inside the range.
fn clamped_count(slice: &[u32], start: usize, end: usize, bound: &[u32]) -> u64 {
    let window = &slice[start..end];
    let mut cnt = window.len() as u64;
    for &b in bound {
        if window.binary_search(&b).is_ok() {
            cnt -= 1;
        }
    }
    cnt
}

fn evaluate_tail(plan: &ExecPlan<'_>, ctx: &mut Ctx) -> Result<()> {
    let n = plan.n;
    let prefix_len = n - plan.tail_len;
    let Ctx {
        bound,
        slots,
        tail_scratch,
        raw_count,
        merges,
        ..
    } = ctx;

    let mut sets: [&[u32]; 8] = [&[]; 8];
    for j in 0..plan.tail_len {
        sets[j] = match plan.loops[prefix_len + j].source {
            Source::Neigh(pos) => plan.graph.neighbors(bound[pos]),
            Source::Slot(slot) => &slots[slot],
            // tail vertices of a connected pattern always have neighbors,
            // and those neighbors all sit in the prefix
            Source::All => {
                return Err(Error::Internal(
                    "inclusion-exclusion tail loop without a candidate recipe".into(),
                ))
            }
        };
    }

    let evaluator = plan.evaluator.as_ref().expect("tail implies evaluator");
    let value = evaluator.evaluate(
        &sets[..plan.tail_len],
        &bound[..prefix_len],
        tail_scratch,
        merges,
    )?;
    if value < 0 {
        return Err(Error::Internal(format!(
            "negative inclusion-exclusion tail count {value}"
        )));
    }
    *raw_count = raw_count.checked_add(value as u64).ok_or(Error::Overflow)?;
    Ok(())
}

#[allow(dead_code)]
fn all_distinct(assignment: &[u32]) -> bool {
    for i in 0..assignment.len() {
        for j in 0..i {
            if assignment[i] == assignment[j] {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::preset;
    use crate::restriction::{res_set_generation, GenOptions};
    use crate::schedule::{build_loop_plan, enumerate_configurations, Schedule};
    use crate::synth;

    fn config_for(
        pattern: &Pattern,
        order: Vec<usize>,
        rs: RestrictionSet,
    ) -> Configuration {
        let schedule = Schedule::new(order);
        Configuration {
            loop_plan: build_loop_plan(pattern, &schedule, &rs),
            schedule,
            restriction_set: rs,
            predicted_cost: None,
        }
    }

    fn count(graph: &Graph, pattern: &Pattern, config: &Configuration) -> u64 {
        run(graph, pattern, config, &MatchOptions::default())
            .unwrap()
            .count
    }

    #[test]
    fn triangle_on_k4_with_complete_set() {
        let pattern = preset("triangle").unwrap();
        let graph = synth::complete_graph(4);
        let rs = res_set_generation(&pattern, &GenOptions::default()).unwrap()[0].clone();
        let config = config_for(&pattern, vec![0, 1, 2], rs);
        assert_eq!(count(&graph, &pattern, &config), 4);
    }

    #[test]
    fn rectangle_on_k4_with_and_without_restrictions() {
        let pattern = preset("rectangle").unwrap();
        let graph = synth::complete_graph(4);
        let rs = res_set_generation(&pattern, &GenOptions::default()).unwrap()[0].clone();
        let restricted = config_for(&pattern, vec![0, 1, 2, 3], rs);
        assert_eq!(count(&graph, &pattern, &restricted), 3);
        let free = config_for(&pattern, vec![0, 1, 2, 3], RestrictionSet::empty());
        assert_eq!(count(&graph, &pattern, &free), 24);
    }

    #[test]
    fn pattern_larger_than_graph_counts_zero() {
        let pattern = preset("k5").unwrap();
        let graph = synth::complete_graph(4);
        let config = config_for(&pattern, vec![0, 1, 2, 3, 4], RestrictionSet::empty());
        assert_eq!(count(&graph, &pattern, &config), 0);
    }

    #[test]
    fn every_configuration_matches_oracle_on_er_graph() {
        let graph = synth::er_graph(25, 0.3, 17);
        for name in ["path3", "triangle", "rectangle", "house", "cycle6"] {
            let pattern = preset(name).unwrap();
            let expected = crate::oracle::embedding_count(&graph, &pattern).unwrap();
            let configs = enumerate_configurations(&pattern, &GenOptions::default()).unwrap();
            for config in &configs {
                assert_eq!(
                    count(&graph, &pattern, config),
                    expected,
                    "{name} schedule {:?} rs [{}]",
                    config.schedule.order(),
                    config.restriction_set
                );
            }
        }
    }

    #[test]
    fn listing_matches_count_and_embeddings_are_valid() {
        let graph = synth::er_graph(20, 0.35, 5);
        let pattern = preset("house").unwrap();
        let rs = res_set_generation(&pattern, &GenOptions::default()).unwrap()[0].clone();
        let config = config_for(&pattern, vec![0, 1, 2, 3, 4], rs);
        let listed = run(
            &graph,
            &pattern,
            &config,
            &MatchOptions {
                mode: Mode::List,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(listed.count, count(&graph, &pattern, &config));
        let embeddings = listed.embeddings.unwrap();
        assert_eq!(embeddings.len() as u64, listed.count);
        let order = config.schedule.order();
        for emb in &embeddings {
            // all distinct
            let mut sorted = emb.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), emb.len());
            // every pattern edge present under the assignment
            for (u, v) in pattern.edges() {
                let pu = order.iter().position(|&x| x == u).unwrap();
                let pv = order.iter().position(|&x| x == v).unwrap();
                assert!(graph.contains_edge(emb[pu], emb[pv]));
            }
        }
    }

    #[test]
    fn iep_equals_plain_counting_with_tail_restrictions() {
        let graph = synth::er_graph(40, 0.2, 77);
        let pattern = preset("house").unwrap();
        let sets = res_set_generation(&pattern, &GenOptions::default()).unwrap();
        let schedules = crate::schedule::generate_schedules(&pattern);
        let mut saw_nontrivial_x = false;
        for schedule in &schedules {
            for rs in &sets {
                let config = config_for(&pattern, schedule.order().to_vec(), rs.clone());
                let plain = count(&graph, &pattern, &config);
                let with_iep = run(
                    &graph,
                    &pattern,
                    &config,
                    &MatchOptions {
                        iep: true,
                        ..Default::default()
                    },
                )
                .unwrap()
                .count;
                assert_eq!(plain, with_iep, "rs [{rs}]");
                if iep_correction_factor(&pattern, &config, 2) > 1 {
                    saw_nontrivial_x = true;
                }
            }
        }
        assert!(saw_nontrivial_x, "no configuration exercised x > 1");
    }

    #[test]
    fn correction_factor_cases() {
        let pattern = preset("house").unwrap();
        let group_order = automorphisms(&pattern).order() as u64;

        // restriction between the two mirror-square vertices stays outer
        let outer_rs = RestrictionSet::new(vec![Restriction {
            greater: 0,
            lesser: 1,
        }]);
        let config = config_for(&pattern, vec![0, 1, 2, 3, 4], outer_rs);
        assert_eq!(iep_correction_factor(&pattern, &config, 2), 1);

        // no restrictions at all: every automorphism survives
        let free = config_for(&pattern, vec![0, 1, 2, 3, 4], RestrictionSet::empty());
        assert_eq!(iep_correction_factor(&pattern, &free, 2), group_order);

        // restriction on a tail vertex disappears under IEP
        let tail_rs = RestrictionSet::new(vec![Restriction {
            greater: 2,
            lesser: 3,
        }]);
        let tail_config = config_for(&pattern, vec![0, 1, 2, 3, 4], tail_rs);
        assert_eq!(
            iep_correction_factor(&pattern, &tail_config, 2),
            group_order
        );
    }

    #[test]
    fn iep_usage_errors() {
        let graph = synth::complete_graph(4);
        let triangle = preset("triangle").unwrap();
        let config = config_for(&triangle, vec![0, 1, 2], RestrictionSet::empty());
        let err = run(
            &graph,
            &triangle,
            &config,
            &MatchOptions {
                iep: true,
                ..Default::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::Usage(_)));

        let house = preset("house").unwrap();
        let config = config_for(&house, vec![0, 1, 2, 3, 4], RestrictionSet::empty());
        let err = run(
            &graph,
            &house,
            &config,
            &MatchOptions {
                iep: true,
                mode: Mode::List,
                ..Default::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::Usage(_)));
    }

    #[test]
    fn worker_and_depth_invariance() {
        let graph = synth::powerlaw_graph(600, 3000, 0.8, 9);
        for name in ["house", "cycle6", "prism"] {
            let pattern = preset(name).unwrap();
            let rs = res_set_generation(&pattern, &GenOptions::default()).unwrap()[0].clone();
            let schedule = crate::schedule::generate_schedules(&pattern)
                .into_iter()
                .next()
                .unwrap();
            let config = config_for(&pattern, schedule.order().to_vec(), rs);
            let baseline = count(&graph, &pattern, &config);
            for workers in [1usize, 2, 4, 8] {
                for depth in [1usize, 2] {
                    for iep in [false, true] {
                        let got = run(
                            &graph,
                            &pattern,
                            &config,
                            &MatchOptions {
                                workers,
                                prefix_depth: Some(depth),
                                iep,
                                ..Default::default()
                            },
                        )
                        .unwrap()
                        .count;
                        assert_eq!(
                            got, baseline,
                            "{name} workers={workers} depth={depth} iep={iep}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn parallel_listing_is_a_permutation_of_sequential() {
        let graph = synth::er_graph(22, 0.3, 31);
        let pattern = preset("rectangle").unwrap();
        let rs = res_set_generation(&pattern, &GenOptions::default()).unwrap()[0].clone();
        let config = config_for(&pattern, vec![0, 1, 2, 3], rs);
        let seq = run(
            &graph,
            &pattern,
            &config,
            &MatchOptions {
                mode: Mode::List,
                ..Default::default()
            },
        )
        .unwrap();
        let par = run(
            &graph,
            &pattern,
            &config,
            &MatchOptions {
                mode: Mode::List,
                workers: 4,
                ..Default::default()
            },
        )
        .unwrap();
        let mut a = seq.embeddings.unwrap();
        let mut b = par.embeddings.unwrap();
        assert_eq!(a.len(), b.len());
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn complete_set_times_group_order_equals_free_count() {
        let graph = synth::er_graph(25, 0.3, 2);
        for name in ["triangle", "rectangle", "house", "prism"] {
            let pattern = preset(name).unwrap();
            let group_order = automorphisms(&pattern).order() as u64;
            let schedule = crate::schedule::generate_schedules(&pattern)
                .into_iter()
                .next()
                .unwrap();
            let rs = res_set_generation(&pattern, &GenOptions::default()).unwrap()[0].clone();
            let restricted = config_for(&pattern, schedule.order().to_vec(), rs);
            let free = config_for(
                &pattern,
                schedule.order().to_vec(),
                RestrictionSet::empty(),
            );
            assert_eq!(
                count(&graph, &pattern, &restricted) * group_order,
                count(&graph, &pattern, &free),
                "{name}"
            );
        }
    }
}
