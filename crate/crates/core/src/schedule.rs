//! Schedule generation and loop planning.
//!
//! A schedule fixes the order in which pattern vertices are bound. Two
//! filters keep only efficient orders:
//!
//! * Phase 1 — every prefix of the order must induce a connected subgraph,
//!   so no loop after the first ever scans the whole vertex set.
//! * Phase 2 — the last searched vertices must form a pairwise-nonadjacent
//!   tail, so no intersection work happens in the innermost loops (and the
//!   tail becomes eligible for inclusion-exclusion counting).
//!
//! Phase 2 targets a single deterministically chosen tail set: the
//! lexicographically greatest independent set of the largest size whose
//! complement stays connected. For patterns where no independent pair can
//! terminate a connected-prefix order (pure cycles are the canonical case)
//! the tail requirement is dropped rather than emptying the schedule set.

use std::fmt::Write as _;

use crate::error::Result;
use crate::pattern::Pattern;
use crate::restriction::{GenOptions, Restriction, RestrictionSet};

/// Order in which pattern vertices are searched: `order[i]` is bound by loop i.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Schedule {
    order: Vec<usize>,
}

impl Schedule {
    pub fn new(order: Vec<usize>) -> Schedule {
        Schedule { order }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Loop position of a pattern vertex.
    pub fn position_of(&self, vertex: usize) -> usize {
        self.order.iter().position(|&v| v == vertex).unwrap()
    }
}

/// An intersection materialized while executing some loop: the candidate set
/// for a later loop, computed as soon as all its inputs are bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Build {
    /// Loop whose candidate set this produces.
    pub target: usize,
    /// Earlier loop positions whose neighborhoods are merged.
    pub inputs: Vec<usize>,
}

/// Per-loop execution recipe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopStep {
    /// Pattern vertex bound by this loop.
    pub pattern_vertex: usize,
    /// Earlier positions whose data vertices' neighborhoods are intersected
    /// to form this loop's candidate set; empty only for loop 0.
    pub recipe: Vec<usize>,
    /// Intersections computed inside this loop's body (for later loops).
    pub builds: Vec<Build>,
    /// Restrictions checked in this loop.
    pub restrictions: Vec<Restriction>,
    /// Positions whose bound value is a strict lower bound for candidates.
    pub lower_bounds: Vec<usize>,
    /// Positions whose bound value is a strict upper bound for candidates.
    pub upper_bounds: Vec<usize>,
}

/// Complete per-loop recipe for one (schedule, restriction set) pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopPlan {
    pub loops: Vec<LoopStep>,
}

impl LoopPlan {
    /// Length of the maximal pattern-nonadjacent suffix of the schedule:
    /// the number of innermost loops whose candidate sets depend only on
    /// outer loops.
    pub fn independent_tail_len(&self, pattern: &Pattern) -> usize {
        let n = self.loops.len();
        let mut tail = 0;
        'outer: for i in (0..n).rev() {
            let v = self.loops[i].pattern_vertex;
            for step in &self.loops[i + 1..] {
                if pattern.adjacent(v, step.pattern_vertex) {
                    break 'outer;
                }
            }
            tail = n - i;
        }
        tail
    }
}

/// A schedule plus a restriction set plus the derived loop plan: everything
/// the executor needs, with the model's predicted cost filled in later.
#[derive(Debug, Clone)]
pub struct Configuration {
    pub schedule: Schedule,
    pub restriction_set: RestrictionSet,
    pub loop_plan: LoopPlan,
    pub predicted_cost: Option<f64>,
}

/// All orders passing both filter phases, in lexicographic order.
pub fn generate_schedules(pattern: &Pattern) -> Vec<Schedule> {
    let n = pattern.vertex_count();
    let tail = chosen_tail(pattern);
    let mut out = Vec::new();
    let mut order = Vec::with_capacity(n);
    let mut used = vec![false; n];
    enumerate_orders(pattern, &tail, &mut order, &mut used, &mut out);
    out
}

fn enumerate_orders(
    pattern: &Pattern,
    tail: &Option<u8>,
    order: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Schedule>,
) {
    let n = pattern.vertex_count();
    if order.len() == n {
        out.push(Schedule::new(order.clone()));
        return;
    }
    'next: for v in 0..n {
        if used[v] {
            continue;
        }
        // Phase 1: every vertex after the first connects to an earlier one
        if !order.is_empty() && !order.iter().any(|&u| pattern.adjacent(u, v)) {
            continue;
        }
        // Phase 2: the last tail_len slots are reserved for the chosen tail
        if let Some(tail_mask) = tail {
            let tail_len = tail_mask.count_ones() as usize;
            let position = order.len();
            let in_tail = tail_mask & (1 << v) != 0;
            if position >= n - tail_len {
                if !in_tail {
                    continue 'next;
                }
            } else if in_tail {
                continue 'next;
            }
        }
        order.push(v);
        used[v] = true;
        enumerate_orders(pattern, tail, order, used, out);
        order.pop();
        used[v] = false;
    }
}

/// The tail set Phase 2 pins: the lexicographically greatest independent set
/// of the largest size t >= 2 whose complement induces a connected subgraph.
/// None when even no independent pair works (the filter is then vacuous).
pub fn chosen_tail_set(pattern: &Pattern) -> Option<Vec<usize>> {
    chosen_tail(pattern).map(|mask| {
        (0..pattern.vertex_count())
            .filter(|&v| mask & (1 << v) != 0)
            .collect()
    })
}

fn chosen_tail(pattern: &Pattern) -> Option<u8> {
    let n = pattern.vertex_count();
    let k = pattern.independence_number();
    let full: u8 = if n == 8 { 0xff } else { (1u8 << n) - 1 };
    for t in (2..=k).rev() {
        let mut best: Option<u8> = None;
        for mask in 0u16..(1u16 << n) {
            let mask = mask as u8;
            if mask.count_ones() as usize != t {
                continue;
            }
            if !pattern.is_independent_mask(mask) {
                continue;
            }
            if !pattern.is_connected_induced(full & !mask) {
                continue;
            }
            let candidate = sorted_vertices(mask, n);
            let better = match best {
                None => true,
                Some(b) => candidate > sorted_vertices(b, n),
            };
            if better {
                best = Some(mask);
            }
        }
        if best.is_some() {
            return best;
        }
    }
    None
}

fn sorted_vertices(mask: u8, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask & (1 << v) != 0).collect()
}

/// Derives the loop plan: candidate recipes from pattern adjacency, each
/// intersection materialized at the loop of its last input, and each
/// restriction checked at the loop of its later-scheduled endpoint.
pub fn build_loop_plan(
    pattern: &Pattern,
    schedule: &Schedule,
    rs: &RestrictionSet,
) -> LoopPlan {
    let n = pattern.vertex_count();
    let order = schedule.order();

    let mut loops: Vec<LoopStep> = (0..n)
        .map(|i| {
            let recipe: Vec<usize> = (0..i)
                .filter(|&j| pattern.adjacent(order[j], order[i]))
                .collect();
            LoopStep {
                pattern_vertex: order[i],
                recipe,
                builds: Vec::new(),
                restrictions: Vec::new(),
                lower_bounds: Vec::new(),
                upper_bounds: Vec::new(),
            }
        })
        .collect();

    // multi-input candidates are computed once their last input is bound
    for i in 0..n {
        if loops[i].recipe.len() >= 2 {
            let at = *loops[i].recipe.last().unwrap();
            let build = Build {
                target: i,
                inputs: loops[i].recipe.clone(),
            };
            loops[at].builds.push(build);
        }
    }

    for &r in rs.restrictions() {
        let pos_greater = schedule.position_of(r.greater);
        let pos_lesser = schedule.position_of(r.lesser);
        let at = pos_greater.max(pos_lesser);
        loops[at].restrictions.push(r);
        if at == pos_greater {
            // binding the greater endpoint: candidates must exceed the bound value
            loops[at].lower_bounds.push(pos_lesser);
        } else {
            // binding the lesser endpoint: candidates stay below the bound value
            loops[at].upper_bounds.push(pos_greater);
        }
    }

    LoopPlan { loops }
}

/// Cross product of schedules and restriction sets, each with its loop plan.
pub fn enumerate_configurations(
    pattern: &Pattern,
    options: &GenOptions,
) -> Result<Vec<Configuration>> {
    let schedules = generate_schedules(pattern);
    let sets = crate::restriction::res_set_generation(pattern, options)?;
    let mut configs = Vec::with_capacity(schedules.len() * sets.len());
    for schedule in &schedules {
        for rs in &sets {
            configs.push(Configuration {
                schedule: schedule.clone(),
                restriction_set: rs.clone(),
                loop_plan: build_loop_plan(pattern, schedule, rs),
                predicted_cost: None,
            });
        }
    }
    Ok(configs)
}

/// One line per loop: "L<i>: v=<pattern vertex> cand=∩{<positions>} res=[...]".
pub fn plan_lines(config: &Configuration) -> Vec<String> {
    config
        .loop_plan
        .loops
        .iter()
        .enumerate()
        .map(|(i, step)| {
            let mut line = format!("L{i}: v={}", step.pattern_vertex);
            if step.recipe.is_empty() {
                line.push_str(" cand=V");
            } else {
                line.push_str(" cand=∩{");
                for (idx, pos) in step.recipe.iter().enumerate() {
                    if idx > 0 {
                        line.push(',');
                    }
                    let _ = write!(line, "{pos}");
                }
                line.push('}');
            }
            line.push_str(" res=[");
            for (idx, r) in step.restrictions.iter().enumerate() {
                if idx > 0 {
                    line.push_str(", ");
                }
                let _ = write!(line, "{r}");
            }
            line.push(']');
            line
        })
        .collect()
}
