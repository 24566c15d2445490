//! Shared-memory work-stealing runtime.
//!
//! The calling thread acts as the producer: it enumerates valid outer-loop
//! prefixes of a fixed depth and packs each one into a task. Workers claim
//! task batches from the opposite end of a shared deque, re-derive the
//! prefix state, and run the remaining inner loops with thread-local
//! accumulators merged once at the end. The producer throttles itself when
//! the pool holds more than four tasks per worker.

use std::collections::VecDeque;
use std::sync::{Condvar, Mutex};

use crate::error::{Error, Result};

use super::{descend, run_prefix_builds, Ctx, ExecPlan, RunOutcome};

#[derive(Debug, Clone, Copy)]
struct Task {
    values: [u32; 8],
}

struct PoolState {
    queue: VecDeque<Task>,
    closed: bool,
}

struct TaskPool {
    state: Mutex<PoolState>,
    not_empty: Condvar,
    not_full: Condvar,
    capacity: usize,
}

impl TaskPool {
    fn new(capacity: usize) -> TaskPool {
        TaskPool {
            state: Mutex::new(PoolState {
                queue: VecDeque::new(),
                closed: false,
            }),
            not_empty: Condvar::new(),
            not_full: Condvar::new(),
            capacity,
        }
    }

    fn push(&self, task: Task) {
        let mut state = self.state.lock().unwrap();
        while state.queue.len() >= self.capacity {
            state = self.not_full.wait(state).unwrap();
        }
        state.queue.push_back(task);
        drop(state);
        self.not_empty.notify_one();
    }

    fn close(&self) {
        self.state.lock().unwrap().closed = true;
        self.not_empty.notify_all();
    }

    /// Claims up to `max` tasks from the front; false once closed and drained.
    fn pop_batch(&self, out: &mut Vec<Task>, max: usize) -> bool {
        let mut state = self.state.lock().unwrap();
        loop {
            if !state.queue.is_empty() {
                let take = state.queue.len().min(max);
                out.extend(state.queue.drain(..take));
                drop(state);
                self.not_full.notify_one();
                return true;
            }
            if state.closed {
                return false;
            }
            state = self.not_empty.wait(state).unwrap();
        }
    }
}

pub(super) fn run(plan: &ExecPlan<'_>, workers: usize, depth: usize) -> Result<RunOutcome> {
    let pool = TaskPool::new(4 * workers.max(1));
    let failure: Mutex<Option<Error>> = Mutex::new(None);

    let outcome = std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(workers);
        for _ in 0..workers {
            handles.push(scope.spawn(|| worker_loop(plan, &pool, depth, &failure)));
        }

        let mut producer = Ctx::new(plan);
        produce(plan, &mut producer, 0, depth, &pool, &failure);
        pool.close();

        let mut merged = RunOutcome {
            raw_count: 0,
            embeddings: if plan.list { Some(Vec::new()) } else { None },
            merges: 0,
            tasks: 0,
        };
        for handle in handles {
            let local = handle.join().expect("worker panicked");
            merged.raw_count += local.raw_count;
            merged.merges += local.merges;
            merged.tasks += local.tasks;
            if let (Some(all), Some(mut found)) =
                (merged.embeddings.as_mut(), local.embeddings)
            {
                all.append(&mut found);
            }
        }
        merged
    });

    match failure.into_inner().unwrap() {
        Some(err) => Err(err),
        None => Ok(outcome),
    }
}

/// Enumerates valid prefixes of `target` loops, applying the same bounds and
/// distinctness rules the inner loops use, and feeds them to the pool.
fn produce(
    plan: &ExecPlan<'_>,
    ctx: &mut Ctx,
    current: usize,
    target: usize,
    pool: &TaskPool,
    failure: &Mutex<Option<Error>>,
) {
    if failure.lock().unwrap().is_some() {
        return;
    }
    if current == target {
        pool.push(Task { values: ctx.bound });
        return;
    }
    let (lo, hi) = super::candidate_bounds(plan, ctx, current);
    if lo >= hi {
        return;
    }
    match plan.loops[current].source {
        super::Source::All => {
            let end = hi.min(plan.graph.vertex_count() as u32);
            for v in lo..end {
                produce_candidate(plan, ctx, current, target, v, pool, failure);
            }
        }
        super::Source::Neigh(pos) => {
            let slice = plan.graph.neighbors(ctx.bound[pos]);
            let start = slice.partition_point(|&x| x < lo);
            let end = start + slice[start..].partition_point(|&x| x < hi);
            for idx in start..end {
                let v = slice[idx];
                produce_candidate(plan, ctx, current, target, v, pool, failure);
            }
        }
        super::Source::Slot(slot) => {
            let start = ctx.slots[slot].partition_point(|&x| x < lo);
            let end = start + ctx.slots[slot][start..].partition_point(|&x| x < hi);
            for idx in start..end {
                let v = ctx.slots[slot][idx];
                produce_candidate(plan, ctx, current, target, v, pool, failure);
            }
        }
    }
}

fn produce_candidate(
    plan: &ExecPlan<'_>,
    ctx: &mut Ctx,
    current: usize,
    target: usize,
    v: u32,
    pool: &TaskPool,
    failure: &Mutex<Option<Error>>,
) {
    if ctx.bound[..current].contains(&v) {
        return;
    }
    ctx.bound[current] = v;
    for i in 0..plan.loops[current].builds.len() {
        let build = plan.loops[current].builds[i].clone();
        // only slots feeding later producer loops matter here
        if build.target < target {
            super::run_build(plan, ctx, &build);
        }
    }
    produce(plan, ctx, current + 1, target, pool, failure);
}

fn worker_loop(
    plan: &ExecPlan<'_>,
    pool: &TaskPool,
    depth: usize,
    failure: &Mutex<Option<Error>>,
) -> RunOutcome {
    let mut ctx = Ctx::new(plan);
    let mut batch = Vec::new();
    let mut tasks = 0u64;
    while pool.pop_batch(&mut batch, 16) {
        for task in batch.drain(..) {
            if failure.lock().unwrap().is_some() {
                continue; // keep draining so the producer never blocks forever
            }
            ctx.bound = task.values;
            run_prefix_builds(plan, &mut ctx, depth);
            if let Err(err) = descend(plan, &mut ctx, depth) {
                let mut slot = failure.lock().unwrap();
                if slot.is_none() {
                    *slot = Some(err);
                }
            }
            tasks += 1;
        }
    }
    RunOutcome {
        raw_count: ctx.raw_count,
        embeddings: ctx.embeddings,
        merges: ctx.merges,
        tasks,
    }
}
