//! Run report formatting.

use std::time::Duration;

use gpm_core::engine::{MatchOptions, MatchResult, Mode};
use gpm_core::schedule::{plan_lines, Configuration};

pub fn join_order(order: &[usize]) -> String {
    order
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

#[allow(clippy::too_many_arguments)]
pub fn print_run(
    pattern_spec: &str,
    graph_spec: &str,
    config: &Configuration,
    chosen: usize,
    total_configs: usize,
    opts: &MatchOptions,
    preprocess: Duration,
    result: &MatchResult,
) {
    println!("pattern: {pattern_spec}");
    println!("graph: {graph_spec}");
    println!(
        "configuration: [{chosen}] of {total_configs}, predicted cost {:.3e}",
        config.predicted_cost.unwrap_or(f64::NAN)
    );
    for line in plan_lines(config) {
        println!("  {line}");
    }
    println!(
        "mode: {} | iep: {} | workers: {}",
        match opts.mode {
            Mode::Count => "count",
            Mode::List => "list",
        },
        if opts.iep { "on" } else { "off" },
        opts.workers
    );
    println!("preprocess_ms: {:.3}", preprocess.as_secs_f64() * 1e3);
    println!("count: {}", result.count);
    println!("wall_ms: {:.3}", result.stats.wall.as_secs_f64() * 1e3);
    println!(
        "tasks: {} | intersections: {}",
        result.stats.tasks, result.stats.intersections
    );
}
