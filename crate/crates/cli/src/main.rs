//! Command-line driver: plan inspection, counting, listing, restriction
//! validation, brute-force oracle runs, and a CSV benchmark harness.

mod input;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use gpm_core::cost::{select_configuration, GraphStats};
use gpm_core::engine::{self, MatchOptions, Mode};
use gpm_core::pattern::automorphisms;
use gpm_core::restriction::{res_set_generation, satisfying_ordering_count, GenOptions};
use gpm_core::schedule::{enumerate_configurations, plan_lines};
use gpm_core::Error as CoreError;

#[derive(Parser)]
#[command(name = "gpm", version, about = "Graph pattern matching engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every generated configuration with its predicted cost
    Plan {
        /// Pattern: preset name, "n:u-v,..." edge list, or 0/1 adjacency string
        pattern: String,
        /// Graph: file path (edge list or cache) or er:/pl:/kn: generator spec
        graph: String,
        #[command(flatten)]
        generation: GenerationArgs,
    },
    /// Count embeddings of a pattern
    Count {
        pattern: String,
        graph: String,
        #[command(flatten)]
        execution: ExecutionArgs,
        #[command(flatten)]
        generation: GenerationArgs,
    },
    /// List embeddings, one per line, original vertex ids in schedule order
    List {
        pattern: String,
        graph: String,
        /// Write embeddings to this file instead of standard output
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        execution: ExecutionArgs,
        #[command(flatten)]
        generation: GenerationArgs,
    },
    /// Regenerate restriction sets and verify each on the complete graph
    Validate {
        pattern: String,
        #[command(flatten)]
        generation: GenerationArgs,
    },
    /// Brute-force reference count (small graphs only)
    Oracle {
        pattern: String,
        graph: String,
    },
    /// Benchmark patterns x graphs, CSV on standard output
    Bench {
        /// Comma-separated pattern specs
        #[arg(long, required = true, value_delimiter = ',')]
        patterns: Vec<String>,
        /// Comma-separated graph specs
        #[arg(long, required = true, value_delimiter = ',')]
        graphs: Vec<String>,
        /// Comma-separated worker counts
        #[arg(long, value_delimiter = ',', default_value = "1")]
        workers: Vec<usize>,
        #[command(flatten)]
        generation: GenerationArgs,
    },
    /// Print graph statistics: |V|, |E|, tri_cnt, p1, p2
    Stats { graph: String },
    /// Build a graph and save its binary cache
    Cache {
        graph: String,
        output: PathBuf,
    },
}

#[derive(Args, Clone)]
struct ExecutionArgs {
    /// Count the innermost independent loops by inclusion-exclusion
    #[arg(long, conflicts_with = "no_iep")]
    iep: bool,
    /// Force plain nested-loop counting (the default)
    #[arg(long)]
    no_iep: bool,
    /// Worker threads (default: GPM_WORKERS environment variable, else 1)
    #[arg(long)]
    workers: Option<usize>,
    /// Outer-loop depth packed into each parallel task
    #[arg(long)]
    prefix_depth: Option<usize>,
    /// Run a specific configuration index instead of the model's choice
    #[arg(long)]
    config: Option<usize>,
}

#[derive(Args, Clone, Copy)]
struct GenerationArgs {
    /// Cap on generated restriction sets
    #[arg(long, default_value_t = 64)]
    max_sets: usize,
}

impl GenerationArgs {
    fn options(&self) -> GenOptions {
        GenOptions {
            max_sets: self.max_sets,
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    match dispatch() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            match err.downcast_ref::<CoreError>() {
                Some(
                    CoreError::Parse { .. }
                    | CoreError::Pattern(_)
                    | CoreError::Usage(_)
                    | CoreError::Format(_)
                    | CoreError::EmptyGraph,
                ) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn dispatch() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Plan {
            pattern,
            graph,
            generation,
        } => cmd_plan(&pattern, &graph, generation.options()),
        Command::Count {
            pattern,
            graph,
            execution,
            generation,
        } => cmd_count(&pattern, &graph, &execution, generation.options(), None),
        Command::List {
            pattern,
            graph,
            output,
            execution,
            generation,
        } => cmd_count(&pattern, &graph, &execution, generation.options(), Some(output)),
        Command::Validate {
            pattern,
            generation,
        } => cmd_validate(&pattern, generation.options()),
        Command::Oracle { pattern, graph } => cmd_oracle(&pattern, &graph),
        Command::Bench {
            patterns,
            graphs,
            workers,
            generation,
        } => cmd_bench(&patterns, &graphs, &workers, generation.options()),
        Command::Stats { graph } => cmd_stats(&graph),
        Command::Cache { graph, output } => cmd_cache(&graph, &output),
    }
}

fn cmd_plan(pattern_spec: &str, graph_spec: &str, options: GenOptions) -> anyhow::Result<ExitCode> {
    let pattern = input::parse_pattern(pattern_spec)?;
    let graph = input::load_graph(graph_spec)?;
    let stats = GraphStats::from_graph(&graph);
    let mut configs = enumerate_configurations(&pattern, &options)?;
    let selected = select_configuration(&stats, &pattern, &mut configs)?;

    println!(
        "pattern {} | {} configurations | graph |V|={} |E|={}",
        pattern_spec,
        configs.len(),
        graph.vertex_count(),
        graph.edge_count()
    );
    for (i, config) in configs.iter().enumerate() {
        let star = if i == selected { '*' } else { ' ' };
        println!(
            "{star} [{i:4}] order={} res=[{}] cost={:.3e}",
            report::join_order(config.schedule.order()),
            config.restriction_set,
            config.predicted_cost.unwrap_or(f64::NAN),
        );
    }
    println!("selected [{selected}]:");
    for line in plan_lines(&configs[selected]) {
        println!("  {line}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_count(
    pattern_spec: &str,
    graph_spec: &str,
    execution: &ExecutionArgs,
    options: GenOptions,
    list_output: Option<Option<PathBuf>>,
) -> anyhow::Result<ExitCode> {
    let pattern = input::parse_pattern(pattern_spec)?;
    if execution.iep && pattern.independence_number() < 2 {
        bail!(CoreError::Usage(
            "--iep needs a pattern with at least 2 pairwise-nonadjacent vertices \
             (independence number >= 2) for the inclusion-exclusion tail"
                .into()
        ));
    }
    let graph = input::load_graph(graph_spec)?;
    let stats = GraphStats::from_graph(&graph);

    let preprocess_start = Instant::now();
    let mut configs = enumerate_configurations(&pattern, &options)?;
    let selected = select_configuration(&stats, &pattern, &mut configs)?;
    let preprocess = preprocess_start.elapsed();

    let chosen = match execution.config {
        Some(index) => {
            if index >= configs.len() {
                bail!(CoreError::Usage(format!(
                    "--config {index} out of range (0..{})",
                    configs.len() - 1
                )));
            }
            index
        }
        None => selected,
    };

    let listing = list_output.is_some();
    let opts = MatchOptions {
        mode: if listing { Mode::List } else { Mode::Count },
        iep: execution.iep,
        workers: execution.workers.unwrap_or_else(workers_from_env),
        prefix_depth: execution.prefix_depth,
    };
    let result = engine::run(&graph, &pattern, &configs[chosen], &opts)?;

    if let Some(output) = &list_output {
        let embeddings = result.embeddings.as_deref().unwrap_or(&[]);
        let mut sink: Box<dyn Write> = match output {
            Some(path) => Box::new(std::io::BufWriter::new(
                std::fs::File::create(path).with_context(|| format!("create {path:?}"))?,
            )),
            None => Box::new(std::io::stdout().lock()),
        };
        for assignment in embeddings {
            let line: Vec<String> = assignment
                .iter()
                .map(|&v| graph.original_id(v).to_string())
                .collect();
            writeln!(sink, "{}", line.join(" "))?;
        }
        sink.flush()?;
    }

    report::print_run(
        pattern_spec,
        graph_spec,
        &configs[chosen],
        chosen,
        configs.len(),
        &opts,
        preprocess,
        &result,
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(pattern_spec: &str, options: GenOptions) -> anyhow::Result<ExitCode> {
    let pattern = input::parse_pattern(pattern_spec)?;
    let group = automorphisms(&pattern);
    let n = pattern.vertex_count();
    let n_fact: u64 = (1..=n as u64).product();
    let sets = res_set_generation(&pattern, &options)?;
    println!(
        "pattern {pattern_spec}: {} automorphisms, {} restriction sets",
        group.order(),
        sets.len()
    );
    let mut failures = 0;
    for (i, rs) in sets.iter().enumerate() {
        let with = satisfying_ordering_count(n, rs);
        let without = n_fact;
        let ok = with * group.order() as u64 == without;
        if !ok {
            failures += 1;
        }
        println!(
            "[{i:3}] {} : with={} without={} |Aut|={} -> {}",
            if rs.is_empty() {
                "(empty)".to_string()
            } else {
                rs.to_string()
            },
            with,
            without,
            group.order(),
            if ok { "pass" } else { "FAIL" }
        );
    }
    if failures > 0 {
        bail!(CoreError::Internal(format!(
            "{failures} restriction sets failed validation"
        )));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(pattern_spec: &str, graph_spec: &str) -> anyhow::Result<ExitCode> {
    let pattern = input::parse_pattern(pattern_spec)?;
    let graph = input::load_graph(graph_spec)?;
    if graph.vertex_count() > 60 {
        bail!(CoreError::Usage(format!(
            "oracle enumerates all injective mappings; {} vertices is too many \
             (use graphs with at most ~50 vertices)",
            graph.vertex_count()
        )));
    }
    let count = gpm_core::oracle::embedding_count(&graph, &pattern)?;
    println!("{count}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(
    patterns: &[String],
    graphs: &[String],
    workers: &[usize],
    options: GenOptions,
) -> anyhow::Result<ExitCode> {
    println!("pattern,graph,iep,workers,count,wall_ms,preprocess_ms");
    for graph_spec in graphs {
        let graph = input::load_graph(graph_spec)?;
        let stats = GraphStats::from_graph(&graph);
        for pattern_spec in patterns {
            let pattern = input::parse_pattern(pattern_spec)?;
            let preprocess_start = Instant::now();
            let mut configs = enumerate_configurations(&pattern, &options)?;
            let selected = select_configuration(&stats, &pattern, &mut configs)?;
            let preprocess_ms = preprocess_start.elapsed().as_secs_f64() * 1e3;

            let mut modes = vec![false];
            if pattern.independence_number() >= 2 {
                modes.push(true);
            }
            for &iep in &modes {
                for &w in workers {
                    let result = engine::run(
                        &graph,
                        &pattern,
                        &configs[selected],
                        &MatchOptions {
                            mode: Mode::Count,
                            iep,
                            workers: w,
                            prefix_depth: None,
                        },
                    )?;
                    println!(
                        "{},{},{},{},{},{:.3},{:.3}",
                        pattern_spec,
                        graph_spec,
                        if iep { "on" } else { "off" },
                        w,
                        result.count,
                        result.stats.wall.as_secs_f64() * 1e3,
                        preprocess_ms
                    );
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_stats(graph_spec: &str) -> anyhow::Result<ExitCode> {
    let graph = input::load_graph(graph_spec)?;
    let stats = GraphStats::from_graph(&graph);
    println!("vertices: {}", graph.vertex_count());
    println!("edges: {}", graph.edge_count());
    println!("triangles: {}", graph.triangle_count());
    println!("p1: {:.6e}", stats.p1);
    println!("p2: {:.6e}", stats.p2);
    println!("max degree: {}", graph.max_degree());
    Ok(ExitCode::SUCCESS)
}

fn cmd_cache(graph_spec: &str, output: &PathBuf) -> anyhow::Result<ExitCode> {
    let graph = input::load_graph(graph_spec)?;
    gpm_core::cache::save_cache(&graph, output)?;
    println!(
        "cached {} vertices, {} edges, {} triangles to {}",
        graph.vertex_count(),
        graph.edge_count(),
        graph.triangle_count(),
        output.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn workers_from_env() -> usize {
    std::env::var("GPM_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&w| w >= 1)
        .unwrap_or(1)
}
