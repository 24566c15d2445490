//! Pattern and graph argument parsing.
//!
//! Patterns: preset name, "n:u-v,..." edge list, or 0/1 adjacency string.
//! Graphs: a file path (edge-list text or binary cache, auto-detected), or
//! a generator spec:
//!   er:<n>:<p>:<seed>          Erdős–Rényi
//!   pl:<v>:<edges>:<seed>[:triad]  power-law (clustered)
//!   kn:<n>                     complete graph

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use anyhow::Context;
use gpm_core::graph::{load_edge_list, Graph};
use gpm_core::pattern::{preset, Pattern};
use gpm_core::{cache, synth};

pub fn parse_pattern(spec: &str) -> anyhow::Result<Pattern> {
    if let Some(pattern) = preset(spec) {
        return Ok(pattern);
    }
    Ok(Pattern::parse(spec)?)
}

pub fn load_graph(spec: &str) -> anyhow::Result<Graph> {
    if let Some(rest) = spec.strip_prefix("er:") {
        let parts: Vec<&str> = rest.split(':').collect();
        anyhow::ensure!(parts.len() == 3, "er spec needs er:<n>:<p>:<seed>");
        let n: u32 = parts[0].parse().context("er vertex count")?;
        let p: f64 = parts[1].parse().context("er edge probability")?;
        let seed: u64 = parts[2].parse().context("er seed")?;
        return Ok(synth::er_graph(n, p, seed));
    }
    if let Some(rest) = spec.strip_prefix("pl:") {
        let parts: Vec<&str> = rest.split(':').collect();
        anyhow::ensure!(
            parts.len() == 3 || parts.len() == 4,
            "pl spec needs pl:<v>:<edges>:<seed>[:triad]"
        );
        let v: u32 = parts[0].parse().context("pl vertex count")?;
        let edges: usize = parts[1].parse().context("pl edge count")?;
        let seed: u64 = parts[2].parse().context("pl seed")?;
        let triad: f64 = if parts.len() == 4 {
            parts[3].parse().context("pl triad probability")?
        } else {
            0.8
        };
        return Ok(synth::powerlaw_graph(v, edges, triad, seed));
    }
    if let Some(rest) = spec.strip_prefix("kn:") {
        let n: u32 = rest.parse().context("kn vertex count")?;
        return Ok(synth::complete_graph(n));
    }

    let path = Path::new(spec);
    if cache::is_cache_file(path) {
        return Ok(cache::load_cache(path)?);
    }
    let file = File::open(path).with_context(|| format!("open graph file {spec:?}"))?;
    Ok(load_edge_list(BufReader::new(file))?)
}
