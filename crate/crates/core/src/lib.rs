//! Pattern-matching engine for unlabeled undirected graphs.
//!
//! Counts or lists all embeddings of a small connected pattern in a data
//! graph with no automorphism-induced redundancy. The pipeline:
//!
//! 1. [`pattern`] — parse the pattern, enumerate its automorphism group.
//! 2. [`restriction`] — generate complete symmetry-breaking restriction sets
//!    from the group's 2-cycles.
//! 3. [`schedule`] — enumerate efficient vertex search orders and derive
//!    per-loop execution plans.
//! 4. [`cost`] — rank every (schedule, restriction set) configuration with a
//!    nested cost model and pick the cheapest.
//! 5. [`engine`] — interpret the chosen plan over a CSR graph, counting or
//!    listing embeddings, optionally replacing the innermost independent
//!    loops with inclusion-exclusion counting, in parallel.
//!
//! [`oracle`] provides an independent brute-force counter for verification,
//! and [`synth`] deterministic graph generators for tests and benchmarks.

pub mod cache;
pub mod cost;
pub mod engine;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod pattern;
pub mod restriction;
pub mod schedule;
pub mod synth;

pub use cost::{estimate_cardinality, estimate_cost, select_configuration, CostEstimate, GraphStats};
pub use engine::{iep_correction_factor, run, MatchOptions, MatchResult, MatchStats, Mode};
pub use error::{Error, Result};
pub use graph::{load_edge_list, Graph, VertexSet};
pub use pattern::{automorphisms, Pattern, Permutation, PermutationGroup};
pub use restriction::{no_conflict, res_set_generation, validate, GenOptions, Restriction, RestrictionSet};
pub use schedule::{build_loop_plan, enumerate_configurations, generate_schedules, Configuration, LoopPlan, Schedule};
