//! Shared fixtures for the integration and acceptance tests.
#![allow(dead_code)] // not every test binary uses every fixture

use std::collections::BTreeSet;
use std::io::Cursor;

use tempeel::graph::{load_graph, LoadOptions};
use tempeel::synth::{random_graph, SplitMix64, SynthSpec};
use tempeel::{EdgeId, TemporalGraph};

/// Four nodes talking in two bursts (t=1..8 and t=10..23).
pub const TOY_EDGE_LIST: &str = "\
a b 1
a b 20
b c 3
b c 8
a c 1
a c 22
c d 6
c d 20
a d 4
a d 10
b d 6
b d 23
";

pub fn toy_graph() -> TemporalGraph {
    let (g, _) = load_graph(Cursor::new(TOY_EDGE_LIST), &LoadOptions::default()).unwrap();
    g
}

pub fn edge_by(g: &TemporalGraph, u: &str, v: &str, t: i64) -> EdgeId {
    let matches: Vec<EdgeId> = g
        .edges()
        .iter()
        .filter(|e| {
            let (a, b) = (g.token(e.u), g.token(e.v));
            e.t == t && ((a == u && b == v) || (a == v && b == u))
        })
        .map(|e| e.id)
        .collect();
    assert_eq!(matches.len(), 1, "edge ({u},{v},{t}) not unique");
    matches[0]
}

pub fn toy_edge_set(g: &TemporalGraph, spec: &[(&str, &str, i64)]) -> BTreeSet<EdgeId> {
    spec.iter().map(|&(u, v, t)| edge_by(g, u, v, t)).collect()
}

/// Deterministic random instance family used by the randomized checks:
/// n <= 20 nodes, m <= 120 edges, span up to ~3m.
pub fn small_instance(seed: u64) -> TemporalGraph {
    let mut rng = SplitMix64::new(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ 0x5eed);
    let nodes = 2 + rng.gen_range(19) as u32;
    let edges = 1 + rng.gen_range(120) as u32;
    let span = rng.gen_range(3 * edges as u64 + 1);
    random_graph(&SynthSpec {
        nodes,
        edges,
        span,
        labeled: false,
        seed: seed ^ 0x55aa,
    })
}

/// Randomly picks a delta between 0 and a bit past the graph's span width.
pub fn sample_delta(g: &TemporalGraph, rng: &mut SplitMix64) -> i64 {
    let width = g
        .span()
        .map(|(lo, hi)| (hi - lo) as u64)
        .unwrap_or(0);
    rng.gen_range(width + 2) as i64
}
