//! Deterministic synthetic graph generation for benchmarks and tests.

use crate::graph::{GraphBuilder, TemporalGraph, Time};
use crate::stats::{CLAIM_LABEL, FACT_LABEL};

/// SplitMix64: tiny, seedable, and stable across platforms and releases, so
/// generated fixtures never drift.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n` (n > 0), via the multiply-shift reduction.
    pub fn gen_range(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SynthSpec {
    pub nodes: u32,
    pub edges: u32,
    /// Timestamps are drawn uniformly from `0..=span`.
    pub span: u64,
    pub labeled: bool,
    pub seed: u64,
}

/// Uniform random temporal multigraph. Node tokens are decimal indices;
/// only nodes that receive an edge are materialized, so no isolated nodes
/// occur. Labels, when requested, are claim-heavy (4:1) like real retweet
/// data tends to be.
pub fn random_graph(spec: &SynthSpec) -> TemporalGraph {
    assert!(spec.nodes >= 2, "need at least two nodes");
    let mut rng = SplitMix64::new(spec.seed);
    let mut b = GraphBuilder::new(spec.labeled);
    for _ in 0..spec.edges {
        let u = rng.gen_range(spec.nodes as u64);
        let v = loop {
            let v = rng.gen_range(spec.nodes as u64);
            if v != u {
                break v;
            }
        };
        let t = rng.gen_range(spec.span + 1) as Time;
        let (us, vs) = (u.to_string(), v.to_string());
        if spec.labeled {
            let label = if rng.gen_range(5) == 0 {
                FACT_LABEL
            } else {
                CLAIM_LABEL
            };
            b.add_labeled_edge(&us, &vs, t, label).unwrap();
        } else {
            b.add_edge(&us, &vs, t).unwrap();
        }
    }
    b.finish()
}
