//! Parameter selection and structural statistics.
//!
//! Δ is usually chosen from percentiles of the inter-event times (IETs): the
//! timestamp gaps between consecutive edges at a node. Between two
//! consecutive distinct IET values the Δ-degrees tend not to change, so the
//! percentiles cover the range of Δ values that actually matter.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::components::EdgePartition;
use crate::decompose::count_support;
use crate::graph::{TemporalGraph, Time};

/// Label value taken to mean a claim / misinformation edge.
pub const CLAIM_LABEL: u32 = 0;
/// Label value taken to mean a fact-checking edge.
pub const FACT_LABEL: u32 = 1;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("no consecutive incident-edge pairs exist; cannot form IETs")]
    NoConsecutivePairs,
    #[error("percentile fraction {0} is outside (0, 1]")]
    InvalidFraction(f64),
    #[error("graph is not labeled")]
    Unlabeled,
    #[error("partition covers {covered} edges but the graph has {edges}")]
    PartitionMismatch { covered: usize, edges: usize },
}

/// The multiset of inter-event times and the requested percentiles of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IetSummary {
    /// All per-node gaps between consecutive incident edges, sorted.
    pub iets: Vec<Time>,
    /// `(fraction, Δ value)` pairs, sorted by fraction.
    pub percentiles: Vec<(OrderedFraction, Time)>,
}

/// A percentile fraction in `(0, 1]`, orderable and hashable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderedFraction(pub f64);

impl Eq for OrderedFraction {}

impl PartialOrd for OrderedFraction {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrderedFraction {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Nearest-rank percentile: the `ceil(p · N)`-th smallest element.
fn nearest_rank(sorted: &[Time], p: f64) -> Time {
    let n = sorted.len();
    debug_assert!(n > 0);
    let rank = (p * n as f64).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

/// Collects the IET multiset (one gap per consecutive incident-edge pair per
/// node, zero gaps included) and resolves the requested percentile fractions
/// by the nearest-rank method.
pub fn iet_percentiles(g: &TemporalGraph, fractions: &[f64]) -> Result<IetSummary, StatsError> {
    for &p in fractions {
        if !(p > 0.0 && p <= 1.0) {
            return Err(StatsError::InvalidFraction(p));
        }
    }
    let mut iets = Vec::new();
    for u in g.node_ids() {
        for w in g.incidence(u).windows(2) {
            iets.push(w[1].t - w[0].t);
        }
    }
    if iets.is_empty() {
        return Err(StatsError::NoConsecutivePairs);
    }
    iets.sort_unstable();
    let mut percentiles: Vec<(OrderedFraction, Time)> = fractions
        .iter()
        .map(|&p| (OrderedFraction(p), nearest_rank(&iets, p)))
        .collect();
    percentiles.sort_by_key(|p| p.0);
    Ok(IetSummary { iets, percentiles })
}

impl IetSummary {
    pub fn percentile(&self, p: f64) -> Option<Time> {
        self.percentiles
            .iter()
            .find(|(f, _)| f.0 == p)
            .map(|&(_, d)| d)
    }
}

/// Δ-degree and Δ-support statistics over the full edge set, plus ξ: the
/// largest number of Δ-incident edges (union over both endpoints) at any
/// single edge.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaStats {
    pub delta: Time,
    pub avg_degree: f64,
    pub max_degree: u64,
    pub avg_support: f64,
    pub max_support: u64,
    pub xi: u64,
}

pub fn delta_stats(g: &TemporalGraph, delta: Time) -> DeltaStats {
    assert!(delta >= 0, "delta must be non-negative");
    let m = g.edge_count();
    if m == 0 {
        return DeltaStats {
            delta,
            avg_degree: 0.0,
            max_degree: 0,
            avg_support: 0.0,
            max_support: 0,
            xi: 0,
        };
    }
    let mut deg_sum = 0u64;
    let mut deg_max = 0u64;
    let mut sup_sum = 0u64;
    let mut sup_max = 0u64;
    let mut xi = 0u64;
    for e in g.edges() {
        let wu = g.delta_window(e.u, e.t, delta);
        let wv = g.delta_window(e.v, e.t, delta);
        let cu = wu.len() as u64;
        let cv = wv.len() as u64;
        let deg = cu.min(cv);
        deg_sum += deg;
        deg_max = deg_max.max(deg);

        // |union| = cu + cv - parallel edges of {u,v} inside the window
        let (small, mate) = if cu <= cv { (wu, e.v) } else { (wv, e.u) };
        let parallel = small.iter().filter(|en| en.other == mate).count() as u64;
        xi = xi.max(cu + cv - parallel);

        let sup = count_support(g, e.id, delta, None);
        sup_sum += sup;
        sup_max = sup_max.max(sup);
    }
    DeltaStats {
        delta,
        avg_degree: deg_sum as f64 / m as f64,
        max_degree: deg_max,
        avg_support: sup_sum as f64 / m as f64,
        max_support: sup_max,
        xi,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomophilyClass {
    ClaimsOnly,
    FactsOnly,
    Mixed,
}

impl HomophilyClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            HomophilyClass::ClaimsOnly => "claims_only",
            HomophilyClass::FactsOnly => "facts_only",
            HomophilyClass::Mixed => "mixed",
        }
    }
}

/// Label census and retweet-frequency statistics of one component.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentLabelStats {
    pub component: usize,
    pub nodes: usize,
    pub edges: usize,
    /// label value -> edge count; sums to `edges`.
    pub census: BTreeMap<u32, usize>,
    pub class: HomophilyClass,
    /// `(edge count - 1) / (max t - min t)` in 1/time-unit; 0 for size-1 or
    /// zero-duration components.
    pub mean_frequency: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComponentLabelReport {
    pub components: Vec<ComponentLabelStats>,
    pub claims_only: usize,
    pub facts_only: usize,
    pub mixed: usize,
}

/// Per-component label census, homophily class, and mean retweet frequency.
/// The graph must be labeled.
pub fn component_label_report(
    g: &TemporalGraph,
    partition: &EdgePartition,
) -> Result<ComponentLabelReport, StatsError> {
    if !g.labeled() {
        return Err(StatsError::Unlabeled);
    }
    let covered: usize = partition.components.iter().map(Vec::len).sum();
    if covered != g.edge_count() {
        return Err(StatsError::PartitionMismatch {
            covered,
            edges: g.edge_count(),
        });
    }

    let mut node_mark = vec![u32::MAX; g.node_count()];
    let mut components = Vec::with_capacity(partition.components.len());
    let mut totals = [0usize; 3];
    for (idx, comp) in partition.components.iter().enumerate() {
        let mut census: BTreeMap<u32, usize> = BTreeMap::new();
        let mut nodes = 0usize;
        let mut t_min = Time::MAX;
        let mut t_max = Time::MIN;
        for &e in comp {
            let ed = g.edge(e);
            *census.entry(ed.label.expect("labeled graph")).or_insert(0) += 1;
            t_min = t_min.min(ed.t);
            t_max = t_max.max(ed.t);
            for x in [ed.u, ed.v] {
                if node_mark[x.index()] != idx as u32 {
                    node_mark[x.index()] = idx as u32;
                    nodes += 1;
                }
            }
        }
        let class = if census.keys().all(|&l| l == CLAIM_LABEL) {
            HomophilyClass::ClaimsOnly
        } else if census.keys().all(|&l| l == FACT_LABEL) {
            HomophilyClass::FactsOnly
        } else {
            HomophilyClass::Mixed
        };
        totals[match class {
            HomophilyClass::ClaimsOnly => 0,
            HomophilyClass::FactsOnly => 1,
            HomophilyClass::Mixed => 2,
        }] += 1;
        let edges = comp.len();
        let mean_frequency = if edges <= 1 || t_max == t_min {
            0.0
        } else {
            (edges - 1) as f64 / (t_max - t_min) as f64
        };
        components.push(ComponentLabelStats {
            component: idx,
            nodes,
            edges,
            census,
            class,
            mean_frequency,
        });
    }
    Ok(ComponentLabelReport {
        components,
        claims_only: totals[0],
        facts_only: totals[1],
        mixed: totals[2],
    })
}

/// Watts–Strogatz clustering coefficient of the underlying static simple
/// graph (parallel temporal edges collapsed): 3·triangles / connected
/// triples, 0 when no triples exist.
pub fn clustering_coefficient(g: &TemporalGraph) -> f64 {
    let n = g.node_count();
    let mut adj: Vec<Vec<u32>> = Vec::with_capacity(n);
    for u in g.node_ids() {
        let mut nb: Vec<u32> = g.incidence(u).iter().map(|en| en.other.0).collect();
        nb.sort_unstable();
        nb.dedup();
        adj.push(nb);
    }

    let mut triples = 0u64;
    for nb in &adj {
        let d = nb.len() as u64;
        triples += d * d.saturating_sub(1) / 2;
    }
    if triples == 0 {
        return 0.0;
    }

    // each triangle is counted once per edge, i.e. three times in total
    let mut closed = 0u64;
    for (u, nb) in adj.iter().enumerate() {
        for &v in nb {
            if (v as usize) < u {
                continue;
            }
            closed += sorted_intersection_count(nb, &adj[v as usize], u as u32, v);
        }
    }
    closed as f64 / triples as f64
}

fn sorted_intersection_count(a: &[u32], b: &[u32], skip_u: u32, skip_v: u32) -> u64 {
    let (mut i, mut j, mut n) = (0, 0, 0u64);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if a[i] != skip_u && a[i] != skip_v {
                    n += 1;
                }
                i += 1;
                j += 1;
            }
        }
    }
    n
}
