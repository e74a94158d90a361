//! Edge peeling decompositions over monotone edge weight functions.
//!
//! [`generic_decompose`] implements the framework directly: repeatedly remove
//! a minimum-weight edge, assign it the running level, and re-evaluate the
//! weights of affected edges. It is kept as the reference path for custom
//! weight functions and cross-checks.
//!
//! [`kd_core_decompose`] and [`kd_truss_decompose`] are the production
//! routines. They specialize the framework for the Δ-degree and Δ-support
//! weights with O(1) bucket moves, running in O(m·max(log δ_m, ξ)) and
//! O(m·max(log δ_m, ξ²)) respectively, where ξ bounds the number of
//! Δ-incident edges at any edge.

use std::collections::BTreeSet;
use std::io::{self, Write};

use thiserror::Error;

use crate::graph::{within_delta, EdgeId, EdgeSet, TemporalGraph, Time};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompositionKind {
    Core,
    Truss,
}

impl DecompositionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DecompositionKind::Core => "core",
            DecompositionKind::Truss => "truss",
        }
    }
}

/// Per-edge core numbers `c_Δ(e)` or truss numbers `τ_Δ(e)`, indexed by
/// edge id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionResult {
    pub kind: DecompositionKind,
    pub delta: Time,
    pub values: Vec<u64>,
}

impl DecompositionResult {
    #[inline]
    pub fn value(&self, e: EdgeId) -> u64 {
        self.values[e.index()]
    }

    pub fn max_value(&self) -> u64 {
        self.values.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("edge {0} is not in the live edge set")]
    EdgeNotLive(EdgeId),
    #[error("result carries {values} values but the graph has {edges} edges")]
    ResultMismatch { values: usize, edges: usize },
}

/// A monotone edge weight: for live sets `E1 ⊆ E2`,
/// `evaluate(e, E1) <= evaluate(e, E2)` must hold for every edge.
pub trait EdgeWeight {
    /// Weight of `e` against the `live` edge set; 0 when `e` is not live.
    fn evaluate(&self, g: &TemporalGraph, e: EdgeId, live: &EdgeSet) -> u64;

    /// Edges whose weight may change after `removed` leaves the live set.
    fn affected(&self, g: &TemporalGraph, removed: EdgeId, live: &EdgeSet) -> Vec<EdgeId>;

    fn kind(&self) -> DecompositionKind {
        DecompositionKind::Core
    }

    fn delta(&self) -> Time {
        0
    }
}

/// Δ-degree: minimum over the endpoints of the number of live Δ-incident
/// edges there. Every edge counts in its own Δ-degree.
pub struct DeltaDegree {
    pub delta: Time,
}

impl EdgeWeight for DeltaDegree {
    fn evaluate(&self, g: &TemporalGraph, e: EdgeId, live: &EdgeSet) -> u64 {
        if !live.contains(e) {
            return 0;
        }
        let ed = g.edge(e);
        let count = |u| {
            g.delta_window(u, ed.t, self.delta)
                .iter()
                .filter(|en| live.contains(en.edge))
                .count() as u64
        };
        count(ed.u).min(count(ed.v))
    }

    fn affected(&self, g: &TemporalGraph, removed: EdgeId, live: &EdgeSet) -> Vec<EdgeId> {
        let ed = g.edge(removed);
        let mut out: Vec<EdgeId> = [ed.u, ed.v]
            .into_iter()
            .flat_map(|u| g.delta_window(u, ed.t, self.delta))
            .map(|en| en.edge)
            .filter(|&f| live.contains(f))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn kind(&self) -> DecompositionKind {
        DecompositionKind::Core
    }

    fn delta(&self) -> Time {
        self.delta
    }
}

/// Δ-support: the number of unordered pairs of live edges that close a
/// triangle with `e` on three pairwise-distinct nodes, with all three
/// pairwise timestamp gaps at most Δ.
pub struct DeltaSupport {
    pub delta: Time,
}

impl EdgeWeight for DeltaSupport {
    fn evaluate(&self, g: &TemporalGraph, e: EdgeId, live: &EdgeSet) -> u64 {
        if !live.contains(e) {
            return 0;
        }
        count_support(g, e, self.delta, Some(live))
    }

    fn affected(&self, g: &TemporalGraph, removed: EdgeId, live: &EdgeSet) -> Vec<EdgeId> {
        let mut out = Vec::new();
        for_each_triangle_pair(g, removed, self.delta, Some(live), |ei, ej| {
            out.push(ei);
            out.push(ej);
        });
        out.sort_unstable();
        out.dedup();
        out
    }

    fn kind(&self) -> DecompositionKind {
        DecompositionKind::Truss
    }

    fn delta(&self) -> Time {
        self.delta
    }
}

/// Constant weight; every edge ends up with the same value.
pub struct ConstantWeight(pub u64);

impl EdgeWeight for ConstantWeight {
    fn evaluate(&self, _g: &TemporalGraph, _e: EdgeId, _live: &EdgeSet) -> u64 {
        self.0
    }

    fn affected(&self, _g: &TemporalGraph, _removed: EdgeId, _live: &EdgeSet) -> Vec<EdgeId> {
        Vec::new()
    }
}

/// Static multigraph edge degree (minimum endpoint incident-edge count,
/// ignoring timestamps). Peeling it yields static edge core numbers.
pub struct StaticEdgeDegree;

impl EdgeWeight for StaticEdgeDegree {
    fn evaluate(&self, g: &TemporalGraph, e: EdgeId, live: &EdgeSet) -> u64 {
        if !live.contains(e) {
            return 0;
        }
        let ed = g.edge(e);
        let count = |u| {
            g.incidence(u)
                .iter()
                .filter(|en| live.contains(en.edge))
                .count() as u64
        };
        count(ed.u).min(count(ed.v))
    }

    fn affected(&self, g: &TemporalGraph, removed: EdgeId, live: &EdgeSet) -> Vec<EdgeId> {
        let ed = g.edge(removed);
        let mut out: Vec<EdgeId> = [ed.u, ed.v]
            .into_iter()
            .flat_map(|u| g.incidence(u))
            .map(|en| en.edge)
            .filter(|&f| live.contains(f))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Δ-degree of `e` against `live`; `e` must be live.
pub fn delta_degree(
    g: &TemporalGraph,
    e: EdgeId,
    live: &EdgeSet,
    delta: Time,
) -> Result<u64, DecomposeError> {
    if !live.contains(e) {
        return Err(DecomposeError::EdgeNotLive(e));
    }
    Ok(DeltaDegree { delta }.evaluate(g, e, live))
}

/// Δ-support of `e` against `live`; `e` must be live.
pub fn delta_support(
    g: &TemporalGraph,
    e: EdgeId,
    live: &EdgeSet,
    delta: Time,
) -> Result<u64, DecomposeError> {
    if !live.contains(e) {
        return Err(DecomposeError::EdgeNotLive(e));
    }
    Ok(DeltaSupport { delta }.evaluate(g, e, live))
}

/// Enumerates the triangle pairs through `e = ({u,v},t)`: live edges
/// `ei = ({u,w},t1)`, `ej = ({v,w},t2)` with `w` distinct from `u,v` and all
/// three pairwise gaps within `delta`. Each unordered pair is visited once.
fn for_each_triangle_pair<F: FnMut(EdgeId, EdgeId)>(
    g: &TemporalGraph,
    e: EdgeId,
    delta: Time,
    live: Option<&EdgeSet>,
    mut visit: F,
) {
    let ed = g.edge(e);
    let wu = g.delta_window(ed.u, ed.t, delta);
    let wv = g.delta_window(ed.v, ed.t, delta);
    let is_live = |f: EdgeId| live.is_none_or(|l| l.contains(f));
    for a in wu {
        if a.other == ed.v || !is_live(a.edge) {
            continue;
        }
        for b in wv {
            if b.other != a.other || !is_live(b.edge) {
                continue;
            }
            if within_delta(a.t, b.t, delta) {
                visit(a.edge, b.edge);
            }
        }
    }
}

/// Δ-support of `e` against the full edge set (or `live` when given).
pub(crate) fn count_support(
    g: &TemporalGraph,
    e: EdgeId,
    delta: Time,
    live: Option<&EdgeSet>,
) -> u64 {
    let mut n = 0u64;
    for_each_triangle_pair(g, e, delta, live, |_, _| n += 1);
    n
}

/// Reference peeling over an arbitrary monotone weight. Removal order among
/// equal weights is lowest-edge-id first, so peel traces are reproducible.
pub fn generic_decompose<W: EdgeWeight + ?Sized>(
    g: &TemporalGraph,
    phi: &W,
) -> DecompositionResult {
    let m = g.edge_count();
    let mut live = EdgeSet::full(m);
    let mut value: Vec<u64> = (0..m)
        .map(|e| phi.evaluate(g, EdgeId(e as u32), &live))
        .collect();
    let mut queue: BTreeSet<(u64, u32)> = value
        .iter()
        .enumerate()
        .map(|(e, &w)| (w, e as u32))
        .collect();

    let mut level = 0u64;
    while let Some(&(w, e)) = queue.iter().next() {
        queue.remove(&(w, e));
        level = level.max(w);
        value[e as usize] = level;
        live.remove(EdgeId(e));
        for f in phi.affected(g, EdgeId(e), &live) {
            let old = value[f.index()];
            if old > level {
                let fresh = level.max(phi.evaluate(g, f, &live));
                if fresh != old {
                    queue.remove(&(old, f.0));
                    queue.insert((fresh, f.0));
                    value[f.index()] = fresh;
                }
            }
        }
    }

    DecompositionResult {
        kind: phi.kind(),
        delta: phi.delta(),
        values: value,
    }
}

/// Bucket queue over edges in the style of the classic linear-time core
/// decomposition: `order` holds the edges sorted by current weight,
/// `bin[w]` is the first position of bucket `w`, and a weight decrement is
/// an O(1) swap with the bucket head.
struct BucketPeel {
    order: Vec<u32>,
    pos: Vec<u32>,
    bin: Vec<u32>,
    weight: Vec<u64>,
}

impl BucketPeel {
    fn new(weight: Vec<u64>) -> Self {
        let m = weight.len();
        let max_w = weight.iter().copied().max().unwrap_or(0) as usize;
        let mut bin = vec![0u32; max_w + 2];
        for &w in &weight {
            bin[w as usize + 1] += 1;
        }
        for w in 0..=max_w {
            bin[w + 1] += bin[w];
        }
        let mut cursor = bin.clone();
        let mut order = vec![0u32; m];
        let mut pos = vec![0u32; m];
        for e in 0..m {
            let w = weight[e] as usize;
            order[cursor[w] as usize] = e as u32;
            pos[e] = cursor[w];
            cursor[w] += 1;
        }
        BucketPeel {
            order,
            pos,
            bin,
            weight,
        }
    }

    /// Moves `e` down one bucket. `e` must be unprocessed with weight above
    /// the current peel level.
    #[inline]
    fn decrement(&mut self, e: u32) {
        let w = self.weight[e as usize] as usize;
        let pe = self.pos[e as usize];
        let head = self.bin[w];
        let occupant = self.order[head as usize];
        if occupant != e {
            self.order[pe as usize] = occupant;
            self.order[head as usize] = e;
            self.pos[occupant as usize] = pe;
            self.pos[e as usize] = head;
        }
        self.bin[w] += 1;
        self.weight[e as usize] -= 1;
    }
}

/// (k,Δ)-core decomposition: specialized peeling over the Δ-degree.
///
/// Per-edge endpoint counters are initialized by binary search on the
/// chronological incidence lists; processing an edge decrements the shared
/// endpoint counter of every Δ-incident edge still above the current level
/// and moves it between buckets in O(1).
pub fn kd_core_decompose(g: &TemporalGraph, delta: Time) -> DecompositionResult {
    assert!(delta >= 0, "delta must be non-negative");
    let m = g.edge_count();
    let mut counts = vec![[0u64; 2]; m];
    let mut degree = vec![0u64; m];
    for (i, e) in g.edges().iter().enumerate() {
        let cu = g.delta_window_count(e.u, e.t, delta) as u64;
        let cv = g.delta_window_count(e.v, e.t, delta) as u64;
        counts[i] = [cu, cv];
        degree[i] = cu.min(cv);
    }

    let mut peel = BucketPeel::new(degree);
    let mut floor = 0u64;
    for i in 0..m {
        let e = peel.order[i];
        let level = peel.weight[e as usize];
        debug_assert!(level >= floor, "peel levels must be nondecreasing");
        floor = level;
        let ed = g.edge(EdgeId(e));
        let (t, u, v) = (ed.t, ed.u, ed.v);
        for x in [u, v] {
            for en in g.delta_window(x, t, delta) {
                let f = en.edge.index();
                // weight above the level implies f is still unprocessed
                if peel.weight[f] > level {
                    let side = usize::from(g.edge(en.edge).u != x);
                    counts[f][side] -= 1;
                    if counts[f][0].min(counts[f][1]) < peel.weight[f] {
                        peel.decrement(f as u32);
                    }
                }
            }
        }
    }

    DecompositionResult {
        kind: DecompositionKind::Core,
        delta,
        values: peel.weight,
    }
}

/// (k,Δ)-truss decomposition: specialized peeling over the Δ-support.
///
/// Removing an edge enumerates its surviving triangle pairs through the two
/// endpoint windows and decrements each partner still above the level.
pub fn kd_truss_decompose(g: &TemporalGraph, delta: Time) -> DecompositionResult {
    assert!(delta >= 0, "delta must be non-negative");
    let m = g.edge_count();
    let support: Vec<u64> = (0..m)
        .map(|e| count_support(g, EdgeId(e as u32), delta, None))
        .collect();

    let mut peel = BucketPeel::new(support);
    let mut floor = 0u64;
    for i in 0..m {
        let e = peel.order[i];
        let level = peel.weight[e as usize];
        debug_assert!(level >= floor, "peel levels must be nondecreasing");
        floor = level;
        let ed = g.edge(EdgeId(e));
        let wu = g.delta_window(ed.u, ed.t, delta);
        let wv = g.delta_window(ed.v, ed.t, delta);
        for a in wu {
            // liveness here really is "not yet processed": equal-level
            // partners still form triangles whose other member must drop
            if a.other == ed.v || peel.pos[a.edge.index()] as usize <= i {
                continue;
            }
            for b in wv {
                if b.other != a.other
                    || peel.pos[b.edge.index()] as usize <= i
                    || !within_delta(a.t, b.t, delta)
                {
                    continue;
                }
                if peel.weight[a.edge.index()] > level {
                    peel.decrement(a.edge.0);
                }
                if peel.weight[b.edge.index()] > level {
                    peel.decrement(b.edge.0);
                }
            }
        }
    }

    DecompositionResult {
        kind: DecompositionKind::Truss,
        delta,
        values: peel.weight,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtractMode {
    /// Edges with value >= k: the (k,Δ)-core or (k,Δ)-truss.
    AtLeast,
    /// Edges with value exactly k: the (k,Δ)-shell.
    Exactly,
}

/// Maps the dense ids of an extracted subgraph back to the source graph.
#[derive(Clone, Debug, Default)]
pub struct SubgraphMap {
    /// Original node id of each subgraph node, indexed by new node id.
    pub nodes: Vec<crate::graph::NodeId>,
    /// Original edge id of each subgraph edge, indexed by new edge id.
    pub edges: Vec<EdgeId>,
}

/// Edge-induced subgraph of the edges selected by `result`, `k`, and `mode`.
/// Node tokens carry over, so results stay joinable with the source data.
pub fn extract_subgraph(
    g: &TemporalGraph,
    result: &DecompositionResult,
    k: u64,
    mode: ExtractMode,
) -> Result<(TemporalGraph, SubgraphMap), DecomposeError> {
    if result.values.len() != g.edge_count() {
        return Err(DecomposeError::ResultMismatch {
            values: result.values.len(),
            edges: g.edge_count(),
        });
    }
    let keep = |value: u64| match mode {
        ExtractMode::AtLeast => value >= k,
        ExtractMode::Exactly => value == k,
    };

    let mut node_map = vec![u32::MAX; g.node_count()];
    let mut map = SubgraphMap::default();
    let mut tokens = Vec::new();
    // nodes numbered in ascending original id for determinism
    for e in g.edges() {
        if keep(result.values[e.id.index()]) {
            node_map[e.u.index()] = 0;
            node_map[e.v.index()] = 0;
        }
    }
    for (u, slot) in node_map.iter_mut().enumerate() {
        if *slot == 0 {
            *slot = map.nodes.len() as u32;
            map.nodes.push(crate::graph::NodeId(u as u32));
            tokens.push(g.token(crate::graph::NodeId(u as u32)).to_string());
        } else {
            *slot = u32::MAX;
        }
    }

    let mut edges = Vec::new();
    for e in g.edges() {
        if keep(result.values[e.id.index()]) {
            let id = EdgeId(edges.len() as u32);
            map.edges.push(e.id);
            edges.push(crate::graph::TemporalEdge {
                id,
                u: crate::graph::NodeId(node_map[e.u.index()]),
                v: crate::graph::NodeId(node_map[e.v.index()]),
                t: e.t,
                label: e.label,
            });
        }
    }

    Ok((
        TemporalGraph::from_parts(tokens, edges, g.labeled()),
        map,
    ))
}

/// Serializes a decomposition result: `# kind=... delta=...` headers, the
/// node token dictionary, then one `edge_id u v t value` row per edge,
/// tab-separated.
pub fn write_result<W: Write>(
    g: &TemporalGraph,
    result: &DecompositionResult,
    extra_headers: &[String],
    mut out: W,
) -> io::Result<()> {
    writeln!(out, "# kind={} delta={}", result.kind.as_str(), result.delta)?;
    for h in extra_headers {
        writeln!(out, "# {h}")?;
    }
    writeln!(out, "# nodes={} edges={}", g.node_count(), g.edge_count())?;
    for u in g.node_ids() {
        writeln!(out, "# node\t{}\t{}", u, g.token(u))?;
    }
    for e in g.edges() {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            e.id,
            g.token(e.u),
            g.token(e.v),
            e.t,
            result.values[e.id.index()]
        )?;
    }
    Ok(())
}
