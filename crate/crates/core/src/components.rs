//! Δ-connected components via the static Δ-representation.
//!
//! The temporal graph is transformed into a static graph over time-nodes
//! `(u, t)`: warp edges join consecutive time-nodes of the same node whose
//! gap is at most Δ, and each temporal edge contributes one edge between its
//! two time-nodes. Ordinary connected components of that graph correspond
//! one-to-one to the Δ-connected components of the temporal graph, so the
//! whole decomposition runs in linear time and space.

use std::io::{self, Write};

use thiserror::Error;

use crate::decompose::{
    delta_degree, delta_support, DecompositionKind, DecompositionResult,
};
use crate::graph::{EdgeId, EdgeSet, NodeId, TemporalGraph, Time};

/// A node observed at one specific timestamp.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TimeNode {
    pub node: NodeId,
    pub t: Time,
}

/// Static Δ-representation `S_Δ(G)`; time-nodes are deduplicated per
/// `(node, t)` and densely indexed.
#[derive(Clone, Debug)]
pub struct StaticDeltaRepresentation {
    pub delta: Time,
    pub time_nodes: Vec<TimeNode>,
    /// Pairs of consecutive same-node time-nodes with `0 < gap <= delta`.
    pub warp_edges: Vec<(u32, u32)>,
    /// One `(time-node of u, time-node of v)` pair per temporal edge,
    /// indexed by the originating edge id.
    pub edge_edges: Vec<(u32, u32)>,
}

/// Disjoint edge-id sets forming the Δ-connected components. Components are
/// ordered by their smallest contained edge id, edge ids ascend within each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePartition {
    pub delta: Time,
    pub components: Vec<Vec<EdgeId>>,
    pub component_of: Vec<u32>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComponentsError {
    #[error("delta mismatch: partition built with {partition}, result with {result}")]
    DeltaMismatch { partition: Time, result: Time },
    #[error("partition covers {covered} edges but the graph has {edges}")]
    PartitionMismatch { covered: usize, edges: usize },
}

/// Builds `S_Δ(G)` in one pass over the sorted incidence lists, touching
/// each edge O(1) times.
pub fn build_static_representation(
    g: &TemporalGraph,
    delta: Time,
) -> StaticDeltaRepresentation {
    assert!(delta >= 0, "delta must be non-negative");
    let m = g.edge_count();
    let mut time_nodes = Vec::new();
    let mut warp_edges = Vec::new();
    let mut edge_tn = vec![(u32::MAX, u32::MAX); m];

    for u in g.node_ids() {
        let mut last: Option<(Time, u32)> = None;
        for en in g.incidence(u) {
            let tn = match last {
                Some((t, id)) if t == en.t => id,
                _ => {
                    let id = time_nodes.len() as u32;
                    if let Some((t, prev)) = last {
                        // gap is positive here; consecutive pairs only
                        if en.t.saturating_sub(t) <= delta {
                            warp_edges.push((prev, id));
                        }
                    }
                    time_nodes.push(TimeNode { node: u, t: en.t });
                    last = Some((en.t, id));
                    id
                }
            };
            let slot = &mut edge_tn[en.edge.index()];
            if g.edge(en.edge).u == u {
                slot.0 = tn;
            } else {
                slot.1 = tn;
            }
        }
    }

    debug_assert!(edge_tn.iter().all(|&(a, b)| a != u32::MAX && b != u32::MAX));
    StaticDeltaRepresentation {
        delta,
        time_nodes,
        warp_edges,
        edge_edges: edge_tn,
    }
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut x = x;
        while self.parent[x as usize] != x {
            // path halving
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let mut ra = self.find(a);
        let mut rb = self.find(b);
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
    }
}

/// Partitions the edges of `g` into Δ-connected components: the maximal
/// classes of pairwise Δ-reachability. An edge without any Δ-incident
/// partner forms a singleton component.
pub fn delta_connected_components(g: &TemporalGraph, delta: Time) -> EdgePartition {
    let rep = build_static_representation(g, delta);
    let mut uf = UnionFind::new(rep.time_nodes.len());
    for &(a, b) in &rep.warp_edges {
        uf.union(a, b);
    }
    for &(a, b) in &rep.edge_edges {
        uf.union(a, b);
    }

    let m = g.edge_count();
    let mut root_component = vec![u32::MAX; rep.time_nodes.len()];
    let mut components: Vec<Vec<EdgeId>> = Vec::new();
    let mut component_of = vec![0u32; m];
    for (e, slot) in component_of.iter_mut().enumerate() {
        let root = uf.find(rep.edge_edges[e].0);
        let idx = if root_component[root as usize] == u32::MAX {
            let idx = components.len() as u32;
            root_component[root as usize] = idx;
            components.push(Vec::new());
            idx
        } else {
            root_component[root as usize]
        };
        components[idx as usize].push(EdgeId(e as u32));
        *slot = idx;
    }

    EdgePartition {
        delta,
        components,
        component_of,
    }
}

/// Checks the defining bound inside every component: taken alone as an edge
/// set, each component must give each of its edges a Δ-degree (core mode)
/// or Δ-support (truss mode) of at least `k`.
pub fn component_core_check(
    g: &TemporalGraph,
    partition: &EdgePartition,
    result: &DecompositionResult,
    k: u64,
) -> Result<bool, ComponentsError> {
    if partition.delta != result.delta {
        return Err(ComponentsError::DeltaMismatch {
            partition: partition.delta,
            result: result.delta,
        });
    }
    let covered: usize = partition.components.iter().map(Vec::len).sum();
    if covered != g.edge_count() || partition.component_of.len() != g.edge_count() {
        return Err(ComponentsError::PartitionMismatch {
            covered,
            edges: g.edge_count(),
        });
    }
    let delta = partition.delta;
    for comp in &partition.components {
        let live = EdgeSet::from_ids(g.edge_count(), comp.iter().copied());
        for &e in comp {
            let w = match result.kind {
                DecompositionKind::Core => delta_degree(g, e, &live, delta),
                DecompositionKind::Truss => delta_support(g, e, &live, delta),
            }
            .expect("component members are live by construction");
            if w < k {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Serializes a partition: one `component_id edge_id u v t` row per edge,
/// tab-separated, followed by a summary block (component count and a
/// size histogram) as comment lines. When the partition was computed on an
/// extracted subgraph, pass the subgraph-to-source edge map as `source_ids`
/// so the rows carry source edge ids.
pub fn write_partition<W: Write>(
    g: &TemporalGraph,
    partition: &EdgePartition,
    source_ids: Option<&[EdgeId]>,
    extra_headers: &[String],
    mut out: W,
) -> io::Result<()> {
    writeln!(out, "# kind=components delta={}", partition.delta)?;
    for h in extra_headers {
        writeln!(out, "# {h}")?;
    }
    writeln!(out, "# nodes={} edges={}", g.node_count(), g.edge_count())?;
    for u in g.node_ids() {
        writeln!(out, "# node\t{}\t{}", u, g.token(u))?;
    }
    for (idx, comp) in partition.components.iter().enumerate() {
        for &e in comp {
            let ed = g.edge(e);
            let shown = source_ids.map_or(ed.id, |ids| ids[e.index()]);
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                idx,
                shown,
                g.token(ed.u),
                g.token(ed.v),
                ed.t
            )?;
        }
    }
    writeln!(out, "# components={}", partition.components.len())?;
    let mut sizes: Vec<usize> = partition.components.iter().map(Vec::len).collect();
    sizes.sort_unstable();
    let mut i = 0;
    while i < sizes.len() {
        let j = sizes[i..].partition_point(|&s| s == sizes[i]) + i;
        writeln!(out, "# size\t{}\t{}", sizes[i], j - i)?;
        i = j;
    }
    Ok(())
}
