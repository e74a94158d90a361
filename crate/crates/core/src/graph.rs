//! Temporal graph storage: parsing, validation, and the chronologically
//! sorted incidence lists that the peeling algorithms rely on.
//!
//! A graph is immutable once built. Node tokens from the input are interned
//! to dense [`NodeId`]s in first-appearance order; every temporal edge gets a
//! dense, stable [`EdgeId`]. Duplicate input lines are kept as distinct edges
//! (multiset semantics), self-loops are rejected.

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use flate2::bufread::MultiGzDecoder;
use thiserror::Error;

/// Timestamps are signed 64-bit integers; no time unit is assumed.
pub type Time = i64;

/// Dense node index, assigned in first-appearance order while loading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

/// Dense edge index; the stable identity of a temporal edge in its graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::fmt::Display for EdgeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An undirected edge `{u,v}` existing at one discrete time step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemporalEdge {
    pub id: EdgeId,
    pub u: NodeId,
    pub v: NodeId,
    pub t: Time,
    pub label: Option<u32>,
}

impl TemporalEdge {
    /// The endpoint opposite to `x`; `x` must be one of the endpoints.
    #[inline]
    pub fn other(&self, x: NodeId) -> NodeId {
        if self.u == x {
            self.v
        } else {
            debug_assert_eq!(self.v, x);
            self.u
        }
    }

    #[inline]
    pub fn is_incident(&self, x: NodeId) -> bool {
        self.u == x || self.v == x
    }
}

/// `true` iff `|t1 - t2| <= delta`, without overflow on extreme timestamps.
#[inline]
pub fn within_delta(t1: Time, t2: Time, delta: Time) -> bool {
    debug_assert!(delta >= 0);
    (t1 as i128 - t2 as i128).unsigned_abs() <= delta as u128
}

/// Closed interval `[alpha, beta]` restricting which edges are loaded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TimeInterval {
    alpha: Time,
    beta: Time,
}

impl TimeInterval {
    pub fn new(alpha: Time, beta: Time) -> Result<Self, GraphError> {
        if alpha > beta {
            return Err(GraphError::InvalidInterval { alpha, beta });
        }
        Ok(TimeInterval { alpha, beta })
    }

    #[inline]
    pub fn alpha(&self) -> Time {
        self.alpha
    }

    #[inline]
    pub fn beta(&self) -> Time {
        self.beta
    }

    #[inline]
    pub fn contains(&self, t: Time) -> bool {
        self.alpha <= t && t <= self.beta
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("operation requires a non-empty graph")]
    EmptyGraph,
    #[error("invalid interval: alpha {alpha} > beta {beta}")]
    InvalidInterval { alpha: Time, beta: Time },
    #[error("self-loop {0:?} rejected")]
    SelfLoop(String),
    #[error("graph mixes labeled and unlabeled edges")]
    MixedLabels,
}

/// One entry of a node's incidence list, sorted by `(t, edge)` ascending.
#[derive(Clone, Copy, Debug)]
pub struct IncidenceEntry {
    pub t: Time,
    pub edge: EdgeId,
    pub other: NodeId,
}

/// Immutable temporal graph with per-node chronological incidence lists.
#[derive(Debug)]
pub struct TemporalGraph {
    tokens: Vec<String>,
    edges: Vec<TemporalEdge>,
    inc_off: Vec<usize>,
    inc: Vec<IncidenceEntry>,
    span: Option<(Time, Time)>,
    labeled: bool,
}

impl TemporalGraph {
    pub(crate) fn from_parts(tokens: Vec<String>, edges: Vec<TemporalEdge>, labeled: bool) -> Self {
        let n = tokens.len();
        let m = edges.len();
        assert!(m <= u32::MAX as usize, "edge count exceeds the u32 id space");

        let mut counts = vec![0usize; n];
        for e in &edges {
            counts[e.u.index()] += 1;
            counts[e.v.index()] += 1;
        }
        let mut inc_off = vec![0usize; n + 1];
        for u in 0..n {
            inc_off[u + 1] = inc_off[u] + counts[u];
        }
        let mut cursor = inc_off.clone();
        let mut inc = vec![
            IncidenceEntry {
                t: 0,
                edge: EdgeId(0),
                other: NodeId(0),
            };
            2 * m
        ];
        for e in &edges {
            inc[cursor[e.u.index()]] = IncidenceEntry {
                t: e.t,
                edge: e.id,
                other: e.v,
            };
            cursor[e.u.index()] += 1;
            inc[cursor[e.v.index()]] = IncidenceEntry {
                t: e.t,
                edge: e.id,
                other: e.u,
            };
            cursor[e.v.index()] += 1;
        }
        for u in 0..n {
            inc[inc_off[u]..inc_off[u + 1]].sort_unstable_by_key(|en| (en.t, en.edge));
        }

        let span = edges
            .iter()
            .map(|e| e.t)
            .fold(None, |acc: Option<(Time, Time)>, t| match acc {
                None => Some((t, t)),
                Some((lo, hi)) => Some((lo.min(t), hi.max(t))),
            });

        TemporalGraph {
            tokens,
            edges,
            inc_off,
            inc,
            span,
            labeled,
        }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.tokens.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[TemporalEdge] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> &TemporalEdge {
        &self.edges[e.index()]
    }

    #[inline]
    pub fn token(&self, u: NodeId) -> &str {
        &self.tokens[u.index()]
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.tokens.len() as u32).map(NodeId)
    }

    /// `[min t, max t]` over all edges, `None` for the empty graph.
    #[inline]
    pub fn span(&self) -> Option<(Time, Time)> {
        self.span
    }

    #[inline]
    pub fn labeled(&self) -> bool {
        self.labeled
    }

    /// The incidence list of `u`, sorted by `(t, edge)` ascending.
    #[inline]
    pub fn incidence(&self, u: NodeId) -> &[IncidenceEntry] {
        &self.inc[self.inc_off[u.index()]..self.inc_off[u.index() + 1]]
    }

    /// Incidence entries of `u` with timestamp in `[t - delta, t + delta]`,
    /// located by binary search.
    pub fn delta_window(&self, u: NodeId, t: Time, delta: Time) -> &[IncidenceEntry] {
        assert!(delta >= 0, "delta must be non-negative");
        let list = self.incidence(u);
        let lo_bound = t.saturating_sub(delta);
        let hi_bound = t.saturating_add(delta);
        let lo = list.partition_point(|en| en.t < lo_bound);
        let hi = list.partition_point(|en| en.t <= hi_bound);
        &list[lo..hi]
    }

    /// Number of edges at `u` with timestamp within `delta` of `t`.
    #[inline]
    pub fn delta_window_count(&self, u: NodeId, t: Time, delta: Time) -> usize {
        self.delta_window(u, t, delta).len()
    }

    /// Ids of all edges Δ-incident to `(u, t)`: every edge `({u,w}, t')` with
    /// `|t - t'| <= delta`. An edge at `(u, t)` itself is always included.
    pub fn delta_incident_edges(&self, u: NodeId, t: Time, delta: Time) -> Vec<EdgeId> {
        self.delta_window(u, t, delta)
            .iter()
            .map(|en| en.edge)
            .collect()
    }

    /// Largest per-node timestamp spread: `max_u (max_t(u) - min_t(u))`.
    ///
    /// At any `delta >= max_delta` every pair of edges sharing a node is
    /// Δ-incident and the decomposition degenerates to the static one.
    pub fn max_delta(&self) -> Result<Time, GraphError> {
        if self.edges.is_empty() {
            return Err(GraphError::EmptyGraph);
        }
        let mut best: Time = 0;
        for u in 0..self.tokens.len() {
            let list = &self.inc[self.inc_off[u]..self.inc_off[u + 1]];
            if let (Some(first), Some(last)) = (list.first(), list.last()) {
                best = best.max(last.t - first.t);
            }
        }
        Ok(best)
    }

    /// Serializes the graph as a plain edge list, one `u v t [label]` line
    /// per edge in edge-id order. Reloading yields identical edge arrays.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        for e in &self.edges {
            match e.label {
                Some(l) => writeln!(
                    out,
                    "{} {} {} {}",
                    self.token(e.u),
                    self.token(e.v),
                    e.t,
                    l
                )?,
                None => writeln!(out, "{} {} {}", self.token(e.u), self.token(e.v), e.t)?,
            }
        }
        Ok(())
    }
}

/// Incremental construction of a [`TemporalGraph`]; node tokens are interned
/// in first-appearance order.
pub struct GraphBuilder {
    labeled: bool,
    intern: HashMap<String, NodeId>,
    tokens: Vec<String>,
    edges: Vec<TemporalEdge>,
}

impl GraphBuilder {
    pub fn new(labeled: bool) -> Self {
        GraphBuilder {
            labeled,
            intern: HashMap::new(),
            tokens: Vec::new(),
            edges: Vec::new(),
        }
    }

    fn node(&mut self, token: &str) -> NodeId {
        if let Some(&id) = self.intern.get(token) {
            return id;
        }
        assert!(
            self.tokens.len() < u32::MAX as usize,
            "node count exceeds the u32 id space"
        );
        let id = NodeId(self.tokens.len() as u32);
        self.tokens.push(token.to_string());
        self.intern.insert(token.to_string(), id);
        id
    }

    fn push(
        &mut self,
        u: &str,
        v: &str,
        t: Time,
        label: Option<u32>,
    ) -> Result<EdgeId, GraphError> {
        if label.is_some() != self.labeled {
            return Err(GraphError::MixedLabels);
        }
        if u == v {
            return Err(GraphError::SelfLoop(u.to_string()));
        }
        assert!(
            self.edges.len() < u32::MAX as usize,
            "edge count exceeds the u32 id space"
        );
        let u = self.node(u);
        let v = self.node(v);
        let id = EdgeId(self.edges.len() as u32);
        self.edges.push(TemporalEdge { id, u, v, t, label });
        Ok(id)
    }

    pub fn add_edge(&mut self, u: &str, v: &str, t: Time) -> Result<EdgeId, GraphError> {
        self.push(u, v, t, None)
    }

    pub fn add_labeled_edge(
        &mut self,
        u: &str,
        v: &str,
        t: Time,
        label: u32,
    ) -> Result<EdgeId, GraphError> {
        self.push(u, v, t, Some(label))
    }

    pub fn finish(self) -> TemporalGraph {
        TemporalGraph::from_parts(self.tokens, self.edges, self.labeled)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct LoadOptions {
    pub interval: Option<TimeInterval>,
    pub labeled: bool,
}

/// Counts of what the loader saw; the CLI prints this to standard error.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub lines: u64,
    pub comments: u64,
    pub blank: u64,
    pub loaded: usize,
    pub self_loops_rejected: u64,
    pub outside_interval: u64,
}

impl std::fmt::Display for LoadReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "loaded {} edges (lines={} comments={} blank={} self_loops_rejected={} outside_interval={})",
            self.loaded,
            self.lines,
            self.comments,
            self.blank,
            self.self_loops_rejected,
            self.outside_interval
        )
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("line {line}: {reason}")]
    Malformed { line: u64, reason: String },
    #[error("line {line}: mixed labeled and unlabeled edges")]
    MixedLabels { line: u64 },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Parses a whitespace-separated edge list: one `u v t` (or `u v t label`
/// with `options.labeled`) per line. Lines starting with `#` or `%` are
/// comments; blank lines are skipped. Self-loops are rejected but only
/// counted, edges outside `options.interval` are dropped, duplicate lines
/// become distinct parallel edges.
pub fn load_graph<R: BufRead>(
    reader: R,
    options: &LoadOptions,
) -> Result<(TemporalGraph, LoadReport), LoadError> {
    let mut builder = GraphBuilder::new(options.labeled);
    let mut report = LoadReport::default();
    let expected = if options.labeled { 4 } else { 3 };

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx as u64 + 1;
        report.lines += 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            report.blank += 1;
            continue;
        }
        if trimmed.starts_with('#') || trimmed.starts_with('%') {
            report.comments += 1;
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != expected {
            if fields.len() == 3 || fields.len() == 4 {
                return Err(LoadError::MixedLabels { line: lineno });
            }
            return Err(LoadError::Malformed {
                line: lineno,
                reason: format!("expected {} fields, found {}", expected, fields.len()),
            });
        }
        let t: Time = fields[2].parse().map_err(|_| LoadError::Malformed {
            line: lineno,
            reason: format!("timestamp `{}` is not an integer", fields[2]),
        })?;
        let label = if options.labeled {
            Some(fields[3].parse::<u32>().map_err(|_| LoadError::Malformed {
                line: lineno,
                reason: format!("label `{}` is not a small non-negative integer", fields[3]),
            })?)
        } else {
            None
        };
        if let Some(iv) = &options.interval {
            if !iv.contains(t) {
                report.outside_interval += 1;
                continue;
            }
        }
        if fields[0] == fields[1] {
            report.self_loops_rejected += 1;
            continue;
        }
        match builder.push(fields[0], fields[1], t, label) {
            Ok(_) => {}
            Err(GraphError::MixedLabels) => return Err(LoadError::MixedLabels { line: lineno }),
            Err(e) => {
                return Err(LoadError::Malformed {
                    line: lineno,
                    reason: e.to_string(),
                })
            }
        }
    }
    let graph = builder.finish();
    report.loaded = graph.edge_count();
    Ok((graph, report))
}

/// Loads an edge list from any buffered reader, transparently decompressing
/// gzip input (detected by the `1f 8b` magic bytes).
pub fn load_graph_auto<R: BufRead>(
    mut reader: R,
    options: &LoadOptions,
) -> Result<(TemporalGraph, LoadReport), LoadError> {
    let magic = reader.fill_buf()?;
    if magic.starts_with(&[0x1f, 0x8b]) {
        load_graph(BufReader::new(MultiGzDecoder::new(reader)), options)
    } else {
        load_graph(reader, options)
    }
}

/// Loads an edge list from a file; gzip is detected by magic bytes.
pub fn load_graph_path<P: AsRef<Path>>(
    path: P,
    options: &LoadOptions,
) -> Result<(TemporalGraph, LoadReport), LoadError> {
    let file = File::open(path)?;
    load_graph_auto(BufReader::new(file), options)
}

/// A set of edge ids over a fixed graph, used as the "live" view during
/// peeling and in the oracles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSet {
    bits: Vec<bool>,
    len: usize,
}

impl EdgeSet {
    pub fn full(capacity: usize) -> Self {
        EdgeSet {
            bits: vec![true; capacity],
            len: capacity,
        }
    }

    pub fn empty(capacity: usize) -> Self {
        EdgeSet {
            bits: vec![false; capacity],
            len: 0,
        }
    }

    pub fn from_ids<I: IntoIterator<Item = EdgeId>>(capacity: usize, ids: I) -> Self {
        let mut s = EdgeSet::empty(capacity);
        for e in ids {
            s.insert(e);
        }
        s
    }

    /// Total id space (the owning graph's edge count), not the member count.
    #[inline]
    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, e: EdgeId) -> bool {
        self.bits[e.index()]
    }

    pub fn insert(&mut self, e: EdgeId) -> bool {
        if !self.bits[e.index()] {
            self.bits[e.index()] = true;
            self.len += 1;
            true
        } else {
            false
        }
    }

    pub fn remove(&mut self, e: EdgeId) -> bool {
        if self.bits[e.index()] {
            self.bits[e.index()] = false;
            self.len -= 1;
            true
        } else {
            false
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| EdgeId(i as u32))
    }
}
