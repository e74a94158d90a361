//! Hierarchical decomposition of temporal networks by edge peeling.
//!
//! A temporal network is a graph whose edges carry integer timestamps. This
//! crate decomposes such networks into (k,Δ)-cores and (k,Δ)-trusses —
//! edge-induced subgraphs in which every edge keeps at least k temporally
//! local neighbors or triangles — and further splits them into Δ-connected
//! components. All decompositions are instances of one peeling framework
//! over monotone edge weight functions.
//!
//! Modules:
//! - [`graph`]: immutable temporal graph storage, parsing, incidence indexes
//! - [`decompose`]: the peeling framework and the core/truss instantiations
//! - [`components`]: Δ-connected components via the static Δ-representation
//! - [`stats`]: IET percentiles for Δ selection, per-Δ statistics, label
//!   analytics
//! - [`oracle`]: slow brute-force references, used by tests and `verify`
//! - [`synth`]: deterministic random graphs for benchmarks and tests

pub mod components;
pub mod decompose;
pub mod graph;
pub mod oracle;
pub mod stats;
pub mod synth;

pub use components::{
    build_static_representation, component_core_check, delta_connected_components,
    EdgePartition, StaticDeltaRepresentation, TimeNode,
};
pub use decompose::{
    delta_degree, delta_support, extract_subgraph, generic_decompose, kd_core_decompose,
    kd_truss_decompose, DecompositionKind, DecompositionResult, EdgeWeight, ExtractMode,
};
pub use graph::{
    load_graph, load_graph_auto, load_graph_path, EdgeId, EdgeSet, GraphBuilder, LoadOptions,
    LoadReport, NodeId, TemporalEdge, TemporalGraph, Time, TimeInterval,
};
pub use stats::{
    clustering_coefficient, component_label_report, delta_stats, iet_percentiles,
    ComponentLabelReport, DeltaStats, HomophilyClass, IetSummary,
};
