//! Frequent subgraph mining on a single large labeled directed graph.
//!
//! Candidates of `k` vertices are built by merging frequent `(k-1)`-vertex
//! patterns; frequency is decided by a greedy maximal independent set of
//! vertex-disjoint embeddings against a threshold interpolated by a slider
//! between `support / k` and `support`.

pub mod canonical;
pub mod cli;
pub mod generation;
pub mod graph;
pub mod matcher;
pub mod metrics;
pub mod miner;
