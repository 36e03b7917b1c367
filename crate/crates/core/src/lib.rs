//! Exact distance-balance checks for generalized Petersen graphs `GP(n,k)`.
//!
//! - [`graph`]: construction, BFS distances, diameter, edge-list I/O.
//! - [`balance`]: `W_xy` partitions and the ℓ-distance-balanced decision.
//! - [`oracle`]: closed-form counts, bounds and threshold predictions.
//! - [`scan`]: parallel sweeps comparing the two.

pub mod balance;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod scan;

pub use balance::{
    is_l_distance_balanced, lemma_imbalance, partition, partition_with_sets, BalanceChecker,
    BalancePartition, Side, Verdict, Witness,
};
pub use error::{Error, Result};
pub use graph::{bfs_distances, diameter, gp_construct, DistanceVector, GpParams, Graph, VertexId, VertexKind};
pub use oracle::{predict, Prediction, Rational, Status};
pub use scan::{probe_conjecture, run_scan, run_scan_with, ScanRecord, ScanRequest};
