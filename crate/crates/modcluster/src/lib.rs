//! Graph clustering analysis built around the reduction from modularity
//! maximization to small-set expansion.
//!
//! The crate provides:
//!
//! - [`graph`]: immutable simple graphs, node sets, 2-partitions, clusterings,
//!   and the edge-list interchange format;
//! - [`metrics`]: measure, expansion, density, and both modularity routes
//!   (definitional double sum and the simplified per-part form);
//! - [`spectral`]: re-regularized residual views, walk matrices, spectra, and
//!   tau-threshold rank;
//! - [`sse`]: small-set-expansion solvers with explicit contracts and the
//!   repeated high-rank extraction loop;
//! - [`distinguisher`]: the HIGH/LOW promise distinguisher with exact
//!   modularity certificates, plus the derived parameter-bound chains;
//! - [`generators`]: deterministic benchmark families with known optima;
//! - [`oracle`]: exhaustive exact optima for desk-scale validation.

pub mod distinguisher;
pub mod generators;
pub mod graph;
pub mod metrics;
pub mod oracle;
pub mod profile;
pub mod spectral;
pub mod sse;

pub use distinguisher::{
    dstar_lower_bound, guess_grid, mu_feasible_range, run as distinguish, verify_paper_bounds,
    Decision, DistinguisherReport,
};
pub use graph::{Clustering, Graph, NodeSet, TwoPartition};
pub use metrics::{
    clustering_metrics, expansion, measure, modularity_clustering, modularity_set,
    two_cluster_objective, SetMetrics,
};
pub use profile::ParamProfile;
pub use spectral::{threshold_rank, walk_matrix, ResidualView};
pub use sse::{extract_partition, sse_high_rank_extract, sse_low_rank};
