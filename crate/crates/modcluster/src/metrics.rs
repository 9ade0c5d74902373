//! Scalar metrics of node sets and clusterings: measure, expansion, density,
//! and modularity.
//!
//! `modularity_set` evaluates the definitional double sum over ordered node
//! pairs; `modularity_clustering` evaluates the algebraically simplified
//! per-part form `sum_i (m_i/m - (D_i/2m)^2)`. The two are independent code
//! paths kept that way on purpose so they can be checked against each other.

use crate::graph::{Clustering, Graph, NodeSet};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("set must be non-empty")]
    EmptySet,
    #[error("set must be a proper subset of the nodes")]
    FullSet,
    #[error("graph has no edges; modularity is undefined")]
    NoEdges,
    #[error("set has zero total degree; expansion is undefined")]
    IsolatedSet,
    #[error("node {node} out of range for graph on {n} nodes")]
    OutOfRange { node: u32, n: usize },
}

fn check_universe(g: &Graph, s: &NodeSet) -> Result<(), MetricsError> {
    s.check_universe(g.n()).map_err(|_| MetricsError::OutOfRange {
        node: s.as_slice().last().copied().unwrap_or(0),
        n: g.n(),
    })
}

/// Normalized measure mu(S) = |S|/n for a non-empty proper subset.
pub fn measure(g: &Graph, s: &NodeSet) -> Result<f64, MetricsError> {
    check_universe(g, s)?;
    if s.is_empty() {
        return Err(MetricsError::EmptySet);
    }
    if s.len() >= g.n() {
        return Err(MetricsError::FullSet);
    }
    Ok(s.len() as f64 / g.n() as f64)
}

/// Number of edges with exactly one endpoint in `s`.
pub fn cut_size(g: &Graph, s: &NodeSet) -> usize {
    let mut cut = 0;
    for v in s.iter() {
        for &w in g.neighbors(v) {
            if !s.contains(w) {
                cut += 1;
            }
        }
    }
    cut
}

/// Sum of degrees over `s`.
pub fn degree_sum(g: &Graph, s: &NodeSet) -> usize {
    s.iter().map(|v| g.degree(v) as usize).sum()
}

/// Normalized expansion Phi(S): cut edges over the degree sum of S.
pub fn expansion(g: &Graph, s: &NodeSet) -> Result<f64, MetricsError> {
    check_universe(g, s)?;
    if s.is_empty() {
        return Err(MetricsError::EmptySet);
    }
    if s.len() >= g.n() {
        return Err(MetricsError::FullSet);
    }
    let denom = degree_sum(g, s);
    if denom == 0 {
        return Err(MetricsError::IsolatedSet);
    }
    Ok(cut_size(g, s) as f64 / denom as f64)
}

/// Normalized density D(S) = 1 - Phi(S).
pub fn density(g: &Graph, s: &NodeSet) -> Result<f64, MetricsError> {
    Ok(1.0 - expansion(g, s)?)
}

/// Modularity of a single set: `(1/2m) * sum_{u,v in S} (a_uv - d_u d_v / 2m)`
/// with the sum over ordered pairs, so each internal edge contributes twice.
///
/// Unlike `measure` and `expansion`, `s = V` is allowed (the one-community
/// clustering is legal) and evaluates to 0.
pub fn modularity_set(g: &Graph, s: &NodeSet) -> Result<f64, MetricsError> {
    check_universe(g, s)?;
    if s.is_empty() {
        return Err(MetricsError::EmptySet);
    }
    if g.m() == 0 {
        return Err(MetricsError::NoEdges);
    }
    let two_m = 2.0 * g.m() as f64;
    let mut sum = 0.0;
    for u in s.iter() {
        for v in s.iter() {
            let a = if g.has_edge(u, v) { 1.0 } else { 0.0 };
            sum += a - g.degree(u) as f64 * g.degree(v) as f64 / two_m;
        }
    }
    Ok(sum / two_m)
}

/// All single-set metrics bundled; `density` is exactly `1 - phi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SetMetrics {
    pub mu: f64,
    pub phi: f64,
    pub density: f64,
    pub modularity: f64,
}

impl SetMetrics {
    pub fn compute(g: &Graph, s: &NodeSet) -> Result<Self, MetricsError> {
        let mu = measure(g, s)?;
        let phi = expansion(g, s)?;
        Ok(SetMetrics { mu, phi, density: 1.0 - phi, modularity: modularity_set(g, s)? })
    }
}

/// Per-part edge and degree statistics of a clustering.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusteringMetrics {
    /// m_i: edges with both endpoints in part i.
    pub internal_edges: Vec<usize>,
    /// D_i: degree sums per part.
    pub degree_sums: Vec<usize>,
    /// m_ij for i < j, keyed (i, j): edges with one endpoint in each.
    pub cross_edges: Vec<((usize, usize), usize)>,
    /// sum_i (m_i/m - (D_i/2m)^2)
    pub modularity: f64,
}

/// Computes per-part statistics and the simplified modularity
/// `sum_i (m_i/m - (D_i/2m)^2)` in one edge pass.
pub fn clustering_metrics(g: &Graph, c: &Clustering) -> Result<ClusteringMetrics, MetricsError> {
    if g.m() == 0 {
        return Err(MetricsError::NoEdges);
    }
    let k = c.k();
    let mut part_of = vec![usize::MAX; g.n()];
    for (i, part) in c.parts().iter().enumerate() {
        for v in part.iter() {
            if v as usize >= g.n() {
                return Err(MetricsError::OutOfRange { node: v, n: g.n() });
            }
            part_of[v as usize] = i;
        }
    }
    let mut internal = vec![0usize; k];
    let mut cross = std::collections::BTreeMap::new();
    for &(u, v) in g.edges() {
        let (pu, pv) = (part_of[u as usize], part_of[v as usize]);
        if pu == pv {
            internal[pu] += 1;
        } else {
            *cross.entry((pu.min(pv), pu.max(pv))).or_insert(0usize) += 1;
        }
    }
    let mut degree_sums = vec![0usize; k];
    for (i, part) in c.parts().iter().enumerate() {
        degree_sums[i] = degree_sum(g, part);
    }
    let m = g.m() as f64;
    let two_m = 2.0 * m;
    let modularity = (0..k)
        .map(|i| internal[i] as f64 / m - (degree_sums[i] as f64 / two_m).powi(2))
        .sum();
    Ok(ClusteringMetrics {
        internal_edges: internal,
        degree_sums,
        cross_edges: cross.into_iter().collect(),
        modularity,
    })
}

/// Modularity of a clustering via the simplified per-part form.
pub fn modularity_clustering(g: &Graph, c: &Clustering) -> Result<f64, MetricsError> {
    Ok(clustering_metrics(g, c)?.modularity)
}

/// The 2-clustering objective f(mu, D) = 2(mu*D - mu^2).
///
/// For a d-regular graph and 2-partition {S, complement} this equals the
/// partition's modularity exactly when evaluated at mu(S), D(S).
pub fn two_cluster_objective(mu: f64, density: f64) -> f64 {
    2.0 * (mu * density - mu * mu)
}
