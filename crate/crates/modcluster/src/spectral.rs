//! Walk matrices, their spectra, and tau-threshold rank.
//!
//! A `ResidualView` is a d-regular base graph minus a removed node set,
//! re-regularized by self-loops: each surviving node v gets diagonal weight
//! (d - deg'(v))/d, which restores row sums to 1 while keeping the matrix
//! symmetric. With the loop-counted-twice degree convention this is the same
//! as one self-loop of weight 1/2 per lost edge endpoint.

use crate::graph::{Graph, NodeSet};
use nalgebra::DMatrix;
use serde::Serialize;
use thiserror::Error;

/// Slack added to |lambda| > tau comparisons so eigensolver noise cannot
/// flip rank counts at exact boundaries.
pub const EIG_BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpectralError {
    #[error("base graph is not regular")]
    NonRegular,
    #[error("all nodes removed; residual view is empty")]
    EmptyResidual,
    #[error("removed set contains node {node} outside the graph on {n} nodes")]
    OutOfRange { node: u32, n: usize },
    #[error("set is not contained in the surviving nodes")]
    NotInView,
    #[error("set must be a non-empty subset of survivors")]
    EmptySet,
}

/// A d-regular graph with a subset of nodes removed and the survivors
/// re-regularized via weighted self-loops.
#[derive(Debug, Clone)]
pub struct ResidualView<'g> {
    base: &'g Graph,
    d: u32,
    removed: NodeSet,
    survivors: Vec<u32>,
    /// original id -> index into `survivors`, u32::MAX if removed
    index: Vec<u32>,
    /// residual degree (surviving neighbors) per original id, 0 if removed
    residual_degree: Vec<u32>,
}

impl<'g> ResidualView<'g> {
    pub fn new(base: &'g Graph, removed: &NodeSet) -> Result<Self, SpectralError> {
        let d = base.is_regular().ok_or(SpectralError::NonRegular)?;
        removed
            .check_universe(base.n())
            .map_err(|_| SpectralError::OutOfRange {
                node: removed.as_slice().last().copied().unwrap_or(0),
                n: base.n(),
            })?;
        if removed.len() >= base.n() {
            return Err(SpectralError::EmptyResidual);
        }
        let survivors: Vec<u32> = (0..base.n() as u32).filter(|&v| !removed.contains(v)).collect();
        let mut index = vec![u32::MAX; base.n()];
        for (i, &v) in survivors.iter().enumerate() {
            index[v as usize] = i as u32;
        }
        let mut residual_degree = vec![0u32; base.n()];
        for &v in &survivors {
            residual_degree[v as usize] =
                base.neighbors(v).iter().filter(|&&w| index[w as usize] != u32::MAX).count() as u32;
        }
        Ok(ResidualView { base, d, removed: removed.clone(), survivors, index, residual_degree })
    }

    /// View of the whole graph with nothing removed.
    pub fn fresh(base: &'g Graph) -> Result<Self, SpectralError> {
        ResidualView::new(base, &NodeSet::empty())
    }

    pub fn base(&self) -> &Graph {
        self.base
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn removed(&self) -> &NodeSet {
        &self.removed
    }

    /// Surviving node count r.
    pub fn order(&self) -> usize {
        self.survivors.len()
    }

    pub fn survivors(&self) -> &[u32] {
        &self.survivors
    }

    pub fn contains(&self, v: u32) -> bool {
        (v as usize) < self.index.len() && self.index[v as usize] != u32::MAX
    }

    /// Residual degree of a surviving node (surviving neighbors only).
    pub fn residual_degree(&self, v: u32) -> u32 {
        self.residual_degree[v as usize]
    }

    /// Surviving neighbors of a surviving node.
    pub fn surviving_neighbors<'a>(&'a self, v: u32) -> impl Iterator<Item = u32> + 'a {
        self.base.neighbors(v).iter().copied().filter(move |&w| self.contains(w))
    }

    /// Expansion of `s` inside the view: real (non-loop) edges leaving `s`
    /// for the rest of the survivors, over the re-regularized degree d*|S|.
    /// Self-loops never count as cut edges.
    pub fn expansion_of(&self, s: &NodeSet) -> Result<f64, SpectralError> {
        if s.is_empty() {
            return Err(SpectralError::EmptySet);
        }
        let mut cut = 0usize;
        for v in s.iter() {
            if !self.contains(v) {
                return Err(SpectralError::NotInView);
            }
            for w in self.surviving_neighbors(v) {
                if !s.contains(w) {
                    cut += 1;
                }
            }
        }
        Ok(cut as f64 / (self.d as usize * s.len()) as f64)
    }
}

/// Symmetric row-stochastic walk matrix of a (re-regularized) view.
#[derive(Debug, Clone)]
pub struct WalkMatrix {
    order: usize,
    mat: DMatrix<f64>,
}

impl WalkMatrix {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }
}

/// Builds the walk matrix: off-diagonal a_uv/d on surviving edges, diagonal
/// (d - deg'(v))/d. Row sums are d/d = 1 exactly in integer arithmetic.
pub fn walk_matrix(view: &ResidualView<'_>) -> WalkMatrix {
    let r = view.order();
    let d = view.d() as f64;
    let mut mat = DMatrix::<f64>::zeros(r, r);
    for (i, &v) in view.survivors().iter().enumerate() {
        let mut surviving = 0u32;
        for w in view.surviving_neighbors(v) {
            let j = view.index[w as usize] as usize;
            mat[(i, j)] = 1.0 / d;
            surviving += 1;
        }
        // integer identity: surviving + (d - deg') = d, so the row is stochastic
        assert_eq!(surviving, view.residual_degree(v));
        mat[(i, i)] = (view.d() - surviving) as f64 / d;
    }
    WalkMatrix { order: r, mat }
}

/// All eigenvalues of the symmetric walk matrix, sorted descending.
pub fn eigenvalues(w: &WalkMatrix) -> Vec<f64> {
    let mut vals: Vec<f64> = w.mat.clone().symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    vals
}

/// Eigenvalue/eigenvector pairs sorted by descending eigenvalue. Columns of
/// the returned matrix line up with the returned eigenvalues.
pub fn eigenpairs(w: &WalkMatrix) -> (Vec<f64>, DMatrix<f64>) {
    let se = nalgebra::SymmetricEigen::new(w.mat.clone());
    let mut order: Vec<usize> = (0..w.order).collect();
    order.sort_by(|&a, &b| se.eigenvalues[b].partial_cmp(&se.eigenvalues[a]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vecs = DMatrix::<f64>::zeros(w.order, w.order);
    for (new, &old) in order.iter().enumerate() {
        vecs.set_column(new, &se.eigenvectors.column(old));
    }
    (vals, vecs)
}

/// Spectrum of a view together with the rank it induces at one threshold.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralSummary {
    pub eigenvalues: Vec<f64>,
    pub tau: f64,
    pub rank: usize,
}

pub fn spectral_summary(view: &ResidualView<'_>, tau: f64) -> SpectralSummary {
    let vals = eigenvalues(&walk_matrix(view));
    let rank = count_above(&vals, tau);
    SpectralSummary { eigenvalues: vals, tau, rank }
}

fn count_above(eigenvalues: &[f64], tau: f64) -> usize {
    eigenvalues.iter().filter(|&&l| l.abs() > tau + EIG_BOUNDARY_TOL).count()
}

/// tau-threshold rank: the number of walk-matrix eigenvalues with
/// |lambda| > tau (+ boundary tolerance), counted with multiplicity.
pub fn threshold_rank(view: &ResidualView<'_>, tau: f64) -> usize {
    count_above(&eigenvalues(&walk_matrix(view)), tau)
}

/// Rank from a precomputed descending spectrum; same boundary rule.
pub fn threshold_rank_of_spectrum(eigenvalues: &[f64], tau: f64) -> usize {
    count_above(eigenvalues, tau)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn two_k4() -> Graph {
        let mut edges = Vec::new();
        for base in [0u32, 4] {
            for i in 0..4 {
                for j in (i + 1)..4 {
                    edges.push((base + i, base + j));
                }
            }
        }
        Graph::from_edges(8, &edges).unwrap()
    }

    fn c4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap()
    }

    #[test]
    fn fresh_walk_matrix_of_k4() {
        let g = k4();
        let view = ResidualView::fresh(&g).unwrap();
        let w = walk_matrix(&view);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 0.0 } else { 1.0 / 3.0 };
                assert_eq!(w.matrix()[(i, j)], want);
            }
        }
    }

    #[test]
    fn removing_a_disconnected_block_leaves_clean_walk_matrix() {
        let g = two_k4();
        let removed = NodeSet::new(vec![4, 5, 6, 7]).unwrap();
        let view = ResidualView::new(&g, &removed).unwrap();
        let w = walk_matrix(&view);
        assert_eq!(w.order(), 4);
        for i in 0..4 {
            assert_eq!(w.matrix()[(i, i)], 0.0);
        }
    }

    #[test]
    fn lost_endpoints_become_self_loops() {
        let g = c4();
        let view = ResidualView::new(&g, &NodeSet::new(vec![0]).unwrap()).unwrap();
        let w = walk_matrix(&view);
        // survivors 1,2,3 -> indices 0,1,2; node 2 kept both edges
        assert_eq!(w.matrix()[(0, 0)], 0.5);
        assert_eq!(w.matrix()[(1, 1)], 0.0);
        assert_eq!(w.matrix()[(2, 2)], 0.5);
        assert_eq!(w.matrix()[(0, 1)], 0.5);
        assert_eq!(w.matrix()[(1, 2)], 0.5);
        assert_eq!(w.matrix()[(0, 2)], 0.0);
        // rows sum to 1
        for i in 0..3 {
            let s: f64 = (0..3).map(|j| w.matrix()[(i, j)]).sum();
            assert!((s - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn k4_spectrum() {
        let g = k4();
        let vals = eigenvalues(&walk_matrix(&ResidualView::fresh(&g).unwrap()));
        assert!((vals[0] - 1.0).abs() < 1e-9);
        for &v in &vals[1..] {
            assert!((v + 1.0 / 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn disjoint_union_spectrum_is_the_union() {
        let g = two_k4();
        let vals = eigenvalues(&walk_matrix(&ResidualView::fresh(&g).unwrap()));
        assert!((vals[0] - 1.0).abs() < 1e-9);
        assert!((vals[1] - 1.0).abs() < 1e-9);
        for &v in &vals[2..] {
            assert!((v + 1.0 / 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn threshold_rank_goldens() {
        let k4g = k4();
        let fresh_k4 = ResidualView::fresh(&k4g).unwrap();
        assert_eq!(threshold_rank(&fresh_k4, 0.5), 1);
        let t = two_k4();
        let fresh_two = ResidualView::fresh(&t).unwrap();
        assert_eq!(threshold_rank(&fresh_two, 0.5), 2);
    }

    #[test]
    fn non_regular_base_is_rejected() {
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(ResidualView::fresh(&p3), Err(SpectralError::NonRegular)));
    }

    #[test]
    fn removing_everything_is_rejected() {
        let g = k4();
        assert!(matches!(
            ResidualView::new(&g, &NodeSet::full(4)),
            Err(SpectralError::EmptyResidual)
        ));
    }

    #[test]
    fn view_expansion_ignores_loops_and_uses_regular_denominator() {
        let g = c4();
        let view = ResidualView::new(&g, &NodeSet::new(vec![0]).unwrap()).unwrap();
        // S = {1}: one real surviving edge (1-2) leaves S; denominator d*|S| = 2
        let s = NodeSet::new(vec![1]).unwrap();
        assert_eq!(view.expansion_of(&s).unwrap(), 0.5);
        // S = {1,2,3} = all survivors: no real edges leave
        let all = NodeSet::new(vec![1, 2, 3]).unwrap();
        assert_eq!(view.expansion_of(&all).unwrap(), 0.0);
        assert!(view.expansion_of(&NodeSet::new(vec![0]).unwrap()).is_err());
    }
}
