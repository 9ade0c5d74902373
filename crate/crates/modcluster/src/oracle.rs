//! Exact ground truth by exhaustive enumeration.
//!
//! `opt_exact` maximizes modularity over every set partition of the nodes
//! (restricted-growth-string enumeration), `opt2_exact` over all clusterings
//! with at most two communities (Gray-code subset walk), and `sse_exact`
//! minimizes expansion over a size band. Budgets are hard errors, never a
//! silent fallback to a heuristic.

use crate::graph::{Clustering, Graph, GraphError, NodeSet, TwoPartition};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph with n = {n} exceeds the enumeration budget (n <= {budget}) for {op}")]
    BudgetExceeded { op: &'static str, n: usize, budget: usize },
    #[error("graph has no edges; modularity is undefined")]
    NoEdges,
    #[error("invalid size band [{lo}, {hi}] for n = {n}")]
    BadSizeBand { lo: usize, hi: usize, n: usize },
    #[error("no feasible set in the band had positive degree sum")]
    NoFeasibleSet,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// An exact optimum, its witness, and how many candidates were enumerated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub value: f64,
    pub witness: OracleWitness,
    pub instances_enumerated: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleWitness {
    Clustering { parts: Vec<Vec<u32>> },
    Bisection { side_a: Vec<u32>, side_b: Vec<u32> },
    Set { members: Vec<u32> },
}

impl OracleWitness {
    fn from_clustering(c: &Clustering) -> Self {
        OracleWitness::Clustering {
            parts: c.parts().iter().map(|p| p.as_slice().to_vec()).collect(),
        }
    }

    fn from_bisection(t: &TwoPartition) -> Self {
        OracleWitness::Bisection {
            side_a: t.side_a().as_slice().to_vec(),
            side_b: t.side_b().as_slice().to_vec(),
        }
    }
}

pub const OPT_EXACT_MAX_N: usize = 13;
pub const OPT2_EXACT_MAX_N: usize = 26;
pub const SSE_EXACT_MAX_N: usize = 22;

/// Maximum modularity over all set partitions of the nodes.
pub fn opt_exact(g: &Graph) -> Result<OracleResult, OracleError> {
    let n = g.n();
    if n > OPT_EXACT_MAX_N {
        return Err(OracleError::BudgetExceeded { op: "opt_exact", n, budget: OPT_EXACT_MAX_N });
    }
    if g.m() == 0 {
        return Err(OracleError::NoEdges);
    }
    let adj = g.adjacency_masks()?;
    let degrees = g.degrees();
    let m = g.m() as f64;
    let two_m = 2.0 * m;

    // restricted growth strings: labels[0] = 0 and
    // labels[i] <= 1 + max(labels[..i])
    let mut labels = vec![0usize; n];
    let mut part_mask = vec![0u64; n];
    let mut part_degree = vec![0u64; n];
    let mut best_value = f64::NEG_INFINITY;
    let mut best_labels = labels.clone();
    let mut count: u64 = 0;
    loop {
        count += 1;
        let k = labels.iter().copied().max().unwrap() + 1;
        for p in 0..k {
            part_mask[p] = 0;
            part_degree[p] = 0;
        }
        for v in 0..n {
            let p = labels[v];
            part_mask[p] |= 1 << v;
            part_degree[p] += degrees[v] as u64;
        }
        // each internal edge is counted once per endpoint, so halve
        let mut value = 0.0;
        for p in 0..k {
            let mut twice_internal = 0u64;
            let mut bits = part_mask[p];
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                twice_internal += (adj[v] & part_mask[p]).count_ones() as u64;
            }
            let mi = (twice_internal / 2) as f64;
            value += mi / m - (part_degree[p] as f64 / two_m).powi(2);
        }
        if value > best_value {
            best_value = value;
            best_labels.copy_from_slice(&labels);
        }

        // advance to the next restricted growth string
        let mut i = last_increasable(&labels);
        if i == 0 {
            break;
        }
        labels[i] += 1;
        i += 1;
        while i < n {
            labels[i] = 0;
            i += 1;
        }
    }
    let witness = Clustering::from_labels(&best_labels)?;
    debug_assert!(
        (crate::metrics::modularity_clustering(g, &witness).unwrap() - best_value).abs() < 1e-12
    );
    Ok(OracleResult {
        value: best_value,
        witness: OracleWitness::from_clustering(&witness),
        instances_enumerated: count,
    })
}

/// Rightmost position whose label may still be incremented (a label may grow
/// to at most one past the maximum of everything before it), or 0 when the
/// string is the last one.
fn last_increasable(labels: &[usize]) -> usize {
    let n = labels.len();
    let mut prefix_max = vec![0usize; n];
    for i in 1..n {
        prefix_max[i] = prefix_max[i - 1].max(labels[i - 1]);
    }
    for i in (1..n).rev() {
        if labels[i] <= prefix_max[i] {
            return i;
        }
    }
    0
}

/// Maximum modularity over clusterings with at most two communities. The
/// one-community clustering is legal and scores 0, so the result is never
/// negative.
pub fn opt2_exact(g: &Graph) -> Result<OracleResult, OracleError> {
    let n = g.n();
    if n > OPT2_EXACT_MAX_N {
        return Err(OracleError::BudgetExceeded { op: "opt2_exact", n, budget: OPT2_EXACT_MAX_N });
    }
    if g.m() == 0 {
        return Err(OracleError::NoEdges);
    }
    let adj = g.adjacency_masks()?;
    let degrees = g.degrees();
    let m_int = g.m() as i64;
    let m = g.m() as f64;
    let two_m = 2.0 * m;
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };

    // Gray-code walk over subsets of nodes 1..n with node 0 pinned inside S,
    // maintaining the internal edge count and degree sum incrementally.
    let bisection_value = |internal: i64, degree_sum: i64| {
        let cut = degree_sum - 2 * internal;
        let other_internal = m_int - internal - cut;
        let d_a = degree_sum as f64;
        let d_b = two_m - d_a;
        internal as f64 / m - (d_a / two_m).powi(2) + other_internal as f64 / m
            - (d_b / two_m).powi(2)
    };
    let mut best_value = 0.0f64; // the k = 1 clustering
    let mut best_mask: Option<u64> = None;
    let mut s_mask: u64 = 1;
    let mut internal: i64 = 0;
    let mut degree_sum: i64 = degrees[0] as i64;
    let mut count: u64 = 1; // the k = 1 candidate
    if s_mask != full {
        count += 1;
        let value = bisection_value(internal, degree_sum);
        if value > best_value {
            best_value = value;
            best_mask = Some(s_mask);
        }
    }
    let steps: u64 = if n == 1 { 0 } else { (1u64 << (n - 1)) - 1 };
    for gray in 1..=steps {
        let node = gray.trailing_zeros() as usize + 1;
        let bit = 1u64 << node;
        if s_mask & bit != 0 {
            s_mask ^= bit;
            internal -= (adj[node] & s_mask).count_ones() as i64;
            degree_sum -= degrees[node] as i64;
        } else {
            internal += (adj[node] & s_mask).count_ones() as i64;
            s_mask |= bit;
            degree_sum += degrees[node] as i64;
        }
        if s_mask == full {
            continue;
        }
        count += 1;
        let value = bisection_value(internal, degree_sum);
        if value > best_value {
            best_value = value;
            best_mask = Some(s_mask);
        }
    }
    let witness = match best_mask {
        Some(mask) => {
            let side: Vec<u32> = (0..n as u32).filter(|&v| mask & (1 << v) != 0).collect();
            let part = TwoPartition::from_side(n, NodeSet::new(side)?)?;
            OracleWitness::from_bisection(&part)
        }
        None => OracleWitness::from_clustering(&Clustering::from_labels(&vec![0; n])?),
    };
    Ok(OracleResult { value: best_value, witness, instances_enumerated: count })
}

/// Minimum expansion over all sets whose size lies in [size_lo, size_hi].
/// Sets with zero degree sum are skipped (their expansion is undefined).
pub fn sse_exact(g: &Graph, size_lo: usize, size_hi: usize) -> Result<OracleResult, OracleError> {
    let n = g.n();
    if n > SSE_EXACT_MAX_N {
        return Err(OracleError::BudgetExceeded { op: "sse_exact", n, budget: SSE_EXACT_MAX_N });
    }
    if size_lo < 1 || size_lo > size_hi || size_hi > n.saturating_sub(1) {
        return Err(OracleError::BadSizeBand { lo: size_lo, hi: size_hi, n });
    }
    let adj = g.adjacency_masks()?;
    let degrees = g.degrees();
    let mut best: Option<(f64, u64)> = None;
    let mut count: u64 = 0;
    for mask in 1u64..(1u64 << n) {
        let size = mask.count_ones() as usize;
        if size < size_lo || size > size_hi {
            continue;
        }
        let mut cut = 0u64;
        let mut degree_sum = 0u64;
        let mut bits = mask;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            cut += (adj[v] & !mask).count_ones() as u64;
            degree_sum += degrees[v] as u64;
        }
        if degree_sum == 0 {
            continue;
        }
        count += 1;
        let phi = cut as f64 / degree_sum as f64;
        if best.as_ref().is_none_or(|&(b, _)| phi < b) {
            best = Some((phi, mask));
        }
    }
    let (value, mask) = best.ok_or(OracleError::NoFeasibleSet)?;
    let members: Vec<u32> = (0..n as u32).filter(|&v| mask & (1 << v) != 0).collect();
    Ok(OracleResult {
        value,
        witness: OracleWitness::Set { members },
        instances_enumerated: count,
    })
}
