//! Shared helpers for the integration suites.

#![allow(dead_code)]

use modcluster::graph::{Clustering, Graph, NodeSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The Petersen graph as the Kneser construction: nodes are the 2-subsets of
/// {0..4}, adjacent iff disjoint. 3-regular on 10 nodes.
pub fn petersen() -> Graph {
    let mut pairs = Vec::new();
    for a in 0..5u32 {
        for b in (a + 1)..5 {
            pairs.push((a, b));
        }
    }
    let mut edges = Vec::new();
    for i in 0..pairs.len() {
        for j in (i + 1)..pairs.len() {
            let (a, b) = pairs[i];
            let (c, d) = pairs[j];
            if a != c && a != d && b != c && b != d {
                edges.push((i as u32, j as u32));
            }
        }
    }
    Graph::from_edges(10, &edges).unwrap()
}

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    let edges: Vec<(u32, u32)> = (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// Seeded Erdos-Renyi-style graph with at least one edge.
pub fn random_graph(n: usize, edge_prob: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            if rng.gen::<f64>() < edge_prob {
                edges.push((u, v));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, 1));
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Seeded random clustering with at most `max_parts` parts.
pub fn random_clustering(n: usize, max_parts: usize, seed: u64) -> Clustering {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=max_parts.min(n));
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    Clustering::from_labels(&labels).unwrap()
}

/// Seeded random non-empty proper subset.
pub fn random_proper_subset(n: usize, seed: u64) -> NodeSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let members: Vec<u32> = (0..n as u32).filter(|_| rng.gen::<bool>()).collect();
        if !members.is_empty() && members.len() < n {
            return NodeSet::new(members).unwrap();
        }
    }
}

pub fn is_connected(g: &Graph) -> bool {
    let n = g.n();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0u32];
    seen[0] = true;
    let mut visited = 1;
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if !seen[w as usize] {
                seen[w as usize] = true;
                visited += 1;
                stack.push(w);
            }
        }
    }
    visited == n
}

/// First `count` connected d-regular instances found by scanning seeds.
pub fn connected_regular_instances(count: usize, n: usize, d: usize) -> Vec<Graph> {
    let mut found = Vec::new();
    let mut seed = 0u64;
    while found.len() < count && seed < 10_000 {
        if let Ok(g) = modcluster::generators::random_regular(n, d, seed) {
            if is_connected(&g) {
                found.push(g);
            }
        }
        seed += 1;
    }
    assert_eq!(found.len(), count, "not enough connected {d}-regular graphs on {n} nodes");
    found
}
