//! Deterministic benchmark-instance families with known or bounded optimal
//! modularity.
//!
//! `clique_union(k, s)` has optimal modularity exactly 1 - 1/k when s > 3;
//! `matched_clique_union` perturbs it by one removed edge per clique plus a
//! perfect matching across the removal endpoints, staying (s-1)-regular.
//! `random_regular` is the pairing model with rejection, and
//! `complement_3regular` complements it into a dense (n-4)-regular family
//! with provably tiny optimal modularity.

use crate::graph::{Graph, GraphError};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("clique unions need k >= 2 parts, got {k}")]
    TooFewParts { k: usize },
    #[error("clique unions need clique size s >= 4 (n/k > 3), got {s}")]
    CliqueTooSmall { s: usize },
    #[error("no d-regular graph on n nodes: n*d must be even, got n = {n}, d = {d}")]
    OddDegreeSum { n: usize, d: usize },
    #[error("degree {d} too large for {n} nodes")]
    DegreeTooLarge { n: usize, d: usize },
    #[error("pairing model failed to produce a simple graph after {attempts} attempts")]
    RejectionBudget { attempts: usize },
    #[error("complement family needs even n >= 8, got {n}")]
    BadComplementOrder { n: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Which family a generated instance came from, for manifests and headers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilySpec {
    CliqueUnion { k: usize, s: usize },
    MatchedCliqueUnion { k: usize, s: usize, seed: u64 },
    RandomRegular { n: usize, d: usize, seed: u64 },
    Complement3Regular { n: usize, seed: u64 },
}

impl FamilySpec {
    pub fn header(&self) -> String {
        match self {
            FamilySpec::CliqueUnion { k, s } => format!("family=clique_union k={k} s={s}"),
            FamilySpec::MatchedCliqueUnion { k, s, seed } => {
                format!("family=matched_clique_union k={k} s={s} seed={seed}")
            }
            FamilySpec::RandomRegular { n, d, seed } => {
                format!("family=random_regular n={n} d={d} seed={seed}")
            }
            FamilySpec::Complement3Regular { n, seed } => {
                format!("family=complement_3regular n={n} seed={seed}")
            }
        }
    }

    pub fn generate(&self) -> Result<Graph, GeneratorError> {
        match *self {
            FamilySpec::CliqueUnion { k, s } => clique_union(k, s),
            FamilySpec::MatchedCliqueUnion { k, s, seed } => matched_clique_union(k, s, seed),
            FamilySpec::RandomRegular { n, d, seed } => random_regular(n, d, seed),
            FamilySpec::Complement3Regular { n, seed } => complement_3regular(n, seed),
        }
    }
}

fn clique_edges(base: u32, s: usize, edges: &mut Vec<(u32, u32)>) {
    for i in 0..s as u32 {
        for j in (i + 1)..s as u32 {
            edges.push((base + i, base + j));
        }
    }
}

/// Union of k disjoint cliques K_s on n = k*s nodes; (s-1)-regular.
pub fn clique_union(k: usize, s: usize) -> Result<Graph, GeneratorError> {
    if k < 2 {
        return Err(GeneratorError::TooFewParts { k });
    }
    if s < 4 {
        return Err(GeneratorError::CliqueTooSmall { s });
    }
    let mut edges = Vec::with_capacity(k * s * (s - 1) / 2);
    for c in 0..k {
        clique_edges((c * s) as u32, s, &mut edges);
    }
    Ok(Graph::from_edges(k * s, &edges)?)
}

/// Clique union with one fixed edge {u_i, v_i} removed per clique and a
/// seeded fixed-point-free perfect matching added between the u- and
/// v-endpoint sets, so no removed edge is re-added. Stays (s-1)-regular.
pub fn matched_clique_union(k: usize, s: usize, seed: u64) -> Result<Graph, GeneratorError> {
    if k < 2 {
        return Err(GeneratorError::TooFewParts { k });
    }
    if s < 4 {
        return Err(GeneratorError::CliqueTooSmall { s });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..k).collect();
    let mut attempts = 0usize;
    loop {
        perm.shuffle(&mut rng);
        if perm.iter().enumerate().all(|(i, &p)| i != p) {
            break;
        }
        attempts += 1;
        if attempts > 10_000 {
            return Err(GeneratorError::RejectionBudget { attempts });
        }
    }
    let mut edges = Vec::new();
    for c in 0..k {
        let base = (c * s) as u32;
        // u_i = base, v_i = base + 1; drop the {u_i, v_i} edge
        for i in 0..s as u32 {
            for j in (i + 1)..s as u32 {
                if i == 0 && j == 1 {
                    continue;
                }
                edges.push((base + i, base + j));
            }
        }
    }
    for (i, &p) in perm.iter().enumerate() {
        let u = (i * s) as u32;
        let v = (p * s + 1) as u32;
        edges.push((u, v));
    }
    Ok(Graph::from_edges(k * s, &edges)?)
}

/// Uniform-ish d-regular simple graph via the pairing model: shuffle n*d
/// stubs, pair them up, and reject the whole attempt on any loop or repeat.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph, GeneratorError> {
    if !(n * d).is_multiple_of(2) {
        return Err(GeneratorError::OddDegreeSum { n, d });
    }
    if d >= n {
        return Err(GeneratorError::DegreeTooLarge { n, d });
    }
    if d == 0 {
        return Ok(Graph::from_edges(n.max(1), &[])?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<u32> = Vec::with_capacity(n * d);
    for v in 0..n as u32 {
        for _ in 0..d {
            stubs.push(v);
        }
    }
    let max_attempts = 10_000;
    for _ in 0..max_attempts {
        stubs.shuffle(&mut rng);
        let mut seen = std::collections::HashSet::with_capacity(n * d / 2);
        let mut ok = true;
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b || !seen.insert((a.min(b), a.max(b))) {
                ok = false;
                break;
            }
        }
        if ok {
            let edges: Vec<(u32, u32)> = stubs.chunks_exact(2).map(|p| (p[0], p[1])).collect();
            return Ok(Graph::from_edges(n, &edges)?);
        }
    }
    Err(GeneratorError::RejectionBudget { attempts: max_attempts })
}

/// Edge complement of a random 3-regular graph; (n-4)-regular on n nodes.
pub fn complement_3regular(n: usize, seed: u64) -> Result<Graph, GeneratorError> {
    if !n.is_multiple_of(2) || n < 8 {
        return Err(GeneratorError::BadComplementOrder { n });
    }
    Ok(random_regular(n, 3, seed)?.complement())
}
