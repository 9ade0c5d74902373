//! Immutable simple undirected graphs and the node-set structures built on them.
//!
//! Node identifiers are dense `0..n-1` integers. The edge-list text format
//! declares `n` explicitly on its first non-comment line so isolated nodes
//! stay representable; every later non-comment line is one `u v` pair.

use std::collections::HashSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("edge ({u}, {v}) is a self-loop")]
    SelfLoop { u: u32, v: u32 },
    #[error("edge ({u}, {v}) appears more than once")]
    DuplicateEdge { u: u32, v: u32 },
    #[error("node {node} out of range for graph on {n} nodes")]
    NodeOutOfRange { node: u32, n: usize },
    #[error("graph must have at least one node")]
    EmptyGraph,
    #[error("node set is empty")]
    EmptySet,
    #[error("node set contains duplicate node {node}")]
    DuplicateNode { node: u32 },
    #[error("partition side must be a non-empty proper subset of the nodes")]
    InvalidPartition,
    #[error("parts must be disjoint, non-empty, and cover all nodes: {msg}")]
    InvalidClustering { msg: String },
    #[error("adjacency bitmasks require n <= 64, got n = {n}")]
    TooLargeForMasks { n: usize },
}

/// Immutable simple undirected graph with cached degrees and sorted
/// neighbor lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32)>,
    degrees: Vec<u32>,
    adj: Vec<Vec<u32>>,
}

impl Graph {
    /// Builds a graph from an explicit node count and edge list.
    ///
    /// Rejects self-loops, duplicate edges, and out-of-range endpoints;
    /// duplicates are a hard error rather than being silently merged.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut normalized = Vec::with_capacity(edges.len());
        let mut degrees = vec![0u32; n];
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a as usize >= n {
                return Err(GraphError::NodeOutOfRange { node: a, n });
            }
            if b as usize >= n {
                return Err(GraphError::NodeOutOfRange { node: b, n });
            }
            if a == b {
                return Err(GraphError::SelfLoop { u: a, v: b });
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((u, v)) {
                return Err(GraphError::DuplicateEdge { u, v });
            }
            normalized.push((u, v));
            degrees[u as usize] += 1;
            degrees[v as usize] += 1;
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        normalized.sort_unstable();
        for list in &mut adj {
            list.sort_unstable();
        }
        let g = Graph { n, edges: normalized, degrees, adj };
        debug_assert_eq!(g.degrees.iter().map(|&d| d as usize).sum::<usize>(), 2 * g.m());
        Ok(g)
    }

    /// Parses the edge-list text format: first non-comment line is `n`,
    /// each later non-comment line is `u v`, `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut n: Option<usize> = None;
        let mut edges: Vec<(u32, u32)> = Vec::new();
        let mut edge_lines: Vec<usize> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if n.is_none() {
                let parsed = line.parse::<usize>().map_err(|_| GraphError::Parse {
                    line: line_no,
                    msg: format!("expected node count, got {line:?}"),
                })?;
                if parsed == 0 {
                    return Err(GraphError::Parse {
                        line: line_no,
                        msg: "node count must be positive".into(),
                    });
                }
                n = Some(parsed);
                continue;
            }
            let mut it = line.split_whitespace();
            let (u, v) = match (it.next(), it.next(), it.next()) {
                (Some(a), Some(b), None) => {
                    let u = a.parse::<u32>().map_err(|_| GraphError::Parse {
                        line: line_no,
                        msg: format!("invalid node id {a:?}"),
                    })?;
                    let v = b.parse::<u32>().map_err(|_| GraphError::Parse {
                        line: line_no,
                        msg: format!("invalid node id {b:?}"),
                    })?;
                    (u, v)
                }
                _ => {
                    return Err(GraphError::Parse {
                        line: line_no,
                        msg: format!("expected \"u v\", got {line:?}"),
                    })
                }
            };
            edges.push((u, v));
            edge_lines.push(line_no);
        }
        let n = n.ok_or(GraphError::Parse { line: 0, msg: "missing node count line".into() })?;
        Graph::from_edges(n, &edges).map_err(|e| match e {
            // re-attribute structural errors to the offending line
            GraphError::SelfLoop { u, v } => GraphError::Parse {
                line: line_of(&edges, &edge_lines, u, v),
                msg: format!("self-loop ({u}, {v})"),
            },
            GraphError::DuplicateEdge { u, v } => GraphError::Parse {
                line: line_of(&edges, &edge_lines, u, v),
                msg: format!("duplicate edge ({u}, {v})"),
            },
            GraphError::NodeOutOfRange { node, n } => GraphError::Parse {
                line: edge_lines
                    .iter()
                    .zip(&edges)
                    .find(|(_, &(a, b))| a == node || b == node)
                    .map(|(&l, _)| l)
                    .unwrap_or(0),
                msg: format!("node {node} out of range for n = {n}"),
            },
            other => other,
        })
    }

    /// Serializes to the edge-list format, optionally preceded by `#` comment
    /// lines. Edges are emitted sorted so output is canonical.
    pub fn to_edge_list(&self, header: &[String]) -> String {
        let mut out = String::new();
        for h in header {
            out.push_str("# ");
            out.push_str(h);
            out.push('\n');
        }
        out.push_str(&self.n.to_string());
        out.push('\n');
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges m.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: u32) -> u32 {
        self.degrees[v as usize]
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Returns `Some(d)` when every node has degree `d`.
    pub fn is_regular(&self) -> Option<u32> {
        let d = self.degrees[0];
        self.degrees.iter().all(|&x| x == d).then_some(d)
    }

    /// Edge complement: `{u, v}` present in the output iff absent here.
    pub fn complement(&self) -> Graph {
        let mut edges = Vec::new();
        for u in 0..self.n as u32 {
            for v in (u + 1)..self.n as u32 {
                if !self.has_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(self.n, &edges).expect("complement of a valid graph is valid")
    }

    /// Subgraph induced by `s`, with nodes relabeled `0..|s|-1` by ascending
    /// original id. Returns the graph and the new-id -> original-id map.
    pub fn induced_subgraph(&self, s: &NodeSet) -> Result<(Graph, Vec<u32>), GraphError> {
        if s.is_empty() {
            return Err(GraphError::EmptySet);
        }
        s.check_universe(self.n)?;
        let map: Vec<u32> = s.iter().collect();
        let mut index = vec![u32::MAX; self.n];
        for (new, &orig) in map.iter().enumerate() {
            index[orig as usize] = new as u32;
        }
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            let (iu, iv) = (index[u as usize], index[v as usize]);
            if iu != u32::MAX && iv != u32::MAX {
                edges.push((iu, iv));
            }
        }
        Ok((Graph::from_edges(map.len(), &edges)?, map))
    }

    /// Per-node adjacency bitmasks; only available for n <= 64.
    pub fn adjacency_masks(&self) -> Result<Vec<u64>, GraphError> {
        if self.n > 64 {
            return Err(GraphError::TooLargeForMasks { n: self.n });
        }
        let mut masks = vec![0u64; self.n];
        for &(u, v) in &self.edges {
            masks[u as usize] |= 1 << v;
            masks[v as usize] |= 1 << u;
        }
        Ok(masks)
    }
}

fn line_of(edges: &[(u32, u32)], lines: &[usize], u: u32, v: u32) -> usize {
    // the duplicate/self-loop is reported at its last occurrence
    edges
        .iter()
        .enumerate()
        .rev()
        .find(|(_, &(a, b))| (a.min(b), a.max(b)) == (u, v))
        .map(|(i, _)| lines[i])
        .unwrap_or(0)
}

/// Sorted, duplicate-free subset of a graph's nodes. Serializes as its
/// member list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeSet {
    members: Vec<u32>,
}

impl serde::Serialize for NodeSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.members.serialize(serializer)
    }
}

impl NodeSet {
    pub fn new(mut members: Vec<u32>) -> Result<Self, GraphError> {
        members.sort_unstable();
        for w in members.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateNode { node: w[0] });
            }
        }
        Ok(NodeSet { members })
    }

    pub fn empty() -> Self {
        NodeSet { members: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        NodeSet { members: (0..n as u32).collect() }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.members
    }

    /// Errors unless every member lies in `0..n`.
    pub fn check_universe(&self, n: usize) -> Result<(), GraphError> {
        match self.members.last() {
            Some(&max) if max as usize >= n => Err(GraphError::NodeOutOfRange { node: max, n }),
            _ => Ok(()),
        }
    }

    pub fn complement_in(&self, n: usize) -> NodeSet {
        let mut members = Vec::with_capacity(n - self.members.len());
        let mut it = self.members.iter().peekable();
        for v in 0..n as u32 {
            if it.peek() == Some(&&v) {
                it.next();
            } else {
                members.push(v);
            }
        }
        NodeSet { members }
    }

    pub fn union(&self, other: &NodeSet) -> Result<NodeSet, GraphError> {
        let mut members = self.members.clone();
        members.extend_from_slice(&other.members);
        NodeSet::new(members)
    }

    /// Membership bitmask; only valid when every member is < 64.
    pub fn mask_u64(&self) -> u64 {
        debug_assert!(self.members.last().is_none_or(|&v| v < 64));
        self.members.iter().fold(0u64, |acc, &v| acc | (1 << v))
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", parts.join(" "))
    }
}

impl FromIterator<u32> for NodeSet {
    /// Panics on duplicates; use `NodeSet::new` for fallible construction.
    fn from_iter<T: IntoIterator<Item = u32>>(iter: T) -> Self {
        NodeSet::new(iter.into_iter().collect()).expect("duplicate node in iterator")
    }
}

/// Partition of a graph's nodes into exactly two non-empty sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoPartition {
    side_a: NodeSet,
    side_b: NodeSet,
}

impl TwoPartition {
    /// `side_a` must be a non-empty proper subset of `0..n`; `side_b` is its
    /// complement.
    pub fn from_side(n: usize, side_a: NodeSet) -> Result<Self, GraphError> {
        side_a.check_universe(n)?;
        if side_a.is_empty() || side_a.len() >= n {
            return Err(GraphError::InvalidPartition);
        }
        let side_b = side_a.complement_in(n);
        Ok(TwoPartition { side_a, side_b })
    }

    pub fn side_a(&self) -> &NodeSet {
        &self.side_a
    }

    pub fn side_b(&self) -> &NodeSet {
        &self.side_b
    }

    pub fn to_clustering(&self) -> Clustering {
        Clustering { parts: vec![self.side_a.clone(), self.side_b.clone()] }
    }
}

/// Partition of all nodes into k >= 1 pairwise-disjoint non-empty parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    parts: Vec<NodeSet>,
}

impl Clustering {
    pub fn new(n: usize, parts: Vec<NodeSet>) -> Result<Self, GraphError> {
        if parts.is_empty() {
            return Err(GraphError::InvalidClustering { msg: "no parts".into() });
        }
        let mut seen = vec![false; n];
        let mut covered = 0usize;
        for (i, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return Err(GraphError::InvalidClustering { msg: format!("part {i} is empty") });
            }
            part.check_universe(n)
                .map_err(|e| GraphError::InvalidClustering { msg: e.to_string() })?;
            for v in part.iter() {
                if seen[v as usize] {
                    return Err(GraphError::InvalidClustering {
                        msg: format!("node {v} appears in more than one part"),
                    });
                }
                seen[v as usize] = true;
                covered += 1;
            }
        }
        if covered != n {
            return Err(GraphError::InvalidClustering {
                msg: format!("parts cover {covered} of {n} nodes"),
            });
        }
        Ok(Clustering { parts })
    }

    /// Builds a clustering from per-node part labels (labels need not be
    /// contiguous; they are compacted in first-occurrence order).
    pub fn from_labels(labels: &[usize]) -> Result<Self, GraphError> {
        let n = labels.len();
        let mut order: Vec<usize> = Vec::new();
        let mut index: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
        for &l in labels {
            index.entry(l).or_insert_with(|| {
                order.push(l);
                order.len() - 1
            });
        }
        let mut parts: Vec<Vec<u32>> = vec![Vec::new(); order.len()];
        for (v, &l) in labels.iter().enumerate() {
            parts[index[&l]].push(v as u32);
        }
        let parts = parts
            .into_iter()
            .map(NodeSet::new)
            .collect::<Result<Vec<_>, _>>()?;
        Clustering::new(n, parts)
    }

    pub fn parts(&self) -> &[NodeSet] {
        &self.parts
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }
}
