//! Port-labeled graphs: representation, validation, and breadth-first
//! shortest paths with a deterministic ascending-port tie-break.

mod caterpillar;
mod format;
mod generate;

pub use caterpillar::{enumerate_specs, make_caterpillar, CaterpillarError, CaterpillarSpec};
pub use format::{parse_instance, write_graph, write_instance, FormatError, Instance};
pub use generate::{random_connected_graph, random_tree, GenError};

use std::collections::VecDeque;
use std::fmt;

/// One node: a distinct label and an adjacency list indexed by local port.
/// Port `p` at this node leads to `adjacency[p] = (neighbor index,
/// reciprocal port at the neighbor)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeRecord {
    pub label: u64,
    pub adjacency: Vec<(usize, usize)>,
}

/// A simple connected undirected graph with per-node port numbering
/// 0..deg-1. Immutable after construction; invariants are checked by
/// [`PortLabeledGraph::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PortLabeledGraph {
    pub nodes: Vec<NodeRecord>,
}

/// A named invariant violation. Violations are data, not failures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    SelfLoop { node: usize, port: usize },
    ParallelEdge { node: usize, neighbor: usize },
    BadNeighborIndex { node: usize, port: usize, neighbor: usize },
    BrokenReciprocity { node: usize, port: usize },
    DuplicateLabel { label: u64 },
    Disconnected { unreachable_node: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SelfLoop { node, port } => {
                write!(f, "self-loop at node {node} port {port}")
            }
            Violation::ParallelEdge { node, neighbor } => {
                write!(f, "parallel edge between nodes {node} and {neighbor}")
            }
            Violation::BadNeighborIndex { node, port, neighbor } => {
                write!(f, "node {node} port {port} points at invalid node {neighbor}")
            }
            Violation::BrokenReciprocity { node, port } => {
                write!(f, "reciprocity broken at node {node} port {port}")
            }
            Violation::DuplicateLabel { label } => {
                write!(f, "duplicate node label {label}")
            }
            Violation::Disconnected { unreachable_node } => {
                write!(f, "graph is disconnected: node {unreachable_node} unreachable from node 0")
            }
        }
    }
}

/// A shortest path as (node, outgoing port) steps plus the terminal node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathWithPorts {
    pub steps: Vec<(usize, usize)>,
    pub terminal: usize,
}

impl PathWithPorts {
    /// Path length D.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The node at distance `i` along the path.
    pub fn node_at(&self, i: usize) -> usize {
        if i < self.steps.len() {
            self.steps[i].0
        } else {
            self.terminal
        }
    }
}

impl PortLabeledGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> u64 {
        self.nodes.iter().map(|n| n.adjacency.len() as u64).sum::<u64>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nodes[v].adjacency.len()
    }

    pub fn is_tree(&self) -> bool {
        self.edge_count() == self.node_count() as u64 - 1
    }

    /// Checks all structural invariants and returns every violation found.
    /// An empty list means the graph is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.node_count();
        let mut violations = Vec::new();

        for (u, rec) in self.nodes.iter().enumerate() {
            let mut seen = std::collections::HashSet::new();
            for (p, &(v, q)) in rec.adjacency.iter().enumerate() {
                if v >= n {
                    violations.push(Violation::BadNeighborIndex { node: u, port: p, neighbor: v });
                    continue;
                }
                if v == u {
                    violations.push(Violation::SelfLoop { node: u, port: p });
                    continue;
                }
                if !seen.insert(v) {
                    violations.push(Violation::ParallelEdge { node: u, neighbor: v });
                }
                match self.nodes[v].adjacency.get(q) {
                    Some(&(back, back_port)) if back == u && back_port == p => {}
                    _ => violations.push(Violation::BrokenReciprocity { node: u, port: p }),
                }
            }
        }

        let mut labels = std::collections::HashMap::new();
        for rec in &self.nodes {
            if labels.insert(rec.label, ()).is_some() {
                violations.push(Violation::DuplicateLabel { label: rec.label });
            }
        }

        if n > 0 {
            let dist = self.bfs_distances(0);
            if let Some(v) = dist.iter().position(|d| d.is_none()) {
                violations.push(Violation::Disconnected { unreachable_node: v });
            }
        }

        violations
    }

    /// BFS distances from `s`, expanding ports in ascending order.
    pub fn bfs_distances(&self, s: usize) -> Vec<Option<u64>> {
        let mut dist = vec![None; self.node_count()];
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &(v, _) in &self.nodes[u].adjacency {
                if v < self.node_count() && dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// The shortest s->t path found by BFS expanding ports in ascending
    /// order from `s`; the tie-break makes traces reproducible.
    pub fn shortest_path(&self, s: usize, t: usize) -> PathWithPorts {
        if s == t {
            return PathWithPorts { steps: Vec::new(), terminal: t };
        }
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.node_count()];
        let mut seen = vec![false; self.node_count()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        'bfs: while let Some(u) = queue.pop_front() {
            for (p, &(v, _)) in self.nodes[u].adjacency.iter().enumerate() {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some((u, p));
                    if v == t {
                        break 'bfs;
                    }
                    queue.push_back(v);
                }
            }
        }
        let mut steps = Vec::new();
        let mut cur = t;
        while let Some((u, p)) = parent[cur] {
            steps.push((u, p));
            cur = u;
        }
        assert!(cur == s, "no path from {s} to {t}: graph not connected");
        steps.reverse();
        PathWithPorts { steps, terminal: t }
    }

    /// Distance between two nodes; panics if unreachable.
    pub fn distance(&self, s: usize, t: usize) -> u64 {
        self.bfs_distances(s)[t].expect("nodes not connected")
    }

    /// The node farthest from `s` (ties broken toward the smallest index).
    pub fn farthest_from(&self, s: usize) -> usize {
        let dist = self.bfs_distances(s);
        let mut best = s;
        let mut best_d = 0;
        for (v, d) in dist.iter().enumerate() {
            if let Some(d) = d {
                if *d > best_d {
                    best_d = *d;
                    best = v;
                }
            }
        }
        best
    }

    /// Builds the Proposition-1 doubling: two disjoint copies of `self`
    /// with the two copies of `w` joined by a fresh edge on the next free
    /// port at each endpoint. Node labels become 2l in copy 0 and 2l+1 in
    /// copy 1; returns the two copies of `v` as agent start nodes.
    pub fn double_for_rendezvous(
        &self,
        v: usize,
        w: usize,
    ) -> (PortLabeledGraph, usize, usize) {
        assert!(v != w, "start and treasure nodes must differ");
        let n = self.node_count();
        let mut nodes = Vec::with_capacity(2 * n);
        for copy in 0..2usize {
            for rec in &self.nodes {
                nodes.push(NodeRecord {
                    label: 2 * rec.label + copy as u64,
                    adjacency: rec
                        .adjacency
                        .iter()
                        .map(|&(u, q)| (u + copy * n, q))
                        .collect(),
                });
            }
        }
        let port = self.degree(w);
        nodes[w].adjacency.push((n + w, port));
        nodes[n + w].adjacency.push((w, port));
        (PortLabeledGraph { nodes }, v, n + v)
    }
}
