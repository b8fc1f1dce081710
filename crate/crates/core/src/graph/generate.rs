//! Seeded random instances: uniform spanning trees via Prüfer sequences,
//! optionally densified with random extra edges, with ports assigned by a
//! random permutation at every node. Deterministic for a fixed seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{NodeRecord, PortLabeledGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("infeasible edge count {e} for {n} nodes")]
    InfeasibleEdgeCount { n: usize, e: usize },
}

/// A uniformly random labeled tree on `n` nodes.
pub fn random_tree(n: usize, seed: u64) -> PortLabeledGraph {
    random_connected_graph(n, n.saturating_sub(1), seed).expect("n-1 edges is always feasible")
}

/// A random connected graph with `n` nodes and `e` edges: a random
/// spanning tree plus `e - n + 1` distinct random non-tree edges.
pub fn random_connected_graph(n: usize, e: usize, seed: u64) -> Result<PortLabeledGraph, GenError> {
    if n == 0 || e + 1 < n || e > n * (n - 1) / 2 {
        return Err(GenError::InfeasibleEdgeCount { n, e });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut edges = if n >= 2 {
        let pruefer: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
        pruefer_decode(n, &pruefer)
    } else {
        Vec::new()
    };

    let extra = e - (n - 1);
    if extra > 0 {
        let present: std::collections::HashSet<(usize, usize)> = edges.iter().copied().collect();
        let mut candidates: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|pair| !present.contains(pair))
            .collect();
        candidates.shuffle(&mut rng);
        edges.extend(candidates.into_iter().take(extra));
    }

    // random port permutation per node: shuffle each node's incident edge
    // list, then wire up reciprocal ports
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (id, &(u, v)) in edges.iter().enumerate() {
        incident[u].push(id);
        incident[v].push(id);
    }
    let mut port_at = vec![[usize::MAX; 2]; edges.len()];
    for (u, list) in incident.iter_mut().enumerate() {
        list.shuffle(&mut rng);
        for (port, &id) in list.iter().enumerate() {
            let side = if edges[id].0 == u { 0 } else { 1 };
            port_at[id][side] = port;
        }
    }
    let mut nodes: Vec<NodeRecord> = (0..n)
        .map(|i| NodeRecord {
            label: i as u64,
            adjacency: vec![(usize::MAX, usize::MAX); incident[i].len()],
        })
        .collect();
    for (id, &(u, v)) in edges.iter().enumerate() {
        let [pu, pv] = port_at[id];
        nodes[u].adjacency[pu] = (v, pv);
        nodes[v].adjacency[pv] = (u, pu);
    }
    Ok(PortLabeledGraph { nodes })
}

/// Standard Prüfer decoding: returns the n-1 tree edges as (min, max) pairs.
fn pruefer_decode(n: usize, seq: &[usize]) -> Vec<(usize, usize)> {
    debug_assert_eq!(seq.len(), n - 2);
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    // min-heap over current leaves
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
        .filter(|&v| degree[v] == 1)
        .map(std::cmp::Reverse)
        .collect();
    for &x in seq {
        let std::cmp::Reverse(leaf) = leaves.pop().expect("leaf available");
        edges.push((leaf.min(x), leaf.max(x)));
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.push(std::cmp::Reverse(x));
        }
    }
    let std::cmp::Reverse(a) = leaves.pop().unwrap();
    let std::cmp::Reverse(b) = leaves.pop().unwrap();
    edges.push((a.min(b), a.max(b)));
    edges
}
