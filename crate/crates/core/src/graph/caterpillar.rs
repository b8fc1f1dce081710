//! The caterpillar family T(D,k): a D-edge spine where every spine node
//! except the last carries k-1 pendant leaves. Members are identified by
//! their forward-port sequence; there are exactly k^D of them.

use thiserror::Error;

use super::{NodeRecord, PortLabeledGraph};

/// Identifies one member of T(D,k) by its forward ports `p_0..p_{D-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CaterpillarSpec {
    pub depth: usize,
    pub k: usize,
    pub forward_ports: Vec<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CaterpillarError {
    #[error("need depth >= 1 and k >= 2, got depth={depth} k={k}")]
    BadParameters { depth: usize, k: usize },
    #[error("expected {expected} forward ports, got {got}")]
    WrongPortCount { expected: usize, got: usize },
    #[error("forward port {port} at spine position {position} out of range")]
    PortOutOfRange { position: usize, port: usize },
    #[error("forward port at spine position {position} equals the back port")]
    PortEqualsBackPort { position: usize },
}

impl CaterpillarSpec {
    pub fn validate(&self) -> Result<(), CaterpillarError> {
        if self.depth < 1 || self.k < 2 {
            return Err(CaterpillarError::BadParameters { depth: self.depth, k: self.k });
        }
        if self.forward_ports.len() != self.depth {
            return Err(CaterpillarError::WrongPortCount {
                expected: self.depth,
                got: self.forward_ports.len(),
            });
        }
        // v_0 has degree k; interior spine nodes have degree k+1 with the
        // back port fixed to the previous forward port by the equal-port rule
        if self.forward_ports[0] >= self.k {
            return Err(CaterpillarError::PortOutOfRange {
                position: 0,
                port: self.forward_ports[0],
            });
        }
        for i in 1..self.depth {
            let p = self.forward_ports[i];
            if p > self.k {
                return Err(CaterpillarError::PortOutOfRange { position: i, port: p });
            }
            if p == self.forward_ports[i - 1] {
                return Err(CaterpillarError::PortEqualsBackPort { position: i });
            }
        }
        Ok(())
    }
}

/// Builds the caterpillar tree for `spec` on Dk+1 nodes. Spine node `v_i`
/// gets index `i` and label `i(k+2)`; the leaf reached from `v_i` via port
/// `j` gets label `i(k+2)+j+1`. Returns (graph, start, treasure) with
/// start = v_0 and treasure = v_D.
pub fn make_caterpillar(
    spec: &CaterpillarSpec,
) -> Result<(PortLabeledGraph, usize, usize), CaterpillarError> {
    spec.validate()?;
    let (d, k) = (spec.depth, spec.k);
    let ports = &spec.forward_ports;

    let mut nodes: Vec<NodeRecord> = (0..=d)
        .map(|i| NodeRecord {
            label: (i * (k + 2)) as u64,
            adjacency: Vec::new(),
        })
        .collect();

    for i in 0..d {
        let deg = if i == 0 { k } else { k + 1 };
        let back_port = if i == 0 { None } else { Some(ports[i - 1]) };
        // the port at v_{i+1}'s side of the forward edge: equal-port rule for
        // i <= D-2, and v_D has degree 1 so its sole port is 0
        let forward_reciprocal = if i + 1 == d { 0 } else { ports[i] };
        let mut adjacency = Vec::with_capacity(deg);
        for j in 0..deg {
            if j == ports[i] {
                adjacency.push((i + 1, forward_reciprocal));
            } else if back_port == Some(j) {
                adjacency.push((i - 1, ports[i - 1]));
            } else {
                let leaf = nodes.len();
                nodes.push(NodeRecord {
                    label: (i * (k + 2) + j + 1) as u64,
                    adjacency: vec![(i, j)],
                });
                adjacency.push((leaf, 0));
            }
        }
        nodes[i].adjacency = adjacency;
    }
    // treasure node v_D: degree 1, sole port 0 back along the spine
    nodes[d].adjacency = vec![(d - 1, ports[d - 1])];

    Ok((PortLabeledGraph { nodes }, 0, d))
}

/// All k^D valid specs for fixed (D,k), in lexicographic port order.
pub fn enumerate_specs(depth: usize, k: usize) -> Vec<CaterpillarSpec> {
    let mut out = Vec::new();
    let mut ports = Vec::with_capacity(depth);
    fn go(depth: usize, k: usize, ports: &mut Vec<usize>, out: &mut Vec<CaterpillarSpec>) {
        if ports.len() == depth {
            out.push(CaterpillarSpec { depth, k, forward_ports: ports.clone() });
            return;
        }
        let limit = if ports.is_empty() { k - 1 } else { k };
        for p in 0..=limit {
            if ports.last() == Some(&p) {
                continue;
            }
            ports.push(p);
            go(depth, k, ports, out);
            ports.pop();
        }
    }
    go(depth, k, &mut ports, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::write_instance;

    #[test]
    fn d2_k3_shape() {
        let spec = CaterpillarSpec { depth: 2, k: 3, forward_ports: vec![1, 2] };
        let (g, start, treasure) = make_caterpillar(&spec).unwrap();
        assert_eq!(g.node_count(), 7); // Dk+1
        assert!(g.validate().is_empty());
        assert_eq!(g.nodes[0].label, 0);
        assert_eq!(g.degree(0), 3);
        assert_eq!(g.nodes[1].label, 5);
        assert_eq!(g.degree(1), 4);
        assert_eq!(start, 0);
        assert_eq!(treasure, 2);
        assert_eq!(g.degree(treasure), 1);
    }

    #[test]
    fn smallest_member() {
        let spec = CaterpillarSpec { depth: 1, k: 2, forward_ports: vec![0] };
        let (g, _, treasure) = make_caterpillar(&spec).unwrap();
        assert_eq!(g.node_count(), 3);
        assert!(g.validate().is_empty());
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.degree(treasure), 1);
    }

    #[test]
    fn rejects_bad_ports() {
        let spec = CaterpillarSpec { depth: 2, k: 3, forward_ports: vec![3, 0] };
        assert!(matches!(
            make_caterpillar(&spec),
            Err(CaterpillarError::PortOutOfRange { position: 0, port: 3 })
        ));
        let spec = CaterpillarSpec { depth: 2, k: 3, forward_ports: vec![1, 1] };
        assert!(matches!(
            make_caterpillar(&spec),
            Err(CaterpillarError::PortEqualsBackPort { position: 1 })
        ));
    }

    #[test]
    fn census_d2_k3_is_nine() {
        let specs = enumerate_specs(2, 3);
        assert_eq!(specs.len(), 9);
        let mut seen = std::collections::HashSet::new();
        for spec in &specs {
            let (g, s, t) = make_caterpillar(spec).unwrap();
            assert!(g.validate().is_empty());
            assert!(seen.insert(write_instance(&g, Some(s), Some(t))));
        }
        assert_eq!(seen.len(), 9);
    }

    #[test]
    fn spec_injective_exhaustive_small() {
        for d in 1..=3usize {
            for k in 2..=4usize {
                let specs = enumerate_specs(d, k);
                assert_eq!(specs.len(), k.pow(d as u32));
                let mut seen = std::collections::HashSet::new();
                for spec in &specs {
                    let (g, s, t) = make_caterpillar(spec).unwrap();
                    assert!(seen.insert(write_instance(&g, Some(s), Some(t))), "collision at {spec:?}");
                }
            }
        }
    }
}
