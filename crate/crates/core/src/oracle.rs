//! Advice construction: the oracle walks the deterministic shortest path,
//! budgets substring lengths from `ell`, and encodes the sector of each
//! forward port.

use thiserror::Error;

use crate::agent;
use crate::analysis::{cost_bound, BoundKind};
use crate::codec::{self, BitString, Ratio};
use crate::graph::{PathWithPorts, PortLabeledGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("ell {ell} out of range: LogSum for this instance is {logsum}")]
    EllOutOfRange { ell: u64, logsum: u64 },
    #[error("target cost {target} below the distance {distance}")]
    TargetBelowDistance { target: u64, distance: u64 },
}

/// Everything the oracle computed for one instance and budget.
#[derive(Clone, Debug)]
pub struct AdvicePlan {
    pub path: PathWithPorts,
    pub logsum: u64,
    /// The budget the caller asked for.
    pub requested_ell: u64,
    /// The effective budget: the largest self-consistent value <= requested,
    /// equal to the total substring length the agent will recover.
    pub ell: u64,
    pub beta: Ratio,
    pub substrings: Vec<BitString>,
    pub logsum_bits: BitString,
    pub encoded: BitString,
}

impl AdvicePlan {
    pub fn depth(&self) -> usize {
        self.path.len()
    }

    /// max_i |A_i|
    pub fn max_substring_len(&self) -> u32 {
        self.substrings.iter().map(|s| s.len() as u32).max().unwrap_or(0)
    }

    pub fn substring_lengths(&self) -> Vec<usize> {
        self.substrings.iter().map(|s| s.len()).collect()
    }
}

fn path_degrees(graph: &PortLabeledGraph, path: &PathWithPorts) -> Vec<u64> {
    path.steps.iter().map(|&(v, _)| graph.degree(v) as u64).collect()
}

/// Per-level substring lengths under budget `ell`. On-path nodes never hit
/// the LogSum-zero mismatch: when LogSum is 0, every path degree is 1.
fn substring_lengths_for(degrees: &[u64], ell: u64, logsum: u64) -> Vec<u32> {
    degrees
        .iter()
        .map(|&deg| codec::expected_substring_length(deg, ell, logsum).unwrap_or(0))
        .collect()
}

/// The agent recovers ell as the sum of the substring lengths, so the
/// budget actually used must be a fixed point of the length formula.
/// Iterating the total length downward from the request converges to the
/// greatest such value.
fn self_consistent_ell(degrees: &[u64], requested: u64, logsum: u64) -> u64 {
    let mut ell = requested;
    loop {
        let total: u64 = substring_lengths_for(degrees, ell, logsum)
            .iter()
            .map(|&z| z as u64)
            .sum();
        if total == ell {
            return ell;
        }
        debug_assert!(total < ell);
        ell = total;
    }
}

/// Builds the advice for hunting `treasure` from `s` with budget `ell`.
pub fn create_advice(
    graph: &PortLabeledGraph,
    s: usize,
    treasure: usize,
    ell: u64,
) -> Result<AdvicePlan, OracleError> {
    let path = graph.shortest_path(s, treasure);
    let degrees = path_degrees(graph, &path);
    let logsum: u64 = degrees.iter().map(|&d| codec::ceil_log2(d) as u64).sum();
    if ell > logsum {
        return Err(OracleError::EllOutOfRange { ell, logsum });
    }
    let effective = self_consistent_ell(&degrees, ell, logsum);
    let lengths = substring_lengths_for(&degrees, effective, logsum);
    let substrings: Vec<BitString> = path
        .steps
        .iter()
        .enumerate()
        .map(|(i, &(_, port))| codec::encode_sector_number(degrees[i], port as u64, lengths[i]))
        .collect();
    let beta = if logsum == 0 {
        Ratio::new(1, 1)
    } else {
        Ratio::new(effective, logsum)
    };
    let logsum_bits = BitString::minimal_binary(logsum);
    let encoded = codec::concat(&substrings, &logsum_bits);
    Ok(AdvicePlan {
        path,
        logsum,
        requested_ell: ell,
        ell: effective,
        beta,
        substrings,
        logsum_bits,
        encoded,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelectionMode {
    /// Smallest ell whose stated cost bound certifies the target.
    Certified,
    /// Smallest ell whose simulated hunt meets the target.
    Empirical,
}

/// Scans ell = 0..=LogSum and returns the smallest budget meeting target
/// cost `c`. Always terminates: ell = LogSum gives cost exactly D.
pub fn select_ell(
    graph: &PortLabeledGraph,
    s: usize,
    treasure: usize,
    c: u64,
    mode: SelectionMode,
) -> Result<(u64, AdvicePlan), OracleError> {
    let base = graph.shortest_path(s, treasure);
    let d = base.len() as u64;
    if c < d {
        return Err(OracleError::TargetBelowDistance { target: c, distance: d });
    }
    let degrees = path_degrees(graph, &base);
    let logsum: u64 = degrees.iter().map(|&deg| codec::ceil_log2(deg) as u64).sum();
    let kind = if graph.is_tree() { BoundKind::Tree } else { BoundKind::General };
    let edges = graph.edge_count();

    for ell in 0..=logsum {
        let plan = create_advice(graph, s, treasure, ell)?;
        let ok = match mode {
            SelectionMode::Certified => {
                if plan.beta.is_one() {
                    d <= c
                } else {
                    cost_bound(kind, d, edges, plan.ell, plan.logsum, plan.max_substring_len())
                        .expect("beta < 1")
                        .at_most(c)
                }
            }
            SelectionMode::Empirical => {
                let outcome = agent::run(
                    graph,
                    s,
                    |v| v == treasure,
                    &codec::decode(&plan.encoded).expect("oracle advice is well-formed"),
                );
                outcome.found && outcome.cost <= c
            }
        };
        if ok {
            return Ok((ell, plan));
        }
    }
    unreachable!("ell = LogSum always certifies cost D <= C");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_instance, random_connected_graph};

    fn path4() -> PortLabeledGraph {
        parse_instance("graph-v1\nnodes 4\nedge 0 0 1 0\nedge 1 1 2 0\nedge 2 1 3 0\n")
            .unwrap()
            .graph
    }

    #[test]
    fn path_graph_worked_example() {
        // degrees along the path are (1,2,2) -> LogSum = 2
        let g = path4();
        let plan = create_advice(&g, 0, 3, 2).unwrap();
        assert_eq!(plan.logsum, 2);
        assert_eq!(plan.ell, 2);
        assert!(plan.beta.is_one());
        assert_eq!(plan.substring_lengths(), vec![0, 1, 1]);
    }

    #[test]
    fn full_budget_gives_exact_lengths() {
        let g = random_connected_graph(20, 40, 9).unwrap();
        let t = g.farthest_from(0);
        let path = g.shortest_path(0, t);
        let logsum: u64 = path
            .steps
            .iter()
            .map(|&(v, _)| codec::ceil_log2(g.degree(v) as u64) as u64)
            .sum();
        let plan = create_advice(&g, 0, t, logsum).unwrap();
        assert_eq!(plan.ell, logsum);
        for (i, &(v, _)) in plan.path.steps.iter().enumerate() {
            assert_eq!(
                plan.substrings[i].len() as u32,
                codec::ceil_log2(g.degree(v) as u64)
            );
            // every sector is a single port
            let sector = codec::get_sector(g.degree(v) as u64, &plan.substrings[i]);
            assert_eq!(sector.start(), sector.end());
        }
    }

    #[test]
    fn trivial_plan_at_distance_zero() {
        let g = path4();
        let plan = create_advice(&g, 2, 2, 0).unwrap();
        assert_eq!(plan.depth(), 0);
        assert_eq!(
            plan.encoded,
            codec::concat(&[], &BitString::minimal_binary(0))
        );
    }

    #[test]
    fn ell_out_of_range_rejected() {
        let g = path4();
        assert!(matches!(
            create_advice(&g, 0, 3, 99),
            Err(OracleError::EllOutOfRange { .. })
        ));
    }

    #[test]
    fn forward_port_always_in_sector() {
        for seed in 0..25u64 {
            let g = random_connected_graph(12, 18, seed).unwrap();
            let t = g.farthest_from(0);
            let path = g.shortest_path(0, t);
            let logsum: u64 = path
                .steps
                .iter()
                .map(|&(v, _)| codec::ceil_log2(g.degree(v) as u64) as u64)
                .sum();
            for ell in 0..=logsum {
                let plan = create_advice(&g, 0, t, ell).unwrap();
                assert!(plan.ell <= ell, "floors only shrink");
                for (i, &(v, port)) in plan.path.steps.iter().enumerate() {
                    let sector = codec::get_sector(g.degree(v) as u64, &plan.substrings[i]);
                    assert!(sector.contains(&(port as u128)));
                }
                // exact encoded-size formula
                let sum: usize = plan.substring_lengths().iter().sum();
                assert_eq!(
                    plan.encoded.len(),
                    2 * (sum + plan.logsum_bits.len()) + 2 * plan.depth()
                );
            }
        }
    }

    #[test]
    fn advice_length_monotone_in_ell() {
        let g = random_connected_graph(30, 60, 4).unwrap();
        let t = g.farthest_from(0);
        let logsum = create_advice(&g, 0, t, 0).unwrap().logsum;
        let mut prev = 0;
        for ell in 0..=logsum {
            let plan = create_advice(&g, 0, t, ell).unwrap();
            assert!(plan.encoded.len() >= prev, "ell={ell}");
            prev = plan.encoded.len();
        }
    }

    #[test]
    fn select_ell_at_target_distance_needs_full_budget() {
        let g = random_connected_graph(15, 30, 3).unwrap();
        let t = g.farthest_from(0);
        let d = g.distance(0, t);
        let (ell_c, plan_c) = select_ell(&g, 0, t, d, SelectionMode::Certified).unwrap();
        let (ell_e, plan_e) = select_ell(&g, 0, t, d, SelectionMode::Empirical).unwrap();
        assert_eq!(ell_c, plan_c.logsum);
        assert!(plan_c.beta.is_one());
        assert!(ell_e <= ell_c);
        assert!(plan_e.ell <= plan_c.ell);
    }

    #[test]
    fn generous_target_needs_little_advice() {
        let g = random_connected_graph(10, 20, 6).unwrap();
        let t = g.farthest_from(0);
        let d = g.distance(0, t);
        let e = g.edge_count();
        let generous = 16 * d * e * e;
        let (ell, _) = select_ell(&g, 0, t, generous, SelectionMode::Certified).unwrap();
        assert_eq!(ell, 0);
    }

    #[test]
    fn empirical_no_larger_than_certified() {
        for seed in 0..30u64 {
            let n = 6 + (seed % 10) as usize;
            let e = (n - 1) + (seed as usize % n);
            let g = random_connected_graph(n, e, seed).unwrap();
            let t = g.farthest_from(0);
            let d = g.distance(0, t);
            let c = d + seed % 7;
            let (ell_c, _) = select_ell(&g, 0, t, c, SelectionMode::Certified).unwrap();
            let (ell_e, _) = select_ell(&g, 0, t, c, SelectionMode::Empirical).unwrap();
            assert!(ell_e <= ell_c, "seed={seed}: empirical {ell_e} > certified {ell_c}");
        }
    }

    #[test]
    fn target_below_distance_rejected() {
        let g = path4();
        assert!(matches!(
            select_ell(&g, 0, 3, 2, SelectionMode::Certified),
            Err(OracleError::TargetBelowDistance { .. })
        ));
    }
}
