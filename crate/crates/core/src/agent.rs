//! Advice-guided treasure hunt: a depth-bounded backtracking walk where
//! the advice substring at each progress level names the sector of ports
//! worth trying. Costs count edge traversals only; every forward move and
//! every backtrack costs 1.

use std::collections::HashMap;

use thiserror::Error;

use crate::codec::{self, AdvicePayload, BitString, CodecError};
use crate::graph::PortLabeledGraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AgentError {
    #[error(transparent)]
    MalformedAdvice(#[from] CodecError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveKind {
    Forward,
    Backtrack,
}

/// One edge traversal: the node it started from, the port taken there,
/// and whether it extended or popped the trail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Move {
    pub from: usize,
    pub port: usize,
    pub kind: MoveKind,
}

/// The result of one hunt run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HuntOutcome {
    pub found: bool,
    pub cost: u64,
    pub trace: Vec<Move>,
    /// miss_i = forward moves from progress level i that were backtracked.
    pub per_level_misses: Vec<u64>,
    /// (node, progress) pairs at which the revisit guard evaluated true.
    pub guard_events: Vec<(usize, usize)>,
    /// Node the run ended on.
    pub final_node: usize,
}

impl HuntOutcome {
    pub fn total_misses(&self) -> u64 {
        self.per_level_misses.iter().sum()
    }
}

struct Frame {
    node: usize,
    /// Port at `node` leading back to the previous trail node; None at the root.
    entry_port: Option<usize>,
    /// Sector ports still to try, ascending, already filtered to p < deg.
    ports: std::vec::IntoIter<usize>,
}

/// Runs the search from `s` with the given advice. The treasure check
/// fires on every node entry, including the start node. Exhausting the
/// search without finding the treasure is not an error: it returns
/// `found = false` with the full cost, signalling advice/instance
/// mismatch.
pub fn find_treasure(
    graph: &PortLabeledGraph,
    s: usize,
    treasure: impl Fn(usize) -> bool,
    advice: &BitString,
) -> Result<HuntOutcome, AgentError> {
    let payload = codec::decode(advice)?;
    Ok(run(graph, s, treasure, &payload))
}

pub fn run(
    graph: &PortLabeledGraph,
    s: usize,
    treasure: impl Fn(usize) -> bool,
    payload: &AdvicePayload,
) -> HuntOutcome {
    let depth = payload.depth();
    let ell = payload.ell();
    let logsum = payload.logsum();

    let mut visited_min: HashMap<usize, usize> = HashMap::new();
    let mut trace: Vec<Move> = Vec::new();
    let mut guard_events = Vec::new();
    let mut stack: Vec<Frame> = Vec::new();
    let mut found = false;
    let mut final_node = s;

    // node entry: treasure check first, then the revisit guard and the
    // advice-size match decide which ports to try here
    let enter = |node: usize,
                     progress: usize,
                     entry_port: Option<usize>,
                     visited_min: &mut HashMap<usize, usize>,
                     guard_events: &mut Vec<(usize, usize)>|
     -> Option<Frame> {
        if treasure(node) {
            return None;
        }
        let guard = progress < depth
            && visited_min.get(&node).map_or(true, |&m| progress < m);
        let ports = if guard {
            visited_min.insert(node, progress);
            guard_events.push((node, progress));
            let deg = graph.degree(node) as u64;
            let expected = codec::expected_substring_length(deg, ell, logsum);
            let substring = &payload.substrings[progress];
            if expected == Some(substring.len() as u32) {
                let sector = codec::get_sector(deg, substring);
                let lo = *sector.start();
                let hi = (*sector.end()).min(deg as u128 - 1);
                if lo <= hi {
                    (lo as usize..=hi as usize).collect::<Vec<_>>()
                } else {
                    Vec::new()
                }
            } else {
                Vec::new()
            }
        } else {
            Vec::new()
        };
        Some(Frame { node, entry_port, ports: ports.into_iter() })
    };

    match enter(s, 0, None, &mut visited_min, &mut guard_events) {
        Some(frame) => stack.push(frame),
        None => found = true,
    }

    while !found {
        let Some(top) = stack.last_mut() else { break };
        if let Some(p) = top.ports.next() {
            let from = top.node;
            let progress = stack.len() - 1;
            let (w, q) = graph.nodes[from].adjacency[p];
            trace.push(Move { from, port: p, kind: MoveKind::Forward });
            final_node = w;
            match enter(w, progress + 1, Some(q), &mut visited_min, &mut guard_events) {
                Some(frame) => stack.push(frame),
                None => found = true,
            }
        } else {
            let frame = stack.pop().unwrap();
            match frame.entry_port {
                Some(q) => {
                    // backtrack along the entry edge
                    trace.push(Move { from: frame.node, port: q, kind: MoveKind::Backtrack });
                    final_node = graph.nodes[frame.node].adjacency[q].0;
                }
                None => {
                    // top-level return at s is a no-op costing 0
                    final_node = frame.node;
                }
            }
        }
    }

    let cost = trace.len() as u64;
    let per_level_misses = misses_from_trace(&trace, depth);
    HuntOutcome { found, cost, trace, per_level_misses, guard_events, final_node }
}

/// Recounts per-level misses from a trace: a backtrack from level i+1
/// undoes one forward move made at level i.
fn misses_from_trace(trace: &[Move], depth: usize) -> Vec<u64> {
    let mut misses = vec![0u64; depth];
    let mut progress: usize = 0;
    for mv in trace {
        match mv.kind {
            MoveKind::Forward => progress += 1,
            MoveKind::Backtrack => {
                progress -= 1;
                if progress < depth {
                    misses[progress] += 1;
                }
            }
        }
    }
    misses
}

/// A replay inconsistency, or the final node when the trace is coherent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReplayReport {
    Consistent { final_node: usize, cost: u64 },
    Inconsistent { index: usize, reason: String },
}

/// Re-walks a trace from `s`, confirming each forward port exists and each
/// backtrack returns along the trail top. Reports the first inconsistency.
pub fn replay(graph: &PortLabeledGraph, s: usize, trace: &[Move]) -> ReplayReport {
    let mut node = s;
    // trail of (node we came from, port taken there)
    let mut trail: Vec<(usize, usize)> = Vec::new();
    for (index, mv) in trace.iter().enumerate() {
        if mv.from != node {
            return ReplayReport::Inconsistent {
                index,
                reason: format!("move starts at {}, agent is at {node}", mv.from),
            };
        }
        let Some(&(next, q)) = graph.nodes[node].adjacency.get(mv.port) else {
            return ReplayReport::Inconsistent {
                index,
                reason: format!("port {} does not exist at node {node}", mv.port),
            };
        };
        match mv.kind {
            MoveKind::Forward => {
                trail.push((node, mv.port));
                node = next;
                let _ = q;
            }
            MoveKind::Backtrack => match trail.pop() {
                Some((prev, taken)) if prev == next && graph.nodes[prev].adjacency[taken].1 == mv.port => {
                    node = next;
                }
                Some((prev, _)) => {
                    return ReplayReport::Inconsistent {
                        index,
                        reason: format!("backtrack leads to {next}, trail top is {prev}"),
                    }
                }
                None => {
                    return ReplayReport::Inconsistent {
                        index,
                        reason: "backtrack with empty trail".into(),
                    }
                }
            },
        }
    }
    ReplayReport::Consistent { final_node: node, cost: trace.len() as u64 }
}
