//! A deliberately naive recursive walker, kept independent of the library's
//! iterative implementation so the two can be compared move for move.

use hunt_core::agent::{Move, MoveKind};
use hunt_core::codec::{self, AdvicePayload};
use hunt_core::graph::PortLabeledGraph;

use std::collections::HashMap;

pub struct NaiveOutcome {
    pub found: bool,
    pub trace: Vec<Move>,
    pub final_node: usize,
}

pub fn naive_hunt(
    graph: &PortLabeledGraph,
    s: usize,
    treasure: &dyn Fn(usize) -> bool,
    payload: &AdvicePayload,
) -> NaiveOutcome {
    let mut visited_min: HashMap<usize, usize> = HashMap::new();
    let mut trace = Vec::new();
    let mut final_node = s;
    let found = visit(
        graph,
        s,
        0,
        treasure,
        payload,
        &mut visited_min,
        &mut trace,
        &mut final_node,
    );
    NaiveOutcome { found, trace, final_node }
}

#[allow(clippy::too_many_arguments)]
fn visit(
    graph: &PortLabeledGraph,
    node: usize,
    progress: usize,
    treasure: &dyn Fn(usize) -> bool,
    payload: &AdvicePayload,
    visited_min: &mut HashMap<usize, usize>,
    trace: &mut Vec<Move>,
    final_node: &mut usize,
) -> bool {
    if treasure(node) {
        return true;
    }
    let depth = payload.depth();
    let guard = progress < depth && visited_min.get(&node).map_or(true, |&m| progress < m);
    if !guard {
        return false;
    }
    visited_min.insert(node, progress);
    let deg = graph.degree(node) as u64;
    let expected = codec::expected_substring_length(deg, payload.ell(), payload.logsum());
    let substring = &payload.substrings[progress];
    if expected != Some(substring.len() as u32) {
        return false;
    }
    let sector = codec::get_sector(deg, substring);
    for p in *sector.start()..=*sector.end() {
        if p >= deg as u128 {
            continue;
        }
        let p = p as usize;
        let (w, q) = graph.nodes[node].adjacency[p];
        trace.push(Move { from: node, port: p, kind: MoveKind::Forward });
        *final_node = w;
        if visit(graph, w, progress + 1, treasure, payload, visited_min, trace, final_node) {
            return true;
        }
        trace.push(Move { from: w, port: q, kind: MoveKind::Backtrack });
        *final_node = node;
    }
    false
}
