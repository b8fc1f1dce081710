//! The two reductions between treasure hunt and rendezvous, plus a
//! synchronous two-agent round simulator. Meeting is checked only at
//! round boundaries, never mid-edge.

use thiserror::Error;

use crate::agent::{self, Move, MoveKind, ReplayReport};
use crate::codec::BitString;
use crate::graph::PortLabeledGraph;
use crate::oracle::{create_advice, OracleError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RendezvousError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("hunt failed to reach the partner's start node")]
    HuntIncomplete,
    #[error("rendezvous strategy never crossed the joining edge")]
    StrategyIncomplete,
}

/// What a round-based rendezvous run produced.
#[derive(Clone, Debug)]
pub struct RendezvousOutcome {
    pub met: bool,
    pub meeting_node: Option<usize>,
    pub rounds: u64,
    /// Sum of both agents' edge traversals until meeting.
    pub total_cost: u64,
    pub advice_a: BitString,
    pub advice_b: BitString,
}

/// Per-round behaviour of one agent: stay inert, or follow a fixed port
/// script and then stay.
#[derive(Clone, Debug)]
enum AgentScript {
    Inert,
    Walk(Vec<usize>),
}

/// Advances both agents one action per round until they are co-located at
/// a round boundary or both scripts are exhausted.
fn simulate_rounds(
    graph: &PortLabeledGraph,
    starts: [usize; 2],
    scripts: [&AgentScript; 2],
) -> (bool, Option<usize>, u64, u64) {
    let mut pos = starts;
    let mut step = [0usize; 2];
    let mut cost = 0u64;
    let mut rounds = 0u64;
    loop {
        let mut moved = false;
        for i in 0..2 {
            if let AgentScript::Walk(ports) = scripts[i] {
                if let Some(&p) = ports.get(step[i]) {
                    pos[i] = graph.nodes[pos[i]].adjacency[p].0;
                    step[i] += 1;
                    cost += 1;
                    moved = true;
                }
            }
        }
        if moved {
            rounds += 1;
        }
        if pos[0] == pos[1] {
            return (true, Some(pos[0]), rounds, cost);
        }
        if !moved {
            return (false, None, rounds, cost);
        }
    }
}

/// Proposition-1 part 1: rendezvous built on top of treasure hunt. Agent b
/// gets the string (0) and stays inert; agent a gets (1 alpha) where alpha
/// is the oracle advice for hunting b's start node, strips the role bit,
/// and walks. Total advice size is |alpha| + 2.
pub fn rendezvous_via_th(
    graph: &PortLabeledGraph,
    a_start: usize,
    b_start: usize,
    ell: u64,
) -> Result<RendezvousOutcome, RendezvousError> {
    assert!(a_start != b_start, "agents must start at distinct nodes");
    let plan = create_advice(graph, a_start, b_start, ell)?;
    let alpha = plan.encoded;

    let mut advice_a = BitString::from_bits([true]);
    advice_a.extend(&alpha);
    let advice_b = BitString::from_bits([false]);

    // agent a's behaviour is fully determined by the stripped advice
    let hunt = agent::find_treasure(graph, a_start, |v| v == b_start, &advice_a.tail())
        .expect("oracle advice decodes");
    if !hunt.found {
        return Err(RendezvousError::HuntIncomplete);
    }
    let walk: Vec<usize> = hunt.trace.iter().map(|m| m.port).collect();

    let (met, meeting_node, rounds, total_cost) = simulate_rounds(
        graph,
        [a_start, b_start],
        [&AgentScript::Walk(walk), &AgentScript::Inert],
    );
    Ok(RendezvousOutcome {
        met,
        meeting_node,
        rounds,
        total_cost,
        advice_a,
        advice_b,
    })
}

/// A pluggable two-agent rendezvous procedure: given the graph and both
/// start nodes, it must produce each agent's full port walk.
pub trait RendezvousStrategy {
    fn run(
        &self,
        graph: &PortLabeledGraph,
        a_start: usize,
        b_start: usize,
    ) -> Result<[Vec<usize>; 2], RendezvousError>;
}

/// The part-1 reduction packaged as a strategy, for closing the loop in
/// part 2.
pub struct ThBackedStrategy {
    pub ell_of_logsum: fn(u64) -> u64,
}

impl Default for ThBackedStrategy {
    fn default() -> Self {
        ThBackedStrategy { ell_of_logsum: |logsum| logsum }
    }
}

impl RendezvousStrategy for ThBackedStrategy {
    fn run(
        &self,
        graph: &PortLabeledGraph,
        a_start: usize,
        b_start: usize,
    ) -> Result<[Vec<usize>; 2], RendezvousError> {
        let plan = create_advice(graph, a_start, b_start, 0)?;
        let ell = (self.ell_of_logsum)(plan.logsum).min(plan.logsum);
        let plan = create_advice(graph, a_start, b_start, ell)?;
        let hunt = agent::find_treasure(graph, a_start, |v| v == b_start, &plan.encoded)
            .expect("oracle advice decodes");
        if !hunt.found {
            return Err(RendezvousError::HuntIncomplete);
        }
        Ok([hunt.trace.iter().map(|m| m.port).collect(), Vec::new()])
    }
}

/// Proposition-1 part 2: treasure hunt built on top of any rendezvous
/// strategy. Runs the strategy on the doubled graph, finds the agent that
/// crosses the joining edge, and extracts its solo walk inside its own
/// copy up to the first arrival at the treasure node.
pub fn th_via_rendezvous(
    graph: &PortLabeledGraph,
    v: usize,
    w: usize,
    strategy: &dyn RendezvousStrategy,
) -> Result<agent::HuntOutcome, RendezvousError> {
    let n = graph.node_count();
    let (doubled, a_start, b_start) = graph.double_for_rendezvous(v, w);
    let walks = strategy.run(&doubled, a_start, b_start)?;

    for (which, walk) in walks.iter().enumerate() {
        let start = [a_start, b_start][which];
        let mut node = start;
        let mut crossed = false;
        let mut prefix: Vec<usize> = Vec::new();
        for &p in walk {
            let next = doubled.nodes[node].adjacency[p].0;
            if (node % n == w) && (next % n == w) && node != next {
                crossed = true;
                break;
            }
            prefix.push(p);
            node = next;
        }
        if !crossed {
            continue;
        }
        // the inter-copy edge sits at w, so the walk stays inside the
        // agent's own copy until it first reaches w; cut there and remap
        let mut cut = Vec::new();
        let mut at = start;
        for &p in &prefix {
            if at % n == w {
                break;
            }
            cut.push(p);
            at = doubled.nodes[at].adjacency[p].0;
        }
        return Ok(walk_to_outcome(graph, v, w, &cut));
    }
    Err(RendezvousError::StrategyIncomplete)
}

/// Re-walks a port sequence on the original graph, classifying each move
/// as forward or backtrack by whether it pops the trail.
fn walk_to_outcome(
    graph: &PortLabeledGraph,
    start: usize,
    treasure: usize,
    ports: &[usize],
) -> agent::HuntOutcome {
    let mut trace = Vec::with_capacity(ports.len());
    let mut trail: Vec<(usize, usize)> = Vec::new();
    let mut node = start;
    for &p in ports {
        let (next, _) = graph.nodes[node].adjacency[p];
        let kind = match trail.last() {
            Some(&(prev, taken)) if prev == next && graph.nodes[prev].adjacency[taken].0 == node => {
                trail.pop();
                MoveKind::Backtrack
            }
            _ => {
                trail.push((node, p));
                MoveKind::Forward
            }
        };
        trace.push(Move { from: node, port: p, kind });
        node = next;
    }
    let depth = trail.len();
    let mut misses = vec![0u64; depth.max(1)];
    let mut progress = 0usize;
    for mv in &trace {
        match mv.kind {
            MoveKind::Forward => progress += 1,
            MoveKind::Backtrack => {
                progress -= 1;
                if progress < misses.len() {
                    misses[progress] += 1;
                }
            }
        }
    }
    agent::HuntOutcome {
        found: node == treasure,
        cost: trace.len() as u64,
        trace,
        per_level_misses: misses,
        guard_events: Vec::new(),
        final_node: node,
    }
}

/// Audits an extracted hunt against the original graph.
pub fn audit_extracted(graph: &PortLabeledGraph, start: usize, outcome: &agent::HuntOutcome) -> ReplayReport {
    agent::replay(graph, start, &outcome.trace)
}
