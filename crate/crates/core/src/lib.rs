//! Deterministic simulation of advice-guided treasure hunt and rendezvous
//! on port-labeled graphs, with exact cost accounting and the bound
//! calculators that go with it.
//!
//! An oracle that knows the instance encodes, for each step of the
//! shortest path, the sector of ports containing the forward port. The
//! agent decodes that advice and searches depth-first, trying only the
//! advised sector at each progress level. The `rendezvous` module carries
//! the two reductions between the single-agent and two-agent tasks.

pub mod agent;
pub mod analysis;
pub mod codec;
pub mod graph;
pub mod oracle;
pub mod rendezvous;

pub use agent::{find_treasure, replay, HuntOutcome, Move, MoveKind};
pub use codec::{concat, decode, AdvicePayload, BitString, Ratio};
pub use graph::{PortLabeledGraph, PathWithPorts};
pub use oracle::{create_advice, select_ell, AdvicePlan, SelectionMode};
