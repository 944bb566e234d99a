//! Coordinated maximization of multiple submodular objectives over a
//! shared ground set.
//!
//! Agents take turns in a round-robin protocol (fixed or randomized
//! order), each adding at most one available item per turn under its own
//! independence constraint. The crate provides the protocol engine with
//! pluggable policies (greedy, two-solution simultaneous greedy, scripted),
//! concrete objective and constraint families behind value/independence
//! oracles, and brute-force verification of every per-agent approximation
//! and envy guarantee on desk-scale instances.

pub mod analysis;
pub mod constraints;
pub mod engine;
mod error;
pub mod experiments;
pub mod fleet;
pub mod graph;
pub mod instance;
pub mod objectives;
pub mod rng;
pub mod set;
pub mod trace;

pub use constraints::{ConstraintOracle, ConstraintSpec, MatroidSpec, Ratio};
pub use engine::{
    default_policies, run_randomized_round_robin, run_round_robin, AgentOrdering,
    NegativeMarginalRule, PolicyKind, ProtocolConfig,
};
pub use error::{Error, Result};
pub use graph::SimpleGraph;
pub use instance::{AgentSpec, Instance};
pub use objectives::{ObjectiveOracle, ObjectiveSpec};
pub use rng::RngSeed;
pub use set::{GroundSet, ItemId, ItemSet};
pub use trace::{allocation_of, AgentSolution, Allocation, PickEvent, Slot, Trace};
