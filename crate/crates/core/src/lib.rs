//! Elections under plurality, Condorcet and approval voting, the fourteen
//! constructive/destructive electoral-control problems over them, exact
//! polynomial-time solvers for every tractable case, a brute-force oracle,
//! hardness-instance generators, and a desk-scale verifier for the
//! vulnerable/resistant/immune classification.

pub mod control;
pub mod election;
pub mod fixtures;
pub mod format;
pub mod oracle;
pub mod reductions;
pub mod solvers;
pub mod table;
pub mod transfer;

pub use control::{
    evaluate, ChairAction, ControlError, ControlInstance, Goal, Scenario, TieRule,
};
pub use election::{
    Ballot, CandidateId, Election, ElectionError, Rule, Tally,
};
