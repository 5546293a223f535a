//! Shared instance builders for the solver-versus-oracle benchmarks.

use election_control::control::{ControlInstance, Goal, Scenario, TieRule};
use election_control::election::{cid, Ballot, Election, Rule};

/// Plurality election over {a, b, c} with `n` voters cycling through the
/// three rotations, posed as destructive voter-partition (TE) against the
/// leader `a`. The oracle must scan voter bipartitions; the exact solver is
/// a pair scan over score splits.
pub fn partition_voters_instance(n: usize) -> ControlInstance {
    let a = cid("a");
    let b = cid("b");
    let c = cid("c");
    let rotations = [
        vec![a.clone(), b.clone(), c.clone()],
        vec![b.clone(), c.clone(), a.clone()],
        vec![c.clone(), a.clone(), b.clone()],
    ];
    let ballots: Vec<Ballot> = (0..n)
        .map(|i| Ballot::Ordinal(rotations[i % 3].clone()))
        .collect();
    let e = Election::new(Rule::Plurality, vec![a.clone(), b, c], ballots).unwrap();
    ControlInstance::new(
        e,
        Scenario::PartitionVoters,
        Goal::Destructive,
        TieRule::Te,
        a,
        None,
        Vec::new(),
        Vec::new(),
    )
    .unwrap()
}

/// Approval election over {a, b} where `a` leads by one, posed as destructive
/// addition of voters from a pool of `n` b-approvers with limit 1. The oracle
/// enumerates pool subsets; the exact solver greedily closes the gap.
pub fn add_voters_instance(n: usize) -> ControlInstance {
    let a = cid("a");
    let b = cid("b");
    let mut ballots = vec![Ballot::approval([a.clone()]); n / 2 + 1];
    ballots.extend(vec![Ballot::approval([b.clone()]); n / 2]);
    let e = Election::new(Rule::Approval, vec![a.clone(), b.clone()], ballots).unwrap();
    let pool = vec![Ballot::approval([b]); n];
    ControlInstance::new(
        e,
        Scenario::AddVoters,
        Goal::Destructive,
        TieRule::NotApplicable,
        a,
        Some(1),
        Vec::new(),
        pool,
    )
    .unwrap()
}
