//! The seven control scenarios, constructive/destructive goals, TE/TP tie
//! handling, and evaluation of a proposed chair action against the goal.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::election::{Ballot, CandidateId, Election, ElectionError, Rule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    AddCandidates,
    DeleteCandidates,
    PartitionCandidates,
    RunoffPartitionCandidates,
    AddVoters,
    DeleteVoters,
    PartitionVoters,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::AddCandidates,
        Scenario::DeleteCandidates,
        Scenario::PartitionCandidates,
        Scenario::RunoffPartitionCandidates,
        Scenario::AddVoters,
        Scenario::DeleteVoters,
        Scenario::PartitionVoters,
    ];

    pub fn is_partition(self) -> bool {
        matches!(
            self,
            Scenario::PartitionCandidates
                | Scenario::RunoffPartitionCandidates
                | Scenario::PartitionVoters
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Scenario::AddCandidates => "add-candidates",
            Scenario::DeleteCandidates => "delete-candidates",
            Scenario::PartitionCandidates => "partition-candidates",
            Scenario::RunoffPartitionCandidates => "runoff-partition-candidates",
            Scenario::AddVoters => "add-voters",
            Scenario::DeleteVoters => "delete-voters",
            Scenario::PartitionVoters => "partition-voters",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Goal {
    /// Make the target the unique winner.
    Constructive,
    /// Prevent the target from being the unique winner.
    Destructive,
}

impl Goal {
    pub fn name(self) -> &'static str {
        match self {
            Goal::Constructive => "constructive",
            Goal::Destructive => "destructive",
        }
    }
}

/// Subelection tie handling. TE/TP apply exactly to partition scenarios
/// under plurality and approval; Condorcet winners are inherently unique,
/// so its partitions (and all non-partition scenarios) use `NotApplicable`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TieRule {
    Te,
    Tp,
    NotApplicable,
}

impl TieRule {
    pub fn name(self) -> &'static str {
        match self {
            TieRule::Te => "TE",
            TieRule::Tp => "TP",
            TieRule::NotApplicable => "n/a",
        }
    }
}

/// Subelection winners that survive the tie-handling rule.
pub fn survivors(sub_winners: &[CandidateId], ties: TieRule) -> Vec<CandidateId> {
    match ties {
        TieRule::Te if sub_winners.len() > 1 => Vec::new(),
        _ => sub_winners.to_vec(),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ControlError {
    #[error("target {0} is not a qualified candidate")]
    TargetNotCandidate(CandidateId),
    #[error("{0}")]
    Election(#[from] ElectionError),
    #[error("spoiler {0} is already a qualified candidate")]
    SpoilerClash(CandidateId),
    #[error("scenario {scenario} {problem}")]
    BadLimit {
        scenario: &'static str,
        problem: String,
    },
    #[error("tie rule {ties} is not legal for {rule} {scenario}")]
    BadTieRule {
        ties: &'static str,
        rule: &'static str,
        scenario: &'static str,
    },
    #[error("universe must equal C plus the spoiler set, in that order")]
    BadUniverse,
    #[error("action kind does not match scenario {0}")]
    ActionMismatch(&'static str),
    #[error("action is illegal: {0}")]
    IllegalAction(String),
}

/// A fully specified control problem instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlInstance {
    base: Election,
    scenario: Scenario,
    goal: Goal,
    ties: TieRule,
    target: CandidateId,
    limit: Option<usize>,
    /// Spoiler reserve `D` (add-candidates only); base ballots range over `C ∪ D`.
    spoilers: Vec<CandidateId>,
    /// Unregistered ballots `W` (add-voters only).
    unregistered: Vec<Ballot>,
}

impl ControlInstance {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        base: Election,
        scenario: Scenario,
        goal: Goal,
        ties: TieRule,
        target: CandidateId,
        limit: Option<usize>,
        spoilers: Vec<CandidateId>,
        unregistered: Vec<Ballot>,
    ) -> Result<ControlInstance, ControlError> {
        if !base.contains(&target) {
            return Err(ControlError::TargetNotCandidate(target));
        }
        let rule = base.rule();
        let tie_applicable =
            scenario.is_partition() && matches!(rule, Rule::Plurality | Rule::Approval);
        if tie_applicable != matches!(ties, TieRule::Te | TieRule::Tp) {
            return Err(ControlError::BadTieRule {
                ties: ties.name(),
                rule: rule.name(),
                scenario: scenario.name(),
            });
        }
        match scenario {
            Scenario::AddCandidates => {
                if limit.is_some() {
                    return Err(ControlError::BadLimit {
                        scenario: scenario.name(),
                        problem: "takes no limit".to_string(),
                    });
                }
                if let Some(s) = spoilers.iter().find(|s| base.contains(s)) {
                    return Err(ControlError::SpoilerClash(s.clone()));
                }
                // Ballots must be expressed over C followed by D.
                let expected: Vec<CandidateId> = base
                    .candidates()
                    .iter()
                    .chain(spoilers.iter())
                    .cloned()
                    .collect();
                if base.universe() != expected.as_slice() {
                    return Err(ControlError::BadUniverse);
                }
            }
            Scenario::DeleteCandidates => {
                let k = limit.ok_or_else(|| ControlError::BadLimit {
                    scenario: scenario.name(),
                    problem: "requires a limit".to_string(),
                })?;
                if k == 0 || k >= base.candidates().len() {
                    return Err(ControlError::BadLimit {
                        scenario: scenario.name(),
                        problem: format!("limit must satisfy 0 < k < |C|, got {k}"),
                    });
                }
            }
            Scenario::AddVoters => {
                let k = limit.ok_or_else(|| ControlError::BadLimit {
                    scenario: scenario.name(),
                    problem: "requires a limit".to_string(),
                })?;
                if k > unregistered.len() {
                    return Err(ControlError::BadLimit {
                        scenario: scenario.name(),
                        problem: format!("limit {k} exceeds |W| = {}", unregistered.len()),
                    });
                }
            }
            Scenario::DeleteVoters => {
                let k = limit.ok_or_else(|| ControlError::BadLimit {
                    scenario: scenario.name(),
                    problem: "requires a limit".to_string(),
                })?;
                if k > base.num_ballots() {
                    return Err(ControlError::BadLimit {
                        scenario: scenario.name(),
                        problem: format!("limit {k} exceeds |V| = {}", base.num_ballots()),
                    });
                }
            }
            _ => {
                if limit.is_some() {
                    return Err(ControlError::BadLimit {
                        scenario: scenario.name(),
                        problem: "takes no limit".to_string(),
                    });
                }
            }
        }
        if !matches!(scenario, Scenario::AddCandidates) && !spoilers.is_empty() {
            return Err(ControlError::BadUniverse);
        }
        if !matches!(scenario, Scenario::AddVoters) && !unregistered.is_empty() {
            return Err(ControlError::BadLimit {
                scenario: scenario.name(),
                problem: "takes no unregistered voters".to_string(),
            });
        }
        // Unregistered ballots must be expressible in the base election.
        if !unregistered.is_empty() {
            base.with_ballots(unregistered.clone())?;
        }
        Ok(ControlInstance {
            base,
            scenario,
            goal,
            ties,
            target,
            limit,
            spoilers,
            unregistered,
        })
    }

    pub fn base(&self) -> &Election {
        &self.base
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn goal(&self) -> Goal {
        self.goal
    }

    pub fn ties(&self) -> TieRule {
        self.ties
    }

    pub fn target(&self) -> &CandidateId {
        &self.target
    }

    pub fn limit(&self) -> Option<usize> {
        self.limit
    }

    pub fn spoilers(&self) -> &[CandidateId] {
        &self.spoilers
    }

    pub fn unregistered(&self) -> &[Ballot] {
        &self.unregistered
    }
}

/// A typed certificate describing the chair's action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChairAction {
    /// Spoilers to enter, a subset of `D`.
    AddCandidates(Vec<CandidateId>),
    /// Candidates to disqualify.
    DeleteCandidates(Vec<CandidateId>),
    /// `(C1, C2)`: winners of `(C1, V)` surviving ties face `C2`.
    PartitionCandidates(Vec<CandidateId>, Vec<CandidateId>),
    /// Voter index blocks `(V1, V2)`; duplicates split by position.
    PartitionVoters(Vec<usize>, Vec<usize>),
    /// Indices into `W` to register.
    AddVoters(Vec<usize>),
    /// Indices into `V` to disenfranchise.
    DeleteVoters(Vec<usize>),
}

impl ChairAction {
    /// Number of added/deleted items; partitions have no meaningful size.
    pub fn cardinality(&self) -> usize {
        match self {
            ChairAction::AddCandidates(v) | ChairAction::DeleteCandidates(v) => v.len(),
            ChairAction::AddVoters(v) | ChairAction::DeleteVoters(v) => v.len(),
            ChairAction::PartitionCandidates(..) | ChairAction::PartitionVoters(..) => 0,
        }
    }
}

fn check_partition_ids(
    universe: &[CandidateId],
    first: &[CandidateId],
    second: &[CandidateId],
) -> Result<(), ControlError> {
    let mut seen = BTreeSet::new();
    for c in first.iter().chain(second) {
        if !universe.contains(c) || !seen.insert(c.clone()) {
            return Err(ControlError::IllegalAction(format!(
                "candidate blocks do not partition C (at {c})"
            )));
        }
    }
    if seen.len() != universe.len() {
        return Err(ControlError::IllegalAction(
            "candidate blocks do not cover C".to_string(),
        ));
    }
    Ok(())
}

fn check_partition_indices(n: usize, first: &[usize], second: &[usize]) -> Result<(), ControlError> {
    let mut seen = vec![false; n];
    for &i in first.iter().chain(second) {
        if i >= n || seen[i] {
            return Err(ControlError::IllegalAction(format!(
                "voter blocks do not partition the ballot list (at index {i})"
            )));
        }
        seen[i] = true;
    }
    if seen.iter().any(|&s| !s) {
        return Err(ControlError::IllegalAction(
            "voter blocks do not cover the ballot list".to_string(),
        ));
    }
    Ok(())
}

fn check_index_subset(n: usize, indices: &[usize], what: &str) -> Result<(), ControlError> {
    let mut seen = vec![false; n];
    for &i in indices {
        if i >= n || seen[i] {
            return Err(ControlError::IllegalAction(format!(
                "{what} index {i} is out of range or repeated"
            )));
        }
        seen[i] = true;
    }
    Ok(())
}

/// Final candidate set of the two-stage partition-of-candidates election.
pub fn final_candidates_partition(
    instance: &ControlInstance,
    first: &[CandidateId],
    second: &[CandidateId],
) -> Result<Vec<CandidateId>, ControlError> {
    check_partition_ids(instance.base.candidates(), first, second)?;
    let sub = instance.base.restrict(first)?;
    let mut finals = survivors(&sub.winners(), instance.ties);
    finals.extend(second.iter().cloned());
    Ok(in_base_order(instance, finals))
}

/// Final candidate set of the run-off partition-of-candidates election.
pub fn final_candidates_runoff(
    instance: &ControlInstance,
    first: &[CandidateId],
    second: &[CandidateId],
) -> Result<Vec<CandidateId>, ControlError> {
    check_partition_ids(instance.base.candidates(), first, second)?;
    let mut finals = survivors(&instance.base.restrict(first)?.winners(), instance.ties);
    finals.extend(survivors(
        &instance.base.restrict(second)?.winners(),
        instance.ties,
    ));
    Ok(in_base_order(instance, finals))
}

/// Final candidate set of the hierarchical partition-of-voters election:
/// survivors of `(C, V1)` and `(C, V2)`, each over the full candidate set.
pub fn final_candidates_voter_partition(
    instance: &ControlInstance,
    first: &[usize],
    second: &[usize],
) -> Result<Vec<CandidateId>, ControlError> {
    check_partition_indices(instance.base.num_ballots(), first, second)?;
    let mut finals = Vec::new();
    for block in [first, second] {
        let ballots: Vec<Ballot> = block
            .iter()
            .map(|&i| instance.base.ballots()[i].clone())
            .collect();
        let sub = instance.base.with_ballots(ballots)?;
        finals.extend(survivors(&sub.winners(), instance.ties));
    }
    Ok(in_base_order(instance, finals))
}

/// Dedup and order a final candidate set by base candidate order.
fn in_base_order(instance: &ControlInstance, finals: Vec<CandidateId>) -> Vec<CandidateId> {
    let set: BTreeSet<CandidateId> = finals.into_iter().collect();
    instance
        .base
        .candidates()
        .iter()
        .filter(|c| set.contains(*c))
        .cloned()
        .collect()
}

/// The election standing after the chair's action has been applied.
pub fn post_action_election(
    instance: &ControlInstance,
    action: &ChairAction,
) -> Result<Election, ControlError> {
    let base = &instance.base;
    match (instance.scenario, action) {
        (Scenario::AddCandidates, ChairAction::AddCandidates(added)) => {
            let mut seen = BTreeSet::new();
            for c in added {
                if !instance.spoilers.contains(c) || !seen.insert(c.clone()) {
                    return Err(ControlError::IllegalAction(format!(
                        "{c} is not an unused spoiler"
                    )));
                }
            }
            // Post-action candidate order: C, then the added spoilers in D's
            // input order.
            let mut cands = base.candidates().to_vec();
            cands.extend(instance.spoilers.iter().filter(|s| seen.contains(*s)).cloned());
            Ok(base.restrict(&cands)?)
        }
        (Scenario::DeleteCandidates, ChairAction::DeleteCandidates(deleted)) => {
            let mut seen = BTreeSet::new();
            for c in deleted {
                if !base.contains(c) || !seen.insert(c.clone()) {
                    return Err(ControlError::IllegalAction(format!(
                        "{c} cannot be deleted"
                    )));
                }
            }
            if matches!(instance.goal, Goal::Destructive) && seen.contains(&instance.target) {
                return Err(ControlError::IllegalAction(
                    "destructive deletion may not remove the target".to_string(),
                ));
            }
            if deleted.len() > instance.limit.unwrap_or(usize::MAX) {
                return Err(ControlError::IllegalAction(format!(
                    "deletes {} candidates, limit is {}",
                    deleted.len(),
                    instance.limit.unwrap()
                )));
            }
            let remaining: Vec<CandidateId> = base
                .candidates()
                .iter()
                .filter(|c| !seen.contains(*c))
                .cloned()
                .collect();
            Ok(base.restrict(&remaining)?)
        }
        (Scenario::PartitionCandidates, ChairAction::PartitionCandidates(c1, c2)) => {
            let finals = final_candidates_partition(instance, c1, c2)?;
            Ok(base.restrict(&finals)?)
        }
        (Scenario::RunoffPartitionCandidates, ChairAction::PartitionCandidates(c1, c2)) => {
            let finals = final_candidates_runoff(instance, c1, c2)?;
            Ok(base.restrict(&finals)?)
        }
        (Scenario::PartitionVoters, ChairAction::PartitionVoters(v1, v2)) => {
            let finals = final_candidates_voter_partition(instance, v1, v2)?;
            Ok(base.restrict(&finals)?)
        }
        (Scenario::AddVoters, ChairAction::AddVoters(indices)) => {
            check_index_subset(instance.unregistered.len(), indices, "unregistered voter")?;
            if indices.len() > instance.limit.unwrap_or(usize::MAX) {
                return Err(ControlError::IllegalAction(format!(
                    "registers {} voters, limit is {}",
                    indices.len(),
                    instance.limit.unwrap()
                )));
            }
            let mut ballots = base.ballots().to_vec();
            let mut sorted = indices.to_vec();
            sorted.sort_unstable();
            ballots.extend(sorted.iter().map(|&i| instance.unregistered[i].clone()));
            Ok(base.with_ballots(ballots)?)
        }
        (Scenario::DeleteVoters, ChairAction::DeleteVoters(indices)) => {
            check_index_subset(base.num_ballots(), indices, "voter")?;
            if indices.len() > instance.limit.unwrap_or(usize::MAX) {
                return Err(ControlError::IllegalAction(format!(
                    "deletes {} voters, limit is {}",
                    indices.len(),
                    instance.limit.unwrap()
                )));
            }
            let drop: BTreeSet<usize> = indices.iter().copied().collect();
            let ballots: Vec<Ballot> = base
                .ballots()
                .iter()
                .enumerate()
                .filter(|(i, _)| !drop.contains(i))
                .map(|(_, b)| b.clone())
                .collect();
            Ok(base.with_ballots(ballots)?)
        }
        _ => Err(ControlError::ActionMismatch(instance.scenario.name())),
    }
}

/// Whether the chair's action achieves the goal: the target is the unique
/// winner of the post-action election (constructive) or is not (destructive).
pub fn evaluate(instance: &ControlInstance, action: &ChairAction) -> Result<bool, ControlError> {
    let post = post_action_election(instance, action)?;
    let unique = if post.contains(&instance.target) {
        post.is_unique_winner(&instance.target)?
    } else {
        false
    };
    Ok(match instance.goal {
        Goal::Constructive => unique,
        Goal::Destructive => !unique,
    })
}

/// The do-nothing action of the instance's scenario: empty add/delete set,
/// or the `(∅, everything)` partition.
pub fn identity_action(instance: &ControlInstance) -> ChairAction {
    match instance.scenario {
        Scenario::AddCandidates => ChairAction::AddCandidates(Vec::new()),
        Scenario::DeleteCandidates => ChairAction::DeleteCandidates(Vec::new()),
        Scenario::PartitionCandidates | Scenario::RunoffPartitionCandidates => {
            ChairAction::PartitionCandidates(Vec::new(), instance.base.candidates().to_vec())
        }
        Scenario::PartitionVoters => {
            ChairAction::PartitionVoters(Vec::new(), (0..instance.base.num_ballots()).collect())
        }
        Scenario::AddVoters => ChairAction::AddVoters(Vec::new()),
        Scenario::DeleteVoters => ChairAction::DeleteVoters(Vec::new()),
    }
}
