//! Constructive links between susceptibility cases: a demonstrated control
//! witness for one problem is mechanically rebuilt into a witness for a
//! related problem (dual goal, or a simpler scenario). Every transfer output
//! is re-validated through `evaluate`, so the links carry proof, not trust.

use thiserror::Error;

use crate::control::{
    evaluate, final_candidates_partition, final_candidates_runoff,
    final_candidates_voter_partition, post_action_election, ChairAction, ControlError,
    ControlInstance, Goal, Scenario, TieRule,
};
use crate::election::{Ballot, CandidateId, Election, ElectionError};

/// An election, an instance over it, and an action that provably achieves
/// the instance's goal — the unit of susceptibility evidence.
#[derive(Debug, Clone)]
pub struct Witness {
    pub instance: ControlInstance,
    pub action: ChairAction,
}

impl Witness {
    pub fn new(instance: ControlInstance, action: ChairAction) -> Witness {
        Witness { instance, action }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransferError {
    #[error("{0}")]
    Control(#[from] ControlError),
    #[error("{0}")]
    Election(#[from] ElectionError),
    #[error("witness does not fit this link: {0}")]
    InvalidWitness(String),
}

/// The nine implemented witness transfers. Dual links swap the goal between
/// adding and deleting; the partition links project a partition witness down
/// to a plain deletion witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransferLink {
    /// constructive add-candidates → destructive delete-candidates
    ConstructiveAddCandidatesToDestructiveDelete,
    /// constructive delete-candidates → destructive add-candidates
    ConstructiveDeleteCandidatesToDestructiveAdd,
    /// constructive add-voters → destructive delete-voters
    ConstructiveAddVotersToDestructiveDelete,
    /// destructive add-voters → constructive delete-voters
    DestructiveAddVotersToConstructiveDelete,
    /// constructive partition-of-voters → constructive delete-candidates
    ConstructiveVoterPartitionToDeleteCandidates,
    /// constructive (run-off) partition-of-candidates → constructive delete-candidates
    ConstructiveCandidatePartitionToDeleteCandidates,
    /// constructive partition-of-voters in TE → constructive delete-voters
    ConstructiveVoterPartitionTeToDeleteVoters,
    /// destructive (run-off) partition-of-candidates → destructive delete-candidates
    DestructiveCandidatePartitionToDeleteCandidates,
    /// destructive partition-of-voters → destructive delete-voters (voiced rules)
    DestructiveVoterPartitionToDeleteVoters,
}

impl TransferLink {
    pub const ALL: [TransferLink; 9] = [
        TransferLink::ConstructiveAddCandidatesToDestructiveDelete,
        TransferLink::ConstructiveDeleteCandidatesToDestructiveAdd,
        TransferLink::ConstructiveAddVotersToDestructiveDelete,
        TransferLink::DestructiveAddVotersToConstructiveDelete,
        TransferLink::ConstructiveVoterPartitionToDeleteCandidates,
        TransferLink::ConstructiveCandidatePartitionToDeleteCandidates,
        TransferLink::ConstructiveVoterPartitionTeToDeleteVoters,
        TransferLink::DestructiveCandidatePartitionToDeleteCandidates,
        TransferLink::DestructiveVoterPartitionToDeleteVoters,
    ];
}

fn bad(reason: impl Into<String>) -> TransferError {
    TransferError::InvalidWitness(reason.into())
}

/// A witness must genuinely demonstrate control: the goal fails on the base
/// election and the action achieves it.
fn check_witness(w: &Witness) -> Result<(), TransferError> {
    let base = w.instance.base();
    let target = w.instance.target();
    let unique = base.contains(target) && base.is_unique_winner(target)?;
    let wanted_before = match w.instance.goal() {
        Goal::Constructive => !unique,
        Goal::Destructive => unique,
    };
    if !wanted_before {
        return Err(bad("the goal is already met before any action"));
    }
    if !evaluate(&w.instance, &w.action)? {
        return Err(bad("the action does not achieve the stated goal"));
    }
    Ok(())
}

fn expect_shape(
    w: &Witness,
    goal: Goal,
    scenarios: &[Scenario],
) -> Result<(), TransferError> {
    if w.instance.goal() != goal || !scenarios.contains(&w.instance.scenario()) {
        return Err(bad(format!(
            "link expects a {} {} witness, got {} {}",
            goal.name(),
            scenarios[0].name(),
            w.instance.goal().name(),
            w.instance.scenario().name()
        )));
    }
    Ok(())
}

fn block_ballots(base: &Election, block: &[usize]) -> Vec<Ballot> {
    block.iter().map(|&i| base.ballots()[i].clone()).collect()
}

/// Rebuild `witness` into evidence for the link's target problem. The output
/// is validated through `evaluate` before it is returned.
pub fn transfer_witness(
    witness: &Witness,
    link: TransferLink,
) -> Result<Witness, TransferError> {
    check_witness(witness)?;
    let src = &witness.instance;
    let base = src.base();
    let target = src.target().clone();

    let out = match link {
        TransferLink::ConstructiveAddCandidatesToDestructiveDelete => {
            expect_shape(witness, Goal::Constructive, &[Scenario::AddCandidates])?;
            let ChairAction::AddCandidates(added) = &witness.action else {
                return Err(bad("action is not an addition of candidates"));
            };
            if added.is_empty() {
                return Err(bad("an empty addition cannot be inverted"));
            }
            // The enlarged election elects the target uniquely; deleting the
            // very same spoilers dethrones it again.
            let enlarged = post_action_election(src, &witness.action)?;
            let instance = ControlInstance::new(
                enlarged,
                Scenario::DeleteCandidates,
                Goal::Destructive,
                TieRule::NotApplicable,
                target,
                Some(added.len()),
                Vec::new(),
                Vec::new(),
            )?;
            Witness::new(instance, ChairAction::DeleteCandidates(added.clone()))
        }
        TransferLink::ConstructiveDeleteCandidatesToDestructiveAdd => {
            expect_shape(witness, Goal::Constructive, &[Scenario::DeleteCandidates])?;
            let ChairAction::DeleteCandidates(deleted) = &witness.action else {
                return Err(bad("action is not a deletion of candidates"));
            };
            if deleted.is_empty() {
                return Err(bad("an empty deletion cannot be inverted"));
            }
            // The shrunken election elects the target uniquely; re-entering
            // the deleted candidates as spoilers dethrones it.
            let kept: Vec<CandidateId> = base
                .candidates()
                .iter()
                .filter(|c| !deleted.contains(c))
                .cloned()
                .collect();
            let mut universe = kept.clone();
            universe.extend(deleted.iter().cloned());
            let shrunk = Election::with_universe(
                base.rule(),
                kept,
                universe,
                base.ballots().to_vec(),
            )?;
            let instance = ControlInstance::new(
                shrunk,
                Scenario::AddCandidates,
                Goal::Destructive,
                TieRule::NotApplicable,
                target,
                None,
                deleted.clone(),
                Vec::new(),
            )?;
            Witness::new(instance, ChairAction::AddCandidates(deleted.clone()))
        }
        TransferLink::ConstructiveAddVotersToDestructiveDelete => {
            expect_shape(witness, Goal::Constructive, &[Scenario::AddVoters])?;
            let ChairAction::AddVoters(chosen) = &witness.action else {
                return Err(bad("action is not an addition of voters"));
            };
            if chosen.is_empty() {
                return Err(bad("an empty addition cannot be inverted"));
            }
            // The registered-in ballots sit at the end of the enlarged roll.
            let enlarged = post_action_election(src, &witness.action)?;
            let n_old = base.num_ballots();
            let appended: Vec<usize> = (n_old..enlarged.num_ballots()).collect();
            let instance = ControlInstance::new(
                enlarged,
                Scenario::DeleteVoters,
                Goal::Destructive,
                TieRule::NotApplicable,
                target,
                Some(appended.len()),
                Vec::new(),
                Vec::new(),
            )?;
            Witness::new(instance, ChairAction::DeleteVoters(appended))
        }
        TransferLink::DestructiveAddVotersToConstructiveDelete => {
            expect_shape(witness, Goal::Destructive, &[Scenario::AddVoters])?;
            let ChairAction::AddVoters(chosen) = &witness.action else {
                return Err(bad("action is not an addition of voters"));
            };
            if chosen.is_empty() {
                return Err(bad("an empty addition cannot be inverted"));
            }
            let enlarged = post_action_election(src, &witness.action)?;
            let n_old = base.num_ballots();
            let appended: Vec<usize> = (n_old..enlarged.num_ballots()).collect();
            let instance = ControlInstance::new(
                enlarged,
                Scenario::DeleteVoters,
                Goal::Constructive,
                TieRule::NotApplicable,
                target,
                Some(appended.len()),
                Vec::new(),
                Vec::new(),
            )?;
            Witness::new(instance, ChairAction::DeleteVoters(appended))
        }
        TransferLink::ConstructiveVoterPartitionToDeleteCandidates
        | TransferLink::ConstructiveCandidatePartitionToDeleteCandidates => {
            let finals = match link {
                TransferLink::ConstructiveVoterPartitionToDeleteCandidates => {
                    expect_shape(witness, Goal::Constructive, &[Scenario::PartitionVoters])?;
                    let ChairAction::PartitionVoters(v1, v2) = &witness.action else {
                        return Err(bad("action is not a partition of voters"));
                    };
                    final_candidates_voter_partition(src, v1, v2)?
                }
                _ => {
                    expect_shape(
                        witness,
                        Goal::Constructive,
                        &[
                            Scenario::PartitionCandidates,
                            Scenario::RunoffPartitionCandidates,
                        ],
                    )?;
                    let ChairAction::PartitionCandidates(c1, c2) = &witness.action else {
                        return Err(bad("action is not a partition of candidates"));
                    };
                    if src.scenario() == Scenario::PartitionCandidates {
                        final_candidates_partition(src, c1, c2)?
                    } else {
                        final_candidates_runoff(src, c1, c2)?
                    }
                }
            };
            // The target wins the final round outright, so deleting every
            // candidate outside it is a plain deletion witness.
            let doomed: Vec<CandidateId> = base
                .candidates()
                .iter()
                .filter(|c| !finals.contains(c))
                .cloned()
                .collect();
            if doomed.is_empty() {
                return Err(bad("the final round kept every candidate"));
            }
            let instance = ControlInstance::new(
                base.clone(),
                Scenario::DeleteCandidates,
                Goal::Constructive,
                TieRule::NotApplicable,
                target,
                Some(doomed.len()),
                Vec::new(),
                Vec::new(),
            )?;
            Witness::new(instance, ChairAction::DeleteCandidates(doomed))
        }
        TransferLink::ConstructiveVoterPartitionTeToDeleteVoters => {
            expect_shape(witness, Goal::Constructive, &[Scenario::PartitionVoters])?;
            if src.ties() != TieRule::Te {
                return Err(bad("this link needs the ties-eliminate model"));
            }
            let ChairAction::PartitionVoters(v1, v2) = &witness.action else {
                return Err(bad("action is not a partition of voters"));
            };
            // Under TE the target must carry one block outright; keeping
            // that block alone is a deletion witness.
            let mut keep = None;
            for (block, other) in [(v1, v2), (v2, v1)] {
                let sub = base.with_ballots(block_ballots(base, block))?;
                if sub.is_unique_winner(&target)? {
                    keep = Some(other.clone());
                    break;
                }
            }
            let Some(doomed) = keep else {
                return Err(bad("the target carries neither block outright"));
            };
            if doomed.is_empty() {
                return Err(bad("the target already carries the whole voter set"));
            }
            let instance = ControlInstance::new(
                base.clone(),
                Scenario::DeleteVoters,
                Goal::Constructive,
                TieRule::NotApplicable,
                target,
                Some(doomed.len()),
                Vec::new(),
                Vec::new(),
            )?;
            Witness::new(instance, ChairAction::DeleteVoters(doomed))
        }
        TransferLink::DestructiveCandidatePartitionToDeleteCandidates => {
            expect_shape(
                witness,
                Goal::Destructive,
                &[
                    Scenario::PartitionCandidates,
                    Scenario::RunoffPartitionCandidates,
                ],
            )?;
            let ChairAction::PartitionCandidates(c1, c2) = &witness.action else {
                return Err(bad("action is not a partition of candidates"));
            };
            let finals = if src.scenario() == Scenario::PartitionCandidates {
                final_candidates_partition(src, c1, c2)?
            } else {
                final_candidates_runoff(src, c1, c2)?
            };
            // Either the target reaches the final round and loses there, or
            // it already fails inside its own first-round block.
            let survivors: Vec<CandidateId> = if finals.contains(&target) {
                finals
            } else if c1.contains(&target) {
                c1.clone()
            } else {
                c2.clone()
            };
            let doomed: Vec<CandidateId> = base
                .candidates()
                .iter()
                .filter(|c| !survivors.contains(c))
                .cloned()
                .collect();
            if doomed.is_empty() {
                return Err(bad("no candidate is left to delete"));
            }
            let instance = ControlInstance::new(
                base.clone(),
                Scenario::DeleteCandidates,
                Goal::Destructive,
                TieRule::NotApplicable,
                target,
                Some(doomed.len()),
                Vec::new(),
                Vec::new(),
            )?;
            Witness::new(instance, ChairAction::DeleteCandidates(doomed))
        }
        TransferLink::DestructiveVoterPartitionToDeleteVoters => {
            expect_shape(witness, Goal::Destructive, &[Scenario::PartitionVoters])?;
            let ChairAction::PartitionVoters(v1, v2) = &witness.action else {
                return Err(bad("action is not a partition of voters"));
            };
            // In a voiced system the target cannot carry both blocks, or it
            // would also win the run-off; keep a block it fails to carry.
            let mut keep = None;
            for (block, other) in [(v1, v2), (v2, v1)] {
                let sub = base.with_ballots(block_ballots(base, block))?;
                if !sub.is_unique_winner(&target)? {
                    keep = Some(other.clone());
                    break;
                }
            }
            let Some(doomed) = keep else {
                return Err(bad("the target carries both blocks"));
            };
            if doomed.is_empty() {
                return Err(bad("the target already fails on the whole voter set"));
            }
            let instance = ControlInstance::new(
                base.clone(),
                Scenario::DeleteVoters,
                Goal::Destructive,
                TieRule::NotApplicable,
                target,
                Some(doomed.len()),
                Vec::new(),
                Vec::new(),
            )?;
            Witness::new(instance, ChairAction::DeleteVoters(doomed))
        }
    };
    if !evaluate(&out.instance, &out.action)? {
        return Err(bad("transfer produced a non-achieving witness"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{approves, cid, cids, ranked, Rule};
    use crate::fixtures;

    fn demo_witness(id: &str, label: &str) -> Witness {
        let demo = fixtures::walkthrough(id)
            .unwrap()
            .into_iter()
            .find(|d| d.label == label)
            .unwrap();
        Witness::new(demo.instance, demo.action)
    }

    #[test]
    fn destructive_voter_addition_inverts_to_constructive_deletion() {
        for rule in [Rule::Plurality, Rule::Condorcet] {
            let w = Witness::new(
                fixtures::lone_voter_add_instance(rule),
                ChairAction::AddVoters(vec![0]),
            );
            let out =
                transfer_witness(&w, TransferLink::DestructiveAddVotersToConstructiveDelete)
                    .unwrap();
            assert_eq!(out.instance.scenario(), Scenario::DeleteVoters);
            assert_eq!(out.instance.goal(), Goal::Constructive);
        }
        let w = Witness::new(
            fixtures::approval_lone_voter_add_instance(),
            ChairAction::AddVoters(vec![0]),
        );
        transfer_witness(&w, TransferLink::DestructiveAddVotersToConstructiveDelete).unwrap();
    }

    #[test]
    fn destructive_candidate_partition_projects_to_deletion() {
        for label in [
            "destructive candidate partition",
            "destructive run-off candidate partition",
        ] {
            let w = demo_witness("4.15", label);
            let out = transfer_witness(
                &w,
                TransferLink::DestructiveCandidatePartitionToDeleteCandidates,
            )
            .unwrap();
            assert_eq!(out.instance.scenario(), Scenario::DeleteCandidates);
        }
    }

    #[test]
    fn constructive_voter_partition_projects_down() {
        let w = demo_witness("4.9", "constructive voter partition, TE");
        let deleted_voters =
            transfer_witness(&w, TransferLink::ConstructiveVoterPartitionTeToDeleteVoters)
                .unwrap();
        assert_eq!(deleted_voters.instance.scenario(), Scenario::DeleteVoters);
        let deleted_cands =
            transfer_witness(&w, TransferLink::ConstructiveVoterPartitionToDeleteCandidates)
                .unwrap();
        assert_eq!(
            deleted_cands.instance.scenario(),
            Scenario::DeleteCandidates
        );
    }

    #[test]
    fn candidate_partition_chain_reaches_destructive_addition() {
        // Approval partition witness → delete-candidates witness → (dual)
        // destructive add-candidates witness.
        let w = demo_witness("4.14", "constructive candidate partition, TE");
        let step1 = transfer_witness(
            &w,
            TransferLink::ConstructiveCandidatePartitionToDeleteCandidates,
        )
        .unwrap();
        let step2 = transfer_witness(
            &step1,
            TransferLink::ConstructiveDeleteCandidatesToDestructiveAdd,
        )
        .unwrap();
        assert_eq!(step2.instance.scenario(), Scenario::AddCandidates);
        assert_eq!(step2.instance.goal(), Goal::Destructive);
    }

    #[test]
    fn constructive_candidate_addition_inverts() {
        // Splitting b's support with a spoiler crowns a; removing the
        // spoiler again is the dual destructive witness.
        let universe = cids("a b d");
        let ballots = vec![
            ranked("b>a>d"),
            ranked("b>a>d"),
            ranked("d>b>a"),
            ranked("d>b>a"),
            ranked("a>b>d"),
            ranked("a>b>d"),
            ranked("a>b>d"),
        ];
        let base = Election::with_universe(
            Rule::Plurality,
            cids("a b"),
            universe,
            ballots,
        )
        .unwrap();
        let instance = ControlInstance::new(
            base,
            Scenario::AddCandidates,
            Goal::Constructive,
            TieRule::NotApplicable,
            cid("a"),
            None,
            cids("d"),
            Vec::new(),
        )
        .unwrap();
        let w = Witness::new(instance, ChairAction::AddCandidates(cids("d")));
        let out = transfer_witness(
            &w,
            TransferLink::ConstructiveAddCandidatesToDestructiveDelete,
        )
        .unwrap();
        assert_eq!(out.action, ChairAction::DeleteCandidates(cids("d")));
    }

    #[test]
    fn constructive_voter_addition_inverts() {
        let base = Election::new(
            Rule::Approval,
            cids("b w"),
            vec![approves("b")],
        )
        .unwrap();
        let instance = ControlInstance::new(
            base,
            Scenario::AddVoters,
            Goal::Constructive,
            TieRule::NotApplicable,
            cid("w"),
            Some(2),
            Vec::new(),
            vec![approves("w"), approves("w")],
        )
        .unwrap();
        let w = Witness::new(instance, ChairAction::AddVoters(vec![0, 1]));
        let out =
            transfer_witness(&w, TransferLink::ConstructiveAddVotersToDestructiveDelete)
                .unwrap();
        assert_eq!(out.action, ChairAction::DeleteVoters(vec![1, 2]));
    }

    #[test]
    fn destructive_voter_partition_projects_to_deletion() {
        for (id, label) in [
            ("4.10", "destructive voter partition"),
            ("4.9", "destructive voter partition, TE"),
        ] {
            let w = demo_witness(id, label);
            let out = transfer_witness(
                &w,
                TransferLink::DestructiveVoterPartitionToDeleteVoters,
            )
            .unwrap();
            assert_eq!(out.instance.scenario(), Scenario::DeleteVoters);
            assert_eq!(out.instance.goal(), Goal::Destructive);
        }
    }

    #[test]
    fn invalid_witnesses_are_rejected() {
        // A do-nothing partition on a tied election achieves nothing.
        let inst = fixtures::split_majority_constructive_instance();
        let n = inst.base().num_ballots();
        let w = Witness::new(
            inst,
            ChairAction::PartitionVoters((0..n).collect(), Vec::new()),
        );
        assert!(matches!(
            transfer_witness(&w, TransferLink::ConstructiveVoterPartitionTeToDeleteVoters),
            Err(TransferError::InvalidWitness(_))
        ));
        // A witness for the wrong scenario shape.
        let w = demo_witness("4.15", "destructive candidate deletion");
        assert!(matches!(
            transfer_witness(
                &w,
                TransferLink::DestructiveCandidatePartitionToDeleteCandidates
            ),
            Err(TransferError::InvalidWitness(_))
        ));
    }
}
