//! Built-in walkthrough scenarios, each a tiny election together with a
//! control instance and a hand-picked chair action that demonstrates the
//! scenario. Exposed through the command line as `example <id>`.

use crate::control::{ChairAction, ControlInstance, Goal, Scenario, TieRule};
use crate::election::{approves, cid, cids, ranked, CandidateId, Election, Rule};

/// Plurality over {a,b,c}: two voters a-first, two b-first, one c-first.
pub fn split_majority_election() -> Election {
    Election::new(
        Rule::Plurality,
        cids("a b c"),
        vec![
            ranked("a>b>c"),
            ranked("a>b>c"),
            ranked("b>a>c"),
            ranked("b>a>c"),
            ranked("c>a>b"),
        ],
    )
    .unwrap()
}

/// Constructive voter partition under TE: isolating the lone c-voter lets c
/// win alone while a and b knock each other out.
pub fn split_majority_constructive_instance() -> ControlInstance {
    ControlInstance::new(
        split_majority_election(),
        Scenario::PartitionVoters,
        Goal::Constructive,
        TieRule::Te,
        cid("c"),
        None,
        vec![],
        vec![],
    )
    .unwrap()
}

/// Destructive voter partition under TE on a four-voter variant where a is
/// the unique winner until both blocks deadlock.
pub fn split_majority_destructive_instance() -> ControlInstance {
    let e = Election::new(
        Rule::Plurality,
        cids("a b c"),
        vec![
            ranked("a>b>c"),
            ranked("a>b>c"),
            ranked("b>a>c"),
            ranked("c>a>b"),
        ],
    )
    .unwrap();
    ControlInstance::new(
        e,
        Scenario::PartitionVoters,
        Goal::Destructive,
        TieRule::Te,
        cid("a"),
        None,
        vec![],
        vec![],
    )
    .unwrap()
}

/// Condorcet over {a,b,c} with seven voters; c beats both rivals pairwise.
pub fn tie_trap_election() -> Election {
    Election::new(
        Rule::Condorcet,
        cids("a b c"),
        vec![
            ranked("c>a>b"),
            ranked("c>a>b"),
            ranked("c>b>a"),
            ranked("b>a>c"),
            ranked("b>c>a"),
            ranked("a>b>c"),
            ranked("a>c>b"),
        ],
    )
    .unwrap()
}

/// Destructive voter partition dethroning the pairwise champion c.
pub fn tie_trap_destructive_instance() -> ControlInstance {
    ControlInstance::new(
        tie_trap_election(),
        Scenario::PartitionVoters,
        Goal::Destructive,
        TieRule::NotApplicable,
        cid("c"),
        None,
        vec![],
        vec![],
    )
    .unwrap()
}

/// Approval over {a,b,c}: four voters approve only c, three only a, three
/// only b.
pub fn approval_blocs_election() -> Election {
    let mut ballots = vec![approves("c"); 4];
    ballots.extend(vec![approves("a"); 3]);
    ballots.extend(vec![approves("b"); 3]);
    Election::new(Rule::Approval, cids("a b c"), ballots).unwrap()
}

/// Destructive voter partition splitting c's support so a and b tie.
pub fn approval_blocs_destructive_instance(ties: TieRule) -> ControlInstance {
    ControlInstance::new(
        approval_blocs_election(),
        Scenario::PartitionVoters,
        Goal::Destructive,
        ties,
        cid("c"),
        None,
        vec![],
        vec![],
    )
    .unwrap()
}

/// One registered c-first voter; registering the lone a-first voter forces a
/// first-place tie (plurality) or kills the strict pairwise majority
/// (Condorcet).
pub fn lone_voter_add_instance(rule: Rule) -> ControlInstance {
    let e = Election::new(rule, cids("a b c"), vec![ranked("c>a>b")]).unwrap();
    ControlInstance::new(
        e,
        Scenario::AddVoters,
        Goal::Destructive,
        TieRule::NotApplicable,
        cid("c"),
        Some(1),
        vec![],
        vec![ranked("a>c>b")],
    )
    .unwrap()
}

/// Approval analogue of [`lone_voter_add_instance`].
pub fn approval_lone_voter_add_instance() -> ControlInstance {
    let e = Election::new(Rule::Approval, cids("a b c"), vec![approves("c")]).unwrap();
    ControlInstance::new(
        e,
        Scenario::AddVoters,
        Goal::Destructive,
        TieRule::NotApplicable,
        cid("c"),
        Some(1),
        vec![],
        vec![approves("a")],
    )
    .unwrap()
}

/// Approval over {a,b,c} with ballots {a,b,c} and {a,b}: a and b tie ahead
/// of c.
pub fn approval_pair_election() -> Election {
    Election::new(
        Rule::Approval,
        cids("a b c"),
        vec![approves("a,b,c"), approves("a,b")],
    )
    .unwrap()
}

/// Constructive candidate partition under TE: grouping the tied pair
/// eliminates both, leaving c.
pub fn approval_pair_partition_instance(scenario: Scenario) -> ControlInstance {
    ControlInstance::new(
        approval_pair_election(),
        scenario,
        Goal::Constructive,
        TieRule::Te,
        cid("c"),
        None,
        vec![],
        vec![],
    )
    .unwrap()
}

/// Plurality over {a,b,c,d}, seven voters, c the unique winner.
pub fn runoff_quartet_election() -> Election {
    let mut ballots = vec![ranked("c>a>b>d"); 3];
    ballots.extend(vec![ranked("a>d>b>c"); 2]);
    ballots.extend(vec![ranked("b>d>a>c"); 2]);
    Election::new(Rule::Plurality, cids("a b c d"), ballots).unwrap()
}

/// Destructive candidate partition: pitting c against a in the first block
/// dethrones c (both subelection winners are unique, so TE and TP agree).
pub fn runoff_quartet_partition_instance(scenario: Scenario) -> ControlInstance {
    ControlInstance::new(
        runoff_quartet_election(),
        scenario,
        Goal::Destructive,
        TieRule::Te,
        cid("c"),
        None,
        vec![],
        vec![],
    )
    .unwrap()
}

/// Destructive candidate deletion on the same profile: dropping a and b
/// hands the first-place votes of their supporters to d.
pub fn runoff_quartet_delete_instance() -> ControlInstance {
    ControlInstance::new(
        runoff_quartet_election(),
        Scenario::DeleteCandidates,
        Goal::Destructive,
        TieRule::NotApplicable,
        cid("c"),
        Some(2),
        vec![],
        vec![],
    )
    .unwrap()
}

/// Plurality over {a,b,c}: three a-first, two b-first, three c-first voters.
pub fn voter_split_election() -> Election {
    let mut ballots = vec![ranked("a>c>b"); 3];
    ballots.extend(vec![ranked("b>a>c"); 2]);
    ballots.extend(vec![ranked("c>a>b"); 3]);
    Election::new(Rule::Plurality, cids("a b c"), ballots).unwrap()
}

/// Constructive voter partition under TP: c, tied with a overall, wins both
/// its subelection and the run-off against b.
pub fn voter_split_constructive_instance() -> ControlInstance {
    ControlInstance::new(
        voter_split_election(),
        Scenario::PartitionVoters,
        Goal::Constructive,
        TieRule::Tp,
        cid("c"),
        None,
        vec![],
        vec![],
    )
    .unwrap()
}

/// Destructive variant with two extra voters making c the unique winner;
/// the partition sends a and b to the run-off, which a wins.
pub fn voter_split_destructive_instance() -> ControlInstance {
    let mut ballots = voter_split_election().ballots().to_vec();
    ballots.push(ranked("b>a>c"));
    ballots.push(ranked("c>a>b"));
    let e = Election::new(Rule::Plurality, cids("a b c"), ballots).unwrap();
    ControlInstance::new(
        e,
        Scenario::PartitionVoters,
        Goal::Destructive,
        TieRule::Tp,
        cid("c"),
        None,
        vec![],
        vec![],
    )
    .unwrap()
}

/// Approval over {a,b,c}: three approve a, two approve b, three approve c.
pub fn approval_split_election() -> Election {
    let mut ballots = vec![approves("a"); 3];
    ballots.extend(vec![approves("b"); 2]);
    ballots.extend(vec![approves("c"); 3]);
    Election::new(Rule::Approval, cids("a b c"), ballots).unwrap()
}

/// Constructive voter partition (ties never bite: both subelection winners
/// are unique, so the same split works under TE and TP).
pub fn approval_split_constructive_instance(ties: TieRule) -> ControlInstance {
    ControlInstance::new(
        approval_split_election(),
        Scenario::PartitionVoters,
        Goal::Constructive,
        ties,
        cid("c"),
        None,
        vec![],
        vec![],
    )
    .unwrap()
}

/// One named demonstration: an instance plus the chair action that settles it.
pub struct Demo {
    pub label: &'static str,
    pub instance: ControlInstance,
    pub action: ChairAction,
}

pub const WALKTHROUGH_IDS: [&str; 9] = [
    "4.9", "4.10", "4.11", "4.12", "4.13", "4.14", "4.15", "4.16", "4.17",
];

/// The demonstrations registered under a walkthrough id.
pub fn walkthrough(id: &str) -> Option<Vec<Demo>> {
    let demos = match id {
        "4.9" => vec![
            Demo {
                label: "constructive voter partition, TE",
                instance: split_majority_constructive_instance(),
                action: ChairAction::PartitionVoters(vec![4], vec![0, 1, 2, 3]),
            },
            Demo {
                label: "destructive voter partition, TE",
                instance: split_majority_destructive_instance(),
                action: ChairAction::PartitionVoters(vec![0, 2], vec![1, 3]),
            },
        ],
        "4.10" => vec![Demo {
            label: "destructive voter partition",
            instance: tie_trap_destructive_instance(),
            action: ChairAction::PartitionVoters(vec![0, 6], vec![1, 2, 3, 4, 5]),
        }],
        "4.11" => vec![
            Demo {
                label: "destructive voter partition, TE",
                instance: approval_blocs_destructive_instance(TieRule::Te),
                action: ChairAction::PartitionVoters(vec![0, 1, 4, 5, 6], vec![2, 3, 7, 8, 9]),
            },
            Demo {
                label: "destructive voter partition, TP",
                instance: approval_blocs_destructive_instance(TieRule::Tp),
                action: ChairAction::PartitionVoters(vec![0, 1, 4, 5, 6], vec![2, 3, 7, 8, 9]),
            },
        ],
        "4.12" => vec![
            Demo {
                label: "destructive adding of voters, plurality",
                instance: lone_voter_add_instance(Rule::Plurality),
                action: ChairAction::AddVoters(vec![0]),
            },
            Demo {
                label: "destructive adding of voters, condorcet",
                instance: lone_voter_add_instance(Rule::Condorcet),
                action: ChairAction::AddVoters(vec![0]),
            },
        ],
        "4.13" => vec![Demo {
            label: "destructive adding of voters, approval",
            instance: approval_lone_voter_add_instance(),
            action: ChairAction::AddVoters(vec![0]),
        }],
        "4.14" => vec![
            Demo {
                label: "constructive candidate partition, TE",
                instance: approval_pair_partition_instance(Scenario::PartitionCandidates),
                action: ChairAction::PartitionCandidates(cids("a b"), cids("c")),
            },
            Demo {
                label: "constructive run-off candidate partition, TE",
                instance: approval_pair_partition_instance(Scenario::RunoffPartitionCandidates),
                action: ChairAction::PartitionCandidates(cids("a b"), cids("c")),
            },
        ],
        "4.15" => vec![
            Demo {
                label: "destructive candidate partition",
                instance: runoff_quartet_partition_instance(Scenario::PartitionCandidates),
                action: ChairAction::PartitionCandidates(cids("a c"), cids("b d")),
            },
            Demo {
                label: "destructive run-off candidate partition",
                instance: runoff_quartet_partition_instance(Scenario::RunoffPartitionCandidates),
                action: ChairAction::PartitionCandidates(cids("a c"), cids("b d")),
            },
            Demo {
                label: "destructive candidate deletion",
                instance: runoff_quartet_delete_instance(),
                action: ChairAction::DeleteCandidates(cids("a b")),
            },
        ],
        "4.16" => vec![
            Demo {
                label: "constructive voter partition, TP",
                instance: voter_split_constructive_instance(),
                action: ChairAction::PartitionVoters(vec![0, 1, 5, 6, 7], vec![2, 3, 4]),
            },
            Demo {
                label: "destructive voter partition, TP",
                instance: voter_split_destructive_instance(),
                action: ChairAction::PartitionVoters(vec![0, 1, 2, 5, 6], vec![3, 4, 7, 8, 9]),
            },
        ],
        "4.17" => vec![
            Demo {
                label: "constructive voter partition, TE",
                instance: approval_split_constructive_instance(TieRule::Te),
                action: ChairAction::PartitionVoters(vec![0, 1, 5, 6, 7], vec![2, 3, 4]),
            },
            Demo {
                label: "constructive voter partition, TP",
                instance: approval_split_constructive_instance(TieRule::Tp),
                action: ChairAction::PartitionVoters(vec![0, 1, 5, 6, 7], vec![2, 3, 4]),
            },
        ],
        _ => return None,
    };
    Some(demos)
}

fn describe_action(action: &ChairAction) -> String {
    fn ids(v: &[CandidateId]) -> String {
        if v.is_empty() {
            "(none)".to_string()
        } else {
            v.iter()
                .map(|c| c.as_str())
                .collect::<Vec<_>>()
                .join(" ")
        }
    }
    fn voters(v: &[usize]) -> String {
        if v.is_empty() {
            "(none)".to_string()
        } else {
            v.iter()
                .map(|i| format!("v{}", i + 1))
                .collect::<Vec<_>>()
                .join(" ")
        }
    }
    match action {
        ChairAction::AddCandidates(v) => format!("enter spoilers: {}", ids(v)),
        ChairAction::DeleteCandidates(v) => format!("disqualify: {}", ids(v)),
        ChairAction::PartitionCandidates(a, b) => {
            format!("split candidates into [{}] vs [{}]", ids(a), ids(b))
        }
        ChairAction::PartitionVoters(a, b) => {
            format!("split voters into [{}] vs [{}]", voters(a), voters(b))
        }
        ChairAction::AddVoters(v) => format!("register unregistered voters: {}", voters(v)),
        ChairAction::DeleteVoters(v) => format!("disenfranchise voters: {}", voters(v)),
    }
}

fn winner_list(mut winners: Vec<CandidateId>) -> String {
    if winners.is_empty() {
        "(nobody)".to_string()
    } else {
        winners
            .drain(..)
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Render the walkthrough registered under `id` as a plain-text report,
/// replaying each demonstration through the evaluator.
pub fn run_fixture(id: &str) -> Option<String> {
    let demos = walkthrough(id)?;
    let mut out = format!("walkthrough {id}\n");
    for demo in demos {
        let inst = &demo.instance;
        let base = inst.base();
        out.push_str(&format!(
            "  {} [{} / {} / target {}]\n",
            demo.label,
            base.rule().name(),
            inst.scenario().name(),
            inst.target(),
        ));
        out.push_str(&format!(
            "    before: winners {}\n",
            winner_list(base.winners())
        ));
        out.push_str(&format!("    action: {}\n", describe_action(&demo.action)));
        let post = crate::control::post_action_election(inst, &demo.action)
            .expect("walkthrough action must be legal");
        out.push_str(&format!(
            "    after:  winners {}\n",
            winner_list(post.winners())
        ));
        let achieved = crate::control::evaluate(inst, &demo.action)
            .expect("walkthrough action must evaluate");
        out.push_str(&format!(
            "    {} goal {}\n",
            inst.goal().name(),
            if achieved { "achieved" } else { "missed" }
        ));
    }
    Some(out)
}
