//! Acceptance suite: one test (and one printed pass line) per criterion.
//!
//! 1. Walkthrough fixtures replay under `evaluate`.
//! 2. Immune cells survive an exhaustive sweep with zero status-flips.
//! 3. Exact solvers agree with the oracle, exhaustively and on random
//!    instances, with minimum-cardinality certificates where defined.
//! 4. Generated hardness instances agree with their source labels.
//! 5. The generators' score arithmetic holds exactly.
//! 6. Padding a hitting-set source preserves its answer and lands in the
//!    restricted regime.
//! 7. Every witness-transfer link rebuilds valid witnesses.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use election_control::control::{evaluate, ChairAction, Goal, Scenario, TieRule};
use election_control::election::{approves, cid, cids, ranked, Election, Rule};
use election_control::fixtures;
use election_control::oracle;
use election_control::reductions::{
    hs_partition_witness, hs_to_plurality, pad_to_restricted_hs, x3c_to_approval,
    HittingSetInstance, HsVariant, ReductionError, X3cInstance, X3cVariant,
};
use election_control::table::{self, SearchBounds, Verdict};
use election_control::transfer::{transfer_witness, TransferLink, Witness};
use election_control::{CandidateId, ControlInstance};

#[test]
fn criterion_1_fixture_walkthroughs_replay() {
    let mut demos = 0usize;
    for id in fixtures::WALKTHROUGH_IDS {
        for demo in fixtures::walkthrough(id).unwrap() {
            assert_eq!(
                evaluate(&demo.instance, &demo.action),
                Ok(true),
                "walkthrough {id}: {}",
                demo.label
            );
            demos += 1;
        }
    }
    println!(
        "criterion 1 — fixture walkthroughs: pass ({} ids, {demos} demonstrations)",
        fixtures::WALKTHROUGH_IDS.len()
    );
}

#[test]
fn criterion_2_immunity_sweep_finds_no_status_flips() {
    let bounds = SearchBounds::default();
    let immune: Vec<_> = table::all_cells()
        .into_iter()
        .filter(|c| c.verdict == Verdict::Immune)
        .collect();
    assert_eq!(immune.len(), 12);
    let mut checked = 0u64;
    for cell in &immune {
        let report = table::verify_immunity(cell, &bounds).unwrap();
        assert!(report.passed(), "{}", report.render());
        checked += report.checked;
    }
    println!(
        "criterion 2 — immunity sweep: pass ({} immune cells, {checked} instances, 0 status-flips)",
        immune.len()
    );
}

#[test]
fn criterion_3_solvers_agree_with_the_oracle() {
    let bounds = SearchBounds::default();
    let cells: Vec<_> = table::all_cells()
        .into_iter()
        .filter(table::has_exact_solver)
        .collect();
    let mut checked = 0u64;
    for (i, cell) in cells.iter().enumerate() {
        let report = table::verify_cell(cell, &bounds, 500, 41 + i as u64).unwrap();
        assert!(report.passed(), "{}", report.render());
        checked += report.checked;
    }
    println!(
        "criterion 3 — solver/oracle equivalence: pass ({} solver-covered cells, \
         {checked} instances incl. 500 random per cell, 0 disagreements)",
        cells.len()
    );
}

fn element_names(m: usize) -> Vec<CandidateId> {
    (1..=m).map(|i| cid(&format!("b{i}"))).collect()
}

fn nonempty_subsets(m: usize) -> Vec<Vec<usize>> {
    (1u32..1 << m)
        .map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

/// Every hitting-set source with m ≤ 3, at most two subsets, and every legal k.
fn exhaustive_hs_sources() -> Vec<HittingSetInstance> {
    let mut out = Vec::new();
    for m in 1..=3usize {
        let subsets = nonempty_subsets(m);
        for n in 1..=2usize {
            for family in subsets.iter().cloned().combinations(n) {
                for k in 1..=m.min(3) {
                    out.push(HittingSetInstance::new(element_names(m), family.clone(), k).unwrap());
                }
            }
        }
    }
    out
}

/// Seeded random sources up to the stated bounds (m ≤ 6, n ≤ 4, k ≤ 3).
fn sampled_hs_sources(rng: &mut ChaCha8Rng, count: usize) -> Vec<HittingSetInstance> {
    let mut out = Vec::new();
    while out.len() < count {
        let m = rng.gen_range(4..=6usize);
        let n = rng.gen_range(1..=4usize);
        let k = rng.gen_range(1..=3usize);
        let subsets = nonempty_subsets(m);
        let family: Vec<Vec<usize>> = (0..n)
            .map(|_| subsets[rng.gen_range(0..subsets.len())].clone())
            .collect();
        out.push(HittingSetInstance::new(element_names(m), family, k).unwrap());
    }
    out
}

fn hs_sources() -> Vec<HittingSetInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut out = exhaustive_hs_sources();
    out.extend(sampled_hs_sources(&mut rng, 40));
    out
}

/// Exact-cover sources: the single m=3 family, every family of at most two
/// of the twenty m=6 triples, and a seeded sample of larger m=6 families.
fn x3c_sources() -> Vec<X3cInstance> {
    let mut out = Vec::new();
    out.push(X3cInstance::new(element_names(3), vec![vec![0, 1, 2]]).unwrap());
    let triples: Vec<Vec<usize>> = (0..6usize).combinations(3).collect();
    for n in 1..=2usize {
        for family in triples.iter().cloned().combinations(n) {
            out.push(X3cInstance::new(element_names(6), family).unwrap());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(405);
    for _ in 0..12 {
        let n = rng.gen_range(3..=6usize);
        let mut order: Vec<usize> = (0..triples.len()).collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let family: Vec<Vec<usize>> =
            order.iter().take(n).map(|&t| triples[t].clone()).collect();
        out.push(X3cInstance::new(element_names(6), family).unwrap());
    }
    out
}

struct LabelStats {
    checked: u64,
    precondition_skips: u64,
    budget_skips: u64,
    replayed: u64,
}

fn check_generated(
    labeled: &election_control::reductions::LabeledControlInstance,
    stats: &mut LabelStats,
) {
    // Voter bipartitions of the generated rolls (35+ ballots) are beyond any
    // exhaustive search; yes-sources are confirmed by an explicit witness
    // instead, and budget skips are reported.
    if labeled.instance.scenario() == Scenario::PartitionVoters
        && labeled.instance.base().num_ballots() >= 24
    {
        stats.budget_skips += 1;
        if labeled.label {
            // Hitting-set yes-sources carry a closed-form partition witness;
            // oversized exact-cover instances stay counted as skips (their
            // labels are oracle-checked on the smaller families).
            if let Some(action) = hs_partition_witness(labeled) {
                assert_eq!(
                    evaluate(&labeled.instance, &action),
                    Ok(true),
                    "{}: witness replay failed",
                    labeled.reduction
                );
                stats.replayed += 1;
            }
        }
        return;
    }
    // Candidate-control variants (and the small exact-cover voter variants)
    // must fit the budget: any overrun here is a hard failure.
    match oracle::decide(&labeled.instance, oracle::DEFAULT_BUDGET) {
        Ok(outcome) => {
            assert_eq!(
                outcome.possible, labeled.label,
                "{}: oracle disagrees with the source label",
                labeled.reduction
            );
            stats.checked += 1;
        }
        Err(e) => panic!("{}: {e}", labeled.reduction),
    }
}

#[test]
fn criterion_4_reduction_labels_agree_with_the_oracle() {
    let mut stats = LabelStats {
        checked: 0,
        precondition_skips: 0,
        budget_skips: 0,
        replayed: 0,
    };
    for src in hs_sources() {
        for variant in HsVariant::ALL {
            let generated = match variant {
                HsVariant::PartitionVotersConstructive | HsVariant::PartitionVotersDestructive => {
                    match pad_to_restricted_hs(&src) {
                        Ok(padded) => hs_to_plurality(&padded, variant),
                        Err(ReductionError::Precondition(_)) => {
                            stats.precondition_skips += 1;
                            continue;
                        }
                        Err(e) => panic!("{e}"),
                    }
                }
                _ => hs_to_plurality(&src, variant),
            };
            match generated {
                Ok(labeled) => check_generated(&labeled, &mut stats),
                Err(ReductionError::Precondition(_)) => stats.precondition_skips += 1,
                Err(e) => panic!("{e}"),
            }
        }
    }
    for src in x3c_sources() {
        for variant in X3cVariant::ALL {
            match x3c_to_approval(&src, variant) {
                Ok(labeled) => check_generated(&labeled, &mut stats),
                Err(ReductionError::Precondition(_)) => stats.precondition_skips += 1,
                Err(e) => panic!("{e}"),
            }
        }
    }
    assert!(stats.checked > 0);
    println!(
        "criterion 4 — reduction-label agreement: pass ({} oracle-checked, 0 disagreements, \
         {} precondition skips, {} voter-partition budget skips of which {} yes-sources \
         replayed by witness)",
        stats.checked, stats.precondition_skips, stats.budget_skips, stats.replayed
    );
}

#[test]
fn criterion_5_construction_arithmetic_is_exact() {
    // Hitting-set generator: scores of c, w and the set candidates in the
    // election restricted to {c, w} ∪ B′ for every size-k hitting set B′.
    let mut hit_checks = 0usize;
    for src in hs_sources() {
        let (m, n, k) = (src.elements().len(), src.family().len(), src.k());
        let Some(mut bprime) = oracle::solve_hitting_set(m, src.family(), k) else {
            continue;
        };
        for e in 0..m {
            if bprime.len() == k {
                break;
            }
            if !bprime.contains(&e) {
                bprime.push(e);
            }
        }
        let labeled = hs_to_plurality(&src, HsVariant::AddCandidates).unwrap();
        let base = labeled.instance.base();
        let mut finals = vec![cid("c"), cid("w")];
        finals.extend(bprime.iter().map(|&e| src.elements()[e].clone()));
        let t = base.restrict(&finals).unwrap().tally();
        assert_eq!(
            t.plurality_score(&cid("c")),
            2 * (m - k) + 2 * n * (k + 1) + 4
        );
        assert_eq!(
            t.plurality_score(&cid("w")),
            2 * n * (k + 1) + 5 + 2 * (m - k)
        );
        for &e in &bprime {
            assert!(t.plurality_score(&src.elements()[e]) <= 2 * n * (k + 1) + 2);
        }
        hit_checks += 1;
    }

    // Exact-cover generators: fixed Yes-vote profiles.
    let mut x3c_checks = 0usize;
    for src in x3c_sources() {
        let (n, k) = (src.family().len(), src.k());
        if let Ok(labeled) = x3c_to_approval(&src, X3cVariant::DeleteVoters) {
            let t = labeled.instance.base().tally();
            for c in labeled.instance.base().candidates() {
                assert_eq!(t.approval_score(c), n, "delete-voters: {c}");
            }
            x3c_checks += 1;
        }
        if let Ok(labeled) = x3c_to_approval(&src, X3cVariant::PartitionVotersTp) {
            let t = labeled.instance.base().tally();
            for c in labeled.instance.base().candidates() {
                let expected = if c == &cid("x") { k + 1 } else { n + k + 2 };
                assert_eq!(t.approval_score(c), expected, "partition TP: {c}");
            }
            x3c_checks += 1;
        }
        if let Ok(labeled) = x3c_to_approval(&src, X3cVariant::PartitionVotersTe) {
            let t = labeled.instance.base().tally();
            for c in labeled.instance.base().candidates() {
                let expected = if c == &cid("x") {
                    n + k
                } else if c == &cid("y") {
                    2 * n
                } else {
                    n
                };
                assert_eq!(t.approval_score(c), expected, "partition TE: {c}");
            }
            x3c_checks += 1;
        }
    }
    println!(
        "criterion 5 — construction arithmetic: pass ({hit_checks} hitting sets, \
         {x3c_checks} exact-cover profiles, all score formulas exact)"
    );
}

#[test]
fn criterion_6_padding_preserves_the_answer() {
    let mut rng = ChaCha8Rng::seed_from_u64(406);
    let mut sources = exhaustive_hs_sources();
    // m̂ ≤ 5 random sources on top of the exhaustive m ≤ 3 block.
    for _ in 0..30 {
        let m = rng.gen_range(2..=5usize);
        let n = rng.gen_range(1..=3usize);
        let k = rng.gen_range(1..=(m - 1).min(3));
        let subsets = nonempty_subsets(m);
        let family: Vec<Vec<usize>> = (0..n)
            .map(|_| subsets[rng.gen_range(0..subsets.len())].clone())
            .collect();
        sources.push(HittingSetInstance::new(element_names(m), family, k).unwrap());
    }
    let mut checked = 0usize;
    let mut skipped = 0usize;
    for src in sources {
        match pad_to_restricted_hs(&src) {
            Ok(padded) => {
                assert!(padded.is_restricted(), "padding missed the restricted regime");
                assert_eq!(
                    padded.is_yes(),
                    src.is_yes(),
                    "padding changed the hitting-set answer"
                );
                checked += 1;
            }
            Err(ReductionError::Precondition(_)) => skipped += 1,
            Err(e) => panic!("{e}"),
        }
    }
    println!(
        "criterion 6 — padding equivalence: pass ({checked} sources preserved, \
         {skipped} precondition skips, 0 violations)"
    );
}

fn demo_witness(id: &str, label: &str) -> Witness {
    let demo = fixtures::walkthrough(id)
        .unwrap()
        .into_iter()
        .find(|d| d.label == label)
        .unwrap();
    Witness::new(demo.instance, demo.action)
}

fn spoiler_add_witness() -> Witness {
    let ballots = vec![
        ranked("b>a>d"),
        ranked("b>a>d"),
        ranked("d>b>a"),
        ranked("d>b>a"),
        ranked("a>b>d"),
        ranked("a>b>d"),
        ranked("a>b>d"),
    ];
    let base =
        Election::with_universe(Rule::Plurality, cids("a b"), cids("a b d"), ballots).unwrap();
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
    Witness::new(instance, ChairAction::AddCandidates(cids("d")))
}

fn voter_add_witness() -> Witness {
    let base = Election::new(Rule::Approval, cids("b w"), vec![approves("b")]).unwrap();
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
    Witness::new(instance, ChairAction::AddVoters(vec![0, 1]))
}

/// Seed witnesses for each transfer link, drawn from the walkthrough
/// fixtures wherever one of the right shape exists.
fn seeds_for(link: TransferLink) -> Vec<Witness> {
    match link {
        TransferLink::ConstructiveAddCandidatesToDestructiveDelete => {
            vec![spoiler_add_witness()]
        }
        TransferLink::ConstructiveDeleteCandidatesToDestructiveAdd => {
            // Chain through the candidate-partition projection to obtain a
            // genuine constructive deletion witness.
            let src = demo_witness("4.14", "constructive candidate partition, TE");
            vec![transfer_witness(
                &src,
                TransferLink::ConstructiveCandidatePartitionToDeleteCandidates,
            )
            .unwrap()]
        }
        TransferLink::ConstructiveAddVotersToDestructiveDelete => vec![voter_add_witness()],
        TransferLink::DestructiveAddVotersToConstructiveDelete => {
            let mut out: Vec<Witness> = [Rule::Plurality, Rule::Condorcet]
                .into_iter()
                .map(|rule| {
                    Witness::new(
                        fixtures::lone_voter_add_instance(rule),
                        ChairAction::AddVoters(vec![0]),
                    )
                })
                .collect();
            out.push(Witness::new(
                fixtures::approval_lone_voter_add_instance(),
                ChairAction::AddVoters(vec![0]),
            ));
            out
        }
        TransferLink::ConstructiveVoterPartitionToDeleteCandidates
        | TransferLink::ConstructiveVoterPartitionTeToDeleteVoters => {
            vec![demo_witness("4.9", "constructive voter partition, TE")]
        }
        TransferLink::ConstructiveCandidatePartitionToDeleteCandidates => vec![
            demo_witness("4.14", "constructive candidate partition, TE"),
            demo_witness("4.14", "constructive run-off candidate partition, TE"),
        ],
        TransferLink::DestructiveCandidatePartitionToDeleteCandidates => vec![
            demo_witness("4.15", "destructive candidate partition"),
            demo_witness("4.15", "destructive run-off candidate partition"),
        ],
        TransferLink::DestructiveVoterPartitionToDeleteVoters => vec![
            demo_witness("4.10", "destructive voter partition"),
            demo_witness("4.9", "destructive voter partition, TE"),
        ],
    }
}

#[test]
fn criterion_7_witness_transfer_produces_valid_witnesses() {
    let mut transfers = 0usize;
    for link in TransferLink::ALL {
        for seed in seeds_for(link) {
            let out = transfer_witness(&seed, link).unwrap();
            assert_eq!(evaluate(&out.instance, &out.action), Ok(true));
            transfers += 1;
        }
    }
    println!(
        "criterion 7 — witness transfer: pass ({} links, {transfers} transfers, 0 failures)",
        TransferLink::ALL.len()
    );
}
