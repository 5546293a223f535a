//! Exact polynomial-time control algorithms for every vulnerable case that
//! has a dedicated certificate-producing procedure, plus a dispatcher that
//! routes a control instance to the matching algorithm.
//!
//! The algorithms follow their correctness proofs shape for shape: loops are
//! kept un-collapsed, rival candidates are scanned in input order, and when a
//! prescribed number of voters of some class is needed, they are taken in
//! ballot-index order. Certificates are therefore deterministic.

use thiserror::Error;

use crate::control::{
    ChairAction, ControlInstance, Goal, Scenario, TieRule,
};
use crate::election::{Ballot, CandidateId, Election, ElectionError, Rule};

/// Decision of a control solver: a certificate for the chair, or proof by
/// exhaustion of the case analysis that no action works. "Goal already
/// achieved" is reported as `Possible` with an empty or no-op action, which
/// is distinct from `Impossible`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ControlOutcome {
    Possible(ChairAction),
    Impossible,
}

impl ControlOutcome {
    pub fn is_possible(&self) -> bool {
        matches!(self, ControlOutcome::Possible(_))
    }

    pub fn action(&self) -> Option<&ChairAction> {
        match self {
            ControlOutcome::Possible(a) => Some(a),
            ControlOutcome::Impossible => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("{0}")]
    Election(#[from] ElectionError),
    #[error("solver requires rule {expected}, election uses {got}")]
    WrongRule {
        expected: &'static str,
        got: &'static str,
    },
    #[error("tie rule must be TE or TP here")]
    BadTieRule,
    #[error("unregistered ballots are required in add mode and forbidden in delete mode")]
    UnregisteredMismatch,
    #[error("no exact polynomial-time solver covers {0}; use the oracle")]
    NoExactSolver(String),
}

fn require_rule(e: &Election, expected: Rule) -> Result<(), SolveError> {
    if e.rule() != expected {
        return Err(SolveError::WrongRule {
            expected: expected.name(),
            got: e.rule().name(),
        });
    }
    Ok(())
}

fn target_index(e: &Election, c: &CandidateId) -> Result<usize, SolveError> {
    e.candidate_index(c)
        .ok_or_else(|| SolveError::Election(ElectionError::NoSuchCandidate(c.clone())))
}

/// Ballot indices grouped by the index of their first choice among `C`.
fn first_choice_lists(e: &Election) -> Vec<Vec<usize>> {
    let mut lists = vec![Vec::new(); e.candidates().len()];
    for (v, b) in e.ballots().iter().enumerate() {
        if let Some(i) = e.first_choice(b) {
            lists[i].push(v);
        }
    }
    lists
}

fn complement(n: usize, chosen: &[usize]) -> Vec<usize> {
    let mut member = vec![false; n];
    for &i in chosen {
        member[i] = true;
    }
    (0..n).filter(|&i| !member[i]).collect()
}

fn partition_action(n: usize, mut v1: Vec<usize>) -> ChairAction {
    v1.sort_unstable();
    let v2 = complement(n, &v1);
    ChairAction::PartitionVoters(v1, v2)
}

/// The do-nothing partition `(V, ∅)`.
fn whole_vs_empty(e: &Election) -> ChairAction {
    ChairAction::PartitionVoters((0..e.num_ballots()).collect(), Vec::new())
}

/// Voters classified by their stance on a fixed candidate triple `(a, b, c)`,
/// as ballot-index lists. For ordinal ballots the classes cover all six
/// relative orders of the triple; for approval ballots the all-No and all-Yes
/// voters fall outside every class (they never affect the Yes differences).
#[derive(Debug, Clone, Default)]
pub struct PartitionWitnessCounts {
    /// Ordinal: c first of the triple. Approval: 001.
    pub w_c: Vec<usize>,
    /// Ordinal: c last of the triple. Approval: 110.
    pub l_c: Vec<usize>,
    /// Ordinal: a > c > b. Approval: 100.
    pub s_a: Vec<usize>,
    /// Ordinal: b > c > a. Approval: 010.
    pub s_b: Vec<usize>,
    /// Approval only: 101.
    pub s_ac: Vec<usize>,
    /// Approval only: 011.
    pub s_bc: Vec<usize>,
}

impl PartitionWitnessCounts {
    /// Classes from the induced order on `(a, b, c)` of every ordinal ballot.
    pub fn ordinal(e: &Election, a: &CandidateId, b: &CandidateId, c: &CandidateId) -> Self {
        let mut out = PartitionWitnessCounts::default();
        for (v, ballot) in e.ballots().iter().enumerate() {
            let Ballot::Ordinal(ranking) = ballot else {
                continue;
            };
            let pos = |x: &CandidateId| ranking.iter().position(|y| y == x).unwrap();
            let (pa, pb, pc) = (pos(a), pos(b), pos(c));
            if pc < pa && pc < pb {
                out.w_c.push(v);
            } else if pc > pa && pc > pb {
                out.l_c.push(v);
            } else if pa < pc {
                out.s_a.push(v);
            } else {
                out.s_b.push(v);
            }
        }
        out
    }

    /// Classes from the `(a, b, c)` approval bits of every approval ballot.
    pub fn approval(e: &Election, a: &CandidateId, b: &CandidateId, c: &CandidateId) -> Self {
        let mut out = PartitionWitnessCounts::default();
        for (v, ballot) in e.ballots().iter().enumerate() {
            let Ballot::Approval(approved) = ballot else {
                continue;
            };
            let bits = (
                approved.contains(a),
                approved.contains(b),
                approved.contains(c),
            );
            match bits {
                (false, false, true) => out.w_c.push(v),
                (true, true, false) => out.l_c.push(v),
                (true, false, false) => out.s_a.push(v),
                (false, true, false) => out.s_b.push(v),
                (true, false, true) => out.s_ac.push(v),
                (false, true, true) => out.s_bc.push(v),
                _ => {}
            }
        }
        out
    }
}

/// Constructive control by partition of voters under TE, plurality rule.
///
/// After the trivial checks, the two loops look for a rival `d` that loses
/// the run-off to `c` outright (Case 4) or a rival pair `(d, e)` that can be
/// made to tie in the second block so nobody opposes `c` in the final
/// (Case 5). Ballots that put a rival first are rationed into the first
/// block, at most `score(c) - 1` per rival, to keep `c` the unique winner
/// there.
pub fn plurality_constructive_partition_voters_te(
    e: &Election,
    c: &CandidateId,
) -> Result<ControlOutcome, SolveError> {
    require_rule(e, Rule::Plurality)?;
    let ci = target_index(e, c)?;
    // An overall unique win covers the cases where the second block is empty
    // or also nominates c; a tied win cannot survive TE with the trivial
    // partition, so it falls through to the loops.
    if e.is_unique_winner(c)? {
        return Ok(ControlOutcome::Possible(whole_vs_empty(e)));
    }
    let m = e.candidates().len();
    if m == 2 {
        return Ok(ControlOutcome::Impossible);
    }
    let t = e.tally();
    let score: Vec<i64> = t.scores().iter().map(|&s| s as i64).collect();
    // With no supporter of its own, c cannot uniquely win any nonempty first
    // block, and an empty one nominates nobody.
    if score[ci] == 0 {
        return Ok(ControlOutcome::Impossible);
    }
    let fc = first_choice_lists(e);
    let n = e.num_ballots();

    // Case 4: c beats some d pairwise; everyone else is capped low enough to
    // leave d the unique winner of the second block.
    for d in 0..m {
        if d == ci {
            continue;
        }
        let (cd, dc) = (
            t.pairwise(c, &e.candidates()[d]),
            t.pairwise(&e.candidates()[d], c),
        );
        if cd <= dc {
            continue;
        }
        let fits = (0..m)
            .filter(|&i| i != ci && i != d)
            .all(|i| score[i] <= score[ci] + score[d] - 2);
        if fits {
            let mut v1: Vec<usize> = fc[ci].clone();
            for i in 0..m {
                if i == ci || i == d {
                    continue;
                }
                let take = score[i].min(score[ci] - 1) as usize;
                v1.extend(&fc[i][..take]);
            }
            return Ok(ControlOutcome::Possible(partition_action(n, v1)));
        }
    }

    // Case 5: rivals d and e tie in the second block (d's full support
    // against an equal ration of e's), eliminating both under TE.
    for d in 0..m {
        if d == ci {
            continue;
        }
        for e2 in 0..m {
            if e2 == ci || e2 == d || score[d] > score[e2] {
                continue;
            }
            let fits = (0..m)
                .filter(|&i| i != ci)
                .all(|i| score[i] <= score[ci] + score[d] - 1);
            if fits {
                let mut v1: Vec<usize> = fc[ci].clone();
                let move_e = (score[e2] - score[d]) as usize;
                v1.extend(&fc[e2][..move_e]);
                for f in 0..m {
                    if f == ci || f == d || f == e2 {
                        continue;
                    }
                    let take = score[f].min(score[ci] - 1) as usize;
                    v1.extend(&fc[f][..take]);
                }
                return Ok(ControlOutcome::Possible(partition_action(n, v1)));
            }
        }
    }
    Ok(ControlOutcome::Impossible)
}

/// Destructive control by partition of voters under TE, plurality rule.
///
/// Either both blocks can be made to eliminate `c` (the tie trap, feasible
/// exactly when `score(c) ≤ score(d) + score(e)` for the two strongest
/// rivals), or `c` must win one block and the chair needs a rival who
/// survives the other block and ties or beats `c` pairwise in the run-off.
pub fn plurality_destructive_partition_voters_te(
    e: &Election,
    c: &CandidateId,
) -> Result<ControlOutcome, SolveError> {
    require_rule(e, Rule::Plurality)?;
    let ci = target_index(e, c)?;
    let m = e.candidates().len();
    if m == 1 {
        return Ok(ControlOutcome::Impossible);
    }
    if !e.is_unique_winner(c)? {
        return Ok(ControlOutcome::Possible(whole_vs_empty(e)));
    }
    let t = e.tally();
    let score: Vec<i64> = t.scores().iter().map(|&s| s as i64).collect();
    let n = e.num_ballots();
    if score[ci] == n as i64 || m == 2 {
        return Ok(ControlOutcome::Impossible);
    }
    let fc = first_choice_lists(e);
    // The two strongest rivals, input order breaking ties.
    let mut rivals: Vec<usize> = (0..m).filter(|&i| i != ci).collect();
    rivals.sort_by_key(|&i| std::cmp::Reverse(score[i]));
    let (d, e2) = (rivals[0], rivals[1]);
    if score[ci] <= score[d] + score[e2] {
        // Tie trap: c and d tie in the first block, and what is left of c's
        // support in the second block no longer tops e.
        let mut v1: Vec<usize> = fc[d].clone();
        v1.extend(&fc[ci][..score[d] as usize]);
        return Ok(ControlOutcome::Possible(partition_action(n, v1)));
    }
    // Otherwise c certainly wins one block; look for a run-off spoiler d'
    // that survives the other block. d' needs support of its own, or its
    // block degenerates to an all-zero tie and nominates nobody.
    for dp in 0..m {
        if dp == ci || score[dp] < 1 {
            continue;
        }
        let dpc = &e.candidates()[dp];
        if t.pairwise(dpc, c) < t.pairwise(c, dpc) {
            continue;
        }
        let fits = (0..m)
            .filter(|&i| i != ci && i != dp)
            .all(|i| score[i] < score[ci] + score[dp] - 2);
        if fits {
            let mut v1: Vec<usize> = fc[ci].clone();
            for i in 0..m {
                if i == ci || i == dp {
                    continue;
                }
                let take = (score[ci] - 1).min(score[i]) as usize;
                v1.extend(&fc[i][..take]);
            }
            return Ok(ControlOutcome::Possible(partition_action(n, v1)));
        }
    }
    Ok(ControlOutcome::Impossible)
}

/// Destructive control by partition of voters, Condorcet rule.
///
/// For each ordered rival pair `(a, b)` the voters are classified on the
/// triple `(a, b, c)`; when `W_c − L_c ≤ S_a + S_b`, sending all of `S_a`
/// plus a matched ration of `W_c` into the first block makes `a` tie or beat
/// `c` there while `b` ties or beats `c` in the rest.
pub fn condorcet_destructive_partition_voters(
    e: &Election,
    c: &CandidateId,
) -> Result<ControlOutcome, SolveError> {
    require_rule(e, Rule::Condorcet)?;
    target_index(e, c)?;
    let m = e.candidates().len();
    if m == 1 {
        return Ok(ControlOutcome::Impossible);
    }
    if !e.is_unique_winner(c)? {
        return Ok(ControlOutcome::Possible(whole_vs_empty(e)));
    }
    if m == 2 {
        return Ok(ControlOutcome::Impossible);
    }
    let n = e.num_ballots();
    for a in e.candidates() {
        for b in e.candidates() {
            if a == c || b == c || a == b {
                continue;
            }
            let cls = PartitionWitnessCounts::ordinal(e, a, b, c);
            let (w_c, l_c) = (cls.w_c.len() as i64, cls.l_c.len() as i64);
            let (s_a, s_b) = (cls.s_a.len() as i64, cls.s_b.len() as i64);
            if w_c - l_c > s_a + s_b {
                continue;
            }
            let mut v1 = cls.s_a.clone();
            let take = (w_c.min(s_a)) as usize;
            v1.extend(&cls.w_c[..take]);
            return Ok(ControlOutcome::Possible(partition_action(n, v1)));
        }
    }
    Ok(ControlOutcome::Impossible)
}

/// Destructive control by partition of voters, approval rule, model TE or TP.
///
/// Same pair scan as the Condorcet case over the six approval classes of
/// `(a, b, c)`. Under TE a tie suffices in each block; under TP both rivals
/// must strictly beat `c`, which costs two extra votes of slack and a
/// supporter of each rival.
pub fn approval_destructive_partition_voters(
    e: &Election,
    c: &CandidateId,
    ties: TieRule,
) -> Result<ControlOutcome, SolveError> {
    require_rule(e, Rule::Approval)?;
    target_index(e, c)?;
    if matches!(ties, TieRule::NotApplicable) {
        return Err(SolveError::BadTieRule);
    }
    let m = e.candidates().len();
    if m == 1 {
        return Ok(ControlOutcome::Impossible);
    }
    if !e.is_unique_winner(c)? {
        return Ok(ControlOutcome::Possible(whole_vs_empty(e)));
    }
    if m == 2 {
        return Ok(ControlOutcome::Impossible);
    }
    let n = e.num_ballots();
    for a in e.candidates() {
        for b in e.candidates() {
            if a == c || b == c || a == b {
                continue;
            }
            let cls = PartitionWitnessCounts::approval(e, a, b, c);
            let (w_c, l_c) = (cls.w_c.len() as i64, cls.l_c.len() as i64);
            let (s_a, s_b) = (cls.s_a.len() as i64, cls.s_b.len() as i64);
            let take = match ties {
                TieRule::Te if w_c - l_c <= s_a + s_b => w_c.min(s_a),
                TieRule::Tp if w_c - l_c <= s_a + s_b - 2 && s_a > 0 && s_b > 0 => {
                    w_c.min(s_a - 1)
                }
                _ => continue,
            };
            let mut v1 = cls.s_ac.clone();
            v1.extend(&cls.s_a);
            v1.extend(&cls.w_c[..take as usize]);
            return Ok(ControlOutcome::Possible(partition_action(n, v1)));
        }
    }
    Ok(ControlOutcome::Impossible)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VoterChangeMode {
    Add,
    Delete,
}

/// Destructive control by adding or deleting voters, all three rules.
///
/// Greedy on the closest rival: the certificate has minimum cardinality,
/// because each added or deleted voter moves any single score gap by at most
/// one. Returns an empty certificate when the target is already dethroned.
pub fn destructive_voter_change(
    e: &Election,
    mode: VoterChangeMode,
    c: &CandidateId,
    unregistered: Option<&[Ballot]>,
) -> Result<ControlOutcome, SolveError> {
    let ci = target_index(e, c)?;
    match (mode, unregistered.is_some()) {
        (VoterChangeMode::Add, false) | (VoterChangeMode::Delete, true) => {
            return Err(SolveError::UnregisteredMismatch)
        }
        _ => {}
    }
    let empty = || match mode {
        VoterChangeMode::Add => ChairAction::AddVoters(Vec::new()),
        VoterChangeMode::Delete => ChairAction::DeleteVoters(Vec::new()),
    };
    let m = e.candidates().len();
    if m == 1 {
        return Ok(ControlOutcome::Impossible);
    }
    if !e.is_unique_winner(c)? {
        return Ok(ControlOutcome::Possible(empty()));
    }
    let t = e.tally();
    match (e.rule(), mode) {
        (Rule::Plurality, VoterChangeMode::Add) => {
            let w = unregistered.unwrap();
            // First choices of the unregistered ballots, grouped by rival.
            let we = e.with_ballots(w.to_vec())?;
            let wfc = first_choice_lists(&we);
            let mut rivals: Vec<usize> = (0..m).filter(|&i| i != ci).collect();
            rivals.sort_by_key(|&i| t.scores()[ci] - t.scores()[i]);
            for d in rivals {
                let diff = t.scores()[ci] - t.scores()[d];
                if wfc[d].len() >= diff {
                    return Ok(ControlOutcome::Possible(ChairAction::AddVoters(
                        wfc[d][..diff].to_vec(),
                    )));
                }
            }
            Ok(ControlOutcome::Impossible)
        }
        (Rule::Plurality, VoterChangeMode::Delete) => {
            // Deleting the gap to the strongest rival from c's own support
            // always dethrones c: even a zero-scoring rival catches up once
            // every c-first ballot is gone.
            let d = (0..m)
                .filter(|&i| i != ci)
                .max_by_key(|&i| (t.scores()[i], std::cmp::Reverse(i)))
                .unwrap();
            let diff = t.scores()[ci] - t.scores()[d];
            let fc = first_choice_lists(e);
            Ok(ControlOutcome::Possible(ChairAction::DeleteVoters(
                fc[ci][..diff].to_vec(),
            )))
        }
        (Rule::Condorcet, VoterChangeMode::Add) => {
            let w = unregistered.unwrap();
            // For each rival, the unregistered ballots preferring it to c.
            let mut best: Option<(i64, usize)> = None;
            for i in 0..m {
                if i == ci {
                    continue;
                }
                let rival = &e.candidates()[i];
                let surplus = t.surplus(c, rival);
                let supporters = ordinal_preferrers(e, w, rival, c);
                if supporters.len() as i64 >= surplus
                    && best.map_or(true, |(s, _)| surplus < s)
                {
                    best = Some((surplus, i));
                }
            }
            match best {
                Some((surplus, i)) => {
                    let rival = e.candidates()[i].clone();
                    let supporters = ordinal_preferrers(e, unregistered.unwrap(), &rival, c);
                    Ok(ControlOutcome::Possible(ChairAction::AddVoters(
                        supporters[..surplus as usize].to_vec(),
                    )))
                }
                None => Ok(ControlOutcome::Impossible),
            }
        }
        (Rule::Condorcet, VoterChangeMode::Delete) => {
            let d = (0..m)
                .filter(|&i| i != ci)
                .min_by_key(|&i| t.surplus(c, &e.candidates()[i]))
                .unwrap();
            let rival = e.candidates()[d].clone();
            let surplus = t.surplus(c, &rival);
            let supporters = ordinal_preferrers(e, e.ballots(), c, &rival);
            Ok(ControlOutcome::Possible(ChairAction::DeleteVoters(
                supporters[..surplus as usize].to_vec(),
            )))
        }
        (Rule::Approval, VoterChangeMode::Add) => {
            let w = unregistered.unwrap();
            let mut best: Option<(i64, usize)> = None;
            for j in 0..m {
                if j == ci {
                    continue;
                }
                let rival = &e.candidates()[j];
                let surplus = t.surplus(c, rival);
                let supporters = approval_yes_no(w, rival, c);
                if supporters.len() as i64 >= surplus
                    && best.map_or(true, |(s, _)| surplus < s)
                {
                    best = Some((surplus, j));
                }
            }
            match best {
                Some((surplus, j)) => {
                    let rival = e.candidates()[j].clone();
                    let supporters = approval_yes_no(unregistered.unwrap(), &rival, c);
                    Ok(ControlOutcome::Possible(ChairAction::AddVoters(
                        supporters[..surplus as usize].to_vec(),
                    )))
                }
                None => Ok(ControlOutcome::Impossible),
            }
        }
        (Rule::Approval, VoterChangeMode::Delete) => {
            let d = (0..m)
                .filter(|&i| i != ci)
                .min_by_key(|&i| t.surplus(c, &e.candidates()[i]))
                .unwrap();
            let rival = e.candidates()[d].clone();
            let surplus = t.surplus(c, &rival);
            // The ballots causing the surplus: Yes for c, No for the rival.
            let supporters = approval_yes_no(e.ballots(), c, &rival);
            Ok(ControlOutcome::Possible(ChairAction::DeleteVoters(
                supporters[..surplus as usize].to_vec(),
            )))
        }
    }
}

/// Indices of ordinal ballots ranking `x` above `y`.
fn ordinal_preferrers(
    _e: &Election,
    ballots: &[Ballot],
    x: &CandidateId,
    y: &CandidateId,
) -> Vec<usize> {
    ballots
        .iter()
        .enumerate()
        .filter(|(_, b)| match b {
            Ballot::Ordinal(r) => {
                r.iter().position(|z| z == x) < r.iter().position(|z| z == y)
            }
            Ballot::Approval(_) => false,
        })
        .map(|(i, _)| i)
        .collect()
}

/// Indices of approval ballots voting Yes for `x` and No for `y`.
fn approval_yes_no(ballots: &[Ballot], x: &CandidateId, y: &CandidateId) -> Vec<usize> {
    ballots
        .iter()
        .enumerate()
        .filter(|(_, b)| match b {
            Ballot::Approval(a) => a.contains(x) && !a.contains(y),
            Ballot::Ordinal(_) => false,
        })
        .map(|(i, _)| i)
        .collect()
}

/// Destructive control by adding candidates, Condorcet and approval rules.
///
/// One spoiler that ties or beats the target already dethrones it, and if no
/// single spoiler does, no spoiler set can: entering extra candidates never
/// improves a spoiler's standing against the target. Certificates therefore
/// have size at most 1.
pub fn destructive_add_candidates(
    base: &Election,
    spoilers: &[CandidateId],
    c: &CandidateId,
) -> Result<ControlOutcome, SolveError> {
    if matches!(base.rule(), Rule::Plurality) {
        return Err(SolveError::WrongRule {
            expected: "condorcet or approval",
            got: "plurality",
        });
    }
    target_index(base, c)?;
    if let Some(d) = spoilers.iter().find(|d| base.contains(d)) {
        return Err(SolveError::Election(ElectionError::DuplicateCandidate(
            d.clone(),
        )));
    }
    if !base.is_unique_winner(c)? {
        return Ok(ControlOutcome::Possible(ChairAction::AddCandidates(
            Vec::new(),
        )));
    }
    for d in spoilers {
        let mut cands = base.candidates().to_vec();
        cands.push(d.clone());
        let t = base.restrict(&cands)?.tally();
        let dethrones = match base.rule() {
            Rule::Condorcet => t.pairwise(d, c) >= t.pairwise(c, d),
            Rule::Approval => t.approval_score(d) >= t.approval_score(c),
            Rule::Plurality => unreachable!(),
        };
        if dethrones {
            return Ok(ControlOutcome::Possible(ChairAction::AddCandidates(vec![
                d.clone(),
            ])));
        }
    }
    Ok(ControlOutcome::Impossible)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateControlKind {
    Delete,
    PartitionTe,
    RunoffTe,
}

/// Constructive candidate control for approval voting: deleting candidates,
/// and partition / run-off partition in model TE.
///
/// Delete removes exactly the rivals with at least as many Yes votes as the
/// target (the minimal choice). The partition forms succeed by throwing all
/// rivals into one block: with two or more rivals at the maximum Yes count,
/// that block eliminates everyone under TE.
pub fn approval_constructive_candidate_control(
    e: &Election,
    kind: CandidateControlKind,
    c: &CandidateId,
    limit: Option<usize>,
) -> Result<ControlOutcome, SolveError> {
    require_rule(e, Rule::Approval)?;
    target_index(e, c)?;
    let t = e.tally();
    let unique = e.is_unique_winner(c)?;
    match kind {
        CandidateControlKind::Delete => {
            if unique {
                return Ok(ControlOutcome::Possible(ChairAction::DeleteCandidates(
                    Vec::new(),
                )));
            }
            let doomed: Vec<CandidateId> = e
                .candidates()
                .iter()
                .filter(|d| *d != c && t.approval_score(d) >= t.approval_score(c))
                .cloned()
                .collect();
            if let Some(k) = limit {
                if doomed.len() > k {
                    return Ok(ControlOutcome::Impossible);
                }
            }
            Ok(ControlOutcome::Possible(ChairAction::DeleteCandidates(
                doomed,
            )))
        }
        CandidateControlKind::PartitionTe | CandidateControlKind::RunoffTe => {
            if unique {
                return Ok(ControlOutcome::Possible(ChairAction::PartitionCandidates(
                    Vec::new(),
                    e.candidates().to_vec(),
                )));
            }
            let best = e
                .candidates()
                .iter()
                .map(|d| t.approval_score(d))
                .max()
                .unwrap();
            let rivals_at_best = e
                .candidates()
                .iter()
                .filter(|d| *d != c && t.approval_score(d) == best)
                .count();
            if rivals_at_best == 1 {
                return Ok(ControlOutcome::Impossible);
            }
            let others: Vec<CandidateId> = e
                .candidates()
                .iter()
                .filter(|d| *d != c)
                .cloned()
                .collect();
            Ok(ControlOutcome::Possible(ChairAction::PartitionCandidates(
                others,
                vec![c.clone()],
            )))
        }
    }
}

/// Route a control instance to its exact solver, honoring the instance's
/// add/delete limit by comparing it with the minimum certificate size.
/// Instances without a covering algorithm come back as `NoExactSolver`.
pub fn solve_instance(instance: &ControlInstance) -> Result<ControlOutcome, SolveError> {
    let e = instance.base();
    let c = instance.target();
    let outcome = match (e.rule(), instance.goal(), instance.scenario(), instance.ties()) {
        (Rule::Plurality, Goal::Constructive, Scenario::PartitionVoters, TieRule::Te) => {
            plurality_constructive_partition_voters_te(e, c)?
        }
        (Rule::Plurality, Goal::Destructive, Scenario::PartitionVoters, TieRule::Te) => {
            plurality_destructive_partition_voters_te(e, c)?
        }
        (Rule::Condorcet, Goal::Destructive, Scenario::PartitionVoters, _) => {
            condorcet_destructive_partition_voters(e, c)?
        }
        (Rule::Approval, Goal::Destructive, Scenario::PartitionVoters, ties) => {
            approval_destructive_partition_voters(e, c, ties)?
        }
        (_, Goal::Destructive, Scenario::AddVoters, _) => cap_cardinality(
            destructive_voter_change(e, VoterChangeMode::Add, c, Some(instance.unregistered()))?,
            instance.limit(),
        ),
        (_, Goal::Destructive, Scenario::DeleteVoters, _) => cap_cardinality(
            destructive_voter_change(e, VoterChangeMode::Delete, c, None)?,
            instance.limit(),
        ),
        (Rule::Condorcet | Rule::Approval, Goal::Destructive, Scenario::AddCandidates, _) => {
            destructive_add_candidates(e, instance.spoilers(), c)?
        }
        (Rule::Approval, Goal::Constructive, Scenario::DeleteCandidates, _) => {
            approval_constructive_candidate_control(
                e,
                CandidateControlKind::Delete,
                c,
                instance.limit(),
            )?
        }
        (Rule::Approval, Goal::Constructive, Scenario::PartitionCandidates, TieRule::Te) => {
            approval_constructive_candidate_control(e, CandidateControlKind::PartitionTe, c, None)?
        }
        (
            Rule::Approval,
            Goal::Constructive,
            Scenario::RunoffPartitionCandidates,
            TieRule::Te,
        ) => {
            approval_constructive_candidate_control(e, CandidateControlKind::RunoffTe, c, None)?
        }
        (rule, goal, scenario, ties) => {
            return Err(SolveError::NoExactSolver(format!(
                "{} {} {} ({})",
                rule.name(),
                goal.name(),
                scenario.name(),
                ties.name()
            )))
        }
    };
    #[cfg(debug_assertions)]
    if let ControlOutcome::Possible(action) = &outcome {
        debug_assert!(
            crate::control::evaluate(instance, action).unwrap_or(false),
            "solver produced a non-achieving certificate for {} {} {}",
            e.rule().name(),
            instance.goal().name(),
            instance.scenario().name(),
        );
    }
    Ok(outcome)
}

/// Add/delete scenarios carry a limit; the greedy solvers return the minimum
/// certificate, so the limit only decides feasibility.
fn cap_cardinality(outcome: ControlOutcome, limit: Option<usize>) -> ControlOutcome {
    match (&outcome, limit) {
        (ControlOutcome::Possible(a), Some(k)) if a.cardinality() > k => {
            ControlOutcome::Impossible
        }
        _ => outcome,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::evaluate;
    use crate::election::{approves, cid, cids, ranked};
    use crate::fixtures;
    use crate::oracle;

    fn assert_valid(instance: &ControlInstance, outcome: &ControlOutcome) {
        let action = outcome.action().expect("expected Possible");
        assert!(evaluate(instance, action).unwrap());
    }

    #[test]
    fn constructive_voter_partition_on_tied_plurality() {
        let inst = fixtures::split_majority_constructive_instance();
        let out =
            plurality_constructive_partition_voters_te(inst.base(), inst.target()).unwrap();
        assert_valid(&inst, &out);
    }

    #[test]
    fn constructive_voter_partition_trivial_and_small() {
        // Already the unique winner: the (V, ∅) partition works.
        let e = Election::new(Rule::Plurality, cids("a b c"), vec![ranked("c>a>b")]).unwrap();
        let out = plurality_constructive_partition_voters_te(&e, &cid("c")).unwrap();
        assert_eq!(
            out.action(),
            Some(&ChairAction::PartitionVoters(vec![0], vec![]))
        );
        // Two candidates, target behind: impossible.
        let e = Election::new(Rule::Plurality, cids("a c"), vec![ranked("a>c")]).unwrap();
        let out = plurality_constructive_partition_voters_te(&e, &cid("c")).unwrap();
        assert_eq!(out, ControlOutcome::Impossible);
    }

    #[test]
    fn destructive_voter_partition_plurality() {
        let inst = fixtures::split_majority_destructive_instance();
        let out =
            plurality_destructive_partition_voters_te(inst.base(), inst.target()).unwrap();
        assert_valid(&inst, &out);

        // Lone candidate: impossible.
        let e = Election::new(Rule::Plurality, cids("c"), vec![ranked("c")]).unwrap();
        assert_eq!(
            plurality_destructive_partition_voters_te(&e, &cid("c")).unwrap(),
            ControlOutcome::Impossible
        );
        // Every voter ranks c first: impossible.
        let e = Election::new(
            Rule::Plurality,
            cids("a b c"),
            vec![ranked("c>a>b"); 5],
        )
        .unwrap();
        assert_eq!(
            plurality_destructive_partition_voters_te(&e, &cid("c")).unwrap(),
            ControlOutcome::Impossible
        );
    }

    #[test]
    fn destructive_voter_partition_condorcet() {
        let inst = fixtures::tie_trap_destructive_instance();
        let out = condorcet_destructive_partition_voters(inst.base(), inst.target()).unwrap();
        assert_valid(&inst, &out);

        // Two candidates, c the Condorcet winner: impossible.
        let e = Election::new(Rule::Condorcet, cids("a c"), vec![ranked("c>a"); 3]).unwrap();
        assert_eq!(
            condorcet_destructive_partition_voters(&e, &cid("c")).unwrap(),
            ControlOutcome::Impossible
        );
    }

    #[test]
    fn destructive_voter_partition_approval_both_models() {
        for ties in [TieRule::Te, TieRule::Tp] {
            let inst = fixtures::approval_blocs_destructive_instance(ties);
            let out =
                approval_destructive_partition_voters(inst.base(), inst.target(), ties).unwrap();
            assert_valid(&inst, &out);
        }
        // Two candidates, both ballots for c only: impossible under both.
        let e = Election::new(
            Rule::Approval,
            cids("a c"),
            vec![approves("c"), approves("c")],
        )
        .unwrap();
        for ties in [TieRule::Te, TieRule::Tp] {
            assert_eq!(
                approval_destructive_partition_voters(&e, &cid("c"), ties).unwrap(),
                ControlOutcome::Impossible
            );
        }
        assert!(matches!(
            approval_destructive_partition_voters(&e, &cid("c"), TieRule::NotApplicable),
            Err(SolveError::BadTieRule)
        ));
    }

    #[test]
    fn voter_change_add_examples() {
        for rule in [Rule::Plurality, Rule::Condorcet] {
            let inst = fixtures::lone_voter_add_instance(rule);
            let out = destructive_voter_change(
                inst.base(),
                VoterChangeMode::Add,
                inst.target(),
                Some(inst.unregistered()),
            )
            .unwrap();
            assert_eq!(out.action().unwrap().cardinality(), 1);
            assert_valid(&inst, &out);
        }
        let inst = fixtures::approval_lone_voter_add_instance();
        let out = destructive_voter_change(
            inst.base(),
            VoterChangeMode::Add,
            inst.target(),
            Some(inst.unregistered()),
        )
        .unwrap();
        assert_eq!(out.action().unwrap().cardinality(), 1);
        assert_valid(&inst, &out);
    }

    #[test]
    fn voter_change_delete_matches_minimum() {
        // Pairwise champion with surplus 1 over each rival: one deletion.
        let e = fixtures::tie_trap_election();
        let out =
            destructive_voter_change(&e, VoterChangeMode::Delete, &cid("c"), None).unwrap();
        assert_eq!(out.action().unwrap().cardinality(), 1);

        // Plurality: deleting the gap from c's own supporters suffices even
        // when every rival is at zero.
        let e = Election::new(
            Rule::Plurality,
            cids("a b c"),
            vec![ranked("c>a>b"), ranked("c>b>a")],
        )
        .unwrap();
        let out =
            destructive_voter_change(&e, VoterChangeMode::Delete, &cid("c"), None).unwrap();
        assert_eq!(out.action().unwrap().cardinality(), 2);

        let lone = Election::new(Rule::Plurality, cids("c"), vec![ranked("c")]).unwrap();
        assert_eq!(
            destructive_voter_change(&lone, VoterChangeMode::Delete, &cid("c"), None).unwrap(),
            ControlOutcome::Impossible
        );
    }

    #[test]
    fn voter_change_argument_checks() {
        let e = Election::new(Rule::Plurality, cids("a c"), vec![ranked("c>a")]).unwrap();
        assert!(matches!(
            destructive_voter_change(&e, VoterChangeMode::Add, &cid("c"), None),
            Err(SolveError::UnregisteredMismatch)
        ));
        assert!(matches!(
            destructive_voter_change(&e, VoterChangeMode::Delete, &cid("c"), Some(&[])),
            Err(SolveError::UnregisteredMismatch)
        ));
    }

    #[test]
    fn add_candidates_single_spoiler() {
        // One voter approving both: the spoiler ties c.
        let base = Election::with_universe(
            Rule::Approval,
            cids("c"),
            cids("c d"),
            vec![approves("c,d")],
        )
        .unwrap();
        let out = destructive_add_candidates(&base, &cids("d"), &cid("c")).unwrap();
        assert_eq!(
            out.action(),
            Some(&ChairAction::AddCandidates(cids("d")))
        );

        // No spoiler reaches c's Yes count: impossible.
        let base = Election::with_universe(
            Rule::Approval,
            cids("b c"),
            cids("b c a"),
            vec![approves("c"), approves("c")],
        )
        .unwrap();
        assert_eq!(
            destructive_add_candidates(&base, &cids("a"), &cid("c")).unwrap(),
            ControlOutcome::Impossible
        );

        // Approval recast of the lone-voter walkthrough: ballots 001 and 100.
        let base = Election::with_universe(
            Rule::Approval,
            cids("b c"),
            cids("b c a"),
            vec![approves("c"), approves("a")],
        )
        .unwrap();
        let out = destructive_add_candidates(&base, &cids("a"), &cid("c")).unwrap();
        assert_eq!(out.action(), Some(&ChairAction::AddCandidates(cids("a"))));

        let plur = Election::new(Rule::Plurality, cids("c"), vec![]).unwrap();
        assert!(matches!(
            destructive_add_candidates(&plur, &[], &cid("c")),
            Err(SolveError::WrongRule { .. })
        ));
    }

    #[test]
    fn approval_candidate_control_partition() {
        let inst = fixtures::approval_pair_partition_instance(Scenario::PartitionCandidates);
        let out = approval_constructive_candidate_control(
            inst.base(),
            CandidateControlKind::PartitionTe,
            inst.target(),
            None,
        )
        .unwrap();
        assert_eq!(
            out.action(),
            Some(&ChairAction::PartitionCandidates(cids("a b"), cids("c")))
        );
        assert_valid(&inst, &out);

        // With an extra ballot approving a alone, a is the sole maximum and
        // no partition can rescue c.
        let mut ballots = inst.base().ballots().to_vec();
        ballots.push(approves("a"));
        let e = inst.base().with_ballots(ballots).unwrap();
        let out = approval_constructive_candidate_control(
            &e,
            CandidateControlKind::PartitionTe,
            &cid("c"),
            None,
        )
        .unwrap();
        assert_eq!(out, ControlOutcome::Impossible);
    }

    #[test]
    fn approval_candidate_control_delete() {
        let e = fixtures::approval_pair_election();
        let out = approval_constructive_candidate_control(
            &e,
            CandidateControlKind::Delete,
            &cid("c"),
            Some(2),
        )
        .unwrap();
        assert_eq!(
            out.action(),
            Some(&ChairAction::DeleteCandidates(cids("a b")))
        );
        let out = approval_constructive_candidate_control(
            &e,
            CandidateControlKind::Delete,
            &cid("c"),
            Some(1),
        )
        .unwrap();
        assert_eq!(out, ControlOutcome::Impossible);
        // Already unique: empty certificate.
        let solo = Election::new(Rule::Approval, cids("a c"), vec![approves("c")]).unwrap();
        let out = approval_constructive_candidate_control(
            &solo,
            CandidateControlKind::Delete,
            &cid("c"),
            Some(1),
        )
        .unwrap();
        assert_eq!(out.action().unwrap().cardinality(), 0);
    }

    #[test]
    fn dispatcher_routes_and_rejects() {
        let inst = fixtures::split_majority_constructive_instance();
        assert!(solve_instance(&inst).unwrap().is_possible());

        // Plurality TP voter partition has no exact solver.
        let inst = fixtures::voter_split_constructive_instance();
        assert!(matches!(
            solve_instance(&inst),
            Err(SolveError::NoExactSolver(_))
        ));
    }

    #[test]
    fn dispatcher_agrees_with_oracle_on_walkthroughs() {
        for id in fixtures::WALKTHROUGH_IDS {
            for demo in fixtures::walkthrough(id).unwrap() {
                let solved = match solve_instance(&demo.instance) {
                    Ok(outcome) => outcome,
                    Err(SolveError::NoExactSolver(_)) => continue,
                    Err(e) => panic!("walkthrough {id}: {e}"),
                };
                let oracle_out =
                    oracle::decide(&demo.instance, oracle::DEFAULT_BUDGET).unwrap();
                assert_eq!(
                    solved.is_possible(),
                    oracle_out.possible,
                    "walkthrough {id}: {}",
                    demo.label
                );
            }
        }
    }
}
