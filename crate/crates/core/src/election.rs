//! Elections, ballots and winner determination for plurality, Condorcet and
//! approval voting.
//!
//! An [`Election`] carries a candidate set `C`, a possibly larger candidate
//! `universe` over which the ballots are expressed, and a ballot list.
//! Ballots over a universe strictly larger than `C` are implicitly restricted
//! to `C` whenever scores are computed, so [`restrict`](Election::restrict)
//! only has to swap out the candidate set.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Symbolic candidate name: a nonempty token without whitespace.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CandidateId(String);

impl CandidateId {
    pub fn new(s: &str) -> Result<Self, ElectionError> {
        if s.is_empty() || s.chars().any(char::is_whitespace) {
            return Err(ElectionError::BadCandidateId(s.to_string()));
        }
        Ok(CandidateId(s.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CandidateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Infallible conversion for statically known-good tokens (fixtures, tests).
impl From<&str> for CandidateId {
    fn from(s: &str) -> Self {
        CandidateId::new(s).expect("invalid candidate id literal")
    }
}

/// Shorthand used pervasively by fixtures and generators.
pub fn cid(s: &str) -> CandidateId {
    CandidateId::from(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Plurality,
    Condorcet,
    Approval,
}

impl Rule {
    pub fn is_ordinal(self) -> bool {
        !matches!(self, Rule::Approval)
    }

    pub fn name(self) -> &'static str {
        match self {
            Rule::Plurality => "plurality",
            Rule::Condorcet => "condorcet",
            Rule::Approval => "approval",
        }
    }
}

/// One voter's ballot, expressed over the election's full candidate universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ballot {
    /// Strict, complete, transitive order: a permutation of the universe,
    /// most-preferred first.
    Ordinal(Vec<CandidateId>),
    /// The approved subset of the universe. Empty and full are both legal.
    Approval(BTreeSet<CandidateId>),
}

impl Ballot {
    pub fn ordinal<I: IntoIterator<Item = CandidateId>>(ranking: I) -> Ballot {
        Ballot::Ordinal(ranking.into_iter().collect())
    }

    pub fn approval<I: IntoIterator<Item = CandidateId>>(approved: I) -> Ballot {
        Ballot::Approval(approved.into_iter().collect())
    }

    pub fn is_ordinal(&self) -> bool {
        matches!(self, Ballot::Ordinal(_))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ElectionError {
    #[error("candidate id {0:?} must be a nonempty token without whitespace")]
    BadCandidateId(String),
    #[error("duplicate candidate {0}")]
    DuplicateCandidate(CandidateId),
    #[error("candidate {0} is not in the universe")]
    NotInUniverse(CandidateId),
    #[error("ballot {index}: {reason}")]
    BadBallot { index: usize, reason: String },
    #[error("candidate {0} is not in the election")]
    NoSuchCandidate(CandidateId),
}

/// A preference profile under one voting rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Election {
    rule: Rule,
    /// The candidate set `C` actually standing, in input order.
    candidates: Vec<CandidateId>,
    /// Ordered candidate set over which ballots are expressed; `C ⊆ universe`.
    universe: Vec<CandidateId>,
    /// Multiset of ballots, coded as a list. Duplicates are permitted.
    ballots: Arc<Vec<Ballot>>,
}

fn check_unique(ids: &[CandidateId]) -> Result<(), ElectionError> {
    let mut seen = BTreeSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(ElectionError::DuplicateCandidate(id.clone()));
        }
    }
    Ok(())
}

impl Election {
    /// Election whose ballots range over exactly the candidate set `C`.
    pub fn new(
        rule: Rule,
        candidates: Vec<CandidateId>,
        ballots: Vec<Ballot>,
    ) -> Result<Election, ElectionError> {
        let universe = candidates.clone();
        Election::with_universe(rule, candidates, universe, ballots)
    }

    /// Election over candidate set `C ⊆ universe`, with ballots expressed
    /// over the whole universe.
    pub fn with_universe(
        rule: Rule,
        candidates: Vec<CandidateId>,
        universe: Vec<CandidateId>,
        ballots: Vec<Ballot>,
    ) -> Result<Election, ElectionError> {
        check_unique(&candidates)?;
        check_unique(&universe)?;
        let uni: BTreeSet<&CandidateId> = universe.iter().collect();
        if let Some(c) = candidates.iter().find(|c| !uni.contains(c)) {
            return Err(ElectionError::NotInUniverse(c.clone()));
        }
        for (index, b) in ballots.iter().enumerate() {
            match (rule.is_ordinal(), b) {
                (true, Ballot::Ordinal(ranking)) => {
                    if ranking.len() != universe.len()
                        || ranking.iter().collect::<BTreeSet<_>>() != uni
                    {
                        return Err(ElectionError::BadBallot {
                            index,
                            reason: "ranking is not a permutation of the candidate universe"
                                .to_string(),
                        });
                    }
                }
                (false, Ballot::Approval(approved)) => {
                    if let Some(c) = approved.iter().find(|c| !uni.contains(c)) {
                        return Err(ElectionError::BadBallot {
                            index,
                            reason: format!("approves unknown candidate {c}"),
                        });
                    }
                }
                _ => {
                    return Err(ElectionError::BadBallot {
                        index,
                        reason: format!("ballot kind does not match rule {}", rule.name()),
                    });
                }
            }
        }
        Ok(Election {
            rule,
            candidates,
            universe,
            ballots: Arc::new(ballots),
        })
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn candidates(&self) -> &[CandidateId] {
        &self.candidates
    }

    pub fn universe(&self) -> &[CandidateId] {
        &self.universe
    }

    pub fn ballots(&self) -> &[Ballot] {
        &self.ballots
    }

    pub fn num_ballots(&self) -> usize {
        self.ballots.len()
    }

    pub fn contains(&self, c: &CandidateId) -> bool {
        self.candidates.contains(c)
    }

    pub fn candidate_index(&self, c: &CandidateId) -> Option<usize> {
        self.candidates.iter().position(|x| x == c)
    }

    /// New election with `C = subset` (given order kept); ballots unchanged.
    ///
    /// Ordinal ballots keep their induced order on the subset and approval
    /// ballots their intersected approvals, because every score is computed
    /// relative to `C`.
    pub fn restrict(&self, subset: &[CandidateId]) -> Result<Election, ElectionError> {
        check_unique(subset)?;
        if let Some(c) = subset.iter().find(|c| !self.universe.contains(c)) {
            return Err(ElectionError::NotInUniverse(c.clone()));
        }
        Ok(Election {
            rule: self.rule,
            candidates: subset.to_vec(),
            universe: self.universe.clone(),
            ballots: Arc::clone(&self.ballots),
        })
    }

    /// Same candidates, different ballot list (delete/add-voters actions).
    pub fn with_ballots(&self, ballots: Vec<Ballot>) -> Result<Election, ElectionError> {
        Election::with_universe(
            self.rule,
            self.candidates.clone(),
            self.universe.clone(),
            ballots,
        )
    }

    fn universe_positions(&self) -> HashMap<&CandidateId, usize> {
        self.universe
            .iter()
            .enumerate()
            .map(|(i, c)| (c, i))
            .collect()
    }

    /// For each ballot, the universe-index of every candidate keyed by rank
    /// (ordinal) or the approved universe-index set (approval), plus the
    /// universe-indices of `C`. Shared grunt work for the tally routines.
    fn member_mask(&self) -> Vec<bool> {
        let pos = self.universe_positions();
        let mut mask = vec![false; self.universe.len()];
        for c in &self.candidates {
            mask[pos[c]] = true;
        }
        mask
    }

    /// Index into `C` of the ballot's most preferred member of `C`.
    /// `None` when `C` is empty.
    pub fn first_choice(&self, ballot: &Ballot) -> Option<usize> {
        match ballot {
            Ballot::Ordinal(ranking) => ranking
                .iter()
                .find_map(|c| self.candidate_index(c)),
            Ballot::Approval(_) => None,
        }
    }

    /// Full tally of the election.
    pub fn tally(&self) -> Tally {
        let n = self.candidates.len();
        let mut plurality = vec![0usize; n];
        let mut approval = vec![0usize; n];
        let mut pairwise = vec![vec![0usize; n]; n];
        let member = self.member_mask();
        let upos = self.universe_positions();
        let cpos: Vec<usize> = self.candidates.iter().map(|c| upos[c]).collect();
        for b in self.ballots.iter() {
            match b {
                Ballot::Ordinal(ranking) => {
                    // rank_of[u] = position of universe candidate u in this ballot
                    let mut rank_of = vec![0usize; self.universe.len()];
                    let mut first = None;
                    for (r, c) in ranking.iter().enumerate() {
                        let u = upos[c];
                        rank_of[u] = r;
                        if first.is_none() && member[u] {
                            first = Some(u);
                        }
                    }
                    if let Some(u) = first {
                        let i = cpos.iter().position(|&x| x == u).unwrap();
                        plurality[i] += 1;
                    }
                    for i in 0..n {
                        for j in (i + 1)..n {
                            if rank_of[cpos[i]] < rank_of[cpos[j]] {
                                pairwise[i][j] += 1;
                            } else {
                                pairwise[j][i] += 1;
                            }
                        }
                    }
                }
                Ballot::Approval(approved) => {
                    for (i, c) in self.candidates.iter().enumerate() {
                        if approved.contains(c) {
                            approval[i] += 1;
                        }
                    }
                }
            }
        }
        Tally {
            rule: self.rule,
            candidates: self.candidates.clone(),
            plurality,
            approval,
            pairwise,
        }
    }

    /// The rule's winner set, reported in candidate input order.
    ///
    /// Plurality/approval: all candidates attaining the maximum score; with
    /// zero ballots every candidate scores 0 and all of `C` wins. Condorcet:
    /// the candidate beating every other by a strict majority, or nobody.
    pub fn winners(&self) -> Vec<CandidateId> {
        let t = self.tally();
        t.winners()
    }

    /// True iff the winner set is exactly `{c}`.
    pub fn is_unique_winner(&self, c: &CandidateId) -> Result<bool, ElectionError> {
        if !self.contains(c) {
            return Err(ElectionError::NoSuchCandidate(c.clone()));
        }
        let w = self.winners();
        Ok(w.len() == 1 && &w[0] == c)
    }
}

/// Score tables of one election. Scores are indexed in candidate input order;
/// the map views key by candidate id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tally {
    rule: Rule,
    candidates: Vec<CandidateId>,
    plurality: Vec<usize>,
    approval: Vec<usize>,
    pairwise: Vec<Vec<usize>>,
}

impl Tally {
    pub fn candidates(&self) -> &[CandidateId] {
        &self.candidates
    }

    /// Count of ballots ranking the candidate first among `C`.
    pub fn plurality_score(&self, c: &CandidateId) -> usize {
        self.plurality[self.index(c)]
    }

    /// Count of "Yes" votes.
    pub fn approval_score(&self, c: &CandidateId) -> usize {
        self.approval[self.index(c)]
    }

    /// Count of ballots preferring `c` to `d`.
    pub fn pairwise(&self, c: &CandidateId, d: &CandidateId) -> usize {
        self.pairwise[self.index(c)][self.index(d)]
    }

    /// Pairwise (ordinal) or Yes-count (approval) advantage of `c` over `d`.
    pub fn surplus(&self, c: &CandidateId, d: &CandidateId) -> i64 {
        let (i, j) = (self.index(c), self.index(d));
        match self.rule {
            Rule::Approval => self.approval[i] as i64 - self.approval[j] as i64,
            _ => self.pairwise[i][j] as i64 - self.pairwise[j][i] as i64,
        }
    }

    pub fn plurality_scores(&self) -> BTreeMap<CandidateId, usize> {
        self.map_of(&self.plurality)
    }

    pub fn approval_scores(&self) -> BTreeMap<CandidateId, usize> {
        self.map_of(&self.approval)
    }

    /// The rule's per-candidate score vector in candidate input order.
    pub fn scores(&self) -> &[usize] {
        match self.rule {
            Rule::Approval => &self.approval,
            _ => &self.plurality,
        }
    }

    pub fn winners(&self) -> Vec<CandidateId> {
        let n = self.candidates.len();
        match self.rule {
            Rule::Plurality | Rule::Approval => {
                let scores = self.scores();
                let max = scores.iter().copied().max();
                match max {
                    None => Vec::new(),
                    Some(m) => self
                        .candidates
                        .iter()
                        .zip(scores)
                        .filter(|(_, &s)| s == m)
                        .map(|(c, _)| c.clone())
                        .collect(),
                }
            }
            Rule::Condorcet => {
                // A lone candidate wins vacuously; with zero ballots and
                // two or more candidates no strict majority exists.
                for i in 0..n {
                    let beats_all = (0..n)
                        .filter(|&j| j != i)
                        .all(|j| self.pairwise[i][j] > self.pairwise[j][i]);
                    if beats_all {
                        return vec![self.candidates[i].clone()];
                    }
                }
                Vec::new()
            }
        }
    }

    fn index(&self, c: &CandidateId) -> usize {
        self.candidates
            .iter()
            .position(|x| x == c)
            .unwrap_or_else(|| panic!("candidate {c} not in tally"))
    }

    fn map_of(&self, v: &[usize]) -> BTreeMap<CandidateId, usize> {
        self.candidates
            .iter()
            .cloned()
            .zip(v.iter().copied())
            .collect()
    }
}

/// Builds an ordinal ballot from "a>b>c" style shorthand (tests, fixtures).
pub fn ranked(order: &str) -> Ballot {
    Ballot::Ordinal(order.split('>').map(cid).collect())
}

/// Builds an approval ballot from a comma list, "-" approving nobody.
pub fn approves(list: &str) -> Ballot {
    if list == "-" {
        Ballot::Approval(BTreeSet::new())
    } else {
        Ballot::Approval(list.split(',').map(cid).collect())
    }
}

pub fn cids(tokens: &str) -> Vec<CandidateId> {
    tokens.split_whitespace().map(cid).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn candidate_id_validation() {
        assert!(CandidateId::new("").is_err());
        assert!(CandidateId::new("a b").is_err());
        assert!(CandidateId::new("b_1").is_ok());
    }

    #[test]
    fn rejects_non_permutation_ballot() {
        let err = Election::new(
            Rule::Plurality,
            cids("a b c"),
            vec![ranked("a>b")],
        )
        .unwrap_err();
        assert!(matches!(err, ElectionError::BadBallot { index: 0, .. }));
    }

    #[test]
    fn rejects_kind_mismatch() {
        assert!(Election::new(Rule::Approval, cids("a b"), vec![ranked("a>b")]).is_err());
        assert!(Election::new(Rule::Condorcet, cids("a b"), vec![approves("a")]).is_err());
    }

    #[test]
    fn plurality_winners_tied_pair() {
        let e = fixtures::split_majority_election();
        assert_eq!(e.winners(), cids("a b"));
        assert!(!e.is_unique_winner(&cid("c")).unwrap());
    }

    #[test]
    fn condorcet_winner_seven_voters() {
        let e = fixtures::tie_trap_election();
        assert_eq!(e.winners(), cids("c"));
        let t = e.tally();
        assert_eq!(t.pairwise(&cid("c"), &cid("a")), 4);
        assert_eq!(t.pairwise(&cid("a"), &cid("c")), 3);
        // restricted to voters v1 and v7 there is no Condorcet winner
        let sub = e
            .with_ballots(vec![e.ballots()[0].clone(), e.ballots()[6].clone()])
            .unwrap();
        assert!(sub.winners().is_empty());
    }

    #[test]
    fn approval_winner_blocs() {
        let e = fixtures::approval_blocs_election();
        assert_eq!(e.winners(), cids("c"));
        assert!(e.is_unique_winner(&cid("c")).unwrap());
    }

    #[test]
    fn unique_winner_checks() {
        // a and b tie for winning, so c is not unique.
        let e = fixtures::approval_pair_election();
        assert!(!e.is_unique_winner(&cid("c")).unwrap());
        // c is the unique plurality winner here.
        let e = fixtures::runoff_quartet_election();
        assert!(e.is_unique_winner(&cid("c")).unwrap());
        // Singleton candidate set.
        let e = Election::new(Rule::Plurality, cids("c"), vec![ranked("c")]).unwrap();
        assert!(e.is_unique_winner(&cid("c")).unwrap());
        // Unknown candidate is an input error.
        assert!(e.is_unique_winner(&cid("z")).is_err());
    }

    #[test]
    fn single_candidate_is_voiced() {
        for rule in [Rule::Plurality, Rule::Condorcet] {
            let e = Election::new(rule, cids("a"), vec![ranked("a"), ranked("a")]).unwrap();
            assert_eq!(e.winners(), cids("a"));
        }
        let e = Election::new(Rule::Approval, cids("a"), vec![approves("-")]).unwrap();
        assert_eq!(e.winners(), cids("a"));
    }

    #[test]
    fn zero_ballot_conventions() {
        let e = Election::new(Rule::Plurality, cids("a b"), vec![]).unwrap();
        assert_eq!(e.winners(), cids("a b"));
        let e = Election::new(Rule::Approval, cids("a b"), vec![]).unwrap();
        assert_eq!(e.winners(), cids("a b"));
        let e = Election::new(Rule::Condorcet, cids("a b"), vec![]).unwrap();
        assert!(e.winners().is_empty());
        // Zero ballots, all scores 0.
        let t = e.tally();
        assert_eq!(t.pairwise(&cid("a"), &cid("b")), 0);
    }

    #[test]
    fn restriction_keeps_induced_order() {
        let e = Election::new(Rule::Plurality, cids("a b c d"), vec![ranked("c>a>b>d")]).unwrap();
        let r = e.restrict(&cids("b d")).unwrap();
        // b precedes d in the induced order, so b takes the first-place vote
        assert_eq!(r.tally().plurality_score(&cid("b")), 1);
        assert_eq!(r.tally().plurality_score(&cid("d")), 0);
        // restricting to C itself leaves the winner set unchanged
        let full = e.restrict(&cids("a b c d")).unwrap();
        assert_eq!(full.winners(), e.winners());
    }

    #[test]
    fn restriction_shifts_scores() {
        let e = fixtures::runoff_quartet_election();
        let r = e.restrict(&cids("a c")).unwrap();
        assert_eq!(r.winners(), cids("a"));
        assert_eq!(r.tally().plurality_score(&cid("a")), 4);
    }

    #[test]
    fn tally_sums_to_ballot_count() {
        let e = fixtures::voter_split_election();
        let t = e.tally();
        assert_eq!(t.plurality_score(&cid("a")), 3);
        assert_eq!(t.plurality_score(&cid("b")), 2);
        assert_eq!(t.plurality_score(&cid("c")), 3);
        assert_eq!(
            t.plurality_scores().values().sum::<usize>(),
            e.num_ballots()
        );
    }
}
