//! Deterministic translators from Hitting Set and Exact Cover by Three-Sets
//! (X3C) instances to control instances. Each generated instance carries a
//! ground-truth label computed by brute force on the combinatorial source,
//! never asserted, so label/decision agreement is a checkable property.

use thiserror::Error;

use crate::control::{ChairAction, ControlError, ControlInstance, Goal, Scenario, TieRule};
use crate::election::{
    Ballot, CandidateId, Election, ElectionError, Rule,
};
use crate::oracle::{solve_hitting_set, solve_x3c};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("{0}")]
    Election(#[from] ElectionError),
    #[error("{0}")]
    Control(#[from] ControlError),
    #[error("need 1 ≤ k ≤ m (got k = {k}, m = {m})")]
    BadK { k: usize, m: usize },
    #[error("subset {index} mentions element {element}, but only {m} elements exist")]
    BadElement {
        index: usize,
        element: usize,
        m: usize,
    },
    #[error("subset {index} must have exactly 3 distinct elements")]
    NotATriple { index: usize },
    #[error("element count must be 3k for a positive k (got {m})")]
    NotTripleSized { m: usize },
    #[error("element name {0} is reserved by the construction")]
    ReservedName(CandidateId),
    #[error("violated precondition: {0}")]
    Precondition(&'static str),
}

/// A Hitting Set question: is there a set of at most `k` elements meeting
/// every subset of the family? Subsets are index lists into `elements` and
/// are normalized to element input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingSetInstance {
    elements: Vec<CandidateId>,
    family: Vec<Vec<usize>>,
    k: usize,
}

impl HittingSetInstance {
    pub fn new(
        elements: Vec<CandidateId>,
        mut family: Vec<Vec<usize>>,
        k: usize,
    ) -> Result<Self, ReductionError> {
        let m = elements.len();
        if k == 0 || k > m {
            return Err(ReductionError::BadK { k, m });
        }
        for (index, subset) in family.iter_mut().enumerate() {
            subset.sort_unstable();
            subset.dedup();
            if let Some(&element) = subset.iter().find(|&&e| e >= m) {
                return Err(ReductionError::BadElement { index, element, m });
            }
        }
        Ok(HittingSetInstance { elements, family, k })
    }

    pub fn elements(&self) -> &[CandidateId] {
        &self.elements
    }

    pub fn family(&self) -> &[Vec<usize>] {
        &self.family
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_yes(&self) -> bool {
        solve_hitting_set(self.elements.len(), &self.family, self.k).is_some()
    }

    /// Whether the instance lies in the restricted fragment needed by the
    /// voter-partition reductions: `n(k+1) + 1 ≤ m − k`.
    pub fn is_restricted(&self) -> bool {
        let (m, n, k) = (self.elements.len(), self.family.len(), self.k);
        n * (k + 1) + 1 + k <= m
    }
}

/// An X3C question: can `m = 3k` elements be covered by `k` pairwise
/// disjoint triples of the family?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct X3cInstance {
    elements: Vec<CandidateId>,
    family: Vec<[usize; 3]>,
}

impl X3cInstance {
    pub fn new(
        elements: Vec<CandidateId>,
        raw_family: Vec<Vec<usize>>,
    ) -> Result<Self, ReductionError> {
        let m = elements.len();
        if m == 0 || m % 3 != 0 {
            return Err(ReductionError::NotTripleSized { m });
        }
        let mut family = Vec::with_capacity(raw_family.len());
        for (index, subset) in raw_family.into_iter().enumerate() {
            let mut s = subset;
            s.sort_unstable();
            s.dedup();
            if s.len() != 3 {
                return Err(ReductionError::NotATriple { index });
            }
            if let Some(&element) = s.iter().find(|&&e| e >= m) {
                return Err(ReductionError::BadElement { index, element, m });
            }
            family.push([s[0], s[1], s[2]]);
        }
        Ok(X3cInstance { elements, family })
    }

    pub fn elements(&self) -> &[CandidateId] {
        &self.elements
    }

    pub fn family(&self) -> &[[usize; 3]] {
        &self.family
    }

    pub fn k(&self) -> usize {
        self.elements.len() / 3
    }

    pub fn is_yes(&self) -> bool {
        let family = self.family.clone();
        solve_x3c(self.elements.len(), &family).is_some()
    }
}

/// What the combinatorial source of a generated instance was.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    HittingSet(HittingSetInstance),
    X3c(X3cInstance),
}

/// A generated control instance together with the ground truth of its
/// source: `label` is true iff the source is a yes-instance, computed by
/// brute force. At desk scale the oracle's decision on `instance` must agree
/// with `label`.
#[derive(Debug, Clone)]
pub struct LabeledControlInstance {
    pub instance: ControlInstance,
    pub label: bool,
    pub reduction: &'static str,
    pub source: Provenance,
}

/// The seven target problems of the Hitting Set reduction. All are
/// destructive plurality problems with target `c`, except the constructive
/// voter-partition variant, which targets `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HsVariant {
    AddCandidates,
    DeleteCandidates,
    PartitionCandidates(TieRule),
    RunoffPartition(TieRule),
    PartitionVotersConstructive,
    PartitionVotersDestructive,
}

impl HsVariant {
    pub const ALL: [HsVariant; 8] = [
        HsVariant::AddCandidates,
        HsVariant::DeleteCandidates,
        HsVariant::PartitionCandidates(TieRule::Te),
        HsVariant::PartitionCandidates(TieRule::Tp),
        HsVariant::RunoffPartition(TieRule::Te),
        HsVariant::RunoffPartition(TieRule::Tp),
        HsVariant::PartitionVotersConstructive,
        HsVariant::PartitionVotersDestructive,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            HsVariant::AddCandidates => "plurality-destructive-add-candidates",
            HsVariant::DeleteCandidates => "plurality-destructive-delete-candidates",
            HsVariant::PartitionCandidates(TieRule::Te) => {
                "plurality-destructive-partition-candidates-te"
            }
            HsVariant::PartitionCandidates(_) => "plurality-destructive-partition-candidates-tp",
            HsVariant::RunoffPartition(TieRule::Te) => {
                "plurality-destructive-runoff-partition-te"
            }
            HsVariant::RunoffPartition(_) => "plurality-destructive-runoff-partition-tp",
            HsVariant::PartitionVotersConstructive => {
                "plurality-constructive-partition-voters-tp"
            }
            HsVariant::PartitionVotersDestructive => {
                "plurality-destructive-partition-voters-tp"
            }
        }
    }
}

/// The four target problems of the X3C reduction, all constructive approval
/// problems with target `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum X3cVariant {
    AddVoters,
    DeleteVoters,
    PartitionVotersTp,
    PartitionVotersTe,
}

impl X3cVariant {
    pub const ALL: [X3cVariant; 4] = [
        X3cVariant::AddVoters,
        X3cVariant::DeleteVoters,
        X3cVariant::PartitionVotersTp,
        X3cVariant::PartitionVotersTe,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            X3cVariant::AddVoters => "approval-constructive-add-voters",
            X3cVariant::DeleteVoters => "approval-constructive-delete-voters",
            X3cVariant::PartitionVotersTp => "approval-constructive-partition-voters-tp",
            X3cVariant::PartitionVotersTe => "approval-constructive-partition-voters-te",
        }
    }
}

fn fresh(name: &str, taken: &[CandidateId]) -> Result<CandidateId, ReductionError> {
    let id = CandidateId::new(name).expect("construction names are valid tokens");
    if taken.contains(&id) {
        return Err(ReductionError::ReservedName(id));
    }
    Ok(id)
}

/// An ordinal ballot that ranks `head` first and then every remaining
/// universe candidate in universe order.
fn headed_ballot(universe: &[CandidateId], head: &[&CandidateId]) -> Ballot {
    let mut order: Vec<CandidateId> = head.iter().map(|c| (*c).clone()).collect();
    for c in universe {
        if !head.contains(&c) {
            order.push(c.clone());
        }
    }
    Ballot::Ordinal(order)
}

/// Translate a Hitting Set instance into a plurality control instance.
///
/// The election has candidates `c`, `w` and one candidate per element. Four
/// voter groups, in this listing order: `2(m−k) + 2n(k+1) + 4` ballots
/// `c > w > …`, `2n(k+1) + 5` ballots `w > c > …`, `2(k+1)` ballots
/// `S_i > c > …` per subset, and two ballots `b_j > w > …` per element.
/// The `…` completion is the remaining candidates in input order, and each
/// `S_i` prefix lists its elements in input order; only first-place counts
/// matter, so the completions are fixed purely for determinism.
pub fn hs_to_plurality(
    src: &HittingSetInstance,
    variant: HsVariant,
) -> Result<LabeledControlInstance, ReductionError> {
    let (m, n, k) = (src.elements.len(), src.family.len(), src.k);
    let c = fresh("c", &src.elements)?;
    let w = fresh("w", &src.elements)?;
    let mut universe = vec![c.clone(), w.clone()];
    universe.extend(src.elements.iter().cloned());

    let mut ballots = Vec::new();
    let reps = |n: usize, b: Ballot| std::iter::repeat(b).take(n);
    ballots.extend(reps(
        2 * (m - k) + 2 * n * (k + 1) + 4,
        headed_ballot(&universe, &[&c, &w]),
    ));
    ballots.extend(reps(
        2 * n * (k + 1) + 5,
        headed_ballot(&universe, &[&w, &c]),
    ));
    for subset in &src.family {
        let mut head: Vec<&CandidateId> = subset.iter().map(|&e| &src.elements[e]).collect();
        head.push(&c);
        ballots.extend(reps(2 * (k + 1), headed_ballot(&universe, &head)));
    }
    for b_j in &src.elements {
        ballots.extend(reps(2, headed_ballot(&universe, &[b_j, &w])));
    }

    let full = |ballots: Vec<Ballot>| {
        Election::new(Rule::Plurality, universe.clone(), ballots)
    };
    let instance = match variant {
        HsVariant::AddCandidates => {
            let base = Election::with_universe(
                Rule::Plurality,
                vec![c.clone(), w.clone()],
                universe.clone(),
                ballots,
            )?;
            ControlInstance::new(
                base,
                Scenario::AddCandidates,
                Goal::Destructive,
                TieRule::NotApplicable,
                c.clone(),
                None,
                src.elements.clone(),
                Vec::new(),
            )?
        }
        HsVariant::DeleteCandidates => {
            if k == m {
                return Err(ReductionError::Precondition(
                    "delete-candidates needs k < m so the deletion limit m − k is positive",
                ));
            }
            ControlInstance::new(
                full(ballots)?,
                Scenario::DeleteCandidates,
                Goal::Destructive,
                TieRule::NotApplicable,
                c.clone(),
                Some(m - k),
                Vec::new(),
                Vec::new(),
            )?
        }
        HsVariant::PartitionCandidates(ties) | HsVariant::RunoffPartition(ties) => {
            if matches!(ties, TieRule::NotApplicable) {
                return Err(ReductionError::Precondition(
                    "candidate-partition variants need the TE or TP tie model",
                ));
            }
            let scenario = if matches!(variant, HsVariant::PartitionCandidates(_)) {
                Scenario::PartitionCandidates
            } else {
                Scenario::RunoffPartitionCandidates
            };
            ControlInstance::new(
                full(ballots)?,
                scenario,
                Goal::Destructive,
                ties,
                c.clone(),
                None,
                Vec::new(),
                Vec::new(),
            )?
        }
        HsVariant::PartitionVotersConstructive | HsVariant::PartitionVotersDestructive => {
            if !src.is_restricted() {
                return Err(ReductionError::Precondition(
                    "voter-partition variants need the restricted fragment n(k+1) + 1 ≤ m − k",
                ));
            }
            let (goal, target) = if matches!(variant, HsVariant::PartitionVotersConstructive) {
                (Goal::Constructive, w.clone())
            } else {
                (Goal::Destructive, c.clone())
            };
            ControlInstance::new(
                full(ballots)?,
                Scenario::PartitionVoters,
                goal,
                TieRule::Tp,
                target,
                None,
                Vec::new(),
                Vec::new(),
            )?
        }
    };
    Ok(LabeledControlInstance {
        instance,
        label: src.is_yes(),
        reduction: variant.name(),
        source: Provenance::HittingSet(src.clone()),
    })
}

/// Pad a Hitting Set instance into the restricted fragment
/// `n(k+1) + 1 ≤ m − k` without changing the answer: each subset gains
/// `k + 1` fresh private elements. A hitting set can always avoid the
/// private elements of one subset, so minimum hitting sets are unaffected.
/// Requires `k + 1 ≤ m` in the source.
pub fn pad_to_restricted_hs(
    src: &HittingSetInstance,
) -> Result<HittingSetInstance, ReductionError> {
    let (m, k) = (src.elements.len(), src.k);
    if k + 1 > m {
        return Err(ReductionError::Precondition(
            "padding needs k + 1 ≤ m in the source instance",
        ));
    }
    let mut elements = src.elements.clone();
    let mut family = src.family.clone();
    for (i, subset) in family.iter_mut().enumerate() {
        for j in 1..=k + 1 {
            let id = fresh(&format!("a{}_{}", i + 1, j), &elements)?;
            subset.push(elements.len());
            elements.push(id);
        }
    }
    HittingSetInstance::new(elements, family, k)
}

/// Translate an X3C instance into an approval control instance; the goal is
/// always to make `w` the unique approval winner.
///
/// Per variant:
/// - add-voters: candidates `B ∪ {w}`, `k − 2` registered all-of-B ballots,
///   one unregistered `{w} ∪ S_i` ballot per subset, addition limit `k`.
/// - delete-voters: candidates `B ∪ {w}`; one `S_i` ballot per subset, then
///   voters `v_1..v_n` where `v_i` approves `w` and each element `b_j` with
///   `i ≤ n − ℓ_j` (`ℓ_j` = number of subsets containing `b_j`); deletion
///   limit `k`. Every candidate starts with exactly `n` Yes votes.
/// - partition TP: adds candidates `x`, `y`; `S_i` ballots also approve `y`,
///   plus `k + 1` x-only ballots and `k + 2` all-but-x ballots. Everyone
///   except `x` starts with `n + k + 2` Yes votes.
/// - partition TE: additionally adds `z_1..z_n`, one `{y, z_i}` ballot per
///   subset index, and `n + k` x-only ballots; `v_i` approves every `z_j`
///   except when `i = n`. `x` starts at `n + k`, `y` at `2n`, others at `n`.
pub fn x3c_to_approval(
    src: &X3cInstance,
    variant: X3cVariant,
) -> Result<LabeledControlInstance, ReductionError> {
    let (m, n, k) = (src.elements.len(), src.family.len(), src.k());
    let w = fresh("w", &src.elements)?;
    // ℓ_j: how many subsets contain element j.
    let mut ell = vec![0usize; m];
    for t in &src.family {
        for &e in t {
            ell[e] += 1;
        }
    }
    let approve = |ids: Vec<CandidateId>| Ballot::Approval(ids.into_iter().collect());
    let set_ballot = |i: usize, extra: Option<&CandidateId>| {
        let mut ids: Vec<CandidateId> = src.family[i]
            .iter()
            .map(|&e| src.elements[e].clone())
            .collect();
        ids.extend(extra.cloned());
        approve(ids)
    };
    // v_i's element approvals, shared by the delete/partition variants.
    let v_elements = |i: usize| -> Vec<CandidateId> {
        (0..m)
            .filter(|&j| i + 1 <= n - ell[j])
            .map(|j| src.elements[j].clone())
            .collect()
    };

    let label = src.is_yes();
    let instance = match variant {
        X3cVariant::AddVoters => {
            if k < 2 {
                return Err(ReductionError::Precondition(
                    "add-voters needs k ≥ 2 (k − 2 registered ballots)",
                ));
            }
            if n < k {
                return Err(ReductionError::Precondition(
                    "add-voters needs at least k unregistered ballots (n ≥ k)",
                ));
            }
            let mut candidates = src.elements.clone();
            candidates.push(w.clone());
            let registered = vec![approve(src.elements.clone()); k - 2];
            let unregistered: Vec<Ballot> =
                (0..n).map(|i| set_ballot(i, Some(&w))).collect();
            ControlInstance::new(
                Election::new(Rule::Approval, candidates, registered)?,
                Scenario::AddVoters,
                Goal::Constructive,
                TieRule::NotApplicable,
                w.clone(),
                Some(k),
                Vec::new(),
                unregistered,
            )?
        }
        X3cVariant::DeleteVoters => {
            if k > 2 * n {
                return Err(ReductionError::Precondition(
                    "delete-voters needs k ≤ 2n so the deletion limit fits the voter list",
                ));
            }
            let mut candidates = src.elements.clone();
            candidates.push(w.clone());
            let mut ballots: Vec<Ballot> = (0..n).map(|i| set_ballot(i, None)).collect();
            for i in 0..n {
                let mut ids = v_elements(i);
                ids.push(w.clone());
                ballots.push(approve(ids));
            }
            ControlInstance::new(
                Election::new(Rule::Approval, candidates, ballots)?,
                Scenario::DeleteVoters,
                Goal::Constructive,
                TieRule::NotApplicable,
                w.clone(),
                Some(k),
                Vec::new(),
                Vec::new(),
            )?
        }
        X3cVariant::PartitionVotersTp => {
            let x = fresh("x", &src.elements)?;
            let y = fresh("y", &src.elements)?;
            let mut candidates = src.elements.clone();
            candidates.extend([w.clone(), x.clone(), y.clone()]);
            let mut ballots: Vec<Ballot> =
                (0..n).map(|i| set_ballot(i, Some(&y))).collect();
            for i in 0..n {
                let mut ids = v_elements(i);
                ids.push(w.clone());
                ballots.push(approve(ids));
            }
            ballots.extend(vec![approve(vec![x.clone()]); k + 1]);
            let all_but_x: Vec<CandidateId> = candidates
                .iter()
                .filter(|&id| *id != x)
                .cloned()
                .collect();
            ballots.extend(vec![approve(all_but_x); k + 2]);
            ControlInstance::new(
                Election::new(Rule::Approval, candidates, ballots)?,
                Scenario::PartitionVoters,
                Goal::Constructive,
                TieRule::Tp,
                w.clone(),
                None,
                Vec::new(),
                Vec::new(),
            )?
        }
        X3cVariant::PartitionVotersTe => {
            let x = fresh("x", &src.elements)?;
            let y = fresh("y", &src.elements)?;
            let zs: Vec<CandidateId> = (1..=n)
                .map(|i| fresh(&format!("z{i}"), &src.elements))
                .collect::<Result<_, _>>()?;
            let mut candidates = src.elements.clone();
            candidates.extend([w.clone(), x.clone(), y.clone()]);
            candidates.extend(zs.iter().cloned());
            let mut ballots: Vec<Ballot> =
                (0..n).map(|i| set_ballot(i, Some(&y))).collect();
            for z in &zs {
                ballots.push(approve(vec![y.clone(), z.clone()]));
            }
            for i in 0..n {
                let mut ids = v_elements(i);
                ids.push(w.clone());
                if i + 1 != n {
                    ids.extend(zs.iter().cloned());
                }
                ballots.push(approve(ids));
            }
            ballots.extend(vec![approve(vec![x.clone()]); n + k]);
            ControlInstance::new(
                Election::new(Rule::Approval, candidates, ballots)?,
                Scenario::PartitionVoters,
                Goal::Constructive,
                TieRule::Te,
                w.clone(),
                None,
                Vec::new(),
                Vec::new(),
            )?
        }
    };
    Ok(LabeledControlInstance {
        instance,
        label,
        reduction: variant.name(),
        source: Provenance::X3c(src.clone()),
    })
}

/// For a voter-partition instance generated from a yes Hitting Set source,
/// the winning bipartition can be written down directly: the first block
/// holds one `w > c > …` ballot plus one `b > w > …` ballot per hitting-set
/// element, so its nominees are that hitting set and `w`, while `c` carries
/// the rest; `w` then beats `c` on the restricted candidate set. Returns
/// `None` for other instances or for no-sources.
pub fn hs_partition_witness(labeled: &LabeledControlInstance) -> Option<ChairAction> {
    let Provenance::HittingSet(src) = &labeled.source else {
        return None;
    };
    if labeled.instance.scenario() != Scenario::PartitionVoters {
        return None;
    }
    let hit = solve_hitting_set(src.elements.len(), &src.family, src.k)?;
    let (m, n, k) = (src.elements.len(), src.family.len(), src.k);
    let first_w_ballot = 2 * (m - k) + 2 * n * (k + 1) + 4;
    let element_ballots = first_w_ballot + 2 * n * (k + 1) + 5 + 2 * (k + 1) * n;
    let mut v1 = vec![first_w_ballot];
    v1.extend(hit.iter().map(|&e| element_ballots + 2 * e));
    v1.sort_unstable();
    let total = labeled.instance.base().num_ballots();
    let in_v1: std::collections::BTreeSet<usize> = v1.iter().copied().collect();
    let v2 = (0..total).filter(|i| !in_v1.contains(i)).collect();
    Some(ChairAction::PartitionVoters(v1, v2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::cids;
    use crate::oracle;

    fn hs(elements: &str, family: &[&[usize]], k: usize) -> HittingSetInstance {
        HittingSetInstance::new(
            cids(elements),
            family.iter().map(|s| s.to_vec()).collect(),
            k,
        )
        .unwrap()
    }

    fn x3c(elements: &str, family: &[&[usize]]) -> X3cInstance {
        X3cInstance::new(
            cids(elements),
            family.iter().map(|s| s.to_vec()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn hitting_set_election_group_sizes() {
        // m = 2, n = 2, k = 1 with two disjoint singleton subsets: group
        // sizes 14 / 13 / 4 + 4 / 2 + 2 = 39 ballots, and no single element
        // hits both subsets.
        let src = hs("b1 b2", &[&[0], &[1]], 1);
        let out = hs_to_plurality(&src, HsVariant::AddCandidates).unwrap();
        assert!(!out.label);
        let e = out.instance.base();
        assert_eq!(e.num_ballots(), 39);
        let full = e.restrict(e.universe()).unwrap();
        let t = full.tally();
        let score = |name: &str| t.scores()[full.candidate_index(&crate::election::cid(name)).unwrap()];
        assert_eq!(score("c"), 14);
        assert_eq!(score("w"), 13);
        assert_eq!(score("b1"), 4 + 2);
        assert_eq!(score("b2"), 4 + 2);
    }

    #[test]
    fn hitting_set_restriction_on_winning_subset() {
        // A yes-instance: restricting to a size-k hitting set plus {c, w}
        // must leave w the unique plurality winner.
        let src = hs("b1 b2 b3 b4", &[&[0, 1]], 1);
        assert!(src.is_yes());
        let out = hs_to_plurality(&src, HsVariant::DeleteCandidates).unwrap();
        assert!(out.label);
        let e = out.instance.base();
        let kept = cids("c w b1");
        let restricted = e.restrict(&kept).unwrap();
        assert!(restricted.is_unique_winner(&crate::election::cid("w")).unwrap());
    }

    #[test]
    fn candidate_variants_agree_with_oracle() {
        for (family, k) in [(vec![vec![0usize], vec![1]], 1), (vec![vec![0, 1]], 1)] {
            let src = HittingSetInstance::new(cids("b1 b2"), family, k).unwrap();
            for variant in [
                HsVariant::AddCandidates,
                HsVariant::DeleteCandidates,
                HsVariant::PartitionCandidates(TieRule::Te),
                HsVariant::PartitionCandidates(TieRule::Tp),
                HsVariant::RunoffPartition(TieRule::Te),
                HsVariant::RunoffPartition(TieRule::Tp),
            ] {
                let out = hs_to_plurality(&src, variant).unwrap();
                let decided = oracle::decide(&out.instance, oracle::DEFAULT_BUDGET).unwrap();
                assert_eq!(decided.possible, out.label, "{}", variant.name());
            }
        }
    }

    #[test]
    fn whole_set_hitting_set_is_a_yes_label() {
        let src = hs("b1 b2", &[&[0, 1], &[1]], 2);
        assert!(src.is_yes());
        let out = hs_to_plurality(&src, HsVariant::AddCandidates).unwrap();
        assert!(out.label);
        let decided = oracle::decide(&out.instance, oracle::DEFAULT_BUDGET).unwrap();
        assert!(decided.possible);
    }

    #[test]
    fn voter_partition_variants_enforce_restriction() {
        let src = hs("b1 b2", &[&[0], &[1]], 1);
        assert!(matches!(
            hs_to_plurality(&src, HsVariant::PartitionVotersConstructive),
            Err(ReductionError::Precondition(_))
        ));
        // m = 4, n = 1, k = 1 satisfies 1·2 + 1 ≤ 4 − 1.
        let src = hs("b1 b2 b3 b4", &[&[0]], 1);
        let out = hs_to_plurality(&src, HsVariant::PartitionVotersDestructive).unwrap();
        assert!(out.label);
        assert_eq!(out.instance.goal(), Goal::Destructive);
        assert_eq!(out.instance.ties(), TieRule::Tp);
    }

    #[test]
    fn padding_reaches_the_restricted_fragment() {
        let src = hs("b1 b2", &[&[0]], 1);
        let padded = pad_to_restricted_hs(&src).unwrap();
        assert_eq!(padded.elements().len(), 4);
        assert_eq!(padded.family()[0], vec![0, 2, 3]);
        assert!(padded.is_restricted());
        assert_eq!(src.is_yes(), padded.is_yes());
        // k + 1 > m̂ is rejected.
        let src = HittingSetInstance::new(cids("b1 b2"), vec![vec![0]], 2).unwrap();
        assert!(matches!(
            pad_to_restricted_hs(&src),
            Err(ReductionError::Precondition(_))
        ));
    }

    #[test]
    fn x3c_delete_voters_scores_and_label() {
        // Single triple covering all of B: every candidate has n = 1 Yes
        // votes, and deleting the one subset ballot crowns w.
        let src = x3c("b1 b2 b3", &[&[0, 1, 2]]);
        let out = x3c_to_approval(&src, X3cVariant::DeleteVoters).unwrap();
        assert!(out.label);
        let t = out.instance.base().tally();
        for c in out.instance.base().candidates() {
            assert_eq!(t.approval_score(c), 1);
        }
        let minimal =
            oracle::minimal_action(&out.instance, oracle::DEFAULT_BUDGET).unwrap();
        assert_eq!(
            minimal.witness,
            Some(crate::control::ChairAction::DeleteVoters(vec![0]))
        );
    }

    #[test]
    fn x3c_add_voters_agrees_with_oracle() {
        // m = 6, k = 2: two disjoint triples form an exact cover.
        let src = x3c("b1 b2 b3 b4 b5 b6", &[&[0, 1, 2], &[3, 4, 5]]);
        let out = x3c_to_approval(&src, X3cVariant::AddVoters).unwrap();
        assert!(out.label);
        let decided = oracle::decide(&out.instance, oracle::DEFAULT_BUDGET).unwrap();
        assert!(decided.possible);
        // Overlapping triples cannot cover exactly.
        let src = x3c("b1 b2 b3 b4 b5 b6", &[&[0, 1, 2], &[2, 3, 4]]);
        let out = x3c_to_approval(&src, X3cVariant::AddVoters).unwrap();
        assert!(!out.label);
        let decided = oracle::decide(&out.instance, oracle::DEFAULT_BUDGET).unwrap();
        assert!(!decided.possible);
    }

    #[test]
    fn x3c_partition_tp_scores() {
        let src = x3c("b1 b2 b3", &[&[0, 1, 2], &[0, 1, 2]]);
        let out = x3c_to_approval(&src, X3cVariant::PartitionVotersTp).unwrap();
        let e = out.instance.base();
        let t = e.tally();
        let (n, k) = (src.family().len(), src.k());
        for c in e.candidates() {
            let expected = if c.as_str() == "x" { k + 1 } else { n + k + 2 };
            assert_eq!(t.approval_score(c), expected, "{c}");
        }
        let decided = oracle::decide(&out.instance, oracle::DEFAULT_BUDGET).unwrap();
        assert_eq!(decided.possible, out.label);
    }

    #[test]
    fn x3c_partition_te_scores() {
        let src = x3c("b1 b2 b3", &[&[0, 1, 2], &[0, 1, 2]]);
        let out = x3c_to_approval(&src, X3cVariant::PartitionVotersTe).unwrap();
        let e = out.instance.base();
        let t = e.tally();
        let (n, k) = (src.family().len(), src.k());
        for c in e.candidates() {
            let expected = match c.as_str() {
                "x" => n + k,
                "y" => 2 * n,
                _ => n,
            };
            assert_eq!(t.approval_score(c), expected, "{c}");
        }
        let decided = oracle::decide(&out.instance, oracle::DEFAULT_BUDGET).unwrap();
        assert_eq!(decided.possible, out.label);
    }

    #[test]
    fn reserved_names_are_rejected() {
        let err = HittingSetInstance::new(cids("w b2"), vec![vec![0]], 1).unwrap();
        assert!(matches!(
            hs_to_plurality(&err, HsVariant::AddCandidates),
            Err(ReductionError::ReservedName(_))
        ));
        let src = X3cInstance::new(cids("x b2 b3"), vec![vec![0, 1, 2]]).unwrap();
        assert!(matches!(
            x3c_to_approval(&src, X3cVariant::PartitionVotersTp),
            Err(ReductionError::ReservedName(_))
        ));
    }

    #[test]
    fn generators_are_deterministic() {
        let src = hs("b1 b2 b3 b4", &[&[0, 1]], 1);
        let a = hs_to_plurality(&src, HsVariant::DeleteCandidates).unwrap();
        let b = hs_to_plurality(&src, HsVariant::DeleteCandidates).unwrap();
        assert_eq!(a.instance.base().ballots(), b.instance.base().ballots());
        assert_eq!(a.label, b.label);
    }
}
