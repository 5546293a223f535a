//! Brute-force ground truth: exhaustive enumeration of chair actions with an
//! explicit action budget, plus exhaustive deciders for the two NP-complete
//! source problems used by the hardness generators.
//!
//! Enumeration order is deterministic: subsets by size then lexicographically
//! by index, partitions by ascending characteristic vector. Symmetric
//! partition scenarios (voter partition, run-off candidate partition) pin the
//! first element to the second block so each unordered partition is visited
//! once and `(∅, everything)` comes first.

use std::collections::HashMap;

use itertools::Itertools;
use thiserror::Error;

use crate::control::{evaluate, ChairAction, ControlError, ControlInstance, Goal, Scenario, TieRule};
use crate::election::{Ballot, CandidateId, Rule};

/// Default cap on the number of candidate actions examined per query.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("action budget of {budget} exhausted before the search concluded")]
    BudgetExceeded { budget: u64 },
    #[error("{0}")]
    Control(#[from] ControlError),
    #[error("minimal certificates are defined for add/delete scenarios only, not {0}")]
    MinimalUndefined(&'static str),
    #[error("oracle fast path supports at most 64 {0}")]
    TooLarge(&'static str),
}

/// Result of an exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleOutcome {
    pub possible: bool,
    /// A goal-achieving action, when one exists. For add/delete scenarios it
    /// has minimum cardinality, enumeration being ordered by size.
    pub witness: Option<ChairAction>,
    pub actions_examined: u64,
}

struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    fn new(limit: u64) -> Budget {
        Budget { limit, used: 0 }
    }

    fn spend(&mut self) -> Result<(), OracleError> {
        if self.used >= self.limit {
            return Err(OracleError::BudgetExceeded { budget: self.limit });
        }
        self.used += 1;
        Ok(())
    }
}

/// Decide a control instance by exhausting the chair's action space.
pub fn decide(instance: &ControlInstance, budget: u64) -> Result<OracleOutcome, OracleError> {
    let mut budget = Budget::new(budget);
    let found = search(instance, &mut budget)?;
    Ok(OracleOutcome {
        possible: found.is_some(),
        witness: found,
        actions_examined: budget.used,
    })
}

/// Smallest goal-achieving action of an add/delete scenario.
pub fn minimal_action(
    instance: &ControlInstance,
    budget: u64,
) -> Result<OracleOutcome, OracleError> {
    if instance.scenario().is_partition() {
        return Err(OracleError::MinimalUndefined(instance.scenario().name()));
    }
    decide(instance, budget)
}

fn search(
    instance: &ControlInstance,
    budget: &mut Budget,
) -> Result<Option<ChairAction>, OracleError> {
    match instance.scenario() {
        Scenario::AddCandidates => {
            let items: Vec<usize> = (0..instance.spoilers().len()).collect();
            subsets_by_size(&items, items.len(), budget, |chosen| {
                let action = ChairAction::AddCandidates(
                    chosen.iter().map(|&i| instance.spoilers()[i].clone()).collect(),
                );
                Ok(evaluate(instance, &action)?.then_some(action))
            })
        }
        Scenario::DeleteCandidates => {
            let items: Vec<usize> = (0..instance.base().candidates().len())
                .filter(|&i| {
                    !(matches!(instance.goal(), Goal::Destructive)
                        && &instance.base().candidates()[i] == instance.target())
                })
                .collect();
            let k = instance.limit().unwrap();
            subsets_by_size(&items, k, budget, |chosen| {
                let action = ChairAction::DeleteCandidates(
                    chosen
                        .iter()
                        .map(|&i| instance.base().candidates()[i].clone())
                        .collect(),
                );
                Ok(evaluate(instance, &action)?.then_some(action))
            })
        }
        Scenario::AddVoters => {
            let items: Vec<usize> = (0..instance.unregistered().len()).collect();
            let k = instance.limit().unwrap();
            subsets_by_size(&items, k, budget, |chosen| {
                let action = ChairAction::AddVoters(chosen.to_vec());
                Ok(evaluate(instance, &action)?.then_some(action))
            })
        }
        Scenario::DeleteVoters => {
            let items: Vec<usize> = (0..instance.base().num_ballots()).collect();
            let k = instance.limit().unwrap();
            subsets_by_size(&items, k, budget, |chosen| {
                let action = ChairAction::DeleteVoters(chosen.to_vec());
                Ok(evaluate(instance, &action)?.then_some(action))
            })
        }
        Scenario::PartitionCandidates | Scenario::RunoffPartitionCandidates => {
            let n = instance.base().candidates().len();
            if n > 63 {
                return Err(OracleError::TooLarge("candidates"));
            }
            // Ordered blocks matter for the two-stage form; the run-off form
            // is symmetric, so its first candidate stays in the second block.
            let symmetric = matches!(instance.scenario(), Scenario::RunoffPartitionCandidates);
            for mask in 0u64..(1u64 << n) {
                if symmetric && mask & 1 == 1 {
                    continue;
                }
                budget.spend()?;
                let (c1, c2) = split_candidates(instance, mask);
                let action = ChairAction::PartitionCandidates(c1, c2);
                if evaluate(instance, &action)? {
                    return Ok(Some(action));
                }
            }
            Ok(None)
        }
        Scenario::PartitionVoters => {
            let n = instance.base().num_ballots();
            if n > 63 {
                return Err(OracleError::TooLarge("voters"));
            }
            let fast = VoterPartitionEvaluator::new(instance)?;
            let masks = if n == 0 { 1u64 } else { 1u64 << (n - 1) };
            for half in 0u64..masks {
                budget.spend()?;
                // The first voter is pinned to the second block.
                let mask = half << 1;
                if fast.achieves_goal(mask) {
                    let (v1, v2) = split_voters(n, mask);
                    return Ok(Some(ChairAction::PartitionVoters(v1, v2)));
                }
            }
            Ok(None)
        }
    }
}

/// Visit subsets of `items` with at most `max_size` elements, smallest and
/// lexicographically first subsets first.
fn subsets_by_size<F>(
    items: &[usize],
    max_size: usize,
    budget: &mut Budget,
    mut visit: F,
) -> Result<Option<ChairAction>, OracleError>
where
    F: FnMut(&[usize]) -> Result<Option<ChairAction>, OracleError>,
{
    for size in 0..=max_size.min(items.len()) {
        for chosen in items.iter().copied().combinations(size) {
            budget.spend()?;
            if let Some(action) = visit(&chosen)? {
                return Ok(Some(action));
            }
        }
    }
    Ok(None)
}

fn split_candidates(instance: &ControlInstance, mask: u64) -> (Vec<CandidateId>, Vec<CandidateId>) {
    let mut c1 = Vec::new();
    let mut c2 = Vec::new();
    for (i, c) in instance.base().candidates().iter().enumerate() {
        if mask >> i & 1 == 1 {
            c1.push(c.clone());
        } else {
            c2.push(c.clone());
        }
    }
    (c1, c2)
}

fn split_voters(n: usize, mask: u64) -> (Vec<usize>, Vec<usize>) {
    let mut v1 = Vec::new();
    let mut v2 = Vec::new();
    for i in 0..n {
        if mask >> i & 1 == 1 {
            v1.push(i);
        } else {
            v2.push(i);
        }
    }
    (v1, v2)
}

/// Precompiled evaluator for voter-partition actions, the only scenario whose
/// action space routinely reaches the millions. Ballot data is flattened to
/// index/bitmask form once, and the final-stage verdict is memoized per final
/// candidate set: the final stage runs over the full voter set, so it only
/// depends on which candidates survived the subelections.
struct VoterPartitionEvaluator {
    rule: Rule,
    ties: TieRule,
    constructive: bool,
    n_candidates: usize,
    target: usize,
    /// Plurality: per ballot, index of its top choice (candidate sets here
    /// are never empty, so this is total).
    first_choice: Vec<usize>,
    /// Approval: per ballot, bitmask of approved candidates.
    approve_mask: Vec<u64>,
    /// Ordinal rules: per ballot, rank position of every candidate.
    rank: Vec<Vec<usize>>,
    /// Approval: global Yes counts (restriction leaves them unchanged).
    global_approvals: Vec<u64>,
    /// Ordinal rules: global net pairwise advantage.
    global_net: Vec<Vec<i64>>,
    final_cache: std::cell::RefCell<HashMap<u64, bool>>,
}

impl VoterPartitionEvaluator {
    fn new(instance: &ControlInstance) -> Result<VoterPartitionEvaluator, OracleError> {
        let base = instance.base();
        let n_candidates = base.candidates().len();
        if n_candidates > 63 {
            return Err(OracleError::TooLarge("candidates"));
        }
        let target = base.candidate_index(instance.target()).unwrap();
        let mut first_choice = Vec::new();
        let mut approve_mask = Vec::new();
        let mut rank = Vec::new();
        let mut global_approvals = vec![0u64; n_candidates];
        let mut global_net = vec![vec![0i64; n_candidates]; n_candidates];
        for ballot in base.ballots() {
            match ballot {
                Ballot::Ordinal(ranking) => {
                    let mut r = vec![usize::MAX; n_candidates];
                    let mut first = usize::MAX;
                    for (pos, c) in ranking.iter().enumerate() {
                        if let Some(i) = base.candidate_index(c) {
                            r[i] = pos;
                            if first == usize::MAX {
                                first = i;
                            }
                        }
                    }
                    for i in 0..n_candidates {
                        for j in 0..n_candidates {
                            if i != j && r[i] < r[j] {
                                global_net[i][j] += 1;
                                global_net[j][i] -= 1;
                            }
                        }
                    }
                    first_choice.push(first);
                    rank.push(r);
                }
                Ballot::Approval(approved) => {
                    let mut mask = 0u64;
                    for (i, c) in base.candidates().iter().enumerate() {
                        if approved.contains(c) {
                            mask |= 1 << i;
                            global_approvals[i] += 1;
                        }
                    }
                    approve_mask.push(mask);
                }
            }
        }
        Ok(VoterPartitionEvaluator {
            rule: base.rule(),
            ties: instance.ties(),
            constructive: matches!(instance.goal(), Goal::Constructive),
            n_candidates,
            target,
            first_choice,
            approve_mask,
            rank,
            global_approvals,
            global_net,
            final_cache: std::cell::RefCell::new(HashMap::new()),
        })
    }

    fn num_ballots(&self) -> usize {
        match self.rule {
            Rule::Approval => self.approve_mask.len(),
            _ => self.first_choice.len(),
        }
    }

    /// Whether the partition coded by `mask` (bit set = first block) achieves
    /// the instance's goal.
    fn achieves_goal(&self, mask: u64) -> bool {
        let survivors =
            self.block_survivors(mask, true) | self.block_survivors(mask, false);
        let unique = self.target_unique_in_final(survivors);
        if self.constructive {
            unique
        } else {
            !unique
        }
    }

    /// Candidates surviving one block's subelection under the tie rule.
    fn block_survivors(&self, mask: u64, first_block: bool) -> u64 {
        let n = self.num_ballots();
        let in_block = |i: usize| (mask >> i & 1 == 1) == first_block;
        let winners: u64 = match self.rule {
            Rule::Plurality => {
                let mut counts = vec![0u64; self.n_candidates];
                for i in 0..n {
                    if in_block(i) {
                        counts[self.first_choice[i]] += 1;
                    }
                }
                // An empty block elects everyone (all scores tie at zero).
                argmax_mask(&counts)
            }
            Rule::Approval => {
                let mut counts = vec![0u64; self.n_candidates];
                for i in 0..n {
                    if in_block(i) {
                        for c in 0..self.n_candidates {
                            if self.approve_mask[i] >> c & 1 == 1 {
                                counts[c] += 1;
                            }
                        }
                    }
                }
                argmax_mask(&counts)
            }
            Rule::Condorcet => {
                let mut net = vec![vec![0i64; self.n_candidates]; self.n_candidates];
                for i in 0..n {
                    if in_block(i) {
                        let r = &self.rank[i];
                        for a in 0..self.n_candidates {
                            for b in (a + 1)..self.n_candidates {
                                if r[a] < r[b] {
                                    net[a][b] += 1;
                                    net[b][a] -= 1;
                                } else {
                                    net[b][a] += 1;
                                    net[a][b] -= 1;
                                }
                            }
                        }
                    }
                }
                condorcet_winner_mask(&net, u64::MAX >> (64 - self.n_candidates))
            }
        };
        match self.ties {
            TieRule::Te if winners.count_ones() > 1 => 0,
            _ => winners,
        }
    }

    /// Whether the target uniquely wins the final stage over the full voter
    /// set, restricted to the surviving candidate set. Memoized per set.
    fn target_unique_in_final(&self, survivors: u64) -> bool {
        if survivors >> self.target & 1 == 0 {
            return false;
        }
        if let Some(&v) = self.final_cache.borrow().get(&survivors) {
            return v;
        }
        let v = match self.rule {
            Rule::Plurality => {
                let mut counts = vec![0u64; self.n_candidates];
                for r in &self.rank {
                    // top choice within the surviving set
                    let mut best = usize::MAX;
                    let mut best_rank = usize::MAX;
                    for c in 0..self.n_candidates {
                        if survivors >> c & 1 == 1 && r[c] < best_rank {
                            best_rank = r[c];
                            best = c;
                        }
                    }
                    counts[best] += 1;
                }
                unique_argmax_is(&counts, survivors, self.target)
            }
            Rule::Approval => {
                // Yes counts are independent of the candidate restriction.
                unique_argmax_is(&self.global_approvals, survivors, self.target)
            }
            Rule::Condorcet => {
                let t = self.target;
                (0..self.n_candidates).all(|j| {
                    j == t || survivors >> j & 1 == 0 || self.global_net[t][j] > 0
                })
            }
        };
        self.final_cache.borrow_mut().insert(survivors, v);
        v
    }
}

/// Bitmask of the indices attaining the maximum count.
fn argmax_mask(counts: &[u64]) -> u64 {
    let max = counts.iter().copied().max().unwrap_or(0);
    let mut mask = 0u64;
    for (i, &c) in counts.iter().enumerate() {
        if c == max {
            mask |= 1 << i;
        }
    }
    mask
}

/// True iff `target` is the strict maximum of `counts` within `allowed`.
fn unique_argmax_is(counts: &[u64], allowed: u64, target: usize) -> bool {
    counts
        .iter()
        .enumerate()
        .all(|(i, &c)| i == target || allowed >> i & 1 == 0 || c < counts[target])
}

/// Bitmask of the net-pairwise champion within `allowed`, or 0 when no
/// candidate beats every rival by a strict majority.
fn condorcet_winner_mask(net: &[Vec<i64>], allowed: u64) -> u64 {
    let n = net.len();
    for i in 0..n {
        if allowed >> i & 1 == 0 {
            continue;
        }
        let beats_all =
            (0..n).all(|j| j == i || allowed >> j & 1 == 0 || net[i][j] > 0);
        if beats_all {
            return 1 << i;
        }
    }
    0
}

/// Exhaustive hitting-set decider: a set of at most `k` element indices
/// meeting every set in `family`, if one exists. Smallest, lexicographically
/// first witness.
pub fn solve_hitting_set(
    num_elements: usize,
    family: &[Vec<usize>],
    k: usize,
) -> Option<Vec<usize>> {
    let items: Vec<usize> = (0..num_elements).collect();
    for size in 0..=k.min(num_elements) {
        for chosen in items.iter().copied().combinations(size) {
            if family
                .iter()
                .all(|s| s.iter().any(|e| chosen.contains(e)))
            {
                return Some(chosen);
            }
        }
    }
    None
}

/// Exhaustive exact-cover decider: indices of triples from `family` covering
/// each of `3k` elements exactly once, if such a subfamily exists.
pub fn solve_x3c(num_elements: usize, family: &[[usize; 3]]) -> Option<Vec<usize>> {
    assert_eq!(num_elements % 3, 0, "element count must be a multiple of 3");
    let k = num_elements / 3;
    let masks: Vec<u64> = family
        .iter()
        .map(|t| t.iter().fold(0u64, |m, &e| m | 1 << e))
        .collect();
    let full = if num_elements == 0 {
        0
    } else {
        u64::MAX >> (64 - num_elements)
    };
    for chosen in (0..family.len()).combinations(k) {
        let mut union = 0u64;
        let mut disjoint = true;
        for &i in &chosen {
            if union & masks[i] != 0 {
                disjoint = false;
                break;
            }
            union |= masks[i];
        }
        if disjoint && union == full {
            return Some(chosen);
        }
    }
    None
}
