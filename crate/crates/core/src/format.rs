//! Line-oriented text format for elections, control instances and reduction
//! sources, with bit-exact canonical serialization.
//!
//! Grammar (one `key args...` per line; `#` starts a comment; blank lines are
//! ignored):
//!
//! ```text
//! rule plurality|condorcet|approval
//! candidates a b c
//! spoilers x y                 # add-candidates reserve; ballots range over C ∪ D
//! vote a>b>c                   # ordinal ballot (plurality/condorcet)
//! avote a,c                    # approval ballot; `avote -` approves nobody
//! control add-candidates|delete-candidates|partition-candidates|
//!         runoff-partition-candidates|add-voters|delete-voters|partition-voters
//! goal constructive|destructive
//! ties TE|TP                   # required exactly when the tie rule applies
//! target c
//! limit 3
//! unregistered-vote a>b>c      # addable ordinal ballot
//! unregistered-avote a,c       # addable approval ballot
//! hs-elements b1 b2            # hitting-set source
//! hs-set b1 b2                 # one subset per line
//! hs-k 1
//! x3c-elements b1 b2 b3        # exact-cover source
//! x3c-set b1 b2 b3             # one triple per line
//! ```
//!
//! A document is an election (no `control` key), a control instance, a
//! hitting-set source, or an exact-cover source; the key families must not be
//! mixed. `parse ∘ serialize` is the identity on canonical documents and
//! `serialize ∘ parse` canonicalizes.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::control::{ControlInstance, Goal, Scenario, TieRule};
use crate::election::{Ballot, CandidateId, Election, ElectionError, Rule};
use crate::reductions::{HittingSetInstance, X3cInstance};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Election(Election),
    Control(ControlInstance),
    HittingSet(HittingSetInstance),
    X3c(X3cInstance),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        msg: msg.into(),
    })
}

fn parse_rule(line: usize, s: &str) -> Result<Rule, ParseError> {
    match s {
        "plurality" => Ok(Rule::Plurality),
        "condorcet" => Ok(Rule::Condorcet),
        "approval" => Ok(Rule::Approval),
        _ => err(line, format!("unknown rule {s:?}")),
    }
}

fn parse_scenario(line: usize, s: &str) -> Result<Scenario, ParseError> {
    Scenario::ALL
        .into_iter()
        .find(|sc| sc.name() == s)
        .map_or_else(|| err(line, format!("unknown control scenario {s:?}")), Ok)
}

fn parse_id(line: usize, s: &str) -> Result<CandidateId, ParseError> {
    CandidateId::new(s).map_err(|e| ParseError {
        line,
        msg: e.to_string(),
    })
}

fn parse_ids(line: usize, args: &[&str]) -> Result<Vec<CandidateId>, ParseError> {
    args.iter().map(|s| parse_id(line, s)).collect()
}

fn parse_usize(line: usize, s: &str, what: &str) -> Result<usize, ParseError> {
    s.parse()
        .map_err(|_| ParseError {
            line,
            msg: format!("{what} must be a nonnegative integer, got {s:?}"),
        })
}

/// `a>b>c` → ordinal ballot (the election constructor checks it is a
/// permutation of the universe).
fn parse_vote(line: usize, arg: &str) -> Result<Ballot, ParseError> {
    let ranking: Vec<CandidateId> = arg
        .split('>')
        .map(|s| parse_id(line, s))
        .collect::<Result<_, _>>()?;
    Ok(Ballot::Ordinal(ranking))
}

/// `a,c` → approval ballot; `-` approves nobody.
fn parse_avote(line: usize, arg: &str) -> Result<Ballot, ParseError> {
    if arg == "-" {
        return Ok(Ballot::approval([]));
    }
    let mut approved = BTreeSet::new();
    for s in arg.split(',') {
        let id = parse_id(line, s)?;
        if !approved.insert(id) {
            return err(line, format!("candidate {s} approved twice"));
        }
    }
    Ok(Ballot::Approval(approved))
}

/// Maps subset-element names to indices into `elements`.
fn element_indices(
    line: usize,
    elements: &[CandidateId],
    args: &[&str],
) -> Result<Vec<usize>, ParseError> {
    args.iter()
        .map(|s| {
            elements
                .iter()
                .position(|e| e.as_str() == *s)
                .map_or_else(|| err(line, format!("unknown element {s:?}")), Ok)
        })
        .collect()
}

struct Lines<'a> {
    /// `(line number, key, args)` with comments and blanks removed.
    items: Vec<(usize, &'a str, Vec<&'a str>)>,
}

fn scan(text: &str) -> Result<Lines<'_>, ParseError> {
    let mut items = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let key = tokens.next().unwrap();
        items.push((line, key, tokens.collect()));
    }
    Ok(Lines { items })
}

/// Parses a document into its typed value; diagnostics carry line numbers.
pub fn parse(text: &str) -> Result<Document, ParseError> {
    let lines = scan(text)?;
    let is_hs = lines.items.iter().any(|(_, k, _)| k.starts_with("hs-"));
    let is_x3c = lines.items.iter().any(|(_, k, _)| k.starts_with("x3c-"));
    let is_control = lines.items.iter().any(|(_, k, _)| *k == "control");
    match (is_hs, is_x3c) {
        (true, true) => {
            let (line, ..) = lines.items[0];
            return err(line, "document mixes hitting-set and exact-cover keys");
        }
        (true, false) | (false, true) if is_control => {
            let (line, ..) = lines.items[0];
            return err(line, "document mixes reduction-source and election keys");
        }
        (true, false) => return parse_hitting_set(&lines),
        (false, true) => return parse_x3c(&lines),
        (false, false) => {}
    }
    parse_election_like(&lines, is_control)
}

fn parse_hitting_set(lines: &Lines<'_>) -> Result<Document, ParseError> {
    let mut elements: Option<(usize, Vec<CandidateId>)> = None;
    let mut family: Vec<Vec<usize>> = Vec::new();
    let mut k: Option<usize> = None;
    let mut last_line = 1;
    for (line, key, args) in &lines.items {
        last_line = *line;
        match *key {
            "hs-elements" => {
                if elements.is_some() {
                    return err(*line, "duplicate hs-elements");
                }
                elements = Some((*line, parse_ids(*line, args)?));
            }
            "hs-set" => {
                let Some((_, els)) = &elements else {
                    return err(*line, "hs-set before hs-elements");
                };
                family.push(element_indices(*line, els, args)?);
            }
            "hs-k" => {
                if k.is_some() {
                    return err(*line, "duplicate hs-k");
                }
                let [arg] = args.as_slice() else {
                    return err(*line, "hs-k takes exactly one integer");
                };
                k = Some(parse_usize(*line, arg, "hs-k")?);
            }
            other => return err(*line, format!("unknown key {other:?}")),
        }
    }
    let Some((_, elements)) = elements else {
        return err(last_line, "missing hs-elements");
    };
    let Some(k) = k else {
        return err(last_line, "missing hs-k");
    };
    HittingSetInstance::new(elements, family, k)
        .map(Document::HittingSet)
        .map_err(|e| ParseError {
            line: last_line,
            msg: e.to_string(),
        })
}

fn parse_x3c(lines: &Lines<'_>) -> Result<Document, ParseError> {
    let mut elements: Option<Vec<CandidateId>> = None;
    let mut family: Vec<Vec<usize>> = Vec::new();
    let mut last_line = 1;
    for (line, key, args) in &lines.items {
        last_line = *line;
        match *key {
            "x3c-elements" => {
                if elements.is_some() {
                    return err(*line, "duplicate x3c-elements");
                }
                elements = Some(parse_ids(*line, args)?);
            }
            "x3c-set" => {
                let Some(els) = &elements else {
                    return err(*line, "x3c-set before x3c-elements");
                };
                if args.len() != 3 {
                    return err(*line, "x3c-set takes exactly three elements");
                }
                family.push(element_indices(*line, els, args)?);
            }
            other => return err(*line, format!("unknown key {other:?}")),
        }
    }
    let Some(elements) = elements else {
        return err(last_line, "missing x3c-elements");
    };
    X3cInstance::new(elements, family)
        .map(Document::X3c)
        .map_err(|e| ParseError {
            line: last_line,
            msg: e.to_string(),
        })
}

fn parse_election_like(lines: &Lines<'_>, is_control: bool) -> Result<Document, ParseError> {
    let mut rule: Option<Rule> = None;
    let mut candidates: Option<Vec<CandidateId>> = None;
    let mut spoilers: Vec<CandidateId> = Vec::new();
    let mut ballots: Vec<Ballot> = Vec::new();
    let mut ballot_lines: Vec<usize> = Vec::new();
    let mut unregistered: Vec<Ballot> = Vec::new();
    let mut unregistered_lines: Vec<usize> = Vec::new();
    let mut scenario: Option<Scenario> = None;
    let mut goal: Option<Goal> = None;
    let mut ties: Option<TieRule> = None;
    let mut target: Option<CandidateId> = None;
    let mut limit: Option<usize> = None;
    let mut last_line = 1;

    let one = |line: usize, args: &[&str], key: &str| -> Result<String, ParseError> {
        let [arg] = args else {
            return err(line, format!("{key} takes exactly one argument"));
        };
        Ok((*arg).to_string())
    };

    for (line, key, args) in &lines.items {
        let line = *line;
        last_line = line;
        match *key {
            "rule" => {
                if rule.is_some() {
                    return err(line, "duplicate rule");
                }
                rule = Some(parse_rule(line, &one(line, args, "rule")?)?);
            }
            "candidates" => {
                if candidates.is_some() {
                    return err(line, "duplicate candidates");
                }
                if args.is_empty() {
                    return err(line, "candidates needs at least one candidate");
                }
                candidates = Some(parse_ids(line, args)?);
            }
            "spoilers" => {
                if !spoilers.is_empty() {
                    return err(line, "duplicate spoilers");
                }
                spoilers = parse_ids(line, args)?;
            }
            "vote" | "avote" | "unregistered-vote" | "unregistered-avote" => {
                let Some(r) = rule else {
                    return err(line, format!("{key} before rule"));
                };
                let ordinal_key = !key.contains("avote");
                if ordinal_key != r.is_ordinal() {
                    return err(
                        line,
                        format!("{key} is not legal under rule {}", r.name()),
                    );
                }
                let arg = one(line, args, key)?;
                let ballot = if ordinal_key {
                    parse_vote(line, &arg)?
                } else {
                    parse_avote(line, &arg)?
                };
                if key.starts_with("unregistered-") {
                    unregistered.push(ballot);
                    unregistered_lines.push(line);
                } else {
                    ballots.push(ballot);
                    ballot_lines.push(line);
                }
            }
            "control" => {
                if scenario.is_some() {
                    return err(line, "duplicate control");
                }
                scenario = Some(parse_scenario(line, &one(line, args, "control")?)?);
            }
            "goal" => {
                if goal.is_some() {
                    return err(line, "duplicate goal");
                }
                goal = Some(match one(line, args, "goal")?.as_str() {
                    "constructive" => Goal::Constructive,
                    "destructive" => Goal::Destructive,
                    other => return err(line, format!("unknown goal {other:?}")),
                });
            }
            "ties" => {
                if ties.is_some() {
                    return err(line, "duplicate ties");
                }
                ties = Some(match one(line, args, "ties")?.as_str() {
                    "TE" => TieRule::Te,
                    "TP" => TieRule::Tp,
                    other => return err(line, format!("ties must be TE or TP, got {other:?}")),
                });
            }
            "target" => {
                if target.is_some() {
                    return err(line, "duplicate target");
                }
                target = Some(parse_id(line, &one(line, args, "target")?)?);
            }
            "limit" => {
                if limit.is_some() {
                    return err(line, "duplicate limit");
                }
                limit = Some(parse_usize(line, &one(line, args, "limit")?, "limit")?);
            }
            other => return err(line, format!("unknown key {other:?}")),
        }
    }

    let Some(rule) = rule else {
        return err(last_line, "missing rule");
    };
    let Some(candidates) = candidates else {
        return err(last_line, "missing candidates");
    };
    let universe: Vec<CandidateId> = candidates.iter().chain(&spoilers).cloned().collect();
    let election = Election::with_universe(rule, candidates, universe, ballots).map_err(|e| {
        let line = match &e {
            ElectionError::BadBallot { index, .. } => ballot_lines[*index],
            _ => last_line,
        };
        ParseError {
            line,
            msg: e.to_string(),
        }
    })?;

    if !is_control {
        for key in ["goal", "ties", "target", "limit"] {
            let set = match key {
                "goal" => goal.is_some(),
                "ties" => ties.is_some(),
                "target" => target.is_some(),
                _ => limit.is_some(),
            };
            if set {
                return err(last_line, format!("{key} requires a control line"));
            }
        }
        if !spoilers.is_empty() || !unregistered.is_empty() {
            return err(last_line, "spoilers/unregistered ballots require a control line");
        }
        return Ok(Document::Election(election));
    }

    let scenario = scenario.unwrap();
    let Some(goal) = goal else {
        return err(last_line, "missing goal");
    };
    let Some(target) = target else {
        return err(last_line, "missing target");
    };
    let ties_applicable = scenario.is_partition() && rule != Rule::Condorcet;
    let ties = match (ties, ties_applicable) {
        (Some(t), true) => t,
        (None, true) => return err(last_line, "ties TE|TP required for this scenario"),
        (None, false) => TieRule::NotApplicable,
        (Some(_), false) => {
            return err(last_line, "ties is not applicable to this scenario")
        }
    };
    ControlInstance::new(
        election,
        scenario,
        goal,
        ties,
        target,
        limit,
        spoilers,
        unregistered,
    )
    .map(Document::Control)
    .map_err(|e| ParseError {
        line: last_line,
        msg: e.to_string(),
    })
}

fn write_ballot(out: &mut String, key: &str, ballot: &Ballot) {
    match ballot {
        Ballot::Ordinal(ranking) => {
            let joined: Vec<&str> = ranking.iter().map(CandidateId::as_str).collect();
            let _ = writeln!(out, "{key} {}", joined.join(">"));
        }
        Ballot::Approval(approved) => {
            let joined: Vec<&str> = approved.iter().map(CandidateId::as_str).collect();
            let rendered = if joined.is_empty() {
                "-".to_string()
            } else {
                joined.join(",")
            };
            let name = if key.starts_with("unregistered") {
                "unregistered-avote"
            } else {
                "avote"
            };
            let _ = writeln!(out, "{name} {rendered}");
        }
    }
}

fn write_ids(out: &mut String, key: &str, ids: &[CandidateId]) {
    let joined: Vec<&str> = ids.iter().map(CandidateId::as_str).collect();
    let _ = writeln!(out, "{key} {}", joined.join(" "));
}

/// Canonical serialization: fixed key order, declaration-order candidates,
/// one ballot per line, multiplicity and order preserved.
pub fn serialize(doc: &Document) -> String {
    let mut out = String::new();
    match doc {
        Document::Election(e) => {
            let _ = writeln!(out, "rule {}", e.rule().name());
            write_ids(&mut out, "candidates", e.candidates());
            for b in e.ballots() {
                write_ballot(&mut out, "vote", b);
            }
        }
        Document::Control(i) => {
            let e = i.base();
            let _ = writeln!(out, "rule {}", e.rule().name());
            write_ids(&mut out, "candidates", e.candidates());
            if !i.spoilers().is_empty() {
                write_ids(&mut out, "spoilers", i.spoilers());
            }
            for b in e.ballots() {
                write_ballot(&mut out, "vote", b);
            }
            let _ = writeln!(out, "control {}", i.scenario().name());
            let _ = writeln!(out, "goal {}", i.goal().name());
            if i.ties() != TieRule::NotApplicable {
                let _ = writeln!(out, "ties {}", i.ties().name());
            }
            let _ = writeln!(out, "target {}", i.target());
            if let Some(limit) = i.limit() {
                let _ = writeln!(out, "limit {limit}");
            }
            for b in i.unregistered() {
                write_ballot(&mut out, "unregistered-vote", b);
            }
        }
        Document::HittingSet(hs) => {
            write_ids(&mut out, "hs-elements", hs.elements());
            for subset in hs.family() {
                let ids: Vec<CandidateId> =
                    subset.iter().map(|&i| hs.elements()[i].clone()).collect();
                write_ids(&mut out, "hs-set", &ids);
            }
            let _ = writeln!(out, "hs-k {}", hs.k());
        }
        Document::X3c(x) => {
            write_ids(&mut out, "x3c-elements", x.elements());
            for triple in x.family() {
                let ids: Vec<CandidateId> =
                    triple.iter().map(|&i| x.elements()[i].clone()).collect();
                write_ids(&mut out, "x3c-set", &ids);
            }
        }
    }
    out
}
