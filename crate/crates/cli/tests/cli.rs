use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn ectl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ectl"))
        .args(args)
        .output()
        .expect("failed to launch ectl")
}

fn file_with(contents: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn run_on(contents: &str, pre: &[&str], post: &[&str]) -> Output {
    let f = file_with(contents);
    let mut args: Vec<&str> = pre.to_vec();
    let path = f.path().to_str().unwrap().to_string();
    args.push(&path);
    args.extend(post);
    ectl(&args)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

const ADD_ONE_VOTER: &str = "rule plurality\ncandidates c w\nvote c>w\n\
    control add-voters\ngoal destructive\ntarget c\nlimit 1\nunregistered-vote w>c\n";

#[test]
fn oracle_minimal_reports_single_voter_certificate() {
    let out = run_on(ADD_ONE_VOTER, &["oracle"], &["--minimal"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("CONTROL POSSIBLE"), "{text}");
    assert!(text.contains("add voter #1"), "{text}");
}

#[test]
fn solve_agrees_with_oracle_and_uses_the_exact_solver() {
    let out = run_on(ADD_ONE_VOTER, &["solve"], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("CONTROL POSSIBLE"));
}

#[test]
fn solve_single_candidate_destructive_is_impossible() {
    let doc = "rule plurality\ncandidates c\nvote c\n\
               control delete-voters\ngoal destructive\ntarget c\nlimit 1\n";
    let out = run_on(doc, &["solve"], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("CONTROL IMPOSSIBLE"));
}

#[test]
fn solve_reports_immunity() {
    let doc = "rule condorcet\ncandidates c w\nspoilers x\nvote c>w>x\n\
               control add-candidates\ngoal constructive\ntarget c\n";
    let out = run_on(doc, &["solve"], &[]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("IMMUNE"), "{text}");
}

#[test]
fn parse_error_exits_2_with_line_number() {
    let out = run_on("rule plurality\nnonsense here\n", &["solve"], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn tiny_budget_exits_3() {
    let doc = "rule plurality\ncandidates a b c\n\
               vote a>b>c\nvote b>a>c\nvote c>b>a\nvote a>c>b\nvote b>c>a\n\
               vote c>a>b\nvote a>b>c\nvote b>a>c\nvote c>b>a\nvote a>c>b\n\
               control partition-voters\ngoal destructive\nties TE\ntarget a\n";
    let out = run_on(doc, &["--budget", "1", "oracle"], &[]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn generate_emits_a_parseable_instance_with_label() {
    let src = "hs-elements b1 b2\nhs-set b1 b2\nhs-k 1\n";
    let out = run_on(src, &["generate", "plurality-destructive-add-candidates"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("# source label: yes-instance"), "{text}");
    assert!(text.contains("control add-candidates"), "{text}");
    // The generated document round-trips through `solve` as a plain file.
    let solve = run_on(&text, &["solve"], &[]);
    assert_eq!(solve.status.code(), Some(0), "{}", stdout(&solve));
}

#[test]
fn generate_rejects_mismatched_reduction_names() {
    let src = "x3c-elements e1 e2 e3\nx3c-set e1 e2 e3\n";
    let out = run_on(src, &["generate", "plurality-destructive-add-candidates"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn example_replays_walkthroughs() {
    let out = ectl(&["example", "4.9"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.matches("pass").count() >= 2, "{text}");
    assert!(!text.contains("FAIL"), "{text}");
    assert_eq!(ectl(&["example", "nope"]).status.code(), Some(2));
}

#[test]
fn verify_table_runs_at_default_bounds() {
    let out = ectl(&["verify-table", "--trials", "5", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("table: 54/54 cells verified"));
}
