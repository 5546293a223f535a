//! `ectl`: solve, oracle-check, generate and verify electoral-control
//! instances in the line-oriented text format.
//!
//! Exit codes: 0 decided/verified, 1 control impossible (or verification
//! failure), 2 usage or parse error, 3 oracle budget exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use election_control::control::evaluate;
use election_control::format::{self, Document};
use election_control::oracle::{self, OracleError};
use election_control::reductions::{
    hs_to_plurality, x3c_to_approval, HsVariant, LabeledControlInstance, X3cVariant,
};
use election_control::solvers::{self, ControlOutcome};
use election_control::table::{self, SearchBounds, Verdict};
use election_control::{ChairAction, ControlInstance};

#[derive(Parser)]
#[command(
    name = "ectl",
    about = "Electoral-control solver, brute-force oracle, hardness-instance \
             generator and classification verifier"
)]
struct Cli {
    /// Action budget for the brute-force oracle.
    #[arg(long, global = true, default_value_t = oracle::DEFAULT_BUDGET)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a control instance: report immunity, run the exact
    /// polynomial-time solver when one exists, else fall back to the oracle.
    Solve { file: PathBuf },
    /// Decide a control instance by exhaustive search.
    Oracle {
        file: PathBuf,
        /// Find a minimum-cardinality action (add/delete scenarios only).
        #[arg(long)]
        minimal: bool,
    },
    /// Generate a labeled control instance from a reduction source file.
    Generate {
        /// Reduction name, e.g. plurality-destructive-add-candidates or
        /// approval-constructive-add-voters.
        reduction: String,
        src_file: PathBuf,
    },
    /// Verify the vulnerable/resistant/immune classification at desk scale.
    VerifyTable {
        /// Bounds: max candidates, voters, spoilers, unregistered voters.
        #[arg(long, num_args = 4, value_names = ["CANDS", "VOTERS", "SPOILERS", "UNREG"])]
        bounds: Option<Vec<usize>>,
        /// Random trials per solver-covered cell.
        #[arg(long, default_value_t = 25)]
        trials: u64,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
    /// Replay a bundled walkthrough example by id.
    Example { id: String },
}

const EXIT_OK: u8 = 0;
const EXIT_IMPOSSIBLE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

fn fail(msg: impl std::fmt::Display, code: u8) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn read_doc(path: &PathBuf) -> Result<Document, ExitCode> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(format_args!("{}: {e}", path.display()), EXIT_USAGE))?;
    format::parse(&text).map_err(|e| fail(format_args!("{}: {e}", path.display()), EXIT_USAGE))
}

fn read_control(path: &PathBuf) -> Result<ControlInstance, ExitCode> {
    match read_doc(path)? {
        Document::Control(i) => Ok(i),
        _ => Err(fail(
            format_args!("{}: expected a control instance", path.display()),
            EXIT_USAGE,
        )),
    }
}

fn voters(indices: &[usize]) -> String {
    indices
        .iter()
        .map(|i| format!("#{}", i + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

fn names(ids: &[election_control::CandidateId]) -> String {
    ids.iter()
        .map(|c| c.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

fn describe_action(action: &ChairAction) -> String {
    match action {
        ChairAction::AddCandidates(v) if v.is_empty() => "add no candidate".into(),
        ChairAction::AddCandidates(v) if v.len() == 1 => format!("add candidate {}", v[0]),
        ChairAction::AddCandidates(v) => format!("add candidates {}", names(v)),
        ChairAction::DeleteCandidates(v) if v.is_empty() => "delete no candidate".into(),
        ChairAction::DeleteCandidates(v) if v.len() == 1 => {
            format!("delete candidate {}", v[0])
        }
        ChairAction::DeleteCandidates(v) => format!("delete candidates {}", names(v)),
        ChairAction::PartitionCandidates(c1, c2) => {
            format!("partition candidates {{{}}} vs {{{}}}", names(c1), names(c2))
        }
        ChairAction::PartitionVoters(v1, v2) => {
            format!("partition voters {{{}}} vs {{{}}}", voters(v1), voters(v2))
        }
        ChairAction::AddVoters(v) if v.is_empty() => "add no voter".into(),
        ChairAction::AddVoters(v) if v.len() == 1 => format!("add voter #{}", v[0] + 1),
        ChairAction::AddVoters(v) => format!("add voters {}", voters(v)),
        ChairAction::DeleteVoters(v) if v.is_empty() => "delete no voter".into(),
        ChairAction::DeleteVoters(v) if v.len() == 1 => format!("delete voter #{}", v[0] + 1),
        ChairAction::DeleteVoters(v) => format!("delete voters {}", voters(v)),
    }
}

fn report_possible(action: &ChairAction) -> ExitCode {
    println!("CONTROL POSSIBLE");
    println!("certificate: {}", describe_action(action));
    ExitCode::from(EXIT_OK)
}

fn report_impossible() -> ExitCode {
    println!("CONTROL IMPOSSIBLE");
    ExitCode::from(EXIT_IMPOSSIBLE)
}

fn oracle_exit(e: &OracleError) -> ExitCode {
    match e {
        OracleError::BudgetExceeded { .. } | OracleError::TooLarge(_) => {
            fail(e, EXIT_BUDGET)
        }
        _ => fail(e, EXIT_USAGE),
    }
}

fn cmd_solve(file: &PathBuf, budget: u64) -> ExitCode {
    let instance = match read_control(file) {
        Ok(i) => i,
        Err(code) => return code,
    };
    let e = instance.base();
    let cell = table::classify(e.rule(), instance.goal(), instance.scenario(), instance.ties());
    let Some(cell) = cell else {
        return fail("instance does not match any classified control problem", EXIT_USAGE);
    };
    if cell.verdict == Verdict::Immune {
        println!("IMMUNE: {} control can never change the target's status", cell.describe());
        println!("CONTROL IMPOSSIBLE");
        return ExitCode::from(EXIT_IMPOSSIBLE);
    }
    if table::has_exact_solver(&cell) {
        return match solvers::solve_instance(&instance) {
            Ok(ControlOutcome::Possible(action)) => report_possible(&action),
            Ok(ControlOutcome::Impossible) => report_impossible(),
            Err(e) => fail(e, EXIT_USAGE),
        };
    }
    match oracle::decide(&instance, budget) {
        Ok(outcome) => match outcome.witness {
            Some(action) => report_possible(&action),
            None => report_impossible(),
        },
        Err(e) => oracle_exit(&e),
    }
}

fn cmd_oracle(file: &PathBuf, minimal: bool, budget: u64) -> ExitCode {
    let instance = match read_control(file) {
        Ok(i) => i,
        Err(code) => return code,
    };
    let result = if minimal {
        oracle::minimal_action(&instance, budget)
    } else {
        oracle::decide(&instance, budget)
    };
    match result {
        Ok(outcome) => match outcome.witness {
            Some(action) => report_possible(&action),
            None => report_impossible(),
        },
        Err(e) => oracle_exit(&e),
    }
}

fn cmd_generate(reduction: &str, src_file: &PathBuf) -> ExitCode {
    let doc = match read_doc(src_file) {
        Ok(d) => d,
        Err(code) => return code,
    };
    let generated: Result<LabeledControlInstance, _> = match &doc {
        Document::HittingSet(hs) => {
            let Some(variant) = HsVariant::ALL.iter().find(|v| v.name() == reduction) else {
                return unknown_reduction(reduction);
            };
            hs_to_plurality(hs, *variant)
        }
        Document::X3c(x3c) => {
            let Some(variant) = X3cVariant::ALL.iter().find(|v| v.name() == reduction) else {
                return unknown_reduction(reduction);
            };
            x3c_to_approval(x3c, *variant)
        }
        _ => {
            return fail(
                format_args!("{}: expected a reduction source", src_file.display()),
                EXIT_USAGE,
            )
        }
    };
    match generated {
        Ok(labeled) => {
            println!("# reduction: {}", labeled.reduction);
            println!(
                "# source label: {}-instance",
                if labeled.label { "yes" } else { "no" }
            );
            print!("{}", format::serialize(&Document::Control(labeled.instance)));
            ExitCode::from(EXIT_OK)
        }
        Err(e) => fail(e, EXIT_USAGE),
    }
}

fn unknown_reduction(reduction: &str) -> ExitCode {
    let mut known: Vec<&str> = HsVariant::ALL.iter().map(|v| v.name()).collect();
    known.extend(X3cVariant::ALL.iter().map(|v| v.name()));
    fail(
        format_args!(
            "unknown or mismatched reduction {reduction:?}; known: {}",
            known.join(", ")
        ),
        EXIT_USAGE,
    )
}

fn cmd_verify_table(bounds: Option<&Vec<usize>>, trials: u64, seed: u64) -> ExitCode {
    let bounds = match bounds {
        Some(v) => SearchBounds {
            max_candidates: v[0],
            max_voters: v[1],
            max_spoilers: v[2],
            max_unregistered: v[3],
        },
        None => SearchBounds::default(),
    };
    match table::verify_table(&bounds, trials, seed) {
        Ok(report) => {
            println!("{}", report.render());
            if report.passed() {
                ExitCode::from(EXIT_OK)
            } else {
                ExitCode::from(EXIT_IMPOSSIBLE)
            }
        }
        Err(e) => fail(e, EXIT_USAGE),
    }
}

fn cmd_example(id: &str) -> ExitCode {
    let Some(demos) = election_control::fixtures::walkthrough(id) else {
        let known = election_control::fixtures::WALKTHROUGH_IDS.join(", ");
        return fail(format_args!("unknown example {id:?}; known: {known}"), EXIT_USAGE);
    };
    let mut all_pass = true;
    for demo in demos {
        let ok = evaluate(&demo.instance, &demo.action) == Ok(true);
        all_pass &= ok;
        println!(
            "example {id} ({}): {} — {}",
            demo.label,
            describe_action(&demo.action),
            if ok { "pass" } else { "FAIL" }
        );
    }
    if all_pass {
        ExitCode::from(EXIT_OK)
    } else {
        ExitCode::from(EXIT_IMPOSSIBLE)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Solve { file } => cmd_solve(file, cli.budget),
        Command::Oracle { file, minimal } => cmd_oracle(file, *minimal, cli.budget),
        Command::Generate { reduction, src_file } => cmd_generate(reduction, src_file),
        Command::VerifyTable { bounds, trials, seed } => {
            cmd_verify_table(bounds.as_ref(), *trials, *seed)
        }
        Command::Example { id } => cmd_example(id),
    }
}
