//! Shared golden corpus for the CLI tests.

use std::path::PathBuf;
use std::process::Command;

use blockeq_core::quiver::KWebDocument;
use blockeq_core::{FgAbelianGroup, IntMatrix, Verdict};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// How stdout re-parses.
#[derive(Clone, Copy, Debug)]
pub enum Kind {
    Verdict,
    KWeb,
    Snf,
    Cokernel,
    BowenFranks,
    ParrySullivan,
    Validate,
    /// No document; a diagnostic on stderr.
    Error,
}

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
    pub kind: Kind,
}

macro_rules! case {
    ($name:literal, [$($a:literal),*], $exit:literal, $kind:ident) => {
        Case { name: $name, args: &[$($a),*], exit: $exit, kind: Kind::$kind }
    };
}

pub const CASES: &[Case] = &[
    case!("snf", ["snf", "snf.json"], 0, Snf),
    case!("cokernel_wide", ["cokernel", "wide.json"], 0, Cokernel),
    case!("bf_three", ["bf", "three.json"], 0, BowenFranks),
    case!("ps_fib", ["ps", "fib.json"], 0, ParrySullivan),
    case!("flow_eq_franks", ["flow-eq", "full2.json", "fib.json"], 0, Verdict),
    case!("flow_eq_franks_no", ["flow-eq", "full2.json", "three.json"], 1, Verdict),
    case!("flow_eq_reducible", ["flow-eq", "loop_feed.json", "loop_feed_padded.json"], 0, Verdict),
    case!("flow_eq_alignment", ["flow-eq", "loop_feed.json", "two_loops.json"], 1, Verdict),
    case!(
        "blocked_eq_sl_no",
        ["blocked-eq", "full2.json", "three.json", "--group", "sl", "--max-depth", "1"],
        1,
        Verdict
    ),
    case!("blocked_eq_gl_yes", ["blocked-eq", "diag12.json", "upper12.json"], 0, Verdict),
    case!("blocked_eq_inverse_side", ["blocked-eq", "diag12.json", "upper12.json", "--side", "uav-inv"], 0, Verdict),
    case!("blocked_eq_tiny_budget", ["blocked-eq", "diag12.json", "upper12.json", "--max-nodes", "1"], 2, Verdict),
    case!("blocked_eq_chain", ["blocked-eq", "chain_a.json", "chain_b.json", "--group", "sl"], 0, Verdict),
    case!(
        "unit_eq_coset",
        [
            "unit-eq",
            "unit_a.json",
            "unit_a.json",
            "unit_x.json",
            "unit_y.json",
            "--group",
            "sl",
            "--max-depth",
            "4",
            "--max-nodes",
            "200000"
        ],
        0,
        Verdict
    ),
    case!(
        "unit_eq_unknown",
        ["unit-eq", "unit_a.json", "unit_a.json", "unit_x.json", "unit_y2.json", "--max-nodes", "20000"],
        2,
        Verdict
    ),
    case!("kweb_chain_a", ["kweb", "chain_a.json"], 0, KWeb),
    case!("kweb_iso_yes", ["kweb", "chain_a.json", "chain_b.json"], 0, Verdict),
    case!("kweb_iso_no", ["kweb", "chain_a.json", "chain_c.json"], 1, Verdict),
    case!("rep_iso_no", ["rep-iso", "arrow.json", "rep_id.json", "rep_zero.json"], 1, Verdict),
    case!("rep_iso_yes", ["rep-iso", "arrow.json", "rep_z6_cyclic.json", "rep_z6.json"], 0, Verdict),
    case!("validate_budget", ["validate", "--schema", "budget", "budget.json"], 0, Validate),
    case!("validate_blocked", ["validate", "--schema", "blocked", "chain_a.json"], 0, Validate),
    case!("validate_quiver", ["validate", "--schema", "quiver", "arrow.json"], 0, Validate),
    case!("validate_kweb", ["validate", "--schema", "kweb", "expected/kweb_chain_a.json"], 0, Validate),
    case!("validate_verdict", ["validate", "--schema", "verdict", "expected/flow_eq_reducible.json"], 0, Validate),
    case!("validate_ragged", ["validate", "--schema", "matrix", "ragged.json"], 65, Error),
    case!("validate_negative_sft", ["validate", "--schema", "sft", "negative.json"], 65, Error),
    case!("truncated_input", ["ps", "truncated.json"], 65, Error),
    case!("missing_file", ["ps", "no_such_file.json"], 65, Error),
    case!("shape_mismatch", ["blocked-eq", "full2.json", "diag12.json"], 65, Error),
    case!("unknown_subcommand", ["bogus"], 64, Error),
    case!("zero_budget", ["ps", "--max-nodes", "0", "fib.json"], 64, Error),
    case!("bad_group", ["blocked-eq", "full2.json", "three.json", "--group", "so"], 64, Error),
];

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub struct Run {
    pub exit: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(args: &[&str]) -> Run {
    let out =
        Command::new(env!("CARGO_BIN_EXE_blockeq")).current_dir(golden_dir()).args(args).output().expect("binary runs");
    Run {
        exit: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).expect("utf-8"),
        stderr: String::from_utf8(out.stderr).expect("utf-8"),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SnfOut {
    #[serde(rename = "U")]
    u: IntMatrix,
    #[serde(rename = "S")]
    s: IntMatrix,
    #[serde(rename = "V")]
    v: IntMatrix,
    diagonal: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CokernelOut {
    cokernel: FgAbelianGroup,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BowenFranksOut {
    bowen_franks: FgAbelianGroup,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParrySullivanOut {
    parry_sullivan: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ValidateOut {
    schema: String,
    valid: bool,
}

fn reserialize<T: Serialize + DeserializeOwned>(text: &str) -> Result<String, String> {
    let value: T = serde_json::from_str(text).map_err(|e| e.to_string())?;
    serde_json::to_string(&value).map_err(|e| e.to_string())
}

/// Parses stdout as the typed document and serializes it again; the result
/// must equal the original bytes.
pub fn round_trip(kind: Kind, stdout: &str) -> Result<(), String> {
    if matches!(kind, Kind::Error) {
        return if stdout.is_empty() { Ok(()) } else { Err("unexpected stdout".into()) };
    }
    let text = stdout.strip_suffix('\n').ok_or("missing trailing newline")?;
    let again = match kind {
        Kind::Verdict => reserialize::<Verdict>(text)?,
        Kind::KWeb => reserialize::<KWebDocument>(text)?,
        Kind::Snf => reserialize::<SnfOut>(text)?,
        Kind::Cokernel => reserialize::<CokernelOut>(text)?,
        Kind::BowenFranks => reserialize::<BowenFranksOut>(text)?,
        Kind::ParrySullivan => reserialize::<ParrySullivanOut>(text)?,
        Kind::Validate => reserialize::<ValidateOut>(text)?,
        Kind::Error => unreachable!(),
    };
    if again == text {
        Ok(())
    } else {
        Err(format!("re-serialized form differs:\n{text}\n{again}"))
    }
}

/// Exit code implied by the embedded status, if the document has one.
pub fn status_exit(stdout: &str) -> Option<i32> {
    let v: serde_json::Value = serde_json::from_str(stdout).ok()?;
    Some(match v.get("status")?.as_str()? {
        "yes" => 0,
        "no" => 1,
        "unknown" => 2,
        other => panic!("unexpected status {other}"),
    })
}

/// Checks one case; returns a description of the first problem.
pub fn check(case: &Case) -> Result<(), String> {
    let r = run(case.args);
    if r.exit != case.exit {
        return Err(format!("exit {} (expected {}); stderr: {}", r.exit, case.exit, r.stderr));
    }
    round_trip(case.kind, &r.stdout)?;
    if let Some(code) = status_exit(&r.stdout) {
        if code != r.exit {
            return Err(format!("status implies exit {code}, got {}", r.exit));
        }
    }
    if matches!(case.kind, Kind::Error) {
        if r.stderr.trim().is_empty() {
            return Err("no diagnostic on stderr".into());
        }
        return Ok(());
    }
    let expected_path = golden_dir().join("expected").join(format!("{}.json", case.name));
    if std::env::var_os("BLESS").is_some() {
        std::fs::write(&expected_path, &r.stdout).map_err(|e| e.to_string())?;
    }
    let expected = std::fs::read_to_string(&expected_path).map_err(|e| format!("{}: {e}", expected_path.display()))?;
    if expected != r.stdout {
        return Err(format!("output differs from {}", expected_path.display()));
    }
    Ok(())
}
