//! The JSON report written by `--json` and the exit-code convention.

use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA: u32 = 1;

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// The command completed and every checked property holds.
    Completed,
    /// A property was refuted; the report carries the witness.
    Refuted,
    /// Bad input, unresolved reference, failed validation or a tripped guard.
    InputError,
    /// A bounded search ran out before deciding.
    Unknown,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Completed => 0,
            Status::Refuted => 1,
            Status::InputError => 2,
            Status::Unknown => 3,
        }
    }
}

/// How far a verdict reaches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Exact,
    Bounded,
    Unknown,
}

/// Certificates replayed by `--verify`.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Verification {
    pub replayed: usize,
    pub failures: Vec<String>,
}

impl Verification {
    pub fn check(&mut self, label: impl FnOnce() -> String, outcome: std::result::Result<(), String>) {
        self.replayed += 1;
        if let Err(e) = outcome {
            self.failures.push(format!("{}: {e}", label()));
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// What a command produced, before it is printed or serialized.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: Status,
    pub verdict: String,
    pub scope: Scope,
    pub lines: Vec<String>,
    pub result: Value,
    pub verification: Option<Verification>,
    pub dot: Option<String>,
}

impl Outcome {
    pub fn new(status: Status, verdict: impl Into<String>, scope: Scope) -> Outcome {
        Outcome {
            status,
            verdict: verdict.into(),
            scope,
            lines: Vec::new(),
            result: Value::Null,
            verification: None,
            dot: None,
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }
}

pub fn digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

pub struct Envelope<'a> {
    pub command: &'a [String],
    pub input: Option<(&'a str, &'a [u8])>,
    pub seed: Option<u64>,
    pub wall_time_ms: f64,
}

pub fn render(env: &Envelope, outcome: &Outcome) -> Value {
    json!({
        "schema": SCHEMA,
        "command": env.command,
        "input": env.input.map(|(path, bytes)| json!({ "path": path, "sha256": digest(bytes) })),
        "seed": env.seed,
        "status": outcome.status,
        "exit_code": outcome.status.code(),
        "verdict": outcome.verdict,
        "scope": outcome.scope,
        "result": outcome.result,
        "verification": outcome.verification,
        "wall_time_ms": env.wall_time_ms,
    })
}

pub fn render_error(env: &Envelope, message: &str) -> Value {
    json!({
        "schema": SCHEMA,
        "command": env.command,
        "input": env.input.map(|(path, bytes)| json!({ "path": path, "sha256": digest(bytes) })),
        "seed": env.seed,
        "status": Status::InputError,
        "exit_code": Status::InputError.code(),
        "error": message,
        "wall_time_ms": env.wall_time_ms,
    })
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomically(path: &Path, contents: &str) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = Path::new(&tmp);
    std::fs::write(tmp, contents)?;
    std::fs::rename(tmp, path)
}
