use std::io::Write;
use std::process::{Command, Stdio};

use super::{parse_solver_result, EngineError, SolverAnswer};

/// Environment variable naming the external solver command, e.g. `z3 -in`.
pub const SOLVER_ENV: &str = "AUDIT_SOLVER_CMD";

pub fn solver_from_env() -> Option<String> {
    std::env::var(SOLVER_ENV)
        .ok()
        .filter(|s| !s.trim().is_empty())
}

/// Runs `cmd` (split on whitespace) with the script on stdin and parses its stdout.
pub fn run_solver(cmd: &str, script: &str) -> Result<SolverAnswer, EngineError> {
    let mut parts = cmd.split_whitespace();
    let program = parts
        .next()
        .ok_or_else(|| EngineError::Solver("empty solver command".into()))?;
    let mut child = Command::new(program)
        .args(parts)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| EngineError::Solver(format!("cannot start `{cmd}`: {e}")))?;
    child
        .stdin
        .take()
        .expect("stdin is piped")
        .write_all(script.as_bytes())
        .map_err(|e| EngineError::Solver(e.to_string()))?;
    let out = child
        .wait_with_output()
        .map_err(|e| EngineError::Solver(e.to_string()))?;
    parse_solver_result(&String::from_utf8_lossy(&out.stdout))
}
