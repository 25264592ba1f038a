//! External SAT solvers driven through DIMACS files.
//!
//! The command is a whitespace-separated template. `{input}` is replaced by
//! the path of the CNF file and `{output}` by a result file the solver is
//! expected to write; without `{input}` the path is appended. The answer is
//! read from the result file when `{output}` is present, otherwise from
//! standard output. Two dialects are understood:
//!
//! * MiniSat result files: a `SAT` / `UNSAT` line followed by the model.
//! * Competition output: `s SATISFIABLE` / `s UNSATISFIABLE` and `v` lines.

use std::io::Write as _;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use super::cnf::{Assignment, CnfInstance};
use super::sat::SatOutcome;
use super::OctError;

pub const SOLVER_ENV: &str = "DIMDRAW_SAT_SOLVER";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalSolver {
    pub command: Vec<String>,
    pub timeout: Option<Duration>,
}

impl ExternalSolver {
    pub fn new(template: &str) -> Self {
        ExternalSolver {
            command: template.split_whitespace().map(str::to_string).collect(),
            timeout: None,
        }
    }

    pub fn from_env() -> Option<Self> {
        std::env::var(SOLVER_ENV).ok().filter(|s| !s.trim().is_empty()).map(|s| Self::new(&s))
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = Some(timeout);
        self
    }

    pub fn solve(&self, cnf: &CnfInstance) -> Result<SatOutcome, OctError> {
        let fail = |msg: String| OctError::BackendFailure(msg);
        if self.command.is_empty() {
            return Err(fail("empty solver command".into()));
        }
        let dir = tempfile::tempdir().map_err(|e| fail(format!("temp dir: {e}")))?;
        let input = dir.path().join("instance.cnf");
        let output = dir.path().join("result.txt");
        std::fs::File::create(&input)
            .and_then(|mut f| f.write_all(cnf.to_dimacs().as_bytes()))
            .map_err(|e| fail(format!("writing CNF: {e}")))?;

        let input_s = input.to_string_lossy().into_owned();
        let output_s = output.to_string_lossy().into_owned();
        let mut uses_input = false;
        let mut uses_output = false;
        let mut args: Vec<String> = self.command[1..]
            .iter()
            .map(|a| {
                uses_input |= a.contains("{input}");
                uses_output |= a.contains("{output}");
                a.replace("{input}", &input_s).replace("{output}", &output_s)
            })
            .collect();
        if !uses_input {
            args.push(input_s);
        }

        let mut child = Command::new(&self.command[0])
            .args(&args)
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| fail(format!("spawning `{}`: {e}", self.command[0])))?;

        // Drain stdout on a thread so a chatty solver cannot block on a full pipe.
        let mut stdout = child.stdout.take().expect("piped stdout");
        let reader = std::thread::spawn(move || {
            let mut buf = String::new();
            let _ = std::io::Read::read_to_string(&mut stdout, &mut buf);
            buf
        });

        let start = Instant::now();
        let status = loop {
            match child.try_wait().map_err(|e| fail(format!("waiting: {e}")))? {
                Some(status) => break status,
                None => {
                    if self.timeout.is_some_and(|t| start.elapsed() > t) {
                        let _ = child.kill();
                        let _ = child.wait();
                        return Err(fail("solver timed out".into()));
                    }
                    std::thread::sleep(Duration::from_millis(2));
                }
            }
        };
        let stdout = reader.join().unwrap_or_default();
        let text = if uses_output {
            std::fs::read_to_string(&output).map_err(|e| fail(format!("reading result: {e}")))?
        } else {
            stdout
        };
        parse_solver_output(&text, cnf.num_vars()).ok_or_else(|| {
            fail(format!(
                "unrecognised solver output (exit status {status}): {}",
                text.lines().next().unwrap_or("")
            ))
        })
    }
}

/// Normalises either supported output dialect.
pub fn parse_solver_output(text: &str, num_vars: usize) -> Option<SatOutcome> {
    let mut verdict: Option<bool> = None;
    let mut lits = Vec::new();
    let mut bare_model = false;
    for line in text.lines().map(str::trim) {
        match line {
            "SAT" | "SATISFIABLE" | "s SATISFIABLE" => {
                verdict = Some(true);
                bare_model = line == "SAT";
            }
            "UNSAT" | "UNSATISFIABLE" | "s UNSATISFIABLE" => verdict = Some(false),
            _ => {
                let body = if let Some(rest) = line.strip_prefix("v ") {
                    Some(rest)
                } else if bare_model && verdict == Some(true) {
                    Some(line)
                } else {
                    None
                };
                if let Some(body) = body {
                    for tok in body.split_whitespace() {
                        lits.push(tok.parse::<i32>().ok()?);
                    }
                }
            }
        }
    }
    match verdict? {
        false => Some(SatOutcome::Unsat),
        true => Some(SatOutcome::Sat(Assignment::from_literals(num_vars, lits))),
    }
}
