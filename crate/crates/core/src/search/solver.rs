//! Bridge to an external DIMACS solver.

use std::io::Write as _;
use std::process::Command;

use crate::error::{Error, Result};

use super::cnf::{decode_cnf_model, export_cnf};
use super::{find_witness, Coloring, SearchConfig};

/// A solver invocation; the DIMACS path is appended as the last argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverCommand {
    pub program: String,
    pub args: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverOutcome {
    Sat(Vec<i32>),
    Unsat,
}

impl SolverCommand {
    /// Splits a command line on whitespace, e.g. `"kissat -q"`.
    pub fn parse(line: &str) -> Result<Self> {
        let mut words = line.split_whitespace().map(str::to_owned);
        let program = words
            .next()
            .ok_or_else(|| Error::InvalidParameter("empty solver command".into()))?;
        Ok(Self { program, args: words.collect() })
    }

    pub fn run(&self, dimacs_path: &std::path::Path) -> Result<SolverOutcome> {
        let output = Command::new(&self.program)
            .args(&self.args)
            .arg(dimacs_path)
            .output()
            .map_err(|e| Error::Solver(format!("cannot run {}: {e}", self.program)))?;
        let stdout = String::from_utf8_lossy(&output.stdout);
        parse_solver_output(&stdout).map_err(|e| match e {
            Error::Solver(msg) => Error::Solver(format!("{msg} (exit status {})", output.status)),
            other => other,
        })
    }

    pub fn solve(&self, dimacs: &str) -> Result<SolverOutcome> {
        let mut file = tempfile::Builder::new().suffix(".cnf").tempfile()?;
        file.write_all(dimacs.as_bytes())?;
        file.flush()?;
        self.run(file.path())
    }
}

/// Reads a verdict line (`s SATISFIABLE`, `SAT`, `s UNSATISFIABLE`, `UNSAT`)
/// and, for SAT, the `v` lines of the model.
pub fn parse_solver_output(stdout: &str) -> Result<SolverOutcome> {
    let mut verdict = None;
    let mut model = Vec::new();
    let mut terminated = false;
    for line in stdout.lines() {
        let line = line.trim();
        let body = line.strip_prefix("s ").unwrap_or(line);
        match body {
            "SAT" | "SATISFIABLE" => verdict = Some(true),
            "UNSAT" | "UNSATISFIABLE" => verdict = Some(false),
            _ => {}
        }
        if let Some(rest) = line.strip_prefix("v ").or_else(|| (line == "v").then_some("")) {
            for tok in rest.split_whitespace() {
                let lit: i32 = tok
                    .parse()
                    .map_err(|_| Error::Solver(format!("bad literal {tok:?} in model")))?;
                if lit == 0 {
                    terminated = true;
                } else {
                    model.push(lit);
                }
            }
        }
    }
    match verdict {
        Some(false) => Ok(SolverOutcome::Unsat),
        Some(true) if model.is_empty() && !terminated => Err(Error::Solver("SAT verdict without a model".into())),
        Some(true) => Ok(SolverOutcome::Sat(model)),
        None => Err(Error::Solver("no SAT/UNSAT verdict in solver output".into())),
    }
}

pub(crate) fn exists_bad_coloring_cnf(
    k: u8,
    n: usize,
    r: u8,
    ell: usize,
    solver: &SolverCommand,
    cfg: &SearchConfig,
) -> Result<Option<Coloring>> {
    let inst = export_cnf(k, n, r, ell, cfg)?;
    match solver.solve(&inst.to_dimacs())? {
        SolverOutcome::Unsat => Ok(None),
        SolverOutcome::Sat(model) => {
            let coloring = decode_cnf_model(&inst, &model)?;
            if let Some(w) = find_witness(&coloring, ell, cfg)? {
                return Err(Error::Solver(format!("decoded model is not a bad coloring: witness {w}")));
            }
            Ok(Some(coloring))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_parsing() {
        assert_eq!(parse_solver_output("c hi\ns UNSATISFIABLE\n").unwrap(), SolverOutcome::Unsat);
        assert_eq!(parse_solver_output("UNSAT\n").unwrap(), SolverOutcome::Unsat);
        assert_eq!(
            parse_solver_output("s SATISFIABLE\nv 1 -2\nv 3 0\n").unwrap(),
            SolverOutcome::Sat(vec![1, -2, 3])
        );
        assert_eq!(parse_solver_output("SAT\nv 0\n").unwrap(), SolverOutcome::Sat(vec![]));
        assert!(parse_solver_output("SAT\n").is_err());
        assert!(parse_solver_output("nothing\n").is_err());
        assert!(parse_solver_output("s SATISFIABLE\nv 1 x 0\n").is_err());
    }

    #[test]
    fn command_parsing() {
        let c = SolverCommand::parse("kissat -q  --relaxed").unwrap();
        assert_eq!(c.program, "kissat");
        assert_eq!(c.args, ["-q", "--relaxed"]);
        assert!(SolverCommand::parse("  ").is_err());
    }

    #[test]
    fn missing_program_is_a_solver_error() {
        let c = SolverCommand::parse("/nonexistent/solver-binary").unwrap();
        assert!(matches!(c.solve("p cnf 0 0\n"), Err(Error::Solver(_))));
    }
}
