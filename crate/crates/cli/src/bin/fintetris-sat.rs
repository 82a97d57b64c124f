//! Minimal DIMACS solver front end over varisat, speaking the usual
//! competition output format: `s SATISFIABLE` plus `v` lines (exit 10) or
//! `s UNSATISFIABLE` (exit 20).

use std::fs::File;
use std::io::{BufReader, Write};

use varisat::dimacs::DimacsParser;
use varisat::Solver;

fn fail(msg: impl std::fmt::Display) -> ! {
    eprintln!("fintetris-sat: {msg}");
    std::process::exit(1);
}

fn main() {
    let Some(path) = std::env::args_os().nth(1) else {
        fail("usage: fintetris-sat <file.cnf>");
    };
    let file = File::open(&path).unwrap_or_else(|e| fail(e));
    let formula = DimacsParser::parse(BufReader::new(file)).unwrap_or_else(|e| fail(e));
    let mut solver = Solver::new();
    solver.add_formula(&formula);
    let sat = solver.solve().unwrap_or_else(|e| fail(e));

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if !sat {
        let _ = writeln!(out, "s UNSATISFIABLE");
        let _ = out.flush();
        std::process::exit(20);
    }
    // variables absent from every clause are reported false
    let mut value = vec![false; formula.var_count() + 1];
    for lit in solver.model().unwrap_or_default() {
        let v = lit.to_dimacs();
        if let Some(slot) = value.get_mut(v.unsigned_abs()) {
            *slot = v > 0;
        }
    }
    let _ = writeln!(out, "s SATISFIABLE");
    let lits: Vec<String> = (1..value.len())
        .map(|v| if value[v] { v.to_string() } else { format!("-{v}") })
        .collect();
    for chunk in lits.chunks(16) {
        let _ = writeln!(out, "v {}", chunk.join(" "));
    }
    let _ = writeln!(out, "v 0");
    let _ = out.flush();
    std::process::exit(10);
}
