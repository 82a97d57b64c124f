//! The `fintetris` command line.
//!
//! Exit codes: 0 for an affirmative result (witness found, number computed,
//! checks pass), 1 for a definitive negative (no witness, a bad coloring
//! exists, a check fails), 2 for usage, input or budget errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use fintetris::enumerate::{
    block_sequence_count, enum_block_sequences, enum_fin, enum_fin_upto, enum_surjections, fin_count,
    fin_upto_count, surjection_count, EnumConfig,
};
use fintetris::lps::{check_fin_instance, TableFile};
use fintetris::search::{
    export_cnf, exists_bad_coloring, find_witness, gowers_number, verify_blocks, Coloring, Engine, GowersOutcome,
    SearchConfig, SolverCommand,
};
use fintetris::subspace::{tetris_subspace, tetris_subspace_multidim};
use fintetris::{BlockSequence, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fintetris", version, about = "FIN_k tetris subspaces, Gowers-number search and layered partial semigroups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List FIN_k(n), FIN_<=k(n) or block sequences, or count them.
    Enumerate(EnumerateArgs),
    /// List the nondecreasing surjections {0..k} -> {0..j}.
    Surjections(SurjectionsArgs),
    /// Print the tetris subspace TS_j (or TS_j^[m]) of a block sequence.
    Subspace(SubspaceArgs),
    /// Check given blocks against a coloring, or search for a witness.
    Verify(VerifyArgs),
    /// Search for a witness of length l.
    Witness(WitnessArgs),
    /// Search for a coloring of FIN_<=k(n) with no witness of length l.
    BadColoring(BadColoringArgs),
    /// Write the DIMACS encoding of the bad-coloring question.
    ExportCnf(ExportCnfArgs),
    /// Least n for which every r-coloring of FIN_<=k(n) has a witness.
    Gowers(GowersArgs),
    /// Partial-semigroup, layering and tetris-action checks.
    #[command(subcommand)]
    Lps(LpsCommand),
}

#[derive(Debug, Subcommand)]
pub enum LpsCommand {
    /// Check a table read from a JSON file.
    Check(LpsCheckArgs),
    /// Build and check the FIN_<=k(n) instance.
    Fin(LpsFinArgs),
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=9))]
    pub k: u8,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    /// Every layer 1..=k instead of exactly k.
    #[arg(long, conflicts_with = "ell")]
    pub upto: bool,
    /// Emit block sequences of this length instead of vectors.
    #[arg(long = "l", alias = "ell", value_parser = clap::value_parser!(u64).range(1..))]
    pub ell: Option<u64>,
    #[arg(long)]
    pub limit: Option<usize>,
    /// Print only the count.
    #[arg(long)]
    pub count: bool,
}

#[derive(Debug, Args)]
pub struct SurjectionsArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=9))]
    pub k: u8,
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=9))]
    pub j: u8,
    #[arg(long)]
    pub count: bool,
}

#[derive(Debug, Args)]
pub struct SubspaceArgs {
    /// JSON file `{"k": .., "n": .., "blocks": ["200", "012"]}`.
    #[arg(long)]
    pub blocks: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=9))]
    pub j: u8,
    /// Tuple dimension.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub m: u64,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Worker threads; output does not depend on it.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=256))]
    pub jobs: u64,
    /// Disable prefix pruning in the witness search.
    #[arg(long)]
    pub no_prune: bool,
    #[arg(long)]
    pub max_colorings: Option<u128>,
    #[arg(long)]
    pub max_clauses: Option<u128>,
    #[arg(long)]
    pub max_sequences: Option<u128>,
}

impl SearchArgs {
    pub fn config(&self) -> SearchConfig {
        let d = SearchConfig::default();
        SearchConfig {
            jobs: self.jobs as usize,
            prune: !self.no_prune,
            max_colorings: self.max_colorings.unwrap_or(d.max_colorings),
            max_clauses: self.max_clauses.unwrap_or(d.max_clauses),
            max_sequences: self.max_sequences.unwrap_or(d.max_sequences),
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Coloring JSON file.
    #[arg(long)]
    pub coloring: PathBuf,
    /// Blocks JSON file to check.
    #[arg(long, conflicts_with = "ell", required_unless_present = "ell")]
    pub blocks: Option<PathBuf>,
    /// Search for a witness of this length instead.
    #[arg(long = "l", alias = "ell", value_parser = clap::value_parser!(u64).range(1..))]
    pub ell: Option<u64>,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[arg(long)]
    pub coloring: PathBuf,
    #[arg(long = "l", alias = "ell", value_parser = clap::value_parser!(u64).range(1..))]
    pub ell: u64,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineKind {
    Exhaustive,
    Cnf,
}

#[derive(Debug, Args)]
pub struct EngineArgs {
    #[arg(long, value_enum, default_value_t = EngineKind::Exhaustive)]
    pub engine: EngineKind,
    /// External DIMACS solver for `--engine cnf`, e.g. "kissat -q"; the CNF
    /// path is appended.
    #[arg(long)]
    pub solver: Option<String>,
}

impl EngineArgs {
    pub fn engine(&self) -> Result<Engine, Error> {
        match (self.engine, &self.solver) {
            (EngineKind::Exhaustive, _) => Ok(Engine::Exhaustive),
            (EngineKind::Cnf, Some(cmd)) => Ok(Engine::Cnf(SolverCommand::parse(cmd)?)),
            (EngineKind::Cnf, None) => Err(Error::InvalidParameter("--engine cnf needs --solver".into())),
        }
    }
}

#[derive(Debug, Args)]
pub struct Params {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=9))]
    pub k: u8,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..))]
    pub r: u8,
    #[arg(long = "l", alias = "ell", value_parser = clap::value_parser!(u64).range(1..))]
    pub ell: u64,
}

#[derive(Debug, Args)]
pub struct BadColoringArgs {
    #[command(flatten)]
    pub params: Params,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Write the coloring here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct ExportCnfArgs {
    #[command(flatten)]
    pub params: Params,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct GowersArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=9))]
    pub k: u8,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..))]
    pub r: u8,
    #[arg(long = "l", alias = "ell", value_parser = clap::value_parser!(u64).range(1..))]
    pub ell: u64,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_n: u64,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct LpsCheckArgs {
    #[arg(long)]
    pub table: PathBuf,
    /// Largest subset size for the adequacy checks.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub horizon: u64,
}

#[derive(Debug, Args)]
pub struct LpsFinArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=9))]
    pub k: u8,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub horizon: u64,
}

/// Block list file for `subspace` and `verify --blocks`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlocksFile {
    pub k: u8,
    #[serde(default)]
    pub n: Option<usize>,
    pub blocks: Vec<String>,
}

impl BlocksFile {
    pub fn read(path: &Path) -> Result<BlockSequence, Error> {
        let file: BlocksFile = serde_json::from_str(&read_text(path)?)?;
        let bs = BlockSequence::from_digits(&file.blocks, file.k as i64)?;
        if let Some(n) = file.n {
            if n != bs.n() {
                return Err(Error::DimensionMismatch(format!("file says n = {n}, blocks have {} digits", bs.n())));
            }
        }
        Ok(bs)
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("usage error");
            let _ = writeln!(err, "{line}");
            return EXIT_ERROR;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn exit_for(affirmative: bool) -> i32 {
    if affirmative {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn usize_arg(v: u64) -> usize {
    usize::try_from(v).unwrap_or(usize::MAX)
}

/// Runs one parsed command.
pub fn execute(command: &Command, out: &mut dyn Write) -> Result<i32, Error> {
    match command {
        Command::Enumerate(a) => enumerate(a, out),
        Command::Surjections(a) => {
            if a.count {
                writeln!(out, "{}", surjection_count(a.k, a.j))?;
            } else {
                for f in enum_surjections(a.k, a.j)? {
                    writeln!(out, "{f}")?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Subspace(a) => {
            let bs = BlocksFile::read(&a.blocks)?;
            if a.m == 1 {
                for v in tetris_subspace(&bs, a.j)? {
                    writeln!(out, "{v}")?;
                }
            } else {
                for t in tetris_subspace_multidim(&bs, a.j, usize_arg(a.m))? {
                    writeln!(out, "{t}")?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Verify(a) => {
            let c = read_coloring(&a.coloring)?;
            match (&a.blocks, a.ell) {
                (Some(path), _) => {
                    let report = verify_blocks(&c, &BlocksFile::read(path)?)?;
                    writeln!(out, "{report}")?;
                    Ok(exit_for(report.passed))
                }
                (None, Some(ell)) => witness(&c, usize_arg(ell), &a.search.config(), out),
                (None, None) => Err(Error::InvalidParameter("give --blocks or --l".into())),
            }
        }
        Command::Witness(a) => {
            let c = read_coloring(&a.coloring)?;
            witness(&c, usize_arg(a.ell), &a.search.config(), out)
        }
        Command::BadColoring(a) => {
            let p = &a.params;
            let found = exists_bad_coloring(
                p.k,
                usize_arg(p.n),
                p.r,
                usize_arg(p.ell),
                &a.engine.engine()?,
                &a.search.config(),
            )?;
            match found {
                None => {
                    writeln!(out, "none: every {}-coloring of FIN_<={}({}) has a witness of length {}", p.r, p.k, p.n, p.ell)?;
                    Ok(EXIT_OK)
                }
                Some(c) => {
                    match &a.out {
                        Some(path) => {
                            std::fs::write(path, c.to_json() + "\n")?;
                            writeln!(out, "bad coloring written to {}", path.display())?;
                        }
                        None => writeln!(out, "{}", c.to_json())?,
                    }
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::ExportCnf(a) => {
            let p = &a.params;
            let inst = export_cnf(p.k, usize_arg(p.n), p.r, usize_arg(p.ell), &a.search.config())?;
            let text = inst.to_dimacs();
            match &a.out {
                Some(path) => std::fs::write(path, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(EXIT_OK)
        }
        Command::Gowers(a) => {
            let outcome = gowers_number(
                a.k,
                a.r,
                usize_arg(a.ell),
                &a.engine.engine()?,
                usize_arg(a.max_n),
                &a.search.config(),
            )?;
            writeln!(out, "{outcome}")?;
            Ok(exit_for(matches!(outcome, GowersOutcome::Resolved(_))))
        }
        Command::Lps(LpsCommand::Check(a)) => {
            let spec = TableFile::from_json(&read_text(&a.table)?)?.build()?;
            let report = spec.check(usize_arg(a.horizon))?;
            writeln!(out, "{report}")?;
            Ok(exit_for(report.passed()))
        }
        Command::Lps(LpsCommand::Fin(a)) => {
            let report = check_fin_instance(a.k, usize_arg(a.n), usize_arg(a.horizon))?;
            writeln!(out, "{report}")?;
            Ok(exit_for(report.passed()))
        }
    }
}

fn read_text(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn read_coloring(path: &Path) -> Result<Coloring, Error> {
    Coloring::from_json(&read_text(path)?)
}

fn witness(c: &Coloring, ell: usize, cfg: &SearchConfig, out: &mut dyn Write) -> Result<i32, Error> {
    match find_witness(c, ell, cfg)? {
        Some(w) => {
            writeln!(out, "witness: {w}")?;
            Ok(EXIT_OK)
        }
        None => {
            writeln!(out, "no witness")?;
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn enumerate(a: &EnumerateArgs, out: &mut dyn Write) -> Result<i32, Error> {
    let cfg = EnumConfig {
        k: a.k,
        n: usize_arg(a.n),
        j: None,
        ell: a.ell.map(usize_arg),
        limit: a.limit,
    };
    cfg.validate()?;
    let limit = a.limit.unwrap_or(usize::MAX);
    if a.count {
        let count = match (cfg.ell, a.upto) {
            (Some(ell), _) => block_sequence_count(cfg.k, cfg.n, ell),
            (None, true) => fin_upto_count(cfg.k, cfg.n),
            (None, false) => fin_count(cfg.k, cfg.n),
        };
        writeln!(out, "{}", count.min(limit as u128))?;
        return Ok(EXIT_OK);
    }
    match (cfg.ell, a.upto) {
        (Some(ell), _) => {
            for bs in enum_block_sequences(cfg.k, cfg.n, ell)?.take(limit) {
                writeln!(out, "{bs}")?;
            }
        }
        (None, true) => {
            for v in enum_fin_upto(cfg.k, cfg.n)?.take(limit) {
                writeln!(out, "{v}")?;
            }
        }
        (None, false) => {
            for v in enum_fin(cfg.k, cfg.n)?.take(limit) {
                writeln!(out, "{v}")?;
            }
        }
    }
    Ok(EXIT_OK)
}
