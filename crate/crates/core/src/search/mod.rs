//! Witnesses for the finitary Gowers statement: verification, witness search,
//! bad-coloring search (exhaustive or via CNF export) and Gowers numbers.

mod cnf;
mod coloring;
mod exhaustive;
mod solver;
mod universe;

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::subspace::{tetris_subspace, tetris_subspace_multidim, BlockSequence};

pub use cnf::{decode_cnf_model, export_cnf, CnfInstance, VarMeaning};
pub use coloring::{tuple_domain, Coloring, ColoringFile, MAX_DENSE_DOMAIN};
pub use exhaustive::{exists_bad_coloring_exhaustive, witness_constraints, WitnessConstraint};
pub use solver::{parse_solver_output, SolverCommand, SolverOutcome};

use universe::{Sums, Universe};

/// Knobs shared by the search entry points. Budgets are hard limits.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Worker threads; results do not depend on this.
    pub jobs: usize,
    /// Abandon a prefix once one of its tetris subspaces is bichromatic.
    pub prune: bool,
    pub max_colorings: u128,
    pub max_clauses: u128,
    pub max_sequences: u128,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            jobs: 1,
            prune: true,
            max_colorings: 1 << 40,
            max_clauses: 50_000_000,
            max_sequences: 2_000_000,
        }
    }
}

impl SearchConfig {
    pub(crate) fn pool(&self) -> Result<Option<rayon::ThreadPool>> {
        if self.jobs <= 1 {
            return Ok(None);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map(Some)
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))
    }
}

/// A block sequence together with the color each layer's tetris subspace takes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub blocks: BlockSequence,
    /// `per_layer_color[j - 1]` is the color of `TS_j`.
    pub per_layer_color: Vec<u8>,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.blocks)?;
        for (i, c) in self.per_layer_color.iter().enumerate() {
            write!(f, " | TS_{}:{c}", i + 1)?;
        }
        Ok(())
    }
}

/// Two elements of one tetris subspace with different colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conflict {
    pub layer: u8,
    pub first: String,
    pub first_color: u8,
    pub second: String,
    pub second_color: u8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub passed: bool,
    /// Color of `TS_j` up to the first conflict, `None` past it.
    pub per_layer_color: Vec<Option<u8>>,
    pub conflict: Option<Conflict>,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.conflict {
            None if self.passed => {
                f.write_str("pass")?;
                for (i, c) in self.per_layer_color.iter().enumerate() {
                    if let Some(c) = c {
                        write!(f, " TS_{}:{c}", i + 1)?;
                    }
                }
                Ok(())
            }
            None => f.write_str("fail: layer colors differ from the claimed ones"),
            Some(c) => write!(
                f,
                "fail: TS_{} contains {} (color {}) and {} (color {})",
                c.layer, c.first, c.first_color, c.second, c.second_color
            ),
        }
    }
}

fn check_params(c: &Coloring, bs: &BlockSequence) -> Result<()> {
    if bs.k() != c.k() || bs.n() != c.n() {
        return Err(Error::DimensionMismatch(format!(
            "blocks live in FIN_{}({}) but the coloring is on FIN_<={}({})",
            bs.k(),
            bs.n(),
            c.k(),
            c.n()
        )));
    }
    if bs.len() < c.m() {
        return Err(Error::InvalidParameter(format!(
            "{} blocks cannot generate {}-tuples",
            bs.len(),
            c.m()
        )));
    }
    Ok(())
}

/// Elements of `TS_j` (or `TS_j^[m]`) in the order they appear as the block
/// sequence grows: those generated by the first block, then those added by
/// the second, and so on; each increment sorted lexicographically.
fn growth_order(bs: &BlockSequence, j: u8, m: usize) -> Result<Vec<(String, crate::subspace::TupleElement)>> {
    let mut seen = BTreeSet::new();
    let mut order = Vec::new();
    for len in m..=bs.len() {
        let prefix = bs.prefix(len)?;
        let members = if m == 1 {
            tetris_subspace(&prefix, j)?
                .into_iter()
                .map(|v| crate::subspace::TupleElement::new(vec![v]))
                .collect::<Result<BTreeSet<_>>>()?
        } else {
            tetris_subspace_multidim(&prefix, j, m)?
        };
        for t in members {
            if seen.insert(t.clone()) {
                order.push((t.to_string(), t));
            }
        }
    }
    Ok(order)
}

/// Checks that each `TS_j(bs)` is monochromatic and reports the colors.
pub fn verify_blocks(c: &Coloring, bs: &BlockSequence) -> Result<VerifyReport> {
    check_params(c, bs)?;
    let mut per_layer_color = vec![None; c.k() as usize];
    for j in 1..=c.k() {
        let mut reference: Option<(String, u8)> = None;
        for (name, t) in growth_order(bs, j, c.m())? {
            let color = c.color_of_tuple(&t)?;
            match &reference {
                None => reference = Some((name, color)),
                Some((first, first_color)) if *first_color != color => {
                    return Ok(VerifyReport {
                        passed: false,
                        per_layer_color,
                        conflict: Some(Conflict {
                            layer: j,
                            first: first.clone(),
                            first_color: *first_color,
                            second: name,
                            second_color: color,
                        }),
                    });
                }
                Some(_) => {}
            }
        }
        per_layer_color[j as usize - 1] = reference.map(|(_, c)| c);
    }
    Ok(VerifyReport { passed: true, per_layer_color, conflict: None })
}

/// Checks a witness: every `TS_j` monochromatic in the claimed color.
pub fn verify_witness(c: &Coloring, w: &Witness) -> Result<VerifyReport> {
    let mut report = verify_blocks(c, &w.blocks)?;
    if report.passed {
        let claimed: Vec<Option<u8>> = w.per_layer_color.iter().map(|&x| Some(x)).collect();
        if claimed != report.per_layer_color {
            report.passed = false;
        }
    }
    Ok(report)
}

/// First length-`ell` block sequence (in enumeration order) all of whose
/// tetris subspaces are monochromatic.
pub fn find_witness(c: &Coloring, ell: usize, cfg: &SearchConfig) -> Result<Option<Witness>> {
    if ell < 1 {
        return Err(Error::InvalidParameter("ell must be at least 1".into()));
    }
    if ell < c.m() {
        return Err(Error::InvalidParameter(format!(
            "ell = {ell} blocks cannot generate {}-tuples",
            c.m()
        )));
    }
    let universe = Universe::new(c.k(), c.n())?;
    if ell > c.n() {
        return Ok(None);
    }
    let search = WitnessSearch { universe: &universe, coloring: c, ell, prune: cfg.prune };
    let roots: Vec<usize> = (0..universe.within[0]).filter(|&ci| universe.fits(ci, ell - 1)).collect();
    let run = |ci: &usize| search.search_root(*ci).transpose();
    let found = match cfg.pool()? {
        None => roots.iter().find_map(run),
        Some(pool) => pool.install(|| roots.par_iter().find_map_first(run)),
    };
    found.transpose()
}

struct WitnessSearch<'a> {
    universe: &'a Universe,
    coloring: &'a Coloring,
    ell: usize,
    prune: bool,
}

impl WitnessSearch<'_> {
    fn search_root(&self, ci: usize) -> Result<Option<Witness>> {
        let mut chosen = Vec::with_capacity(self.ell);
        let colors = vec![None; self.universe.k as usize];
        if self.coloring.m() == 1 {
            self.dfs_elements(ci, &self.universe.empty_sums(), &colors, &mut chosen)
        } else {
            self.dfs_tuples(ci, &mut chosen)
        }
    }

    /// Merges `codes` into the running per-layer color; `false` on a clash.
    fn absorb(&self, slot: &mut Option<u8>, codes: &[u64]) -> Result<bool> {
        for &code in codes {
            let color = self.coloring.color_by_code(code)?;
            match *slot {
                None => *slot = Some(color),
                Some(c) if c != color => return Ok(false),
                Some(_) => {}
            }
        }
        Ok(true)
    }

    fn dfs_elements(
        &self,
        ci: usize,
        sums: &Sums,
        colors: &[Option<u8>],
        chosen: &mut Vec<usize>,
    ) -> Result<Option<Witness>> {
        let u = self.universe;
        let (next, fresh) = u.extend(sums, ci);
        chosen.push(ci);
        let depth = chosen.len();
        let mut colors = colors.to_vec();
        let mut alive = true;
        if self.prune {
            for (li, codes) in fresh.iter().enumerate() {
                if !self.absorb(&mut colors[li], codes)? {
                    alive = false;
                    break;
                }
            }
        } else if depth == self.ell {
            for li in 0..u.k as usize {
                let codes = u.subspace_codes(&next, li as u8 + 1);
                if !self.absorb(&mut colors[li], &codes)? {
                    alive = false;
                    break;
                }
            }
        }
        if alive {
            if depth == self.ell {
                let per_layer_color = colors.iter().map(|c| c.expect("nonempty layer")).collect();
                let w = Witness { blocks: u.sequence(chosen), per_layer_color };
                chosen.pop();
                return Ok(Some(w));
            }
            let lo = u.next_lo(ci);
            for nci in 0..u.within[lo] {
                if !u.fits(nci, self.ell - depth - 1) {
                    continue;
                }
                if let Some(w) = self.dfs_elements(nci, &next, &colors, chosen)? {
                    chosen.pop();
                    return Ok(Some(w));
                }
            }
        }
        chosen.pop();
        Ok(None)
    }

    /// Tuple colorings: each prefix with at least `m` blocks is checked
    /// against the subspace generator directly.
    fn dfs_tuples(&self, ci: usize, chosen: &mut Vec<usize>) -> Result<Option<Witness>> {
        let u = self.universe;
        chosen.push(ci);
        let depth = chosen.len();
        let check = depth == self.ell || (self.prune && depth >= self.coloring.m());
        let mut result = None;
        let mut alive = true;
        if check {
            let report = verify_blocks(self.coloring, &u.sequence(chosen))?;
            alive = report.passed;
            if alive && depth == self.ell {
                result = Some(Witness {
                    blocks: u.sequence(chosen),
                    per_layer_color: report.per_layer_color.iter().map(|c| c.expect("nonempty")).collect(),
                });
            }
        }
        if alive && result.is_none() {
            let lo = u.next_lo(ci);
            for nci in 0..u.within[lo] {
                if !u.fits(nci, self.ell - depth - 1) {
                    continue;
                }
                if let Some(w) = self.dfs_tuples(nci, chosen)? {
                    result = Some(w);
                    break;
                }
            }
        }
        chosen.pop();
        Ok(result)
    }
}

/// How the existence of a bad coloring is decided for one `n`.
#[derive(Clone, Debug)]
pub enum Engine {
    Exhaustive,
    Cnf(SolverCommand),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GowersOutcome {
    Resolved(usize),
    Unresolved { max_n: usize },
}

impl fmt::Display for GowersOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GowersOutcome::Resolved(n) => write!(f, "{n}"),
            GowersOutcome::Unresolved { max_n } => write!(f, "unresolved (max n = {max_n})"),
        }
    }
}

/// Decides whether some `r`-coloring of `FIN_{<=k}(n)` has no length-`ell`
/// witness, returning one if so.
pub fn exists_bad_coloring(
    k: u8,
    n: usize,
    r: u8,
    ell: usize,
    engine: &Engine,
    cfg: &SearchConfig,
) -> Result<Option<Coloring>> {
    match engine {
        Engine::Exhaustive => exists_bad_coloring_exhaustive(k, n, r, ell, cfg),
        Engine::Cnf(solver) => solver::exists_bad_coloring_cnf(k, n, r, ell, solver, cfg),
    }
}

/// Least `n <= max_n` such that every `r`-coloring of `FIN_{<=k}(n)` admits a
/// length-`ell` witness. Every `n` is tested; monotonicity is not assumed.
pub fn gowers_number(
    k: u8,
    r: u8,
    ell: usize,
    engine: &Engine,
    max_n: usize,
    cfg: &SearchConfig,
) -> Result<GowersOutcome> {
    for n in 1..=max_n {
        if exists_bad_coloring(k, n, r, ell, engine, cfg)?.is_none() {
            return Ok(GowersOutcome::Resolved(n));
        }
    }
    Ok(GowersOutcome::Unresolved { max_n })
}
