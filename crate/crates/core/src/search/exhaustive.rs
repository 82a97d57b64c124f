//! Exhaustive search for a coloring without a witness.
//!
//! Colorings are visited in lexicographic order of their color vectors over
//! `FIN_{<=k}(n)` in `enum_fin_upto` order. Only restricted-growth vectors are
//! visited (each new color is the smallest unused one): relabeling colors by
//! first appearance maps any bad coloring to a lexicographically smaller or
//! equal bad one, so the first bad coloring is always of that form. A branch
//! is abandoned once some block sequence whose elements are all colored is a
//! witness, since every completion then has that witness.

use rayon::prelude::*;

use crate::enumerate::{block_sequence_count, enum_fin_upto, fin_upto_count};
use crate::error::{Error, Result};
use crate::subspace::BlockSequence;

use super::universe::Universe;
use super::{find_witness, Coloring, SearchConfig};

/// One length-`ell` block sequence and the elements of each of its tetris
/// subspaces, as indices into `enum_fin_upto` order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessConstraint {
    pub blocks: BlockSequence,
    /// `layers[j - 1]`: sorted element indices of `TS_j(blocks)`.
    pub layers: Vec<Vec<u32>>,
}

fn check_params(k: u8, n: usize, r: u8, ell: usize) -> Result<()> {
    crate::enumerate::check_kn(k, n)?;
    if r < 1 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    if ell < 1 {
        return Err(Error::InvalidParameter("ell must be at least 1".into()));
    }
    Ok(())
}

/// Every length-`ell` block sequence with its per-layer subspaces, in
/// enumeration order.
pub fn witness_constraints(k: u8, n: usize, ell: usize, cfg: &SearchConfig) -> Result<Vec<WitnessConstraint>> {
    crate::enumerate::check_kn(k, n)?;
    let count = block_sequence_count(k, n, ell);
    if count > cfg.max_sequences {
        return Err(Error::BudgetExceeded { what: "block sequences", size: count, limit: cfg.max_sequences });
    }
    let universe = Universe::new(k, n)?;
    let base = universe.base;
    let mut index = vec![u32::MAX; base.pow(n as u32) as usize];
    for (i, b) in enum_fin_upto(k, n)?.enumerate() {
        index[b.code(base) as usize] = i as u32;
    }
    let mut out = Vec::with_capacity(count as usize);
    if ell > n {
        return Ok(out);
    }
    universe.for_each_sequence(ell, &mut |chosen, sums| {
        let layers = (1..=k)
            .map(|j| {
                let mut idx: Vec<u32> = universe
                    .subspace_codes(sums, j)
                    .into_iter()
                    .map(|c| index[c as usize])
                    .collect();
                idx.sort_unstable();
                idx
            })
            .collect();
        out.push(WitnessConstraint { blocks: universe.sequence(chosen), layers });
        Ok(())
    })?;
    Ok(out)
}

struct Backtrack {
    r: u8,
    size: usize,
    constraints: Vec<WitnessConstraint>,
    /// `watch[e]`: constraints whose largest element index is `e`.
    watch: Vec<Vec<usize>>,
}

impl Backtrack {
    fn is_witness(&self, ci: usize, colors: &[u8]) -> bool {
        self.constraints[ci].layers.iter().all(|layer| {
            let c0 = colors[layer[0] as usize];
            layer.iter().all(|&e| colors[e as usize] == c0)
        })
    }

    fn admissible(&self, e: usize, colors: &[u8]) -> bool {
        self.watch[e].iter().all(|&ci| !self.is_witness(ci, colors))
    }

    fn dfs(&self, e: usize, used: u8, colors: &mut Vec<u8>) -> bool {
        if e == self.size {
            return true;
        }
        for c in 0..self.r.min(used + 1) {
            colors[e] = c;
            if self.admissible(e, colors) && self.dfs(e + 1, used.max(c + 1), colors) {
                return true;
            }
        }
        false
    }

    /// Restricted-growth prefixes of length `depth` that survive the watch
    /// checks, in lexicographic order.
    fn prefixes(&self, depth: usize) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        let mut colors = vec![0u8; self.size];
        self.collect_prefixes(0, 0, depth, &mut colors, &mut out);
        out
    }

    fn collect_prefixes(&self, e: usize, used: u8, depth: usize, colors: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if e == depth {
            out.push(colors[..depth].to_vec());
            return;
        }
        for c in 0..self.r.min(used + 1) {
            colors[e] = c;
            if self.admissible(e, colors) {
                self.collect_prefixes(e + 1, used.max(c + 1), depth, colors, out);
            }
        }
    }

    fn complete(&self, prefix: &[u8]) -> Option<Vec<u8>> {
        let mut colors = vec![0u8; self.size];
        colors[..prefix.len()].copy_from_slice(prefix);
        let used = prefix.iter().map(|&c| c + 1).max().unwrap_or(0);
        self.dfs(prefix.len(), used, &mut colors).then_some(colors)
    }
}

/// First coloring (in canonical order) of `FIN_{<=k}(n)` with `r` colors that
/// admits no length-`ell` witness, or `None` if every coloring admits one.
pub fn exists_bad_coloring_exhaustive(
    k: u8,
    n: usize,
    r: u8,
    ell: usize,
    cfg: &SearchConfig,
) -> Result<Option<Coloring>> {
    check_params(k, n, r, ell)?;
    let size = fin_upto_count(k, n);
    let space = (r as u128).checked_pow(size.min(u32::MAX as u128) as u32).unwrap_or(u128::MAX);
    if space > cfg.max_colorings {
        return Err(Error::BudgetExceeded { what: "colorings", size: space, limit: cfg.max_colorings });
    }
    let size = size as usize;
    let constraints = witness_constraints(k, n, ell, cfg)?;
    let mut watch = vec![Vec::new(); size];
    for (ci, c) in constraints.iter().enumerate() {
        let last = c.layers.iter().filter_map(|l| l.last()).max().copied().expect("nonempty layers");
        watch[last as usize].push(ci);
    }
    let bt = Backtrack { r, size, constraints, watch };

    let found = match cfg.pool()? {
        None => bt.complete(&[]),
        Some(pool) => {
            let mut depth = 0;
            let mut prefixes = bt.prefixes(0);
            while depth < size && !prefixes.is_empty() && prefixes.len() < 16 * cfg.jobs {
                depth += 1;
                prefixes = bt.prefixes(depth);
            }
            pool.install(|| prefixes.par_iter().find_map_first(|p| bt.complete(p)))
        }
    };
    let Some(colors) = found else {
        return Ok(None);
    };
    let coloring = Coloring::from_canonical(k, n, r, &colors)?;
    if let Some(w) = find_witness(&coloring, ell, &SearchConfig { jobs: 1, ..cfg.clone() })? {
        unreachable!("backtracking accepted a coloring with witness {w}");
    }
    Ok(Some(coloring))
}
