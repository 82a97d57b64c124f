//! Block sequences and the tetris subspaces they generate.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::enumerate::enum_surjections;
use crate::error::{Error, Result};
use crate::fin::{FinVector, TetrisMap};

/// A nonempty list of `FIN_k` vectors with strictly increasing supports.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockSequence {
    blocks: Vec<FinVector>,
}

fn check_ordered(blocks: &[FinVector]) -> Result<()> {
    let first = blocks
        .first()
        .ok_or_else(|| Error::InvalidBlockSequence("no blocks".into()))?;
    for (i, b) in blocks.iter().enumerate() {
        if b.n() != first.n() || b.k_bound() != first.k_bound() {
            return Err(Error::InvalidBlockSequence(format!(
                "block {i} ({b}) does not share n = {} and k = {}",
                first.n(),
                first.k_bound()
            )));
        }
    }
    for (i, w) in blocks.windows(2).enumerate() {
        if w[0].max_support() >= w[1].min_support() {
            return Err(Error::InvalidBlockSequence(format!(
                "Supp({}) is not below Supp({}) at position {}",
                w[0],
                w[1],
                i + 1
            )));
        }
    }
    Ok(())
}

impl BlockSequence {
    pub fn new(blocks: Vec<FinVector>) -> Result<Self> {
        check_ordered(&blocks)?;
        let k = blocks[0].k_bound();
        if let Some(b) = blocks.iter().find(|b| b.layer() != k) {
            return Err(Error::InvalidBlockSequence(format!(
                "block {b} has layer {} but the sequence lives in FIN_{k}",
                b.layer()
            )));
        }
        Ok(Self { blocks })
    }

    /// Caller guarantees the invariants.
    pub(crate) fn from_ordered(blocks: Vec<FinVector>) -> Self {
        debug_assert!(Self::new(blocks.clone()).is_ok());
        Self { blocks }
    }

    pub fn from_digits<S: AsRef<str>>(digits: &[S], k: i64) -> Result<Self> {
        let blocks = digits
            .iter()
            .map(|d| FinVector::from_digits(d.as_ref(), k))
            .collect::<Result<Vec<_>>>()?;
        Self::new(blocks)
    }

    pub fn blocks(&self) -> &[FinVector] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn k(&self) -> u8 {
        self.blocks[0].k_bound()
    }

    pub fn n(&self) -> usize {
        self.blocks[0].n()
    }

    /// The first `len` blocks.
    pub fn prefix(&self, len: usize) -> Result<BlockSequence> {
        if len == 0 || len > self.len() {
            return Err(Error::InvalidParameter(format!(
                "prefix length {len} outside 1..={}",
                self.len()
            )));
        }
        Ok(Self { blocks: self.blocks[..len].to_vec() })
    }

    fn range(&self, lo: usize, hi: usize) -> &[FinVector] {
        &self.blocks[lo..hi]
    }
}

impl fmt::Display for BlockSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

pub fn is_block_sequence(blocks: &[FinVector]) -> bool {
    BlockSequence::new(blocks.to_vec()).is_ok()
}

/// An element of `FIN^[m]`: `m` vectors with strictly increasing supports.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TupleElement {
    parts: Vec<FinVector>,
}

impl TupleElement {
    pub fn new(parts: Vec<FinVector>) -> Result<Self> {
        check_ordered(&parts)?;
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[FinVector] {
        &self.parts
    }

    pub fn m(&self) -> usize {
        self.parts.len()
    }

    /// Common layer of the parts, if they share one.
    pub fn layer(&self) -> Option<u8> {
        let l = self.parts[0].layer();
        self.parts.iter().all(|p| p.layer() == l).then_some(l)
    }

    /// Parses `"10/01"` style encodings.
    pub fn from_digits(s: &str, k: i64) -> Result<Self> {
        let parts = s
            .split('/')
            .map(|d| FinVector::from_digits(d, k))
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

impl fmt::Display for TupleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Distinct nonzero images of each block, indexed `[block][j' - 1]`.
fn image_table(blocks: &[FinVector], j: u8) -> Result<Vec<Vec<Vec<Vec<u8>>>>> {
    let k = blocks[0].k_bound();
    let maps: Vec<Vec<TetrisMap>> = (1..=j)
        .map(|jj| enum_surjections(k, jj).map(Iterator::collect))
        .collect::<Result<_>>()?;
    Ok(blocks
        .iter()
        .map(|b| {
            maps.iter()
                .map(|fs| {
                    let mut seen = BTreeSet::new();
                    for f in fs {
                        seen.insert(b.values().iter().map(|&v| f.value(v)).collect::<Vec<u8>>());
                    }
                    seen.into_iter().collect()
                })
                .collect()
        })
        .collect())
}

/// Raw value arrays of `TS_j(blocks)`.
fn subspace_raw(blocks: &[FinVector], j: u8) -> Result<HashSet<Vec<u8>>> {
    let images = image_table(blocks, j)?;
    let n = blocks[0].n();
    let count = blocks.len();
    let mut out = HashSet::new();
    let mut coeffs = vec![0u8; count];
    loop {
        // odometer over {0..j}^count, last coordinate fastest
        let mut pos = count;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            if coeffs[pos] < j {
                coeffs[pos] += 1;
                break;
            }
            coeffs[pos] = 0;
        }
        if !coeffs.contains(&j) {
            continue;
        }
        let active: Vec<usize> = (0..count).filter(|&i| coeffs[i] > 0).collect();
        let mut choice = vec![0usize; active.len()];
        loop {
            let mut sum = vec![0u8; n];
            for (slot, &i) in active.iter().enumerate() {
                let img = &images[i][coeffs[i] as usize - 1][choice[slot]];
                for (s, &v) in sum.iter_mut().zip(img) {
                    *s += v;
                }
            }
            out.insert(sum);
            let mut slot = active.len();
            let mut carried = true;
            while slot > 0 {
                slot -= 1;
                let i = active[slot];
                if choice[slot] + 1 < images[i][coeffs[i] as usize - 1].len() {
                    choice[slot] += 1;
                    carried = false;
                    break;
                }
                choice[slot] = 0;
            }
            if carried {
                break;
            }
        }
    }
}

fn check_layer(k: u8, j: u8) -> Result<()> {
    if j < 1 || j > k {
        return Err(Error::InvalidParameter(format!("need 1 <= j <= k = {k}, got j = {j}")));
    }
    Ok(())
}

/// `TS_j(bs)`: all sums `f_0∘b_0 + ... + f_{N-1}∘b_{N-1}` with `f_i` a
/// surjection onto `{0..j_i}`, `j_i <= j` and `max j_i = j`. Coefficient
/// `j_i = 0` drops block `i`. Members carry the sequence's bound `k`.
pub fn tetris_subspace(bs: &BlockSequence, j: u8) -> Result<BTreeSet<FinVector>> {
    check_layer(bs.k(), j)?;
    to_vectors(subspace_raw(bs.blocks(), j)?, bs.k())
}

fn to_vectors(raw: HashSet<Vec<u8>>, k: u8) -> Result<BTreeSet<FinVector>> {
    raw.into_iter().map(|v| FinVector::from_raw(v, k)).collect()
}

/// `TS_j(bs)^[m]`: tuples `(a_0, ..., a_{m-1})` where, for cut points
/// `0 = n_0 < n_1 < ... < n_m <= N`, each `a_d` is an element of
/// `TS_j(b_{n_d}, ..., b_{n_{d+1}-1})`. Blocks past `n_m` are unused.
pub fn tetris_subspace_multidim(bs: &BlockSequence, j: u8, m: usize) -> Result<BTreeSet<TupleElement>> {
    check_layer(bs.k(), j)?;
    if m < 1 || m > bs.len() {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= m <= {} blocks, got m = {m}",
            bs.len()
        )));
    }
    let total = bs.len();
    let mut interval: BTreeMap<(usize, usize), Vec<FinVector>> = BTreeMap::new();
    for lo in 0..total {
        for hi in lo + 1..=total {
            let set = to_vectors(subspace_raw(bs.range(lo, hi), j)?, bs.k())?;
            interval.insert((lo, hi), set.into_iter().collect());
        }
    }
    let mut out = BTreeSet::new();
    let mut parts = Vec::with_capacity(m);
    extend_tuples(&interval, total, m, 0, &mut parts, &mut out);
    Ok(out)
}

fn extend_tuples(
    interval: &BTreeMap<(usize, usize), Vec<FinVector>>,
    total: usize,
    m: usize,
    lo: usize,
    parts: &mut Vec<FinVector>,
    out: &mut BTreeSet<TupleElement>,
) {
    if parts.len() == m {
        out.insert(TupleElement { parts: parts.clone() });
        return;
    }
    let remaining = m - parts.len();
    for hi in lo + 1..=total + 1 - remaining {
        for a in &interval[&(lo, hi)] {
            parts.push(a.clone());
            extend_tuples(interval, total, m, hi, parts, out);
            parts.pop();
        }
    }
}

/// Every composite `T_{i_1} ∘ ... ∘ T_{i_{k-j}}` descending from level `k` to `j`.
pub fn composite_maps(k: u8, j: u8) -> Result<BTreeSet<TetrisMap>> {
    if j > k || k > crate::fin::MAX_BOUND {
        return Err(Error::InvalidParameter(format!("need 0 <= j <= k <= 9, got k = {k}, j = {j}")));
    }
    let mut level = BTreeSet::from([TetrisMap::identity(k)]);
    for top in (j + 1..=k).rev() {
        let basics: Vec<TetrisMap> = (1..=top).map(|i| TetrisMap::basic(i, top)).collect::<Result<_>>()?;
        let mut next = BTreeSet::new();
        for f in &level {
            for t in &basics {
                next.insert(t.compose(f)?);
            }
        }
        level = next;
    }
    Ok(level)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(d: &[&str], k: i64) -> BlockSequence {
        BlockSequence::from_digits(d, k).unwrap()
    }

    fn strings<T: ToString>(s: &BTreeSet<T>) -> Vec<String> {
        s.iter().map(T::to_string).collect()
    }

    fn v(d: &str, k: i64) -> FinVector {
        FinVector::from_digits(d, k).unwrap()
    }

    #[test]
    fn block_sequence_predicate() {
        assert!(is_block_sequence(&[v("20", 2), v("02", 2)]));
        assert!(!is_block_sequence(&[v("02", 2), v("20", 2)]));
        assert!(is_block_sequence(&[v("11", 1)]));
        assert!(!is_block_sequence(&[]));
        assert!(!is_block_sequence(&[v("10", 2), v("02", 2)]));
        assert!(!is_block_sequence(&[v("20", 2), v("001", 1)]));
    }

    #[test]
    fn subspace_examples() {
        let b = bs(&["20", "02"], 2);
        assert_eq!(strings(&tetris_subspace(&b, 2).unwrap()), ["02", "12", "20", "21", "22"]);
        assert_eq!(strings(&tetris_subspace(&b, 1).unwrap()), ["01", "10", "11"]);
        let h = bs(&["10", "01"], 1);
        assert_eq!(strings(&tetris_subspace(&h, 1).unwrap()), ["01", "10", "11"]);
        assert!(tetris_subspace(&b, 3).is_err());
        assert!(tetris_subspace(&b, 0).is_err());
    }

    #[test]
    fn multidim_collapses_at_m1() {
        let b = bs(&["2000", "0120", "0002"], 2);
        for j in 1..=2 {
            let flat = tetris_subspace(&b, j).unwrap();
            let tuples = tetris_subspace_multidim(&b, j, 1).unwrap();
            let firsts: BTreeSet<FinVector> = tuples.iter().map(|t| t.parts()[0].clone()).collect();
            assert_eq!(firsts, flat);
            assert!(tuples.iter().all(|t| t.m() == 1));
        }
    }

    #[test]
    fn milliken_taylor_pairs() {
        let b = bs(&["100", "010", "001"], 1);
        let got = strings(&tetris_subspace_multidim(&b, 1, 2).unwrap());
        assert_eq!(
            got,
            ["010/001", "100/001", "100/010", "100/011", "110/001"]
        );
        assert!(tetris_subspace_multidim(&b, 1, 4).is_err());
    }

    #[test]
    fn composite_examples() {
        assert_eq!(strings(&composite_maps(2, 1).unwrap()), ["0,0,1", "0,1,1"]);
        assert_eq!(composite_maps(3, 3).unwrap(), BTreeSet::from([TetrisMap::identity(3)]));
        assert_eq!(strings(&composite_maps(2, 0).unwrap()), ["0,0,0"]);
        assert!(composite_maps(1, 2).is_err());
    }

    #[test]
    fn tuple_parsing() {
        let t = TupleElement::from_digits("10/01", 1).unwrap();
        assert_eq!(t.to_string(), "10/01");
        assert_eq!(t.layer(), Some(1));
        assert!(TupleElement::from_digits("01/10", 1).is_err());
    }
}
