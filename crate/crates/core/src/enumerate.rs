//! Lazy, deterministic generators for `FIN_k(n)`, tetris maps and block
//! sequences, with closed-form counts.

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fin::{FinVector, TetrisMap, MAX_BOUND};
use crate::subspace::BlockSequence;

/// Parameters shared by the enumeration entry points.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnumConfig {
    pub k: u8,
    pub n: usize,
    pub j: Option<u8>,
    pub ell: Option<usize>,
    pub limit: Option<usize>,
}

impl EnumConfig {
    pub fn validate(&self) -> Result<()> {
        check_kn(self.k, self.n)?;
        if let Some(j) = self.j {
            if j < 1 || j > self.k {
                return Err(Error::InvalidParameter(format!("need 1 <= j <= k, got j = {j}")));
            }
        }
        if self.ell == Some(0) {
            return Err(Error::InvalidParameter("ell must be at least 1".into()));
        }
        Ok(())
    }
}

pub(crate) fn check_kn(k: u8, n: usize) -> Result<()> {
    if !(1..=MAX_BOUND).contains(&k) {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= {MAX_BOUND}, got {k}")));
    }
    if n < 1 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    Ok(())
}

/// Vectors of layer exactly `layer` over `n` coordinates that vanish below
/// `lo`, in lexicographic order of their digit strings.
#[derive(Clone, Debug)]
pub struct VectorIter {
    digits: Vec<u8>,
    lo: usize,
    layer: u8,
    k_bound: u8,
    done: bool,
}

impl VectorIter {
    pub(crate) fn new(layer: u8, n: usize, lo: usize, k_bound: u8) -> Self {
        Self {
            digits: vec![0; n],
            lo,
            layer,
            k_bound,
            done: lo >= n,
        }
    }

    fn advance(&mut self) -> bool {
        for pos in (self.lo..self.digits.len()).rev() {
            if self.digits[pos] < self.layer {
                self.digits[pos] += 1;
                return true;
            }
            self.digits[pos] = 0;
        }
        false
    }
}

impl Iterator for VectorIter {
    type Item = FinVector;

    fn next(&mut self) -> Option<FinVector> {
        while !self.done {
            if !self.advance() {
                self.done = true;
                break;
            }
            if self.digits.contains(&self.layer) {
                return FinVector::from_raw(self.digits.clone(), self.k_bound).ok();
            }
        }
        None
    }
}

/// `FIN_k(n)` in lexicographic order.
pub fn enum_fin(k: u8, n: usize) -> Result<VectorIter> {
    check_kn(k, n)?;
    Ok(VectorIter::new(k, n, 0, k))
}

/// `FIN_{<=k}(n)`: `FIN_1(n)`, then `FIN_2(n)`, ..., each block lexicographic,
/// all vectors carrying bound `k`.
pub fn enum_fin_upto(k: u8, n: usize) -> Result<impl Iterator<Item = FinVector>> {
    check_kn(k, n)?;
    Ok((1..=k).flat_map(move |j| VectorIter::new(j, n, 0, k)))
}

/// Nondecreasing surjections `{0..k} -> {0..j}`, lexicographic in their images.
#[derive(Clone, Debug)]
pub struct Surjections {
    steps: Vec<bool>,
    fresh: bool,
}

impl Iterator for Surjections {
    type Item = TetrisMap;

    fn next(&mut self) -> Option<TetrisMap> {
        if self.fresh {
            self.fresh = false;
            return Some(TetrisMap::from_steps(&self.steps));
        }
        // next lexicographic arrangement of the 0/1 step multiset
        let s = &mut self.steps;
        let pivot = (0..s.len().saturating_sub(1)).rev().find(|&i| !s[i] && s[i + 1])?;
        s.swap(pivot, pivot + 1);
        s[pivot + 1..].sort();
        Some(TetrisMap::from_steps(s))
    }
}

pub fn enum_surjections(k: u8, j: u8) -> Result<Surjections> {
    if k > MAX_BOUND || j > k {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= j <= k <= {MAX_BOUND}, got k = {k}, j = {j}"
        )));
    }
    let mut steps = vec![false; k as usize];
    for s in steps.iter_mut().skip((k - j) as usize) {
        *s = true;
    }
    Ok(Surjections { steps, fresh: true })
}

/// Length-`ell` block sequences in `FIN_k(n)`, lexicographic in their blocks.
#[derive(Clone, Debug)]
pub struct BlockSequences {
    k: u8,
    n: usize,
    ell: usize,
    stack: Vec<VectorIter>,
    current: Vec<FinVector>,
    started: bool,
}

impl Iterator for BlockSequences {
    type Item = BlockSequence;

    fn next(&mut self) -> Option<BlockSequence> {
        if !self.started {
            self.started = true;
            self.stack.push(VectorIter::new(self.k, self.n, 0, self.k));
        }
        while !self.stack.is_empty() {
            let depth = self.stack.len() - 1;
            match self.stack[depth].next() {
                None => {
                    self.stack.pop();
                }
                Some(b) => {
                    let lo = b.max_support() + 1;
                    // room for the remaining blocks, one coordinate each
                    if self.n - lo < self.ell - depth - 1 {
                        continue;
                    }
                    self.current.truncate(depth);
                    self.current.push(b);
                    if depth + 1 == self.ell {
                        return Some(BlockSequence::from_ordered(self.current.clone()));
                    }
                    self.stack.push(VectorIter::new(self.k, self.n, lo, self.k));
                }
            }
        }
        None
    }
}

pub fn enum_block_sequences(k: u8, n: usize, ell: usize) -> Result<BlockSequences> {
    check_kn(k, n)?;
    if ell < 1 {
        return Err(Error::InvalidParameter("ell must be at least 1".into()));
    }
    Ok(BlockSequences {
        k,
        n,
        ell,
        stack: Vec::new(),
        current: Vec::new(),
        started: false,
    })
}

/// `|FIN_k(n)| = (k+1)^n - k^n`.
pub fn fin_count(k: u8, n: usize) -> u128 {
    pow(k as u128 + 1, n) - pow(k as u128, n)
}

/// `|FIN_{<=k}(n)| = (k+1)^n - 1`.
pub fn fin_upto_count(k: u8, n: usize) -> u128 {
    pow(k as u128 + 1, n) - 1
}

/// Number of nondecreasing surjections `{0..k} -> {0..j}`: `C(k, j)`.
pub fn surjection_count(k: u8, j: u8) -> u128 {
    binomial(k as u128, j as u128)
}

/// Number of length-`ell` block sequences in `FIN_k(n)`.
pub fn block_sequence_count(k: u8, n: usize, ell: usize) -> u128 {
    let k = k as u128;
    // vectors on a window of `len` coordinates with both ends nonzero and max k
    let window = |len: usize| -> u128 {
        if len == 1 {
            1
        } else {
            k * k * pow(k + 1, len - 2) - (k - 1) * (k - 1) * pow(k, len - 2)
        }
    };
    // ways[p] = number of sequences of the remaining length using coordinates p..n
    let mut ways = vec![1u128; n + 1];
    for _ in 0..ell {
        let mut next = vec![0u128; n + 1];
        for (p, slot) in next.iter_mut().enumerate().take(n) {
            *slot = (p..n)
                .flat_map(|a| (a..n).map(move |b| (a, b)))
                .map(|(a, b)| window(b - a + 1) * ways[b + 1])
                .sum();
        }
        ways = next;
    }
    ways[0]
}

fn pow(base: u128, exp: usize) -> u128 {
    (0..exp).fold(1, |acc, _| acc * base)
}

pub(crate) fn binomial(n: u128, r: u128) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// A random block sequence of `len` blocks in `FIN_k(n)`. Seeded callers get
/// reproducible output; no claim is made about the distribution.
pub fn sample_block_sequence<R: Rng>(rng: &mut R, k: u8, n: usize, len: usize) -> Result<BlockSequence> {
    check_kn(k, n)?;
    if len < 1 || len > n {
        return Err(Error::InvalidParameter(format!("need 1 <= len <= n, got {len}")));
    }
    let mut starts = index::sample(rng, n, len).into_vec();
    starts.sort_unstable();
    let mut blocks = Vec::with_capacity(len);
    for (i, &start) in starts.iter().enumerate() {
        let limit = starts.get(i + 1).copied().unwrap_or(n);
        let end = rng.gen_range(start..limit);
        let mut values = vec![0u8; n];
        for v in &mut values[start..=end] {
            *v = rng.gen_range(0..=k);
        }
        values[rng.gen_range(start..=end)] = k;
        blocks.push(FinVector::from_raw(values, k)?);
    }
    Ok(BlockSequence::from_ordered(blocks))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn digits<I: Iterator<Item = FinVector>>(it: I) -> Vec<String> {
        it.map(|v| v.to_string()).collect()
    }

    #[test]
    fn fin_examples() {
        assert_eq!(digits(enum_fin(1, 2).unwrap()), ["01", "10", "11"]);
        assert_eq!(enum_fin(2, 2).unwrap().count(), 5);
        assert_eq!(enum_fin_upto(1, 2).unwrap().count(), 3);
        assert_eq!(enum_fin_upto(2, 2).unwrap().count(), 8);
        assert_eq!(digits(enum_fin_upto(2, 1).unwrap()), ["1", "2"]);
        assert!(enum_fin(0, 2).is_err());
        assert!(enum_fin(10, 2).is_err());
        assert!(enum_fin(1, 0).is_err());
    }

    #[test]
    fn upto_carries_common_bound() {
        assert!(enum_fin_upto(3, 2).unwrap().all(|v| v.k_bound() == 3));
    }

    #[test]
    fn surjection_examples() {
        let maps: Vec<String> = enum_surjections(2, 1).unwrap().map(|f| f.to_string()).collect();
        assert_eq!(maps, ["0,0,1", "0,1,1"]);
        assert_eq!(enum_surjections(3, 2).unwrap().count(), 3);
        let id: Vec<_> = enum_surjections(4, 4).unwrap().collect();
        assert_eq!(id, vec![TetrisMap::identity(4)]);
        let zero: Vec<_> = enum_surjections(3, 0).unwrap().collect();
        assert_eq!(zero.len(), 1);
        assert_eq!(zero[0].image(), &[0, 0, 0, 0]);
        assert!(enum_surjections(2, 3).is_err());
    }

    #[test]
    fn block_sequence_examples() {
        let seqs: Vec<_> = enum_block_sequences(1, 2, 2).unwrap().collect();
        assert_eq!(seqs.len(), 1);
        assert_eq!(seqs[0].to_string(), "10 01");
        assert_eq!(enum_block_sequences(1, 2, 3).unwrap().count(), 0);
        assert_eq!(enum_block_sequences(2, 2, 1).unwrap().count(), 5);
    }

    #[test]
    fn closed_forms_small() {
        assert_eq!(fin_count(2, 2), 5);
        assert_eq!(fin_upto_count(2, 2), 8);
        assert_eq!(surjection_count(5, 2), 10);
        assert_eq!(block_sequence_count(1, 2, 2), 1);
        assert_eq!(block_sequence_count(1, 3, 2), 5);
        assert_eq!(block_sequence_count(2, 2, 1), 5);
    }

    #[test]
    fn limit_via_take_is_lazy() {
        // 9^12 candidates would be far too many to materialize
        let first: Vec<_> = enum_fin(8, 12).unwrap().take(3).collect();
        assert_eq!(first.len(), 3);
        assert_eq!(first[0].to_string(), "000000000008");
    }

    #[test]
    fn config_validation() {
        let ok = EnumConfig { k: 2, n: 3, j: Some(1), ell: Some(2), limit: None };
        assert!(ok.validate().is_ok());
        assert!(EnumConfig { j: Some(3), ..ok.clone() }.validate().is_err());
        assert!(EnumConfig { ell: Some(0), ..ok.clone() }.validate().is_err());
        assert!(EnumConfig { k: 0, ..ok }.validate().is_err());
    }
}
