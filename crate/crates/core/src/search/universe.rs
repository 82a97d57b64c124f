//! Code-level view of `FIN_k(n)` used by the search engines.
//!
//! Vectors are handled as positional codes in base `k+1`. Disjointly supported
//! vectors add as codes, so a tetris-subspace element is a plain integer sum.

use crate::enumerate::enum_fin;
use crate::error::Result;
use crate::fin::FinVector;
use crate::subspace::BlockSequence;


pub(crate) struct Candidate {
    pub vector: FinVector,
    pub max_support: usize,
    /// Distinct image codes per target layer, `images[j' - 1]`.
    pub images: Vec<Vec<u64>>,
}

pub(crate) struct Universe {
    pub k: u8,
    pub n: usize,
    pub base: u64,
    /// `FIN_k(n)` in lexicographic order.
    pub candidates: Vec<Candidate>,
    /// `within[lo]`: how many leading candidates vanish below `lo`.
    /// Those candidates are exactly a prefix of the lexicographic order.
    pub within: Vec<usize>,
}

/// Partial sums with every coefficient `<= j`, one list per layer `j`.
/// Each entry is `(code, largest coefficient used)`; the empty sum is `(0, 0)`.
#[derive(Clone, Debug)]
pub(crate) struct Sums {
    pub layers: Vec<Vec<(u64, u8)>>,
}

impl Universe {
    pub fn new(k: u8, n: usize) -> Result<Self> {
        let base = k as u64 + 1;
        let surj: Vec<Vec<_>> = (1..=k)
            .map(|j| crate::enumerate::enum_surjections(k, j).map(Iterator::collect))
            .collect::<Result<_>>()?;
        let mut candidates = Vec::new();
        for b in enum_fin(k, n)? {
            let images = surj
                .iter()
                .map(|fs: &Vec<crate::fin::TetrisMap>| {
                    let mut codes: Vec<u64> = fs
                        .iter()
                        .map(|f| b.values().iter().fold(0u64, |acc, &v| acc * base + f.value(v) as u64))
                        .collect();
                    codes.sort_unstable();
                    codes.dedup();
                    codes
                })
                .collect();
            candidates.push(Candidate { max_support: b.max_support(), vector: b, images });
        }
        let within = (0..=n)
            .map(|lo| candidates.iter().take_while(|c| c.vector.min_support() >= lo).count())
            .collect();
        Ok(Self { k, n, base, candidates, within })
    }

    pub fn empty_sums(&self) -> Sums {
        Sums { layers: vec![vec![(0, 0)]; self.k as usize] }
    }

    /// Appends candidate `ci` to a prefix. Returns the new sums and, per layer,
    /// the codes of tetris-subspace elements that involve the new block.
    pub fn extend(&self, sums: &Sums, ci: usize) -> (Sums, Vec<Vec<u64>>) {
        let cand = &self.candidates[ci];
        let mut layers = Vec::with_capacity(self.k as usize);
        let mut fresh = Vec::with_capacity(self.k as usize);
        for (li, prev) in sums.layers.iter().enumerate() {
            let j = li as u8 + 1;
            let mut next = prev.clone();
            let mut new_here = Vec::new();
            for jj in 1..=j {
                for &q in &cand.images[jj as usize - 1] {
                    for &(p, pl) in prev {
                        let top = pl.max(jj);
                        next.push((p + q, top));
                        if top == j {
                            new_here.push(p + q);
                        }
                    }
                }
            }
            new_here.sort_unstable();
            layers.push(next);
            fresh.push(new_here);
        }
        (Sums { layers }, fresh)
    }

    /// Codes of `TS_j` for the prefix represented by `sums`.
    pub fn subspace_codes(&self, sums: &Sums, j: u8) -> Vec<u64> {
        let mut out: Vec<u64> = sums.layers[j as usize - 1]
            .iter()
            .filter(|&&(_, top)| top == j)
            .map(|&(c, _)| c)
            .collect();
        out.sort_unstable();
        out
    }

    /// Room for `remaining` more blocks after candidate `ci`.
    pub fn fits(&self, ci: usize, remaining: usize) -> bool {
        self.n - (self.candidates[ci].max_support + 1) >= remaining
    }

    pub fn next_lo(&self, ci: usize) -> usize {
        self.candidates[ci].max_support + 1
    }

    pub fn sequence(&self, chosen: &[usize]) -> BlockSequence {
        BlockSequence::from_ordered(chosen.iter().map(|&ci| self.candidates[ci].vector.clone()).collect())
    }

    /// Depth-first walk over every length-`ell` block sequence; `visit`
    /// receives the chosen candidate indices and the final sums.
    pub fn for_each_sequence(&self, ell: usize, visit: &mut dyn FnMut(&[usize], &Sums) -> Result<()>) -> Result<()> {
        let mut chosen = Vec::with_capacity(ell);
        self.walk(ell, 0, &self.empty_sums(), &mut chosen, visit)
    }

    fn walk(
        &self,
        ell: usize,
        lo: usize,
        sums: &Sums,
        chosen: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize], &Sums) -> Result<()>,
    ) -> Result<()> {
        let depth = chosen.len();
        if lo >= self.n {
            return Ok(());
        }
        for ci in 0..self.within[lo] {
            if !self.fits(ci, ell - depth - 1) {
                continue;
            }
            let (next, _) = self.extend(sums, ci);
            chosen.push(ci);
            if depth + 1 == ell {
                visit(chosen, &next)?;
            } else {
                self.walk(ell, self.next_lo(ci), &next, chosen, visit)?;
            }
            chosen.pop();
        }
        Ok(())
    }
}
