use crate::enumerate::enum_fin_upto;
use crate::error::{Error, Result};
use crate::fin::{FinVector, Image, TetrisMap};

use super::checks::{ElementMap, LayeredStructure, TetrisActionData};
use super::table::{Geometry, PartialSemigroupTable};

/// Largest carrier `fin_table` and `fin_instance` will materialize.
pub const MAX_CARRIER: usize = 4096;

struct Carrier {
    elements: Vec<Option<FinVector>>,
    index: Vec<u32>,
    base: u64,
}

impl Carrier {
    fn new(k: u8, dim: usize, with_identity: bool) -> Result<Self> {
        crate::enumerate::check_kn(k, dim)?;
        let size = (k as u128 + 1).pow(dim.min(64) as u32) - 1 + with_identity as u128;
        if size > MAX_CARRIER as u128 {
            return Err(Error::BudgetExceeded { what: "carrier elements", size, limit: MAX_CARRIER as u128 });
        }
        let base = k as u64 + 1;
        let mut elements: Vec<Option<FinVector>> = Vec::with_capacity(size as usize);
        if with_identity {
            elements.push(None);
        }
        elements.extend(enum_fin_upto(k, dim)?.map(Some));
        let mut index = vec![u32::MAX; base.pow(dim as u32) as usize];
        for (i, e) in elements.iter().enumerate() {
            index[e.as_ref().map_or(0, |v| v.code(base)) as usize] = i as u32;
        }
        Ok(Self { elements, index, base })
    }

    fn code(&self, x: usize) -> u64 {
        self.elements[x].as_ref().map_or(0, |v| v.code(self.base))
    }

    fn at(&self, code: u64) -> usize {
        self.index[code as usize] as usize
    }

    fn table(&self, dim: usize) -> PartialSemigroupTable {
        let names = self
            .elements
            .iter()
            .map(|e| e.as_ref().map_or_else(|| "e".to_owned(), FinVector::to_string))
            .collect();
        let identity = self.elements.iter().position(Option::is_none);
        let table = PartialSemigroupTable::from_fn(names, identity, |x, y| {
            match (&self.elements[x], &self.elements[y]) {
                (None, _) => Some(y),
                (_, None) => Some(x),
                (Some(a), Some(b)) => (a.max_support() < b.min_support()).then(|| self.at(self.code(x) + self.code(y))),
            }
        });
        let max_support = self.elements.iter().map(|e| e.as_ref().map(FinVector::max_support)).collect();
        table
            .with_geometry(Geometry { dim, max_support })
            .expect("geometry matches the carrier")
    }
}

/// `FIN_{<=k}(dim)` under the ordered-support sum, without an identity.
/// Elements are in `enum_fin_upto` order and named by their digits.
pub fn fin_table(k: u8, dim: usize) -> Result<PartialSemigroupTable> {
    Ok(Carrier::new(k, dim, false)?.table(dim))
}

/// The layered structure `S_0 = {e}`, `S_j = FIN_j(dim)` for `j = 1..=k`,
/// with `F_n = {T_1, ..., T_n}` acting on `S_{<=n}` and `M_n` the vectors
/// whose entries all lie in `{0, n}`. The identity is element 0, named `e`.
pub fn fin_instance(k: u8, dim: usize) -> Result<(LayeredStructure, TetrisActionData)> {
    let carrier = Carrier::new(k, dim, true)?;
    let table = carrier.table(dim);
    let layer_of = |x: usize| carrier.elements[x].as_ref().map_or(0, |v| v.layer() as usize);
    let size = carrier.elements.len();
    let mut layers = vec![Vec::new(); k as usize + 1];
    for x in 0..size {
        layers[layer_of(x)].push(x);
    }

    let mut families = Vec::with_capacity(k as usize);
    let mut marked = Vec::with_capacity(k as usize);
    for n in 1..=k {
        let mut family = Vec::with_capacity(n as usize);
        for i in 1..=n {
            let t = TetrisMap::basic(i, k)?;
            let mut images = vec![None; size];
            for (x, slot) in images.iter_mut().enumerate() {
                if layer_of(x) > n as usize {
                    continue;
                }
                *slot = Some(match &carrier.elements[x] {
                    None => 0,
                    Some(v) => match t.apply(v)? {
                        Image::Zero => 0,
                        Image::Vector(w) => carrier.at(w.code(carrier.base)),
                    },
                });
            }
            family.push(ElementMap { name: format!("T_{i}"), images });
        }
        families.push(family);
        marked.push(
            layers[n as usize]
                .iter()
                .copied()
                .filter(|&x| carrier.elements[x].as_ref().is_some_and(|v| v.values().iter().all(|&d| d == 0 || d == n)))
                .collect(),
        );
    }
    Ok((LayeredStructure::new(table, layers)?, TetrisActionData { families, marked }))
}
