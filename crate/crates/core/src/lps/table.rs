use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

const UNDEFINED: u32 = u32::MAX;

/// Where each element sits inside a finite coordinate window `0..dim`; used
/// to tell truncation artifacts from genuine failures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Geometry {
    pub dim: usize,
    /// Largest support coordinate, `None` for elements with empty support.
    pub max_support: Vec<Option<usize>>,
}

/// A finite carrier with a partially defined binary operation, stored as a
/// dense Cayley table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialSemigroupTable {
    names: Vec<String>,
    index: HashMap<String, usize>,
    op: Vec<u32>,
    identity: Option<usize>,
    geometry: Option<Geometry>,
}

impl PartialSemigroupTable {
    /// Builds a table from element names and `(x, y, xy)` triples. Products
    /// with the identity are not implied; list them like any other.
    pub fn new<S, I>(names: Vec<String>, identity: Option<&str>, products: I) -> Result<Self>
    where
        S: AsRef<str>,
        I: IntoIterator<Item = (S, S, S)>,
    {
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::MalformedTable(format!("duplicate element {name}")));
            }
        }
        let n = names.len();
        let mut table = Self {
            names,
            index,
            op: vec![UNDEFINED; n * n],
            identity: None,
            geometry: None,
        };
        table.identity = identity.map(|e| table.index_of(e)).transpose()?;
        for (x, y, z) in products {
            let (x, y, z) = (table.index_of(x.as_ref())?, table.index_of(y.as_ref())?, table.index_of(z.as_ref())?);
            let slot = &mut table.op[x * n + y];
            if *slot != UNDEFINED && *slot != z as u32 {
                return Err(Error::MalformedTable(format!(
                    "product {} {} given twice with different values",
                    table.names[x], table.names[y]
                )));
            }
            *slot = z as u32;
        }
        Ok(table)
    }

    /// `product(x, y)` must return indices below `names.len()`.
    pub(crate) fn from_fn(
        names: Vec<String>,
        identity: Option<usize>,
        product: impl Fn(usize, usize) -> Option<usize>,
    ) -> Self {
        let n = names.len();
        let index = names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut op = vec![UNDEFINED; n * n];
        for x in 0..n {
            for y in 0..n {
                if let Some(z) = product(x, y) {
                    op[x * n + y] = z as u32;
                }
            }
        }
        Self { names, index, op, identity, geometry: None }
    }

    pub fn with_geometry(mut self, geometry: Geometry) -> Result<Self> {
        if geometry.max_support.len() != self.len() {
            return Err(Error::MalformedTable(format!(
                "geometry lists {} elements, table has {}",
                geometry.max_support.len(),
                self.len()
            )));
        }
        if let Some(&Some(m)) = geometry.max_support.iter().find(|m| m.is_some_and(|m| m >= geometry.dim)) {
            return Err(Error::MalformedTable(format!("support coordinate {m} outside 0..{}", geometry.dim)));
        }
        self.geometry = Some(geometry);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownElement(name.to_owned()))
    }

    pub fn indices<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        names.iter().map(|s| self.index_of(s.as_ref())).collect()
    }

    pub fn identity(&self) -> Option<usize> {
        self.identity
    }

    pub fn geometry(&self) -> Option<&Geometry> {
        self.geometry.as_ref()
    }

    pub fn product(&self, x: usize, y: usize) -> Option<usize> {
        match self.op[x * self.len() + y] {
            UNDEFINED => None,
            z => Some(z as usize),
        }
    }

    pub fn defined_pairs(&self) -> usize {
        self.op.iter().filter(|&&z| z != UNDEFINED).count()
    }

    /// Every defined product as `(x, y, xy)`, row-major.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let n = self.len();
        self.op
            .iter()
            .enumerate()
            .filter(|(_, &z)| z != UNDEFINED)
            .map(move |(i, &z)| (i / n, i % n, z as usize))
    }

    pub(crate) fn check_index(&self, x: usize) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownElement(format!("#{x}")))
        }
    }

    /// `right[x]`: the elements `y` with `xy` defined.
    pub(crate) fn right_sets(&self) -> Vec<FixedBitSet> {
        let n = self.len();
        (0..n)
            .map(|x| {
                let mut s = FixedBitSet::with_capacity(n);
                for y in 0..n {
                    if self.op[x * n + y] != UNDEFINED {
                        s.insert(y);
                    }
                }
                s
            })
            .collect()
    }

    pub(crate) fn mask(&self, members: &[usize]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.len());
        for &m in members {
            s.insert(m);
        }
        s
    }

    pub(crate) fn render_set(&self, set: &[usize]) -> String {
        let names: Vec<&str> = set.iter().map(|&x| self.name(x)).collect();
        format!("{{{}}}", names.join(", "))
    }
}

/// `phi(A)`: the elements `y` with `xy` defined for every `x` in `A`, sorted.
pub fn phi(t: &PartialSemigroupTable, a: &[usize]) -> Result<Vec<usize>> {
    for &x in a {
        t.check_index(x)?;
    }
    Ok((0..t.len()).filter(|&y| a.iter().all(|&x| t.product(x, y).is_some())).collect())
}
