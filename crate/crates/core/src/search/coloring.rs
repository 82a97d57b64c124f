use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::enumerate::{check_kn, enum_block_sequences, enum_fin_upto};
use crate::error::{Error, Result};
use crate::fin::FinVector;
use crate::subspace::TupleElement;

const UNSET: u8 = u8::MAX;

/// Largest dense domain `(k+1)^n` a coloring may index.
pub const MAX_DENSE_DOMAIN: u64 = 1 << 24;

/// An `r`-coloring of `FIN_{<=k}(n)` (`m = 1`) or of same-layer,
/// support-ordered `m`-tuples of it (`m >= 2`).
///
/// Element colorings are stored densely by positional code, so lookup is a
/// single index. A coloring may be partial; callers that touch an unassigned
/// element get [`Error::MissingColor`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    k: u8,
    n: usize,
    r: u8,
    m: usize,
    dense: Vec<u8>,
    tuples: BTreeMap<Vec<u64>, u8>,
}

/// On-disk form: `{"k":1,"n":2,"r":2,"m":1,"assignment":{"10":0,"01":0,"11":1}}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ColoringFile {
    pub k: u8,
    pub n: usize,
    pub r: u8,
    #[serde(default = "one")]
    pub m: usize,
    pub assignment: BTreeMap<String, u8>,
}

fn one() -> usize {
    1
}

pub(crate) fn decode_code(code: u64, base: u64, n: usize) -> Vec<u8> {
    let mut digits = vec![0u8; n];
    let mut c = code;
    for d in digits.iter_mut().rev() {
        *d = (c % base) as u8;
        c /= base;
    }
    digits
}

pub(crate) fn render_code(code: u64, base: u64, n: usize) -> String {
    decode_code(code, base, n).iter().map(|d| char::from(b'0' + d)).collect()
}

impl Coloring {
    /// Empty (fully unassigned) coloring.
    pub fn empty(k: u8, n: usize, r: u8, m: usize) -> Result<Self> {
        check_kn(k, n)?;
        if r < 1 || r == UNSET {
            return Err(Error::InvalidParameter(format!("need 1 <= r < 255, got {r}")));
        }
        if m < 1 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        let domain = (k as u64 + 1)
            .checked_pow(n as u32)
            .filter(|&d| d <= MAX_DENSE_DOMAIN)
            .ok_or(Error::BudgetExceeded {
                what: "coloring domain",
                size: (k as u128 + 1).saturating_pow(n as u32),
                limit: MAX_DENSE_DOMAIN as u128,
            })?;
        let dense = if m == 1 { vec![UNSET; domain as usize - 1] } else { Vec::new() };
        Ok(Self { k, n, r, m, dense, tuples: BTreeMap::new() })
    }

    /// Element coloring (`m = 1`) computed by `f` on every element.
    pub fn from_fn(k: u8, n: usize, r: u8, mut f: impl FnMut(&FinVector) -> u8) -> Result<Self> {
        let mut c = Self::empty(k, n, r, 1)?;
        for b in enum_fin_upto(k, n)? {
            let color = f(&b);
            c.set(&b, color)?;
        }
        Ok(c)
    }

    /// Tuple coloring over every same-layer support-ordered `m`-tuple.
    pub fn from_fn_tuples(
        k: u8,
        n: usize,
        r: u8,
        m: usize,
        mut f: impl FnMut(&TupleElement) -> u8,
    ) -> Result<Self> {
        let mut c = Self::empty(k, n, r, m)?;
        for t in tuple_domain(k, n, m)? {
            let color = f(&t);
            c.set_tuple(&t, color)?;
        }
        Ok(c)
    }

    pub fn constant(k: u8, n: usize, r: u8, m: usize, color: u8) -> Result<Self> {
        if m == 1 {
            Self::from_fn(k, n, r, |_| color)
        } else {
            Self::from_fn_tuples(k, n, r, m, |_| color)
        }
    }

    /// Dense element coloring from colors listed in `enum_fin_upto` order.
    pub fn from_canonical(k: u8, n: usize, r: u8, colors: &[u8]) -> Result<Self> {
        let mut c = Self::empty(k, n, r, 1)?;
        let mut it = colors.iter();
        for b in enum_fin_upto(k, n)? {
            let color = *it
                .next()
                .ok_or_else(|| Error::InvalidParameter("too few colors for the domain".into()))?;
            c.set(&b, color)?;
        }
        if it.next().is_some() {
            return Err(Error::InvalidParameter("too many colors for the domain".into()));
        }
        Ok(c)
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> u8 {
        self.r
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub(crate) fn base(&self) -> u64 {
        self.k as u64 + 1
    }

    fn check_color(&self, color: u8) -> Result<()> {
        if color >= self.r {
            return Err(Error::InvalidParameter(format!("color {color} outside 0..{}", self.r)));
        }
        Ok(())
    }

    fn check_element(&self, b: &FinVector) -> Result<()> {
        if b.n() != self.n || b.layer() > self.k {
            return Err(Error::DimensionMismatch(format!(
                "{b} is not an element of FIN_<={}({})",
                self.k, self.n
            )));
        }
        Ok(())
    }

    pub fn set(&mut self, b: &FinVector, color: u8) -> Result<()> {
        if self.m != 1 {
            return Err(Error::DimensionMismatch("element color on a tuple coloring".into()));
        }
        self.check_element(b)?;
        self.check_color(color)?;
        let code = b.code(self.base());
        self.dense[code as usize - 1] = color;
        Ok(())
    }

    pub fn set_tuple(&mut self, t: &TupleElement, color: u8) -> Result<()> {
        if self.m != t.m() {
            return Err(Error::DimensionMismatch(format!(
                "{}-tuple on a coloring of {}-tuples",
                t.m(),
                self.m
            )));
        }
        for p in t.parts() {
            self.check_element(p)?;
        }
        if t.layer().is_none() {
            return Err(Error::DimensionMismatch(format!("parts of {t} have different layers")));
        }
        self.check_color(color)?;
        let key = t.parts().iter().map(|p| p.code(self.base())).collect();
        self.tuples.insert(key, color);
        Ok(())
    }

    /// Color of the element with positional code `code` (base `k+1`).
    pub(crate) fn color_by_code(&self, code: u64) -> Result<u8> {
        match self.dense.get(code as usize - 1) {
            Some(&c) if c != UNSET => Ok(c),
            _ => Err(Error::MissingColor(render_code(code, self.base(), self.n))),
        }
    }

    pub fn color_of(&self, b: &FinVector) -> Result<u8> {
        if self.m != 1 {
            return Err(Error::DimensionMismatch("element lookup on a tuple coloring".into()));
        }
        self.check_element(b)?;
        self.color_by_code(b.code(self.base()))
    }

    pub fn color_of_tuple(&self, t: &TupleElement) -> Result<u8> {
        if self.m == 1 && t.m() == 1 {
            return self.color_of(&t.parts()[0]);
        }
        let key: Vec<u64> = t.parts().iter().map(|p| p.code(self.base())).collect();
        self.tuples
            .get(&key)
            .copied()
            .ok_or_else(|| Error::MissingColor(t.to_string()))
    }

    /// True when every element (or tuple) of the declared domain has a color.
    pub fn is_total(&self) -> Result<bool> {
        if self.m == 1 {
            Ok(enum_fin_upto(self.k, self.n)?.all(|b| self.dense[b.code(self.base()) as usize - 1] != UNSET))
        } else {
            Ok(tuple_domain(self.k, self.n, self.m)?.len() == self.tuples.len())
        }
    }

    /// Assigned entries keyed by canonical encoding, in canonical order.
    pub fn assignment(&self) -> Vec<(String, u8)> {
        if self.m == 1 {
            enum_fin_upto(self.k, self.n)
                .into_iter()
                .flatten()
                .filter_map(|b| {
                    let c = self.dense[b.code(self.base()) as usize - 1];
                    (c != UNSET).then(|| (b.to_string(), c))
                })
                .collect()
        } else {
            self.tuples
                .iter()
                .map(|(key, &c)| {
                    let parts: Vec<String> = key.iter().map(|&p| render_code(p, self.base(), self.n)).collect();
                    (parts.join("/"), c)
                })
                .collect()
        }
    }

    pub fn to_file(&self) -> ColoringFile {
        ColoringFile {
            k: self.k,
            n: self.n,
            r: self.r,
            m: self.m,
            assignment: self.assignment().into_iter().collect(),
        }
    }

    pub fn from_file(file: &ColoringFile) -> Result<Self> {
        let mut c = Self::empty(file.k, file.n, file.r, file.m)?;
        for (key, &color) in &file.assignment {
            if file.m == 1 {
                let b = FinVector::from_digits(key, file.k as i64)?;
                c.set(&b, color)?;
            } else {
                let t = TupleElement::from_digits(key, file.k as i64)?;
                c.set_tuple(&t, color)?;
            }
        }
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("coloring serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(text)?)
    }
}

/// Same-layer support-ordered `m`-tuples of `FIN_{<=k}(n)`, layer-major.
pub fn tuple_domain(k: u8, n: usize, m: usize) -> Result<Vec<TupleElement>> {
    let mut out = Vec::new();
    for j in 1..=k {
        for bs in enum_block_sequences(j, n, m)? {
            let parts = bs
                .blocks()
                .iter()
                .map(|b| b.with_bound(k as i64))
                .collect::<Result<Vec<_>>>()?;
            out.push(TupleElement::new(parts)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_partial() {
        let text = r#"{"k":1,"n":2,"r":2,"m":1,"assignment":{"10":0,"01":0,"11":1}}"#;
        let c = Coloring::from_json(text).unwrap();
        assert!(c.is_total().unwrap());
        assert_eq!(c.color_of(&FinVector::from_digits("11", 1).unwrap()).unwrap(), 1);
        assert_eq!(Coloring::from_json(&c.to_json()).unwrap(), c);

        let partial = Coloring::from_json(r#"{"k":1,"n":2,"r":2,"assignment":{"10":0}}"#).unwrap();
        assert!(!partial.is_total().unwrap());
        let err = partial.color_of(&FinVector::from_digits("01", 1).unwrap()).unwrap_err();
        assert!(matches!(err, Error::MissingColor(ref s) if s == "01"));
    }

    #[test]
    fn rejects_bad_entries() {
        assert!(Coloring::from_json(r#"{"k":1,"n":2,"r":2,"assignment":{"10":2}}"#).is_err());
        assert!(Coloring::from_json(r#"{"k":1,"n":2,"r":2,"assignment":{"20":0}}"#).is_err());
        assert!(Coloring::from_json(r#"{"k":1,"n":2,"r":2,"assignment":{"100":0}}"#).is_err());
        assert!(Coloring::from_json(r#"{"k":1,"n":3,"r":2,"m":2,"assignment":{"010/100":0}}"#).is_err());
    }

    #[test]
    fn tuple_colorings() {
        let c = Coloring::constant(1, 3, 2, 2, 1).unwrap();
        assert!(c.is_total().unwrap());
        // pairs of ordered nonempty subsets of {0,1,2}
        assert_eq!(c.assignment().len(), 5);
        let t = TupleElement::from_digits("100/011", 1).unwrap();
        assert_eq!(c.color_of_tuple(&t).unwrap(), 1);
        let text = c.to_json();
        assert!(text.contains("\"100/011\":1"));
        assert_eq!(Coloring::from_json(&text).unwrap(), c);
    }

    #[test]
    fn canonical_order_fill() {
        let c = Coloring::from_canonical(1, 2, 2, &[0, 0, 1]).unwrap();
        let a = c.assignment();
        assert_eq!(a, vec![("01".into(), 0), ("10".into(), 0), ("11".into(), 1)]);
        assert!(Coloring::from_canonical(1, 2, 2, &[0, 0]).is_err());
    }
}
