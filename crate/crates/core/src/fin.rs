//! Vectors of `FIN_k(n)`, the ordered partial sum, and generalized tetris maps.
//!
//! A [`FinVector`] is a map from `n` coordinates into `{0..k_bound}` that is not
//! identically zero. Its layer is its largest entry. A [`TetrisMap`] is a
//! nondecreasing surjection `{0..k} -> {0..j}` acting on vectors entrywise.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest admissible value bound; keeps the digit-string encoding one character per entry.
pub const MAX_BOUND: u8 = 9;

/// Sorted set of coordinates on which a vector does not vanish.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Support(Vec<usize>);

impl Support {
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn min(&self) -> usize {
        self.0[0]
    }

    pub fn max(&self) -> usize {
        self.0[self.0.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// `self < other`: every coordinate of `self` lies below every coordinate of `other`.
    pub fn precedes(&self, other: &Support) -> bool {
        self.max() < other.min()
    }

    pub fn is_subset(&self, other: &Support) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinVector {
    values: Vec<u8>,
    k_bound: u8,
    layer: u8,
}

fn check_bound(k_bound: i64) -> Result<u8> {
    if (1..=MAX_BOUND as i64).contains(&k_bound) {
        Ok(k_bound as u8)
    } else {
        Err(Error::BoundOutOfRange(k_bound))
    }
}

impl FinVector {
    pub fn new(values: &[i64], k_bound: i64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        let bound = check_bound(k_bound)?;
        let mut out = Vec::with_capacity(values.len());
        for (index, &value) in values.iter().enumerate() {
            if value < 0 {
                return Err(Error::NegativeEntry { index, value });
            }
            if value > bound as i64 {
                return Err(Error::EntryOutOfRange { index, value, bound });
            }
            out.push(value as u8);
        }
        Self::from_raw(out, bound)
    }

    /// Builds a vector from already range-checked entries.
    pub(crate) fn from_raw(values: Vec<u8>, k_bound: u8) -> Result<Self> {
        let layer = values.iter().copied().max().unwrap_or(0);
        if layer == 0 {
            return Err(Error::ZeroVector);
        }
        debug_assert!(layer <= k_bound);
        Ok(Self { values, k_bound, layer })
    }

    /// Parses the canonical digit string, e.g. `"2102"`.
    pub fn from_digits(digits: &str, k_bound: i64) -> Result<Self> {
        let values = digits
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(i64::from)
                    .ok_or_else(|| Error::Parse(format!("non-digit {c:?} in {digits:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(&values, k_bound)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn k_bound(&self) -> u8 {
        self.k_bound
    }

    pub fn layer(&self) -> u8 {
        self.layer
    }

    pub fn support(&self) -> Support {
        Support(
            self.values
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(i, _)| i)
                .collect(),
        )
    }

    pub fn min_support(&self) -> usize {
        self.values.iter().position(|&v| v != 0).expect("nonzero vector")
    }

    pub fn max_support(&self) -> usize {
        self.values.iter().rposition(|&v| v != 0).expect("nonzero vector")
    }

    /// Same entries viewed inside `FIN_{<=k_bound}`.
    pub fn with_bound(&self, k_bound: i64) -> Result<Self> {
        let bound = check_bound(k_bound)?;
        if self.layer > bound {
            return Err(Error::EntryOutOfRange {
                index: self.values.iter().position(|&v| v > bound).unwrap_or(0),
                value: self.layer as i64,
                bound,
            });
        }
        Ok(Self { k_bound: bound, ..self.clone() })
    }

    /// Positional code in base `base`, most significant digit first.
    pub fn code(&self, base: u64) -> u64 {
        self.values.iter().fold(0, |acc, &v| acc * base + v as u64)
    }

    fn check_compatible(&self, other: &FinVector) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch(format!(
                "coordinate counts {} and {}",
                self.n(),
                other.n()
            )));
        }
        if self.k_bound != other.k_bound {
            return Err(Error::DimensionMismatch(format!(
                "bounds {} and {}",
                self.k_bound, other.k_bound
            )));
        }
        Ok(())
    }

    /// The partial semigroup operation: pointwise sum, defined only when
    /// `Supp(self) < Supp(other)`.
    pub fn ordered_sum(&self, other: &FinVector) -> Result<FinVector> {
        self.check_compatible(other)?;
        if self.max_support() >= other.min_support() {
            return Err(Error::Undefined);
        }
        Ok(self.pointwise(other))
    }

    /// Pointwise sum of disjointly supported vectors, in either order.
    pub fn disjoint_sum(&self, other: &FinVector) -> Result<FinVector> {
        self.check_compatible(other)?;
        if self.values.iter().zip(&other.values).any(|(&a, &b)| a != 0 && b != 0) {
            return Err(Error::Undefined);
        }
        Ok(self.pointwise(other))
    }

    fn pointwise(&self, other: &FinVector) -> FinVector {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        FinVector {
            values,
            k_bound: self.k_bound,
            layer: self.layer.max(other.layer),
        }
    }
}

impl fmt::Display for FinVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &v in &self.values {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FinVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinVector({self}; k={})", self.k_bound)
    }
}

/// Result of a tetris map: either a vector or the zero function, which is not
/// an element of any `FIN_j` with `j >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Image {
    Zero,
    Vector(FinVector),
}

impl Image {
    pub fn is_zero(&self) -> bool {
        matches!(self, Image::Zero)
    }

    pub fn as_vector(&self) -> Option<&FinVector> {
        match self {
            Image::Zero => None,
            Image::Vector(v) => Some(v),
        }
    }

    pub fn into_vector(self) -> Option<FinVector> {
        match self {
            Image::Zero => None,
            Image::Vector(v) => Some(v),
        }
    }

    /// Ordered sum where a zero summand is neutral.
    pub fn ordered_sum(&self, other: &Image) -> Result<Image> {
        match (self, other) {
            (Image::Zero, x) | (x, Image::Zero) => Ok(x.clone()),
            (Image::Vector(a), Image::Vector(b)) => a.ordered_sum(b).map(Image::Vector),
        }
    }
}

/// A nondecreasing surjection `{0..k} -> {0..j}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TetrisMap {
    image: Vec<u8>,
}

impl TetrisMap {
    pub fn new(image: &[i64]) -> Result<Self> {
        if image.is_empty() {
            return Err(Error::Empty);
        }
        if image.len() > MAX_BOUND as usize + 1 {
            return Err(Error::InvalidMap(format!(
                "source top value {} exceeds {MAX_BOUND}",
                image.len() - 1
            )));
        }
        if image[0] != 0 {
            return Err(Error::InvalidMap(format!("image of 0 is {}, not 0", image[0])));
        }
        for (v, w) in image.windows(2).enumerate() {
            let step = w[1] - w[0];
            if step < 0 {
                return Err(Error::InvalidMap(format!("decreasing step at {v}")));
            }
            if step > 1 {
                return Err(Error::InvalidMap(format!(
                    "step {step} at {v} skips value {}",
                    w[0] + 1
                )));
            }
        }
        Ok(Self { image: image.iter().map(|&v| v as u8).collect() })
    }

    pub(crate) fn from_steps(steps: &[bool]) -> Self {
        let mut image = Vec::with_capacity(steps.len() + 1);
        image.push(0u8);
        for &s in steps {
            let last = image[image.len() - 1];
            image.push(last + s as u8);
        }
        Self { image }
    }

    pub fn identity(k: u8) -> Self {
        Self { image: (0..=k).collect() }
    }

    /// `T_i` on `{0..k}`: decrements every value `>= i`.
    pub fn basic(i: u8, k: u8) -> Result<Self> {
        if i < 1 || i > k || k > MAX_BOUND {
            return Err(Error::InvalidParameter(format!(
                "basic tetris T_{i} needs 1 <= i <= k <= {MAX_BOUND}, got k = {k}"
            )));
        }
        Ok(Self {
            image: (0..=k).map(|v| if v >= i { v - 1 } else { v }).collect(),
        })
    }

    /// Source top value.
    pub fn k(&self) -> u8 {
        (self.image.len() - 1) as u8
    }

    /// Target top value.
    pub fn j(&self) -> u8 {
        self.image[self.image.len() - 1]
    }

    pub fn image(&self) -> &[u8] {
        &self.image
    }

    pub fn value(&self, v: u8) -> u8 {
        self.image[v as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.j() == self.k()
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &TetrisMap) -> Result<TetrisMap> {
        if self.k() != inner.j() {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose map from level {} after map into level {}",
                self.k(),
                inner.j()
            )));
        }
        Ok(TetrisMap {
            image: inner.image.iter().map(|&v| self.image[v as usize]).collect(),
        })
    }

    /// Post-composition `self ∘ b`. The result is bounded by `self.j()`.
    pub fn apply(&self, b: &FinVector) -> Result<Image> {
        if self.k() != b.k_bound() {
            return Err(Error::DimensionMismatch(format!(
                "map on {{0..{}}} applied to vector bounded by {}",
                self.k(),
                b.k_bound()
            )));
        }
        let values: Vec<u8> = b.values().iter().map(|&v| self.image[v as usize]).collect();
        if self.j() == 0 {
            return Ok(Image::Zero);
        }
        Ok(FinVector::from_raw(values, self.j()).map_or(Image::Zero, Image::Vector))
    }
}

impl fmt::Display for TetrisMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.image.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TetrisMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TetrisMap[{self}]")
    }
}

impl FromStr for TetrisMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let image = s
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&image)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(digits: &str, k: i64) -> FinVector {
        FinVector::from_digits(digits, k).unwrap()
    }

    #[test]
    fn make_vector_examples() {
        let b = FinVector::new(&[2, 1, 0], 2).unwrap();
        assert_eq!(b.layer(), 2);
        assert_eq!(b.support().as_slice(), &[0, 1]);
        assert!(matches!(FinVector::new(&[0, 0], 1), Err(Error::ZeroVector)));
        assert!(matches!(FinVector::new(&[3, 0], 2), Err(Error::EntryOutOfRange { .. })));
        assert!(matches!(FinVector::new(&[-1, 1], 2), Err(Error::NegativeEntry { .. })));
        assert!(matches!(FinVector::new(&[], 2), Err(Error::Empty)));
        assert!(matches!(FinVector::new(&[1], 10), Err(Error::BoundOutOfRange(10))));
    }

    #[test]
    fn ordered_sum_examples() {
        assert_eq!(v("10", 1).ordered_sum(&v("01", 1)).unwrap(), v("11", 1));
        let s = v("20", 2).ordered_sum(&v("02", 2)).unwrap();
        assert_eq!(s, v("22", 2));
        assert_eq!(s.layer(), 2);
        assert!(matches!(v("11", 1).ordered_sum(&v("01", 1)), Err(Error::Undefined)));
        // disjoint but in the wrong order
        assert!(matches!(v("01", 1).ordered_sum(&v("10", 1)), Err(Error::Undefined)));
        assert_eq!(v("01", 1).disjoint_sum(&v("10", 1)).unwrap(), v("11", 1));
        assert!(matches!(
            v("10", 1).ordered_sum(&v("001", 1)),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            v("10", 1).ordered_sum(&v("01", 2)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn make_tetris_map_examples() {
        let f = TetrisMap::new(&[0, 0, 1]).unwrap();
        assert_eq!((f.k(), f.j()), (2, 1));
        let g = TetrisMap::new(&[0, 1, 1]).unwrap();
        assert_eq!((g.k(), g.j()), (2, 1));
        assert!(matches!(TetrisMap::new(&[0, 2]), Err(Error::InvalidMap(_))));
        assert!(matches!(TetrisMap::new(&[1, 1]), Err(Error::InvalidMap(_))));
        assert!(matches!(TetrisMap::new(&[0, 1, 0]), Err(Error::InvalidMap(_))));
        assert_eq!("0,0,1".parse::<TetrisMap>().unwrap(), f);
        assert_eq!(f.to_string(), "0,0,1");
    }

    #[test]
    fn basic_tetris_examples() {
        assert_eq!(TetrisMap::basic(1, 2).unwrap().image(), &[0, 0, 1]);
        assert_eq!(TetrisMap::basic(2, 2).unwrap().image(), &[0, 1, 1]);
        assert!(TetrisMap::basic(3, 2).is_err());
        assert!(TetrisMap::basic(0, 2).is_err());
    }

    #[test]
    fn apply_examples() {
        let b = v("2102", 2);
        let t1 = TetrisMap::basic(1, 2).unwrap();
        let t2 = TetrisMap::basic(2, 2).unwrap();
        assert_eq!(t1.apply(&b).unwrap(), Image::Vector(v("1001", 1)));
        assert_eq!(t2.apply(&b).unwrap(), Image::Vector(v("1101", 1)));
        assert_eq!(TetrisMap::identity(2).apply(&b).unwrap(), Image::Vector(b.clone()));
        assert_eq!(TetrisMap::new(&[0, 0, 0]).unwrap().apply(&b).unwrap(), Image::Zero);
        assert!(matches!(t1.apply(&v("11", 1)), Err(Error::DimensionMismatch(_))));
        // T_1 on a layer-1 vector inside FIN_<=2 kills it
        assert_eq!(t1.apply(&v("10", 2)).unwrap(), Image::Zero);
    }

    #[test]
    fn compose_examples() {
        let f = TetrisMap::basic(1, 1).unwrap();
        let g = TetrisMap::basic(1, 2).unwrap();
        // pointwise: g = [0,0,1], then f = [0,0]
        let expected: Vec<u8> = g.image().iter().map(|&x| f.value(x)).collect();
        assert_eq!(expected, vec![0, 0, 0]);
        let h = f.compose(&g).unwrap();
        assert_eq!(h.image(), &expected[..]);
        assert_eq!(h.j(), 0);
        assert_eq!(TetrisMap::identity(1).compose(&g).unwrap(), g);
        assert_eq!(g.compose(&TetrisMap::identity(2)).unwrap(), g);
        assert!(matches!(g.compose(&g), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn image_sum_tolerates_zero() {
        let a = Image::Vector(v("10", 1));
        assert_eq!(Image::Zero.ordered_sum(&a).unwrap(), a);
        assert_eq!(a.ordered_sum(&Image::Zero).unwrap(), a);
        assert_eq!(Image::Zero.ordered_sum(&Image::Zero).unwrap(), Image::Zero);
    }

    #[test]
    fn support_order_and_views() {
        let a = v("1100", 1);
        let b = v("0011", 1);
        assert!(a.support().precedes(&b.support()));
        assert!(!b.support().precedes(&a.support()));
        assert_eq!(a.code(2), 0b1100);
        let lifted = a.with_bound(3).unwrap();
        assert_eq!(lifted.k_bound(), 3);
        assert_eq!(lifted.layer(), 1);
        assert!(v("20", 2).with_bound(1).is_err());
    }
}
