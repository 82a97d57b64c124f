//! Combinatorics of `FIN_k` with generalized tetris operations.
//!
//! - [`fin`]: vectors, the ordered partial sum, tetris maps.
//! - [`enumerate`]: lazy generators and closed-form counts.
//! - [`subspace`]: block sequences and tetris subspaces `TS_j`, `TS_j^[m]`.
//! - [`search`]: witness verification and search, bad colorings, CNF export,
//!   Gowers numbers.
//! - [`lps`]: finite checks of partial-semigroup, layering and tetris-action axioms.

pub mod enumerate;
pub mod error;
pub mod fin;
pub mod lps;
pub mod search;
pub mod subspace;

pub use error::{Error, Result};
pub use fin::{FinVector, Image, Support, TetrisMap};
pub use subspace::{BlockSequence, TupleElement};
