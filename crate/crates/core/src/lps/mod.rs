//! Finite checks of the partial-semigroup axioms behind the abstract form of
//! the theorem: associativity with definedness, adequacy, homomorphisms,
//! ideals, layered structures and tetris actions, and the `FIN_{<=k}`
//! instance.
//!
//! Adequacy asks for common right multipliers of every finite subset, which
//! a finite truncation of an infinite structure cannot supply near its edge.
//! Each adequacy failure is therefore classified against the table's
//! geometry: failures touching the last coordinate are `boundary` and do not
//! fail a check.

mod checks;
mod file;
mod fin;
mod report;
mod table;

pub use checks::{
    check_adequate, check_associativity, check_closed, check_homomorphism, check_ideal, check_identity,
    check_layered, check_tetris_action, ElementMap, LayeredStructure, TetrisActionData, MAX_SUBSETS,
};
pub use file::{ActionFile, GeometryFile, MapFile, TableFile, TableSpec};
pub use fin::{fin_instance, fin_table, MAX_CARRIER};
pub use report::{AxiomResult, Boundary, CheckReport, Counterexample, Scope, Violation, MAX_EXAMPLES};
pub use table::{phi, Geometry, PartialSemigroupTable};

/// Every check on the `FIN_{<=k}(dim)` instance: associativity, layering
/// with adequacy up to `horizon`, and the tetris action.
pub fn check_fin_instance(k: u8, dim: usize, horizon: usize) -> crate::Result<CheckReport> {
    let (ls, act) = fin_instance(k, dim)?;
    let mut report = check_associativity(ls.table());
    report.merge(check_layered(&ls, horizon)?);
    report.merge(check_tetris_action(&ls, &act)?);
    Ok(report)
}
