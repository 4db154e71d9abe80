//! Rings with involution: finite table rings and block matrix rings over a
//! field, with regularity, projections, `Lat(R)` and `Lat^⊥(R)`.

mod matrix;
mod table;

pub use matrix::{BlockMatrix, MatrixRing, RightIdeal};
pub use table::{IdealCongruenceReport, IdealLattice, TableRing, TableRingJson, MAX_TABLE_RING};
