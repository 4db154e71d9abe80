//! Exact computation with modular ortholattices, regular and `⋆`-regular
//! rings, frames, inner product spaces over `ℚ` and `GF(p^k)`, and their
//! representations.

pub mod error;
pub mod field;
pub mod ipspace;
pub mod lattice;
pub mod linalg;
pub mod models;
pub mod ortho;
pub mod rep;
pub mod report;
pub mod ring;
pub mod suite;

pub use error::{Error, Result};
pub use field::{Field, FieldKind, GaloisField, Involution, Rationals};
pub use ipspace::IPSpace;
pub use lattice::{Congruence, FiniteLattice};
pub use linalg::{Matrix, Subspace};
pub use ortho::{FrameKind, FrameWitness, OrthoLattice};
pub use rep::{OrthoRep, RingRep};
pub use report::{Report, Violation};
pub use ring::{BlockMatrix, MatrixRing, RightIdeal, TableRing};
