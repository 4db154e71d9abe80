//! Exact linear algebra: dense matrices, echelon forms, kernels and
//! canonical subspaces.

mod matrix;
mod subspace;

pub use matrix::{block_diagonal, Echelon, Matrix};
pub use subspace::{Subspace, VectorSpace};

pub(crate) use subspace::subspace_partner_within;
