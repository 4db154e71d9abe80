//! Inputs shared by the benchmarks.

use orthocoord::field::{GaloisField, Rationals};
use orthocoord::{models, IPSpace, Matrix, MatrixRing, OrthoLattice, OrthoRep, Result, RingRep};

/// `Lat(GF(p)^2)` with the standard form, an `MO_{(p+1)/2}`.
pub fn anisotropic_plane(p: u32) -> Result<OrthoLattice> {
    Ok(models::standard_subspace_ortholattice(p, 2)?.0)
}

/// Conjugation by a rational rotation of `ℚ^3`, with its ring.
pub fn rotation_rep() -> Result<(MatrixRing<Rationals>, RingRep<Rationals>)> {
    let ring = MatrixRing::full(Rationals, 3)?;
    let q = orthocoord::suite::rotation_3();
    let rep = RingRep::conjugation(&ring, IPSpace::standard(Rationals, 3)?, &q)?;
    Ok((ring, rep))
}

/// `M_3(GF(3))` with an ortholattice representation given by a basis change.
pub fn gf3_pipeline_input() -> Result<(MatrixRing<GaloisField>, OrthoRep<GaloisField>)> {
    let f = GaloisField::prime(3)?;
    let ring = MatrixRing::full(f.clone(), 3)?;
    let space = IPSpace::sesquilinear(f.clone(), Matrix::identity(&f, 3), Default::default())?;
    let p = Matrix::from_i64(&f, &[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
    Ok((ring, OrthoRep::linear(space, p)?))
}
