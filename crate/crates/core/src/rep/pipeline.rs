//! From an ortholattice representation of `Lat^⊥(M_n(F))` back to a ring
//! representation: coordinatize the image of the canonical frame, send
//! matrix units to the frame's units, then recover adjoints.

use super::{
    coordinatize, format_element, genuine_frame, ideal_carrier, random_element, recover_adjoints, rng, AdjointRecovery, LatticeMap,
    OrthoRep, RingRep,
};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Subspace, VectorSpace};
use crate::ortho::{build_orthogonal_semiframe, verify_frame, FrameKind, FrameWitness};
use crate::report::Report;
use crate::ring::{MatrixRing, RightIdeal};

/// The skew `n`-frame `a_i = E_ii R`, `a_{0i} = (E_00 − E_i0)R` of a
/// one-block ring `M_n(F)`.
pub fn canonical_ring_frame<F: Field>(ring: &MatrixRing<F>, n: usize) -> Result<FrameWitness<RightIdeal<F>>> {
    if ring.blocks().len() != 1 || ring.dims()[0] != n {
        return Err(Error::PreconditionFailed(format!("the canonical {n}-frame needs R = M_{n}(F)")));
    }
    if n < 2 {
        return Err(Error::PreconditionFailed("frames have order n >= 2".into()));
    }
    let a: Vec<RightIdeal<F>> = (0..n).map(|i| ring.right_ideal(&ring.unit(0, i, i))).collect();
    let axes: Vec<RightIdeal<F>> = (1..n)
        .map(|i| ring.right_ideal(&ring.sub(&ring.unit(0, 0, 0), &ring.unit(0, i, 0))))
        .collect();
    Ok(FrameWitness {
        kind: FrameKind::Skew { n, m: n },
        b: vec![a[0].clone(); n - 1],
        a,
        a0: axes,
        axes: Vec::new(),
    })
}

/// Result of [`ring_embedding_from_ortho_rep`].
#[derive(Clone, Debug)]
pub struct PipelineOutcome<F: Field> {
    pub rep: RingRep<F>,
    /// Ring embedding and `η(aR) = im ι(a)`.
    pub report: Report,
    pub ideals_checked: usize,
    /// `Err` carries the reason the adjoint stage was skipped.
    pub star: std::result::Result<AdjointRecovery, String>,
}

/// Builds `ι: R → End(V)` with `η(aR) = im ι(a)` for `R = M_n(F)`, `n ≥ 3`,
/// over a prime field, then (for `⋆`-regular `R` and an anisotropic target)
/// certifies `ι(a*) = ι(a)*`.
pub fn ring_embedding_from_ortho_rep<F: Field>(
    ring: &MatrixRing<F>,
    eta: &OrthoRep<F>,
    seed: u64,
    samples: usize,
) -> Result<PipelineOutcome<F>> {
    let field = ring.field();
    if !field.is_prime_field() {
        return Err(Error::NonPrimeField);
    }
    if ring.blocks().len() != 1 {
        return Err(Error::PreconditionFailed("a one-block matrix ring is required".into()));
    }
    let n = ring.dims()[0];
    if n < 3 {
        return Err(Error::NotAFrame(format!("order {n} < 3")));
    }
    let frame = canonical_ring_frame(ring, n)?;
    let image = |x: &RightIdeal<F>| -> Result<Subspace<F>> {
        eta.apply(ring, x)
            .ok_or_else(|| Error::PreconditionFailed(format!("η is not given at {}", format_element(ring, &super::ideal_generator(x)))))
    };
    let parts = frame.a.iter().map(image).collect::<Result<Vec<_>>>()?;
    let axes = frame.a0.iter().map(image).collect::<Result<Vec<_>>>()?;
    let target = genuine_frame(parts, axes);
    let check = verify_frame(&VectorSpace::new(field.clone(), eta.space.dim()), &target);
    if !check.is_pass() {
        return Err(Error::FrameImageDegenerate(check.to_string()));
    }
    let coord = coordinatize(field, &target, seed, samples.min(20))?;
    let rep = RingRep::from_fn(ring.clone(), eta.space.clone(), |u| {
        let (i, j) = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| !field.is_zero(u.blocks[0].get(i, j)))
            .expect("matrix unit");
        coord.unit(i, j)
    })?;

    let mut report = Report::new();
    for v in rep.verify().violations {
        report.push(format!("ring embedding: {}", v.claim), v.witness);
    }
    let mut ideals = eta.domain(ring, seed, samples);
    if let LatticeMap::Linear(_) = eta.map {
        let mut r = rng(seed);
        for _ in 0..samples {
            let x = ring.right_ideal(&random_element(ring, &mut r));
            if !ideals.contains(&x) {
                ideals.push(x);
            }
        }
        let (carrier, _) = ideal_carrier(ring, seed, 0);
        for x in carrier {
            if !ideals.contains(&x) {
                ideals.push(x);
            }
        }
    }
    for x in &ideals {
        let expected = eta.apply(ring, x).expect("ideal in the domain of η");
        let got = rep.eta(x);
        report.check(expected == got, "η(aR) = im ι(a)", || {
            format!("a = {}: η(aR) = {expected}, im ι(a) = {got}", format_element(ring, &super::ideal_generator(x)))
        });
    }

    let star = if !report.is_pass() {
        Err("ring embedding failed".to_string())
    } else if let Some(why) = ring.star_regularity_violation() {
        Err(format!("R is not *-regular: {why}"))
    } else if !eta.space.is_anisotropic() {
        Err("target form is not certified anisotropic".to_string())
    } else {
        let semiframe = build_orthogonal_semiframe(ring, &frame)?;
        Ok(recover_adjoints(&rep, &semiframe, seed)?)
    };
    Ok(PipelineOutcome {
        rep,
        report,
        ideals_checked: ideals.len(),
        star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, GaloisField, Rationals};
    use crate::ipspace::IPSpace;
    use crate::linalg::Matrix;

    fn rotation() -> Matrix<Rationals> {
        Matrix::from_rows(
            &Rationals,
            vec![
                vec![q(3, 5), q(4, 5), q(0, 1)],
                vec![q(-4, 5), q(3, 5), q(0, 1)],
                vec![q(0, 1), q(0, 1), q(1, 1)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn identity_is_a_fixed_point() {
        let r = MatrixRing::full(Rationals, 3).unwrap();
        let eta = OrthoRep::linear(IPSpace::standard(Rationals, 3).unwrap(), Matrix::identity(&Rationals, 3)).unwrap();
        let out = ring_embedding_from_ortho_rep(&r, &eta, 0, 10).unwrap();
        assert!(out.report.is_pass(), "{}", out.report);
        for (u, m) in r.units().iter().zip(out.rep.images()) {
            assert_eq!(&u.blocks[0], m);
        }
        assert!(out.star.is_ok());
    }

    #[test]
    fn orthogonal_basis_change_is_recovered() {
        let r = MatrixRing::full(Rationals, 3).unwrap();
        let qm = rotation();
        let qi = qm.inverse().unwrap();
        let eta = OrthoRep::linear(IPSpace::standard(Rationals, 3).unwrap(), qm.clone()).unwrap();
        let out = ring_embedding_from_ortho_rep(&r, &eta, 1, 10).unwrap();
        assert!(out.report.is_pass(), "{}", out.report);
        for (u, m) in r.units().iter().zip(out.rep.images()) {
            assert_eq!(qm.mul(&u.blocks[0]).mul(&qi), *m);
        }
        assert!(out.star.is_ok(), "{:?}", out.star);
    }

    #[test]
    fn gf3_lattice_half() {
        let f = GaloisField::prime(3).unwrap();
        let r = MatrixRing::full(f.clone(), 3).unwrap();
        let p = Matrix::from_i64(&f, &[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        let space = IPSpace::sesquilinear(f.clone(), Matrix::identity(&f, 3), Default::default()).unwrap();
        let eta = OrthoRep::linear(space, p).unwrap();
        let out = ring_embedding_from_ortho_rep(&r, &eta, 0, 5).unwrap();
        assert!(out.report.is_pass(), "{}", out.report);
        assert!(out.ideals_checked >= 28);
        assert!(out.star.is_err());
    }

    #[test]
    fn degenerate_image_is_reported() {
        let r = MatrixRing::full(Rationals, 3).unwrap();
        let flat = Matrix::from_i64(&Rationals, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]]);
        let eta = OrthoRep::linear(IPSpace::standard(Rationals, 3).unwrap(), flat).unwrap();
        assert!(matches!(
            ring_embedding_from_ortho_rep(&r, &eta, 0, 5),
            Err(Error::FrameImageDegenerate(_))
        ));
    }
}
