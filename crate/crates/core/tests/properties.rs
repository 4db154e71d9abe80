use num_bigint::BigInt;
use num_rational::BigRational;
use orthocoord::field::{Field, GaloisField, Rationals};
use orthocoord::lattice::congruences;
use orthocoord::models;
use orthocoord::ortho::{search_frame, verify_ortho_frame, PerpCompatibility};
use orthocoord::rep::{
    format_element, induce_lattice_rep, parse_element, ring_embedding_from_ortho_rep, sample_rng, sandwich_adjoint_test,
    verify_ortho_rep,
};
use orthocoord::{BlockMatrix, IPSpace, Involution, Matrix, MatrixRing, OrthoRep, RingRep, Subspace};
use proptest::prelude::*;

type Q = Matrix<Rationals>;

fn int_matrix(rows: usize, cols: usize, entries: &[i64]) -> Q {
    Matrix::from_fn(&Rationals, rows, cols, |i, j| Rationals.from_i64(entries[i * cols + j]))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The rotation with cosine `(m²−k²)/(m²+k²)`, embedded in the top-left
/// corner of an `n × n` identity.
fn pythagorean_rotation(n: usize, m: i64, k: i64) -> Q {
    let c = m * m + k * k;
    let (a, b) = (m * m - k * k, 2 * m * k);
    let mut r = Matrix::identity(&Rationals, n);
    r.set(0, 0, rat(a, c));
    r.set(0, 1, rat(b, c));
    r.set(1, 0, rat(-b, c));
    r.set(1, 1, rat(a, c));
    r
}

fn projector(space: &IPSpace<Rationals>, b: &Q) -> Q {
    space.ortho_projection(&Subspace::column_space(b)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// `ψ = φ*` exactly when `im(π_U − φ) ⊥ im(π_W + ψ)`, for `φ` sandwiched
    /// between `π_W` and `π_U` with `W ⊥ U`.
    #[test]
    fn sandwich_equivalence(
        u in prop::collection::vec(-3i64..=3, 3),
        x in prop::collection::vec(-3i64..=3, 9),
        z in prop::collection::vec(-3i64..=3, 9),
        weight in 1i64..=4,
        perturb in any::<bool>(),
    ) {
        let u = int_matrix(3, 1, &u);
        prop_assume!(u.rank() == 1);
        let gram = Matrix::diagonal(&Rationals, &[Rationals.from_i64(1), Rationals.from_i64(weight), Rationals.from_i64(1)]);
        let space = IPSpace::new(Rationals, gram, Involution::Identity).unwrap();
        let us = Subspace::column_space(&u);
        let ws = space.orthogonal(&us);
        let (pu, pw) = (projector(&space, &u), space.ortho_projection(&ws).unwrap());
        let phi = pw.mul(&int_matrix(3, 3, &x)).mul(&pu);
        let bump = pu.mul(&int_matrix(3, 3, &z)).mul(&pw);
        let psi = if perturb { space.adjoint(&phi).add(&bump) } else { space.adjoint(&phi) };
        let v = sandwich_adjoint_test(&space, &us, &ws, &phi, &psi).unwrap();
        prop_assert!(v.agree(), "{:?}", v);
        prop_assert_eq!(v.adjoint, !perturb || bump.is_zero());
    }

    /// Conjugation by any invertible matrix is a ring representation whose
    /// image map is a lattice embedding.
    #[test]
    fn conjugations_induce_lattice_embeddings(entries in prop::collection::vec(-4i64..=4, 4), seed in any::<u64>()) {
        let s = int_matrix(2, 2, &entries);
        prop_assume!(s.inverse().is_some());
        let ring = MatrixRing::full(Rationals, 2).unwrap();
        let rep = RingRep::conjugation(&ring, IPSpace::standard(Rationals, 2).unwrap(), &s).unwrap();
        prop_assert!(rep.verify().is_pass());
        let check = induce_lattice_rep(&rep, seed, 10).unwrap();
        prop_assert!(check.report.is_pass(), "{}", check.report);
    }

    /// Orthogonal conjugations preserve orthocomplements and adjoints.
    #[test]
    fn rotations_are_star_representations(m in 2i64..=7, k in 1i64..=6, seed in any::<u64>()) {
        prop_assume!(m != k);
        let r = pythagorean_rotation(3, m, k);
        prop_assert_eq!(r.mul(&r.transpose()), Matrix::identity(&Rationals, 3));
        let ring = MatrixRing::full(Rationals, 3).unwrap();
        let rep = RingRep::conjugation(&ring, IPSpace::standard(Rationals, 3).unwrap(), &r).unwrap();
        prop_assert!(verify_ortho_rep(&rep, seed, 5).unwrap().is_pass());
        prop_assert!(rep.star_compatibility().is_pass());
    }

    /// The two characterizations of orthogonal projections agree on
    /// idempotents over `ℚ` and over the anisotropic plane `GF(3)^2`.
    #[test]
    fn projection_verdicts_coincide(entries in prop::collection::vec(-3i64..=3, 9), mask in 0u8..8, seed in any::<u64>()) {
        let s = int_matrix(3, 3, &entries);
        prop_assume!(s.inverse().is_some());
        let d = Matrix::from_fn(&Rationals, 3, 3, |i, j| Rationals.from_i64(i64::from(i == j && mask >> i & 1 == 1)));
        let e = s.mul(&d).mul(&s.inverse().unwrap());
        prop_assert!(IPSpace::standard(Rationals, 3).unwrap().projection_verdict(&e).coincide());

        let f = GaloisField::prime(3).unwrap();
        let mut rng = sample_rng(seed);
        let t = Matrix::random_invertible(&f, 2, &mut rng);
        let d = Matrix::from_fn(&f, 2, 2, |i, j| f.from_i64(i64::from(i == j && mask >> i & 1 == 1)));
        let e = t.mul(&d).mul(&t.inverse().unwrap());
        prop_assert!(IPSpace::standard(f, 2).unwrap().projection_verdict(&e).coincide());
    }

    /// Element expressions print and parse back to the same matrix.
    #[test]
    fn element_names_round_trip(num in prop::collection::vec(-9i64..=9, 9), den in prop::collection::vec(1i64..=5, 9)) {
        let ring = MatrixRing::full(Rationals, 3).unwrap();
        let m = Matrix::from_fn(&Rationals, 3, 3, |i, j| rat(num[3 * i + j], den[3 * i + j]));
        let a = BlockMatrix::single(m);
        let text = format_element(&ring, &a);
        prop_assert_eq!(parse_element(&ring, &text).unwrap(), a, "{}", text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// The lattice half of the pipeline holds for every basis change of
    /// `GF(3)^3`, checked on all 28 subspaces.
    #[test]
    fn gf3_pipeline_for_any_basis_change(seed in any::<u64>()) {
        let f = GaloisField::prime(3).unwrap();
        let ring = MatrixRing::full(f.clone(), 3).unwrap();
        let p = Matrix::random_invertible(&f, 3, &mut sample_rng(seed));
        let space = IPSpace::sesquilinear(f.clone(), Matrix::identity(&f, 3), Involution::Identity).unwrap();
        let eta = OrthoRep::linear(space, p).unwrap();
        let out = ring_embedding_from_ortho_rep(&ring, &eta, seed, 5).unwrap();
        prop_assert!(out.report.is_pass(), "{}", out.report);
        prop_assert!(out.ideals_checked >= 28);
    }

    /// Over `ℚ^3`, signed permutations and rotations are recovered as
    /// `⋆`-representations.
    #[test]
    fn rational_pipeline_recovers_adjoints(perm in 0usize..6, signs in 0u8..8, m in 2i64..=5, k in 1i64..=4) {
        prop_assume!(m != k);
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let p = Matrix::from_fn(&Rationals, 3, 3, |i, j| {
            let sign = if signs >> i & 1 == 1 { -1 } else { 1 };
            Rationals.from_i64(if perms[perm][i] == j { sign } else { 0 })
        });
        let q = p.mul(&pythagorean_rotation(3, m, k));
        let ring = MatrixRing::full(Rationals, 3).unwrap();
        let eta = OrthoRep::linear(IPSpace::standard(Rationals, 3).unwrap(), q.clone()).unwrap();
        let out = ring_embedding_from_ortho_rep(&ring, &eta, 0, 10).unwrap();
        prop_assert!(out.report.is_pass(), "{}", out.report);
        prop_assert!(out.star.is_ok(), "{:?}", out.star);
        let qi = q.inverse().unwrap();
        for (u, img) in ring.units().iter().zip(out.rep.images()) {
            prop_assert_eq!(&q.mul(&u.blocks[0]).mul(&qi), img);
        }
    }
}

#[test]
fn mo_lattices_are_simple_and_perp_compatible() {
    for k in 1..=6 {
        let l = models::mo_n(k).unwrap();
        assert!(l.is_modular());
        let con = congruences(l.base(), 64).unwrap();
        let expected = if k == 1 { 4 } else { 2 };
        assert_eq!(con.len(), expected, "MO_{k}");
        for theta in &con.congruences {
            assert!(matches!(l.check_congruence_perp(theta), PerpCompatibility::Compatible));
        }
    }
}

/// For `p ≡ 3 (mod 4)` the plane `GF(p)^2` is anisotropic, and its subspace
/// lattice is `MO_{(p+1)/2}` with semiframes built from any skew 2-frame.
#[test]
fn anisotropic_planes_give_mo_lattices_with_semiframes() {
    for p in [3u32, 7, 11] {
        let (l, subs) = models::standard_subspace_ortholattice(p, 2).unwrap();
        assert_eq!(subs.len(), p as usize + 3);
        assert!(l.is_modular());
        let frame = search_frame(l.base(), true, 2, None).unwrap().expect("skew 2-frame");
        let semi = l.orthogonal_semiframe(&frame).unwrap();
        assert!(verify_ortho_frame(&l, &semi).is_pass(), "GF({p})^2");
    }
}

#[test]
fn isotropic_planes_are_rejected() {
    for p in [2u32, 5, 13] {
        let f = GaloisField::prime(p).unwrap();
        assert!(IPSpace::standard(f, 2).is_err(), "GF({p})^2");
    }
}
