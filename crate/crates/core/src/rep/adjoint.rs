//! Recovering `ι(a*) = ι(a)*` from an ortholattice representation.

use super::{format_element, induce_lattice_rep, rng, verify_ortho_rep, RingRep, DEFAULT_SAMPLES};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::ipspace::IPSpace;
use crate::lattice::Lattice;
use crate::linalg::{Matrix, Subspace};
use crate::ortho::{verify_ortho_frame, FrameKind, FrameWitness};
use crate::ring::{BlockMatrix, MatrixRing, RightIdeal};

/// Both sides of: for `U ⊥ W`, `φ = π_W φ π_U` and `ψ = π_U ψ π_W`,
/// `ψ = φ*` iff `im(π_U − φ) ⊥ im(π_W + ψ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SandwichVerdict {
    pub adjoint: bool,
    pub orthogonal: bool,
}

impl SandwichVerdict {
    pub fn agree(&self) -> bool {
        self.adjoint == self.orthogonal
    }
}

fn spaces_orthogonal<F: Field>(space: &IPSpace<F>, x: &Subspace<F>, y: &Subspace<F>) -> bool {
    if x.is_zero() || y.is_zero() {
        return true;
    }
    space
        .conj_matrix(x.basis())
        .mul(space.gram())
        .mul(&y.basis_columns())
        .is_zero()
}

pub fn sandwich_adjoint_test<F: Field>(
    space: &IPSpace<F>,
    u: &Subspace<F>,
    w: &Subspace<F>,
    phi: &Matrix<F>,
    psi: &Matrix<F>,
) -> Result<SandwichVerdict> {
    if !spaces_orthogonal(space, u, w) {
        return Err(Error::PreconditionFailed(format!("U = {u} is not orthogonal to W = {w}")));
    }
    let pu = space.ortho_projection(u)?;
    let pw = space.ortho_projection(w)?;
    if pw.mul(phi).mul(&pu) != *phi {
        return Err(Error::PreconditionFailed(format!("φ ≠ π_W φ π_U for φ = {phi}")));
    }
    if pu.mul(psi).mul(&pw) != *psi {
        return Err(Error::PreconditionFailed(format!("ψ ≠ π_U ψ π_W for ψ = {psi}")));
    }
    let adjoint = space.adjoint(phi) == *psi;
    let left = Subspace::column_space(&pu.sub(phi));
    let right = Subspace::column_space(&pw.add(psi));
    let orthogonal = spaces_orthogonal(space, &left, &right);
    Ok(SandwichVerdict { adjoint, orthogonal })
}

/// `gR` is a common complement of `eR` and `fR` inside `eR + fR`.
pub fn is_valid_axis<F: Field>(ring: &MatrixRing<F>, e: &RightIdeal<F>, f: &RightIdeal<F>, g: &RightIdeal<F>) -> bool {
    ring.is_perspective_via(e, f, g)
}

/// For projections `e ⊥ f` with `eR ∼_{gR} fR`: the element `ω(e) ∈ fR` with
/// `e − ω(e) ∈ gR`, and `c = ω(e)e ∈ fRe`, which is left cancellable on `eRe`.
pub fn cancellator<F: Field>(
    ring: &MatrixRing<F>,
    e: &BlockMatrix<F>,
    f: &BlockMatrix<F>,
    g: &BlockMatrix<F>,
) -> Result<BlockMatrix<F>> {
    if !ring.is_projection(e) || !ring.is_projection(f) {
        return Err(Error::PreconditionFailed("e and f must be projections".into()));
    }
    if !ring.projections_orthogonal(e, f) {
        return Err(Error::PreconditionFailed(format!("{e} is not orthogonal to {f}")));
    }
    if ring.is_zero(e) {
        return Ok(ring.zero());
    }
    let (er, fr, gr) = (ring.right_ideal(e), ring.right_ideal(f), ring.right_ideal(g));
    if !is_valid_axis(ring, &er, &fr, &gr) {
        return Err(Error::NoSolution(format!("{g}R is not a common complement of eR and fR")));
    }
    let field = ring.field();
    let mut omega = Vec::with_capacity(e.blocks.len());
    for ((eb, fs), gs) in e.blocks.iter().zip(&fr).zip(&gr) {
        let n = eb.rows();
        if fs.is_zero() {
            omega.push(Matrix::zeros(field, n, n));
            continue;
        }
        let fb = fs.basis_columns();
        let system = if gs.is_zero() { fb.clone() } else { fb.hstack(&gs.basis_columns()) };
        let coeffs = system
            .solve(eb)
            .ok_or_else(|| Error::NoSolution(format!("e ∉ fR + gR in block of size {n}")))?;
        let alpha: Vec<usize> = (0..fb.cols()).collect();
        omega.push(fb.mul(&coeffs.select_rows(&alpha)));
    }
    let omega = BlockMatrix { blocks: omega };
    let c = ring.mul(&omega, e);
    if ring.mul(&ring.mul(f, &c), e) != c {
        return Err(Error::CancellationFailure(format!("c = {c} is not in fRe")));
    }
    let corner: Vec<BlockMatrix<F>> = ring.units().iter().map(|u| ring.mul(&ring.mul(e, u), e)).collect();
    let products: Vec<BlockMatrix<F>> = corner.iter().map(|x| ring.mul(&c, x)).collect();
    if vec_rank(field, &products) != vec_rank(field, &corner) {
        return Err(Error::CancellationFailure(format!("x ↦ cx is not injective on eRe for c = {c}")));
    }
    Ok(c)
}

fn vec_rank<F: Field>(field: &F, xs: &[BlockMatrix<F>]) -> usize {
    let rows: Vec<Vec<F::Elem>> = xs
        .iter()
        .map(|x| x.blocks.iter().flat_map(|m| m.entries().iter().cloned()).collect())
        .collect();
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    Matrix::from_rows(field, rows).expect("equal-length rows").rank()
}

fn matrix_rank<F: Field>(field: &F, xs: &[Matrix<F>]) -> usize {
    let rows: Vec<Vec<F::Elem>> = xs.iter().map(|m| m.entries().to_vec()).collect();
    if rows.is_empty() {
        return 0;
    }
    Matrix::from_rows(field, rows).expect("equal-length rows").rank()
}

/// Counts of what [`recover_adjoints`] verified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointRecovery {
    /// Off-diagonal generators `a ∈ e_j R e_i`, `i ≠ j`.
    pub off_diagonal: usize,
    /// Diagonal generators `a ∈ e_i R e_i`.
    pub diagonal: usize,
    /// Elements checked after reassembling `a = Σ e_j a e_i`.
    pub assembled: usize,
}

fn step_failure(claim: &str, witness: String) -> Error {
    Error::StepFailure {
        claim: claim.into(),
        witness,
    }
}

struct Ctx<'a, F: Field> {
    rep: &'a RingRep<F>,
    ring: &'a MatrixRing<F>,
    space: &'a IPSpace<F>,
}

impl<F: Field> Ctx<'_, F> {
    fn name(&self, a: &BlockMatrix<F>) -> String {
        format_element(self.ring, a)
    }

    fn image(&self, e: &BlockMatrix<F>) -> Subspace<F> {
        Subspace::column_space(&self.rep.apply(e))
    }

    /// `ι(a*) = ι(a)*` for `a ∈ fRe`, `e ⊥ f`: `(e − a)R ⊥ (f + a*)R`, push
    /// the orthogonality through `η`, then read off the adjoint.
    fn off_diagonal(&self, e: &BlockMatrix<F>, f: &BlockMatrix<F>, a: &BlockMatrix<F>) -> Result<()> {
        let r = self.ring;
        let b = r.star(a);
        let left = r.sub(e, a);
        let right = r.add(f, &b);
        if !r.is_zero(&r.mul(&r.star(&left), &right)) {
            return Err(step_failure("(e - a)R ⊥ (f + a*)R", self.name(a)));
        }
        if !spaces_orthogonal(self.space, &self.image(&left), &self.image(&right)) {
            return Err(step_failure("orthogonality carried by η", self.name(a)));
        }
        let (u, w) = (self.image(e), self.image(f));
        let (phi, psi) = (self.rep.apply(a), self.rep.apply(&b));
        let verdict = sandwich_adjoint_test(self.space, &u, &w, &phi, &psi)
            .map_err(|err| step_failure("sandwich precondition", format!("{}: {err}", self.name(a))))?;
        if !verdict.orthogonal || !verdict.adjoint {
            return Err(step_failure(
                "ι(a*) = ι(a)* from orthogonal images",
                format!("{} ({verdict:?})", self.name(a)),
            ));
        }
        Ok(())
    }

    /// `a ∈ eRe`: with `c ∈ fRe` cancellable, `ι(b)ι(c)* = (ι(c)ι(a))*` and
    /// cancelling `ι(c)` gives `ι(b) = ι(a)*` for `b = a*`.
    fn diagonal(&self, e: &BlockMatrix<F>, f: &BlockMatrix<F>, c: &BlockMatrix<F>, a: &BlockMatrix<F>) -> Result<()> {
        let r = self.ring;
        let sp = self.space;
        let b = r.star(a);
        let ca = r.mul(c, a);
        self.off_diagonal(e, f, &ca)?;
        let (ia, ib, ic) = (self.rep.apply(a), self.rep.apply(&b), self.rep.apply(c));
        let lhs = ib.mul(&sp.adjoint(&ic));
        let rhs = sp.adjoint(&ic.mul(&ia));
        if lhs != rhs {
            return Err(step_failure("ι(b)ι(c)* = (ι(c)ι(a))*", self.name(a)));
        }
        if ic.mul(&sp.adjoint(&ib)) != ic.mul(&ia) {
            return Err(step_failure("ι(c)ι(b)* = ι(c)ι(a)", self.name(a)));
        }
        if sp.adjoint(&ib) != ia {
            return Err(step_failure("cancellation of ι(c)", self.name(a)));
        }
        Ok(())
    }

    /// `ξ ↦ ι(c)ξ` is injective on `π End(V) π` with `π = ι(e)`.
    fn check_cancellable(&self, e: &BlockMatrix<F>, c: &BlockMatrix<F>) -> Result<()> {
        let field = self.ring.field();
        let d = self.space.dim();
        let p = self.rep.apply(e);
        let ic = self.rep.apply(c);
        let corner: Vec<Matrix<F>> = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| p.mul(&Matrix::unit(field, d, i, j)).mul(&p))
            .collect();
        let moved: Vec<Matrix<F>> = corner.iter().map(|x| ic.mul(x)).collect();
        if matrix_rank(field, &moved) != matrix_rank(field, &corner) {
            return Err(step_failure("ι(c) left cancellable on the corner", self.name(c)));
        }
        Ok(())
    }
}

fn distinct_nonzero<F: Field>(ring: &MatrixRing<F>, xs: impl IntoIterator<Item = BlockMatrix<F>>) -> Vec<BlockMatrix<F>> {
    let mut out: Vec<BlockMatrix<F>> = Vec::new();
    for x in xs {
        if !ring.is_zero(&x) && !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// Axis for `eR ∼^⊥ fR`: the witness if it is valid, else the first valid
/// graph `(e + f u e)R` over matrix units `u`.
fn find_axis<F: Field>(
    ring: &MatrixRing<F>,
    e: &BlockMatrix<F>,
    f: &BlockMatrix<F>,
    witness: Option<&RightIdeal<F>>,
) -> Option<BlockMatrix<F>> {
    let (er, fr) = (ring.right_ideal(e), ring.right_ideal(f));
    if let Some(g) = witness {
        if is_valid_axis(ring, &er, &fr, g) {
            return Some(super::ideal_generator(g));
        }
    }
    let units = ring.units();
    let mut candidates: Vec<BlockMatrix<F>> = units.iter().map(|u| ring.mul(&ring.mul(f, u), e)).collect();
    let sum = candidates.iter().fold(ring.zero(), |acc, x| ring.add(&acc, x));
    candidates.push(sum);
    candidates
        .into_iter()
        .map(|y| ring.add(e, &y))
        .find(|g| is_valid_axis(ring, &er, &fr, &ring.right_ideal(g)))
}

/// Runs the adjoint-recovery argument on a ring representation `rep` whose
/// induced lattice map is an ortholattice representation, for an orthogonal
/// semiframe of `Lat^⊥(R)`.
///
/// A [`Error::StepFailure`] under verified preconditions is a genuine
/// inconsistency, not an expected outcome.
pub fn recover_adjoints<F: Field>(
    rep: &RingRep<F>,
    semiframe: &FrameWitness<RightIdeal<F>>,
    seed: u64,
) -> Result<AdjointRecovery> {
    let ring = rep.ring();
    let space = rep.space();
    let pre = rep.verify();
    if !pre.is_pass() {
        return Err(Error::PreconditionFailed(format!("ring rep: {pre}")));
    }
    if !space.is_anisotropic() {
        return Err(Error::PreconditionFailed("target form is not certified anisotropic".into()));
    }
    let lattice = induce_lattice_rep(rep, seed, 10)?;
    if !lattice.report.is_pass() {
        return Err(Error::PreconditionFailed(format!("induced lattice map: {}", lattice.report)));
    }
    let ortho = verify_ortho_rep(rep, seed, 10)?;
    if !ortho.is_pass() {
        return Err(Error::PreconditionFailed(format!("ortholattice rep: {ortho}")));
    }
    if !matches!(semiframe.kind, FrameKind::OrthoSemiframe { .. }) {
        return Err(Error::PreconditionFailed("an orthogonal semiframe is required".into()));
    }
    let frame_report = verify_ortho_frame(ring, semiframe);
    if !frame_report.is_pass() {
        return Err(Error::PreconditionFailed(format!("semiframe: {frame_report}")));
    }

    let ctx = Ctx { rep, ring, space };
    let e: Vec<BlockMatrix<F>> = semiframe.a.iter().map(|x| ring.projection_onto(x)).collect::<Result<_>>()?;
    let partners: Vec<BlockMatrix<F>> = semiframe.b.iter().map(|x| ring.projection_onto(x)).collect::<Result<_>>()?;
    let total = e.iter().fold(ring.zero(), |acc, x| ring.add(&acc, x));
    if total != ring.one() {
        return Err(step_failure("Σ e_i = 1", ctx.name(&total)));
    }
    let units = ring.units();

    let mut off_diagonal = 0;
    for (i, ei) in e.iter().enumerate() {
        for (j, ej) in e.iter().enumerate() {
            if i == j {
                continue;
            }
            let gens = distinct_nonzero(ring, units.iter().map(|u| ring.mul(&ring.mul(ej, u), ei)));
            for a in &gens {
                ctx.off_diagonal(ei, ej, a)?;
            }
            off_diagonal += gens.len();
        }
    }

    let mut diagonal = 0;
    for (i, ei) in e.iter().enumerate() {
        let fi = &partners[i];
        let g = find_axis(ring, ei, fi, semiframe.axes.get(i))
            .ok_or_else(|| step_failure("perspectivity axis for e_i and its partner", ctx.name(ei)))?;
        let c = cancellator(ring, ei, fi, &g).map_err(|err| step_failure("cancellator", format!("{}: {err}", ctx.name(ei))))?;
        ctx.off_diagonal(ei, fi, &c)?;
        ctx.check_cancellable(ei, &c)?;
        let gens = distinct_nonzero(ring, units.iter().map(|u| ring.mul(&ring.mul(ei, u), ei)));
        for a in &gens {
            ctx.diagonal(ei, fi, &c, a)?;
        }
        diagonal += gens.len();
    }

    let mut sample = units.clone();
    let mut rng = rng(seed);
    sample.extend((0..DEFAULT_SAMPLES).map(|_| super::random_element(ring, &mut rng)));
    for a in &sample {
        let mut parts = ring.zero();
        for ei in &e {
            for ej in &e {
                parts = ring.add(&parts, &ring.mul(&ring.mul(ej, a), ei));
            }
        }
        if parts != *a {
            return Err(step_failure("a = Σ e_j a e_i", ctx.name(a)));
        }
        if rep.apply(&ring.star(a)) != space.adjoint(&rep.apply(a)) {
            return Err(step_failure("ι(a*) = ι(a)* after assembly", ctx.name(a)));
        }
    }

    Ok(AdjointRecovery {
        off_diagonal,
        diagonal,
        assembled: sample.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, Rationals};
    use crate::ortho::build_orthogonal_semiframe;
    use crate::rep::canonical_ring_frame;

    fn dot(n: usize) -> IPSpace<Rationals> {
        IPSpace::standard(Rationals, n).unwrap()
    }

    fn line(v: &[i64]) -> Subspace<Rationals> {
        Subspace::span(&Rationals, v.len(), &[v.iter().map(|&x| q(x, 1)).collect()])
    }

    #[test]
    fn sandwich_examples() {
        let sp = dot(2);
        let (u, w) = (line(&[1, 0]), line(&[0, 1]));
        let c = q(3, 1);
        let phi = Matrix::unit(&Rationals, 2, 1, 0).scale(&c);
        let psi = Matrix::unit(&Rationals, 2, 0, 1).scale(&c);
        let v = sandwich_adjoint_test(&sp, &u, &w, &phi, &psi).unwrap();
        assert!(v.adjoint && v.orthogonal);
        let psi_bad = Matrix::unit(&Rationals, 2, 0, 1).scale(&q(5, 1));
        let v = sandwich_adjoint_test(&sp, &u, &w, &phi, &psi_bad).unwrap();
        assert!(!v.adjoint && !v.orthogonal);
        let zero = Matrix::zeros(&Rationals, 2, 2);
        let v = sandwich_adjoint_test(&sp, &u, &w, &zero, &zero).unwrap();
        assert!(v.adjoint && v.orthogonal);
        assert!(sandwich_adjoint_test(&sp, &u, &u, &zero, &zero).is_err());
        assert!(sandwich_adjoint_test(&sp, &u, &w, &psi, &phi).is_err());
    }

    #[test]
    fn cancellator_example() {
        let r = MatrixRing::full(Rationals, 2).unwrap();
        let (e, f) = (r.unit(0, 0, 0), r.unit(0, 1, 1));
        let g = BlockMatrix::single(Matrix::from_i64(&Rationals, &[&[1, 0], &[1, 0]]));
        let c = cancellator(&r, &e, &f, &g).unwrap();
        assert_eq!(c, r.neg(&r.unit(0, 1, 0)));
        let c0 = cancellator(&r, &r.zero(), &f, &r.zero()).unwrap();
        assert!(r.is_zero(&c0));
        assert!(matches!(cancellator(&r, &e, &f, &e), Err(Error::NoSolution(_))));
    }

    fn semiframe_for(r: &MatrixRing<Rationals>) -> FrameWitness<RightIdeal<Rationals>> {
        let n = r.dims()[0];
        build_orthogonal_semiframe(r, &canonical_ring_frame(r, n).unwrap()).unwrap()
    }

    #[test]
    fn identity_reps_recover() {
        for n in [2, 3] {
            let r = MatrixRing::full(Rationals, n).unwrap();
            let rep = RingRep::identity(&r).unwrap();
            let out = recover_adjoints(&rep, &semiframe_for(&r), 0).unwrap();
            assert!(out.off_diagonal > 0 && out.diagonal >= n);
        }
    }

    #[test]
    fn orthogonal_conjugation_recovers() {
        let r = MatrixRing::full(Rationals, 3).unwrap();
        let qm = Matrix::from_rows(
            &Rationals,
            vec![
                vec![q(3, 5), q(4, 5), q(0, 1)],
                vec![q(-4, 5), q(3, 5), q(0, 1)],
                vec![q(0, 1), q(0, 1), q(1, 1)],
            ],
        )
        .unwrap();
        let rep = RingRep::conjugation(&r, dot(3), &qm).unwrap();
        recover_adjoints(&rep, &semiframe_for(&r), 3).unwrap();
    }

    #[test]
    fn shear_fails_precondition() {
        let r = MatrixRing::full(Rationals, 2).unwrap();
        let s = Matrix::from_i64(&Rationals, &[&[1, 1], &[0, 1]]);
        let rep = RingRep::conjugation(&r, dot(2), &s).unwrap();
        let err = recover_adjoints(&rep, &semiframe_for(&r), 0).unwrap_err();
        assert!(matches!(err, Error::PreconditionFailed(ref m) if m.contains("PerpViolation")), "{err}");
    }
}
