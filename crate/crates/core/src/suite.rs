//! The end-to-end property suite behind `demo all`. Each item is a
//! self-contained, seeded check with a wall-clock budget.

use std::time::{Duration, Instant};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{q, Field, GaloisField, Rationals};
use crate::ipspace::IPSpace;
use crate::lattice::{congruences, guard, DEFAULT_GUARD};
use crate::linalg::{Matrix, Subspace};
use crate::models;
use crate::ortho::{search_frame, verify_ortho_frame, FrameKind, PerpCompatibility};
use crate::rep::{
    canonical_subspace_frame, coordinatize, recover_adjoints, ring_embedding_from_ortho_rep, sample_rng,
    sandwich_adjoint_test, verify_ortho_rep, OrthoRep, RingRep, SubspaceFamily,
};
use crate::ring::MatrixRing;

#[derive(Clone, Debug, Serialize)]
pub struct SuiteItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub limit_ms: u128,
}

impl SuiteItem {
    pub fn within_limit(&self) -> bool {
        self.elapsed_ms < self.limit_ms
    }

    pub fn ok(&self) -> bool {
        self.passed && self.within_limit()
    }
}

fn timed(name: &str, limit: Duration, f: impl FnOnce() -> Result<String>) -> SuiteItem {
    let start = Instant::now();
    let outcome = f();
    let elapsed_ms = start.elapsed().as_millis();
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(e) => (false, e.to_string()),
    };
    SuiteItem {
        name: name.into(),
        passed,
        detail,
        elapsed_ms,
        limit_ms: limit.as_millis(),
    }
}

fn fail(what: impl Into<String>) -> Error {
    Error::StepFailure {
        claim: "suite".into(),
        witness: what.into(),
    }
}

/// Every catalog structure passes its validator.
pub fn axiom_suite() -> SuiteItem {
    timed("catalog axioms", Duration::from_secs(5), || {
        let entries = models::catalog()?;
        for e in &entries {
            let r = e.structure.validate();
            if !r.is_pass() {
                return Err(fail(format!("{}: {r}", e.name)));
            }
        }
        Ok(format!("{} structures valid", entries.len()))
    })
}

/// Each modular catalog ortholattice with a skew 2-frame yields an
/// orthogonal semiframe.
pub fn semiframe_suite() -> SuiteItem {
    timed("orthogonal semiframes", Duration::from_secs(10), || {
        let mut built = Vec::new();
        for (name, l) in models::modular_ortholattices()? {
            let Some(frame) = search_frame(l.base(), true, 2, None)? else {
                continue;
            };
            let semi = l.orthogonal_semiframe(&frame)?;
            let report = verify_ortho_frame(&l, &semi);
            if !report.is_pass() || !matches!(semi.kind, FrameKind::OrthoSemiframe { .. }) {
                return Err(fail(format!("{name}: {report}")));
            }
            built.push(name);
        }
        for required in ["MO_2", "MO_3", "Lat(GF(3)^2)"] {
            if !built.iter().any(|n| n == required) {
                return Err(fail(format!("no skew 2-frame found in {required}")));
            }
        }
        Ok(format!("semiframes built for {}", built.join(", ")))
    })
}

/// `Con(Lat R)` matches the ideal lattice of `R`.
pub fn ideal_congruence_suite() -> SuiteItem {
    timed("congruences vs ideals", Duration::from_secs(30), || {
        let mut out = Vec::new();
        for (name, ring, expected) in [
            ("M_2(GF(2))", models::finite_matrix_ring(2, 2)?, 2),
            ("GF(2)xM_2(GF(2))", models::gf2_times_m2_gf2()?, 4),
        ] {
            let r = ring.ideal_congruence_check(guard(64))?;
            if !r.isomorphism || r.ideals != expected || r.congruences != expected {
                return Err(fail(format!("{name}: {r:?}")));
            }
            out.push(format!("{name}: {} <-> {}", r.ideals, r.congruences));
        }
        Ok(out.join("; "))
    })
}

fn random_idempotent<R: Rng>(n: usize, rng: &mut R) -> Matrix<Rationals> {
    let s = Matrix::random_invertible(&Rationals, n, rng);
    let diag: Vec<_> = (0..n).map(|_| if rng.random_bool(0.5) { q(1, 1) } else { q(0, 1) }).collect();
    s.mul(&Matrix::diagonal(&Rationals, &diag)).mul(&s.inverse().expect("invertible"))
}

/// An idempotent is a `⋆`-projection iff it is the orthogonal projection
/// onto its image.
pub fn projection_suite(seed: u64) -> SuiteItem {
    timed("projections vs orthogonal projections", Duration::from_secs(10), || {
        let mut rng = sample_rng(seed);
        let mut positives = 0;
        for n in [2, 3] {
            let space = IPSpace::standard(Rationals, n)?;
            for _ in 0..200 {
                let e = random_idempotent(n, &mut rng);
                let v = space.projection_verdict(&e);
                if !v.coincide() {
                    return Err(fail(format!("verdicts differ at {e}: {v:?}")));
                }
                positives += usize::from(v.is_star_projection);
            }
        }
        Ok(format!("400 idempotents agree ({positives} projections)"))
    })
}

fn random_subspace_in<R: Rng>(space: &IPSpace<Rationals>, within: &Subspace<Rationals>, dim: usize, rng: &mut R) -> Subspace<Rationals> {
    let basis = within.basis_columns();
    loop {
        let coeffs = Matrix::random(&Rationals, basis.cols(), dim, rng);
        let s = Subspace::column_space(&basis.mul(&coeffs));
        if s.dim() == dim {
            debug_assert!(space.is_closed(&s));
            return s;
        }
    }
}

/// Both sides of the sandwich criterion agree on positives, random pairs
/// and perturbed negatives.
pub fn sandwich_suite(seed: u64) -> SuiteItem {
    timed("sandwich adjoint criterion", Duration::from_secs(10), || {
        let mut rng = sample_rng(seed);
        let spaces = [
            ("Q^2", IPSpace::standard(Rationals, 2)?),
            (
                "Q^2 diag(1,2)",
                IPSpace::new(Rationals, Matrix::diagonal(&Rationals, &[q(1, 1), q(2, 1)]), Default::default())?,
            ),
            ("Q^3", IPSpace::standard(Rationals, 3)?),
        ];
        let mut counts = Vec::new();
        for (name, sp) in &spaces {
            let n = sp.dim();
            let full = Subspace::full(&Rationals, n);
            let (mut pos, mut neg) = (0, 0);
            for i in 0..200 {
                let du = 1 + rng.random_range(0..n - 1);
                let u = random_subspace_in(sp, &full, du, &mut rng);
                let up = sp.orthogonal(&u);
                let w = random_subspace_in(sp, &up, 1 + rng.random_range(0..up.dim()), &mut rng);
                let (pu, pw) = (sp.ortho_projection(&u)?, sp.ortho_projection(&w)?);
                let phi = pw.mul(&Matrix::random(&Rationals, n, n, &mut rng)).mul(&pu);
                let psi = if i < 100 {
                    sp.adjoint(&phi)
                } else {
                    let bump = loop {
                        let z = pu.mul(&Matrix::random(&Rationals, n, n, &mut rng)).mul(&pw);
                        if !z.is_zero() {
                            break z;
                        }
                    };
                    sp.adjoint(&phi).add(&bump)
                };
                let v = sandwich_adjoint_test(sp, &u, &w, &phi, &psi)?;
                if !v.agree() || v.adjoint != (i < 100) {
                    return Err(fail(format!("{name}: verdict {v:?} at φ = {phi}, ψ = {psi}")));
                }
                if v.adjoint {
                    pos += 1;
                } else {
                    neg += 1;
                }
            }
            counts.push(format!("{name}: {pos}+/{neg}-"));
        }
        Ok(counts.join("; "))
    })
}

/// Every lattice congruence of a modular ortholattice respects `⊥`.
pub fn congruence_perp_suite() -> SuiteItem {
    timed("congruences respect perp", Duration::from_secs(20), || {
        let mut total = 0;
        for (name, l) in models::modular_ortholattices()? {
            let con = congruences(l.base(), guard(DEFAULT_GUARD))?;
            for theta in &con.congruences {
                if let PerpCompatibility::Incompatible { a, b, .. } = l.check_congruence_perp(theta) {
                    return Err(fail(format!("{name}: {a} θ {b} but not their perps")));
                }
            }
            total += con.len();
        }
        Ok(format!("{total} congruences checked"))
    })
}

/// The orthogonal matrix `(3/5 4/5; −4/5 3/5) ⊕ 1`.
pub fn rotation_3() -> Matrix<Rationals> {
    Matrix::from_rows(
        &Rationals,
        vec![
            vec![q(3, 5), q(4, 5), q(0, 1)],
            vec![q(-4, 5), q(3, 5), q(0, 1)],
            vec![q(0, 1), q(0, 1), q(1, 1)],
        ],
    )
    .expect("3x3")
}

/// The shear `(1 1; 0 1)`.
pub fn shear_2() -> Matrix<Rationals> {
    Matrix::from_i64(&Rationals, &[&[1, 1], &[0, 1]])
}

/// Adjoint recovery succeeds on orthogonal representations and the shear is
/// stopped at the ortholattice check.
pub fn adjoint_recovery_suite(seed: u64) -> SuiteItem {
    timed("adjoint recovery", Duration::from_secs(15), || {
        let m2 = MatrixRing::full(Rationals, 2)?;
        let m3 = MatrixRing::full(Rationals, 3)?;
        let cases = [
            ("identity on M_2(Q)", RingRep::identity(&m2)?, &m2),
            ("identity on M_3(Q)", RingRep::identity(&m3)?, &m3),
            ("rotation on M_3(Q)", RingRep::conjugation(&m3, IPSpace::standard(Rationals, 3)?, &rotation_3())?, &m3),
        ];
        let mut out = Vec::new();
        for (name, rep, ring) in &cases {
            let n = ring.dims()[0];
            let semi = crate::ortho::build_orthogonal_semiframe(*ring, &models::canonical_frame(ring, n)?)?;
            let r = recover_adjoints(rep, &semi, seed)?;
            out.push(format!("{name}: {}+{}+{}", r.off_diagonal, r.diagonal, r.assembled));
        }
        let shear = RingRep::conjugation(&m2, IPSpace::standard(Rationals, 2)?, &shear_2())?;
        let report = verify_ortho_rep(&shear, seed, 10)?;
        let witness = report
            .violations
            .iter()
            .find(|v| v.claim == "PerpViolation")
            .ok_or_else(|| fail("shear conjugation passed the ortholattice check"))?;
        out.push(format!("shear rejected ({})", witness.witness));
        Ok(out.join("; "))
    })
}

/// The lattice-to-ring pipeline reproduces a rotation, and over GF(3) the
/// lattice half holds on all of `Lat(M_3(GF(3)))`.
pub fn pipeline_suite(seed: u64) -> SuiteItem {
    timed("ring embedding from ortholattice rep", Duration::from_secs(30), || {
        let m3 = MatrixRing::full(Rationals, 3)?;
        let qm = rotation_3();
        let qi = qm.inverse().expect("orthogonal");
        let eta = OrthoRep::linear(IPSpace::standard(Rationals, 3)?, qm.clone())?;
        let out = ring_embedding_from_ortho_rep(&m3, &eta, seed, 50)?;
        if !out.report.is_pass() {
            return Err(fail(format!("M_3(Q): {}", out.report)));
        }
        for (u, m) in m3.units().iter().zip(out.rep.images()) {
            if qm.mul(&u.blocks[0]).mul(&qi) != *m {
                return Err(fail(format!("ι({u}) = {m} differs from the rotation")));
            }
        }
        let star = out.star.map_err(|why| fail(format!("adjoint stage skipped: {why}")))?;
        let mut rng = sample_rng(seed);
        for _ in 0..50 {
            let a = m3.random(&mut rng);
            if out.rep.apply(&m3.star(&a)) != out.rep.space().adjoint(&out.rep.apply(&a)) {
                return Err(fail(format!("ι(a*) != ι(a)* at {a}")));
            }
        }

        let f = GaloisField::prime(3)?;
        let r3 = MatrixRing::full(f.clone(), 3)?;
        let space = IPSpace::sesquilinear(f.clone(), Matrix::identity(&f, 3), Default::default())?;
        let p = Matrix::from_i64(&f, &[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        let eta3 = OrthoRep::linear(space, p)?;
        let out3 = ring_embedding_from_ortho_rep(&r3, &eta3, seed, 20)?;
        if !out3.report.is_pass() || out3.ideals_checked < 28 {
            return Err(fail(format!("M_3(GF(3)): {} on {} ideals", out3.report, out3.ideals_checked)));
        }
        Ok(format!(
            "M_3(Q): {} ideals, adjoints {}+{}+{}; M_3(GF(3)): {} ideals",
            out.ideals_checked, star.off_diagonal, star.diagonal, star.assembled, out3.ideals_checked
        ))
    })
}

/// The canonical frame of `GF(3)^3` coordinatizes all 28 subspaces.
pub fn coordinatization_suite(seed: u64) -> SuiteItem {
    timed("coordinatization", Duration::from_secs(30), || {
        let f = GaloisField::prime(3)?;
        let frame = canonical_subspace_frame(&f, 3, 1);
        let ring = coordinatize(&f, &frame, seed, 30)?;
        let all = Subspace::enumerate_all(&f, 3, guard(64))?;
        let check = ring.verify(&SubspaceFamily::List(all.clone()), seed, 30, guard(64))?;
        if !check.report.is_pass() || check.bijective != Some(true) || check.tags_checked != all.len() {
            return Err(fail(format!("{} (bijective: {:?})", check.report, check.bijective)));
        }
        let fr = f.order().unwrap_or(0);
        Ok(format!("ω bijective onto {} subspaces of GF({fr})^3, {} sampled", all.len(), check.sampled))
    })
}

/// Everything, in a fixed order.
pub fn run_all(seed: u64) -> Vec<SuiteItem> {
    vec![
        axiom_suite(),
        semiframe_suite(),
        ideal_congruence_suite(),
        projection_suite(seed),
        sandwich_suite(seed),
        congruence_perp_suite(),
        adjoint_recovery_suite(seed),
        pipeline_suite(seed),
        coordinatization_suite(seed),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_item_passes() {
        for item in run_all(0) {
            assert!(item.passed, "{}: {}", item.name, item.detail);
        }
    }
}
