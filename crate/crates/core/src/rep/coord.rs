//! Coordinatizing a subspace lattice from a genuine frame `V = ⊕ a_i` with
//! all `a_i` perspective to `a_0`.
//!
//! With `u_1..u_k` a basis of `a_0` and `τ_i: a_0 → a_i` the transport whose
//! graph lies in the axis `a_{0i}`, the basis `C = [u, τ_1 u, …]` identifies
//! `V` with `F^n ⊗ F^k`, and the coordinate ring is `R₀ = C (M_n(F) ⊗ 1) C⁻¹`.
//! Its principal right ideals correspond to subspaces `X ≤ F^n`, and
//! `ω(X) = C (X ⊗ F^k)`.

use rand::Rng;
use serde_json::Value;

use super::rng;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Matrix, Subspace, VectorSpace};
use crate::ortho::{verify_frame, FrameKind, FrameWitness};
use crate::report::Report;

/// The sublattice `L` being coordinatized.
#[derive(Clone, Debug)]
pub enum SubspaceFamily<F: Field> {
    /// Every subspace of `F^d`.
    All(usize),
    /// An explicit finite list closed under `+` and `∩`.
    List(Vec<Subspace<F>>),
}

impl<F: Field> SubspaceFamily<F> {
    pub fn contains(&self, s: &Subspace<F>) -> bool {
        match self {
            SubspaceFamily::All(d) => s.ambient_dim() == *d,
            SubspaceFamily::List(xs) => xs.contains(s),
        }
    }

    /// `{"subspaces": [..]}` or `{"all": true}`, in a space of dimension `d`.
    pub fn from_json(field: &F, d: usize, v: &Value) -> Result<Self> {
        if v.get("all").and_then(Value::as_bool) == Some(true) {
            return Ok(SubspaceFamily::All(d));
        }
        let list = v
            .get("subspaces")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("family needs `subspaces` or `all`".into()))?;
        let subs = list
            .iter()
            .map(|s| Subspace::from_json(field, d, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(SubspaceFamily::List(subs))
    }
}

/// A genuine `n`-frame of subspaces: parts `a` and axes `a_{0i}` (entry
/// `i-1`), with each `b_i = a_0`.
pub fn genuine_frame<F: Field>(a: Vec<Subspace<F>>, axes: Vec<Subspace<F>>) -> FrameWitness<Subspace<F>> {
    let n = a.len();
    FrameWitness {
        kind: FrameKind::Skew { n, m: n },
        b: a.first().map(|x| vec![x.clone(); n - 1]).unwrap_or_default(),
        a,
        a0: axes,
        axes: Vec::new(),
    }
}

#[derive(Clone, Debug)]
pub struct CoordRing<F: Field> {
    field: F,
    n: usize,
    k: usize,
    basis: Matrix<F>,
    basis_inv: Matrix<F>,
}

impl<F: Field> CoordRing<F> {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn part_dim(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.n * self.k
    }

    /// `C`: columns `τ_i u_r` at position `i·k + r`.
    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    /// `C (A ⊗ 1_k) C⁻¹` for an `n × n` coefficient matrix `A`.
    pub fn element(&self, coeffs: &Matrix<F>) -> Matrix<F> {
        let k = self.k;
        let f = &self.field;
        let kron = Matrix::from_fn(f, self.dim(), self.dim(), |r, c| {
            if r % k == c % k {
                coeffs.get(r / k, c / k).clone()
            } else {
                f.zero()
            }
        });
        self.basis.mul(&kron).mul(&self.basis_inv)
    }

    /// Inverse of [`CoordRing::element`]; `None` off `R₀`.
    pub fn coordinates(&self, phi: &Matrix<F>) -> Option<Matrix<F>> {
        let k = self.k;
        let local = self.basis_inv.mul(phi).mul(&self.basis);
        let coeffs = Matrix::from_fn(&self.field, self.n, self.n, |i, j| local.get(i * k, j * k).clone());
        (self.element(&coeffs) == *phi).then_some(coeffs)
    }

    /// `ε_ij`: the frame idempotents on the diagonal, transports elsewhere.
    pub fn unit(&self, i: usize, j: usize) -> Matrix<F> {
        self.element(&Matrix::unit(&self.field, self.n, i, j))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Matrix<F> {
        self.element(&Matrix::random(&self.field, self.n, self.n, rng))
    }

    /// `ω(X) = C (X ⊗ F^k)` for an ideal tag `X ≤ F^n`.
    pub fn omega(&self, tag: &Subspace<F>) -> Subspace<F> {
        let f = &self.field;
        let cols: Vec<Vec<F::Elem>> = tag
            .basis_vectors()
            .iter()
            .flat_map(|x| {
                (0..self.k).map(move |r| {
                    let mut v = vec![f.zero(); self.dim()];
                    for (i, xi) in x.iter().enumerate() {
                        v[i * self.k + r] = xi.clone();
                    }
                    self.basis.mul_vec(&v)
                })
            })
            .collect();
        Subspace::span(f, self.dim(), &cols)
    }

    /// Tag of `φR₀`: the column space of the coordinates.
    pub fn tag(&self, phi: &Matrix<F>) -> Option<Subspace<F>> {
        self.coordinates(phi).map(|a| Subspace::column_space(&a))
    }
}

fn solve_split<F: Field>(x: &[F::Elem], part: &Subspace<F>, axis: &Subspace<F>) -> Option<Vec<F::Elem>> {
    let f = part.field();
    let pb = part.basis_columns();
    let system = pb.hstack(&axis.basis_columns());
    let rhs = Matrix::from_columns(f, x.len(), &[x.to_vec()]);
    let sol = system.solve(&rhs)?;
    let alpha: Vec<usize> = (0..pb.cols()).collect();
    Some(pb.mul(&sol.select_rows(&alpha)).column(0))
}

/// Build `R₀` from a genuine frame of order `n ≥ 3` over a prime field and
/// verify closure on `samples` seeded products and sums.
pub fn coordinatize<F: Field>(
    field: &F,
    frame: &FrameWitness<Subspace<F>>,
    seed: u64,
    samples: usize,
) -> Result<CoordRing<F>> {
    if !field.is_prime_field() {
        return Err(Error::NonPrimeField);
    }
    let n = frame.a.len();
    if n < 3 {
        return Err(Error::NotAFrame(format!("order {n} < 3")));
    }
    if frame.a0.len() != n - 1 {
        return Err(Error::NotAFrame(format!("{} axes for {n} parts", frame.a0.len())));
    }
    let d = frame.a[0].ambient_dim();
    let lattice = VectorSpace::new(field.clone(), d);
    let as_frame = genuine_frame(frame.a.clone(), frame.a0.clone());
    let report = verify_frame(&lattice, &as_frame);
    if !report.is_pass() {
        return Err(Error::NotAFrame(report.to_string()));
    }
    let k = frame.a[0].dim();
    if frame.a.iter().any(|x| x.dim() != k) || n * k != d {
        return Err(Error::NotAFrame("parts must have equal dimension and span V".into()));
    }

    let u = frame.a[0].basis_vectors();
    let mut cols = u.clone();
    for i in 1..n {
        for x in &u {
            let y = solve_split(x, &frame.a[i], &frame.a0[i - 1])
                .ok_or_else(|| Error::NotAFrame(format!("a_0 not transported to a_{i} along a_0{i}")))?;
            cols.push(y);
        }
    }
    let basis = Matrix::from_columns(field, d, &cols);
    let basis_inv = basis
        .inverse()
        .ok_or_else(|| Error::NotAFrame("transported bases are dependent".into()))?;
    let ring = CoordRing {
        field: field.clone(),
        n,
        k,
        basis,
        basis_inv,
    };

    for i in 0..n {
        if Subspace::column_space(&ring.unit(i, i)) != frame.a[i] {
            return Err(Error::InternalProofViolation(format!("ε_{i}{i} does not project onto a_{i}")));
        }
    }
    for i in 1..n {
        let t = ring.unit(i, 0);
        for x in &u {
            let diff: Vec<F::Elem> = x.iter().zip(t.mul_vec(x)).map(|(a, b)| field.sub(a, &b)).collect();
            if !frame.a0[i - 1].contains(&diff) {
                return Err(Error::InternalProofViolation(format!("ε_{i}0 leaves the graph a_0{i}")));
            }
        }
    }

    let mut rng = rng(seed);
    for _ in 0..samples {
        let (x, y) = (ring.random(&mut rng), ring.random(&mut rng));
        for (what, z) in [("product", x.mul(&y)), ("sum", x.add(&y)), ("difference", x.sub(&y))] {
            if ring.coordinates(&z).is_none() {
                return Err(Error::ClosureFailure(format!("{what} of {x} and {y}")));
            }
        }
    }
    Ok(ring)
}

/// What [`CoordRing::verify`] established.
#[derive(Clone, Debug)]
pub struct CoordCheck {
    pub report: Report,
    /// Ideal tags checked exhaustively (finite fields).
    pub tags_checked: usize,
    pub sampled: usize,
    /// `ω` hits every member of a finite family.
    pub bijective: Option<bool>,
}

impl<F: Field> CoordRing<F> {
    /// `ω(φR₀) = im φ` on sampled `φ`; for finite fields also exhaustively
    /// over all ideal tags together with order preservation, reflection and
    /// injectivity, and surjectivity onto a listed family.
    pub fn verify(&self, family: &SubspaceFamily<F>, seed: u64, samples: usize, guard: usize) -> Result<CoordCheck> {
        let mut report = Report::new();
        let mut rng = rng(seed);
        for _ in 0..samples {
            let phi = self.random(&mut rng);
            let psi = self.random(&mut rng);
            let tag = self.tag(&phi).expect("sampled from R₀");
            let image = Subspace::column_space(&phi);
            report.check(self.omega(&tag) == image, "ω(φR₀) = im φ", || format!("φ = {phi}"));
            report.check(family.contains(&image), "ω lands in L", || format!("im φ = {image}"));
            let prod = Subspace::column_space(&phi.mul(&psi));
            report.check(prod.is_subspace_of(&image), "im φψ ⊆ im φ", || format!("φ = {phi}, ψ = {psi}"));
        }

        let mut tags_checked = 0;
        let mut bijective = None;
        if self.field.order().is_some() {
            let tags = Subspace::enumerate_all(&self.field, self.n, guard)?;
            let images: Vec<Subspace<F>> = tags.iter().map(|t| self.omega(t)).collect();
            for (t, w) in tags.iter().zip(&images) {
                let phi = self.element(&t.generator());
                report.check(Subspace::column_space(&phi) == *w, "ω(φR₀) = im φ", || format!("tag {t}"));
                report.check(family.contains(w), "ω lands in L", || format!("ω({t}) = {w}"));
            }
            for (i, (s, ws)) in tags.iter().zip(&images).enumerate() {
                for (t, wt) in tags.iter().zip(&images).skip(i + 1) {
                    report.check(ws != wt, "ω injective", || format!("ω({s}) = ω({t})"));
                    report.check(
                        s.is_subspace_of(t) == ws.is_subspace_of(wt) && t.is_subspace_of(s) == wt.is_subspace_of(ws),
                        "ω preserves and reflects order",
                        || format!("{s}, {t}"),
                    );
                }
            }
            tags_checked = tags.len();
            bijective = match family {
                SubspaceFamily::List(xs) => Some(xs.len() == tags.len() && xs.iter().all(|x| images.contains(x))),
                SubspaceFamily::All(d) => Subspace::enumerate_all(&self.field, *d, guard)
                    .ok()
                    .map(|all| all.len() == tags.len()),
            };
            if bijective == Some(false) {
                report.push("ω onto L", format!("{} ideals but L differs", tags.len()));
            }
        }
        Ok(CoordCheck {
            report,
            tags_checked,
            sampled: samples,
            bijective,
        })
    }
}

/// The frame `a_i = span(e_i ⊗ F^k)`, `a_{0i} = {(x, −x)}` on blocks `0, i`
/// of `F^{nk}`.
pub fn canonical_subspace_frame<F: Field>(field: &F, n: usize, k: usize) -> FrameWitness<Subspace<F>> {
    let d = n * k;
    let e = |i: usize| -> Vec<F::Elem> { (0..d).map(|j| if j == i { field.one() } else { field.zero() }).collect() };
    let a: Vec<Subspace<F>> = (0..n)
        .map(|i| Subspace::span(field, d, &(0..k).map(|r| e(i * k + r)).collect::<Vec<_>>()))
        .collect();
    let axes: Vec<Subspace<F>> = (1..n)
        .map(|i| {
            let vs: Vec<Vec<F::Elem>> = (0..k)
                .map(|r| {
                    let mut v = e(r);
                    v[i * k + r] = field.neg(&field.one());
                    v
                })
                .collect();
            Subspace::span(field, d, &vs)
        })
        .collect();
    genuine_frame(a, axes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{GaloisField, Rationals};

    #[test]
    fn rationals_cube_gives_full_endomorphisms() {
        let frame = canonical_subspace_frame(&Rationals, 3, 1);
        let r = coordinatize(&Rationals, &frame, 0, 10).unwrap();
        assert_eq!(r.basis(), &Matrix::identity(&Rationals, 3));
        assert_eq!(r.unit(1, 0), Matrix::unit(&Rationals, 3, 1, 0));
        let check = r.verify(&SubspaceFamily::All(3), 1, 20, 64).unwrap();
        assert!(check.report.is_pass(), "{}", check.report);
        assert_eq!(check.tags_checked, 0);
    }

    #[test]
    fn gf3_cube_is_a_bijection() {
        let f = GaloisField::prime(3).unwrap();
        let frame = canonical_subspace_frame(&f, 3, 1);
        let r = coordinatize(&f, &frame, 0, 10).unwrap();
        let all = Subspace::enumerate_all(&f, 3, 64).unwrap();
        assert_eq!(all.len(), 28);
        let check = r.verify(&SubspaceFamily::List(all), 0, 30, 64).unwrap();
        assert!(check.report.is_pass(), "{}", check.report);
        assert_eq!(check.tags_checked, 28);
        assert_eq!(check.bijective, Some(true));
    }

    #[test]
    fn thick_parts() {
        let frame = canonical_subspace_frame(&Rationals, 3, 2);
        let r = coordinatize(&Rationals, &frame, 0, 5).unwrap();
        let x = r.unit(2, 1);
        assert_eq!(Subspace::column_space(&x), frame.a[2]);
        assert!(r.coordinates(&Matrix::unit(&Rationals, 6, 0, 1)).is_none());
    }

    #[test]
    fn rejects_bad_frames() {
        let mut frame = canonical_subspace_frame(&Rationals, 3, 1);
        frame.a[0] = Subspace::zero(&Rationals, 3);
        assert!(matches!(coordinatize(&Rationals, &frame, 0, 1), Err(Error::NotAFrame(_))));
        let small = canonical_subspace_frame(&Rationals, 2, 1);
        assert!(matches!(coordinatize(&Rationals, &small, 0, 1), Err(Error::NotAFrame(_))));
        let f9 = GaloisField::new(3, 2).unwrap();
        let frame = canonical_subspace_frame(&f9, 3, 1);
        assert!(matches!(coordinatize(&f9, &frame, 0, 1), Err(Error::NonPrimeField)));
    }
}
