//! Finite-dimensional inner product spaces `(F^n, ⟨x,y⟩ = σ(x)ᵀ J y)`.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::{Field, Involution};
use crate::lattice::{FiniteLattice, Lattice, Orthocomplemented};
use crate::linalg::{subspace_partner_within, Matrix, Subspace};
use crate::ortho::OrthoLattice;

/// Bound on the number of vectors scanned by the exhaustive anisotropy test.
pub const ANISOTROPY_SCAN_LIMIT: u64 = 1 << 20;

/// `F^n` with an invertible orthosymmetric form. Spaces built by
/// [`IPSpace::new`] are also certified anisotropic.
#[derive(Clone, Debug, PartialEq)]
pub struct IPSpace<F: Field> {
    field: F,
    dim: usize,
    gram: Matrix<F>,
    gram_inv: Matrix<F>,
    sigma: Involution,
}

/// Both sides of the characterization of orthogonal projections.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProjectionVerdict {
    /// `φ² = φ = φ*`.
    pub is_star_projection: bool,
    /// `φ = π_{im φ}`.
    pub equals_projection_onto_image: bool,
}

impl ProjectionVerdict {
    pub fn coincide(&self) -> bool {
        self.is_star_projection == self.equals_projection_onto_image
    }
}

pub fn format_vec<F: Field>(f: &F, v: &[F::Elem]) -> String {
    let parts: Vec<String> = v.iter().map(|x| f.format_elem(x)).collect();
    format!("({})", parts.join(", "))
}

impl<F: Field> IPSpace<F> {
    /// Validate `J`: invertible, then orthosymmetric, then anisotropic.
    pub fn new(field: F, gram: Matrix<F>, sigma: Involution) -> Result<Self> {
        let space = Self::sesquilinear(field, gram, sigma)?;
        if let Some(v) = space.isotropic_vector()? {
            return Err(Error::Isotropic(format_vec(&space.field, &v)));
        }
        Ok(space)
    }

    /// Only invertibility and orthosymmetry are checked.
    pub fn sesquilinear(field: F, gram: Matrix<F>, sigma: Involution) -> Result<Self> {
        field.check_involution(sigma)?;
        if !gram.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Gram matrix is {}x{}",
                gram.rows(),
                gram.cols()
            )));
        }
        let dim = gram.rows();
        let gram_inv = gram.inverse().ok_or(Error::NotInvertibleGram)?;
        let space = IPSpace {
            field,
            dim,
            gram,
            gram_inv,
            sigma,
        };
        space.check_orthosymmetric()?;
        Ok(space)
    }

    /// The standard form `J = I`.
    pub fn standard(field: F, dim: usize) -> Result<Self> {
        let gram = Matrix::identity(&field, dim);
        Self::new(field, gram, Involution::Identity)
    }

    /// `{"dim": n, "gram": [[..]], "sigma": "identity" | "frobenius"}`; the
    /// field entry is resolved by the caller.
    pub fn from_json(field: F, v: &Value) -> Result<Self> {
        let (gram, sigma) = Self::parse_json(&field, v)?;
        Self::new(field, gram, sigma)
    }

    /// Like [`IPSpace::from_json`] but without the anisotropy requirement.
    pub fn sesquilinear_from_json(field: F, v: &Value) -> Result<Self> {
        let (gram, sigma) = Self::parse_json(&field, v)?;
        Self::sesquilinear(field, gram, sigma)
    }

    fn parse_json(field: &F, v: &Value) -> Result<(Matrix<F>, Involution)> {
        let gram = match v.get("gram") {
            Some(g) => Matrix::from_json(field, g)?,
            None => {
                let n = v
                    .get("dim")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Parse("space needs `gram` or `dim`".into()))?;
                Matrix::identity(field, n as usize)
            }
        };
        if let Some(d) = v.get("dim").and_then(Value::as_u64) {
            if d as usize != gram.rows() {
                return Err(Error::DimensionMismatch(format!(
                    "dim = {d} but Gram matrix has {} rows",
                    gram.rows()
                )));
            }
        }
        let sigma = match v.get("sigma").and_then(Value::as_str) {
            Some(s) => Involution::parse(s)?,
            None => Involution::Identity,
        };
        Ok((gram, sigma))
    }

    /// Whether the form is certified anisotropic.
    pub fn is_anisotropic(&self) -> bool {
        matches!(self.isotropic_vector(), Ok(None))
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "field": self.field.kind().to_json(),
            "dim": self.dim,
            "gram": self.gram.to_json(),
            "sigma": self.sigma.name(),
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &Matrix<F> {
        &self.gram
    }

    pub fn sigma(&self) -> Involution {
        self.sigma
    }

    fn conj(&self, x: &F::Elem) -> F::Elem {
        self.field.involute(self.sigma, x).expect("involution checked at construction")
    }

    fn conj_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        v.iter().map(|x| self.conj(x)).collect()
    }

    /// Entrywise `σ`.
    pub fn conj_matrix(&self, m: &Matrix<F>) -> Matrix<F> {
        m.map_entries(|x| self.conj(x))
    }

    /// `σ(M)ᵀ`.
    pub fn conj_transpose(&self, m: &Matrix<F>) -> Matrix<F> {
        self.conj_matrix(m).transpose()
    }

    pub fn inner(&self, x: &[F::Elem], y: &[F::Elem]) -> F::Elem {
        let jy = self.gram.mul_vec(y);
        let f = &self.field;
        x.iter()
            .zip(&jy)
            .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(&self.conj(a), b)))
    }

    /// Row functional `w ↦ ⟨v,w⟩`.
    fn left_functional(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let row = Matrix::from_rows(&self.field, vec![self.conj_vec(v)]).expect("one row");
        row.mul(&self.gram).row(0)
    }

    /// Orthosymmetry holds iff `σ(J)ᵀ = λJ`; otherwise some `v` among `e_i`,
    /// `e_i + e_j` has non-proportional functionals and yields a witness.
    fn check_orthosymmetric(&self) -> Result<()> {
        let f = &self.field;
        let jt = self.conj_transpose(&self.gram);
        let m = jt.mul(&self.gram_inv);
        let n = self.dim;
        let lambda = if n == 0 { f.one() } else { m.get(0, 0).clone() };
        if m == Matrix::identity(f, n).scale(&lambda) {
            return Ok(());
        }
        let unit = |i: usize| -> Vec<F::Elem> {
            (0..n).map(|k| if k == i { f.one() } else { f.zero() }).collect()
        };
        let mut candidates: Vec<Vec<F::Elem>> = (0..n).map(unit).collect();
        for i in 0..n {
            for j in i + 1..n {
                let mut v = unit(i);
                v[j] = f.one();
                candidates.push(v);
            }
        }
        for v in candidates {
            let r1 = self.left_functional(&v);
            let ker = Matrix::from_rows(f, vec![r1]).expect("one row").kernel();
            for w in ker.row_vectors() {
                if !f.is_zero(&self.inner(&w, &v)) {
                    return Err(Error::NotOrthosymmetric {
                        v: format_vec(f, &v),
                        w: format_vec(f, &w),
                    });
                }
            }
        }
        Err(Error::InternalProofViolation(
            "non-scalar σ(J)ᵀJ⁻¹ but no orthosymmetry witness found".into(),
        ))
    }

    /// Some `v ≠ 0` with `⟨v,v⟩ = 0`, or `None` when the form is certified
    /// anisotropic. Indefinite rational forms without a found witness are
    /// an error.
    pub fn isotropic_vector(&self) -> Result<Option<Vec<F::Elem>>> {
        let f = &self.field;
        let n = self.dim;
        for i in 0..n {
            if f.is_zero(self.gram.get(i, i)) {
                return Ok(Some((0..n).map(|k| if k == i { f.one() } else { f.zero() }).collect()));
            }
        }
        match f.elements() {
            Some(elems) => self.scan_projective_points(&elems),
            None => self.definiteness_certificate(),
        }
    }

    /// Vectors with first nonzero coordinate 1, in lexicographic order.
    fn scan_projective_points(&self, elems: &[F::Elem]) -> Result<Option<Vec<F::Elem>>> {
        let f = &self.field;
        let n = self.dim;
        let q = elems.len() as u64;
        let total = (0..n).fold(0u64, |acc, _| acc.saturating_mul(q).saturating_add(1));
        if total > ANISOTROPY_SCAN_LIMIT {
            return Err(Error::TooLarge {
                size: total.min(usize::MAX as u64) as usize,
                guard: ANISOTROPY_SCAN_LIMIT as usize,
            });
        }
        for lead in 0..n {
            let tail = n - lead - 1;
            let count = q.pow(tail as u32);
            for code in 0..count {
                let mut v = vec![f.zero(); n];
                v[lead] = f.one();
                let mut c = code;
                // most significant digit first, for lexicographic order
                for k in (lead + 1..n).rev() {
                    v[k] = elems[(c % q) as usize].clone();
                    c /= q;
                }
                if f.is_zero(&self.inner(&v, &v)) {
                    return Ok(Some(v));
                }
            }
        }
        Ok(None)
    }

    /// Symmetric elimination `TᵀJT = diag(d)` over an ordered field. A zero
    /// pivot or a pair of opposite pivots with square ratio gives an
    /// isotropic vector; mixed signs otherwise are reported as indefinite.
    fn definiteness_certificate(&self) -> Result<Option<Vec<F::Elem>>> {
        let f = &self.field;
        let n = self.dim;
        if self.sigma != Involution::Identity {
            return Err(Error::InvalidField("ordered fields carry the identity involution".into()));
        }
        let mut a = self.gram.clone();
        let mut t = Matrix::identity(f, n);
        for k in 0..n {
            let p = a.get(k, k).clone();
            if f.is_zero(&p) {
                return Ok(Some(t.column(k)));
            }
            for j in k + 1..n {
                let c = f.div(a.get(k, j), &p).expect("pivot is nonzero");
                if f.is_zero(&c) {
                    continue;
                }
                // column and row operation j -= c·k keeps A = TᵀJT
                for r in 0..n {
                    let v = f.sub(a.get(r, j), &f.mul(&c, a.get(r, k)));
                    a.set(r, j, v);
                }
                for col in 0..n {
                    let v = f.sub(a.get(j, col), &f.mul(&c, a.get(k, col)));
                    a.set(j, col, v);
                }
                for r in 0..n {
                    let v = f.sub(t.get(r, j), &f.mul(&c, t.get(r, k)));
                    t.set(r, j, v);
                }
            }
        }
        let d: Vec<F::Elem> = (0..n).map(|k| a.get(k, k).clone()).collect();
        let signs: Vec<i32> = d
            .iter()
            .map(|x| f.sign(x).ok_or_else(|| Error::InvalidField("field is not ordered".into())))
            .collect::<Result<_>>()?;
        if signs.iter().all(|&s| s > 0) || signs.iter().all(|&s| s < 0) {
            return Ok(None);
        }
        for i in 0..n {
            for j in 0..n {
                if signs[i] > 0 && signs[j] < 0 {
                    // d_i + d_j s² = 0 with s² = -d_i/d_j
                    let ratio = f.neg(&f.div(&d[i], &d[j]).expect("nonzero pivot"));
                    if let Some(s) = f.sqrt(&ratio) {
                        let v: Vec<F::Elem> = (0..n)
                            .map(|r| f.add(t.get(r, i), &f.mul(&s, t.get(r, j))))
                            .collect();
                        return Ok(Some(v));
                    }
                }
            }
        }
        Err(Error::IndefiniteForm)
    }

    pub fn subspace(&self, vectors: &[Vec<F::Elem>]) -> Subspace<F> {
        Subspace::span(&self.field, self.dim, vectors)
    }

    /// `X^⊥ = {y : ⟨x,y⟩ = 0 for all x ∈ X}`.
    pub fn orthogonal(&self, x: &Subspace<F>) -> Subspace<F> {
        if x.is_zero() {
            return Subspace::full(&self.field, self.dim);
        }
        let functionals = self.conj_matrix(x.basis()).mul(&self.gram);
        Subspace::row_space(&functionals.kernel())
    }

    pub fn is_closed(&self, u: &Subspace<F>) -> bool {
        self.orthogonal(&self.orthogonal(u)) == *u
    }

    /// With basis columns `B`, `π_U = B G⁻¹ σ(B)ᵀ J` where `G = σ(B)ᵀ J B`
    /// is the Gram matrix of the basis.
    pub fn ortho_projection(&self, u: &Subspace<F>) -> Result<Matrix<F>> {
        if !self.is_closed(u) {
            return Err(Error::NotClosed);
        }
        let f = &self.field;
        if u.is_zero() {
            return Ok(Matrix::zeros(f, self.dim, self.dim));
        }
        let b = u.basis_columns();
        let bh = self.conj_transpose(&b).mul(&self.gram);
        let g = bh.mul(&b);
        let g_inv = g.inverse().ok_or(Error::NotClosed)?;
        Ok(b.mul(&g_inv).mul(&bh))
    }

    /// `φ* = J⁻¹ σ(φ)ᵀ J`.
    pub fn adjoint(&self, phi: &Matrix<F>) -> Matrix<F> {
        let adj = self.gram_inv.mul(&self.conj_transpose(phi)).mul(&self.gram);
        debug_assert!(self.is_adjoint_pair(phi, &adj));
        adj
    }

    /// `⟨φx,y⟩ = ⟨x,ψy⟩` for all `x, y`, i.e. `σ(φ)ᵀ J = J ψ`.
    pub fn is_adjoint_pair(&self, phi: &Matrix<F>, psi: &Matrix<F>) -> bool {
        self.conj_transpose(phi).mul(&self.gram) == self.gram.mul(psi)
    }

    pub fn is_self_adjoint(&self, phi: &Matrix<F>) -> bool {
        self.adjoint(phi) == *phi
    }

    /// Evaluate both sides of "`φ` is a projection of `End*(V)` iff `φ = π_{im φ}`".
    pub fn projection_verdict(&self, phi: &Matrix<F>) -> ProjectionVerdict {
        let is_star_projection = phi.mul(phi) == *phi && self.is_self_adjoint(phi);
        let image = Subspace::column_space(phi);
        let equals_projection_onto_image = self
            .ortho_projection(&image)
            .map(|p| p == *phi)
            .unwrap_or(false);
        ProjectionVerdict {
            is_star_projection,
            equals_projection_onto_image,
        }
    }

    /// The ortholattice `Lat^⊥(V)` as a finite table, for finite fields.
    /// Element `i` of the table is `subspaces[i]`.
    pub fn finite_ortholattice(&self, guard: usize) -> Result<(OrthoLattice, Vec<Subspace<F>>)> {
        let subs = Subspace::enumerate_all(&self.field, self.dim, guard)?;
        let n = subs.len();
        let index = |s: &Subspace<F>| subs.iter().position(|t| t == s);
        let base = FiniteLattice::from_order_fn(n, |i, j| subs[i].is_subspace_of(&subs[j]))?;
        let perp = subs
            .iter()
            .map(|s| {
                index(&self.orthogonal(s))
                    .ok_or_else(|| Error::InternalProofViolation(format!("orthogonal of {s:?} not enumerated")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((OrthoLattice::new(base, perp)?, subs))
    }
}

impl<F: Field> Lattice for IPSpace<F> {
    type Elem = Subspace<F>;

    fn bot(&self) -> Subspace<F> {
        Subspace::zero(&self.field, self.dim)
    }
    fn top(&self) -> Subspace<F> {
        Subspace::full(&self.field, self.dim)
    }
    fn meet(&self, a: &Subspace<F>, b: &Subspace<F>) -> Subspace<F> {
        a.meet(b)
    }
    fn join(&self, a: &Subspace<F>, b: &Subspace<F>) -> Subspace<F> {
        a.join(b)
    }
    fn leq(&self, a: &Subspace<F>, b: &Subspace<F>) -> bool {
        a.is_subspace_of(b)
    }
    fn perspective_partner_within(&self, x: &Subspace<F>, bound: &Subspace<F>) -> Option<(Subspace<F>, Subspace<F>)> {
        subspace_partner_within(x, bound)
    }
}

impl<F: Field> Orthocomplemented for IPSpace<F> {
    fn perp(&self, a: &Subspace<F>) -> Subspace<F> {
        self.orthogonal(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, GaloisField, Rationals};

    fn q2(diag: &[i64]) -> IPSpace<Rationals> {
        let d: Vec<_> = diag.iter().map(|&x| q(x, 1)).collect();
        IPSpace::new(Rationals, Matrix::diagonal(&Rationals, &d), Involution::Identity).unwrap()
    }

    fn rat(v: &[i64]) -> Vec<num_rational::BigRational> {
        v.iter().map(|&x| q(x, 1)).collect()
    }

    #[test]
    fn validation_examples() {
        assert!(IPSpace::standard(Rationals, 2).is_ok());
        assert!(IPSpace::standard(GaloisField::prime(3).unwrap(), 2).is_ok());
        assert_eq!(
            IPSpace::standard(GaloisField::prime(5).unwrap(), 2).unwrap_err(),
            Error::Isotropic("(1, 2)".into())
        );
    }

    #[test]
    fn rational_form_errors() {
        let f = Rationals;
        let singular = Matrix::from_i64(&f, &[&[1, 1], &[1, 1]]);
        assert_eq!(IPSpace::new(f, singular, Involution::Identity).unwrap_err(), Error::NotInvertibleGram);
        let hyperbolic = Matrix::from_i64(&f, &[&[1, 0], &[0, -1]]);
        assert_eq!(
            IPSpace::new(f, hyperbolic, Involution::Identity).unwrap_err(),
            Error::Isotropic("(1, 1)".into())
        );
        let pell = Matrix::from_i64(&f, &[&[1, 0], &[0, -2]]);
        assert_eq!(IPSpace::new(f, pell, Involution::Identity).unwrap_err(), Error::IndefiniteForm);
        let negative = Matrix::from_i64(&f, &[&[-2, 1], &[1, -3]]);
        assert!(IPSpace::new(f, negative, Involution::Identity).is_ok());
        let skewed = Matrix::from_i64(&f, &[&[1, 1], &[0, 1]]);
        let err = IPSpace::new(f, skewed, Involution::Identity).unwrap_err();
        let Error::NotOrthosymmetric { v, w } = err else { panic!("{err:?}") };
        let (v, w) = (parse_vec(&v), parse_vec(&w));
        let s = IPSpaceRaw(Matrix::from_i64(&f, &[&[1, 1], &[0, 1]]));
        assert_eq!(s.form(&v, &w), q(0, 1));
        assert_ne!(s.form(&w, &v), q(0, 1));
    }

    /// Unvalidated bilinear form, as an oracle for witnesses.
    struct IPSpaceRaw(Matrix<Rationals>);

    impl IPSpaceRaw {
        fn form(&self, x: &[num_rational::BigRational], y: &[num_rational::BigRational]) -> num_rational::BigRational {
            let jy = self.0.mul_vec(y);
            x.iter().zip(&jy).map(|(a, b)| a * b).sum()
        }
    }

    fn parse_vec(s: &str) -> Vec<num_rational::BigRational> {
        s.trim_matches(|c| c == '(' || c == ')')
            .split(", ")
            .map(|t| crate::field::parse_rational(t).unwrap())
            .collect()
    }

    #[test]
    fn orthogonals() {
        let s = q2(&[1, 1]);
        let e0 = s.subspace(&[rat(&[1, 0])]);
        assert_eq!(s.orthogonal(&e0), s.subspace(&[rat(&[0, 1])]));
        assert!(s.orthogonal(&s.top()).is_zero());
        let w = q2(&[1, 2]);
        assert_eq!(w.orthogonal(&e0), w.subspace(&[rat(&[0, 1])]));
        let diag = w.subspace(&[rat(&[1, 1])]);
        assert_eq!(w.orthogonal(&diag), w.subspace(&[rat(&[2, -1])]));
    }

    #[test]
    fn projections() {
        let s = q2(&[1, 1]);
        let e0 = s.subspace(&[rat(&[1, 0])]);
        assert_eq!(s.ortho_projection(&e0).unwrap(), Matrix::unit(&Rationals, 2, 0, 0));
        let diag = s.subspace(&[rat(&[1, 1])]);
        let half = q(1, 2);
        let expected = Matrix::from_i64(&Rationals, &[&[1, 1], &[1, 1]]).scale(&half);
        assert_eq!(s.ortho_projection(&diag).unwrap(), expected);
        assert!(s.ortho_projection(&s.bot()).unwrap().is_zero());
    }

    #[test]
    fn adjoints() {
        let f = Rationals;
        let s = q2(&[1, 1]);
        assert_eq!(s.adjoint(&Matrix::unit(&f, 2, 0, 1)), Matrix::unit(&f, 2, 1, 0));
        let w = q2(&[1, 2]);
        assert_eq!(w.adjoint(&Matrix::unit(&f, 2, 0, 1)), Matrix::unit(&f, 2, 1, 0).scale(&q(1, 2)));
        assert_eq!(w.adjoint(&Matrix::identity(&f, 2)), Matrix::identity(&f, 2));
    }

    #[test]
    fn projection_verdicts() {
        let f = Rationals;
        let s = q2(&[1, 1]);
        let v = s.projection_verdict(&Matrix::unit(&f, 2, 0, 0));
        assert!(v.is_star_projection && v.equals_projection_onto_image);
        let oblique = Matrix::from_i64(&f, &[&[1, 1], &[0, 0]]);
        let v = s.projection_verdict(&oblique);
        assert!(!v.is_star_projection && !v.equals_projection_onto_image);
    }

    #[test]
    fn hermitian_gf9() {
        let f = GaloisField::new(3, 2).unwrap();
        let s = IPSpace::new(f.clone(), Matrix::identity(&f, 1), Involution::Frobenius).unwrap();
        let (lat, subs) = s.finite_ortholattice(64).unwrap();
        assert_eq!(lat.size(), 2);
        assert_eq!(subs.len(), 2);
    }

    #[test]
    fn gf3_plane_ortholattice() {
        let s = IPSpace::standard(GaloisField::prime(3).unwrap(), 2).unwrap();
        let (lat, _) = s.finite_ortholattice(64).unwrap();
        // four lines: MO_2
        assert_eq!(lat.size(), 6);
        assert!(lat.is_modular());
    }
}
