use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde_json::Value;

use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::lattice::Lattice;

/// A linear subspace of `F^n`, stored as its canonical reduced row echelon basis.
///
/// Equality is equality of the canonical basis.
#[derive(Clone)]
pub struct Subspace<F: Field> {
    ambient: usize,
    basis: Matrix<F>,
}

impl<F: Field> PartialEq for Subspace<F> {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.basis == other.basis
    }
}

impl<F: Field> Eq for Subspace<F> {}

impl<F: Field> Hash for Subspace<F> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.basis.hash(state);
    }
}

impl<F: Field> PartialOrd for Subspace<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<F: Field> Ord for Subspace<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ambient, self.dim())
            .cmp(&(other.ambient, other.dim()))
            .then_with(|| self.basis.cmp(&other.basis))
    }
}

impl<F: Field> fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{}", self.basis)
    }
}

impl<F: Field> fmt::Display for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{}", self.basis)
    }
}

impl<F: Field> Subspace<F> {
    fn from_rows_unchecked(field: &F, ambient: usize, rows: Matrix<F>) -> Self {
        debug_assert_eq!(rows.cols(), ambient);
        let ech = rows.echelon();
        let r = ech.pivots.len();
        let keep: Vec<usize> = (0..r).collect();
        let basis = if r == 0 {
            Matrix::zeros(field, 0, ambient)
        } else {
            ech.reduced.select_rows(&keep)
        };
        Subspace { ambient, basis }
    }

    pub fn zero(field: &F, n: usize) -> Self {
        Subspace {
            ambient: n,
            basis: Matrix::zeros(field, 0, n),
        }
    }

    pub fn full(field: &F, n: usize) -> Self {
        Subspace {
            ambient: n,
            basis: Matrix::identity(field, n),
        }
    }

    /// Span of the given vectors.
    pub fn span(field: &F, n: usize, vectors: &[Vec<F::Elem>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(field, n);
        }
        let m = Matrix::from_rows(field, vectors.to_vec()).expect("vectors of equal length");
        assert_eq!(m.cols(), n, "vector length must equal ambient dimension");
        Self::from_rows_unchecked(field, n, m)
    }

    /// Span of the rows of `m`.
    pub fn row_space(m: &Matrix<F>) -> Self {
        Self::from_rows_unchecked(m.field(), m.cols(), m.clone())
    }

    /// Image of `m` acting on column vectors.
    pub fn column_space(m: &Matrix<F>) -> Self {
        Self::from_rows_unchecked(m.field(), m.rows(), m.transpose())
    }

    pub fn field(&self) -> &F {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Canonical basis, one vector per row.
    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<F::Elem>> {
        self.basis.row_vectors()
    }

    /// `n × dim` matrix with the basis vectors as columns.
    pub fn basis_columns(&self) -> Matrix<F> {
        self.basis.transpose()
    }

    /// A square `n × n` matrix whose column space is this subspace.
    pub fn generator(&self) -> Matrix<F> {
        let f = self.field();
        let cols = self.basis_columns();
        Matrix::from_fn(f, self.ambient, self.ambient, |r, c| {
            if c < cols.cols() {
                cols.get(r, c).clone()
            } else {
                f.zero()
            }
        })
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let m = self
            .basis
            .vstack(&Matrix::from_rows(self.field(), vec![v.to_vec()]).expect("one row"));
        m.rank() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.basis.vstack(&other.basis).rank() == other.dim()
    }

    pub fn join(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        Self::from_rows_unchecked(self.field(), self.ambient, self.basis.vstack(&other.basis))
    }

    pub fn meet(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        let f = self.field();
        if self.is_zero() || other.is_zero() {
            return Self::zero(f, self.ambient);
        }
        // left kernel of [U; W] gives coefficient pairs with α U = -β W
        let stacked = self.basis.vstack(&other.basis);
        let left = stacked.transpose().kernel();
        if left.rows() == 0 {
            return Self::zero(f, self.ambient);
        }
        let u_cols: Vec<usize> = (0..self.dim()).collect();
        let alphas = left.select_columns(&u_cols);
        Self::from_rows_unchecked(f, self.ambient, alphas.mul(&self.basis))
    }

    /// Image under a linear map.
    pub fn image(&self, map: &Matrix<F>) -> Self {
        assert_eq!(map.cols(), self.ambient, "map domain mismatch");
        Self::column_space(&map.mul(&self.basis_columns()))
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({ "basis": self.basis.to_json() })
    }

    pub fn from_json(field: &F, n: usize, v: &Value) -> Result<Self> {
        let basis = v
            .get("basis")
            .ok_or_else(|| Error::Parse("subspace needs `basis`".into()))?;
        let rows = basis
            .as_array()
            .ok_or_else(|| Error::Parse("`basis` must be an array".into()))?;
        if rows.is_empty() {
            return Ok(Self::zero(field, n));
        }
        let m = Matrix::from_json(field, basis)?;
        if m.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "basis vectors have length {} in a space of dimension {n}",
                m.cols()
            )));
        }
        Ok(Self::row_space(&m))
    }

    /// Every subspace of `F^n` for a finite field, in order of dimension then
    /// pivot pattern.
    pub fn enumerate_all(field: &F, n: usize, guard: usize) -> Result<Vec<Self>> {
        let elems = field.elements().ok_or(Error::InfiniteLattice)?;
        let mut out = Vec::new();
        for r in 0..=n {
            for pivots in combinations(n, r) {
                // free positions: row i, column c > pivots[i], c not a pivot
                let free: Vec<(usize, usize)> = (0..r)
                    .flat_map(|i| {
                        let pivots = &pivots;
                        (pivots[i] + 1..n)
                            .filter(move |c| !pivots.contains(c))
                            .map(move |c| (i, c))
                    })
                    .collect();
                let count = (elems.len() as u128).pow(free.len() as u32);
                if out.len() as u128 + count > guard as u128 {
                    return Err(Error::TooLarge {
                        size: (out.len() as u128 + count).min(usize::MAX as u128) as usize,
                        guard,
                    });
                }
                for code in 0..count as usize {
                    let mut m = Matrix::zeros(field, r, n);
                    for (i, &p) in pivots.iter().enumerate() {
                        m.set(i, p, field.one());
                    }
                    let mut c = code;
                    for &(i, col) in &free {
                        m.set(i, col, elems[c % elems.len()].clone());
                        c /= elems.len();
                    }
                    out.push(Subspace {
                        ambient: n,
                        basis: m,
                    });
                }
            }
        }
        Ok(out)
    }
}

pub(crate) fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, r, &mut Vec::new(), &mut out);
    out
}

/// The subspace lattice `Lat(F^n)`, handled symbolically.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorSpace<F: Field> {
    pub field: F,
    pub dim: usize,
}

impl<F: Field> VectorSpace<F> {
    pub fn new(field: F, dim: usize) -> Self {
        VectorSpace { field, dim }
    }
}

/// A partner `p ≤ bound` with `x ∼ p`, built as the graph of a linear isomorphism.
pub(crate) fn subspace_partner_within<F: Field>(
    x: &Subspace<F>,
    bound: &Subspace<F>,
) -> Option<(Subspace<F>, Subspace<F>)> {
    let f = x.field();
    let n = x.ambient_dim();
    let k = x.dim();
    if bound.dim() < k {
        return None;
    }
    let mut acc = x.clone();
    let mut picked = Vec::new();
    for v in bound.basis_vectors() {
        if picked.len() == k {
            break;
        }
        if !acc.contains(&v) {
            acc = acc.join(&Subspace::span(f, n, std::slice::from_ref(&v)));
            picked.push(v);
        }
    }
    if picked.len() < k {
        return None;
    }
    let xs = x.basis_vectors();
    let graph: Vec<Vec<F::Elem>> = xs
        .iter()
        .zip(&picked)
        .map(|(a, b)| a.iter().zip(b).map(|(s, t)| f.add(s, t)).collect())
        .collect();
    Some((Subspace::span(f, n, &picked), Subspace::span(f, n, &graph)))
}

impl<F: Field> Lattice for VectorSpace<F> {
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
    fn perspective_partner_within(
        &self,
        x: &Subspace<F>,
        bound: &Subspace<F>,
    ) -> Option<(Subspace<F>, Subspace<F>)> {
        subspace_partner_within(x, bound)
    }
}
