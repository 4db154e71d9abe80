use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use rand::Rng;
use serde_json::Value;

use super::table::{TableRing, MAX_TABLE_RING};
use crate::error::{Error, Result};
use crate::field::{Field, Involution};
use crate::ipspace::{format_vec, IPSpace};
use crate::lattice::{FiniteLattice, Lattice, Orthocomplemented};
use crate::linalg::{subspace_partner_within, Matrix, Subspace};
use crate::ortho::OrthoLattice;

/// A block-diagonal matrix, one square block per factor of the ring.
#[derive(Clone)]
pub struct BlockMatrix<F: Field> {
    pub blocks: Vec<Matrix<F>>,
}

impl<F: Field> PartialEq for BlockMatrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.blocks == other.blocks
    }
}

impl<F: Field> Eq for BlockMatrix<F> {}

impl<F: Field> Hash for BlockMatrix<F> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.blocks.hash(state);
    }
}

impl<F: Field> PartialOrd for BlockMatrix<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<F: Field> Ord for BlockMatrix<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.blocks.cmp(&other.blocks)
    }
}

impl<F: Field> fmt::Debug for BlockMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<F: Field> fmt::Display for BlockMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|m| m.to_string()).collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

impl<F: Field> BlockMatrix<F> {
    pub fn single(m: Matrix<F>) -> Self {
        BlockMatrix { blocks: vec![m] }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.blocks.iter().map(Matrix::to_json).collect())
    }
}

/// A principal right ideal `aR`, identified by the column space of each block.
pub type RightIdeal<F> = Vec<Subspace<F>>;

/// `M_{n_1}(F) × … × M_{n_k}(F)` with the involution `X ↦ J⁻¹ σ(X)ᵀ J` in
/// each block.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixRing<F: Field> {
    field: F,
    blocks: Vec<IPSpace<F>>,
}

impl<F: Field> MatrixRing<F> {
    pub fn new(field: F, blocks: Vec<IPSpace<F>>) -> Result<Self> {
        if blocks.is_empty() || blocks.iter().any(|b| b.dim() == 0) {
            return Err(Error::NotARing("blocks must be nonempty and of positive size".into()));
        }
        if blocks.iter().any(|b| *b.field() != field) {
            return Err(Error::InvalidField("all blocks must share one field".into()));
        }
        let r = MatrixRing { field, blocks };
        r.check_star_on_units()?;
        Ok(r)
    }

    /// `M_n(F)` with the transpose-type involution of the standard form.
    pub fn full(field: F, n: usize) -> Result<Self> {
        let space = IPSpace::sesquilinear(field.clone(), Matrix::identity(&field, n), Involution::Identity)?;
        Self::new(field, vec![space])
    }

    /// `M_n(F)` with the involution induced by `J`.
    pub fn with_form(field: F, gram: Matrix<F>, sigma: Involution) -> Result<Self> {
        let space = IPSpace::sesquilinear(field.clone(), gram, sigma)?;
        Self::new(field, vec![space])
    }

    /// `{"blocks": [{"dim": n, "gram": [[..]]?, "sigma": "id"?}, ..]}`; the
    /// per-block `field` entries are resolved by the caller.
    pub fn from_json(field: F, v: &Value) -> Result<Self> {
        let blocks = v
            .get("blocks")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("matrix ring needs `blocks`".into()))?;
        let spaces = blocks
            .iter()
            .map(|b| {
                let sigma = match b.get("sigma").and_then(Value::as_str) {
                    Some(s) => Involution::parse(s)?,
                    None => Involution::Identity,
                };
                let gram = match b.get("gram") {
                    Some(g) => Matrix::from_json(&field, g)?,
                    None => {
                        let n = b
                            .get("dim")
                            .and_then(Value::as_u64)
                            .ok_or_else(|| Error::Parse("block needs `dim` or `gram`".into()))?;
                        Matrix::identity(&field, n as usize)
                    }
                };
                if let Some(d) = b.get("dim").and_then(Value::as_u64) {
                    if d as usize != gram.rows() {
                        return Err(Error::DimensionMismatch(format!(
                            "block dim {d} but Gram matrix has {} rows",
                            gram.rows()
                        )));
                    }
                }
                IPSpace::sesquilinear(field.clone(), gram, sigma)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, spaces)
    }

    pub fn to_json(&self) -> Value {
        let blocks: Vec<Value> = self.blocks.iter().map(IPSpace::to_json).collect();
        serde_json::json!({ "blocks": blocks })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn blocks(&self) -> &[IPSpace<F>] {
        &self.blocks
    }

    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(IPSpace::dim).collect()
    }

    /// Blockwise product with another matrix ring over the same field.
    pub fn product(&self, other: &Self) -> Result<Self> {
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().cloned());
        Self::new(self.field.clone(), blocks)
    }

    fn map_blocks(&self, f: impl FnMut(&IPSpace<F>) -> Matrix<F>) -> BlockMatrix<F> {
        BlockMatrix {
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    fn zip(&self, a: &BlockMatrix<F>, b: &BlockMatrix<F>, f: impl Fn(&Matrix<F>, &Matrix<F>) -> Matrix<F>) -> BlockMatrix<F> {
        BlockMatrix {
            blocks: a.blocks.iter().zip(&b.blocks).map(|(x, y)| f(x, y)).collect(),
        }
    }

    pub fn zero(&self) -> BlockMatrix<F> {
        self.map_blocks(|b| Matrix::zeros(&self.field, b.dim(), b.dim()))
    }

    pub fn one(&self) -> BlockMatrix<F> {
        self.map_blocks(|b| Matrix::identity(&self.field, b.dim()))
    }

    /// Matrix unit `E_ij` inside block `block`.
    pub fn unit(&self, block: usize, i: usize, j: usize) -> BlockMatrix<F> {
        let mut z = self.zero();
        z.blocks[block] = Matrix::unit(&self.field, self.blocks[block].dim(), i, j);
        z
    }

    /// All matrix units, an additive basis of the ring.
    pub fn units(&self) -> Vec<BlockMatrix<F>> {
        let mut out = Vec::new();
        for (k, b) in self.blocks.iter().enumerate() {
            for i in 0..b.dim() {
                for j in 0..b.dim() {
                    out.push(self.unit(k, i, j));
                }
            }
        }
        out
    }

    pub fn add(&self, a: &BlockMatrix<F>, b: &BlockMatrix<F>) -> BlockMatrix<F> {
        self.zip(a, b, Matrix::add)
    }

    pub fn sub(&self, a: &BlockMatrix<F>, b: &BlockMatrix<F>) -> BlockMatrix<F> {
        self.zip(a, b, Matrix::sub)
    }

    pub fn neg(&self, a: &BlockMatrix<F>) -> BlockMatrix<F> {
        BlockMatrix {
            blocks: a.blocks.iter().map(Matrix::neg).collect(),
        }
    }

    pub fn mul(&self, a: &BlockMatrix<F>, b: &BlockMatrix<F>) -> BlockMatrix<F> {
        self.zip(a, b, Matrix::mul)
    }

    pub fn scale(&self, s: &F::Elem, a: &BlockMatrix<F>) -> BlockMatrix<F> {
        BlockMatrix {
            blocks: a.blocks.iter().map(|m| m.scale(s)).collect(),
        }
    }

    pub fn star(&self, a: &BlockMatrix<F>) -> BlockMatrix<F> {
        BlockMatrix {
            blocks: self.blocks.iter().zip(&a.blocks).map(|(s, m)| s.adjoint(m)).collect(),
        }
    }

    pub fn is_zero(&self, a: &BlockMatrix<F>) -> bool {
        a.blocks.iter().all(Matrix::is_zero)
    }

    pub fn contains(&self, a: &BlockMatrix<F>) -> bool {
        a.blocks.len() == self.blocks.len()
            && a.blocks
                .iter()
                .zip(&self.blocks)
                .all(|(m, b)| m.rows() == b.dim() && m.cols() == b.dim())
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BlockMatrix<F> {
        self.map_blocks(|b| Matrix::random(&self.field, b.dim(), b.dim(), rng))
    }

    pub fn element_from_json(&self, v: &Value) -> Result<BlockMatrix<F>> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("ring element must be an array".into()))?;
        // a single matrix is accepted for one-block rings
        let blocks: Vec<Matrix<F>> = if self.blocks.len() == 1 && arr.first().is_some_and(|r| r.as_array().is_some_and(|x| !x.first().is_some_and(Value::is_array))) {
            vec![Matrix::from_json(&self.field, v)?]
        } else {
            arr.iter().map(|m| Matrix::from_json(&self.field, m)).collect::<Result<_>>()?
        };
        let e = BlockMatrix { blocks };
        if !self.contains(&e) {
            return Err(Error::DimensionMismatch(format!("element {e} does not fit blocks {:?}", self.dims())));
        }
        Ok(e)
    }

    /// `(x*)* = x`, `(xy)* = y*x*` and `1* = 1` on matrix units.
    fn check_star_on_units(&self) -> Result<()> {
        let units = self.units();
        if self.star(&self.one()) != self.one() {
            return Err(Error::NotARing("1* != 1".into()));
        }
        for x in &units {
            if self.star(&self.star(x)) != *x {
                return Err(Error::NotARing(format!("x** != x for x = {x}")));
            }
            for y in &units {
                if self.star(&self.mul(x, y)) != self.mul(&self.star(y), &self.star(x)) {
                    return Err(Error::NotARing(format!("(xy)* != y*x* for x = {x}, y = {y}")));
                }
            }
        }
        Ok(())
    }

    /// A quasi-inverse, blockwise from a rank factorization.
    pub fn regularity_witness(&self, a: &BlockMatrix<F>) -> BlockMatrix<F> {
        BlockMatrix {
            blocks: a.blocks.iter().map(Matrix::generalized_inverse).collect(),
        }
    }

    pub fn right_ideal(&self, a: &BlockMatrix<F>) -> RightIdeal<F> {
        a.blocks.iter().map(Subspace::column_space).collect()
    }

    pub fn is_projection(&self, e: &BlockMatrix<F>) -> bool {
        self.mul(e, e) == *e && self.star(e) == *e
    }

    /// Why the ring is not ⋆-regular: a nonzero `r` with `rr* = 0`, built from
    /// an isotropic vector `v` as `r = (v e_0ᵀ)*`.
    pub fn star_regularity_violation(&self) -> Option<String> {
        for (k, b) in self.blocks.iter().enumerate() {
            match b.isotropic_vector() {
                Ok(None) => {}
                Ok(Some(v)) => {
                    let f = &self.field;
                    let n = b.dim();
                    let col = Matrix::from_fn(f, n, n, |i, j| if j == 0 { v[i].clone() } else { f.zero() });
                    let mut r = self.zero();
                    r.blocks[k] = col;
                    let r = self.star(&r);
                    debug_assert!(self.is_zero(&self.mul(&r, &self.star(&r))));
                    return Some(format!("r r* = 0 for r = {r} (isotropic vector {})", format_vec(f, &v)));
                }
                Err(e) => return Some(format!("block {k}: {e}")),
            }
        }
        None
    }

    /// Regularity is structural; ⋆-regularity reduces to anisotropy of every
    /// block form.
    pub fn is_star_regular(&self) -> bool {
        self.star_regularity_violation().is_none()
    }

    /// Random nonzero samples never satisfy `rr* = 0`, and quasi-inverses verify.
    pub fn spot_check_star_regular<R: Rng + ?Sized>(&self, rng: &mut R, samples: usize) -> Option<BlockMatrix<F>> {
        (0..samples).map(|_| self.random(rng)).find(|r| {
            let x = self.regularity_witness(r);
            let bad_witness = self.mul(&self.mul(r, &x), r) != *r;
            bad_witness || (!self.is_zero(r) && self.is_zero(&self.mul(r, &self.star(r))))
        })
    }

    /// The projection `e` with `aR = eR`: blockwise orthogonal projection onto
    /// the column space.
    pub fn projection_generator(&self, a: &BlockMatrix<F>) -> Result<BlockMatrix<F>> {
        if let Some(why) = self.star_regularity_violation() {
            return Err(Error::NotStarRegular(why));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&a.blocks)
            .map(|(s, m)| s.ortho_projection(&Subspace::column_space(m)))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::NotStarRegular(e.to_string()))?;
        let e = BlockMatrix { blocks };
        if !self.is_projection(&e) || self.right_ideal(&e) != self.right_ideal(a) {
            return Err(Error::InternalProofViolation(format!("{e} is not the projection generating {a}R")));
        }
        Ok(e)
    }

    /// `eR ⊆ fR` for projections, tested as `fe = e`.
    pub fn ideal_leq(&self, e: &BlockMatrix<F>, f: &BlockMatrix<F>) -> bool {
        self.mul(f, e) == *e
    }

    /// `e ⊥ f` for projections: `fe = 0 = ef`.
    pub fn projections_orthogonal(&self, e: &BlockMatrix<F>, f: &BlockMatrix<F>) -> bool {
        self.is_zero(&self.mul(f, e)) && self.is_zero(&self.mul(e, f))
    }

    /// The projection onto a right ideal.
    pub fn projection_onto(&self, ideal: &RightIdeal<F>) -> Result<BlockMatrix<F>> {
        let a = BlockMatrix {
            blocks: ideal.iter().map(Subspace::generator).collect(),
        };
        self.projection_generator(&a)
    }

    fn block_subspaces(&self, b: &IPSpace<F>, guard: usize) -> Result<Vec<Subspace<F>>> {
        if self.field.order().is_none() {
            if b.dim() >= 2 {
                return Err(Error::InfiniteLattice);
            }
            return Ok(vec![Subspace::zero(&self.field, b.dim()), Subspace::full(&self.field, b.dim())]);
        }
        Subspace::enumerate_all(&self.field, b.dim(), guard)
    }

    /// `Lat(R)` as the product of the blocks' column-space lattices. Element
    /// labels list one subspace per block.
    pub fn lat_of(&self, guard: usize) -> Result<(FiniteLattice, Vec<RightIdeal<F>>)> {
        let mut lattice: Option<FiniteLattice> = None;
        let mut labels: Vec<RightIdeal<F>> = vec![Vec::new()];
        for b in &self.blocks {
            let subs = self.block_subspaces(b, guard)?;
            let block_lat = FiniteLattice::from_order_fn(subs.len(), |i, j| subs[i].is_subspace_of(&subs[j]))?;
            lattice = Some(match lattice {
                None => block_lat,
                Some(l) => l.product(&block_lat),
            });
            labels = labels
                .iter()
                .flat_map(|prefix| {
                    subs.iter().map(move |s| {
                        let mut v = prefix.clone();
                        v.push(s.clone());
                        v
                    })
                })
                .collect();
            if labels.len() > guard {
                return Err(Error::TooLarge {
                    size: labels.len(),
                    guard,
                });
            }
        }
        Ok((lattice.expect("at least one block"), labels))
    }

    /// `Lat^⊥(R)` with `(eR)^⊥ = (1-e)R`, computed blockwise as column-space
    /// orthogonals.
    pub fn ortholat_of(&self, guard: usize) -> Result<(OrthoLattice, Vec<RightIdeal<F>>)> {
        if let Some(why) = self.star_regularity_violation() {
            return Err(Error::NotStarRegular(why));
        }
        let (base, labels) = self.lat_of(guard)?;
        let perp = labels
            .iter()
            .map(|x| {
                let p = self.perp(x);
                labels
                    .iter()
                    .position(|y| *y == p)
                    .ok_or_else(|| Error::InternalProofViolation("(1-e)R missing from Lat(R)".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((OrthoLattice::new(base, perp)?, labels))
    }

    /// The corner `eRe`, realized on `im e` with the restricted form.
    pub fn corner(&self, e: &BlockMatrix<F>) -> Result<MatrixRing<F>> {
        if !self.contains(e) || !self.is_projection(e) {
            return Err(Error::NotProjection);
        }
        let mut blocks = Vec::new();
        for (b, m) in self.blocks.iter().zip(&e.blocks) {
            let u = Subspace::column_space(m);
            if u.is_zero() {
                continue;
            }
            let basis = u.basis_columns();
            let gram = b.conj_transpose(&basis).mul(b.gram()).mul(&basis);
            blocks.push(IPSpace::sesquilinear(self.field.clone(), gram, b.sigma())?);
        }
        if blocks.is_empty() {
            return Err(Error::NotARing("corner at 0 is the zero ring".into()));
        }
        Self::new(self.field.clone(), blocks)
    }

    /// Two-sided ideals: each block is simple, so ideals are sets of blocks.
    pub fn ideals(&self) -> Vec<Vec<usize>> {
        let k = self.blocks.len();
        let mut out: Vec<Vec<usize>> = (0..1usize << k)
            .map(|mask| (0..k).filter(|i| mask >> i & 1 == 1).collect())
            .collect();
        out.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    pub fn is_simple_ring(&self) -> bool {
        self.blocks.len() == 1
    }

    /// Number of elements, for finite fields.
    pub fn order(&self) -> Option<u128> {
        let q = self.field.order()? as u128;
        let exp: u32 = self.blocks.iter().map(|b| (b.dim() * b.dim()) as u32).sum();
        q.checked_pow(exp)
    }

    /// Enumerate the ring into a table ring (at most 4096 elements).
    pub fn to_table(&self) -> Result<TableRing> {
        let elems = self.field.elements().ok_or(Error::InfiniteLattice)?;
        let size = self.order().unwrap_or(u128::MAX);
        if size > MAX_TABLE_RING as u128 {
            return Err(Error::TooLarge {
                size: size.min(usize::MAX as u128) as usize,
                guard: MAX_TABLE_RING,
            });
        }
        let size = size as usize;
        let q = elems.len();
        let decode = |mut code: usize| -> BlockMatrix<F> {
            // row-major digits, block by block
            let mut blocks = Vec::with_capacity(self.blocks.len());
            for b in &self.blocks {
                let n = b.dim();
                let mut rows = Vec::with_capacity(n);
                for _ in 0..n {
                    let row: Vec<F::Elem> = (0..n)
                        .map(|_| {
                            let e = elems[code % q].clone();
                            code /= q;
                            e
                        })
                        .collect();
                    rows.push(row);
                }
                blocks.push(Matrix::from_rows(&self.field, rows).expect("square block"));
            }
            BlockMatrix { blocks }
        };
        let all: Vec<BlockMatrix<F>> = (0..size).map(decode).collect();
        let index: HashMap<&BlockMatrix<F>, usize> = all.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let lookup = |x: &BlockMatrix<F>| index[x];
        let table = |op: &dyn Fn(&BlockMatrix<F>, &BlockMatrix<F>) -> BlockMatrix<F>| -> Vec<Vec<usize>> {
            all.iter().map(|x| all.iter().map(|y| lookup(&op(x, y))).collect()).collect()
        };
        let add = table(&|x, y| self.add(x, y));
        let mul = table(&|x, y| self.mul(x, y));
        let star = all.iter().map(|x| lookup(&self.star(x))).collect();
        let names = all.iter().map(|x| x.to_string()).collect();
        TableRing::new(names, add, mul, lookup(&self.one()), Some(star))
    }
}

impl<F: Field> Lattice for MatrixRing<F> {
    type Elem = RightIdeal<F>;

    fn bot(&self) -> RightIdeal<F> {
        self.blocks.iter().map(|b| Subspace::zero(&self.field, b.dim())).collect()
    }
    fn top(&self) -> RightIdeal<F> {
        self.blocks.iter().map(|b| Subspace::full(&self.field, b.dim())).collect()
    }
    fn meet(&self, a: &RightIdeal<F>, b: &RightIdeal<F>) -> RightIdeal<F> {
        a.iter().zip(b).map(|(x, y)| x.meet(y)).collect()
    }
    fn join(&self, a: &RightIdeal<F>, b: &RightIdeal<F>) -> RightIdeal<F> {
        a.iter().zip(b).map(|(x, y)| x.join(y)).collect()
    }
    fn leq(&self, a: &RightIdeal<F>, b: &RightIdeal<F>) -> bool {
        a.iter().zip(b).all(|(x, y)| x.is_subspace_of(y))
    }
    fn perspective_partner_within(&self, x: &RightIdeal<F>, bound: &RightIdeal<F>) -> Option<(RightIdeal<F>, RightIdeal<F>)> {
        x.iter().zip(bound).map(|(x, b)| subspace_partner_within(x, b)).collect::<Option<Vec<_>>>().map(|pairs| pairs.into_iter().unzip())
    }
}

impl<F: Field> Orthocomplemented for MatrixRing<F> {
    fn perp(&self, a: &RightIdeal<F>) -> RightIdeal<F> {
        self.blocks.iter().zip(a).map(|(b, x)| b.orthogonal(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, GaloisField, Rationals};

    fn gf(p: u32) -> GaloisField {
        GaloisField::prime(p).unwrap()
    }

    #[test]
    fn quasi_inverses_and_projections_over_q() {
        let r = MatrixRing::full(Rationals, 2).unwrap();
        let e11 = r.unit(0, 0, 0);
        assert_eq!(r.regularity_witness(&e11), e11);
        let a = BlockMatrix::single(Matrix::from_i64(&Rationals, &[&[1, 1], &[0, 0]]));
        let x = r.regularity_witness(&a);
        assert_eq!(r.mul(&r.mul(&a, &x), &a), a);
        assert_eq!(r.projection_generator(&a).unwrap(), e11);
        assert_eq!(r.projection_generator(&r.one()).unwrap(), r.one());
        assert_eq!(r.projection_generator(&r.zero()).unwrap(), r.zero());
        assert!(r.is_star_regular());
        assert!(r.ideal_leq(&e11, &r.one()));
    }

    #[test]
    fn gf2_transpose_is_not_star_regular() {
        let r = MatrixRing::full(gf(2), 2).unwrap();
        assert!(!r.is_star_regular());
        let t = r.to_table().unwrap();
        assert_eq!(t.size(), 16);
        assert!(!t.is_star_regular());
        assert!(t.is_regular());
    }

    #[test]
    fn lattices_of_gf2_rings() {
        let r = MatrixRing::full(gf(2), 2).unwrap();
        let (l, _) = r.lat_of(64).unwrap();
        assert_eq!(l.size(), 5);
        let prod = MatrixRing::full(gf(2), 1).unwrap().product(&r).unwrap();
        let (lp, labels) = prod.lat_of(64).unwrap();
        assert_eq!(lp.size(), 10);
        assert_eq!(labels.len(), 10);
        assert!(lp.is_modular() && lp.is_complemented());
        assert!(matches!(MatrixRing::full(Rationals, 2).unwrap().lat_of(64), Err(Error::InfiniteLattice)));
    }

    #[test]
    fn gf3_plane_ortholattice_is_mo2() {
        let r = MatrixRing::full(gf(3), 2).unwrap();
        let (ol, _) = r.ortholat_of(64).unwrap();
        assert_eq!(ol.size(), 6);
        assert_eq!(ol.base().height(), 2);
    }

    #[test]
    fn corners() {
        let r3 = MatrixRing::full(Rationals, 3).unwrap();
        let e = r3.add(&r3.unit(0, 0, 0), &r3.unit(0, 1, 1));
        let c = r3.corner(&e).unwrap();
        assert_eq!(c.dims(), vec![2]);
        assert_eq!(c, MatrixRing::full(Rationals, 2).unwrap());
        assert_eq!(r3.corner(&r3.one()).unwrap(), r3);
        let not_proj = BlockMatrix::single(Matrix::from_i64(&Rationals, &[&[1, 1, 0], &[0, 0, 0], &[0, 0, 0]]));
        assert_eq!(r3.corner(&not_proj).unwrap_err(), Error::NotProjection);
    }

    #[test]
    fn weighted_form_star() {
        let f = Rationals;
        let r = MatrixRing::with_form(f, Matrix::diagonal(&f, &[q(1, 1), q(2, 1)]), Involution::Identity).unwrap();
        let s = r.star(&r.unit(0, 0, 1));
        assert_eq!(s, BlockMatrix::single(Matrix::unit(&f, 2, 1, 0).scale(&q(1, 2))));
    }

    #[test]
    fn table_of_finite_ring_matches() {
        let r = MatrixRing::full(gf(3), 1).unwrap().product(&MatrixRing::full(gf(3), 1).unwrap()).unwrap();
        let t = r.to_table().unwrap();
        assert_eq!(t.size(), 9);
        assert_eq!(t.ideals().len(), r.ideals().len());
        assert!(t.is_star_regular());
    }
}
