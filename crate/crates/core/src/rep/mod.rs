//! Representations of matrix rings on (sesquilinear) spaces, the lattice and
//! ortholattice maps they induce, recovery of adjoints from an ortholattice
//! representation, and frame coordinatization.

mod adjoint;
mod coord;
mod names;
mod pipeline;

pub use adjoint::{cancellator, is_valid_axis, recover_adjoints, sandwich_adjoint_test, AdjointRecovery, SandwichVerdict};
pub use coord::{canonical_subspace_frame, coordinatize, genuine_frame, CoordCheck, CoordRing, SubspaceFamily};
pub use names::{format_element, parse_element, unit_index, unit_name, unit_names};
pub use pipeline::{canonical_ring_frame, ring_embedding_from_ortho_rep, PipelineOutcome};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::ipspace::IPSpace;
use crate::lattice::{guard, Lattice};
use crate::linalg::{block_diagonal, Matrix, Subspace};
use crate::report::Report;
use crate::ring::{BlockMatrix, MatrixRing, RightIdeal};

/// Guard on `|Lat(R)|` below which lattice checks are exhaustive.
pub const REP_GUARD: usize = 64;

/// Random elements drawn by the sampled checks.
pub const DEFAULT_SAMPLES: usize = 50;

/// The seeded generator used by every randomized check.
pub fn sample_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) use sample_rng as rng;

/// A ring homomorphism `ι: R → End(V)`, stored by its values on the matrix
/// units and extended linearly.
#[derive(Clone, Debug)]
pub struct RingRep<F: Field> {
    ring: MatrixRing<F>,
    space: IPSpace<F>,
    images: Vec<Matrix<F>>,
}

impl<F: Field> RingRep<F> {
    pub fn new(ring: MatrixRing<F>, space: IPSpace<F>, images: Vec<Matrix<F>>) -> Result<Self> {
        let units = ring.units().len();
        if images.len() != units {
            return Err(Error::DimensionMismatch(format!("{} images for {units} matrix units", images.len())));
        }
        let d = space.dim();
        if let Some(m) = images.iter().find(|m| m.rows() != d || m.cols() != d) {
            return Err(Error::DimensionMismatch(format!(
                "image is {}x{} on a space of dimension {d}",
                m.rows(),
                m.cols()
            )));
        }
        if space.field() != ring.field() {
            return Err(Error::InvalidField("ring and space live over different fields".into()));
        }
        Ok(RingRep { ring, space, images })
    }

    pub fn from_fn(ring: MatrixRing<F>, space: IPSpace<F>, f: impl Fn(&BlockMatrix<F>) -> Matrix<F>) -> Result<Self> {
        let images = ring.units().iter().map(f).collect();
        Self::new(ring, space, images)
    }

    /// The block-diagonal form of `R` and the inclusion `R ⊆ End(⊕ V_k)`.
    pub fn natural_space(ring: &MatrixRing<F>) -> Result<IPSpace<F>> {
        let f = ring.field();
        let sigma = ring.blocks()[0].sigma();
        if ring.blocks().iter().any(|b| b.sigma() != sigma) {
            return Err(Error::PreconditionFailed("blocks use different involutions".into()));
        }
        let grams: Vec<Matrix<F>> = ring.blocks().iter().map(|b| b.gram().clone()).collect();
        IPSpace::sesquilinear(f.clone(), block_diagonal(f, &grams), sigma)
    }

    /// The inclusion of `R` into the endomorphisms of its natural space.
    pub fn identity(ring: &MatrixRing<F>) -> Result<Self> {
        let space = Self::natural_space(ring)?;
        let f = ring.field().clone();
        Self::from_fn(ring.clone(), space, |a| block_diagonal(&f, &a.blocks))
    }

    /// `a ↦ S a S⁻¹` composed with the inclusion.
    pub fn conjugation(ring: &MatrixRing<F>, space: IPSpace<F>, s: &Matrix<F>) -> Result<Self> {
        let s_inv = s
            .inverse()
            .ok_or_else(|| Error::PreconditionFailed("conjugating matrix is singular".into()))?;
        let f = ring.field().clone();
        Self::from_fn(ring.clone(), space, |a| s.mul(&block_diagonal(&f, &a.blocks)).mul(&s_inv))
    }

    pub fn ring(&self) -> &MatrixRing<F> {
        &self.ring
    }

    pub fn space(&self) -> &IPSpace<F> {
        &self.space
    }

    pub fn images(&self) -> &[Matrix<F>] {
        &self.images
    }

    /// `ι(a)` by linearity.
    pub fn apply(&self, a: &BlockMatrix<F>) -> Matrix<F> {
        let f = self.ring.field();
        let d = self.space.dim();
        let mut out = Matrix::zeros(f, d, d);
        let mut idx = 0;
        for m in &a.blocks {
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    let c = m.get(i, j);
                    if !f.is_zero(c) {
                        out = out.add(&self.images[idx].scale(c));
                    }
                    idx += 1;
                }
            }
        }
        out
    }

    /// `η(aR) = im ι(a)`, computed from any generator of the ideal.
    pub fn eta(&self, x: &RightIdeal<F>) -> Subspace<F> {
        Subspace::column_space(&self.apply(&ideal_generator(x)))
    }

    /// Additivity holds by construction; checks multiplicativity on unit
    /// pairs, `ι(1) = id` and injectivity of the linear extension.
    pub fn verify(&self) -> Report {
        let mut report = Report::new();
        let names = unit_names(&self.ring);
        let units = self.ring.units();
        for (x, nx) in units.iter().zip(&names) {
            for (y, ny) in units.iter().zip(&names) {
                let lhs = self.apply(&self.ring.mul(x, y));
                let rhs = self.apply(x).mul(&self.apply(y));
                report.check(lhs == rhs, "multiplicative", || {
                    format!("ι({nx}·{ny}) = {lhs} but ι({nx})ι({ny}) = {rhs}")
                });
            }
        }
        let one = self.apply(&self.ring.one());
        let id = Matrix::identity(self.ring.field(), self.space.dim());
        report.check(one == id, "unital", || format!("ι(1) = {one}"));
        let rows: Vec<Vec<F::Elem>> = self.images.iter().map(|m| m.entries().to_vec()).collect();
        let stacked = Matrix::from_rows(self.ring.field(), rows).expect("equal-length rows");
        if stacked.rank() < units.len() {
            let kernel = stacked.transpose().kernel();
            let coeffs = kernel.row(0);
            let mut a = self.ring.zero();
            for (c, u) in coeffs.iter().zip(&units) {
                a = self.ring.add(&a, &self.ring.scale(c, u));
            }
            report.push("injective", format!("ι({}) = 0", format_element(&self.ring, &a)));
        }
        report
    }

    /// `ι(u*) = ι(u)*` on every unit, checked directly.
    pub fn star_compatibility(&self) -> Report {
        let mut report = Report::new();
        for (u, name) in self.ring.units().iter().zip(unit_names(&self.ring)) {
            let lhs = self.apply(&self.ring.star(u));
            let rhs = self.space.adjoint(&self.apply(u));
            report.check(lhs == rhs, "ι(a*) = ι(a)*", || format!("a = {name}: ι(a*) = {lhs}, ι(a)* = {rhs}"));
        }
        report
    }

    /// `{"ring": .., "space": ..?, "images": {"E_ij": matrix}}`. Without a
    /// space the standard form on the image dimension is used.
    pub fn from_json(field: F, v: &Value) -> Result<Self> {
        let ring_json = v.get("ring").ok_or_else(|| Error::Parse("rep needs `ring`".into()))?;
        let ring = MatrixRing::from_json(field.clone(), ring_json)?;
        let raw = v
            .get("images")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("rep needs an `images` object".into()))?;
        let names = unit_names(&ring);
        let mut images: Vec<Option<Matrix<F>>> = vec![None; names.len()];
        for (key, m) in raw {
            let idx = unit_index(&ring, key)?;
            images[idx] = Some(Matrix::from_json(&field, m)?);
        }
        let images = images
            .into_iter()
            .zip(&names)
            .map(|(m, n)| m.ok_or_else(|| Error::Parse(format!("missing image of {n}"))))
            .collect::<Result<Vec<_>>>()?;
        let space = match v.get("space") {
            Some(s) => IPSpace::sesquilinear_from_json(field, s)?,
            None => {
                let d = images[0].rows();
                IPSpace::sesquilinear(field.clone(), Matrix::identity(&field, d), Default::default())?
            }
        };
        Self::new(ring, space, images)
    }

    pub fn to_json(&self) -> Value {
        let mut images = Map::new();
        for (n, m) in unit_names(&self.ring).into_iter().zip(&self.images) {
            images.insert(n, m.to_json());
        }
        let mut ring = self.ring.to_json();
        ring["field"] = self.ring.field().kind().to_json();
        serde_json::json!({
            "ring": ring,
            "space": self.space.to_json(),
            "images": images,
        })
    }
}

pub(crate) fn ideal_generator<F: Field>(x: &RightIdeal<F>) -> BlockMatrix<F> {
    BlockMatrix {
        blocks: x.iter().map(Subspace::generator).collect(),
    }
}

/// A random element; half the time it is cut down by a random diagonal
/// idempotent, since uniformly random matrices over `ℚ` are invertible.
pub(crate) fn random_element<F: Field, R: rand::Rng + ?Sized>(ring: &MatrixRing<F>, rng: &mut R) -> BlockMatrix<F> {
    let a = ring.random(rng);
    if rng.random_bool(0.5) {
        return a;
    }
    let mut mask = ring.zero();
    for (k, n) in ring.dims().into_iter().enumerate() {
        for i in 0..n {
            if rng.random_bool(0.5) {
                mask = ring.add(&mask, &ring.unit(k, i, i));
            }
        }
    }
    ring.mul(&a, &mask)
}

/// Units, `0`, `1` and `count` seeded random elements.
pub(crate) fn sample_elements<F: Field>(ring: &MatrixRing<F>, seed: u64, count: usize) -> Vec<BlockMatrix<F>> {
    let mut rng = rng(seed);
    let mut out = vec![ring.zero(), ring.one()];
    out.extend(ring.units());
    out.extend((0..count).map(|_| random_element(ring, &mut rng)));
    out
}

/// All of `Lat(R)` when it is finite and small, otherwise the ideals of a
/// sample. The flag tells which.
pub(crate) fn ideal_carrier<F: Field>(ring: &MatrixRing<F>, seed: u64, count: usize) -> (Vec<RightIdeal<F>>, bool) {
    if let Ok((_, labels)) = ring.lat_of(guard(REP_GUARD)) {
        return (labels, true);
    }
    let mut out: Vec<RightIdeal<F>> = Vec::new();
    for a in sample_elements(ring, seed, count) {
        let x = ring.right_ideal(&a);
        if !out.contains(&x) {
            out.push(x);
        }
    }
    (out, false)
}

/// Outcome of checking that `aR ↦ im ι(a)` is a lattice embedding.
#[derive(Clone, Debug)]
pub struct LatticeRepCheck {
    pub report: Report,
    pub ideals_checked: usize,
    pub exhaustive: bool,
}

/// `η(aR) = im ι(a)`: checks that the image does not depend on the chosen
/// generator, then that `η` preserves `0`, `1`, `∩`, `+` and is injective on
/// the available ideals.
pub fn induce_lattice_rep<F: Field>(rep: &RingRep<F>, seed: u64, samples: usize) -> Result<LatticeRepCheck> {
    let pre = rep.verify();
    if !pre.is_pass() {
        return Err(Error::PreconditionFailed(format!("ring rep: {pre}")));
    }
    let ring = &rep.ring;
    let (ideals, exhaustive) = ideal_carrier(ring, seed, samples);
    let mut rng = rng(seed ^ 0x5eed);
    let f = ring.field();

    let mut images = Vec::with_capacity(ideals.len());
    for x in &ideals {
        let a = ideal_generator(x);
        let u = BlockMatrix {
            blocks: ring.dims().iter().map(|&n| Matrix::random_invertible(f, n, &mut rng)).collect(),
        };
        let alternatives = [ring.mul(&a, &u), ring.mul(&a, &ring.regularity_witness(&a))];
        let image = rep.eta(x);
        for b in alternatives {
            if ring.right_ideal(&b) != *x {
                return Err(Error::InternalProofViolation(format!("{b} does not generate {x:?}")));
            }
            if Subspace::column_space(&rep.apply(&b)) != image {
                return Err(Error::WellDefinednessViolation(
                    format_element(ring, &a),
                    format_element(ring, &b),
                ));
            }
        }
        images.push(image);
    }

    let mut report = Report::new();
    let space = rep.space();
    report.check(rep.eta(&ring.bot()) == space.bot(), "η(0) = 0", || "η(0R) ≠ 0".into());
    report.check(rep.eta(&ring.top()) == space.top(), "η(1) = V", || "η(1R) ≠ V".into());
    for (i, x) in ideals.iter().enumerate() {
        for (j, y) in ideals.iter().enumerate().skip(i + 1) {
            let (ex, ey) = (&images[i], &images[j]);
            report.check(ex != ey, "injective", || format!("η({x:?}) = η({y:?}) = {ex}"));
            let meet = rep.eta(&ring.meet(x, y));
            report.check(meet == ex.meet(ey), "preserves ∩", || {
                format!("η({x:?} ∩ {y:?}) = {meet} but η ∩ η = {}", ex.meet(ey))
            });
            let join = rep.eta(&ring.join(x, y));
            report.check(join == ex.join(ey), "preserves +", || {
                format!("η({x:?} + {y:?}) = {join} but η + η = {}", ex.join(ey))
            });
        }
    }
    Ok(LatticeRepCheck {
        report,
        ideals_checked: ideals.len(),
        exhaustive,
    })
}

/// For each checked generator `a` with projection `e`, compares
/// `η((1-e)R)` with `η(aR)^⊥`. Violations are reported as `PerpViolation`.
pub fn verify_ortho_rep<F: Field>(rep: &RingRep<F>, seed: u64, samples: usize) -> Result<Report> {
    let ring = &rep.ring;
    if let Some(why) = ring.star_regularity_violation() {
        return Err(Error::PreconditionFailed(format!("source is not *-regular: {why}")));
    }
    let (ideals, _) = ideal_carrier(ring, seed, samples);
    let mut report = Report::new();
    for x in &ideals {
        let a = ideal_generator(x);
        let e = ring.projection_generator(&a)?;
        let lhs = Subspace::column_space(&rep.apply(&ring.sub(&ring.one(), &e)));
        let rhs = rep.space.orthogonal(&Subspace::column_space(&rep.apply(&a)));
        report.check(lhs == rhs, "PerpViolation", || {
            format!(
                "a = {}: η((aR)^⊥) = {lhs} but η(aR)^⊥ = {rhs}",
                format_element(ring, &a)
            )
        });
    }
    Ok(report)
}

/// An ortholattice map `η: Lat(R) → Lat(V)`, either given by a linear map
/// `M` (with `η(X) = M·X` on the concatenated block coordinates) or by a
/// finite table of ideals and images.
#[derive(Clone, Debug)]
pub enum LatticeMap<F: Field> {
    Linear(Matrix<F>),
    Table(Vec<(RightIdeal<F>, Subspace<F>)>),
}

/// `η` together with its target space.
#[derive(Clone, Debug)]
pub struct OrthoRep<F: Field> {
    pub space: IPSpace<F>,
    pub map: LatticeMap<F>,
}

impl<F: Field> OrthoRep<F> {
    pub fn linear(space: IPSpace<F>, m: Matrix<F>) -> Result<Self> {
        if m.rows() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "map has {} rows on a space of dimension {}",
                m.rows(),
                space.dim()
            )));
        }
        Ok(OrthoRep {
            space,
            map: LatticeMap::Linear(m),
        })
    }

    /// `η(x)`, or `None` outside a table's domain.
    pub fn apply(&self, ring: &MatrixRing<F>, x: &RightIdeal<F>) -> Option<Subspace<F>> {
        match &self.map {
            LatticeMap::Linear(m) => {
                let g = block_diagonal(ring.field(), &ideal_generator(x).blocks);
                (m.cols() == g.rows()).then(|| Subspace::column_space(&m.mul(&g)))
            }
            LatticeMap::Table(entries) => entries.iter().find(|(y, _)| y == x).map(|(_, s)| s.clone()),
        }
    }

    /// Ideals on which `η` is known: the table's domain, or all/sampled
    /// ideals for a linear map.
    pub fn domain(&self, ring: &MatrixRing<F>, seed: u64, samples: usize) -> Vec<RightIdeal<F>> {
        match &self.map {
            LatticeMap::Linear(_) => ideal_carrier(ring, seed, samples).0,
            LatticeMap::Table(entries) => entries.iter().map(|(x, _)| x.clone()).collect(),
        }
    }

    /// `{"space": .., "eta": {generator: subspace}}` or
    /// `{"space": .., "map": matrix}`. Generators are element expressions
    /// such as `E_11+E_22`.
    pub fn from_json(ring: &MatrixRing<F>, v: &Value) -> Result<Self> {
        let field = ring.field().clone();
        let space = match v.get("space") {
            Some(s) => IPSpace::sesquilinear_from_json(field.clone(), s)?,
            None => RingRep::natural_space(ring)?,
        };
        if let Some(m) = v.get("map") {
            return Self::linear(space, Matrix::from_json(&field, m)?);
        }
        let raw = v
            .get("eta")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("ortho rep needs `eta` or `map`".into()))?;
        let mut entries = Vec::new();
        for (key, sub) in raw {
            let a = parse_element(ring, key)?;
            let s = Subspace::from_json(&field, space.dim(), sub)?;
            entries.push((ring.right_ideal(&a), s));
        }
        Ok(OrthoRep {
            space,
            map: LatticeMap::Table(entries),
        })
    }

    pub fn to_json(&self, ring: &MatrixRing<F>) -> Value {
        match &self.map {
            LatticeMap::Linear(m) => serde_json::json!({ "space": self.space.to_json(), "map": m.to_json() }),
            LatticeMap::Table(entries) => {
                let mut eta = Map::new();
                for (x, s) in entries {
                    eta.insert(format_element(ring, &ideal_generator(x)), s.to_json());
                }
                serde_json::json!({ "space": self.space.to_json(), "eta": eta })
            }
        }
    }
}
