//! A fixed catalog of small structures used by the tests, the CLI and the
//! demo suite. Every builder validates what it returns.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::{Field, GaloisField, Involution, Rationals};
use crate::ipspace::IPSpace;
use crate::lattice::FiniteLattice;
use crate::linalg::{Matrix, Subspace};
use crate::ortho::{FrameKind, FrameWitness, OrthoLattice};
use crate::rep::canonical_ring_frame;
use crate::report::Report;
use crate::ring::{MatrixRing, RightIdeal, TableRing};

/// `MO_k`: bottom `0`, atoms `1..=2k` with `2i+1 ⊥ 2i+2`, top `2k+1`.
pub fn mo_n(k: usize) -> Result<OrthoLattice> {
    if k == 0 {
        return Err(Error::PreconditionFailed("MO_k needs k >= 1".into()));
    }
    let n = 2 * k + 2;
    let mut covers = Vec::new();
    for i in 1..=2 * k {
        covers.push([0, i]);
        covers.push([i, n - 1]);
    }
    let base = FiniteLattice::from_covers(n, &covers)?;
    let mut perp = vec![0; n];
    perp[0] = n - 1;
    perp[n - 1] = 0;
    for i in 0..k {
        perp[2 * i + 1] = 2 * i + 2;
        perp[2 * i + 2] = 2 * i + 1;
    }
    OrthoLattice::new(base, perp)
}

/// The Boolean algebra `2^n` on bitmasks, with complement as `⊥`.
pub fn boolean(n: u32) -> Result<OrthoLattice> {
    if n > 8 {
        return Err(Error::TooLarge {
            size: 1 << n.min(30),
            guard: 256,
        });
    }
    let size = 1usize << n;
    let base = FiniteLattice::from_order_fn(size, |a, b| a & !b == 0)?;
    OrthoLattice::new(base, (0..size).map(|a| (size - 1) ^ a).collect())
}

/// The `k`-element chain `0 < 1 < … < k-1`.
pub fn chain(k: usize) -> Result<FiniteLattice> {
    if k == 0 {
        return Err(Error::NoBounds);
    }
    let covers: Vec<[usize; 2]> = (1..k).map(|i| [i - 1, i]).collect();
    FiniteLattice::from_covers(k, &covers)
}

/// `Lat^⊥(V)` for a finite anisotropic space, with the subspace labels.
pub fn subspace_ortholattice<F: Field>(field: F, gram: Matrix<F>, sigma: Involution) -> Result<(OrthoLattice, Vec<Subspace<F>>)> {
    let space = IPSpace::new(field, gram, sigma)?;
    space.finite_ortholattice(crate::lattice::guard(256))
}

/// `Lat^⊥(GF(p)^dim)` for the standard form.
pub fn standard_subspace_ortholattice(p: u32, dim: usize) -> Result<(OrthoLattice, Vec<Subspace<GaloisField>>)> {
    let f = GaloisField::prime(p)?;
    let gram = Matrix::identity(&f, dim);
    subspace_ortholattice(f, gram, Involution::Identity)
}

/// `M_n(F)` with the involution induced by `gram` (the identity if `None`).
pub fn matrix_star_ring<F: Field>(field: F, dim: usize, gram: Option<Matrix<F>>, sigma: Involution) -> Result<MatrixRing<F>> {
    let gram = gram.unwrap_or_else(|| Matrix::identity(&field, dim));
    if gram.rows() != dim {
        return Err(Error::DimensionMismatch(format!("Gram matrix for dimension {dim} has {} rows", gram.rows())));
    }
    MatrixRing::with_form(field, gram, sigma)
}

/// `GF(q)` for a prime power `q`.
pub fn galois_field(q: u32) -> Result<GaloisField> {
    let p = (2..=q)
        .find(|d| q % d == 0)
        .ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
    let mut k = 0;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    if rest != 1 {
        return Err(Error::InvalidField(format!("{q} is not a prime power")));
    }
    GaloisField::new(p, k)
}

/// `M_n(GF(q))` as an operation table, without involution.
pub fn finite_matrix_ring(q: u32, n: usize) -> Result<TableRing> {
    let f = galois_field(q)?;
    Ok(MatrixRing::full(f, n)?.to_table()?.without_star())
}

pub fn product(a: &TableRing, b: &TableRing) -> Result<TableRing> {
    a.product(b)
}

/// `GF(2) × M_2(GF(2))`, the smallest catalog ring with four ideals.
pub fn gf2_times_m2_gf2() -> Result<TableRing> {
    product(&MatrixRing::full(GaloisField::prime(2)?, 1)?.to_table()?.without_star(), &finite_matrix_ring(2, 2)?)
}

/// The skew 2-frame `a = (1, 2)`, axis `3`, `b_1 = a_0` in `MO_k`, `k >= 2`.
pub fn mo_frame(k: usize) -> Result<FrameWitness<usize>> {
    if k < 2 {
        return Err(Error::PreconditionFailed("MO_1 has no 2-frame".into()));
    }
    Ok(FrameWitness {
        kind: FrameKind::Skew { n: 2, m: 2 },
        a: vec![1, 2],
        a0: vec![3],
        b: vec![1],
        axes: Vec::new(),
    })
}

/// The canonical frame `a_i = E_ii R`, `a_{0i} = (E_00 − E_i0)R`.
pub fn canonical_frame<F: Field>(ring: &MatrixRing<F>, n: usize) -> Result<FrameWitness<RightIdeal<F>>> {
    canonical_ring_frame(ring, n)
}

/// The orthogonal semiframe `E_ii R` with partner `E_jj R`, `j = i+1 mod n`,
/// and axis `(E_ii − E_ji)R`.
pub fn canonical_semiframe<F: Field>(ring: &MatrixRing<F>, n: usize) -> Result<FrameWitness<RightIdeal<F>>> {
    let frame = canonical_ring_frame(ring, n)?;
    let partner: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    Ok(FrameWitness {
        kind: FrameKind::OrthoSemiframe { k: n },
        b: partner.iter().map(|&j| frame.a[j].clone()).collect(),
        axes: (0..n)
            .map(|i| ring.right_ideal(&ring.sub(&ring.unit(0, i, i), &ring.unit(0, partner[i], i))))
            .collect(),
        a: frame.a,
        a0: Vec::new(),
    })
}

/// A catalog structure.
#[derive(Clone, Debug)]
pub enum Structure {
    Lattice(FiniteLattice),
    Ortho(OrthoLattice),
    RationalRing(MatrixRing<Rationals>),
    FiniteRing(MatrixRing<GaloisField>),
    Table(TableRing),
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub structure: Structure,
}

impl Structure {
    pub fn kind(&self) -> &'static str {
        match self {
            Structure::Lattice(_) => "lattice",
            Structure::Ortho(_) => "ortholattice",
            Structure::RationalRing(_) | Structure::FiniteRing(_) | Structure::Table(_) => "ring",
        }
    }

    /// The JSON accepted by the corresponding `check` subcommand.
    pub fn to_json(&self) -> Value {
        match self {
            Structure::Lattice(l) => serde_json::to_value(l.to_json()).expect("serializable"),
            Structure::Ortho(l) => serde_json::to_value(l.to_json()).expect("serializable"),
            Structure::RationalRing(r) => ring_json(r),
            Structure::FiniteRing(r) => ring_json(r),
            Structure::Table(t) => serde_json::to_value(t.to_json()).expect("serializable"),
        }
    }

    /// Re-run the validator from the serialized form, plus regularity for
    /// rings.
    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        let json = self.to_json();
        let outcome: Result<()> = match self {
            Structure::Lattice(_) => FiniteLattice::from_json_value(&json).map(|_| ()),
            Structure::Ortho(_) => OrthoLattice::from_json_value(&json).map(|_| ()),
            Structure::RationalRing(r) => MatrixRing::from_json(Rationals, &json).map(|_| check_regular(r, &mut report)),
            Structure::FiniteRing(r) => MatrixRing::from_json(r.field().clone(), &json)
                .and_then(|_| r.to_table())
                .map(|t| report.check(t.is_regular(), "regular", || "table ring is not regular".into())),
            Structure::Table(_) => TableRing::from_json_value(&json)
                .map(|t| report.check(t.is_regular(), "regular", || "table ring is not regular".into())),
        };
        if let Err(e) = outcome {
            report.push("validator", e.to_string());
        }
        report
    }
}

fn ring_json<F: Field>(r: &MatrixRing<F>) -> Value {
    let mut v = r.to_json();
    v["field"] = r.field().kind().to_json();
    v
}

fn check_regular<F: Field>(r: &MatrixRing<F>, report: &mut Report) {
    let mut rng = crate::rep::sample_rng(0);
    for _ in 0..20 {
        let a = r.random(&mut rng);
        let x = r.regularity_witness(&a);
        report.check(r.mul(&r.mul(&a, &x), &a) == a, "regular", || format!("axa != a for a = {a}"));
    }
}

/// Every catalog structure, in a fixed order.
pub fn catalog() -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    let mut push = |name: String, structure: Structure| out.push(CatalogEntry { name, structure });
    for k in 1..=4 {
        push(format!("MO_{k}"), Structure::Ortho(mo_n(k)?));
    }
    for n in 1..=4 {
        push(format!("2^{n}"), Structure::Ortho(boolean(n)?));
    }
    push("chain_3".into(), Structure::Lattice(chain(3)?));
    for (p, d) in [(2, 1), (3, 1), (3, 2)] {
        push(format!("Lat(GF({p})^{d})"), Structure::Ortho(standard_subspace_ortholattice(p, d)?.0));
    }
    for n in [2, 3] {
        push(format!("M_{n}(Q)"), Structure::RationalRing(matrix_star_ring(Rationals, n, None, Involution::Identity)?));
    }
    push("M_2(GF(2))".into(), Structure::Table(finite_matrix_ring(2, 2)?));
    push("GF(2)xM_2(GF(2))".into(), Structure::Table(gf2_times_m2_gf2()?));
    Ok(out)
}

/// The modular ortholattices of the catalog.
pub fn modular_ortholattices() -> Result<Vec<(String, OrthoLattice)>> {
    Ok(catalog()?
        .into_iter()
        .filter_map(|e| match e.structure {
            Structure::Ortho(l) if l.is_modular() => Some((e.name, l)),
            _ => None,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ortho::{verify_frame, verify_ortho_frame};

    #[test]
    fn sizes() {
        assert_eq!(mo_n(2).unwrap().size(), 6);
        assert_eq!(mo_n(1).unwrap().size(), 4);
        let mo3 = mo_n(3).unwrap();
        assert_eq!(mo3.size(), 8);
        assert_eq!(mo3.base().height(), 2);
        assert!(mo_n(0).is_err());
        assert_eq!(chain(3).unwrap().size(), 3);
        assert_eq!(finite_matrix_ring(2, 2).unwrap().size(), 16);
        assert!(!finite_matrix_ring(2, 2).unwrap().has_star());
    }

    #[test]
    fn subspace_lattices() {
        let (l, subs) = standard_subspace_ortholattice(3, 2).unwrap();
        assert_eq!(l.size(), 6);
        assert_eq!(subs.iter().filter(|s| s.dim() == 1).count(), 4);
        assert_eq!(standard_subspace_ortholattice(2, 1).unwrap().0.size(), 2);
        assert!(matches!(standard_subspace_ortholattice(5, 2), Err(Error::Isotropic(_))));
    }

    #[test]
    fn prime_powers() {
        assert_eq!(galois_field(9).unwrap().size(), 9);
        assert!(galois_field(6).is_err());
        assert!(galois_field(1).is_err());
    }

    #[test]
    fn frames() {
        let l = mo_n(2).unwrap();
        assert!(verify_frame(&l, &mo_frame(2).unwrap()).is_pass());
        let r = MatrixRing::full(Rationals, 3).unwrap();
        assert!(verify_frame(&r, &canonical_frame(&r, 3).unwrap()).is_pass());
        assert!(verify_ortho_frame(&r, &canonical_semiframe(&r, 3).unwrap()).is_pass());
        let r1 = MatrixRing::full(Rationals, 1).unwrap();
        assert!(canonical_frame(&r1, 1).is_err());
    }

    #[test]
    fn catalog_validates() {
        let entries = catalog().unwrap();
        assert_eq!(entries.len(), 16);
        for e in &entries {
            let r = e.structure.validate();
            assert!(r.is_pass(), "{}: {r}", e.name);
        }
        assert_eq!(modular_ortholattices().unwrap().len(), 11);
    }
}
