//! Reading JSON inputs into library structures.

use std::fs;
use std::path::Path;

use orthocoord::field::{Field, FieldKind, GaloisField, Rationals};
use orthocoord::lattice::FiniteLattice;
use orthocoord::ortho::{FrameKind, FrameWitness, OrthoLattice};
use orthocoord::rep::parse_element;
use orthocoord::ring::{MatrixRing, RightIdeal, TableRing};
use orthocoord::Error;
use serde_json::Value;

/// Why a command stopped early.
#[derive(Debug)]
pub enum Failure {
    /// Unreadable or ill-formed input (exit 2).
    Malformed(String),
    /// The input is well formed but a property fails (exit 1).
    Violated(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidField(_) | Error::DimensionMismatch(_) => Failure::Malformed(e.to_string()),
            other => Failure::Violated(other),
        }
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;

pub fn read_json(path: &Path) -> Outcome<Value> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        Failure::Malformed(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column()))
    })
}

/// Either kind of ring descriptor.
pub enum AnyRing {
    Table(TableRing),
    Rational(MatrixRing<Rationals>),
    Finite(MatrixRing<GaloisField>),
}

pub fn field_kind(v: &Value) -> Outcome<FieldKind> {
    match v.get("field") {
        Some(f) => Ok(FieldKind::from_json(f)?),
        None => Ok(FieldKind::Rational),
    }
}

pub fn galois(p: u32, k: u32) -> Outcome<GaloisField> {
    Ok(GaloisField::new(p, k)?)
}

/// Field of a matrix ring: the top-level `field`, else the blocks' common
/// `field`. `None` when the blocks disagree.
fn ring_field(v: &Value) -> Outcome<Option<FieldKind>> {
    if v.get("field").is_some() {
        return field_kind(v).map(Some);
    }
    let blocks = v
        .get("blocks")
        .and_then(Value::as_array)
        .ok_or_else(|| Failure::Malformed("ring needs `elements` (table) or `blocks` (matrix ring)".into()))?;
    let kinds = blocks.iter().map(field_kind).collect::<Outcome<Vec<_>>>()?;
    match kinds.split_first() {
        None => Err(Failure::Malformed("ring has no blocks".into())),
        Some((first, rest)) if rest.iter().all(|k| k == first) => Ok(Some(*first)),
        Some(_) => Ok(None),
    }
}

pub fn load_ring(v: &Value) -> Outcome<AnyRing> {
    if v.get("elements").is_some() {
        return Ok(AnyRing::Table(TableRing::from_json_value(v)?));
    }
    match ring_field(v)? {
        Some(FieldKind::Rational) => Ok(AnyRing::Rational(MatrixRing::from_json(Rationals, v)?)),
        Some(FieldKind::Galois { p, k }) => Ok(AnyRing::Finite(MatrixRing::from_json(galois(p, k)?, v)?)),
        None => {
            // blocks over different fields: only finite ones can be multiplied out
            let mut table: Option<TableRing> = None;
            for b in v["blocks"].as_array().expect("checked above") {
                let FieldKind::Galois { p, k } = field_kind(b)? else {
                    return Err(Failure::Malformed("mixed-field products need finite fields in every block".into()));
                };
                let one = serde_json::json!({ "blocks": [b] });
                let t = MatrixRing::from_json(galois(p, k)?, &one)?.to_table()?;
                table = Some(match table {
                    None => t,
                    Some(acc) => acc.product(&t)?,
                });
            }
            Ok(AnyRing::Table(table.expect("nonempty")))
        }
    }
}

/// A matrix ring, rejecting table rings.
pub fn matrix_ring_field(v: &Value) -> Outcome<FieldKind> {
    if v.get("elements").is_some() {
        return Err(Failure::Malformed(
            "representations need a matrix-ring descriptor, not a multiplication table".into(),
        ));
    }
    ring_field(v)?.ok_or_else(|| Failure::Malformed("representations need a single field".into()))
}

pub enum AnyLattice {
    Plain(FiniteLattice),
    Ortho(OrthoLattice),
}

impl AnyLattice {
    pub fn base(&self) -> &FiniteLattice {
        match self {
            AnyLattice::Plain(l) => l,
            AnyLattice::Ortho(l) => l.base(),
        }
    }
}

pub fn load_lattice(v: &Value) -> Outcome<AnyLattice> {
    if v.get("perp").is_some() {
        Ok(AnyLattice::Ortho(OrthoLattice::from_json_value(v)?))
    } else {
        Ok(AnyLattice::Plain(FiniteLattice::from_json_value(v)?))
    }
}

pub fn load_ortholattice(v: &Value) -> Outcome<OrthoLattice> {
    if v.get("perp").is_none() {
        return Err(Failure::Malformed("ortholattice needs `perp`".into()));
    }
    Ok(OrthoLattice::from_json_value(v)?)
}

/// `{"a": [expr], "b": [expr], "axes": [expr]}`: an orthogonal semiframe of
/// right ideals, each given by a generating element.
pub fn ring_semiframe<F: Field>(ring: &MatrixRing<F>, v: &Value) -> Outcome<FrameWitness<RightIdeal<F>>> {
    let list = |key: &str| -> Outcome<Vec<RightIdeal<F>>> {
        v.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| Failure::Malformed(format!("semiframe needs `{key}`")))?
            .iter()
            .map(|x| {
                let s = x
                    .as_str()
                    .ok_or_else(|| Failure::Malformed(format!("`{key}` entries are element expressions")))?;
                Ok(ring.right_ideal(&parse_element(ring, s)?))
            })
            .collect()
    };
    let a = list("a")?;
    Ok(FrameWitness {
        kind: FrameKind::OrthoSemiframe { k: a.len() },
        b: list("b")?,
        axes: list("axes")?,
        a,
        a0: Vec::new(),
    })
}
