//! Exact scalar fields: the rationals and small Galois fields GF(p^k).
//!
//! Everything downstream is generic over [`Field`]. Field values carry the
//! descriptor needed to do arithmetic on their elements, so a matrix or a
//! subspace only has to hold a cheap clone of its field.

use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde_json::Value;

use crate::error::{Error, Result};

/// Largest field order for which we build full addition/multiplication tables.
pub const MAX_GALOIS_ORDER: u32 = 256;

/// A field involution used for sesquilinear forms and adjoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Involution {
    #[default]
    Identity,
    /// `x ↦ x^(p^(k/2))` on GF(p^k) with `k` even.
    Frobenius,
}

impl Involution {
    pub fn name(self) -> &'static str {
        match self {
            Involution::Identity => "id",
            Involution::Frobenius => "frobenius",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "id" | "identity" => Ok(Involution::Identity),
            "frobenius" => Ok(Involution::Frobenius),
            other => Err(Error::Parse(format!("unknown involution `{other}`"))),
        }
    }
}

/// Descriptor of a field as it appears in JSON: `"Q"` or `{"p":..,"k":..}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    Galois { p: u32, k: u32 },
}

impl FieldKind {
    pub fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) if s == "Q" => Ok(FieldKind::Rational),
            Value::Object(map) => {
                let p = map
                    .get("p")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Parse("field object needs integer `p`".into()))?;
                let k = map.get("k").and_then(Value::as_u64).unwrap_or(1);
                Ok(FieldKind::Galois {
                    p: p as u32,
                    k: k as u32,
                })
            }
            other => Err(Error::Parse(format!("bad field descriptor {other}"))),
        }
    }

    pub fn to_json(self) -> Value {
        match self {
            FieldKind::Rational => Value::String("Q".into()),
            FieldKind::Galois { p, k } => serde_json::json!({ "p": p, "k": k }),
        }
    }
}

pub trait Field: Clone + Debug + PartialEq {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Ord;

    fn kind(&self) -> FieldKind;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;

    /// Apply an involution. Fails when the involution does not exist on this field.
    fn involute(&self, sigma: Involution, a: &Self::Elem) -> Result<Self::Elem>;

    /// `None` for infinite fields.
    fn order(&self) -> Option<u64>;

    /// All elements, for finite fields.
    fn elements(&self) -> Option<Vec<Self::Elem>>;

    /// Whether the field is its own prime subfield (ℚ or GF(p)).
    fn is_prime_field(&self) -> bool;

    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn elem_to_json(&self, a: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem>;
    fn format_elem(&self, a: &Self::Elem) -> String;

    /// Sign for ordered fields, `None` otherwise.
    fn sign(&self, _a: &Self::Elem) -> Option<i32> {
        None
    }

    /// An exact square root, if one exists in the field.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem> {
        self.elements()?.into_iter().find(|x| self.mul(x, x) == *a)
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn check_involution(&self, sigma: Involution) -> Result<()> {
        self.involute(sigma, &self.one()).map(|_| ())
    }
}

/// The field ℚ with arbitrary-precision rationals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn kind(&self) -> FieldKind {
        FieldKind::Rational
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn involute(&self, sigma: Involution, a: &BigRational) -> Result<BigRational> {
        match sigma {
            Involution::Identity => Ok(a.clone()),
            Involution::Frobenius => Err(Error::InvalidField(
                "ℚ has no non-trivial involution".into(),
            )),
        }
    }
    fn order(&self) -> Option<u64> {
        None
    }
    fn elements(&self) -> Option<Vec<BigRational>> {
        None
    }
    fn is_prime_field(&self) -> bool {
        true
    }
    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        // small numerators and denominators keep exact arithmetic cheap
        let num: i64 = rng.random_range(-4..=4);
        let den: i64 = if rng.random_bool(0.25) {
            rng.random_range(1..=3)
        } else {
            1
        };
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn elem_to_json(&self, a: &BigRational) -> Value {
        Value::String(format_rational(a))
    }
    fn elem_from_json(&self, v: &Value) -> Result<BigRational> {
        match v {
            Value::Number(n) => n
                .as_i64()
                .map(|i| self.from_i64(i))
                .ok_or_else(|| Error::Parse(format!("non-integer number {n}; use \"p/q\""))),
            Value::String(s) => parse_rational(s),
            other => Err(Error::Parse(format!("expected rational, got {other}"))),
        }
    }
    fn format_elem(&self, a: &BigRational) -> String {
        format_rational(a)
    }
    fn sign(&self, a: &BigRational) -> Option<i32> {
        Some(rational_sign(a))
    }
    fn sqrt(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_negative() {
            return None;
        }
        let (n, d) = (a.numer().sqrt(), a.denom().sqrt());
        (&n * &n == *a.numer() && &d * &d == *a.denom()).then(|| BigRational::new(n, d))
    }
}

pub fn format_rational(a: &BigRational) -> String {
    if a.denom().is_one() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Shorthand for building rationals in tests and models.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug)]
struct GaloisTables {
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    frobenius_half: Option<Vec<u32>>,
}

/// GF(p^k), elements encoded as `Σ c_i p^i` for coefficient vectors modulo a
/// fixed irreducible polynomial (the lexicographically first monic one).
#[derive(Clone, Debug)]
pub struct GaloisField {
    p: u32,
    k: u32,
    q: u32,
    tables: Arc<GaloisTables>,
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k
    }
}

impl Eq for GaloisField {}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u32; 2 * k];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    // reduce by the monic modulus from the top
    for deg in (k..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        for (t, &m) in modulus.iter().enumerate() {
            let idx = deg - k + t;
            prod[idx] = (prod[idx] + p * p - (c * m) % p) % p;
        }
    }
    prod.truncate(k);
    prod
}

fn poly_has_factor(modulus: &[u32], p: u32) -> bool {
    // trial division by every monic polynomial of degree 1..=k/2
    let k = modulus.len() - 1;
    for deg in 1..=k / 2 {
        let count = p.pow(deg as u32);
        for code in 0..count {
            let mut div = decode(code, p, deg);
            div.push(1);
            if poly_rem(modulus, &div, p).iter().all(|&c| c == 0) {
                return true;
            }
        }
    }
    false
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p);
    while r.len() > db {
        let top = r.len() - 1;
        let c = (r[top] * lead_inv) % p;
        if c != 0 {
            for (t, &bt) in b.iter().enumerate() {
                let idx = top - db + t;
                r[idx] = (r[idx] + p * p - (c * bt) % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    (1..p).find(|x| (a * x) % p == 1).unwrap_or(0)
}

fn decode(mut code: u32, p: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let c = code % p;
            code /= p;
            c
        })
        .collect()
}

fn encode(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

impl GaloisField {
    pub fn new(p: u32, k: u32) -> Result<Self> {
        if !is_prime(p) || k == 0 {
            return Err(Error::InvalidField(format!("GF({p}^{k}) is not a field")));
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= MAX_GALOIS_ORDER)
            .ok_or_else(|| {
                Error::InvalidField(format!(
                    "GF({p}^{k}) exceeds the supported order {MAX_GALOIS_ORDER}"
                ))
            })?;
        let k_us = k as usize;
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            (0..p.pow(k))
                .map(|code| {
                    let mut m = decode(code, p, k_us);
                    m.push(1);
                    m
                })
                .find(|m| m[0] != 0 && !poly_has_factor(m, p))
                .expect("irreducible polynomials exist in every degree")
        };
        let n = q as usize;
        let mut add = vec![0u32; n * n];
        let mut mul = vec![0u32; n * n];
        let mut neg = vec![0u32; n];
        for a in 0..q {
            let ca = decode(a, p, k_us);
            neg[a as usize] = encode(&ca.iter().map(|&c| (p - c) % p).collect::<Vec<_>>(), p);
            for b in 0..q {
                let cb = decode(b, p, k_us);
                let sum: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * n + b as usize] = encode(&sum, p);
                let prod = if k == 1 {
                    vec![(ca[0] * cb[0]) % p]
                } else {
                    poly_mulmod(&ca, &cb, &modulus, p)
                };
                mul[a as usize * n + b as usize] = encode(&prod, p);
            }
        }
        let mut inv = vec![0u32; n];
        for a in 1..q {
            inv[a as usize] = (1..q)
                .find(|&b| mul[a as usize * n + b as usize] == 1)
                .expect("nonzero elements are invertible");
        }
        let frobenius_half = (k % 2 == 0).then(|| {
            let e = p.pow(k / 2);
            (0..q)
                .map(|a| {
                    let mut acc = 1u32;
                    for _ in 0..e {
                        acc = mul[acc as usize * n + a as usize];
                    }
                    acc
                })
                .collect()
        });
        Ok(GaloisField {
            p,
            k,
            q,
            tables: Arc::new(GaloisTables {
                modulus,
                add,
                mul,
                neg,
                inv,
                frobenius_half,
            }),
        })
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    /// Coefficients of the defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.tables.modulus
    }
}

impl Field for GaloisField {
    type Elem = u32;

    fn kind(&self) -> FieldKind {
        FieldKind::Galois {
            p: self.p,
            k: self.k,
        }
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        self.tables.add[*a as usize * self.q as usize + *b as usize]
    }
    fn neg(&self, a: &u32) -> u32 {
        self.tables.neg[*a as usize]
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.tables.mul[*a as usize * self.q as usize + *b as usize]
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        (*a != 0).then(|| self.tables.inv[*a as usize])
    }
    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
    fn involute(&self, sigma: Involution, a: &u32) -> Result<u32> {
        match sigma {
            Involution::Identity => Ok(*a),
            Involution::Frobenius => self
                .tables
                .frobenius_half
                .as_ref()
                .map(|t| t[*a as usize])
                .ok_or_else(|| {
                    Error::InvalidField(format!(
                        "GF({}^{}) has no involutive Frobenius (odd degree)",
                        self.p, self.k
                    ))
                }),
        }
    }
    fn order(&self) -> Option<u64> {
        Some(self.q as u64)
    }
    fn elements(&self) -> Option<Vec<u32>> {
        Some((0..self.q).collect())
    }
    fn is_prime_field(&self) -> bool {
        self.k == 1
    }
    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.random_range(0..self.q)
    }
    fn elem_to_json(&self, a: &u32) -> Value {
        Value::from(*a)
    }
    fn elem_from_json(&self, v: &Value) -> Result<u32> {
        if let Some(i) = v.as_i64() {
            if self.k == 1 {
                return Ok(self.from_i64(i));
            }
            if (0..self.q as i64).contains(&i) {
                return Ok(i as u32);
            }
        }
        Err(Error::Parse(format!(
            "bad GF({}^{}) element {v}",
            self.p, self.k
        )))
    }
    fn format_elem(&self, a: &u32) -> String {
        a.to_string()
    }
}

/// Sign of a rational.
pub fn rational_sign(a: &BigRational) -> i32 {
    if a.is_zero() {
        0
    } else if a.is_positive() {
        1
    } else {
        -1
    }
}
