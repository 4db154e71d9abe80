use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lattice::{congruences, Congruence, FiniteLattice};
use crate::ortho::OrthoLattice;

/// Largest table ring accepted.
pub const MAX_TABLE_RING: usize = 4096;

/// A finite ring (optionally with involution) given by operation tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRing {
    names: Vec<String>,
    add: Vec<usize>,
    mul: Vec<usize>,
    neg: Vec<usize>,
    zero: usize,
    one: usize,
    star: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableRingJson {
    pub elements: Vec<String>,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star: Option<Vec<usize>>,
    pub one: usize,
}

/// `Lat(R)`: the principal right ideals (as sorted element sets) ordered by
/// inclusion, each with a generator.
#[derive(Clone, Debug)]
pub struct IdealLattice {
    pub lattice: FiniteLattice,
    pub ideals: Vec<Vec<usize>>,
    pub generators: Vec<usize>,
}

impl IdealLattice {
    pub fn index_of(&self, ideal: &[usize]) -> Option<usize> {
        self.ideals.iter().position(|i| i == ideal)
    }
}

/// Outcome of comparing `Con(Lat R)` with the ideal lattice of `R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealCongruenceReport {
    pub ideals: usize,
    pub congruences: usize,
    /// `I ↦ θ_I` is an order isomorphism onto `Con(Lat R)`.
    pub isomorphism: bool,
    pub counterexample: Option<String>,
}

impl TableRing {
    pub fn new(
        names: Vec<String>,
        add: Vec<Vec<usize>>,
        mul: Vec<Vec<usize>>,
        one: usize,
        star: Option<Vec<usize>>,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::NotARing("empty carrier".into()));
        }
        if n > MAX_TABLE_RING {
            return Err(Error::TooLarge {
                size: n,
                guard: MAX_TABLE_RING,
            });
        }
        let flat = |t: Vec<Vec<usize>>, what: &str| -> Result<Vec<usize>> {
            if t.len() != n || t.iter().any(|r| r.len() != n) {
                return Err(Error::DimensionMismatch(format!("{what} table is not {n}x{n}")));
            }
            let out: Vec<usize> = t.into_iter().flatten().collect();
            if let Some(&bad) = out.iter().find(|&&x| x >= n) {
                return Err(Error::Parse(format!("{what} table entry {bad} out of range")));
            }
            Ok(out)
        };
        let add = flat(add, "add")?;
        let mul = flat(mul, "mul")?;
        if one >= n {
            return Err(Error::Parse(format!("unit {one} out of range")));
        }
        if let Some(s) = &star {
            if s.len() != n || s.iter().any(|&x| x >= n) {
                return Err(Error::DimensionMismatch("star map has wrong shape".into()));
            }
        }
        let zero = (0..n)
            .find(|&z| (0..n).all(|x| add[z * n + x] == x))
            .ok_or_else(|| Error::NotARing("no additive identity".into()))?;
        let mut neg = vec![0; n];
        for x in 0..n {
            neg[x] = (0..n)
                .find(|&y| add[x * n + y] == zero)
                .ok_or_else(|| Error::NotARing(format!("{} has no additive inverse", names[x])))?;
        }
        let r = TableRing {
            names,
            add,
            mul,
            neg,
            zero,
            one,
            star,
        };
        r.check_axioms()?;
        Ok(r)
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.size();
        let name = |x: usize| self.names[x].as_str();
        if self.one == self.zero {
            return Err(Error::NotARing("1 = 0".into()));
        }
        for x in 0..n {
            if self.mul(self.one, x) != x || self.mul(x, self.one) != x {
                return Err(Error::NotARing(format!("1 is not a unit for {}", name(x))));
            }
            for y in 0..n {
                if self.add(x, y) != self.add(y, x) {
                    return Err(Error::NotARing(format!("addition not commutative at ({}, {})", name(x), name(y))));
                }
                for z in 0..n {
                    if self.add(self.add(x, y), z) != self.add(x, self.add(y, z)) {
                        return Err(Error::NotARing(format!(
                            "addition not associative at ({}, {}, {})",
                            name(x),
                            name(y),
                            name(z)
                        )));
                    }
                    if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                        return Err(Error::NotARing(format!(
                            "multiplication not associative at ({}, {}, {})",
                            name(x),
                            name(y),
                            name(z)
                        )));
                    }
                    if self.mul(x, self.add(y, z)) != self.add(self.mul(x, y), self.mul(x, z))
                        || self.mul(self.add(y, z), x) != self.add(self.mul(y, x), self.mul(z, x))
                    {
                        return Err(Error::NotARing(format!(
                            "distributivity fails at ({}, {}, {})",
                            name(x),
                            name(y),
                            name(z)
                        )));
                    }
                }
            }
        }
        if let Some(s) = &self.star {
            if s[self.one] != self.one {
                return Err(Error::NotARing("1* != 1".into()));
            }
            for x in 0..n {
                if s[s[x]] != x {
                    return Err(Error::NotARing(format!("{}** != {}", name(x), name(x))));
                }
                for y in 0..n {
                    if s[self.add(x, y)] != self.add(s[x], s[y]) {
                        return Err(Error::NotARing(format!("star not additive at ({}, {})", name(x), name(y))));
                    }
                    if s[self.mul(x, y)] != self.mul(s[y], s[x]) {
                        return Err(Error::NotARing(format!(
                            "star not anti-multiplicative at ({}, {})",
                            name(x),
                            name(y)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_json(raw: &TableRingJson) -> Result<Self> {
        Self::new(raw.elements.clone(), raw.add.clone(), raw.mul.clone(), raw.one, raw.star.clone())
    }

    pub fn from_json_value(v: &Value) -> Result<Self> {
        let raw: TableRingJson = serde_json::from_value(v.clone())?;
        Self::from_json(&raw)
    }

    pub fn to_json(&self) -> TableRingJson {
        let n = self.size();
        let rows = |t: &[usize]| t.chunks(n).map(<[usize]>::to_vec).collect();
        TableRingJson {
            elements: self.names.clone(),
            add: rows(&self.add),
            mul: rows(&self.mul),
            star: self.star.clone(),
            one: self.one,
        }
    }

    /// `ℤ/n` with the identity involution.
    pub fn integers_mod(n: usize) -> Result<Self> {
        let names = (0..n).map(|i| i.to_string()).collect();
        let add = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
        let mul = (0..n).map(|x| (0..n).map(|y| (x * y) % n).collect()).collect();
        Self::new(names, add, mul, 1 % n, Some((0..n).collect()))
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|s| s == name)
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.size() + y]
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.size() + y]
    }

    pub fn neg(&self, x: usize) -> usize {
        self.neg[x]
    }

    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg[y])
    }

    pub fn has_star(&self) -> bool {
        self.star.is_some()
    }

    /// The same ring with its involution forgotten.
    pub fn without_star(mut self) -> Self {
        self.star = None;
        self
    }

    pub fn star(&self, x: usize) -> Option<usize> {
        self.star.as_ref().map(|s| s[x])
    }

    fn star_map(&self) -> Result<&[usize]> {
        self.star
            .as_deref()
            .ok_or_else(|| Error::NotStarRegular("ring has no involution".into()))
    }

    /// `aR` as a sorted element set.
    pub fn right_ideal(&self, a: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = (0..self.size()).map(|r| self.mul(a, r)).collect();
        set.into_iter().collect()
    }

    pub fn regularity_witness(&self, a: usize) -> Option<usize> {
        (0..self.size()).find(|&x| self.mul(self.mul(a, x), a) == a)
    }

    /// Least element without a quasi-inverse.
    pub fn regularity_counterexample(&self) -> Option<usize> {
        (0..self.size()).find(|&a| self.regularity_witness(a).is_none())
    }

    pub fn is_regular(&self) -> bool {
        self.regularity_counterexample().is_none()
    }

    pub fn is_idempotent(&self, e: usize) -> bool {
        self.mul(e, e) == e
    }

    pub fn is_projection(&self, e: usize) -> bool {
        self.is_idempotent(e) && self.star(e) == Some(e)
    }

    pub fn projections(&self) -> Vec<usize> {
        (0..self.size()).filter(|&e| self.is_projection(e)).collect()
    }

    /// The unique projection `e` with `aR = eR`.
    pub fn projection_generator(&self, a: usize) -> Result<usize> {
        self.star_map()?;
        let target = self.right_ideal(a);
        let found: Vec<usize> = self
            .projections()
            .into_iter()
            .filter(|&e| self.right_ideal(e) == target)
            .collect();
        match found.as_slice() {
            [e] => Ok(*e),
            [] => Err(Error::NotStarRegular(format!("no projection generates {}R", self.name(a)))),
            [e, f, ..] => Err(Error::NotStarRegular(format!(
                "projections {} and {} both generate {}R",
                self.name(*e),
                self.name(*f),
                self.name(a)
            ))),
        }
    }

    /// Why the ring is not ⋆-regular, if it is not.
    pub fn star_regularity_violation(&self) -> Option<String> {
        let Some(s) = self.star.as_ref() else {
            return Some("ring has no involution".into());
        };
        if let Some(a) = self.regularity_counterexample() {
            return Some(format!("{} has no quasi-inverse", self.name(a)));
        }
        (0..self.size())
            .find(|&r| r != self.zero && self.mul(r, s[r]) == self.zero)
            .map(|r| format!("r r* = 0 for r = {}", self.name(r)))
    }

    pub fn is_star_regular(&self) -> bool {
        self.star_regularity_violation().is_none()
    }

    pub fn lat_of(&self) -> Result<IdealLattice> {
        if let Some(a) = self.regularity_counterexample() {
            return Err(Error::NotRegular(format!("{} has no quasi-inverse", self.name(a))));
        }
        let mut by_ideal: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for a in 0..self.size() {
            by_ideal.entry(self.right_ideal(a)).or_insert(a);
        }
        let mut pairs: Vec<(Vec<usize>, usize)> = by_ideal.into_iter().collect();
        pairs.sort_by(|x, y| x.0.len().cmp(&y.0.len()).then_with(|| x.0.cmp(&y.0)));
        let (ideals, generators): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        let subset = |a: &Vec<usize>, b: &Vec<usize>| a.iter().all(|x| b.binary_search(x).is_ok());
        let lattice = FiniteLattice::from_order_fn(ideals.len(), |i, j| subset(&ideals[i], &ideals[j]))?;
        if let Some((x, y, z)) = lattice.modularity_violation() {
            return Err(Error::InternalProofViolation(format!(
                "Lat(R) of a regular ring is not modular at ({x}, {y}, {z})"
            )));
        }
        if !lattice.is_complemented() {
            return Err(Error::InternalProofViolation(
                "Lat(R) of a regular ring is not complemented".into(),
            ));
        }
        Ok(IdealLattice {
            lattice,
            ideals,
            generators,
        })
    }

    /// `Lat(R)` with `(eR)^⊥ = (1-e)R`, validated as an ortholattice.
    pub fn ortholat_of(&self) -> Result<(OrthoLattice, IdealLattice)> {
        if let Some(why) = self.star_regularity_violation() {
            return Err(Error::NotStarRegular(why));
        }
        let lat = self.lat_of()?;
        let perp = lat
            .generators
            .iter()
            .map(|&a| {
                let e = self.projection_generator(a)?;
                let comp = self.right_ideal(self.sub(self.one, e));
                lat.index_of(&comp)
                    .ok_or_else(|| Error::InternalProofViolation("(1-e)R missing from Lat(R)".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((OrthoLattice::new(lat.lattice.clone(), perp)?, lat))
    }

    /// `eR ⊆ fR` for projections, tested as `fe = e`.
    pub fn ideal_leq(&self, e: usize, f: usize) -> bool {
        self.mul(f, e) == e
    }

    /// `e ⊥ f` for projections: `fe = 0 = ef`.
    pub fn projections_orthogonal(&self, e: usize, f: usize) -> bool {
        self.mul(f, e) == self.zero && self.mul(e, f) == self.zero
    }

    /// The corner `eRe` with unit `e`.
    pub fn corner(&self, e: usize) -> Result<TableRing> {
        let ok = match &self.star {
            Some(_) => self.is_projection(e),
            None => self.is_idempotent(e),
        };
        if !ok {
            return Err(Error::NotProjection);
        }
        let carrier: BTreeSet<usize> = (0..self.size()).map(|a| self.mul(self.mul(e, a), e)).collect();
        let carrier: Vec<usize> = carrier.into_iter().collect();
        self.restrict(&carrier, e)
    }

    fn restrict(&self, carrier: &[usize], one: usize) -> Result<TableRing> {
        let idx = |x: usize| {
            carrier
                .binary_search(&x)
                .map_err(|_| Error::NotARing(format!("{} escapes the subring", self.name(x))))
        };
        let table = |op: &dyn Fn(usize, usize) -> usize| -> Result<Vec<Vec<usize>>> {
            carrier
                .iter()
                .map(|&x| carrier.iter().map(|&y| idx(op(x, y))).collect())
                .collect()
        };
        let add = table(&|x, y| self.add(x, y))?;
        let mul = table(&|x, y| self.mul(x, y))?;
        let star = match &self.star {
            Some(s) => Some(carrier.iter().map(|&x| idx(s[x])).collect::<Result<Vec<_>>>()?),
            None => None,
        };
        TableRing::new(
            carrier.iter().map(|&x| self.names[x].clone()).collect(),
            add,
            mul,
            idx(one)?,
            star,
        )
    }

    fn additive_closure(&self, seed: BTreeSet<usize>) -> BTreeSet<usize> {
        let mut set = seed;
        set.insert(self.zero);
        loop {
            let items: Vec<usize> = set.iter().copied().collect();
            let before = set.len();
            for &x in &items {
                for &y in &items {
                    set.insert(self.add(x, y));
                }
            }
            if set.len() == before {
                return set;
            }
        }
    }

    /// The two-sided ideal generated by a set.
    pub fn ideal_generated(&self, gens: &[usize]) -> Vec<usize> {
        let n = self.size();
        let mut seed = BTreeSet::new();
        for &a in gens {
            for x in 0..n {
                let xa = self.mul(x, a);
                for y in 0..n {
                    seed.insert(self.mul(xa, y));
                }
            }
        }
        self.additive_closure(seed).into_iter().collect()
    }

    /// All two-sided ideals, sorted by size then content.
    pub fn ideals(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        found.insert(vec![self.zero]);
        for a in 0..self.size() {
            found.insert(self.ideal_generated(&[a]));
        }
        // close under sums
        loop {
            let items: Vec<Vec<usize>> = found.iter().cloned().collect();
            let before = found.len();
            for i in &items {
                for j in &items {
                    let union: Vec<usize> = i.iter().chain(j).copied().collect();
                    found.insert(self.additive_closure(union.into_iter().collect()).into_iter().collect());
                }
            }
            if found.len() == before {
                break;
            }
        }
        let mut out: Vec<Vec<usize>> = found.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    pub fn is_simple_ring(&self) -> bool {
        self.ideals().len() == 2
    }

    /// Every ideal is closed under the involution.
    pub fn ideals_star_closed(&self) -> bool {
        match &self.star {
            Some(s) => self.ideals().iter().all(|i| i.iter().all(|&x| i.binary_search(&s[x]).is_ok())),
            None => false,
        }
    }

    /// Direct product; elements are named `(x,y)` and indexed `i*m + j`.
    pub fn product(&self, other: &TableRing) -> Result<TableRing> {
        let (n, m) = (self.size(), other.size());
        let names = (0..n * m)
            .map(|k| format!("({},{})", self.names[k / m], other.names[k % m]))
            .collect();
        let table = |f: &dyn Fn(usize, usize) -> usize, g: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<usize>> {
            (0..n * m)
                .map(|x| (0..n * m).map(|y| f(x / m, y / m) * m + g(x % m, y % m)).collect())
                .collect()
        };
        let add = table(&|a, b| self.add(a, b), &|a, b| other.add(a, b));
        let mul = table(&|a, b| self.mul(a, b), &|a, b| other.mul(a, b));
        let star = match (&self.star, &other.star) {
            (Some(s), Some(t)) => Some((0..n * m).map(|x| s[x / m] * m + t[x % m]).collect()),
            _ => None,
        };
        TableRing::new(names, add, mul, self.one * m + other.one, star)
    }

    /// Compare `Con(Lat R)` with the ideals of `R` via `I ↦ θ_I`, where
    /// `X θ_I Y` iff `X + I = Y + I`.
    pub fn ideal_congruence_check(&self, guard: usize) -> Result<IdealCongruenceReport> {
        let lat = self.lat_of()?;
        let con = congruences(&lat.lattice, guard)?;
        let ideals = self.ideals();
        let sum = |x: &[usize], i: &[usize]| -> Vec<usize> {
            let set: BTreeSet<usize> = x.iter().flat_map(|&a| i.iter().map(move |&b| (a, b))).map(|(a, b)| self.add(a, b)).collect();
            set.into_iter().collect()
        };
        let thetas: Vec<Congruence> = ideals
            .iter()
            .map(|i| {
                let mut blocks: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
                for (k, x) in lat.ideals.iter().enumerate() {
                    blocks.entry(sum(x, i)).or_default().push(k);
                }
                Congruence::from_blocks(lat.ideals.len(), &blocks.into_values().collect::<Vec<_>>())
            })
            .collect();
        let mut report = IdealCongruenceReport {
            ideals: ideals.len(),
            congruences: con.len(),
            isomorphism: false,
            counterexample: None,
        };
        let fmt_ideal = |i: &[usize]| {
            let names: Vec<&str> = i.iter().map(|&x| self.name(x)).collect();
            format!("{{{}}}", names.join(", "))
        };
        let mut images = Vec::new();
        for (i, t) in ideals.iter().zip(&thetas) {
            match con.index_of(t) {
                Some(k) => images.push(k),
                None => {
                    report.counterexample = Some(format!("θ_I is not a congruence for I = {}", fmt_ideal(i)));
                    return Ok(report);
                }
            }
        }
        let distinct: BTreeSet<usize> = images.iter().copied().collect();
        if distinct.len() != images.len() || images.len() != con.len() {
            report.counterexample = Some(format!(
                "I ↦ θ_I is not a bijection: {} ideals, {} congruences, {} images",
                ideals.len(),
                con.len(),
                distinct.len()
            ));
            return Ok(report);
        }
        let subset = |a: &Vec<usize>, b: &Vec<usize>| a.iter().all(|x| b.binary_search(x).is_ok());
        for (a, i) in ideals.iter().enumerate() {
            for (b, j) in ideals.iter().enumerate() {
                if subset(i, j) != thetas[a].refines(&thetas[b]) {
                    report.counterexample = Some(format!(
                        "order not preserved between I = {} and J = {}",
                        fmt_ideal(i),
                        fmt_ideal(j)
                    ));
                    return Ok(report);
                }
            }
        }
        report.isomorphism = true;
        Ok(report)
    }
}
