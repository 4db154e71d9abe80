use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::Lattice;
use crate::error::{Error, Result};

/// A finite lattice given by its order relation and full meet/join tables.
///
/// Tables are computed from the order and cross-checked on construction, so
/// a value of this type always satisfies the lattice axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    n: usize,
    leq: Vec<bool>,
    meet: Vec<usize>,
    join: Vec<usize>,
    bot: usize,
    top: usize,
}

/// JSON wire format: `{"n":..,"covers":[[lo,hi],..]}` or `{"n":..,"leq":[[..]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeJson {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covers: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leq: Option<Vec<Vec<bool>>>,
}

impl FiniteLattice {
    /// Validate an order relation (closed reflexively and transitively first).
    pub fn from_leq(n: usize, raw: &[Vec<bool>]) -> Result<Self> {
        if raw.len() != n || raw.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("leq must be {n}x{n}")));
        }
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = raw[i][j] || i == j;
            }
        }
        Self::from_closed_relation(n, transitive_closure(n, leq))
    }

    pub fn from_covers(n: usize, covers: &[[usize; 2]]) -> Result<Self> {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &[lo, hi] in covers {
            if lo >= n || hi >= n {
                return Err(Error::NotAnOrder(format!("cover ({lo},{hi}) out of range")));
            }
            leq[lo * n + hi] = true;
        }
        Self::from_closed_relation(n, transitive_closure(n, leq))
    }

    /// Build from an order predicate that is already a partial order.
    pub fn from_order_fn(n: usize, le: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = i == j || le(i, j);
            }
        }
        Self::from_closed_relation(n, transitive_closure(n, leq))
    }

    fn from_closed_relation(n: usize, leq: Vec<bool>) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoBounds);
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::NotAnOrder(format!("{i} and {j} lie on a cycle")));
                }
            }
        }
        let bots: Vec<usize> = (0..n).filter(|&b| (0..n).all(|x| leq[b * n + x])).collect();
        let tops: Vec<usize> = (0..n).filter(|&t| (0..n).all(|x| leq[x * n + t])).collect();
        let (&[bot], &[top]) = (bots.as_slice(), tops.as_slice()) else {
            return Err(Error::NoBounds);
        };
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let lower: Vec<usize> = (0..n).filter(|&x| leq[x * n + a] && leq[x * n + b]).collect();
                let m = lower
                    .iter()
                    .copied()
                    .find(|&x| lower.iter().all(|&y| leq[y * n + x]))
                    .ok_or(Error::NotALattice(a, b))?;
                let upper: Vec<usize> = (0..n).filter(|&x| leq[a * n + x] && leq[b * n + x]).collect();
                let j = upper
                    .iter()
                    .copied()
                    .find(|&x| upper.iter().all(|&y| leq[x * n + y]))
                    .ok_or(Error::NotALattice(a, b))?;
                meet[a * n + b] = m;
                meet[b * n + a] = m;
                join[a * n + b] = j;
                join[b * n + a] = j;
            }
        }
        Ok(FiniteLattice {
            n,
            leq,
            meet,
            join,
            bot,
            top,
        })
    }

    pub fn from_json_value(v: &Value) -> Result<Self> {
        let raw: LatticeJson = serde_json::from_value(v.clone())?;
        Self::from_json(&raw)
    }

    pub fn from_json(raw: &LatticeJson) -> Result<Self> {
        match (&raw.covers, &raw.leq) {
            (_, Some(leq)) => Self::from_leq(raw.n, leq),
            (Some(covers), None) => Self::from_covers(raw.n, covers),
            (None, None) => Err(Error::Parse("lattice needs `covers` or `leq`".into())),
        }
    }

    pub fn to_json(&self) -> LatticeJson {
        LatticeJson {
            n: self.n,
            covers: Some(self.covers()),
            leq: None,
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn bot(&self) -> usize {
        self.bot
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.n + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.n + b]
    }

    /// Covering pairs `(lo, hi)`.
    pub fn covers(&self) -> Vec<[usize; 2]> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if self.lt(a, b) && !(0..self.n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push([a, b]);
                }
            }
        }
        out
    }

    /// A triple `(a, b, c)` with `a ≤ b` and `a + (c ∩ b) ≠ (a + c) ∩ b`.
    pub fn modularity_violation(&self) -> Option<(usize, usize, usize)> {
        for a in 0..self.n {
            for b in 0..self.n {
                if !self.leq(a, b) {
                    continue;
                }
                for c in 0..self.n {
                    if self.join(a, self.meet(c, b)) != self.meet(self.join(a, c), b) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_modular(&self) -> bool {
        self.modularity_violation().is_none()
    }

    /// A pentagon sublattice, reported as `[bottom, a, c, b, top]` with
    /// `a < c`, `a ∩ b = c ∩ b` and `a + b = c + b`.
    pub fn pentagon(&self) -> Option<[usize; 5]> {
        for a in 0..self.n {
            for c in 0..self.n {
                if !self.lt(a, c) {
                    continue;
                }
                for b in 0..self.n {
                    let lo = self.meet(a, b);
                    let hi = self.join(a, b);
                    if lo == self.meet(c, b) && hi == self.join(c, b) {
                        return Some([lo, a, c, b, hi]);
                    }
                }
            }
        }
        None
    }

    pub fn complements(&self, a: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&b| self.join(a, b) == self.top && self.meet(a, b) == self.bot)
            .collect()
    }

    pub fn is_complemented(&self) -> bool {
        (0..self.n).all(|a| !self.complements(a).is_empty())
    }

    /// Longest chain length from the bottom to each element, on the cover DAG.
    fn chain_lengths(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&x| (0..self.n).filter(|&y| self.leq(y, x)).count());
        let covers = self.covers();
        let mut len = vec![0usize; self.n];
        for &x in &order {
            for &[lo, hi] in &covers {
                if hi == x {
                    len[x] = len[x].max(len[lo] + 1);
                }
            }
        }
        len
    }

    pub fn height(&self) -> usize {
        self.chain_lengths()[self.top]
    }

    pub fn height_of(&self, a: usize) -> usize {
        self.chain_lengths()[a]
    }

    /// All axes `c` with `a ∼_c b`.
    pub fn perspectivity_axes(&self, a: usize, b: usize) -> Vec<usize> {
        let s = self.join(a, b);
        (0..self.n)
            .filter(|&c| {
                self.join(a, c) == s
                    && self.join(b, c) == s
                    && self.meet(a, c) == self.bot
                    && self.meet(b, c) == self.bot
            })
            .collect()
    }

    pub fn are_perspective(&self, a: usize, b: usize) -> bool {
        !self.perspectivity_axes(a, b).is_empty()
    }

    /// Least `b' ≤ b` (by index) perspective to `a_sub`, with its least axis.
    pub fn sub_perspective(&self, a_sub: usize, b: usize) -> Option<(usize, usize)> {
        (0..self.n).filter(|&x| self.leq(x, b)).find_map(|x| {
            self.perspectivity_axes(a_sub, x)
                .first()
                .map(|&axis| (x, axis))
        })
    }

    /// Direct product, element `(i, j)` at index `i * other.size() + j`.
    pub fn product(&self, other: &FiniteLattice) -> FiniteLattice {
        let m = other.n;
        FiniteLattice::from_order_fn(self.n * m, |x, y| {
            self.leq(x / m, y / m) && other.leq(x % m, y % m)
        })
        .expect("product of lattices is a lattice")
    }

    /// Sub-structure on the given elements, re-indexed in the given order.
    /// Fails unless the elements are closed under meet and join.
    pub fn restrict(&self, elems: &[usize]) -> Result<FiniteLattice> {
        let lat = FiniteLattice::from_order_fn(elems.len(), |i, j| self.leq(elems[i], elems[j]))?;
        for i in 0..elems.len() {
            for j in 0..elems.len() {
                if elems[lat.meet(i, j)] != self.meet(elems[i], elems[j])
                    || elems[lat.join(i, j)] != self.join(elems[i], elems[j])
                {
                    return Err(Error::NotALattice(elems[i], elems[j]));
                }
            }
        }
        Ok(lat)
    }
}

fn transitive_closure(n: usize, mut leq: Vec<bool>) -> Vec<bool> {
    for k in 0..n {
        for i in 0..n {
            if !leq[i * n + k] {
                continue;
            }
            for j in 0..n {
                if leq[k * n + j] {
                    leq[i * n + j] = true;
                }
            }
        }
    }
    leq
}

impl Lattice for FiniteLattice {
    type Elem = usize;

    fn bot(&self) -> usize {
        self.bot
    }
    fn top(&self) -> usize {
        self.top
    }
    fn meet(&self, a: &usize, b: &usize) -> usize {
        FiniteLattice::meet(self, *a, *b)
    }
    fn join(&self, a: &usize, b: &usize) -> usize {
        FiniteLattice::join(self, *a, *b)
    }
    fn leq(&self, a: &usize, b: &usize) -> bool {
        FiniteLattice::leq(self, *a, *b)
    }
    fn sub_perspective(&self, a_sub: &usize, _a: &usize, b: &usize, _axis: &usize) -> Option<(usize, usize)> {
        FiniteLattice::sub_perspective(self, *a_sub, *b)
    }
    fn perspective_partner_within(&self, x: &usize, bound: &usize) -> Option<(usize, usize)> {
        FiniteLattice::sub_perspective(self, *x, *bound)
    }
}
