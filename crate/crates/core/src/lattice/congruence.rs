use std::collections::BTreeSet;

use super::finite::FiniteLattice;
use crate::error::{Error, Result};

/// A lattice congruence as a partition; each element is labelled by the least
/// element of its block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    labels: Vec<usize>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    /// Returns whether the classes were distinct.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn into_congruence(mut self) -> Congruence {
        let n = self.parent.len();
        let labels = (0..n).map(|x| self.find(x)).collect();
        Congruence::from_labels(labels)
    }
}

impl Congruence {
    fn from_labels(raw: Vec<usize>) -> Self {
        // relabel by least block member
        let n = raw.len();
        let mut least = vec![usize::MAX; n];
        for (x, &r) in raw.iter().enumerate() {
            least[r] = least[r].min(x);
        }
        Congruence {
            labels: raw.iter().map(|&r| least[r]).collect(),
        }
    }

    /// Build from explicit blocks; elements not mentioned stay singletons.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Self {
        let mut uf = UnionFind::new(n);
        for b in blocks {
            for w in b.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        uf.into_congruence()
    }

    pub fn identity(n: usize) -> Self {
        Congruence {
            labels: (0..n).collect(),
        }
    }

    pub fn all(n: usize) -> Self {
        Congruence { labels: vec![0; n] }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.labels[a] == self.labels[b]
    }

    pub fn num_blocks(&self) -> usize {
        self.labels.iter().enumerate().filter(|(x, &l)| *x == l).count()
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (x, &l) in self.labels.iter().enumerate() {
            if x == l {
                out.push(vec![x]);
            } else {
                let block = out.iter_mut().find(|b| b[0] == l).expect("label is least member");
                block.push(x);
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.labels.iter().enumerate().all(|(x, &l)| x == l)
    }

    pub fn is_all(&self) -> bool {
        self.labels.iter().all(|&l| l == 0)
    }

    /// Refinement order: every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Congruence) -> bool {
        (0..self.size()).all(|x| other.related(x, self.labels[x]))
    }

    /// Join as equivalence relations.
    pub fn join(&self, other: &Congruence) -> Congruence {
        let mut uf = UnionFind::new(self.size());
        for x in 0..self.size() {
            uf.union(x, self.labels[x]);
            uf.union(x, other.labels[x]);
        }
        uf.into_congruence()
    }

    /// Block-wise substitution test against meet and join.
    pub fn is_compatible(&self, l: &FiniteLattice) -> bool {
        let n = l.size();
        (0..n).all(|x| {
            let y = self.labels[x];
            x == y
                || (0..n).all(|z| {
                    self.related(l.join(x, z), l.join(y, z)) && self.related(l.meet(x, z), l.meet(y, z))
                })
        })
    }
}

/// The least congruence identifying `a` and `b`.
pub fn principal_congruence(l: &FiniteLattice, a: usize, b: usize) -> Congruence {
    let n = l.size();
    let mut uf = UnionFind::new(n);
    uf.union(a, b);
    loop {
        let mut changed = false;
        for x in 0..n {
            let y = uf.find(x);
            if x == y {
                continue;
            }
            for z in 0..n {
                changed |= uf.union(l.join(x, z), l.join(y, z));
                changed |= uf.union(l.meet(x, z), l.meet(y, z));
            }
        }
        if !changed {
            break;
        }
    }
    uf.into_congruence()
}

/// All congruences of a finite lattice together with their refinement lattice.
#[derive(Clone, Debug)]
pub struct CongruenceLattice {
    pub congruences: Vec<Congruence>,
    pub lattice: FiniteLattice,
}

impl CongruenceLattice {
    pub fn len(&self) -> usize {
        self.congruences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.congruences.is_empty()
    }

    /// Exactly two congruences.
    pub fn is_simple(&self) -> bool {
        self.congruences.len() == 2
    }

    /// A unique minimal non-identity congruence (the monolith).
    pub fn is_subdirectly_irreducible(&self) -> bool {
        self.monolith().is_some()
    }

    pub fn monolith(&self) -> Option<&Congruence> {
        let bot = self.lattice.bot();
        let atoms: Vec<usize> = self
            .lattice
            .elements()
            .filter(|&x| x != bot && self.lattice.elements().all(|y| y == bot || y == x || !self.lattice.lt(y, x)))
            .collect();
        match atoms.as_slice() {
            [a] => Some(&self.congruences[*a]),
            _ => None,
        }
    }

    pub fn index_of(&self, c: &Congruence) -> Option<usize> {
        self.congruences.iter().position(|x| x == c)
    }
}

/// Enumerate `Con(L)` from principal congruences and closure under joins.
pub fn congruences(l: &FiniteLattice, guard: usize) -> Result<CongruenceLattice> {
    let n = l.size();
    if n > guard {
        return Err(Error::TooLarge { size: n, guard });
    }
    let mut found: BTreeSet<Congruence> = BTreeSet::new();
    found.insert(Congruence::identity(n));
    for a in 0..n {
        for b in 0..n {
            if l.lt(a, b) {
                found.insert(principal_congruence(l, a, b));
            }
        }
    }
    let mut frontier: Vec<Congruence> = found.iter().cloned().collect();
    while !frontier.is_empty() {
        let current: Vec<Congruence> = found.iter().cloned().collect();
        let mut next = Vec::new();
        for x in &frontier {
            for y in &current {
                let j = x.join(y);
                if !found.contains(&j) {
                    found.insert(j.clone());
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut congruences: Vec<Congruence> = found.into_iter().collect();
    // finest first, then lexicographic by labels
    congruences.sort_by(|a, b| b.num_blocks().cmp(&a.num_blocks()).then_with(|| a.cmp(b)));
    let lattice = FiniteLattice::from_order_fn(congruences.len(), |i, j| congruences[i].refines(&congruences[j]))?;
    Ok(CongruenceLattice { congruences, lattice })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(k: usize) -> FiniteLattice {
        let covers: Vec<[usize; 2]> = (1..k).map(|i| [i - 1, i]).collect();
        FiniteLattice::from_covers(k, &covers).unwrap()
    }

    fn mo2() -> FiniteLattice {
        FiniteLattice::from_covers(6, &[[0, 1], [0, 2], [0, 3], [0, 4], [1, 5], [2, 5], [3, 5], [4, 5]]).unwrap()
    }

    /// Oracle: all partitions of {0..n} that pass the substitution test.
    fn brute_force_count(l: &FiniteLattice) -> usize {
        fn partitions(n: usize) -> Vec<Vec<usize>> {
            // restricted growth strings
            let mut out = Vec::new();
            let mut cur = vec![0usize; n];
            fn rec(i: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                if i == cur.len() {
                    out.push(cur.clone());
                    return;
                }
                for v in 0..=max + 1 {
                    cur[i] = v;
                    rec(i + 1, max.max(v), cur, out);
                }
            }
            if n > 0 {
                rec(1, 0, &mut cur, &mut out);
            }
            out
        }
        partitions(l.size())
            .into_iter()
            .map(Congruence::from_labels)
            .filter(|c| c.is_compatible(l))
            .count()
    }

    #[test]
    fn mo2_is_simple() {
        let con = congruences(&mo2(), 24).unwrap();
        assert_eq!(con.len(), 2);
        assert!(con.is_simple());
        assert!(con.is_subdirectly_irreducible());
        assert_eq!(brute_force_count(&mo2()), 2);
    }

    #[test]
    fn square_of_two_chain_has_four() {
        let sq = chain(2).product(&chain(2));
        let con = congruences(&sq, 24).unwrap();
        assert_eq!(con.len(), 4);
        assert_eq!(brute_force_count(&sq), 4);
        assert!(!con.is_subdirectly_irreducible());
    }

    #[test]
    fn trivial_lattice_has_one() {
        let con = congruences(&chain(1), 24).unwrap();
        assert_eq!(con.len(), 1);
        assert!(!con.is_simple());
    }

    #[test]
    fn chains_match_brute_force() {
        for k in 2..6 {
            let l = chain(k);
            let con = congruences(&l, 24).unwrap();
            // a k-chain has 2^(k-1) congruences
            assert_eq!(con.len(), 1 << (k - 1));
            assert_eq!(con.len(), brute_force_count(&l));
            assert!(con.congruences.iter().all(|c| c.is_compatible(&l)));
        }
    }

    #[test]
    fn guard_is_enforced() {
        assert!(matches!(
            congruences(&chain(30), 24),
            Err(Error::TooLarge { size: 30, guard: 24 })
        ));
    }

    #[test]
    fn block_listing() {
        let c = Congruence::from_blocks(5, &[vec![1, 3], vec![2, 4]]);
        assert_eq!(c.blocks(), vec![vec![0], vec![1, 3], vec![2, 4]]);
        assert_eq!(c.num_blocks(), 3);
        assert!(Congruence::identity(5).refines(&c));
        assert!(c.refines(&Congruence::all(5)));
    }
}
