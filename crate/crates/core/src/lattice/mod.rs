//! Lattices: a small generic interface shared by finite table lattices and
//! symbolic subspace lattices, plus the finite machinery (modularity,
//! complements, height, perspectivity, congruences).

mod congruence;
mod finite;

pub use congruence::{congruences, principal_congruence, Congruence, CongruenceLattice};
pub use finite::{FiniteLattice, LatticeJson};

use std::fmt::Debug;

/// Default guard for exhaustive enumerations over lattice elements.
pub const DEFAULT_GUARD: usize = 24;

/// Environment variable overriding every enumeration guard.
pub const GUARD_ENV: &str = "ORTHO_COORD_GUARD";

/// `default` unless overridden by `ORTHO_COORD_GUARD`.
pub fn guard(default: usize) -> usize {
    std::env::var(GUARD_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}

pub trait Lattice {
    type Elem: Clone + PartialEq + Debug;

    fn bot(&self) -> Self::Elem;
    fn top(&self) -> Self::Elem;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.meet(a, b) == *a
    }

    fn is_bot(&self, a: &Self::Elem) -> bool {
        *a == self.bot()
    }

    fn join_all(&self, items: &[Self::Elem]) -> Self::Elem {
        items.iter().fold(self.bot(), |acc, x| self.join(&acc, x))
    }

    /// Independence checked incrementally: `a_i ∩ (a_0 + … + a_{i-1}) = 0`.
    /// This coincides with full independence in modular lattices.
    fn is_independent(&self, items: &[Self::Elem]) -> bool {
        let mut acc = self.bot();
        for x in items {
            if !self.is_bot(&self.meet(x, &acc)) {
                return false;
            }
            acc = self.join(&acc, x);
        }
        true
    }

    /// `a ∼_c b`: `a + b = a ⊕ c = b ⊕ c`.
    fn is_perspective_via(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem) -> bool {
        let s = self.join(a, b);
        self.join(a, c) == s
            && self.join(b, c) == s
            && self.is_bot(&self.meet(a, c))
            && self.is_bot(&self.meet(b, c))
    }

    /// Given `a ∼_axis b` and `a_sub ≤ a`, some `b' ≤ b` with `a_sub ∼ b'`,
    /// returned together with an axis.
    ///
    /// The default is the modular-lattice construction
    /// `b' = (a_sub + axis) ∩ b` with axis `axis ∩ (a_sub + b')`.
    fn sub_perspective(
        &self,
        a_sub: &Self::Elem,
        _a: &Self::Elem,
        b: &Self::Elem,
        axis: &Self::Elem,
    ) -> Option<(Self::Elem, Self::Elem)> {
        let b_sub = self.meet(&self.join(a_sub, axis), b);
        let new_axis = self.meet(axis, &self.join(a_sub, &b_sub));
        self.is_perspective_via(a_sub, &b_sub, &new_axis)
            .then_some((b_sub, new_axis))
    }

    /// Some `p ≤ bound` perspective to `x`, with an axis. Lattices that cannot
    /// search or construct such partners return `None`.
    fn perspective_partner_within(
        &self,
        _x: &Self::Elem,
        _bound: &Self::Elem,
    ) -> Option<(Self::Elem, Self::Elem)> {
        None
    }
}

pub trait Orthocomplemented: Lattice {
    fn perp(&self, a: &Self::Elem) -> Self::Elem;

    /// `a ⊥ b` iff `b ≤ a^⊥`.
    fn is_orthogonal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.leq(b, &self.perp(a))
    }
}

/// The interval `[0, top]` of a lattice, viewed as a lattice in its own right.
/// For ortholattices the relative complement is `a ↦ top ∩ a^⊥`.
pub struct Interval<'a, L: Lattice> {
    inner: &'a L,
    top: L::Elem,
}

impl<'a, L: Lattice> Interval<'a, L> {
    pub fn new(inner: &'a L, top: L::Elem) -> Self {
        Interval { inner, top }
    }

    pub fn inner(&self) -> &L {
        self.inner
    }
}

impl<L: Lattice> Lattice for Interval<'_, L> {
    type Elem = L::Elem;

    fn bot(&self) -> L::Elem {
        self.inner.bot()
    }
    fn top(&self) -> L::Elem {
        self.top.clone()
    }
    fn meet(&self, a: &L::Elem, b: &L::Elem) -> L::Elem {
        self.inner.meet(a, b)
    }
    fn join(&self, a: &L::Elem, b: &L::Elem) -> L::Elem {
        self.inner.join(a, b)
    }
    fn leq(&self, a: &L::Elem, b: &L::Elem) -> bool {
        self.inner.leq(a, b)
    }
    fn sub_perspective(
        &self,
        a_sub: &L::Elem,
        a: &L::Elem,
        b: &L::Elem,
        axis: &L::Elem,
    ) -> Option<(L::Elem, L::Elem)> {
        self.inner.sub_perspective(a_sub, a, b, axis)
    }
    fn perspective_partner_within(&self, x: &L::Elem, bound: &L::Elem) -> Option<(L::Elem, L::Elem)> {
        self.inner.perspective_partner_within(x, bound)
    }
}

impl<L: Orthocomplemented> Orthocomplemented for Interval<'_, L> {
    fn perp(&self, a: &L::Elem) -> L::Elem {
        self.inner.meet(&self.top, &self.inner.perp(a))
    }
}
