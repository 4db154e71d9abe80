use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::OrthoLattice;
use crate::error::{Error, Result};
use crate::lattice::{guard, FiniteLattice, Lattice, Orthocomplemented};
use crate::report::Report;

/// Default bound on lattice size for frame searches.
pub const FRAME_SEARCH_GUARD: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameKind {
    /// `a_0..a_{m-1}` spanning, first `n` independent, `a_0 ≠ 0`.
    LargePartial { n: usize, m: usize },
    /// A large partial frame whose `m` parts are independent.
    Skew { n: usize, m: usize },
    /// `1 = ⊕ a_i` with each part orthogonally perspective to a partner.
    OrthoSemiframe { k: usize },
}

impl FrameKind {
    pub fn parts(self) -> usize {
        match self {
            FrameKind::LargePartial { m, .. } | FrameKind::Skew { m, .. } => m,
            FrameKind::OrthoSemiframe { k } => k,
        }
    }
}

/// Certificate for a frame: the parts `a`, the axes `a0` (entry `i-1` is
/// `a_{0i}`), the partners `b` and, for semiframes, the partner axes.
///
/// For (large partial and skew) frames `b[i-1]` is the element `b_i ≤ a_0`
/// with `a_i ∼_{a_{0i}} b_i`; `axes` is unused. For semiframes `b[i]` is the
/// partner of `a_i` and `axes[i]` the perspectivity axis between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameWitness<E> {
    pub kind: FrameKind,
    pub a: Vec<E>,
    pub a0: Vec<E>,
    pub b: Vec<E>,
    pub axes: Vec<E>,
}

impl<E: Clone> FrameWitness<E> {
    pub fn map<T>(&self, f: impl Fn(&E) -> T) -> FrameWitness<T> {
        FrameWitness {
            kind: self.kind,
            a: self.a.iter().map(&f).collect(),
            a0: self.a0.iter().map(&f).collect(),
            b: self.b.iter().map(&f).collect(),
            axes: self.axes.iter().map(&f).collect(),
        }
    }

    pub fn try_map<T>(&self, f: impl Fn(&E) -> Result<T>) -> Result<FrameWitness<T>> {
        Ok(FrameWitness {
            kind: self.kind,
            a: self.a.iter().map(&f).collect::<Result<_>>()?,
            a0: self.a0.iter().map(&f).collect::<Result<_>>()?,
            b: self.b.iter().map(&f).collect::<Result<_>>()?,
            axes: self.axes.iter().map(&f).collect::<Result<_>>()?,
        })
    }
}

/// JSON wire format for frames over finite lattices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FrameJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub a: Vec<usize>,
    #[serde(default)]
    pub a0: Vec<usize>,
    #[serde(default)]
    pub b: Vec<usize>,
    #[serde(default)]
    pub axes: Vec<usize>,
}

impl FrameJson {
    pub fn to_witness(&self) -> Result<FrameWitness<usize>> {
        let parts = self.a.len();
        let kind = match self.kind.as_str() {
            "large_partial" | "large-partial" => FrameKind::LargePartial {
                n: self.n.ok_or_else(|| Error::Parse("frame needs `n`".into()))?,
                m: self.m.unwrap_or(parts),
            },
            "skew" => FrameKind::Skew {
                n: self.n.ok_or_else(|| Error::Parse("frame needs `n`".into()))?,
                m: self.m.unwrap_or(parts),
            },
            "semiframe" | "ortho_semiframe" => FrameKind::OrthoSemiframe {
                k: self.k.or(self.n).unwrap_or(parts),
            },
            other => return Err(Error::Parse(format!("unknown frame kind `{other}`"))),
        };
        Ok(FrameWitness {
            kind,
            a: self.a.clone(),
            a0: self.a0.clone(),
            b: self.b.clone(),
            axes: self.axes.clone(),
        })
    }

    pub fn from_witness(w: &FrameWitness<usize>) -> Self {
        let (kind, n, m, k) = match w.kind {
            FrameKind::LargePartial { n, m } => ("large_partial", Some(n), Some(m), None),
            FrameKind::Skew { n, m } => ("skew", Some(n), Some(m), None),
            FrameKind::OrthoSemiframe { k } => ("semiframe", None, None, Some(k)),
        };
        FrameJson {
            kind: kind.into(),
            n,
            m,
            k,
            a: w.a.clone(),
            a0: w.a0.clone(),
            b: w.b.clone(),
            axes: w.axes.clone(),
        }
    }

    pub fn from_json_value(v: &Value) -> Result<FrameWitness<usize>> {
        let raw: FrameJson = serde_json::from_value(v.clone())?;
        raw.to_witness()
    }
}

fn check_frame<L: Lattice>(
    l: &L,
    frame: &FrameWitness<L::Elem>,
    perp: Option<&dyn Fn(&L::Elem) -> L::Elem>,
) -> Report {
    let mut r = Report::new();
    let fmt = |x: &L::Elem| format!("{x:?}");
    match frame.kind {
        FrameKind::LargePartial { n, m } | FrameKind::Skew { n, m } => {
            let skew = matches!(frame.kind, FrameKind::Skew { .. });
            if m < n {
                r.push("m >= n", format!("n = {n}, m = {m}"));
            }
            if frame.a.len() != m || frame.a0.len() + 1 != m || frame.b.len() + 1 != m || m == 0 {
                r.push(
                    "shape",
                    format!(
                        "expected {m} parts and {} axes/partners, got {}/{}/{}",
                        m.saturating_sub(1),
                        frame.a.len(),
                        frame.a0.len(),
                        frame.b.len()
                    ),
                );
                return r;
            }
            let a = &frame.a;
            r.check(l.join_all(a) == l.top(), "1 = sum a_i", || fmt(&l.join_all(a)));
            r.check(!l.is_bot(&a[0]), "a_0 != 0", || fmt(&a[0]));
            let first_n = &a[..n.min(m)];
            r.check(l.is_independent(first_n), "a_0..a_{n-1} independent", || {
                first_n.iter().map(fmt).collect::<Vec<_>>().join(", ")
            });
            if skew {
                r.check(l.is_independent(a), "1 = direct sum a_i", || {
                    a.iter().map(fmt).collect::<Vec<_>>().join(", ")
                });
            }
            for i in 1..m {
                let (axis, bi) = (&frame.a0[i - 1], &frame.b[i - 1]);
                r.check(l.is_perspective_via(&a[i], bi, axis), format!("a_{i} ~ b_{i} via a_0{i}"), || {
                    format!("a_{i} = {}, b_{i} = {}, a_0{i} = {}", fmt(&a[i]), fmt(bi), fmt(axis))
                });
                r.check(l.leq(bi, &a[0]), format!("b_{i} <= a_0"), || fmt(bi));
                if i < n {
                    r.check(*bi == a[0], format!("b_{i} = a_0"), || fmt(bi));
                }
            }
        }
        FrameKind::OrthoSemiframe { k } => {
            let Some(perp) = perp else {
                r.push("orthocomplement", "semiframes need an ortholattice");
                return r;
            };
            if frame.a.len() != k || frame.b.len() != k || frame.axes.len() != k {
                r.push(
                    "shape",
                    format!(
                        "expected {k} parts, partners and axes, got {}/{}/{}",
                        frame.a.len(),
                        frame.b.len(),
                        frame.axes.len()
                    ),
                );
                return r;
            }
            let a = &frame.a;
            r.check(
                l.join_all(a) == l.top() && l.is_independent(a),
                "1 = direct sum a_i",
                || a.iter().map(fmt).collect::<Vec<_>>().join(", "),
            );
            for i in 0..k {
                let (bi, axis) = (&frame.b[i], &frame.axes[i]);
                r.check(l.leq(bi, &perp(&a[i])), format!("b_{i} orthogonal to a_{i}"), || {
                    format!("a_{i} = {}, b_{i} = {}", fmt(&a[i]), fmt(bi))
                });
                r.check(l.is_perspective_via(&a[i], bi, axis), format!("b_{i} ~ a_{i}"), || {
                    format!("a_{i} = {}, b_{i} = {}, axis = {}", fmt(&a[i]), fmt(bi), fmt(axis))
                });
            }
        }
    }
    r
}

/// Check every defining clause of a frame in a plain lattice. Semiframes
/// need an orthocomplement; use [`verify_ortho_frame`].
pub fn verify_frame<L: Lattice>(l: &L, frame: &FrameWitness<L::Elem>) -> Report {
    check_frame(l, frame, None)
}

/// Check every defining clause of a frame in an ortholattice.
pub fn verify_ortho_frame<L: Orthocomplemented>(l: &L, frame: &FrameWitness<L::Elem>) -> Report {
    let perp = |x: &L::Elem| l.perp(x);
    check_frame(l, frame, Some(&perp))
}

struct FrameSearch<'a> {
    l: &'a FiniteLattice,
    skew: bool,
    n: usize,
    m: usize,
    limit: usize,
    a: Vec<usize>,
    a0: Vec<usize>,
    b: Vec<usize>,
    out: Vec<FrameWitness<usize>>,
}

impl FrameSearch<'_> {
    fn run(&mut self, acc: usize) {
        if self.out.len() >= self.limit {
            return;
        }
        let l = self.l;
        let i = self.a.len();
        if i == self.m {
            if acc == l.top() {
                let kind = if self.skew {
                    FrameKind::Skew { n: self.n, m: self.m }
                } else {
                    FrameKind::LargePartial { n: self.n, m: self.m }
                };
                self.out.push(FrameWitness {
                    kind,
                    a: self.a.clone(),
                    a0: self.a0.clone(),
                    b: self.b.clone(),
                    axes: Vec::new(),
                });
            }
            return;
        }
        for x in l.elements() {
            if i == 0 {
                if x == l.bot() {
                    continue;
                }
                self.a.push(x);
                self.run(x);
                self.a.pop();
                continue;
            }
            let needs_independence = i < self.n || self.skew;
            if needs_independence && l.meet(x, acc) != l.bot() {
                continue;
            }
            let a0 = self.a[0];
            let found = if i < self.n {
                l.perspectivity_axes(x, a0).first().map(|&axis| (a0, axis))
            } else {
                l.sub_perspective(x, a0)
            };
            let Some((bi, axis)) = found else { continue };
            self.a.push(x);
            self.a0.push(axis);
            self.b.push(bi);
            self.run(l.join(acc, x));
            self.a.pop();
            self.a0.pop();
            self.b.pop();
        }
    }
}

/// All (large partial or skew) frames with the given `n` and `m`, up to `limit`.
pub fn enumerate_frames(
    l: &FiniteLattice,
    skew: bool,
    n: usize,
    m: usize,
    limit: usize,
) -> Result<Vec<FrameWitness<usize>>> {
    let g = guard(FRAME_SEARCH_GUARD);
    if l.size() > g {
        return Err(Error::TooLarge { size: l.size(), guard: g });
    }
    if n == 0 || m < n {
        return Ok(Vec::new());
    }
    let mut s = FrameSearch {
        l,
        skew,
        n,
        m,
        limit,
        a: Vec::new(),
        a0: Vec::new(),
        b: Vec::new(),
        out: Vec::new(),
    };
    s.run(l.bot());
    Ok(s.out)
}

/// First frame found by backtracking; with `m` unset, `m` ranges over
/// `n..=max(n, height)`.
pub fn search_frame(
    l: &FiniteLattice,
    skew: bool,
    n: usize,
    m: Option<usize>,
) -> Result<Option<FrameWitness<usize>>> {
    let ms: Vec<usize> = match m {
        Some(m) => vec![m],
        None => (n..=n.max(l.height())).collect(),
    };
    for m in ms {
        if let Some(w) = enumerate_frames(l, skew, n, m, 1)?.pop() {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// First orthogonal semiframe with nonzero parts in increasing index order.
pub fn search_orthogonal_semiframe(l: &OrthoLattice, k: Option<usize>) -> Result<Option<FrameWitness<usize>>> {
    let base = l.base();
    let g = guard(FRAME_SEARCH_GUARD);
    if base.size() > g {
        return Err(Error::TooLarge { size: base.size(), guard: g });
    }
    // partner of each element, if any
    let partner: Vec<Option<(usize, usize)>> = base
        .elements()
        .map(|x| base.sub_perspective(x, l.perp_of(x)))
        .collect();
    let ks: Vec<usize> = match k {
        Some(k) => vec![k],
        None => (1..=base.height().max(1)).collect(),
    };
    fn rec(
        base: &FiniteLattice,
        partner: &[Option<(usize, usize)>],
        k: usize,
        start: usize,
        acc: usize,
        parts: &mut Vec<usize>,
    ) -> bool {
        if parts.len() == k {
            return acc == base.top();
        }
        for x in start..base.size() {
            if x == base.bot() || partner[x].is_none() || base.meet(x, acc) != base.bot() {
                continue;
            }
            parts.push(x);
            if rec(base, partner, k, x + 1, base.join(acc, x), parts) {
                return true;
            }
            parts.pop();
        }
        false
    }
    for k in ks {
        let mut parts = Vec::new();
        if rec(base, &partner, k, 0, base.bot(), &mut parts) {
            let (b, axes) = parts.iter().map(|&x| partner[x].expect("filtered")).unzip();
            return Ok(Some(FrameWitness {
                kind: FrameKind::OrthoSemiframe { k },
                a: parts,
                a0: Vec::new(),
                b,
                axes,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mo(k: usize) -> OrthoLattice {
        let n = 2 * k + 2;
        let mut covers = Vec::new();
        for i in 1..=2 * k {
            covers.push([0, i]);
            covers.push([i, n - 1]);
        }
        let base = FiniteLattice::from_covers(n, &covers).unwrap();
        let mut perp = vec![0; n];
        perp[0] = n - 1;
        perp[n - 1] = 0;
        for i in 0..k {
            perp[2 * i + 1] = 2 * i + 2;
            perp[2 * i + 2] = 2 * i + 1;
        }
        OrthoLattice::new(base, perp).unwrap()
    }

    fn boolean2() -> FiniteLattice {
        FiniteLattice::from_order_fn(4, |a, b| a & !b == 0).unwrap()
    }

    #[test]
    fn mo2_skew_frame_verifies() {
        let l = mo(2);
        let w = FrameWitness {
            kind: FrameKind::Skew { n: 2, m: 2 },
            a: vec![1, 2],
            a0: vec![3],
            b: vec![1],
            axes: vec![],
        };
        assert!(verify_frame(l.base(), &w).is_pass());
    }

    #[test]
    fn mo2_semiframe_verifies() {
        let l = mo(2);
        let w = FrameWitness {
            kind: FrameKind::OrthoSemiframe { k: 2 },
            a: vec![1, 2],
            a0: vec![],
            b: vec![2, 1],
            axes: vec![3, 3],
        };
        assert!(verify_ortho_frame(&l, &w).is_pass());
        // plain lattices cannot check orthogonality
        assert!(!verify_frame(l.base(), &w).is_pass());
    }

    #[test]
    fn zero_first_part_is_reported() {
        let l = mo(2);
        let w = FrameWitness {
            kind: FrameKind::Skew { n: 2, m: 2 },
            a: vec![0, 5],
            a0: vec![3],
            b: vec![0],
            axes: vec![],
        };
        let r = verify_frame(l.base(), &w);
        assert!(r.has_claim("a_0 != 0"));
    }

    #[test]
    fn searches() {
        let found = search_frame(mo(2).base(), true, 2, None).unwrap().unwrap();
        assert!(verify_frame(mo(2).base(), &found).is_pass());
        assert!(search_frame(&boolean2(), false, 2, None).unwrap().is_none());
        for k in 2..=4 {
            let w = search_frame(mo(k).base(), false, 2, None).unwrap().expect("MO_k has a 2-frame");
            assert!(verify_frame(mo(k).base(), &w).is_pass());
        }
    }

    #[test]
    fn enumerated_frames_all_verify() {
        let l = mo(3);
        let all = enumerate_frames(l.base(), true, 2, 2, 10_000).unwrap();
        // ordered pairs of distinct atoms: 6 * 5
        assert_eq!(all.len(), 30);
        assert!(all.iter().all(|w| verify_frame(l.base(), w).is_pass()));
    }

    #[test]
    fn semiframe_search() {
        let w = search_orthogonal_semiframe(&mo(2), None).unwrap().unwrap();
        assert!(verify_ortho_frame(&mo(2), &w).is_pass());
        assert_eq!(w.a, vec![1, 2]);
    }

    #[test]
    fn json_round_trip() {
        let w = FrameWitness {
            kind: FrameKind::Skew { n: 2, m: 2 },
            a: vec![1, 2],
            a0: vec![3],
            b: vec![1],
            axes: vec![],
        };
        let j = serde_json::to_value(FrameJson::from_witness(&w)).unwrap();
        assert_eq!(FrameJson::from_json_value(&j).unwrap(), w);
    }
}
