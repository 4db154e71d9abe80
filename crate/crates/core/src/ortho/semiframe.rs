use super::frame::{verify_ortho_frame, FrameKind, FrameWitness};
use crate::error::{Error, Result};
use crate::lattice::{Interval, Orthocomplemented};

/// `part ∼_axis partner` with `partner ⊥ part`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerspectivePair<E> {
    pub part: E,
    pub partner: E,
    pub axis: E,
}

/// Given `v ⊕ b = 1` and `v^⊥ ∩ b = 0`, the element `v' = v ∩ (v^⊥ + b)`
/// satisfies `v^⊥ ∼_b v'`. Returns the pair `(v^⊥, v', b)`.
pub fn perp_partner_step<L: Orthocomplemented>(l: &L, v: &L::Elem, b: &L::Elem) -> Result<PerspectivePair<L::Elem>> {
    let vp = l.perp(v);
    if l.join(v, b) != l.top() || !l.is_bot(&l.meet(v, b)) {
        return Err(Error::PreconditionFailed(format!("v ⊕ b != 1 for v = {v:?}, b = {b:?}")));
    }
    if !l.is_bot(&l.meet(&vp, b)) {
        return Err(Error::PreconditionFailed(format!("v^⊥ ∩ b != 0 for v = {v:?}, b = {b:?}")));
    }
    let partner = l.meet(v, &l.join(&vp, b));
    if !l.leq(&partner, v) || !l.is_perspective_via(&vp, &partner, b) {
        return Err(Error::InternalProofViolation(format!(
            "v^⊥ = {vp:?} not perspective to v' = {partner:?} via {b:?}"
        )));
    }
    Ok(PerspectivePair {
        part: vp,
        partner,
        axis: b.clone(),
    })
}

fn require<E: std::fmt::Debug>(ok: bool, what: &str, at: &E) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InternalProofViolation(format!("{what} fails at {at:?}")))
    }
}

/// Turn a skew frame into an orthogonal semiframe by the inductive
/// construction: with `u = a_0 + … + a_{j-1}` and `s = u + a_j`, split `a_j`
/// into `d = a_j ∩ u^⊥` (partnered inside `a_0` by transporting along the
/// frame) and the relative complement `f` of `v = u + d` in `s`, partnered
/// inside `v` by [`perp_partner_step`].
///
/// `a_0` itself is partnered by reusing a constructed part whose partner is
/// `a_0`, or else by a partner search inside `a_0^⊥`.
///
/// Correct for modular inputs; a failing intermediate identity is reported as
/// [`Error::InternalProofViolation`].
pub fn build_orthogonal_semiframe<L: Orthocomplemented>(
    l: &L,
    frame: &FrameWitness<L::Elem>,
) -> Result<FrameWitness<L::Elem>> {
    if !matches!(frame.kind, FrameKind::Skew { .. }) {
        return Err(Error::PreconditionFailed("a skew frame is required".into()));
    }
    let pre = super::frame::verify_frame(l, frame);
    if !pre.is_pass() {
        return Err(Error::PreconditionFailed(format!("input frame: {pre}")));
    }
    let a = &frame.a;
    let mut pairs: Vec<PerspectivePair<L::Elem>> = Vec::new();
    let mut u = a[0].clone();
    for j in 1..a.len() {
        let aj = &a[j];
        let s = l.join(&u, aj);
        let section = Interval::new(l, s.clone());

        let d = l.meet(aj, &l.perp(&u));
        let v = l.join(&u, &d);
        let (d_partner, d_axis) = l
            .sub_perspective(&d, aj, &frame.b[j - 1], &frame.a0[j - 1])
            .ok_or_else(|| Error::InternalProofViolation(format!("no partner below a_0 for d = {d:?}")))?;
        require(l.leq(&d_partner, &u), "d' <= u", &d_partner)?;
        require(l.is_bot(&l.meet(aj, &l.perp(&v))), "a ∩ v^⊥ = 0", &v)?;

        let b = l.meet(aj, &l.perp(&d));
        require(l.join(&b, &d) == *aj && l.is_bot(&l.meet(&b, &d)), "b ⊕ d = a", &b)?;
        let step = perp_partner_step(&section, &v, &b)?;

        if !l.is_bot(&d) {
            pairs.push(PerspectivePair {
                part: d,
                partner: d_partner,
                axis: d_axis,
            });
        }
        if !l.is_bot(&step.part) {
            pairs.push(step);
        }
        u = s;
    }

    let a0 = &a[0];
    let head = match pairs.iter().find(|p| p.partner == *a0) {
        Some(p) => (p.part.clone(), p.axis.clone()),
        None => l
            .perspective_partner_within(a0, &l.perp(a0))
            .ok_or_else(|| Error::PreconditionFailed(format!("a_0 = {a0:?} has no orthogonal partner")))?,
    };

    let k = pairs.len() + 1;
    let mut out = FrameWitness {
        kind: FrameKind::OrthoSemiframe { k },
        a: vec![a0.clone()],
        a0: Vec::new(),
        b: vec![head.0],
        axes: vec![head.1],
    };
    for p in pairs {
        out.a.push(p.part);
        out.b.push(p.partner);
        out.axes.push(p.axis);
    }
    let post = verify_ortho_frame(l, &out);
    if !post.is_pass() {
        return Err(Error::InternalProofViolation(format!("output semiframe: {post}")));
    }
    Ok(out)
}
