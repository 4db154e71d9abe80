use std::path::Path;

use orthocoord::field::{FieldKind, Rationals};
use orthocoord::lattice::{guard, DEFAULT_GUARD};
use orthocoord::ortho::{
    build_orthogonal_semiframe, search_frame, search_orthogonal_semiframe, verify_frame, verify_ortho_frame, FrameJson,
    FrameWitness,
};
use orthocoord::rep::{
    coordinatize, format_element, genuine_frame, induce_lattice_rep, recover_adjoints, ring_embedding_from_ortho_rep,
    verify_ortho_rep, DEFAULT_SAMPLES, REP_GUARD,
};
use orthocoord::ring::{MatrixRing, RightIdeal, TableRing};
use orthocoord::{models, suite, BlockMatrix, Error, Field, IPSpace, OrthoRep, Report, RingRep, Subspace};
use serde_json::{json, Value};

use crate::load::{
    field_kind, galois, load_lattice, load_ortholattice, load_ring, matrix_ring_field, read_json, ring_semiframe,
    AnyLattice, AnyRing, Failure, Outcome,
};

/// Calls `$body` with `$f` bound to the concrete field named by `$kind`.
macro_rules! with_field {
    ($kind:expr, $f:ident => $body:expr) => {
        match $kind {
            FieldKind::Rational => {
                let $f = Rationals;
                $body
            }
            FieldKind::Galois { p, k } => {
                let $f = galois(p, k)?;
                $body
            }
        }
    };
}

/// What a command found, accumulated as it runs so that partial results
/// survive an early failure.
#[derive(Default)]
pub struct Run {
    pub seed: u64,
    pub report: Report,
    pub details: Vec<(String, Value)>,
    pub inputs: Vec<(String, Value)>,
}

impl Run {
    pub fn new(seed: u64) -> Self {
        Run {
            seed,
            ..Default::default()
        }
    }

    pub fn detail(&mut self, key: &str, value: impl Into<Value>) {
        self.details.push((key.into(), value.into()));
    }

    fn input(&mut self, role: &str, path: &Path) -> Outcome<Value> {
        let v = read_json(path)?;
        self.inputs.push((role.into(), v.clone()));
        Ok(v)
    }
}

fn frame_json(w: &FrameWitness<usize>) -> Value {
    serde_json::to_value(FrameJson::from_witness(w)).expect("serializable")
}

fn check_indices(frame: &FrameWitness<usize>, size: usize) -> Outcome<()> {
    let all = frame.a.iter().chain(&frame.a0).chain(&frame.b).chain(&frame.axes);
    match all.copied().find(|&x| x >= size) {
        Some(x) => Err(Failure::Malformed(format!("frame element {x} is not in a lattice of size {size}"))),
        None => Ok(()),
    }
}

pub fn check_lattice(run: &mut Run, path: &Path) -> Outcome<()> {
    let v = run.input("lattice", path)?;
    let l = orthocoord::FiniteLattice::from_json_value(&v)?;
    run.detail("size", l.size());
    run.detail("height", l.height());
    match l.modularity_violation() {
        None => run.detail("modular", true),
        Some((a, b, c)) => run.detail("modular", format!("no: a = {a}, b = {b}, c = {c} with a <= c")),
    }
    run.detail("complemented", l.is_complemented());
    Ok(())
}

pub fn check_ortholattice(run: &mut Run, path: &Path) -> Outcome<()> {
    let v = run.input("ortholattice", path)?;
    let l = load_ortholattice(&v)?;
    run.detail("size", l.size());
    run.detail("modular", l.is_modular());
    Ok(())
}

fn describe_table(run: &mut Run, t: &TableRing) {
    run.detail("size", t.size());
    run.report.check(t.is_regular(), "regular", || {
        let a = t.regularity_counterexample().expect("not regular");
        format!("no x with axa = a for a = {}", t.name(a))
    });
    run.detail("star", t.has_star());
    if t.has_star() {
        run.detail("star_regular", t.is_star_regular());
    }
    run.detail("ideals", t.ideals().len());
}

fn describe_matrix_ring<F: Field>(run: &mut Run, r: &MatrixRing<F>) {
    run.detail("dims", json!(r.dims()));
    run.detail("field", r.field().kind().to_json());
    let mut rng = orthocoord::rep::sample_rng(run.seed);
    for _ in 0..DEFAULT_SAMPLES {
        let a = r.random(&mut rng);
        let x = r.regularity_witness(&a);
        if r.mul(&r.mul(&a, &x), &a) != a {
            run.report.push("regular", format!("axa != a for a = {a}"));
            break;
        }
    }
    match r.star_regularity_violation() {
        None => run.detail("star_regular", true),
        Some(why) => run.detail("star_regular", format!("no: {why}")),
    }
}

pub fn check_ring(run: &mut Run, path: &Path) -> Outcome<()> {
    let v = run.input("ring", path)?;
    match load_ring(&v)? {
        AnyRing::Table(t) => describe_table(run, &t),
        AnyRing::Rational(r) => describe_matrix_ring(run, &r),
        AnyRing::Finite(r) => describe_matrix_ring(run, &r),
    }
    Ok(())
}

pub fn check_space(run: &mut Run, path: &Path) -> Outcome<()> {
    let v = run.input("space", path)?;
    with_field!(field_kind(&v)?, f => {
        let s = IPSpace::from_json(f, &v)?;
        run.detail("dim", s.dim());
        run.detail("sigma", s.sigma().name());
        run.detail("anisotropic", true);
    });
    Ok(())
}

pub fn frame_verify(run: &mut Run, lattice: &Path, frame: &Path) -> Outcome<()> {
    let lv = run.input("lattice", lattice)?;
    let fv = run.input("frame", frame)?;
    let l = load_lattice(&lv)?;
    let w = FrameJson::from_json_value(&fv)?;
    check_indices(&w, l.base().size())?;
    let report = match &l {
        AnyLattice::Ortho(o) => verify_ortho_frame(o, &w),
        AnyLattice::Plain(p) => verify_frame(p, &w),
    };
    run.report.extend(report);
    Ok(())
}

pub fn frame_search(run: &mut Run, lattice: &Path, kind: &str, n: usize, m: Option<usize>) -> Outcome<()> {
    let lv = run.input("lattice", lattice)?;
    let l = load_lattice(&lv)?;
    let found = match kind {
        "skew" | "large-partial" | "large_partial" => search_frame(l.base(), kind == "skew", n, m)?,
        "semiframe" => match &l {
            AnyLattice::Ortho(o) => search_orthogonal_semiframe(o, Some(n))?,
            AnyLattice::Plain(_) => return Err(Failure::Malformed("semiframes need an ortholattice".into())),
        },
        other => return Err(Failure::Malformed(format!("unknown frame kind `{other}`"))),
    };
    match found {
        Some(w) => run.detail("frame", frame_json(&w)),
        None => {
            let range = m.map_or_else(|| "any m".to_string(), |m| format!("m = {m}"));
            run.report.push("frame exists", format!("no {kind} frame with n = {n}, {range}"));
        }
    }
    Ok(())
}

pub fn semiframe_build(run: &mut Run, ortholattice: &Path, frame: &Path) -> Outcome<()> {
    let lv = run.input("ortholattice", ortholattice)?;
    let fv = run.input("frame", frame)?;
    let l = load_ortholattice(&lv)?;
    let w = FrameJson::from_json_value(&fv)?;
    check_indices(&w, l.size())?;
    let semi = l.orthogonal_semiframe(&w)?;
    run.report.extend(verify_ortho_frame(&l, &semi));
    run.detail("semiframe", frame_json(&semi));
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepAction {
    Verify,
    Induce,
    OrthoCheck,
    RecoverStar,
}

fn ring_semiframe_json<F: Field>(ring: &MatrixRing<F>, w: &FrameWitness<RightIdeal<F>>) -> Value {
    let names = |xs: &[RightIdeal<F>]| -> Vec<String> {
        xs.iter()
            .map(|x| {
                let g = ring.projection_onto(x).unwrap_or_else(|_| BlockMatrix {
                    blocks: x.iter().map(Subspace::generator).collect(),
                });
                format_element(ring, &g)
            })
            .collect()
    };
    json!({ "a": names(&w.a), "b": names(&w.b), "axes": names(&w.axes) })
}

fn rep_action<F: Field>(run: &mut Run, f: F, v: &Value, action: RepAction, semiframe: Option<&Value>) -> Outcome<()> {
    let rep = RingRep::from_json(f, v)?;
    let ring = rep.ring();
    run.detail("ring", json!(ring.dims()));
    run.detail("space_dim", rep.space().dim());
    match action {
        RepAction::Verify => {
            run.report.extend(rep.verify());
            run.detail("star_compatible", rep.star_compatibility().is_pass());
        }
        RepAction::Induce => {
            let check = induce_lattice_rep(&rep, run.seed, DEFAULT_SAMPLES)?;
            run.report.extend(check.report);
            run.detail("ideals_checked", check.ideals_checked);
            run.detail("exhaustive", check.exhaustive);
        }
        RepAction::OrthoCheck => {
            run.report.extend(verify_ortho_rep(&rep, run.seed, DEFAULT_SAMPLES)?);
        }
        RepAction::RecoverStar => {
            let semi = match semiframe {
                Some(s) => ring_semiframe(ring, s)?,
                None => {
                    let n = ring.dims()[0];
                    build_orthogonal_semiframe(ring, &models::canonical_frame(ring, n)?)?
                }
            };
            run.detail("semiframe", ring_semiframe_json(ring, &semi));
            let r = recover_adjoints(&rep, &semi, run.seed)?;
            run.detail("off_diagonal_checked", r.off_diagonal);
            run.detail("diagonal_checked", r.diagonal);
            run.detail("assembled_checked", r.assembled);
            run.detail("verdict", "ι is a ⋆-representation");
        }
    }
    Ok(())
}

pub fn rep(run: &mut Run, action: RepAction, path: &Path, semiframe: Option<&Path>) -> Outcome<()> {
    let v = run.input("rep", path)?;
    let semi = semiframe.map(|p| run.input("semiframe", p)).transpose()?;
    let ring = v.get("ring").ok_or_else(|| Failure::Malformed("rep needs `ring`".into()))?;
    with_field!(matrix_ring_field(ring)?, f => rep_action(run, f, &v, action, semi.as_ref()))
}

fn coord_with<F: Field>(run: &mut Run, f: F, family: &Value, frame: &Value) -> Outcome<()> {
    let d = frame
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| Failure::Malformed("subspace frame needs `dim`".into()))? as usize;
    let subs = |key: &str| -> Outcome<Vec<Subspace<F>>> {
        frame
            .get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| Failure::Malformed(format!("subspace frame needs `{key}`")))?
            .iter()
            .map(|s| Ok(Subspace::from_json(&f, d, s)?))
            .collect()
    };
    let target = genuine_frame(subs("a")?, subs("a0")?);
    let family = orthocoord::rep::SubspaceFamily::from_json(&f, d, family)?;
    for (i, s) in target.a.iter().chain(&target.a0).enumerate() {
        if !family.contains(s) {
            return Err(Failure::Malformed(format!("frame entry {i} is not in the subspace family")));
        }
    }
    let ring = coordinatize(&f, &target, run.seed, 30)?;
    run.detail("order", ring.order());
    run.detail("part_dim", ring.part_dim());
    run.detail("space_dim", ring.dim());
    let check = ring.verify(&family, run.seed, 30, guard(REP_GUARD))?;
    run.report.extend(check.report);
    run.detail("tags_checked", check.tags_checked);
    run.detail("sampled", check.sampled);
    if let Some(b) = check.bijective {
        run.detail("bijective", b);
    }
    Ok(())
}

pub fn coord_build(run: &mut Run, family: &Path, frame: &Path) -> Outcome<()> {
    let family = run.input("subspaces", family)?;
    let frame = run.input("frame", frame)?;
    with_field!(field_kind(&frame)?, f => coord_with(run, f, &family, &frame))
}

fn pipeline_with<F: Field>(run: &mut Run, f: F, ring: &Value, eta: &Value) -> Outcome<()> {
    let ring = MatrixRing::from_json(f, ring)?;
    let eta = OrthoRep::from_json(&ring, eta)?;
    let out = ring_embedding_from_ortho_rep(&ring, &eta, run.seed, DEFAULT_SAMPLES)?;
    run.report.extend(out.report);
    run.detail("ideals_checked", out.ideals_checked);
    run.detail("images", out.rep.to_json()["images"].clone());
    match out.star {
        Ok(r) => run.detail(
            "star",
            format!(
                "ι(a*) = ι(a)* verified ({} off-diagonal, {} diagonal, {} assembled)",
                r.off_diagonal, r.diagonal, r.assembled
            ),
        ),
        Err(why) => run.detail("star", format!("skipped: {why}")),
    }
    Ok(())
}

pub fn pipeline_theorem1(run: &mut Run, ring: &Path, eta: &Path) -> Outcome<()> {
    let rv = run.input("ring", ring)?;
    let ev = run.input("eta", eta)?;
    with_field!(matrix_ring_field(&rv)?, f => pipeline_with(run, f, &rv, &ev))
}

pub fn fact3(run: &mut Run, ring: &Path) -> Outcome<()> {
    let v = run.input("ring", ring)?;
    let table = match load_ring(&v)? {
        AnyRing::Table(t) => t,
        AnyRing::Finite(r) => r.to_table()?,
        AnyRing::Rational(_) => return Err(Error::InfiniteLattice.into()),
    };
    let r = table.ideal_congruence_check(guard(64))?;
    run.detail("ideals", r.ideals);
    run.detail("congruences", r.congruences);
    run.report.check(r.isomorphism, "Con(Lat R) ≅ Ideals(R)", || {
        r.counterexample.clone().unwrap_or_else(|| "no isomorphism".into())
    });
    Ok(())
}

pub fn demo_all(run: &mut Run) -> Outcome<()> {
    let items = suite::run_all(run.seed);
    for item in &items {
        if !item.passed {
            run.report.push(item.name.clone(), item.detail.clone());
        } else if !item.within_limit() {
            run.report.push(
                item.name.clone(),
                format!("took {} ms, limit {} ms", item.elapsed_ms, item.limit_ms),
            );
        }
    }
    run.detail("items", serde_json::to_value(&items).expect("serializable"));
    Ok(())
}

fn int(params: &[String], i: usize, default: usize) -> Outcome<usize> {
    match params.get(i) {
        None => Ok(default),
        Some(s) => s
            .parse()
            .map_err(|_| Failure::Malformed(format!("parameter `{s}` is not a nonnegative integer"))),
    }
}

pub const MODEL_NAMES: &str = "mo K | boolean N | chain K | subspace-lattice P DIM | matrix-ring Q|P DIM | \
finite-matrix-ring Q N | gf2-x-m2gf2 | mo-frame K | subspace-frame P N [K] | subspaces P DIM | catalog | <catalog name>";

/// JSON for `model <name> [params]`.
pub fn model(name: &str, params: &[String]) -> Outcome<Value> {
    let v = match name {
        "mo" => to_value(&models::mo_n(int(params, 0, 2)?)?.to_json()),
        "boolean" => to_value(&models::boolean(int(params, 0, 2)? as u32)?.to_json()),
        "chain" => to_value(&models::chain(int(params, 0, 3)?)?.to_json()),
        "subspace-lattice" => {
            let (l, _) = models::standard_subspace_ortholattice(int(params, 0, 3)? as u32, int(params, 1, 2)?)?;
            to_value(&l.to_json())
        }
        "matrix-ring" => {
            let dim = int(params, 1, 2)?;
            match params.first().map(String::as_str) {
                None | Some("Q") => ring_value(&models::matrix_star_ring(Rationals, dim, None, Default::default())?),
                Some(_) => {
                    let f = models::galois_field(int(params, 0, 2)? as u32)?;
                    ring_value(&models::matrix_star_ring(f, dim, None, Default::default())?)
                }
            }
        }
        "finite-matrix-ring" => to_value(&models::finite_matrix_ring(int(params, 0, 2)? as u32, int(params, 1, 2)?)?.to_json()),
        "gf2-x-m2gf2" => to_value(&models::gf2_times_m2_gf2()?.to_json()),
        "mo-frame" => frame_json(&models::mo_frame(int(params, 0, 2)?)?),
        "subspace-frame" => {
            let f = galois(int(params, 0, 3)? as u32, 1)?;
            let (n, k) = (int(params, 1, 3)?, int(params, 2, 1)?);
            let w = orthocoord::rep::canonical_subspace_frame(&f, n, k);
            json!({
                "field": f.kind().to_json(),
                "dim": n * k,
                "a": w.a.iter().map(Subspace::to_json).collect::<Vec<_>>(),
                "a0": w.a0.iter().map(Subspace::to_json).collect::<Vec<_>>(),
            })
        }
        "subspaces" => {
            let f = galois(int(params, 0, 3)? as u32, 1)?;
            let d = int(params, 1, 2)?;
            let all = Subspace::enumerate_all(&f, d, guard(DEFAULT_GUARD.max(64)))?;
            json!({
                "field": f.kind().to_json(),
                "dim": d,
                "subspaces": all.iter().map(Subspace::to_json).collect::<Vec<_>>(),
            })
        }
        "catalog" => Value::Array(
            models::catalog()?
                .into_iter()
                .map(|e| json!({ "name": e.name, "kind": e.structure.kind() }))
                .collect(),
        ),
        other => models::catalog()?
            .into_iter()
            .find(|e| e.name == other)
            .map(|e| e.structure.to_json())
            .ok_or_else(|| Failure::Malformed(format!("unknown model `{other}`; expected {MODEL_NAMES}")))?,
    };
    Ok(v)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn ring_value<F: Field>(r: &MatrixRing<F>) -> Value {
    let mut v = r.to_json();
    v["field"] = r.field().kind().to_json();
    v
}
