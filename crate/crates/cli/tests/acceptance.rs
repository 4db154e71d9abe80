//! Acceptance criteria, each checked against an oracle written here rather
//! than the library's own verifier. Prints one line per criterion and exits
//! nonzero if any fails or runs over its time limit.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use orthocoord::field::{Field, GaloisField, Rationals};
use orthocoord::lattice::{congruences, LatticeJson};
use orthocoord::models::{self, Structure};
use orthocoord::ortho::{search_frame, FrameWitness, OrthoLattice};
use orthocoord::rep::{
    canonical_subspace_frame, coordinatize, recover_adjoints, ring_embedding_from_ortho_rep, sample_rng,
    sandwich_adjoint_test, verify_ortho_rep, SubspaceFamily,
};
use orthocoord::ring::{MatrixRing, TableRingJson};
use orthocoord::{IPSpace, Involution, Matrix, OrthoRep, RingRep, Subspace, TableRing};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

type Q = Matrix<Rationals>;
type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

// ---------------------------------------------------------------- posets

/// A finite poset given by its order matrix, with brute-force bounds.
struct Poset {
    le: Vec<Vec<bool>>,
}

impl Poset {
    fn from_relation(n: usize, mut le: Vec<Vec<bool>>) -> Self {
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if le[i][k] && le[k][j] {
                        le[i][j] = true;
                    }
                }
            }
        }
        Poset { le }
    }

    fn from_json(j: &LatticeJson) -> Self {
        let n = j.n;
        let le = match (&j.leq, &j.covers) {
            (Some(m), _) => m.clone(),
            (None, Some(covers)) => {
                let mut m = vec![vec![false; n]; n];
                for &[lo, hi] in covers {
                    m[lo][hi] = true;
                }
                m
            }
            (None, None) => vec![vec![false; n]; n],
        };
        Self::from_relation(n, le)
    }

    fn n(&self) -> usize {
        self.le.len()
    }

    fn greatest(&self, set: &[usize]) -> Option<usize> {
        set.iter().copied().find(|&g| set.iter().all(|&x| self.le[x][g]))
    }

    fn least(&self, set: &[usize]) -> Option<usize> {
        set.iter().copied().find(|&g| set.iter().all(|&x| self.le[g][x]))
    }

    fn meet(&self, a: usize, b: usize) -> Option<usize> {
        let lower: Vec<usize> = (0..self.n()).filter(|&x| self.le[x][a] && self.le[x][b]).collect();
        self.greatest(&lower)
    }

    fn join(&self, a: usize, b: usize) -> Option<usize> {
        let upper: Vec<usize> = (0..self.n()).filter(|&x| self.le[a][x] && self.le[b][x]).collect();
        self.least(&upper)
    }

    fn m(&self, a: usize, b: usize) -> usize {
        self.meet(a, b).expect("lattice")
    }

    fn j(&self, a: usize, b: usize) -> usize {
        self.join(a, b).expect("lattice")
    }

    fn bot(&self) -> usize {
        self.least(&(0..self.n()).collect::<Vec<_>>()).expect("bounded")
    }

    fn top(&self) -> usize {
        self.greatest(&(0..self.n()).collect::<Vec<_>>()).expect("bounded")
    }

    fn lattice_violation(&self) -> Option<String> {
        let n = self.n();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.le[a][b] && self.le[b][a] {
                    return Some(format!("{a} and {b} are mutually below each other"));
                }
                if self.meet(a, b).is_none() || self.join(a, b).is_none() {
                    return Some(format!("{a}, {b} lack a meet or join"));
                }
            }
        }
        None
    }
}

/// Equivalence classes as the least member of each element's class.
type Partition = Vec<usize>;

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

fn union(parent: &mut [usize], a: usize, b: usize) -> bool {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra == rb {
        return false;
    }
    let (lo, hi) = (ra.min(rb), ra.max(rb));
    parent[hi] = lo;
    true
}

/// Least lattice congruence containing `pairs`.
fn congruence_closure(p: &Poset, pairs: &[(usize, usize)]) -> Partition {
    let n = p.n();
    let mut parent: Vec<usize> = (0..n).collect();
    for &(a, b) in pairs {
        union(&mut parent, a, b);
    }
    loop {
        let mut changed = false;
        for x in 0..n {
            for y in x + 1..n {
                if find(&mut parent, x) != find(&mut parent, y) {
                    continue;
                }
                for z in 0..n {
                    changed |= union(&mut parent, p.j(x, z), p.j(y, z));
                    changed |= union(&mut parent, p.m(x, z), p.m(y, z));
                }
            }
        }
        if !changed {
            break;
        }
    }
    (0..n).map(|x| find(&mut parent, x)).collect()
}

/// Every congruence: principal ones closed under joins.
fn all_congruences(p: &Poset) -> Vec<Partition> {
    let n = p.n();
    let mut found: BTreeSet<Partition> = BTreeSet::new();
    found.insert((0..n).collect());
    for a in 0..n {
        for b in a + 1..n {
            found.insert(congruence_closure(p, &[(a, b)]));
        }
    }
    loop {
        let current: Vec<Partition> = found.iter().cloned().collect();
        let mut grew = false;
        for s in &current {
            for t in &current {
                let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| [(x, s[x]), (x, t[x])]).collect();
                grew |= found.insert(congruence_closure(p, &pairs));
            }
        }
        if !grew {
            break;
        }
    }
    found.into_iter().collect()
}

fn refines(s: &Partition, t: &Partition) -> bool {
    (0..s.len()).all(|x| (0..s.len()).all(|y| s[x] != s[y] || t[x] == t[y]))
}

/// Brute-force order isomorphism between two small posets.
fn isomorphic(a: &[Vec<bool>], b: &[Vec<bool>]) -> bool {
    fn extend(a: &[Vec<bool>], b: &[Vec<bool>], map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let i = map.len();
        if i == a.len() {
            return true;
        }
        for j in 0..b.len() {
            if used[j] || !(0..i).all(|k| a[k][i] == b[map[k]][j] && a[i][k] == b[j][map[k]]) {
                continue;
            }
            used[j] = true;
            map.push(j);
            if extend(a, b, map, used) {
                return true;
            }
            map.pop();
            used[j] = false;
        }
        false
    }
    a.len() == b.len() && extend(a, b, &mut Vec::new(), &mut vec![false; b.len()])
}

// ---------------------------------------------------------------- table rings

struct Table {
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    zero: usize,
    one: usize,
}

impl Table {
    fn new(t: &TableRing) -> Self {
        let j: TableRingJson = t.to_json();
        let zero = (0..j.elements.len()).find(|&z| (0..j.elements.len()).all(|x| j.add[z][x] == x)).expect("zero");
        Table {
            add: j.add,
            mul: j.mul,
            zero,
            one: j.one,
        }
    }

    fn n(&self) -> usize {
        self.add.len()
    }

    fn axiom_violation(&self) -> Option<String> {
        let n = self.n();
        let (a, m) = (&self.add, &self.mul);
        for x in 0..n {
            if a[x][self.zero] != x || m[x][self.one] != x || m[self.one][x] != x {
                return Some(format!("identity fails at {x}"));
            }
            if !(0..n).any(|y| a[x][y] == self.zero) {
                return Some(format!("{x} has no additive inverse"));
            }
            for y in 0..n {
                if a[x][y] != a[y][x] {
                    return Some(format!("addition not commutative at {x}, {y}"));
                }
                for z in 0..n {
                    if a[a[x][y]][z] != a[x][a[y][z]] || m[m[x][y]][z] != m[x][m[y][z]] {
                        return Some(format!("associativity fails at {x}, {y}, {z}"));
                    }
                    if m[x][a[y][z]] != a[m[x][y]][m[x][z]] || m[a[x][y]][z] != a[m[x][z]][m[y][z]] {
                        return Some(format!("distributivity fails at {x}, {y}, {z}"));
                    }
                }
            }
        }
        None
    }

    fn regular(&self) -> bool {
        (0..self.n()).all(|a| (0..self.n()).any(|x| self.mul[self.mul[a][x]][a] == a))
    }

    fn additive_closure(&self, mut set: u64) -> u64 {
        set |= 1 << self.zero;
        loop {
            let mut next = set;
            for x in 0..self.n() {
                for y in 0..self.n() {
                    if set >> x & 1 == 1 && set >> y & 1 == 1 {
                        next |= 1 << self.add[x][y];
                    }
                }
            }
            if next == set {
                return set;
            }
            set = next;
        }
    }

    /// `Lat(R)` as inclusion of the sets `aR`.
    fn principal_right_ideals(&self) -> Poset {
        let sets: BTreeSet<u64> = (0..self.n())
            .map(|a| (0..self.n()).fold(0u64, |acc, r| acc | 1 << self.mul[a][r]))
            .collect();
        inclusion_poset(&sets.into_iter().collect::<Vec<_>>())
    }

    /// Two-sided ideals: sums of the principal ones `RaR`.
    fn ideals(&self) -> Vec<u64> {
        let n = self.n();
        let mut found: BTreeSet<u64> = (0..n)
            .map(|a| {
                let gens = (0..n)
                    .flat_map(|r| (0..n).map(move |s| (r, s)))
                    .fold(0u64, |acc, (r, s)| acc | 1 << self.mul[self.mul[r][a]][s]);
                self.additive_closure(gens)
            })
            .collect();
        loop {
            let current: Vec<u64> = found.iter().copied().collect();
            let mut grew = false;
            for &s in &current {
                for &t in &current {
                    grew |= found.insert(self.additive_closure(s | t));
                }
            }
            if !grew {
                return found.into_iter().collect();
            }
        }
    }
}

fn inclusion_poset(sets: &[u64]) -> Poset {
    let le = sets.iter().map(|&a| sets.iter().map(|&b| a & !b == 0).collect()).collect();
    Poset::from_relation(sets.len(), le)
}

// ---------------------------------------------------------------- rational helpers

fn qi(x: i64) -> num_rational::BigRational {
    Rationals.from_i64(x)
}

fn small_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Q {
    let entries: Vec<Vec<_>> = (0..rows)
        .map(|_| (0..cols).map(|_| qi(rng.random_range(-3..=3))).collect())
        .collect();
    Matrix::from_rows(&Rationals, entries).expect("rectangular")
}

fn small_invertible(n: usize, rng: &mut ChaCha8Rng) -> Q {
    loop {
        let s = small_matrix(n, n, rng);
        if s.inverse().is_some() {
            return s;
        }
    }
}

/// `B (Bᵀ J B)⁻¹ Bᵀ J`, the `J`-orthogonal projection onto the column space
/// of a full-column-rank `B`.
fn gram_projector(b: &Q, j: &Q) -> Q {
    let n = j.rows();
    if b.cols() == 0 {
        return Matrix::zeros(&Rationals, n, n);
    }
    let g = b.transpose().mul(j).mul(b).inverse().expect("anisotropic");
    b.mul(&g).mul(&b.transpose()).mul(j)
}

fn columns_of(s: &Subspace<Rationals>) -> Q {
    s.basis_columns()
}

// ---------------------------------------------------------------- criteria

fn axioms() -> Check {
    let entries = models::catalog().map_err(|e| e.to_string())?;
    let expected = [
        ("MO_1", 4),
        ("MO_2", 6),
        ("MO_3", 8),
        ("MO_4", 10),
        ("2^1", 2),
        ("2^2", 4),
        ("2^3", 8),
        ("2^4", 16),
        ("Lat(GF(2)^1)", 2),
        ("Lat(GF(3)^1)", 2),
        ("Lat(GF(3)^2)", 6),
        ("M_2(GF(2))", 16),
        ("GF(2)xM_2(GF(2))", 32),
    ];
    for (name, size) in expected {
        ensure!(entries.iter().any(|e| e.name == name), "catalog lacks {name}");
        let e = entries.iter().find(|e| e.name == name).unwrap();
        let actual = match &e.structure {
            Structure::Ortho(l) => l.size(),
            Structure::Table(t) => t.size(),
            _ => 0,
        };
        ensure!(actual == size, "{name} has {actual} elements, expected {size}");
    }
    let mut rng = sample_rng(11);
    for e in &entries {
        let report = e.structure.validate();
        ensure!(report.is_pass(), "{} fails its validator: {report}", e.name);
        match &e.structure {
            Structure::Lattice(l) => {
                let p = Poset::from_json(&l.to_json());
                ensure!(p.lattice_violation().is_none(), "{}: {:?}", e.name, p.lattice_violation());
            }
            Structure::Ortho(l) => {
                let j = l.to_json();
                let p = Poset::from_json(&j.lattice);
                ensure!(p.lattice_violation().is_none(), "{}: {:?}", e.name, p.lattice_violation());
                let perp = &j.perp;
                for a in 0..p.n() {
                    ensure!(perp[perp[a]] == a, "{}: perp not involutive at {a}", e.name);
                    ensure!(
                        p.m(a, perp[a]) == p.bot() && p.j(a, perp[a]) == p.top(),
                        "{}: perp({a}) is not a complement",
                        e.name
                    );
                    for b in 0..p.n() {
                        ensure!(!p.le[a][b] || p.le[perp[b]][perp[a]], "{}: perp not antitone at {a}, {b}", e.name);
                    }
                }
            }
            Structure::Table(t) => {
                let tab = Table::new(t);
                ensure!(tab.axiom_violation().is_none(), "{}: {:?}", e.name, tab.axiom_violation());
                ensure!(tab.regular(), "{} is not regular", e.name);
            }
            Structure::RationalRing(r) => {
                for _ in 0..20 {
                    let (a, b) = (r.random(&mut rng), r.random(&mut rng));
                    let (ma, mb) = (&a.blocks[0], &b.blocks[0]);
                    ensure!(
                        r.star(&a).blocks[0] == ma.transpose(),
                        "{}: the involution is not the transpose",
                        e.name
                    );
                    ensure!(
                        r.star(&r.mul(&a, &b)).blocks[0] == mb.transpose().mul(&ma.transpose()),
                        "{}: (ab)* != b*a*",
                        e.name
                    );
                    // tr(a aᵀ) is the sum of squares of the entries
                    let tr = ma.mul(&ma.transpose()).trace();
                    ensure!(ma.is_zero() || Rationals.sign(&tr) == Some(1), "{}: a aᵀ = 0 for a != 0", e.name);
                    let x = r.regularity_witness(&a);
                    ensure!(r.mul(&r.mul(&a, &x), &a) == a, "{}: axa != a", e.name);
                }
            }
            Structure::FiniteRing(_) => {}
        }
    }
    Ok(format!("{} structures", entries.len()))
}

fn check_semiframe(name: &str, l: &OrthoLattice, w: &FrameWitness<usize>) -> Check {
    let j = l.to_json();
    let p = Poset::from_json(&j.lattice);
    let perp = &j.perp;
    let k = w.a.len();
    ensure!(w.b.len() == k && w.axes.len() == k, "{name}: ragged semiframe");
    let total = w.a.iter().fold(p.bot(), |acc, &x| p.j(acc, x));
    ensure!(total == p.top(), "{name}: parts do not join to 1");
    for i in 0..k {
        let others = (0..k).filter(|&t| t != i).fold(p.bot(), |acc, t| p.j(acc, w.a[t]));
        ensure!(p.m(w.a[i], others) == p.bot(), "{name}: parts not independent at {i}");
        let (a, b, c) = (w.a[i], w.b[i], w.axes[i]);
        ensure!(p.le[b][perp[a]], "{name}: b_{i} is not below a_{i}^⊥");
        ensure!(
            p.m(a, c) == p.bot() && p.m(b, c) == p.bot() && p.j(a, c) == p.j(b, c),
            "{name}: b_{i} is not perspective to a_{i} via {c}"
        );
    }
    Ok(String::new())
}

fn semiframes() -> Check {
    let mut built = Vec::new();
    for (name, l) in models::modular_ortholattices().map_err(|e| e.to_string())? {
        let frame = search_frame(l.base(), true, 2, None).map_err(|e| e.to_string())?;
        let Some(frame) = frame else { continue };
        let semi = l
            .orthogonal_semiframe(&frame)
            .map_err(|e| format!("{name}: construction failed: {e}"))?;
        check_semiframe(&name, &l, &semi)?;
        built.push(name);
    }
    for required in ["MO_2", "MO_3", "Lat(GF(3)^2)"] {
        ensure!(built.iter().any(|n| n == required), "no semiframe for {required}");
    }
    Ok(format!("semiframes verified in {}", built.join(", ")))
}

fn ideals_vs_congruences() -> Check {
    let mut out = Vec::new();
    for (name, ring, expected) in [
        ("M_2(GF(2))", models::finite_matrix_ring(2, 2).unwrap(), 2),
        ("GF(2)xM_2(GF(2))", models::gf2_times_m2_gf2().unwrap(), 4),
    ] {
        let tab = Table::new(&ring);
        let ideals = tab.ideals();
        let cons = all_congruences(&tab.principal_right_ideals());
        ensure!(ideals.len() == expected, "{name}: oracle finds {} ideals", ideals.len());
        ensure!(cons.len() == expected, "{name}: oracle finds {} congruences", cons.len());
        let ideal_order = inclusion_poset(&ideals).le;
        let con_order: Vec<Vec<bool>> = cons.iter().map(|s| cons.iter().map(|t| refines(s, t)).collect()).collect();
        ensure!(isomorphic(&ideal_order, &con_order), "{name}: the two lattices are not isomorphic");
        let r = ring.ideal_congruence_check(64).map_err(|e| e.to_string())?;
        ensure!(
            r.isomorphism && r.ideals == expected && r.congruences == expected,
            "{name}: library reports {r:?}"
        );
        out.push(format!("{name} {expected}<->{expected}"));
    }
    Ok(out.join(", "))
}

fn projections() -> Check {
    let mut rng = sample_rng(4);
    let mut agree = 0;
    for n in [2usize, 3] {
        let space = IPSpace::standard(Rationals, n).unwrap();
        let id = Matrix::identity(&Rationals, n);
        for _ in 0..200 {
            let s = small_invertible(n, &mut rng);
            let keep: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
            let d = Matrix::from_fn(&Rationals, n, n, |i, j| qi(i64::from(i == j && keep.contains(&i))));
            let e = s.mul(&d).mul(&s.inverse().unwrap());
            let star_projection = e.mul(&e) == e && e == e.transpose();
            let onto_image = e == gram_projector(&s.select_columns(&keep), &id);
            ensure!(star_projection == onto_image, "oracle verdicts differ at {e}");
            let v = space.projection_verdict(&e);
            ensure!(
                v.is_star_projection == star_projection && v.equals_projection_onto_image == onto_image,
                "library verdict {v:?} differs from oracle at {e}"
            );
            agree += 1;
        }
    }
    Ok(format!("{agree} idempotents"))
}

fn sandwich() -> Check {
    let mut rng = sample_rng(5);
    let grams = [
        ("Q^2", Matrix::identity(&Rationals, 2)),
        ("Q^2 J=diag(1,2)", Matrix::diagonal(&Rationals, &[qi(1), qi(2)])),
        ("Q^3", Matrix::identity(&Rationals, 3)),
    ];
    let mut cases = 0;
    for (name, j) in &grams {
        let space = IPSpace::new(Rationals, j.clone(), Involution::Identity).map_err(|e| e.to_string())?;
        let j_inv = j.inverse().unwrap();
        let n = j.rows();
        for i in 0..200 {
            let positive = i < 100;
            let u_basis = loop {
                let b = small_matrix(n, rng.random_range(1..n), &mut rng);
                if b.rank() == b.cols() {
                    break b;
                }
            };
            // U^⊥ = ker(Bᵀ J), and W inside it
            let perp = u_basis.transpose().mul(j).kernel().transpose();
            let w_basis = loop {
                let c = perp.mul(&small_matrix(perp.cols(), rng.random_range(1..=perp.cols()), &mut rng));
                if c.rank() == c.cols() {
                    break c;
                }
            };
            let (pu, pw) = (gram_projector(&u_basis, j), gram_projector(&w_basis, j));
            let phi = pw.mul(&small_matrix(n, n, &mut rng)).mul(&pu);
            let adjoint = j_inv.mul(&phi.transpose()).mul(j);
            let psi = if positive {
                adjoint.clone()
            } else {
                let bump = loop {
                    let z = pu.mul(&small_matrix(n, n, &mut rng)).mul(&pw);
                    if !z.is_zero() {
                        break z;
                    }
                };
                adjoint.add(&bump)
            };
            let oracle_adjoint = psi == adjoint;
            let oracle_orthogonal = pu.sub(&phi).transpose().mul(j).mul(&pw.add(&psi)).is_zero();
            ensure!(
                oracle_adjoint == oracle_orthogonal && oracle_adjoint == positive,
                "{name}: equivalence fails at φ = {phi}, ψ = {psi}"
            );
            let u = Subspace::column_space(&u_basis);
            let w = Subspace::column_space(&w_basis);
            let v = sandwich_adjoint_test(&space, &u, &w, &phi, &psi).map_err(|e| e.to_string())?;
            ensure!(
                v.adjoint == oracle_adjoint && v.orthogonal == oracle_orthogonal,
                "{name}: library verdict {v:?} differs from oracle"
            );
            cases += 1;
        }
    }
    Ok(format!("{cases} pairs, half perturbed"))
}

fn congruences_respect_perp() -> Check {
    let mut total = 0;
    for (name, l) in models::modular_ortholattices().map_err(|e| e.to_string())? {
        let j = l.to_json();
        let p = Poset::from_json(&j.lattice);
        let cons = all_congruences(&p);
        let lib = congruences(l.base(), 64).map_err(|e| e.to_string())?;
        ensure!(lib.len() == cons.len(), "{name}: library has {} congruences, oracle {}", lib.len(), cons.len());
        for theta in &cons {
            for a in 0..p.n() {
                for b in 0..p.n() {
                    ensure!(
                        theta[a] != theta[b] || theta[j.perp[a]] == theta[j.perp[b]],
                        "{name}: {a} θ {b} but not their orthocomplements"
                    );
                }
            }
        }
        for theta in &lib.congruences {
            ensure!(
                matches!(l.check_congruence_perp(theta), orthocoord::ortho::PerpCompatibility::Compatible),
                "{name}: library flags a congruence"
            );
        }
        total += cons.len();
    }
    Ok(format!("{total} congruences"))
}

fn rotation() -> Q {
    let f = |a, b| num_rational::BigRational::new(num_bigint::BigInt::from(a), num_bigint::BigInt::from(b));
    Matrix::from_rows(
        &Rationals,
        vec![
            vec![f(3, 5), f(4, 5), f(0, 1)],
            vec![f(-4, 5), f(3, 5), f(0, 1)],
            vec![f(0, 1), f(0, 1), f(1, 1)],
        ],
    )
    .unwrap()
}

/// A random element of `M_n(ℚ)`, rank-deficient about half the time.
fn sample_element(ring: &MatrixRing<Rationals>, rng: &mut ChaCha8Rng) -> orthocoord::BlockMatrix<Rationals> {
    let n = ring.dims()[0];
    let mut a = small_matrix(n, n, rng);
    if rng.random_bool(0.5) {
        let keep: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        let mask = Matrix::from_fn(&Rationals, n, n, |i, j| qi(i64::from(i == j && keep[i])));
        a = a.mul(&mask);
    }
    orthocoord::BlockMatrix::single(a)
}

fn adjoint_recovery() -> Check {
    let mut rng = sample_rng(7);
    let m2 = MatrixRing::full(Rationals, 2).unwrap();
    let m3 = MatrixRing::full(Rationals, 3).unwrap();
    let q = rotation();
    let cases = [
        ("id M_2(Q)", &m2, Matrix::identity(&Rationals, 2)),
        ("id M_3(Q)", &m3, Matrix::identity(&Rationals, 3)),
        ("Q on M_3(Q)", &m3, q),
    ];
    for (name, ring, s) in &cases {
        let n = ring.dims()[0];
        ensure!(s.mul(&s.transpose()) == Matrix::identity(&Rationals, n), "{name}: not orthogonal");
        let rep = RingRep::conjugation(ring, IPSpace::standard(Rationals, n).unwrap(), s).map_err(|e| e.to_string())?;
        let frame = models::canonical_frame(ring, n).map_err(|e| e.to_string())?;
        let semi = orthocoord::ortho::build_orthogonal_semiframe(*ring, &frame).map_err(|e| e.to_string())?;
        recover_adjoints(&rep, &semi, 0).map_err(|e| format!("{name}: {e}"))?;
        for _ in 0..20 {
            let a = sample_element(ring, &mut rng);
            let lhs = rep.apply(&orthocoord::BlockMatrix::single(a.blocks[0].transpose()));
            ensure!(lhs == rep.apply(&a).transpose(), "{name}: ι(aᵀ) != ι(a)ᵀ");
        }
    }
    let shear = Matrix::from_i64(&Rationals, &[&[1, 1], &[0, 1]]);
    let shear_inv = shear.inverse().unwrap();
    let rep = RingRep::conjugation(&m2, IPSpace::standard(Rationals, 2).unwrap(), &shear).map_err(|e| e.to_string())?;
    // η(E_22 R) = S e_2 but (η(E_11 R))^⊥ = e_1^⊥ = e_2
    let img = |i| Subspace::column_space(&shear.mul(&Matrix::unit(&Rationals, 2, i, i)).mul(&shear_inv));
    let perp_of_first = Subspace::row_space(&columns_of(&img(0)).transpose().kernel());
    ensure!(img(1) != perp_of_first, "oracle finds the shear orthogonal");
    let report = verify_ortho_rep(&rep, 0, 10).map_err(|e| e.to_string())?;
    let witness = report.violations.iter().find(|v| v.claim == "PerpViolation");
    ensure!(witness.is_some(), "shear was not rejected: {report}");
    let recover = recover_adjoints(&rep, &orthocoord::models::canonical_semiframe(&m2, 2).unwrap(), 0);
    ensure!(recover.is_err(), "adjoint recovery accepted the shear");
    Ok(format!("3 reps recovered; shear rejected at {}", witness.unwrap().witness))
}

fn pipeline() -> Check {
    let ring = MatrixRing::full(Rationals, 3).unwrap();
    let q = rotation();
    let qt = q.transpose();
    let eta = OrthoRep::linear(IPSpace::standard(Rationals, 3).unwrap(), q.clone()).map_err(|e| e.to_string())?;
    let out = ring_embedding_from_ortho_rep(&ring, &eta, 0, 50).map_err(|e| e.to_string())?;
    ensure!(out.report.is_pass(), "M_3(Q): {}", out.report);
    let mut units = 0;
    for i in 0..3 {
        for j in 0..3 {
            let e = Matrix::unit(&Rationals, 3, i, j);
            let got = out.rep.apply(&orthocoord::BlockMatrix::single(e.clone()));
            ensure!(got == q.mul(&e).mul(&qt), "ι(E_{}{}) is not the conjugate", i + 1, j + 1);
            units += 1;
        }
    }
    let mut rng = sample_rng(8);
    for _ in 0..50 {
        let a = sample_element(&ring, &mut rng);
        let image = out.rep.apply(&a);
        let expected = Subspace::column_space(&a.blocks[0]).image(&q);
        ensure!(Subspace::column_space(&image) == expected, "η(aR) != im ι(a) at {a}");
        let star = out.rep.apply(&orthocoord::BlockMatrix::single(a.blocks[0].transpose()));
        ensure!(star == image.transpose(), "ι(a*) != ι(a)* at {a}");
    }
    ensure!(out.star.is_ok(), "adjoint stage: {:?}", out.star);

    let f = GaloisField::prime(3).unwrap();
    let ring3 = MatrixRing::full(f.clone(), 3).unwrap();
    let p = Matrix::from_i64(&f, &[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
    let space = IPSpace::sesquilinear(f.clone(), Matrix::identity(&f, 3), Involution::Identity).unwrap();
    let eta3 = OrthoRep::linear(space, p.clone()).map_err(|e| e.to_string())?;
    let out3 = ring_embedding_from_ortho_rep(&ring3, &eta3, 0, 50).map_err(|e| e.to_string())?;
    ensure!(out3.report.is_pass(), "M_3(GF(3)): {}", out3.report);
    let reps = subspace_representatives(&f);
    ensure!(reps.len() == 28, "oracle finds {} subspaces of GF(3)^3", reps.len());
    for (x, a) in &reps {
        let got = Subspace::column_space(&out3.rep.apply(&orthocoord::BlockMatrix::single(a.clone())));
        ensure!(got == x.image(&p), "η(aR) != im ι(a) for aR with image {x}");
    }
    ensure!(out3.ideals_checked >= 28, "only {} ideals checked", out3.ideals_checked);
    Ok(format!("{units} units, 50 samples, 28/28 ideals over GF(3)"))
}

/// Each subspace of `GF(3)^3` with a matrix whose columns span it, found by
/// running through all `3^9` matrices.
fn subspace_representatives(f: &GaloisField) -> Vec<(Subspace<GaloisField>, Matrix<GaloisField>)> {
    let mut out: Vec<(Subspace<GaloisField>, Matrix<GaloisField>)> = Vec::new();
    for code in 0..3u32.pow(9) {
        let m = Matrix::from_fn(f, 3, 3, |i, j| f.from_i64(i64::from(code / 3u32.pow((3 * i + j) as u32) % 3)));
        let s = Subspace::column_space(&m);
        if !out.iter().any(|(x, _)| *x == s) {
            out.push((s, m));
        }
    }
    out
}

fn coordinatization() -> Check {
    let f = GaloisField::prime(3).unwrap();
    let frame = canonical_subspace_frame(&f, 3, 1);
    let ring = coordinatize(&f, &frame, 0, 30).map_err(|e| e.to_string())?;
    let family: Vec<Subspace<GaloisField>> = subspace_representatives(&f).into_iter().map(|(s, _)| s).collect();
    let check = ring
        .verify(&SubspaceFamily::List(family.clone()), 0, 30, 64)
        .map_err(|e| e.to_string())?;
    ensure!(check.report.is_pass(), "library: {}", check.report);
    ensure!(check.bijective == Some(true), "library reports no bijection");
    let mut rng = sample_rng(9);
    for _ in 0..30 {
        let phi = ring.random(&mut rng);
        let tag = ring.tag(&phi).ok_or("sample outside R₀")?;
        ensure!(ring.omega(&tag) == Subspace::column_space(&phi), "ω(φR₀) != im φ at {phi}");
    }
    // every φ ∈ R₀, grouped by ideal: ω is well defined, injective and onto
    let mut pairs: Vec<(Subspace<GaloisField>, Subspace<GaloisField>)> = Vec::new();
    for code in 0..3u32.pow(9) {
        let coeffs = Matrix::from_fn(&f, 3, 3, |i, j| f.from_i64(i64::from(code / 3u32.pow((3 * i + j) as u32) % 3)));
        let phi = ring.element(&coeffs);
        let tag = ring.tag(&phi).ok_or("element outside R₀")?;
        let image = Subspace::column_space(&phi);
        ensure!(ring.omega(&tag) == image, "ω(φR₀) != im φ at {phi}");
        match pairs.iter().find(|(t, _)| *t == tag) {
            Some((_, s)) => ensure!(*s == image, "two generators of one ideal have different images"),
            None => pairs.push((tag, image)),
        }
    }
    let images: BTreeSet<String> = pairs.iter().map(|(_, s)| s.to_string()).collect();
    ensure!(pairs.len() == 28 && images.len() == 28, "{} ideals, {} images", pairs.len(), images.len());
    ensure!(family.iter().all(|s| pairs.iter().any(|(_, x)| x == s)), "ω misses a subspace");
    Ok("28 ideals <-> 28 subspaces, 30 samples, all 19683 elements".into())
}

fn demo() -> Check {
    let out = Command::new(env!("CARGO_BIN_EXE_orthocoord"))
        .args(["demo", "all", "--seed", "0"])
        .output()
        .map_err(|e| e.to_string())?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    ensure!(out.status.code() == Some(0), "exit status {:?}\n{stdout}", out.status.code());
    ensure!(stdout.contains("verdict: pass"), "unexpected report\n{stdout}");
    Ok(format!("{} suite items", stdout.matches("PASS").count()))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Check); 10] = [
        ("catalog axioms", 5, axioms),
        ("orthogonal semiframes", 10, semiframes),
        ("Con(Lat R) vs ideals", 30, ideals_vs_congruences),
        ("projection verdicts", 10, projections),
        ("sandwich adjoint criterion", 10, sandwich),
        ("congruences respect perp", 20, congruences_respect_perp),
        ("adjoint recovery", 15, adjoint_recovery),
        ("lattice-to-ring pipeline", 30, pipeline),
        ("coordinatization of GF(3)^3", 30, coordinatization),
        ("demo all --seed 0", 180, demo),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let in_time = elapsed < Duration::from_secs(*limit);
        let ok = outcome.is_ok() && in_time;
        failed += usize::from(!ok);
        let detail = match &outcome {
            Ok(d) if in_time => d.clone(),
            Ok(_) => format!("over the {limit} s limit"),
            Err(e) => e.clone(),
        };
        println!(
            "criterion {:>2} {} {:<30} {:>7.2} s / {:>3} s  {}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            name,
            elapsed.as_secs_f64(),
            limit,
            detail
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
