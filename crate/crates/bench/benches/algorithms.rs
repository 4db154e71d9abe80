use criterion::{criterion_group, criterion_main, Criterion};
use orthocoord::field::GaloisField;
use orthocoord::lattice::congruences;
use orthocoord::ortho::{build_orthogonal_semiframe, search_frame};
use orthocoord::rep::{canonical_subspace_frame, coordinatize, recover_adjoints, ring_embedding_from_ortho_rep};
use orthocoord::models;
use orthocoord_bench::{anisotropic_plane, gf3_pipeline_input, rotation_rep};

fn lattice_algorithms(c: &mut Criterion) {
    let lat = models::gf2_times_m2_gf2().unwrap().lat_of().unwrap().lattice;
    c.bench_function("congruences Lat(GF(2) x M_2(GF(2)))", |b| b.iter(|| congruences(&lat, 1 << 12).unwrap()));
    let plane = anisotropic_plane(7).unwrap();
    c.bench_function("skew 2-frame search in Lat(GF(7)^2)", |b| {
        b.iter(|| search_frame(plane.base(), true, 2, None).unwrap().unwrap())
    });
    let frame = search_frame(plane.base(), true, 2, None).unwrap().unwrap();
    c.bench_function("orthogonal semiframe in Lat(GF(7)^2)", |b| {
        b.iter(|| plane.orthogonal_semiframe(&frame).unwrap())
    });
}

fn ring_algorithms(c: &mut Criterion) {
    let (ring, rep) = rotation_rep().unwrap();
    let semi = build_orthogonal_semiframe(&ring, &models::canonical_frame(&ring, 3).unwrap()).unwrap();
    c.bench_function("recover adjoints, rotation of Q^3", |b| b.iter(|| recover_adjoints(&rep, &semi, 0).unwrap()));

    let (r3, eta) = gf3_pipeline_input().unwrap();
    c.bench_function("ring embedding from ortho rep, M_3(GF(3))", |b| {
        b.iter(|| ring_embedding_from_ortho_rep(&r3, &eta, 0, 5).unwrap())
    });

    let f = GaloisField::prime(3).unwrap();
    let frame = canonical_subspace_frame(&f, 3, 1);
    c.bench_function("coordinatize GF(3)^3", |b| b.iter(|| coordinatize(&f, &frame, 0, 10).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = lattice_algorithms, ring_algorithms
}
criterion_main!(benches);
