use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use okounkov_core::models::{blowup_p3_two_points, builtin_model, hypersurface_p1xp3, hypersurface_p2xp2, BuiltinModel, ModelRecipe, P1xP3Options};
use okounkov_core::oracle::{oracle_hull, OracleKind, OracleModel};
use okounkov_core::surface::okounkov_polygon;
use okounkov_core::threefold::{okounkov_body, t_partition};
use okounkov_core::QVector;

fn threefold_bodies(c: &mut Criterion) {
    let blowup = blowup_p3_two_points(1).unwrap();
    let mut group = c.benchmark_group("okounkov_body");
    for (name, d) in [("blowup_tetrahedron", [1, 0, 0]), ("blowup_c2", [5, -2, 1]), ("blowup_c1", [4, 2, 0])] {
        let d = QVector::from_ints(&d);
        group.bench_function(name, |b| b.iter(|| okounkov_body(&blowup, black_box(&d)).unwrap()));
    }
    let p2xp2 = hypersurface_p2xp2(1, 2).unwrap();
    let d = QVector::from_ints(&[2, 3]);
    group.bench_function("p2xp2", |b| b.iter(|| okounkov_body(&p2xp2, black_box(&d)).unwrap()));
    let p1xp3 = hypersurface_p1xp3(1, 3, &P1xP3Options::default()).unwrap();
    let d = QVector::from_ints(&[1, 2]);
    group.bench_function("p1xp3_case2", |b| b.iter(|| okounkov_body(&p1xp3, black_box(&d)).unwrap()));
    group.finish();

    let d = QVector::from_ints(&[5, -2, 1]);
    c.bench_function("t_partition", |b| b.iter(|| t_partition(&blowup, black_box(&d)).unwrap()));
}

fn surface_polygons(c: &mut Criterion) {
    let Ok(BuiltinModel::Surface { model, flag }) = builtin_model(&ModelRecipe::new("blowup-p2")) else {
        panic!("blowup-p2 is a surface model");
    };
    let d = QVector::from_ints(&[3, -1]);
    c.bench_function("surface_polygon", |b| b.iter(|| okounkov_polygon(&model, &flag, black_box(&d)).unwrap()));
}

fn oracle(c: &mut Criterion) {
    let om = OracleModel::new(OracleKind::BlowupTwoPoints);
    let d = QVector::from_ints(&[2, -1, 0]);
    let mut group = c.benchmark_group("oracle_hull");
    group.sample_size(10);
    for m in [4u32, 8] {
        group.bench_function(format!("m{m}"), |b| b.iter(|| oracle_hull(&om, black_box(&d), m).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, threefold_bodies, surface_polygons, oracle);
criterion_main!(benches);
