//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use common::{chamber_one_golden, chamber_two_golden, v};
use okounkov_core::geometry::rational::{frac, int};
use okounkov_core::models::{
    blowup_p2, blowup_p3_two_points, hypersurface_p2xp2, projective_plane, threefold_catalogue,
};
use okounkov_core::oracle::{enumerate_valuations, oracle_hull, OracleKind, OracleModel};
use okounkov_core::surface::{okounkov_polygon, zariski_decompose, SurfaceFlag, SurfaceModel};
use okounkov_core::threefold::*;
use okounkov_core::{Error, QVector, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Check {
    let took = start.elapsed();
    ensure(took < limit, || format!("{what} took {took:?}, limit {limit:?}"))
}

fn e<T>(r: Result<T, Error>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

// (a, b, c) -> a phiH + b E2 + c E1 in the basis (phiH, E1, E2)
fn chamber_one(a: i64, b: i64, c: i64) -> QVector {
    v(&[a, c, b])
}

// (a, b, c) -> a H1 + b E2 + c phiH
fn chamber_two(a: i64, b: i64, c: i64) -> QVector {
    v(&[a + c, -a, b])
}

fn rational_in(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational) -> Rational {
    let q = rng.gen_range(1..=12i64);
    let k = rng.gen_range(0..=q);
    lo + (hi - lo) * frac(k, q)
}

fn criterion_1() -> Check {
    for d in [1, 2] {
        let model = e(blowup_p3_two_points(d))?;
        for (a, b, c) in [(1, 0, 0), (1, 1, 0), (2, 0, 1)] {
            let start = Instant::now();
            let body = e(okounkov_body(&model, &chamber_one(a, b, c)))?;
            let golden = chamber_one_golden(a, c, d);
            ensure(body.polytope.vertices() == golden.as_slice(), || {
                format!("(a,b,c)=({a},{b},{c}) d={d}: got {:?}, expected {:?}", body.polytope.vertices(), golden)
            })?;
            within(start, Duration::from_secs(1), "one golden body")?;
        }
    }
    Ok(())
}

fn criterion_2() -> Check {
    let model = e(blowup_p3_two_points(1))?;
    for (a, b, c) in [(1, 0, 1), (0, 0, 1)] {
        let d = chamber_two(a, b, c);
        let body = e(okounkov_body(&model, &d))?;
        let golden = chamber_two_golden(a, c, 1);
        ensure(body.polytope.vertices() == golden.as_slice(), || {
            format!("(a,b,c)=({a},{b},{c}): got {:?}, expected {:?}", body.polytope.vertices(), golden)
        })?;
    }
    // phiH lies on the wall of chambers 1 and 2: both decompositions and
    // both golden systems agree
    let d = chamber_two(0, 0, 1);
    let member = e(chamber_of(&model, &d))?;
    ensure(member.all.contains(&"c1".into()) && member.all.contains(&"c2".into()), || {
        format!("phiH should lie in c1 and c2, found {:?}", member.all)
    })?;
    let (c1, c2) = (model.chamber("c1").unwrap(), model.chamber("c2").unwrap());
    ensure(c1.positive(&d) == c2.positive(&d) && c1.negative(&d) == c2.negative(&d), || {
        "c1 and c2 disagree on phiH".into()
    })?;
    let body = e(okounkov_body(&model, &d))?;
    ensure(body.polytope.vertices() == chamber_one_golden(1, 0, 1).as_slice(), || {
        "phiH body differs from the chamber 1 golden body".into()
    })
}

fn criterion_3() -> Check {
    let model = e(blowup_p3_two_points(1))?;
    let body = e(limiting_body(&model, &v(&[0, 0, 1])))?;
    ensure(body.polytope.vertices() == [v(&[0, 0, 0])], || {
        format!("limiting body of E2 is {:?}", body.polytope.vertices())
    })
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_okounkov"))
        .args(["body", "--model", "blowup-p3-2pts", "--param", "d=1", "--divisor", "3,-1,-1"])
        .output()
        .map_err(|e| e.to_string())?;
    let stderr = String::from_utf8_lossy(&out.stderr);
    ensure(out.status.code() == Some(3), || format!("exit code {:?}, stderr {stderr}", out.status.code()))?;
    ensure(stderr.contains("flip"), || format!("error does not name the chamber: {stderr}"))?;

    let h2 = v(&[1, 0, -1]);
    let hull = e(oracle_hull(&OracleModel::new(OracleKind::BlowupTwoPoints), &h2, 6))?;
    ensure(hull.affine_dim() <= 2 && hull.volume() == int(0), || {
        format!("oracle hull of H2 has dimension {} and volume {}", hull.affine_dim(), hull.volume())
    })?;

    // pretending the flopped chamber is harmless gives a full-dimensional body
    let model = e(blowup_p3_two_points(1))?;
    let mut data = model.to_data();
    for c in &mut data.chambers {
        if c.name == "flip" {
            c.flag_disjoint = true;
        }
    }
    let naive = e(limiting_body(&e(ThreefoldModel::new(data))?, &h2))?;
    ensure(naive.affine_dim == 3, || format!("naive formula gave dimension {}", naive.affine_dim))?;
    ensure(
        matches!(limiting_body(&model, &h2), Err(Error::Admissibility { ref chamber }) if chamber == "flip"),
        || "limiting body of H2 should be refused".into(),
    )?;
    within(start, Duration::from_secs(5), "criterion 4")
}

/// Interior point of chamber 1 or 2 of the blow-up model.
fn random_blowup_class(rng: &mut ChaCha8Rng) -> QVector {
    if rng.gen_bool(0.5) {
        chamber_one(rng.gen_range(1..=4), rng.gen_range(1..=4), rng.gen_range(1..=4))
    } else {
        let x = rng.gen_range(1..=4);
        let (y, b) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        v(&[x + y, -y, b])
    }
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let six = int(6);
    for _ in 0..20 {
        let model = e(blowup_p3_two_points(rng.gen_range(1..=2)))?;
        let d = random_blowup_class(&mut rng);
        let vol = e(okounkov_body(&model, &d))?.polytope.volume();
        let p = e(zariski_mds(&model, &d))?.positive;
        // (P)^3 = h^3 + e1^3 + e2^3 from the trilinear form
        let cube = &p[0] * &p[0] * &p[0] + &p[1] * &p[1] * &p[1] + &p[2] * &p[2] * &p[2];
        ensure(&vol * &six == cube, || format!("blow-up D = ({d}): 6 vol = {}, P^3 = {cube}", &vol * &six))?;
    }
    for _ in 0..10 {
        let (a, b) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let (x, y) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let model = e(hypersurface_p2xp2(a, b))?;
        let vol = e(okounkov_body(&model, &v(&[x, y])))?.polytope.volume();
        let cube = int(3 * x * y * (b * x + a * y));
        ensure(&vol * &six == cube, || format!("p2xp2({a},{b}) D = ({x},{y}): 6 vol = {}", &vol * &six))?;
    }
    within(start, Duration::from_secs(10), "criterion 5")
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let model = e(blowup_p3_two_points(1))?;
    let om = OracleModel::new(OracleKind::BlowupTwoPoints);
    for d in [v(&[1, 0, 0]), v(&[1, 1, 0]), v(&[2, 0, 1])] {
        let body = e(okounkov_body(&model, &d))?;
        for m in 1..=8 {
            for p in e(enumerate_valuations(&om, &d, m))?.normalized() {
                ensure(body.polytope.contains(&p), || format!("D = ({d}), m = {m}: ({p}) outside the body"))?;
            }
        }
    }
    let d = v(&[1, 0, 0]);
    let hull = e(oracle_hull(&om, &d, 8))?;
    ensure(hull == e(okounkov_body(&model, &d))?.polytope, || "oracle hull of phiH differs from the body".into())?;
    within(start, Duration::from_secs(30), "criterion 6")
}

fn random_rational(rng: &mut ChaCha8Rng, max: i64) -> Rational {
    frac(rng.gen_range(0..=max * 6), rng.gen_range(1..=6))
}

fn check_surface_class(model: &SurfaceModel, flags: &[SurfaceFlag], d: &QVector, rng: &mut ChaCha8Rng) -> Check {
    let zd = e(zariski_decompose(model, d))?;
    let n = zd.negative_class(model);
    ensure(&zd.positive + &n == *d, || format!("({d}): P + N != D"))?;
    ensure(model.nef_cone().contains(&zd.positive), || format!("({d}): P not nef"))?;
    for (label, a) in &zd.negative_coeffs {
        ensure(*a > int(0), || format!("({d}): coefficient of {label} not positive"))?;
        let c = &model.curve(label).unwrap().class;
        ensure(model.dot(&zd.positive, c) == int(0), || format!("({d}): P . {label} != 0"))?;
    }
    let support: Vec<&QVector> = zd.negative_coeffs.keys().map(|l| &model.curve(l).unwrap().class).collect();
    let gram = okounkov_core::QMatrix::from_rows(
        support.iter().map(|x| QVector(support.iter().map(|y| model.dot(x, y)).collect())).collect(),
    );
    if let Ok(g) = gram {
        ensure(g.is_negative_definite(), || format!("({d}): Gram matrix of the support not negative definite"))?;
    }
    let order: Vec<usize> = (0..model.negative_curves().len()).rev().collect();
    ensure(e(zariski_decompose(&model.with_curve_order(&order), d))? == zd, || format!("({d}): order dependent"))?;

    if model.is_big(d) {
        // the flag curve may lie in the support of D itself; only the part
        // beyond ord_C matters
        let flag = &flags[rng.gen_range(0..flags.len())];
        let poly = e(okounkov_polygon(model, flag, d)).map_err(|err| format!("({d}): {err}"))?;
        let p2 = model.dot(&zd.positive, &zd.positive);
        ensure(poly.polygon.area() * int(2) == p2, || {
            format!("({d}): 2 area = {}, P^2 = {p2}", poly.polygon.area() * int(2))
        })?;
    }
    Ok(())
}

fn criterion_7() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let p2 = projective_plane();
    let p2_flags = [SurfaceFlag::new(v(&[1]), int(1))];
    let bl = blowup_p2();
    let bl_flags = [
        SurfaceFlag::new(v(&[0, 1]), int(-1)),
        SurfaceFlag::new(v(&[1, -1]), int(0)),
        SurfaceFlag::new(v(&[1, 0]), int(1)),
    ];
    for i in 0..200 {
        if i % 2 == 0 {
            let d = QVector(vec![random_rational(&mut rng, 5)]);
            check_surface_class(&p2, &p2_flags, &d, &mut rng)?;
        } else {
            // x E + y (H - E), occasionally on the boundary
            let x = if rng.gen_bool(0.1) { int(0) } else { random_rational(&mut rng, 4) };
            let y = if rng.gen_bool(0.1) { int(0) } else { random_rational(&mut rng, 4) };
            let d = QVector(vec![y.clone(), x - y]);
            check_surface_class(&bl, &bl_flags, &d, &mut rng)?;
        }
    }
    within(start, Duration::from_secs(10), "criterion 7")
}

/// Random interior class of a model whose whole path is admissible.
fn random_big(name: &str, model: &ThreefoldModel, rng: &mut ChaCha8Rng) -> QVector {
    if name.starts_with("blowup") {
        return random_blowup_class(rng);
    }
    let mut d = QVector::zeros(model.rank());
    for g in model.eff_generators() {
        d = d.add_scaled(&int(rng.gen_range(1..=4)), &g.class);
    }
    d
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let half = frac(1, 2);
    for (name, model) in threefold_catalogue() {
        for _ in 0..50 {
            let d = random_big(&name, &model, &mut rng);
            let body = e(okounkov_body(&model, &d)).map_err(|err| format!("{name}, D = ({d}): {err}"))?;
            let (lo, hi) = body.polytope.x1_range();
            for _ in 0..5 {
                let t = rational_in(&mut rng, &lo, &hi);
                let slice = e(slice_at(&model, &d, &t))?;
                ensure(body.polytope.section_at(&t).as_ref() == Some(&slice), || {
                    format!("{name}, D = ({d}): section at t = {t} differs from the slice")
                })?;
            }
            let ts = body.profile.breakpoints();
            for w in ts.windows(2) {
                let mid = (&w[0] + &w[1]) * &half;
                let direct = e(slice_at(&model, &d, &mid))?;
                let interp = e(slice_at(&model, &d, &w[0]))?.minkowski_combination(&e(slice_at(&model, &d, &w[1]))?, &half);
                ensure(direct == interp, || format!("{name}, D = ({d}): slice at t = {mid} is not the average"))?;
            }
        }
    }
    within(start, Duration::from_secs(60), "criterion 8")
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let model = e(blowup_p3_two_points(1))?;
    for _ in 0..20 {
        let d = random_blowup_class(&mut rng);
        let member = e(chamber_of(&model, &d))?;
        ensure(!member.on_wall(), || format!("({d}) is on a wall"))?;
        let zd = e(zariski_mds(&model, &d))?;
        let first = zd.negative_coeffs.get("E1").cloned().unwrap_or_else(|| int(0));
        let a = QVector(vec![first, int(0), int(0)]);
        let lhs = e(okounkov_body(&model, &d))?.polytope;
        let rhs = e(limiting_body(&model, &zd.positive))?.polytope.translate(&a);
        ensure(lhs == rhs, || format!("({d}): Delta(D) != Delta(P_D) + ({a})"))?;
        ensure(e(body_translation_vector(&model, &d))? == a, || format!("({d}): reported translation differs"))?;
    }
    Ok(())
}

fn criterion_10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let model = e(blowup_p3_two_points(1))?;
    for _ in 0..20 {
        let (a, b, c) = (rng.gen_range(0..=3), rng.gen_range(0..=3), rng.gen_range(0..=3));
        let (d, golden) = if rng.gen_bool(0.5) {
            (chamber_one(a, b, c), chamber_one_golden(a, c, 1))
        } else {
            (chamber_two(a, b, c), chamber_two_golden(a, c, 1))
        };
        if d.is_zero() {
            continue;
        }
        let r = e(polyhedrality_report(&model, &d))?;
        ensure(r.verdict == "rational polyhedral" && r.polyhedral && r.rank_one_shortcut, || {
            format!("({d}): verdict {:?}, reason {:?}", r.verdict, r.reason)
        })?;
        ensure(r.vertices == golden, || format!("({d}): vertices {:?}, expected {:?}", r.vertices, golden))?;
    }
    Ok(())
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 10] = [
        ("chamber 1 golden bodies", criterion_1),
        ("chamber 2 golden bodies and wall agreement", criterion_2),
        ("limiting body of E2 is a point", criterion_3),
        ("flopped chamber refused, oracle body of H2 is flat", criterion_4),
        ("volume identity", criterion_5),
        ("oracle containment and exactness", criterion_6),
        ("surface property suite", criterion_7),
        ("slice and convexity audits", criterion_8),
        ("translation law", criterion_9),
        ("polyhedrality report", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match check() {
            Ok(()) => println!("criterion {}: PASS  {name} ({:.2?})", i + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
