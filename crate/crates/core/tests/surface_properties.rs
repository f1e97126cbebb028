use okounkov_core::geometry::rational::{frac, int};
use okounkov_core::models::{blowup_p2, projective_plane, ruled_flag, ruled_surface};
use okounkov_core::surface::*;
use okounkov_core::{QVector, Rational};
use proptest::prelude::*;

fn q() -> impl Strategy<Value = Rational> {
    (0i64..40, 1i64..7).prop_map(|(n, d)| frac(n, d))
}

fn bl_class() -> impl Strategy<Value = QVector> {
    // x E + y (H - E)
    (q(), q()).prop_map(|(x, y)| QVector(vec![y.clone(), x - y]))
}

proptest! {
    #[test]
    fn blowup_axioms_and_area(d in bl_class(), flag in 0usize..3) {
        let m = blowup_p2();
        let zd = zariski_decompose(&m, &d).unwrap();
        prop_assert_eq!(check_axioms(&m, &d, &zd), Ok(()));
        prop_assert_eq!(&zariski_decompose(&m.with_curve_order(&[0]), &d).unwrap(), &zd);
        if m.is_big(&d) {
            let flags = [
                SurfaceFlag::new(QVector::from_ints(&[0, 1]), int(-1)),
                SurfaceFlag::new(QVector::from_ints(&[1, -1]), int(0)).with_point("E", 1),
                SurfaceFlag::new(QVector::from_ints(&[1, 0]), int(1)),
            ];
            let poly = okounkov_polygon(&m, &flags[flag], &d).unwrap();
            prop_assert_eq!(poly.polygon.area() * int(2), m.dot(&zd.positive, &zd.positive));
            for v in poly.polygon.vertices() {
                prop_assert!(v[0] >= int(0) && v[1] >= int(0), "vertex ({}) leaves the quadrant", v);
            }
        }
    }

    #[test]
    fn plane_polygons_are_triangles(a in q()) {
        let m = projective_plane();
        let d = QVector(vec![a.clone()]);
        let poly = okounkov_polygon(&m, &SurfaceFlag::new(QVector::from_ints(&[1]), int(1)), &d).unwrap();
        prop_assert_eq!(poly.polygon.area() * int(2), &a * &a);
    }

    #[test]
    fn ruled_surface_areas(gamma in 0i64..3, s1 in 0i64..3, s2 in 1i64..3, x in q(), y in q()) {
        let m = ruled_surface(gamma).unwrap();
        // x F + y (2 C0 - gamma F)
        let d = QVector(vec![int(2) * &y, x - int(gamma) * &y]);
        let flag = ruled_flag(gamma, s1, s2).unwrap();
        let poly = okounkov_polygon(&m, &flag, &d).unwrap();
        prop_assert_eq!(poly.polygon.area() * int(2), m.dot(&d, &d));
    }
}

#[test]
fn curve_bodies() {
    assert_eq!(okounkov_curve(&int(3)).unwrap(), (int(0), int(3)));
    assert_eq!(okounkov_curve(&int(0)).unwrap(), (int(0), int(0)));
    assert_eq!(okounkov_curve(&frac(5, 2)).unwrap(), (int(0), frac(5, 2)));
    assert!(okounkov_curve(&int(-1)).is_err());
}

#[test]
fn valuations_and_thresholds() {
    let m = blowup_p2();
    let v = |xs: &[i64]| QVector::from_ints(xs);
    assert_eq!(asymptotic_valuation_surface(&m, &v(&[1, 2]), "E").unwrap(), int(2));
    assert_eq!(asymptotic_valuation_surface(&m, &v(&[2, 0]), "E").unwrap(), int(0));
    assert_eq!(mu_surface(&m, &v(&[2, -1]), &v(&[0, 1])).unwrap(), int(1));
    assert_eq!(mu_surface(&m, &v(&[2, 0]), &v(&[1, -1])).unwrap(), int(2));
    assert_eq!(mu_surface(&projective_plane(), &v(&[4]), &v(&[1])).unwrap(), int(4));
    let zd = zariski_decompose(&m, &QVector(vec![frac(1, 2), frac(3, 2)])).unwrap();
    assert_eq!(zd.positive, QVector(vec![frac(1, 2), int(0)]));
    assert_eq!(zd.coefficient("E"), frac(3, 2));
}
