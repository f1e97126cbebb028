#![allow(dead_code)]

use okounkov_core::geometry::rational::int;
use okounkov_core::{QMatrix, QVector, Rational};

pub fn v(xs: &[i64]) -> QVector {
    QVector::from_ints(xs)
}

pub fn q(xs: &[Rational]) -> QVector {
    QVector(xs.to_vec())
}

/// Vertices of `{x : a . x <= b}` by solving every triple of planes, sorted.
/// Deliberately naive: independent of the incremental hull.
pub fn vertices_of(ineqs: &[(QVector, Rational)]) -> Vec<QVector> {
    let n = ineqs.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let m = QMatrix::from_rows(vec![ineqs[i].0.clone(), ineqs[j].0.clone(), ineqs[k].0.clone()]).unwrap();
                if m.determinant() == int(0) {
                    continue;
                }
                let rhs = QVector(vec![ineqs[i].1.clone(), ineqs[j].1.clone(), ineqs[k].1.clone()]);
                let x = m.solve_unique(&rhs).unwrap();
                if ineqs.iter().all(|(a, b)| &a.dot(&x) <= b) {
                    out.push(x);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn ineq(a: [i64; 3], b: Rational) -> (QVector, Rational) {
    (v(&a), b)
}

/// `c <= x1 <= a+c, 0 <= x2 <= (x1-c)/d, 0 <= x3 <= d x1 - d^2 x2 - d c`.
pub fn chamber_one_golden(a: i64, c: i64, d: i64) -> Vec<QVector> {
    vertices_of(&[
        ineq([-1, 0, 0], int(-c)),
        ineq([1, 0, 0], int(a + c)),
        ineq([0, -1, 0], int(0)),
        ineq([-1, d, 0], int(-c)),
        ineq([0, 0, -1], int(0)),
        ineq([-d, d * d, 1], int(-d * c)),
    ])
}

/// `0 <= x1 <= c, 0 <= x2 <= (x1+a)/d, 0 <= x3 <= d x1 - d^2 x2 + d a`.
pub fn chamber_two_golden(a: i64, c: i64, d: i64) -> Vec<QVector> {
    vertices_of(&[
        ineq([-1, 0, 0], int(0)),
        ineq([1, 0, 0], int(c)),
        ineq([0, -1, 0], int(0)),
        ineq([-1, d, 0], int(a)),
        ineq([0, 0, -1], int(0)),
        ineq([-d, d * d, 1], int(d * a)),
    ])
}
