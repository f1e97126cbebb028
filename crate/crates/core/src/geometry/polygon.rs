//! Planar convex polygons with exact vertices.

use num_traits::{Signed, Zero};

use super::linalg::QVector;
use super::rational::{self, Rational};
use crate::Error;

/// Convex polygon, vertices counterclockwise starting at the
/// lexicographically smallest one. Degenerate polygons (a point or a
/// segment) are ordinary values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polygon2 {
    vertices: Vec<QVector>,
}

/// Twice the signed area of the triangle `o, a, b`.
pub fn orient2d(o: &QVector, a: &QVector, b: &QVector) -> Rational {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Andrew's monotone chain with exact orientation; collinear points are
/// dropped from the boundary.
pub fn convex_hull_2d(points: &[QVector]) -> Result<Polygon2, Error> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if let Some(p) = points.iter().find(|p| p.dim() != 2) {
        return Err(Error::DimensionMismatch(format!(
            "expected 2D points, got dimension {}",
            p.dim()
        )));
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return Ok(Polygon2 { vertices: pts });
    }
    let mut lower: Vec<QVector> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !orient2d(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<QVector> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !orient2d(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    // all collinear: monotone chain leaves the two extremes
    Ok(Polygon2 { vertices: lower })
}

impl Polygon2 {
    pub fn point(p: QVector) -> Self {
        Polygon2 { vertices: vec![p] }
    }

    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }

    /// 0 for a point, 1 for a segment, 2 otherwise.
    pub fn affine_dim(&self) -> usize {
        self.vertices.len().min(3) - 1
    }

    pub fn area(&self) -> Rational {
        if self.vertices.len() < 3 {
            return Rational::zero();
        }
        let n = self.vertices.len();
        let mut twice = Rational::zero();
        for i in 0..n {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % n];
            twice += &a[0] * &b[1] - &a[1] * &b[0];
        }
        twice / rational::int(2)
    }

    pub fn translate(&self, by: &QVector) -> Polygon2 {
        Polygon2 {
            vertices: self.vertices.iter().map(|v| v + by).collect(),
        }
    }

    /// Scaling by a positive factor keeps vertex order.
    pub fn scale(&self, s: &Rational) -> Polygon2 {
        assert!(s.is_positive(), "polygon scale must be positive");
        Polygon2 {
            vertices: self.vertices.iter().map(|v| v.scale(s)).collect(),
        }
    }

    pub fn contains(&self, p: &QVector) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => &self.vertices[0] == p,
            2 => {
                let (a, b) = (&self.vertices[0], &self.vertices[1]);
                orient2d(a, b, p).is_zero()
                    && (0..2).all(|k| {
                        rational::min(&a[k], &b[k]) <= p[k] && p[k] <= rational::max(&a[k], &b[k])
                    })
            }
            n => (0..n).all(|i| {
                !orient2d(&self.vertices[i], &self.vertices[(i + 1) % n], p).is_negative()
            }),
        }
    }

    /// `(1 - lambda) * self + lambda * other` in the Minkowski sense.
    pub fn minkowski_combination(&self, other: &Polygon2, lambda: &Rational) -> Polygon2 {
        let mu = rational::one() - lambda;
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(&a.scale(&mu) + &b.scale(lambda));
            }
        }
        convex_hull_2d(&pts).expect("non-empty Minkowski combination")
    }

    /// Lifts each vertex to 3D with the given first coordinate.
    pub fn lift(&self, x1: &Rational) -> Vec<QVector> {
        self.vertices.iter().map(|v| v.lifted(x1)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rational::{frac, int};

    fn p(x: i64, y: i64) -> QVector {
        QVector::from_ints(&[x, y])
    }

    #[test]
    fn interior_point_dropped() {
        let poly = convex_hull_2d(&[p(0, 0), p(1, 0), p(0, 1), QVector(vec![frac(1, 4), frac(1, 4)])]).unwrap();
        assert_eq!(poly.vertices(), &[p(0, 0), p(1, 0), p(0, 1)]);
    }

    #[test]
    fn collinear_gives_segment() {
        let poly = convex_hull_2d(&[p(0, 0), p(2, 0), p(1, 0)]).unwrap();
        assert_eq!(poly.vertices(), &[p(0, 0), p(2, 0)]);
        assert_eq!(poly.affine_dim(), 1);
        assert_eq!(poly.area(), int(0));
    }

    #[test]
    fn quadrilateral_keeps_all() {
        let poly = convex_hull_2d(&[p(0, 0), p(0, 1), p(1, 0), p(1, 2)]).unwrap();
        assert_eq!(poly.vertices(), &[p(0, 0), p(1, 0), p(1, 2), p(0, 1)]);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(convex_hull_2d(&[]), Err(Error::EmptyPointSet)));
    }

    #[test]
    fn unit_square_area() {
        let sq = convex_hull_2d(&[p(0, 0), p(1, 0), p(1, 1), p(0, 1)]).unwrap();
        assert_eq!(sq.area(), int(1));
        assert!(sq.contains(&QVector(vec![frac(1, 2), int(1)])));
        assert!(!sq.contains(&QVector(vec![frac(1, 2), frac(3, 2)])));
    }

    #[test]
    fn minkowski_midpoint_of_triangles() {
        let small = convex_hull_2d(&[p(0, 0), p(1, 0), p(0, 1)]).unwrap();
        let big = small.scale(&int(3));
        let mid = small.minkowski_combination(&big, &frac(1, 2));
        assert_eq!(mid, small.scale(&int(2)));
    }

    proptest::proptest! {
        #[test]
        fn hull_contains_inputs(coords in proptest::collection::vec((-20i64..20, -20i64..20), 1..25)) {
            let pts: Vec<QVector> = coords.iter().map(|&(x, y)| p(x, y)).collect();
            let hull = convex_hull_2d(&pts).unwrap();
            for q in &pts {
                proptest::prop_assert!(hull.contains(q));
            }
        }

        #[test]
        fn area_translation_and_scaling(coords in proptest::collection::vec((-20i64..20, -20i64..20), 3..15),
                                        dx in -5i64..5, dy in -5i64..5, num in 1i64..6, den in 1i64..6) {
            let pts: Vec<QVector> = coords.iter().map(|&(x, y)| p(x, y)).collect();
            let hull = convex_hull_2d(&pts).unwrap();
            let lambda = frac(num, den);
            proptest::prop_assert_eq!(hull.translate(&p(dx, dy)).area(), hull.area());
            proptest::prop_assert_eq!(hull.scale(&lambda).area(), hull.area() * &lambda * &lambda);
        }
    }
}
