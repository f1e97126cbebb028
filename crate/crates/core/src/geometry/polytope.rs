//! Three-dimensional convex polytopes: incremental exact hull, volume and
//! axis-aligned cross-sections.

use std::collections::{BTreeMap, HashSet};

use num_traits::{Signed, Zero};

use super::linalg::{affine_dimension, QMatrix, QVector};
use super::polygon::{convex_hull_2d, Polygon2};
use super::rational::{self, Rational};
use crate::Error;

/// Supporting half-space `normal . x >= offset`; `normal` is a primitive
/// integer vector pointing into the polytope.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet {
    pub normal: QVector,
    pub offset: Rational,
}

impl Facet {
    pub fn slack(&self, p: &QVector) -> Rational {
        self.normal.dot(p) - &self.offset
    }
}

/// Convex hull of finitely many points of `Q^3`.
///
/// Vertices are sorted lexicographically. Facets are only populated for
/// full-dimensional polytopes; lower-dimensional hulls carry their affine
/// dimension instead.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polytope3 {
    vertices: Vec<QVector>,
    facets: Vec<Facet>,
    affine_dim: usize,
}

fn cross(u: &QVector, v: &QVector) -> QVector {
    QVector(vec![
        &u[1] * &v[2] - &u[2] * &v[1],
        &u[2] * &v[0] - &u[0] * &v[2],
        &u[0] * &v[1] - &u[1] * &v[0],
    ])
}

/// Signed volume (times 6) of the tetrahedron `a, b, c, d`.
pub fn orient3d(a: &QVector, b: &QVector, c: &QVector, d: &QVector) -> Rational {
    cross(&(b - a), &(c - a)).dot(&(d - a))
}

fn check_dims(points: &[QVector]) -> Result<(), Error> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if let Some(p) = points.iter().find(|p| p.dim() != 3) {
        return Err(Error::DimensionMismatch(format!(
            "expected 3D points, got dimension {}",
            p.dim()
        )));
    }
    Ok(())
}

/// Exact convex hull. Lower-dimensional inputs give point, segment or planar
/// polygon hulls flagged by `affine_dim`.
pub fn convex_hull_3d(points: &[QVector]) -> Result<Polytope3, Error> {
    check_dims(points)?;
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let dim = affine_dimension(&pts).unwrap_or(0);
    match dim {
        0 => Ok(Polytope3 {
            vertices: pts,
            facets: Vec::new(),
            affine_dim: 0,
        }),
        1 => {
            // sorted lexicographically, so the extremes are first and last
            let ends = vec![pts[0].clone(), pts[pts.len() - 1].clone()];
            Ok(Polytope3 {
                vertices: ends,
                facets: Vec::new(),
                affine_dim: 1,
            })
        }
        2 => {
            let (drop, _) = plane_of(&pts);
            let projected: Vec<QVector> = pts.iter().map(|p| project(p, drop)).collect();
            let hull = convex_hull_2d(&projected)?;
            let mut vertices: Vec<QVector> = hull
                .vertices()
                .iter()
                .map(|q| {
                    let idx = projected.iter().position(|p| p == q).expect("projected vertex");
                    pts[idx].clone()
                })
                .collect();
            vertices.sort();
            Ok(Polytope3 {
                vertices,
                facets: Vec::new(),
                affine_dim: 2,
            })
        }
        _ => Ok(full_hull(&pts)),
    }
}

/// Normal of the plane through a planar point set and the coordinate that
/// can be dropped for an injective projection.
fn plane_of(pts: &[QVector]) -> (usize, QVector) {
    let o = &pts[0];
    let diffs: Vec<QVector> = pts[1..].iter().map(|p| p - o).collect();
    let normal = QMatrix::from_rows(diffs).expect("3D rows").nullspace()[0].clone();
    let drop = (0..3).find(|&k| !normal[k].is_zero()).expect("nonzero normal");
    (drop, normal)
}

fn project(p: &QVector, drop: usize) -> QVector {
    QVector((0..3).filter(|&k| k != drop).map(|k| p[k].clone()).collect())
}

fn full_hull(pts: &[QVector]) -> Polytope3 {
    let n = pts.len();
    let i0 = 0;
    let i1 = (1..n).find(|&i| pts[i] != pts[i0]).expect("two distinct points");
    let i2 = (0..n)
        .find(|&i| !cross(&(&pts[i1] - &pts[i0]), &(&pts[i] - &pts[i0])).is_zero())
        .expect("non-collinear point");
    let i3 = (0..n)
        .find(|&i| !orient3d(&pts[i0], &pts[i1], &pts[i2], &pts[i]).is_zero())
        .expect("non-coplanar point");

    // faces stored with outward orientation: orient3d(face, interior) < 0
    let mut faces: Vec<[usize; 3]> = Vec::new();
    let seed = [i0, i1, i2, i3];
    let inner = {
        let mut c = QVector::zeros(3);
        for &i in &seed {
            c = &c + &pts[i];
        }
        c.scale(&rational::frac(1, 4))
    };
    for (a, b, c) in [(i0, i1, i2), (i0, i1, i3), (i0, i2, i3), (i1, i2, i3)] {
        if orient3d(&pts[a], &pts[b], &pts[c], &inner).is_negative() {
            faces.push([a, b, c]);
        } else {
            faces.push([a, c, b]);
        }
    }

    for p in 0..n {
        if seed.contains(&p) {
            continue;
        }
        let visible: Vec<bool> = faces
            .iter()
            .map(|f| orient3d(&pts[f[0]], &pts[f[1]], &pts[f[2]], &pts[p]).is_positive())
            .collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut edges: HashSet<(usize, usize)> = HashSet::new();
        for (f, _) in faces.iter().zip(&visible).filter(|(_, &v)| v) {
            for k in 0..3 {
                edges.insert((f[k], f[(k + 1) % 3]));
            }
        }
        let mut next: Vec<[usize; 3]> = faces
            .iter()
            .zip(&visible)
            .filter(|(_, &v)| !v)
            .map(|(f, _)| *f)
            .collect();
        let mut horizon: Vec<(usize, usize)> = edges
            .iter()
            .filter(|(a, b)| !edges.contains(&(*b, *a)))
            .copied()
            .collect();
        horizon.sort_unstable();
        for (a, b) in horizon {
            next.push([a, b, p]);
        }
        faces = next;
    }

    let mut planes: BTreeMap<QVector, Rational> = BTreeMap::new();
    for f in &faces {
        let outward = cross(&(&pts[f[1]] - &pts[f[0]]), &(&pts[f[2]] - &pts[f[0]]));
        let inward = (-&outward).primitive();
        let offset = inward.dot(&pts[f[0]]);
        planes.insert(inward, offset);
    }
    let facets: Vec<Facet> = planes
        .into_iter()
        .map(|(normal, offset)| Facet { normal, offset })
        .collect();

    let mut used: Vec<usize> = faces.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    let mut vertices: Vec<QVector> = used
        .into_iter()
        .map(|i| pts[i].clone())
        .filter(|v| {
            let tight: Vec<QVector> = facets
                .iter()
                .filter(|f| f.slack(v).is_zero())
                .map(|f| f.normal.clone())
                .collect();
            tight.len() >= 3 && QMatrix::from_rows(tight).map(|m| m.rank()).unwrap_or(0) == 3
        })
        .collect();
    vertices.sort();
    Polytope3 {
        vertices,
        facets,
        affine_dim: 3,
    }
}

impl Polytope3 {
    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == 3
    }

    pub fn contains(&self, p: &QVector) -> bool {
        match self.affine_dim {
            3 => self.facets.iter().all(|f| !f.slack(p).is_negative()),
            0 => &self.vertices[0] == p,
            1 => {
                let (a, b) = (&self.vertices[0], &self.vertices[1]);
                let ab = b - a;
                let ap = p - a;
                cross(&ab, &ap).is_zero() && {
                    let s = ap.dot(&ab);
                    !s.is_negative() && s <= ab.dot(&ab)
                }
            }
            _ => {
                let (drop, normal) = plane_of(&self.vertices);
                if normal.dot(&(p - &self.vertices[0])) != Rational::zero() {
                    return false;
                }
                let poly = convex_hull_2d(
                    &self.vertices.iter().map(|v| project(v, drop)).collect::<Vec<_>>(),
                )
                .expect("non-empty");
                poly.contains(&project(p, drop))
            }
        }
    }

    /// Exact Euclidean volume; zero for lower-dimensional hulls.
    pub fn volume(&self) -> Rational {
        if self.affine_dim < 3 {
            return Rational::zero();
        }
        let mut centre = QVector::zeros(3);
        for v in &self.vertices {
            centre = &centre + v;
        }
        let centre = centre.scale(&rational::frac(1, self.vertices.len() as i64));
        let mut total = Rational::zero();
        for ring in self.facet_rings() {
            for k in 1..ring.len() - 1 {
                let t = orient3d(&ring[0], &ring[k], &ring[k + 1], &centre);
                total += t.abs();
            }
        }
        total / rational::int(6)
    }

    /// Vertices of every facet in cyclic order (counterclockwise seen from
    /// outside), facets in the order of `facets()`.
    pub fn facet_rings(&self) -> Vec<Vec<QVector>> {
        self.facets
            .iter()
            .map(|f| {
                let on: Vec<QVector> = self
                    .vertices
                    .iter()
                    .filter(|v| f.slack(v).is_zero())
                    .cloned()
                    .collect();
                let drop = (0..3).find(|&k| !f.normal[k].is_zero()).expect("nonzero normal");
                let projected: Vec<QVector> = on.iter().map(|v| project(v, drop)).collect();
                let hull = convex_hull_2d(&projected).expect("facet has vertices");
                let mut ring: Vec<QVector> = hull
                    .vertices()
                    .iter()
                    .map(|q| on[projected.iter().position(|p| p == q).expect("vertex")].clone())
                    .collect();
                // orient counterclockwise around the outward normal
                if ring.len() >= 3 {
                    let n = cross(&(&ring[1] - &ring[0]), &(&ring[2] - &ring[0]));
                    if n.dot(&f.normal).is_positive() {
                        ring.reverse();
                    }
                }
                ring
            })
            .collect()
    }

    /// Cross-section with the plane `x1 = t`, as a polygon in `(x2, x3)`.
    /// `None` when the plane misses the polytope.
    pub fn section_at(&self, t: &Rational) -> Option<Polygon2> {
        let mut pts: Vec<QVector> = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if &v[0] == t {
                pts.push(QVector(vec![v[1].clone(), v[2].clone()]));
            }
            for w in &self.vertices[i + 1..] {
                let (lo, hi) = if v[0] < w[0] { (v, w) } else { (w, v) };
                if &lo[0] < t && t < &hi[0] {
                    let s = (t - &lo[0]) / (&hi[0] - &lo[0]);
                    let p = lo.add_scaled(&s, &(hi - lo));
                    pts.push(QVector(vec![p[1].clone(), p[2].clone()]));
                }
            }
        }
        if pts.is_empty() {
            None
        } else {
            Some(convex_hull_2d(&pts).expect("non-empty"))
        }
    }

    pub fn translate(&self, by: &QVector) -> Polytope3 {
        convex_hull_3d(&self.vertices.iter().map(|v| v + by).collect::<Vec<_>>())
            .expect("non-empty")
    }

    pub fn scale(&self, s: &Rational) -> Polytope3 {
        convex_hull_3d(&self.vertices.iter().map(|v| v.scale(s)).collect::<Vec<_>>())
            .expect("non-empty")
    }

    /// Range of the first coordinate.
    pub fn x1_range(&self) -> (Rational, Rational) {
        let lo = self.vertices.iter().map(|v| v[0].clone()).min().expect("non-empty");
        let hi = self.vertices.iter().map(|v| v[0].clone()).max().expect("non-empty");
        (lo, hi)
    }
}

/// Area or volume, depending on the hull.
pub trait Measure {
    fn measure(&self) -> Rational;
}

impl Measure for Polygon2 {
    fn measure(&self) -> Rational {
        self.area()
    }
}

impl Measure for Polytope3 {
    fn measure(&self) -> Rational {
        self.volume()
    }
}

pub fn polytope_volume<M: Measure>(hull: &M) -> Rational {
    hull.measure()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rational::{frac, int};

    fn v(x: i64, y: i64, z: i64) -> QVector {
        QVector::from_ints(&[x, y, z])
    }

    #[test]
    fn unit_simplex() {
        let p = convex_hull_3d(&[v(0, 0, 0), v(1, 0, 0), v(0, 1, 0), v(0, 0, 1)]).unwrap();
        assert_eq!(p.facets().len(), 4);
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.volume(), frac(1, 6));
    }

    #[test]
    fn blowup_tetrahedron_volume() {
        let p = convex_hull_3d(&[v(0, 0, 0), v(1, 0, 0), v(1, 1, 0), v(1, 0, 1)]).unwrap();
        assert_eq!(p.facets().len(), 4);
        assert_eq!(polytope_volume(&p), frac(1, 6));
    }

    #[test]
    fn coplanar_points_are_degenerate() {
        let p = convex_hull_3d(&[v(0, 0, 0), v(1, 0, 0), v(0, 1, 0), v(1, 1, 0), v(0, 0, 0)]).unwrap();
        assert_eq!(p.affine_dim(), 2);
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.volume(), int(0));
        assert!(p.contains(&QVector(vec![frac(1, 2), frac(1, 2), int(0)])));
        assert!(!p.contains(&QVector(vec![frac(1, 2), frac(1, 2), int(1)])));
    }

    #[test]
    fn segment_and_point() {
        let s = convex_hull_3d(&[v(0, 0, 0), v(2, 2, 2), v(1, 1, 1)]).unwrap();
        assert_eq!(s.affine_dim(), 1);
        assert_eq!(s.vertices(), &[v(0, 0, 0), v(2, 2, 2)]);
        let pt = convex_hull_3d(&[v(1, 2, 3)]).unwrap();
        assert_eq!(pt.affine_dim(), 0);
        assert!(convex_hull_3d(&[]).is_err());
    }

    #[test]
    fn cube_with_redundant_points() {
        let mut pts = Vec::new();
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    pts.push(v(x, y, z));
                }
            }
        }
        let cube = convex_hull_3d(&pts).unwrap();
        assert_eq!(cube.vertices().len(), 8);
        assert_eq!(cube.facets().len(), 6);
        assert_eq!(cube.volume(), int(8));
        let sec = cube.section_at(&int(1)).unwrap();
        assert_eq!(sec.area(), int(4));
        assert!(cube.section_at(&int(3)).is_none());
    }

    #[test]
    fn facet_rings_are_closed() {
        let p = convex_hull_3d(&[v(0, 0, 0), v(2, 0, 0), v(0, 2, 0), v(0, 0, 2), v(2, 2, 2)]).unwrap();
        for ring in p.facet_rings() {
            assert!(ring.len() >= 3);
        }
    }

    proptest::proptest! {
        #[test]
        fn hull_contains_inputs_and_volume_scales(
            coords in proptest::collection::vec((-6i64..6, -6i64..6, -6i64..6), 4..20),
            num in 1i64..4, den in 1i64..4, dx in -3i64..3
        ) {
            let pts: Vec<QVector> = coords.iter().map(|&(x, y, z)| v(x, y, z)).collect();
            let hull = convex_hull_3d(&pts).unwrap();
            for p in &pts {
                proptest::prop_assert!(hull.contains(p));
            }
            let lambda = frac(num, den);
            let l3 = &lambda * &lambda * &lambda;
            proptest::prop_assert_eq!(hull.scale(&lambda).volume(), hull.volume() * l3);
            proptest::prop_assert_eq!(hull.translate(&v(dx, 1, -dx)).volume(), hull.volume());
        }
    }
}
