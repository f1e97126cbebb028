//! Rational polyhedral cones with generator and facet descriptions, converted
//! into each other by the double description method.

use std::fmt;

use num_traits::{Signed, Zero};

use super::linalg::{QMatrix, QVector};
use super::rational::Rational;
use crate::Error;

/// Hard cap on the ambient dimension.
pub const MAX_CONE_DIM: usize = 6;

/// A cone in `Q^dim`.
///
/// `generators` is the V-description (a line in the cone appears as a pair
/// `+l`, `-l`), `facets` the H-description as inward normals `f` with
/// `f . x >= 0` (an equation appears as a pair `+f`, `-f`). Cones built with
/// [`PolyhedralCone::from_generators`] or [`PolyhedralCone::from_facets`]
/// carry both descriptions in minimal canonical form: primitive integer
/// vectors, sorted lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyhedralCone {
    dim: usize,
    generators: Option<Vec<QVector>>,
    facets: Option<Vec<QVector>>,
}

impl fmt::Debug for PolyhedralCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &Option<Vec<QVector>>| match v {
            None => "-".to_string(),
            Some(v) => v.iter().map(|x| format!("({x})")).collect::<Vec<_>>().join(" "),
        };
        write!(
            f,
            "Cone(dim {}, V: {}, H: {})",
            self.dim,
            show(&self.generators),
            show(&self.facets)
        )
    }
}

fn check_vectors(dim: usize, vs: &[QVector]) -> Result<(), Error> {
    if dim == 0 || dim > MAX_CONE_DIM {
        return Err(Error::DimensionMismatch(format!(
            "cone dimension {dim} outside 1..={MAX_CONE_DIM}"
        )));
    }
    match vs.iter().find(|v| v.dim() != dim) {
        Some(v) => Err(Error::DimensionMismatch(format!(
            "vector of dimension {} in a cone of dimension {dim}",
            v.dim()
        ))),
        None => Ok(()),
    }
}

impl PolyhedralCone {
    /// Unprocessed description; at least one side must be present.
    pub fn raw(
        dim: usize,
        generators: Option<Vec<QVector>>,
        facets: Option<Vec<QVector>>,
    ) -> Result<Self, Error> {
        if generators.is_none() && facets.is_none() {
            return Err(Error::DimensionMismatch(
                "cone needs generators or facets".into(),
            ));
        }
        for side in [&generators, &facets].into_iter().flatten() {
            check_vectors(dim, side)?;
        }
        Ok(PolyhedralCone {
            dim,
            generators,
            facets,
        })
    }

    pub fn from_generators(dim: usize, generators: Vec<QVector>) -> Result<Self, Error> {
        dual_description(&Self::raw(dim, Some(generators), None)?)
    }

    pub fn from_facets(dim: usize, facets: Vec<QVector>) -> Result<Self, Error> {
        dual_description(&Self::raw(dim, None, Some(facets))?)
    }

    /// Non-negative orthant.
    pub fn orthant(dim: usize) -> Self {
        Self::from_generators(dim, (0..dim).map(|i| QVector::unit(dim, i)).collect())
            .expect("orthant")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_complete(&self) -> bool {
        self.generators.is_some() && self.facets.is_some()
    }

    /// Minimal generators. Panics on a raw cone without generators.
    pub fn generators(&self) -> &[QVector] {
        self.generators
            .as_deref()
            .expect("cone has no generator description")
    }

    /// Minimal inward facet normals. Panics on a raw cone without facets.
    pub fn facets(&self) -> &[QVector] {
        self.facets.as_deref().expect("cone has no facet description")
    }

    pub fn raw_generators(&self) -> Option<&[QVector]> {
        self.generators.as_deref()
    }

    pub fn raw_facets(&self) -> Option<&[QVector]> {
        self.facets.as_deref()
    }

    pub fn contains(&self, v: &QVector) -> bool {
        v.dim() == self.dim && self.facets().iter().all(|f| !f.dot(v).is_negative())
    }

    /// Strict interior in the ambient space (no facet, hence no equation,
    /// is tight).
    pub fn interior_contains(&self, v: &QVector) -> bool {
        v.dim() == self.dim && self.facets().iter().all(|f| f.dot(v).is_positive())
    }

    /// Dimension of the linear span.
    pub fn span_dim(&self) -> usize {
        QMatrix::from_rows(self.generators().to_vec())
            .map(|m| m.rank())
            .unwrap_or(0)
    }

    pub fn is_pointed(&self) -> bool {
        let gens = self.generators();
        !gens.iter().any(|g| gens.contains(&(-g)))
    }

    /// Facet normals tight at `v`.
    pub fn tight_facets(&self, v: &QVector) -> Vec<&QVector> {
        self.facets().iter().filter(|f| f.dot(v).is_zero()).collect()
    }
}

/// Fills in both descriptions, each minimal and canonical. When both are
/// given, the generators are authoritative and the facets are checked
/// against them.
pub fn dual_description(cone: &PolyhedralCone) -> Result<PolyhedralCone, Error> {
    let dim = cone.dim;
    let facets = match (&cone.generators, &cone.facets) {
        (Some(g), given) => {
            let f = dual_generators(dim, g);
            if let Some(given) = given {
                if let Some(bad) = given.iter().find(|h| g.iter().any(|x| h.dot(x).is_negative())) {
                    return Err(Error::ModelInconsistent(format!(
                        "facet ({bad}) is violated by a generator of the same cone"
                    )));
                }
                if dual_generators(dim, given) != dual_generators(dim, &f) {
                    return Err(Error::ModelInconsistent(
                        "generator and facet descriptions describe different cones".into(),
                    ));
                }
            }
            f
        }
        (None, Some(h)) => dual_generators(dim, &dual_generators(dim, h)),
        (None, None) => unreachable!("raw cone without descriptions"),
    };
    let generators = dual_generators(dim, &facets);
    Ok(PolyhedralCone {
        dim,
        generators: Some(generators),
        facets: Some(facets),
    })
}

/// Minimal generators of `{x : r . x >= 0 for all rows r}`.
fn dual_generators(dim: usize, rows: &[QVector]) -> Vec<QVector> {
    let (rays, lineality) = extreme_rays(dim, rows);
    let mut out = rays;
    for l in lineality {
        out.push(-&l);
        out.push(l);
    }
    out.sort();
    out.dedup();
    out
}

/// Double description: extreme rays and a canonical lineality basis of
/// `{x : A x >= 0}`.
pub fn extreme_rays(dim: usize, rows: &[QVector]) -> (Vec<QVector>, Vec<QVector>) {
    let lineality: Vec<QVector> = if rows.is_empty() {
        (0..dim).map(|i| QVector::unit(dim, i)).collect()
    } else {
        QMatrix::from_rows(rows.to_vec())
            .expect("rows of equal dimension")
            .nullspace()
    };
    let lineality = canonical_basis(dim, lineality);

    // work in coordinates of the orthogonal complement, where the cone is pointed
    let basis: Vec<QVector> = if lineality.is_empty() {
        (0..dim).map(|i| QVector::unit(dim, i)).collect()
    } else {
        QMatrix::from_rows(lineality.clone())
            .expect("rows of equal dimension")
            .nullspace()
    };
    let k = basis.len();
    if k == 0 {
        return (Vec::new(), lineality);
    }
    let reduced: Vec<QVector> = rows
        .iter()
        .map(|r| QVector(basis.iter().map(|b| r.dot(b)).collect()))
        .collect();

    // simplicial start from k independent rows
    let mut chosen: Vec<usize> = Vec::new();
    for (i, r) in reduced.iter().enumerate() {
        let mut trial: Vec<QVector> = chosen.iter().map(|&j| reduced[j].clone()).collect();
        trial.push(r.clone());
        if QMatrix::from_rows(trial).expect("equal dims").rank() == chosen.len() + 1 {
            chosen.push(i);
            if chosen.len() == k {
                break;
            }
        }
    }
    let a0 = QMatrix::from_rows(chosen.iter().map(|&j| reduced[j].clone()).collect())
        .expect("equal dims");
    let mut rays: Vec<QVector> = (0..k)
        .map(|j| a0.solve(&QVector::unit(k, j)).expect("independent rows").primitive())
        .collect();
    let mut done: Vec<usize> = chosen.clone();

    for (i, row) in reduced.iter().enumerate() {
        if chosen.contains(&i) {
            continue;
        }
        let vals: Vec<Rational> = rays.iter().map(|r| row.dot(r)).collect();
        let mut next: Vec<QVector> = Vec::new();
        for (r, v) in rays.iter().zip(&vals) {
            if !v.is_negative() {
                next.push(r.clone());
            }
        }
        for (p, vp) in rays.iter().zip(&vals).filter(|(_, v)| v.is_positive()) {
            for (n, vn) in rays.iter().zip(&vals).filter(|(_, v)| v.is_negative()) {
                if adjacent(&reduced, &done, p, n, k) {
                    let combo = &p.scale(&-vn.clone()) + &n.scale(vp);
                    next.push(combo.primitive());
                }
            }
        }
        next.sort();
        next.dedup();
        rays = next;
        done.push(i);
    }

    let mut out: Vec<QVector> = rays
        .iter()
        .map(|y| {
            let mut x = QVector::zeros(dim);
            for (c, b) in y.iter().zip(&basis) {
                x = x.add_scaled(c, b);
            }
            x.primitive()
        })
        .collect();
    out.sort();
    out.dedup();
    (out, lineality)
}

/// Algebraic adjacency test: the rows tight at both rays have rank `k - 2`.
fn adjacent(rows: &[QVector], done: &[usize], p: &QVector, n: &QVector, k: usize) -> bool {
    let tight: Vec<QVector> = done
        .iter()
        .map(|&i| &rows[i])
        .filter(|r| r.dot(p).is_zero() && r.dot(n).is_zero())
        .cloned()
        .collect();
    if k < 2 {
        return true;
    }
    if tight.len() < k - 2 {
        return false;
    }
    if k == 2 {
        return true;
    }
    QMatrix::from_rows(tight).expect("equal dims").rank() == k - 2
}

/// Reduced row echelon basis, each row primitive.
fn canonical_basis(dim: usize, vs: Vec<QVector>) -> Vec<QVector> {
    if vs.is_empty() {
        return vs;
    }
    let (r, pivots) = QMatrix::from_rows(vs).expect("equal dims").rref();
    (0..pivots.len())
        .map(|i| QVector((0..dim).map(|j| r[(i, j)].clone()).collect()).primitive())
        .collect()
}

pub fn cone_contains(cone: &PolyhedralCone, v: &QVector) -> bool {
    cone.contains(v)
}

/// Largest `t` with `base - t * dir` in the cone; `None` when unbounded.
pub fn ray_exit(cone: &PolyhedralCone, base: &QVector, dir: &QVector) -> Result<Option<Rational>, Error> {
    if base.dim() != cone.dim || dir.dim() != cone.dim {
        return Err(Error::DimensionMismatch("ray and cone dimensions differ".into()));
    }
    if !cone.contains(base) {
        return Err(Error::BaseNotInCone);
    }
    Ok(cone
        .facets()
        .iter()
        .filter(|f| f.dot(dir).is_positive())
        .map(|f| f.dot(base) / f.dot(dir))
        .min())
}

/// Closed interval `{t >= 0 : base - t * dir in cone}`, or `None` when empty.
/// The upper end is `None` when unbounded.
pub fn ray_interval(
    cone: &PolyhedralCone,
    base: &QVector,
    dir: &QVector,
) -> Option<(Rational, Option<Rational>)> {
    let mut lo = Rational::zero();
    let mut hi: Option<Rational> = None;
    for f in cone.facets() {
        let a = f.dot(base);
        let b = f.dot(dir);
        // need a - t b >= 0
        if b.is_zero() {
            if a.is_negative() {
                return None;
            }
        } else if b.is_positive() {
            let t = &a / &b;
            hi = Some(match hi {
                Some(h) if h < t => h,
                _ => t,
            });
        } else {
            let t = &a / &b;
            if t > lo {
                lo = t;
            }
        }
    }
    match &hi {
        Some(h) if *h < lo => None,
        _ => Some((lo, hi)),
    }
}
