//! Exact vectors and matrices over the rationals.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{self, Rational};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QVector(pub Vec<Rational>);

impl QVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        QVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        QVector(vec![Rational::zero(); dim])
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        QVector(xs.iter().map(|&x| rational::int(x)).collect())
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Rational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn dot(&self, other: &QVector) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, s: &Rational) -> QVector {
        QVector(self.0.iter().map(|x| x * s).collect())
    }

    /// `self + s * other`
    pub fn add_scaled(&self, s: &Rational, other: &QVector) -> QVector {
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a + s * b).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Positive rescaling to a primitive integer vector. The zero vector is
    /// returned unchanged.
    pub fn primitive(&self) -> QVector {
        if self.is_zero() {
            return self.clone();
        }
        let den = rational::common_denominator(&self.0);
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|q| (q * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let g = ints
            .iter()
            .filter(|x| !x.is_zero())
            .fold(BigInt::zero(), |acc, x| acc.gcd(x));
        QVector(
            ints.into_iter()
                .map(|x| Rational::from_integer(x / &g))
                .collect(),
        )
    }

    /// Prepends a coordinate.
    pub fn lifted(&self, head: &Rational) -> QVector {
        let mut v = Vec::with_capacity(self.dim() + 1);
        v.push(head.clone());
        v.extend(self.0.iter().cloned());
        QVector(v)
    }

    pub fn to_text(&self) -> String {
        self.0.iter().map(rational::fmt).collect::<Vec<_>>().join(",")
    }

    /// Parses a comma separated list such as `"1,-1/2,0"`.
    pub fn parse(s: &str) -> Result<QVector, Error> {
        s.split(',')
            .map(rational::parse)
            .collect::<Result<Vec<_>, _>>()
            .map(QVector)
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Index<usize> for QVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl IndexMut<usize> for QVector {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

impl Add for &QVector {
    type Output = QVector;
    fn add(self, rhs: &QVector) -> QVector {
        QVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &QVector {
    type Output = QVector;
    fn sub(self, rhs: &QVector) -> QVector {
        QVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &QVector {
    type Output = QVector;
    fn neg(self) -> QVector {
        QVector(self.0.iter().map(|a| -a).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<QVector>) -> Result<Self, Error> {
        let r = rows.len();
        let c = rows.first().map_or(0, QVector::dim);
        if rows.iter().any(|row| row.dim() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flat_map(|v| v.0).collect(),
        })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| QVector::from_ints(r)).collect())
            .expect("rectangular integer matrix")
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[QVector]) -> Result<Self, Error> {
        Ok(Self::from_rows(cols.to_vec())?.transpose())
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> QVector {
        QVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> QVector {
        QVector((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn row_vectors(&self) -> Vec<QVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &QVector) -> QVector {
        debug_assert_eq!(self.cols, v.dim());
        QVector((0..self.rows).map(|i| self.row(i).dot(v)).collect())
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rational::zero();
                for k in 0..self.cols {
                    acc += &self[(i, k)] * &other[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// `u^T M v`
    pub fn bilinear(&self, u: &QVector, v: &QVector) -> Rational {
        u.dot(&self.mul_vec(v))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let x = &m[(r, j)] * &inv;
                m[(r, j)] = x;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let x = &m[(i, j)] - &f * &m[(r, j)];
                        m[(i, j)] = x;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : M x = 0}`.
    pub fn nullspace(&self) -> Vec<QVector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = QVector::zeros(self.cols);
                v[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Exact solution of a square system; `None` when singular.
    pub fn solve(&self, b: &QVector) -> Option<QVector> {
        if !self.is_square() || b.dim() != self.rows {
            return None;
        }
        let x = self.solve_unique(b)?;
        Some(x)
    }

    /// Unique solution of `M x = b` for a matrix of full column rank (any
    /// shape). `None` when the system is inconsistent or underdetermined.
    pub fn solve_unique(&self, b: &QVector) -> Option<QVector> {
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) || pivots.len() != self.cols {
            return None;
        }
        Some(QVector((0..self.cols).map(|i| r[(i, self.cols)].clone()).collect()))
    }

    pub fn determinant(&self) -> Rational {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &piv;
                for j in c..n {
                    let x = &m[(i, j)] - &f * &m[(c, j)];
                    m[(i, j)] = x;
                }
            }
        }
        det
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> QMatrix {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Sylvester's criterion: leading principal minors alternate in sign,
    /// starting negative.
    pub fn is_negative_definite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        (1..=self.rows).all(|k| {
            let idx: Vec<usize> = (0..k).collect();
            let d = self.submatrix(&idx, &idx).determinant();
            if k % 2 == 1 {
                d.is_negative()
            } else {
                d.is_positive()
            }
        })
    }

    pub fn to_rows_text(&self) -> Vec<String> {
        (0..self.rows).map(|i| self.row(i).to_text()).collect()
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Exact solution of a square system, or `None` when singular or
/// inconsistent.
pub fn solve_linear(a: &QMatrix, b: &QVector) -> Option<QVector> {
    a.solve(b)
}

/// Dimension of the affine hull of a point set (`-1` for the empty set is
/// reported as `None`).
pub fn affine_dimension(points: &[QVector]) -> Option<usize> {
    let first = points.first()?;
    let diffs: Vec<QVector> = points[1..].iter().map(|p| p - first).collect();
    if diffs.is_empty() {
        return Some(0);
    }
    Some(QMatrix::from_rows(diffs).map(|m| m.rank()).unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rational::{frac, int};

    #[test]
    fn diagonal_system() {
        let a = QMatrix::from_ints(&[&[2, 0], &[0, 4]]);
        let x = solve_linear(&a, &QVector::from_ints(&[1, 2])).unwrap();
        assert_eq!(x, QVector(vec![frac(1, 2), frac(1, 2)]));
    }

    #[test]
    fn back_substitution() {
        let a = QMatrix::from_ints(&[&[-1, 1], &[1, -2]]);
        let x = solve_linear(&a, &QVector::from_ints(&[-2, 3])).unwrap();
        assert_eq!(x, QVector::from_ints(&[1, -1]));
    }

    #[test]
    fn inconsistent_rank_deficient() {
        let a = QMatrix::from_ints(&[&[1, 1], &[2, 2]]);
        assert!(solve_linear(&a, &QVector::from_ints(&[1, 3])).is_none());
        // consistent but singular is also rejected
        assert!(solve_linear(&a, &QVector::from_ints(&[1, 2])).is_none());
    }

    #[test]
    fn nullspace_and_rank() {
        let a = QMatrix::from_ints(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(a.rank(), 1);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(a.mul_vec(&v).is_zero());
        }
    }

    #[test]
    fn determinant_and_definiteness() {
        let g = QMatrix::from_ints(&[&[-2, 1], &[1, -2]]);
        assert_eq!(g.determinant(), int(3));
        assert!(g.is_negative_definite());
        let h = QMatrix::from_ints(&[&[-1, 2], &[2, -1]]);
        assert!(!h.is_negative_definite());
    }

    #[test]
    fn primitive_vectors() {
        let v = QVector(vec![frac(1, 2), frac(-3, 4), int(0)]);
        assert_eq!(v.primitive(), QVector::from_ints(&[2, -3, 0]));
        assert_eq!(QVector::from_ints(&[0, 4, -6]).primitive(), QVector::from_ints(&[0, 2, -3]));
    }

    #[test]
    fn rectangular_unique_solution() {
        let a = QMatrix::from_columns(&[QVector::from_ints(&[-1, 2]), QVector::from_ints(&[1, 0])]).unwrap();
        let x = a.solve_unique(&QVector::from_ints(&[1, 4])).unwrap();
        assert_eq!(x, QVector::from_ints(&[2, 3]));
        let tall = QMatrix::from_columns(&[QVector::from_ints(&[1, 1, 0])]).unwrap();
        assert!(tall.solve_unique(&QVector::from_ints(&[1, 2, 0])).is_none());
    }
}
