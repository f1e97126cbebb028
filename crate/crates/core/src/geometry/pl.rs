//! Continuous piecewise-linear maps from a closed rational interval to `Q^k`.

use num_traits::Zero;

use super::linalg::QVector;
use super::rational::{self, Rational};
use crate::Error;

/// Stored as values at strictly increasing breakpoints; linear in between.
/// A single breakpoint describes a function on a one-point domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiecewiseLinear {
    breakpoints: Vec<Rational>,
    values: Vec<QVector>,
}

/// One linear piece: `value(t) = intercept + slope * t` on `[start, end]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub start: Rational,
    pub end: Rational,
    pub slope: QVector,
    pub intercept: QVector,
}

impl PiecewiseLinear {
    pub fn new(breakpoints: Vec<Rational>, values: Vec<QVector>) -> Result<Self, Error> {
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return Err(Error::DimensionMismatch(
                "piecewise-linear data needs one value per breakpoint".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        let k = values[0].dim();
        if values.iter().any(|v| v.dim() != k) {
            return Err(Error::DimensionMismatch("values of mixed dimension".into()));
        }
        Ok(PiecewiseLinear {
            breakpoints,
            values,
        })
    }

    /// Scalar-valued convenience constructor.
    pub fn scalar(breakpoints: Vec<Rational>, values: Vec<Rational>) -> Result<Self, Error> {
        Self::new(breakpoints, values.into_iter().map(|v| QVector(vec![v])).collect())
    }

    pub fn domain(&self) -> (&Rational, &Rational) {
        (&self.breakpoints[0], &self.breakpoints[self.breakpoints.len() - 1])
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[QVector] {
        &self.values
    }

    pub fn output_dim(&self) -> usize {
        self.values[0].dim()
    }

    pub fn eval(&self, t: &Rational) -> Option<QVector> {
        let (a, b) = self.domain();
        if t < a || t > b {
            return None;
        }
        let i = self.breakpoints.partition_point(|x| x < t);
        if &self.breakpoints[i] == t {
            return Some(self.values[i].clone());
        }
        let (t0, t1) = (&self.breakpoints[i - 1], &self.breakpoints[i]);
        let s = (t - t0) / (t1 - t0);
        Some(self.values[i - 1].add_scaled(&s, &(&self.values[i] - &self.values[i - 1])))
    }

    /// First coordinate, for scalar functions.
    pub fn eval_scalar(&self, t: &Rational) -> Option<Rational> {
        self.eval(t).map(|v| v[0].clone())
    }

    pub fn pieces(&self) -> Vec<Piece> {
        self.breakpoints
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(t, v)| {
                let slope = (&v[1] - &v[0]).scale(&(rational::one() / (&t[1] - &t[0])));
                let intercept = v[0].add_scaled(&-t[0].clone(), &slope);
                Piece {
                    start: t[0].clone(),
                    end: t[1].clone(),
                    slope,
                    intercept,
                }
            })
            .collect()
    }

    /// Drops breakpoints where the two neighbouring pieces have equal slope.
    pub fn simplified(&self) -> PiecewiseLinear {
        let n = self.breakpoints.len();
        if n <= 2 {
            return self.clone();
        }
        let mut bp = vec![self.breakpoints[0].clone()];
        let mut vals = vec![self.values[0].clone()];
        for i in 1..n - 1 {
            let (tp, vp) = (&bp[bp.len() - 1], &vals[vals.len() - 1]);
            let d1 = (&self.values[i] - vp).scale(&(rational::one() / (&self.breakpoints[i] - tp)));
            let d2 = (&self.values[i + 1] - &self.values[i])
                .scale(&(rational::one() / (&self.breakpoints[i + 1] - &self.breakpoints[i])));
            if d1 != d2 {
                bp.push(self.breakpoints[i].clone());
                vals.push(self.values[i].clone());
            }
        }
        bp.push(self.breakpoints[n - 1].clone());
        vals.push(self.values[n - 1].clone());
        PiecewiseLinear {
            breakpoints: bp,
            values: vals,
        }
    }

    /// Number of maximal linear pieces (zero for a one-point domain).
    pub fn linear_piece_count(&self) -> usize {
        self.simplified().breakpoints.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.iter().all(Zero::is_zero))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rational::{frac, int};

    #[test]
    fn evaluation_between_and_at_breakpoints() {
        let f = PiecewiseLinear::scalar(vec![int(0), int(1), int(3)], vec![int(0), int(2), int(0)]).unwrap();
        assert_eq!(f.eval_scalar(&frac(1, 2)), Some(int(1)));
        assert_eq!(f.eval_scalar(&int(1)), Some(int(2)));
        assert_eq!(f.eval_scalar(&int(2)), Some(int(1)));
        assert_eq!(f.eval_scalar(&int(4)), None);
        assert_eq!(f.pieces().len(), 2);
        assert_eq!(f.pieces()[1].slope, QVector(vec![int(-1)]));
        assert_eq!(f.pieces()[1].intercept, QVector(vec![int(3)]));
    }

    #[test]
    fn collinear_breakpoints_simplify() {
        let f = PiecewiseLinear::scalar(vec![int(0), int(1), int(2)], vec![int(0), int(1), int(2)]).unwrap();
        assert_eq!(f.linear_piece_count(), 1);
        let point = PiecewiseLinear::scalar(vec![int(5)], vec![int(1)]).unwrap();
        assert_eq!(point.linear_piece_count(), 0);
        assert_eq!(point.eval_scalar(&int(5)), Some(int(1)));
    }

    #[test]
    fn rejects_unsorted_breakpoints() {
        assert!(PiecewiseLinear::scalar(vec![int(1), int(1)], vec![int(0), int(0)]).is_err());
    }
}
