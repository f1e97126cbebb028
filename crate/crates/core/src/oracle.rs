//! Independent ground truth from explicit sections.
//!
//! Sections of `alpha H - beta1 E1 - beta2 E2` on the blow-up of `P^3` at
//! `p1 = [1:0:0:0]` and `p2 = [0:1:0:0]` are degree `m alpha` forms with the
//! required multiplicities. The flag is `E1`, the line `u1 = 0` in
//! `E1 = P(u1, u2, u3)` and the point `(u2:u3) = (1:0)` on it, where
//! `ui = xi / x0`. The flag is torus invariant, so distinct monomials have
//! distinct valuations and the valuation image is read off monomial by
//! monomial.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::geometry::linalg::QVector;
use crate::geometry::polytope::{convex_hull_3d, Polytope3};
use crate::geometry::rational::{self, Rational};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OracleKind {
    ProjectiveSpace,
    BlowupOnePoint,
    BlowupTwoPoints,
}

impl OracleKind {
    pub fn parse(s: &str) -> Result<Self, Error> {
        match s {
            "p3" | "projective-3-space" => Ok(OracleKind::ProjectiveSpace),
            "blowup-1pt" => Ok(OracleKind::BlowupOnePoint),
            "blowup-2pts" | "blowup-p3-2pts" => Ok(OracleKind::BlowupTwoPoints),
            other => Err(Error::UnknownModel(other.to_string())),
        }
    }

    /// Rank of the class group: `(H)`, `(H, E1)` or `(H, E1, E2)`.
    pub fn rank(self) -> usize {
        match self {
            OracleKind::ProjectiveSpace => 1,
            OracleKind::BlowupOnePoint => 2,
            OracleKind::BlowupTwoPoints => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleModel {
    pub kind: OracleKind,
}

impl OracleModel {
    pub fn new(kind: OracleKind) -> Self {
        OracleModel { kind }
    }
}

/// Valuation vectors of `H^0(mD)`, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationSet {
    pub m: u32,
    pub vectors: Vec<QVector>,
}

impl ValuationSet {
    pub fn normalized(&self) -> Vec<QVector> {
        let s = Rational::new(1.into(), self.m.into());
        self.vectors.iter().map(|v| v.scale(&s)).collect()
    }
}

/// `(n, k1, k2)`: degree and required multiplicities at `p1`, `p2` for `mD`,
/// plus the `E1` coefficient `-m beta1` added to the first valuation.
struct Bundle {
    degree: i64,
    mult1: i64,
    mult2: i64,
    offset1: i64,
}

fn to_i64(q: &Rational, what: &str) -> Result<i64, Error> {
    if !q.is_integer() {
        return Err(Error::InvalidParameter(format!("{what} is not integral")));
    }
    q.to_integer()
        .to_i64()
        .ok_or_else(|| Error::InvalidParameter(format!("{what} is out of range")))
}

fn bundle(om: &OracleModel, d: &QVector, m: u32) -> Result<Bundle, Error> {
    if d.dim() != om.kind.rank() {
        return Err(Error::DimensionMismatch(format!(
            "class of dimension {} for an oracle model of rank {}",
            d.dim(),
            om.kind.rank()
        )));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    let md = d.scale(&rational::int(m as i64));
    let coord = |i: usize| -> Result<i64, Error> {
        if i < md.dim() {
            to_i64(&md[i], "m D")
        } else {
            Ok(0)
        }
    };
    let degree = coord(0)?;
    if degree < 0 {
        return Err(Error::InvalidParameter("the H coefficient must be non-negative".into()));
    }
    let (e1, e2) = (coord(1)?, coord(2)?);
    Ok(Bundle {
        degree,
        mult1: (-e1).max(0),
        mult2: (-e2).max(0),
        offset1: e1,
    })
}

/// Valuation image of `H^0(mD)` for `D = (alpha, e1, e2)` in the basis
/// `(H, E1, E2)` (truncated to the rank of the model).
pub fn enumerate_valuations(om: &OracleModel, d: &QVector, m: u32) -> Result<ValuationSet, Error> {
    let b = bundle(om, d, m)?;
    let n = b.degree;
    let mut out = BTreeSet::new();
    for a0 in 0..=n {
        // multiplicity at p1 is n - a0, at p2 it is n - a1
        if n - a0 < b.mult1 {
            continue;
        }
        for a1 in 0..=n - a0 {
            if n - a1 < b.mult2 {
                continue;
            }
            for a3 in 0..=n - a0 - a1 {
                out.insert(QVector::from_ints(&[n - a0 + b.offset1, a1, a3]));
            }
        }
    }
    Ok(ValuationSet {
        m,
        vectors: out.into_iter().collect(),
    })
}

fn binom3(k: i64) -> BigInt {
    if k < 3 {
        return BigInt::zero();
    }
    let k = BigInt::from(k);
    &k * (&k - 1) * (&k - 2) / 6
}

/// `h^0(mD)` by inclusion-exclusion over the two multiplicity conditions.
pub fn h0(om: &OracleModel, d: &QVector, m: u32) -> Result<BigInt, Error> {
    let b = bundle(om, d, m)?;
    let n = b.degree;
    // monomials of degree n with a0 >= r1 and a1 >= r2
    let count = |r1: i64, r2: i64| binom3(n - r1.max(0) - r2.max(0) + 3);
    let r1 = if b.mult1 > 0 { n - b.mult1 + 1 } else { n + 1 };
    let r2 = if b.mult2 > 0 { n - b.mult2 + 1 } else { n + 1 };
    let total = count(0, 0) - count(r1, 0) - count(0, r2) + count(r1, r2);
    Ok(if total.is_negative() { BigInt::zero() } else { total })
}

/// Convex hull of `(1/m) Gamma(mD)` over `1 <= m <= m_max`.
pub fn oracle_hull(om: &OracleModel, d: &QVector, m_max: u32) -> Result<Polytope3, Error> {
    if m_max == 0 {
        return Err(Error::InvalidParameter("m_max must be positive".into()));
    }
    let mut points = BTreeSet::new();
    for m in 1..=m_max {
        // skip levels where mD is not integral
        let md = d.scale(&rational::int(m as i64));
        if md.iter().any(|x| !x.is_integer()) {
            continue;
        }
        points.extend(enumerate_valuations(om, d, m)?.normalized());
    }
    convex_hull_3d(&points.into_iter().collect::<Vec<_>>())
}

/// Smallest `m` with `mD` integral.
pub fn clearing_multiple(d: &QVector) -> u32 {
    let l = d
        .iter()
        .fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    l.to_u32().unwrap_or(u32::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rational::{frac, int};

    fn two() -> OracleModel {
        OracleModel::new(OracleKind::BlowupTwoPoints)
    }

    fn v(xs: &[i64]) -> QVector {
        QVector::from_ints(xs)
    }

    #[test]
    fn hyperplane_class() {
        let s = enumerate_valuations(&two(), &v(&[1, 0, 0]), 1).unwrap();
        assert_eq!(s.vectors, [v(&[0, 0, 0]), v(&[1, 0, 0]), v(&[1, 0, 1]), v(&[1, 1, 0])]);
        let hull = oracle_hull(&two(), &v(&[1, 0, 0]), 1).unwrap();
        assert_eq!(hull.volume(), frac(1, 6));
    }

    #[test]
    fn trivial_and_exceptional_classes() {
        for m in 1..4 {
            assert_eq!(enumerate_valuations(&two(), &v(&[0, 0, 0]), m).unwrap().vectors, [v(&[0, 0, 0])]);
        }
        assert_eq!(oracle_hull(&two(), &v(&[0, 0, 1]), 5).unwrap().vertices(), &[v(&[0, 0, 0])]);
    }

    #[test]
    fn h2_is_flat() {
        let s = enumerate_valuations(&two(), &v(&[1, 0, -1]), 1).unwrap();
        assert_eq!(s.vectors.len(), 3);
        let hull = oracle_hull(&two(), &v(&[1, 0, -1]), 6).unwrap();
        assert!(hull.affine_dim() <= 2);
        assert_eq!(hull.volume(), int(0));
    }

    #[test]
    fn counts_match_inclusion_exclusion() {
        for kind in [OracleKind::ProjectiveSpace, OracleKind::BlowupOnePoint, OracleKind::BlowupTwoPoints] {
            let om = OracleModel::new(kind);
            for a in 0..4 {
                for b1 in -2..4 {
                    for b2 in -2..4 {
                        let full = [a, -b1, -b2];
                        let d = v(&full[..kind.rank()]);
                        for m in 1..3 {
                            let s = enumerate_valuations(&om, &d, m).unwrap();
                            assert_eq!(BigInt::from(s.vectors.len()), h0(&om, &d, m).unwrap(), "{d} m={m}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn valuation_images_are_additive() {
        let d = v(&[2, -1, 0]);
        let g1 = enumerate_valuations(&two(), &d, 1).unwrap().vectors;
        let g2 = enumerate_valuations(&two(), &d, 2).unwrap().vectors;
        let g3: BTreeSet<QVector> = enumerate_valuations(&two(), &d, 3).unwrap().vectors.into_iter().collect();
        for x in &g1 {
            for y in &g2 {
                assert!(g3.contains(&(x + y)));
            }
        }
    }

    #[test]
    fn bad_input() {
        assert!(enumerate_valuations(&two(), &v(&[1, 0]), 1).is_err());
        assert!(enumerate_valuations(&two(), &v(&[-1, 0, 0]), 1).is_err());
        let half = QVector(vec![frac(1, 2), int(0), int(0)]);
        assert!(enumerate_valuations(&two(), &half, 1).is_err());
        assert_eq!(clearing_multiple(&half), 2);
        assert_eq!(enumerate_valuations(&two(), &half, 2).unwrap().vectors.len(), 4);
    }
}
