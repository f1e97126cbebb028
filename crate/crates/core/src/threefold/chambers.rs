use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use super::model::{MoriChamber, ThreefoldModel};
use crate::geometry::cone::{ray_exit, ray_interval};
use crate::geometry::linalg::QVector;
use crate::geometry::rational::{self, Rational};
use crate::Error;

/// Chambers containing a class; `primary` is the lexicographically smallest
/// name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberMembership {
    pub primary: String,
    pub all: Vec<String>,
}

impl ChamberMembership {
    pub fn on_wall(&self) -> bool {
        self.all.len() > 1
    }
}

fn check_effective(model: &ThreefoldModel, d: &QVector) -> Result<(), Error> {
    model.check_dim(d)?;
    if !model.eff_cone.contains(d) {
        return Err(Error::NotPseudoEffective(format!("({d}) lies outside the effective cone")));
    }
    Ok(())
}

pub(crate) fn containing<'a>(model: &'a ThreefoldModel, d: &QVector) -> Vec<&'a MoriChamber> {
    let mut v: Vec<&MoriChamber> = model.chambers.iter().filter(|c| c.cone.contains(d)).collect();
    v.sort_by(|a, b| a.name.cmp(&b.name));
    v
}

/// Admissible chambers first, then by name.
pub(crate) fn preferred<'a>(chambers: &[&'a MoriChamber]) -> Option<&'a MoriChamber> {
    chambers
        .iter()
        .find(|c| c.admissible())
        .or_else(|| chambers.first())
        .copied()
}

pub fn chamber_of(model: &ThreefoldModel, d: &QVector) -> Result<ChamberMembership, Error> {
    check_effective(model, d)?;
    let all: Vec<String> = containing(model, d).iter().map(|c| c.name.clone()).collect();
    match all.first() {
        Some(p) => Ok(ChamberMembership {
            primary: p.clone(),
            all,
        }),
        None => Err(Error::ChamberDataIncomplete(format!("no chamber contains ({d})"))),
    }
}

/// Zariski decomposition on a Mori dream space: `D = P + N` with `N` written
/// in effective generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MdsDecomposition {
    pub chamber: String,
    pub positive: QVector,
    pub negative: QVector,
    pub negative_coeffs: BTreeMap<String, Rational>,
    pub support: BTreeSet<String>,
}

/// Decomposition computed with a given chamber, and checked against every
/// other chamber containing `d`.
pub(crate) fn decompose_in(
    model: &ThreefoldModel,
    chamber: &MoriChamber,
    d: &QVector,
) -> Result<MdsDecomposition, Error> {
    let positive = chamber.positive(d);
    let negative = chamber.negative(d);
    for other in containing(model, d) {
        if other.name != chamber.name && (other.positive(d) != positive || other.negative(d) != negative) {
            return Err(Error::ModelInconsistent(format!(
                "chambers {} and {} disagree on the decomposition of ({d})",
                chamber.name, other.name
            )));
        }
    }
    let coeffs = model.negative_coordinates(chamber, &negative)?;
    if let Some((l, _)) = coeffs.iter().find(|(_, a)| a.is_negative()) {
        return Err(Error::ModelInconsistent(format!(
            "n_map output not effective: model inconsistent (chamber {}, generator {l} at ({d}))",
            chamber.name
        )));
    }
    let support = coeffs
        .iter()
        .filter(|(_, a)| a.is_positive())
        .map(|(l, _)| l.clone())
        .collect();
    Ok(MdsDecomposition {
        chamber: chamber.name.clone(),
        positive,
        negative,
        negative_coeffs: coeffs,
        support,
    })
}

pub fn zariski_mds(model: &ThreefoldModel, d: &QVector) -> Result<MdsDecomposition, Error> {
    let m = chamber_of(model, d)?;
    decompose_in(model, model.chamber(&m.primary).expect("named chamber"), d)
}

/// Coefficient of an effective generator in the negative part.
pub fn asymptotic_valuation_3(model: &ThreefoldModel, d: &QVector, label: &str) -> Result<Rational, Error> {
    if model.generator(label).is_none() && label != model.flag_surface_label {
        return Err(Error::InvalidParameter(format!("{label} is not an effective generator")));
    }
    let zd = zariski_mds(model, d)?;
    Ok(zd.negative_coeffs.get(label).cloned().unwrap_or_else(Rational::zero))
}

/// `ord_S(||D||)` for the flag surface.
pub fn ord_flag(model: &ThreefoldModel, d: &QVector) -> Result<Rational, Error> {
    asymptotic_valuation_3(model, d, &model.flag_surface_label.clone())
}

pub fn mu_threefold(model: &ThreefoldModel, d: &QVector) -> Result<Rational, Error> {
    check_effective(model, d)?;
    ray_exit(&model.eff_cone, d, &model.flag_surface_class)?
        .ok_or_else(|| Error::Unavailable("D - tS stays effective for all t".into()))
}

/// One piece of the chamber cover of `t -> D - tS`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TInterval {
    pub chamber: String,
    pub start: Rational,
    pub end: Rational,
}

impl TInterval {
    pub fn is_degenerate(&self) -> bool {
        self.start == self.end
    }

    pub fn contains(&self, t: &Rational) -> bool {
        &self.start <= t && t <= &self.end
    }
}

/// Closed interval of each chamber along the path, clipped to
/// `[ord_S(||D||), mu]`; chambers the path misses are omitted.
pub fn chamber_intervals(model: &ThreefoldModel, d: &QVector) -> Result<Vec<TInterval>, Error> {
    let (lo, hi) = (ord_flag(model, d)?, mu_threefold(model, d)?);
    let s = &model.flag_surface_class;
    let mut out = Vec::new();
    for ch in &model.chambers {
        if let Some((a, b)) = ray_interval(&ch.cone, d, s) {
            let start = rational::max(&a, &lo);
            let end = match b {
                Some(b) => rational::min(&b, &hi),
                None => hi.clone(),
            };
            if start <= end {
                out.push(TInterval {
                    chamber: ch.name.clone(),
                    start,
                    end,
                });
            }
        }
    }
    out.sort_by(|x, y| (&x.start, &x.end, &x.chamber).cmp(&(&y.start, &y.end, &y.chamber)));
    Ok(out)
}

/// Chamber cover of the path `D - tS`, `t` in `[ord_S(||D||), mu]`.
///
/// Each elementary open piece is assigned its preferred containing chamber
/// (admissible first, then by name) and adjacent pieces with the same
/// chamber are merged. A single point is listed separately when its own
/// preferred chamber differs from those of the neighbouring pieces.
pub fn t_partition(model: &ThreefoldModel, d: &QVector) -> Result<Vec<TInterval>, Error> {
    check_effective(model, d)?;
    let raw = chamber_intervals(model, d)?;
    let (lo, hi) = (ord_flag(model, d)?, mu_threefold(model, d)?);
    let mut cuts: BTreeSet<Rational> = BTreeSet::new();
    cuts.insert(lo.clone());
    cuts.insert(hi.clone());
    for iv in &raw {
        cuts.insert(iv.start.clone());
        cuts.insert(iv.end.clone());
    }
    let cuts: Vec<Rational> = cuts.into_iter().collect();
    let s = &model.flag_surface_class;
    let pick = |t: &Rational| -> Result<String, Error> {
        let dt = d.add_scaled(&-t.clone(), s);
        preferred(&containing(model, &dt))
            .map(|c| c.name.clone())
            .ok_or_else(|| Error::ChamberDataIncomplete(format!("no chamber contains ({dt}) at t = {}", rational::fmt(t))))
    };
    if cuts.len() == 1 {
        return Ok(vec![TInterval {
            chamber: pick(&cuts[0])?,
            start: cuts[0].clone(),
            end: cuts[0].clone(),
        }]);
    }
    let pieces: Vec<String> = cuts
        .windows(2)
        .map(|w| pick(&((&w[0] + &w[1]) / rational::int(2))))
        .collect::<Result<_, _>>()?;
    let mut out: Vec<TInterval> = Vec::new();
    for (i, t) in cuts.iter().enumerate() {
        let here = pick(t)?;
        let left = if i > 0 { Some(&pieces[i - 1]) } else { None };
        let right = pieces.get(i);
        if left != Some(&here) && right != Some(&here) {
            out.push(TInterval {
                chamber: here,
                start: t.clone(),
                end: t.clone(),
            });
        }
        if let Some(name) = right {
            match out.last_mut() {
                Some(last) if &last.chamber == name && !last.is_degenerate() && last.end == *t => {
                    last.end = cuts[i + 1].clone();
                }
                _ => out.push(TInterval {
                    chamber: name.clone(),
                    start: t.clone(),
                    end: cuts[i + 1].clone(),
                }),
            }
        }
    }
    Ok(out)
}

/// `sum_{k != S} a_k * shift_k` for negative-part coefficients `a_k`.
pub fn combine_shifts(
    coeffs: &BTreeMap<String, Rational>,
    shifts: &BTreeMap<String, (Rational, Rational)>,
    skip: &str,
) -> (Rational, Rational) {
    let mut l = (Rational::zero(), Rational::zero());
    for (label, a) in coeffs {
        if label == skip {
            continue;
        }
        if let Some((s1, s2)) = shifts.get(label) {
            l.0 += a * s1;
            l.1 += a * s2;
        }
    }
    l
}

/// Valuation shift `l(t)` of the slice at `t`, computed on the named
/// chamber.
pub fn shift_l(model: &ThreefoldModel, chamber: &str, d: &QVector, t: &Rational) -> Result<(Rational, Rational), Error> {
    model.check_dim(d)?;
    let ch = model
        .chamber(chamber)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown chamber {chamber}")))?;
    let dt = d.add_scaled(&-t.clone(), &model.flag_surface_class);
    if !ch.cone.contains(&dt) {
        return Err(Error::InvalidParameter(format!(
            "t = {} is outside the interval of chamber {chamber}",
            rational::fmt(t)
        )));
    }
    let zd = decompose_in(model, ch, &dt)?;
    Ok(combine_shifts(&zd.negative_coeffs, &ch.n_generator_shifts, &model.flag_surface_label))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub pass: bool,
    /// Chambers met by the path, with their admissibility.
    pub chambers: Vec<(String, bool)>,
    pub failing: Option<String>,
    pub partition: Vec<TInterval>,
}

/// Passes iff every piece of the path lies in an admissible chamber.
pub fn check_flag_admissibility(model: &ThreefoldModel, d: &QVector) -> Result<AdmissibilityReport, Error> {
    let partition = t_partition(model, d)?;
    let mut chambers: Vec<(String, bool)> = Vec::new();
    for iv in &partition {
        let ok = model.chamber(&iv.chamber).expect("chamber").admissible();
        if !chambers.iter().any(|(n, _)| n == &iv.chamber) {
            chambers.push((iv.chamber.clone(), ok));
        }
    }
    let failing = chambers.iter().find(|(_, ok)| !ok).map(|(n, _)| n.clone());
    Ok(AdmissibilityReport {
        pass: failing.is_none(),
        chambers,
        failing,
        partition,
    })
}
