use std::collections::BTreeSet;

use num_traits::Zero;
use rayon::prelude::*;

use super::chambers::{
    check_flag_admissibility, combine_shifts, containing, decompose_in, mu_threefold, ord_flag, preferred,
    t_partition, zariski_mds, TInterval,
};
use super::model::ThreefoldModel;
use crate::geometry::linalg::{QMatrix, QVector};
use crate::geometry::pl::PiecewiseLinear;
use crate::geometry::polygon::Polygon2;
use crate::geometry::polytope::{convex_hull_3d, Polytope3};
use crate::geometry::rational::{self, Rational};
use crate::surface::{okounkov_polygon, wall_functionals};
use crate::Error;

/// Everything computed for one slice `x1 = t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceRecord {
    pub t: Rational,
    pub chamber: String,
    pub polygon: Polygon2,
    pub shift: (Rational, Rational),
    /// Upper end of the surface polygon's first coordinate.
    pub surface_mu: Rational,
    pub surface_supports: Vec<BTreeSet<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileInterval {
    pub chamber: String,
    pub start: Rational,
    pub end: Rational,
    pub refined: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceProfile {
    pub intervals: Vec<ProfileInterval>,
    pub shift: PiecewiseLinear,
    pub slices: Vec<SliceRecord>,
}

impl SliceProfile {
    pub fn breakpoints(&self) -> Vec<Rational> {
        self.slices.iter().map(|s| s.t.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OkounkovBody3 {
    pub polytope: Polytope3,
    pub profile: SliceProfile,
    pub limiting: bool,
    pub affine_dim: usize,
}

fn slice_record(model: &ThreefoldModel, d: &QVector, t: &Rational) -> Result<SliceRecord, Error> {
    let (lo, hi) = (ord_flag(model, d)?, mu_threefold(model, d)?);
    if t < &lo || t > &hi {
        return Err(Error::EmptySlice(rational::fmt(t)));
    }
    let dt = d.add_scaled(&-t.clone(), &model.flag_surface_class);
    let cs = containing(model, &dt);
    let ch = preferred(&cs).ok_or_else(|| Error::ChamberDataIncomplete(format!("no chamber contains ({dt})")))?;
    if !ch.admissible() {
        return Err(Error::Admissibility {
            chamber: ch.name.clone(),
        });
    }
    let zd = decompose_in(model, ch, &dt)?;
    let restricted = model.restriction_map.mul_vec(&zd.positive);
    let surf = okounkov_polygon(&model.surface, &model.surface_flag, &restricted).map_err(|e| match e {
        Error::NotPseudoEffective(m) => {
            Error::ModelInconsistent(format!("restricted positive part is not pseudo-effective on the flag surface: {m}"))
        }
        other => other,
    })?;
    let shift = combine_shifts(&zd.negative_coeffs, &ch.n_generator_shifts, &model.flag_surface_label);
    let polygon = surf.polygon.translate(&QVector(vec![shift.0.clone(), shift.1.clone()]));
    let surface_mu = surf.alpha.domain().1.clone();
    Ok(SliceRecord {
        t: t.clone(),
        chamber: ch.name.clone(),
        polygon,
        shift,
        surface_mu,
        surface_supports: surf.neg_support_per_piece,
    })
}

/// Slice of the body at `x1 = t`: the surface polygon of the restricted
/// positive part of `D - tS`, translated by the valuation shift.
pub fn slice_at(model: &ThreefoldModel, d: &QVector, t: &Rational) -> Result<Polygon2, Error> {
    model.check_dim(d)?;
    Ok(slice_record(model, d, t)?.polygon)
}

/// `t` values in `(p, q)` where two surface walls, the axis `x2 = 0` or the
/// effective boundary cross inside the `(t, x2)` plane.
fn refine_piece(model: &ThreefoldModel, d: &QVector, iv: &TInterval) -> Vec<Rational> {
    let mut out = vec![iv.start.clone(), iv.end.clone()];
    if iv.is_degenerate() {
        out.dedup();
        return out;
    }
    let ch = model.chamber(&iv.chamber).expect("chamber");
    let r: &QMatrix = &model.restriction_map;
    let a0 = r.mul_vec(&ch.positive(d));
    let a1 = r.mul_vec(&ch.positive(&model.flag_surface_class));
    let c = &model.surface_flag.curve_class;
    // each line: a + b t + c x2 = 0
    let mut lines: Vec<(Rational, Rational, Rational)> = wall_functionals(&model.surface, std::slice::from_ref(c))
        .iter()
        .map(|w| (w.dot(&a0), -w.dot(&a1), -w.dot(c)))
        .collect();
    lines.push((Rational::zero(), Rational::zero(), rational::one()));
    lines.sort();
    lines.dedup();
    for (i, l1) in lines.iter().enumerate() {
        for l2 in &lines[i + 1..] {
            let det = &l1.1 * &l2.2 - &l2.1 * &l1.2;
            if det.is_zero() {
                continue;
            }
            let t = (&l1.2 * &l2.0 - &l2.2 * &l1.0) / det;
            if t > iv.start && t < iv.end {
                out.push(t);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn assemble(model: &ThreefoldModel, d: &QVector, limiting: bool) -> Result<OkounkovBody3, Error> {
    let report = check_flag_admissibility(model, d)?;
    if let Some(chamber) = report.failing {
        return Err(Error::Admissibility { chamber });
    }
    let partition = report.partition;
    let refined: Vec<Vec<Rational>> = partition.iter().map(|iv| refine_piece(model, d, iv)).collect();
    let mut ts: Vec<Rational> = refined.iter().flatten().cloned().collect();
    ts.sort();
    ts.dedup();

    let slices: Vec<SliceRecord> = ts
        .par_iter()
        .map(|t| slice_record(model, d, t))
        .collect::<Result<_, _>>()?;
    let points: Vec<QVector> = slices.iter().flat_map(|s| s.polygon.lift(&s.t)).collect();
    let polytope = convex_hull_3d(&points)?;

    audit(model, d, &polytope, &slices)?;

    let shift = PiecewiseLinear::new(
        ts.clone(),
        slices
            .iter()
            .map(|s| QVector(vec![s.shift.0.clone(), s.shift.1.clone()]))
            .collect(),
    )?;
    let intervals = partition
        .into_iter()
        .zip(refined)
        .map(|(iv, refined)| ProfileInterval {
            chamber: iv.chamber,
            start: iv.start,
            end: iv.end,
            refined,
        })
        .collect();
    let affine_dim = polytope.affine_dim();
    Ok(OkounkovBody3 {
        polytope,
        profile: SliceProfile {
            intervals,
            shift,
            slices,
        },
        limiting,
        affine_dim,
    })
}

/// Cross-sections of the hull agree with the slices at every breakpoint and
/// midpoint, and midpoint slices interpolate their neighbours.
fn audit(model: &ThreefoldModel, d: &QVector, polytope: &Polytope3, slices: &[SliceRecord]) -> Result<(), Error> {
    for s in slices {
        if polytope.section_at(&s.t).as_ref() != Some(&s.polygon) {
            return Err(Error::AuditFailure(format!(
                "hull section at t = {} differs from the computed slice",
                rational::fmt(&s.t)
            )));
        }
    }
    let half = rational::frac(1, 2);
    slices
        .par_windows(2)
        .map(|w| {
            let mid = (&w[0].t + &w[1].t) / rational::int(2);
            let direct = slice_record(model, d, &mid)?.polygon;
            let interp = w[0].polygon.minkowski_combination(&w[1].polygon, &half);
            if direct != interp {
                return Err(Error::AuditFailure(format!(
                    "slice at t = {} is not the average of its neighbours",
                    rational::fmt(&mid)
                )));
            }
            if polytope.section_at(&mid).as_ref() != Some(&direct) {
                return Err(Error::AuditFailure(format!(
                    "hull section at t = {} differs from the computed slice",
                    rational::fmt(&mid)
                )));
            }
            Ok(())
        })
        .collect::<Result<Vec<()>, Error>>()?;
    Ok(())
}

/// Okounkov body of a big class.
pub fn okounkov_body(model: &ThreefoldModel, d: &QVector) -> Result<OkounkovBody3, Error> {
    model.check_dim(d)?;
    if !model.is_big(d) {
        if model.eff_cone.contains(d) {
            return Err(Error::NotBig);
        }
        return Err(Error::NotPseudoEffective(format!("({d}) lies outside the effective cone")));
    }
    assemble(model, d, false)
}

/// Limiting body of a pseudo-effective class; equal to the Okounkov body
/// for big classes.
pub fn limiting_body(model: &ThreefoldModel, d: &QVector) -> Result<OkounkovBody3, Error> {
    model.check_dim(d)?;
    if !model.eff_cone.contains(d) {
        return Err(Error::NotPseudoEffective(format!("({d}) lies outside the effective cone")));
    }
    assemble(model, d, !model.is_big(d))
}

/// Translation `a` with `Delta(D) = Delta(P_D) + a`, verified exactly.
pub fn body_translation_vector(model: &ThreefoldModel, d: &QVector) -> Result<QVector, Error> {
    let body = okounkov_body(model, d)?;
    let zd = zariski_mds(model, d)?;
    let ch = model.chamber(&zd.chamber).expect("chamber");
    if !ch.admissible() {
        return Err(Error::Admissibility {
            chamber: ch.name.clone(),
        });
    }
    let first = zd
        .negative_coeffs
        .get(&model.flag_surface_label)
        .cloned()
        .unwrap_or_else(Rational::zero);
    let (l1, l2) = combine_shifts(&zd.negative_coeffs, &ch.n_generator_shifts, &model.flag_surface_label);
    let a = QVector(vec![first, l1, l2]);
    let positive_body = limiting_body(model, &zd.positive)?;
    if positive_body.polytope.translate(&a) != body.polytope {
        return Err(Error::TranslationLaw(format!(
            "Delta(D) differs from Delta(P_D) + ({a}) for D = ({d})"
        )));
    }
    Ok(a)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyhedralityReport {
    pub mori_intervals: usize,
    pub surface_chamber_pieces: usize,
    pub mu_pieces: usize,
    pub surface_picard_rank: usize,
    /// Picard number one: every slice is a scaled copy of one simplex.
    pub rank_one_shortcut: bool,
    pub polyhedral: bool,
    pub verdict: String,
    pub vertices: Vec<QVector>,
    pub reason: Option<String>,
}

pub fn polyhedrality_report(model: &ThreefoldModel, d: &QVector) -> Result<PolyhedralityReport, Error> {
    model.check_dim(d)?;
    let rank = model.surface.rank();
    let partition = t_partition(model, d)?;
    match limiting_body(model, d) {
        Ok(body) => {
            let supports: BTreeSet<&BTreeSet<String>> = body
                .profile
                .slices
                .iter()
                .flat_map(|s| s.surface_supports.iter())
                .collect();
            let mu = PiecewiseLinear::scalar(
                body.profile.breakpoints(),
                body.profile.slices.iter().map(|s| s.surface_mu.clone()).collect(),
            )?;
            Ok(PolyhedralityReport {
                mori_intervals: partition.len(),
                surface_chamber_pieces: supports.len(),
                mu_pieces: mu.linear_piece_count(),
                surface_picard_rank: rank,
                rank_one_shortcut: rank == 1,
                polyhedral: true,
                verdict: "rational polyhedral".into(),
                vertices: body.polytope.vertices().to_vec(),
                reason: None,
            })
        }
        Err(e) => Ok(PolyhedralityReport {
            mori_intervals: partition.len(),
            surface_chamber_pieces: 0,
            mu_pieces: 0,
            surface_picard_rank: rank,
            rank_one_shortcut: rank == 1,
            polyhedral: false,
            verdict: "undetermined".into(),
            vertices: Vec::new(),
            reason: Some(e.to_string()),
        }),
    }
}

/// `vol(D) = (P_D)^3` on an identity chamber.
pub fn divisor_volume(model: &ThreefoldModel, d: &QVector) -> Result<Rational, Error> {
    let form = model
        .trilinear_form
        .as_ref()
        .ok_or_else(|| Error::Unavailable("model has no trilinear form".into()))?;
    let zd = zariski_mds(model, d)?;
    let ch = model.chamber(&zd.chamber).expect("chamber");
    if !ch.identity_sqm {
        return Err(Error::Unavailable(format!(
            "chamber {} is realised on a flipped model; its positive part does not live on X",
            ch.name
        )));
    }
    Ok(form.cube(&zd.positive))
}
