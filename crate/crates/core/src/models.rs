//! Built-in surfaces and threefolds.
//!
//! Intersection numbers are computed by push-pull in the ambient space and
//! recorded next to each constructor.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::geometry::cone::PolyhedralCone;
use crate::geometry::linalg::{QMatrix, QVector};
use crate::geometry::rational::{self, Rational};
use crate::surface::{NegativeCurve, SurfaceFlag, SurfaceModel};
use crate::threefold::{EffGenerator, MoriChamber, ThreefoldData, ThreefoldModel, Trilinear};
use crate::Error;

/// Model name plus `key=value` parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModelRecipe {
    pub name: String,
    pub parameters: BTreeMap<String, String>,
}

impl ModelRecipe {
    pub fn new(name: &str) -> Self {
        ModelRecipe {
            name: name.to_string(),
            parameters: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    fn check_known(&self, known: &[&str]) -> Result<(), Error> {
        match self.parameters.keys().find(|k| !known.contains(&k.as_str())) {
            Some(k) => Err(Error::InvalidParameter(format!(
                "model {} has no parameter {k:?} (known: {})",
                self.name,
                known.join(", ")
            ))),
            None => Ok(()),
        }
    }

    fn int(&self, key: &str, default: i64, min: i64) -> Result<i64, Error> {
        let v = match self.parameters.get(key) {
            None => return Ok(default),
            Some(s) => rational::parse(s)?,
        };
        if !v.is_integer() {
            return Err(Error::InvalidParameter(format!("{key} must be an integer")));
        }
        let n: i64 = v
            .to_integer()
            .try_into()
            .map_err(|_| Error::InvalidParameter(format!("{key} is out of range")))?;
        if n < min {
            return Err(Error::InvalidParameter(format!("{key} must be at least {min}")));
        }
        Ok(n)
    }

    fn text<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.parameters.get(key).map(String::as_str).unwrap_or(default)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum BuiltinModel {
    Surface { model: SurfaceModel, flag: SurfaceFlag },
    Threefold(ThreefoldModel),
}

pub const MODEL_NAMES: &[&str] = &[
    "p2",
    "blowup-p2",
    "ruled",
    "blowup-p3-2pts",
    "hypersurface-p2xp2",
    "hypersurface-p1xp3",
];

pub fn builtin_model(recipe: &ModelRecipe) -> Result<BuiltinModel, Error> {
    match recipe.name.as_str() {
        "p2" => {
            recipe.check_known(&["degree"])?;
            let d = recipe.int("degree", 1, 1)?;
            Ok(BuiltinModel::Surface {
                model: projective_plane(),
                flag: SurfaceFlag::new(QVector::from_ints(&[d]), rational::int(d * d)),
            })
        }
        "blowup-p2" => {
            recipe.check_known(&["flag", "point-on-e"])?;
            let on_e = recipe.int("point-on-e", 0, 0)?;
            let flag = match recipe.text("flag", "E") {
                "E" => SurfaceFlag::new(QVector::from_ints(&[0, 1]), rational::int(-1)),
                "H-E" => {
                    let f = SurfaceFlag::new(QVector::from_ints(&[1, -1]), rational::int(0));
                    if on_e > 0 {
                        f.with_point("E", 1)
                    } else {
                        f
                    }
                }
                "H" => SurfaceFlag::new(QVector::from_ints(&[1, 0]), rational::int(1)),
                other => return Err(Error::InvalidParameter(format!("flag must be E, H-E or H, got {other:?}"))),
            };
            Ok(BuiltinModel::Surface {
                model: blowup_p2(),
                flag,
            })
        }
        "ruled" => {
            recipe.check_known(&["gamma", "s1", "s2"])?;
            let gamma = recipe.int("gamma", 0, 0)?;
            let (s1, s2) = (recipe.int("s1", 1, 0)?, recipe.int("s2", 1, 0)?);
            let model = ruled_surface(gamma)?;
            Ok(BuiltinModel::Surface {
                flag: ruled_flag(gamma, s1, s2)?,
                model,
            })
        }
        "blowup-p3-2pts" => {
            recipe.check_known(&["d"])?;
            Ok(BuiltinModel::Threefold(blowup_p3_two_points(recipe.int("d", 1, 1)?)?))
        }
        "hypersurface-p2xp2" => {
            recipe.check_known(&["a", "b"])?;
            Ok(BuiltinModel::Threefold(hypersurface_p2xp2(
                recipe.int("a", 1, 1)?,
                recipe.int("b", 1, 1)?,
            )?))
        }
        "hypersurface-p1xp3" => {
            recipe.check_known(&["d", "e", "gamma", "s1", "s2", "surface"])?;
            let options = P1xP3Options {
                gamma: recipe.int("gamma", 0, 0)?,
                s1: recipe.int("s1", 1, 0)?,
                s2: recipe.int("s2", 1, 0)?,
                surface: match recipe.text("surface", "h2") {
                    "h1" => FlagSurface::H1,
                    "h2" => FlagSurface::H2,
                    other => return Err(Error::InvalidParameter(format!("surface must be h1 or h2, got {other:?}"))),
                },
            };
            Ok(BuiltinModel::Threefold(hypersurface_p1xp3(
                recipe.int("d", 1, 1)?,
                recipe.int("e", 2, 1)?,
                &options,
            )?))
        }
        other => Err(Error::UnknownModel(other.to_string())),
    }
}

fn labels(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn v(xs: &[i64]) -> QVector {
    QVector::from_ints(xs)
}

fn cone(dim: usize, gens: &[&[i64]]) -> PolyhedralCone {
    PolyhedralCone::from_generators(dim, gens.iter().map(|g| v(g)).collect()).expect("valid cone")
}

fn zero_shift() -> (Rational, Rational) {
    (Rational::zero(), Rational::zero())
}

/// `P^2` with basis `L`, `L^2 = 1`.
pub fn projective_plane() -> SurfaceModel {
    SurfaceModel::new(
        labels(&["L"]),
        QMatrix::from_ints(&[&[1]]),
        Vec::new(),
        cone(1, &[&[1]]),
        cone(1, &[&[1]]),
    )
    .expect("P^2 model")
}

/// Blow-up of `P^2` at a point, basis `(H, E)` with `H^2 = 1`, `E^2 = -1`.
pub fn blowup_p2() -> SurfaceModel {
    SurfaceModel::new(
        labels(&["H", "E"]),
        QMatrix::from_ints(&[&[1, 0], &[0, -1]]),
        vec![NegativeCurve {
            label: "E".into(),
            class: v(&[0, 1]),
        }],
        cone(2, &[&[0, 1], &[1, -1]]),
        cone(2, &[&[1, 0], &[1, -1]]),
    )
    .expect("Bl_p P^2 model")
}

/// Ruled surface with a section `C0`, `C0^2 = gamma >= 0`, fibre `F`.
/// The effective and nef cones coincide and are spanned by the two
/// isotropic classes `F` and `2 C0 - gamma F`; this is taken as given.
pub fn ruled_surface(gamma: i64) -> Result<SurfaceModel, Error> {
    if gamma < 0 {
        return Err(Error::InvalidParameter("C0^2 must be non-negative".into()));
    }
    let c = cone(2, &[&[0, 1], &[2, -gamma]]);
    SurfaceModel::new(
        labels(&["C0", "F"]),
        QMatrix::from_ints(&[&[gamma, 1], &[1, 0]]),
        Vec::new(),
        c.clone(),
        c,
    )
}

/// Curve `s1 C0 + s2 F` with `C^2 = s1^2 gamma + 2 s1 s2`.
pub fn ruled_flag(gamma: i64, s1: i64, s2: i64) -> Result<SurfaceFlag, Error> {
    if s1 < 0 || s2 < 0 || s1 + s2 == 0 {
        return Err(Error::InvalidParameter("flag curve s1 C0 + s2 F needs s1, s2 >= 0, not both 0".into()));
    }
    Ok(SurfaceFlag::new(v(&[s1, s2]), rational::int(s1 * s1 * gamma + 2 * s1 * s2)))
}

fn chamber(
    name: &str,
    c: PolyhedralCone,
    p: QMatrix,
    identity_sqm: bool,
    flag_disjoint: bool,
    shifts: &[&str],
) -> MoriChamber {
    let n = QMatrix::identity(p.nrows()).add(&p.mul(&QMatrix::diagonal(&vec![rational::int(-1); p.ncols()])));
    MoriChamber {
        name: name.to_string(),
        cone: c,
        p_map: p,
        n_map: n,
        identity_sqm,
        flag_disjoint,
        n_generator_shifts: shifts.iter().map(|s| (s.to_string(), zero_shift())).collect(),
    }
}

/// Blow-up of `P^3` at two points, basis `(phiH, E1, E2)`, flag
/// `X > E1 > C > {x}` with `C` a plane curve of degree `d` in `E1 = P^2`.
///
/// Effective cone `<E1, E2, H12>` with `H12 = phiH - E1 - E2` (the strict
/// transform of a plane through both points). Chambers:
/// `c1 = <phiH, E1, E2>` (contract both), `c2 = <phiH, H1, E2>` (contract
/// `E2`), `c2m = <phiH, H2, E1>` (contract `E1`), `nef = <phiH, H1, H2>` and
/// the flopped chamber `flip = <H1, H2, H12>`, where `Hi = phiH - Ei`. The
/// flop of the line through both points meets `E1`, so `flip` is not
/// admissible for this flag. `E1` and `E2` are disjoint, so all shifts
/// vanish.
///
/// `E1|E1 = -L` and `phiH|E1 = E2|E1 = 0`; `(phiH)^3 = 1`, `Ei^3 = (-L)^2 = 1`,
/// mixed products vanish.
pub fn blowup_p3_two_points(d: i64) -> Result<ThreefoldModel, Error> {
    if d < 1 {
        return Err(Error::InvalidParameter("curve degree d must be at least 1".into()));
    }
    let diag = |xs: &[i64]| QMatrix::diagonal(&xs.iter().map(|&x| rational::int(x)).collect::<Vec<_>>());
    let chambers = vec![
        chamber("c1", cone(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), diag(&[1, 0, 0]), true, false, &["E1", "E2"]),
        chamber("c2", cone(3, &[&[1, 0, 0], &[1, -1, 0], &[0, 0, 1]]), diag(&[1, 1, 0]), true, false, &["E2"]),
        chamber("c2m", cone(3, &[&[1, 0, 0], &[1, 0, -1], &[0, 1, 0]]), diag(&[1, 0, 1]), true, false, &["E1"]),
        chamber("flip", cone(3, &[&[1, -1, 0], &[1, 0, -1], &[1, -1, -1]]), diag(&[1, 1, 1]), false, false, &[]),
        chamber("nef", cone(3, &[&[1, 0, 0], &[1, -1, 0], &[1, 0, -1]]), diag(&[1, 1, 1]), true, false, &[]),
    ];
    let trilinear = Trilinear::new(3)
        .with(0, 0, 0, rational::int(1))
        .with(1, 1, 1, rational::int(1))
        .with(2, 2, 2, rational::int(1));
    ThreefoldModel::new(ThreefoldData {
        basis_labels: labels(&["phiH", "E1", "E2"]),
        eff_generators: vec![
            EffGenerator { label: "E1".into(), class: v(&[0, 1, 0]) },
            EffGenerator { label: "E2".into(), class: v(&[0, 0, 1]) },
            EffGenerator { label: "H12".into(), class: v(&[1, -1, -1]) },
        ],
        chambers,
        flag_surface_label: "E1".into(),
        flag_surface_class: v(&[0, 1, 0]),
        restriction_map: QMatrix::from_ints(&[&[0, -1, 0]]),
        surface: projective_plane(),
        surface_flag: SurfaceFlag::new(v(&[d]), rational::int(d * d)),
        trilinear_form: Some(trilinear),
    })
}

/// Hypersurface `X` of bidegree `(a, b)` in `P^2 x P^2`, basis `(H1, H2)`.
///
/// `H1^2 H2 = H1^2 H2 (a H1 + b H2) = b` and `H1 H2^2 = a` in the ambient
/// ring, `H1^3 = H2^3 = 0`. Flag surface `S` in `|H1|` with `H1|S = h1`,
/// `H2|S = h2`, so `h1^2 = 0`, `h1 h2 = b`, `h2^2 = a`. The cones of `S` are
/// taken to be the restrictions of those of `X`. Flag curve `h2`.
pub fn hypersurface_p2xp2(a: i64, b: i64) -> Result<ThreefoldModel, Error> {
    if a < 1 || b < 1 {
        return Err(Error::InvalidParameter("bidegree (a, b) needs a, b >= 1".into()));
    }
    let quadrant = cone(2, &[&[1, 0], &[0, 1]]);
    let surface = SurfaceModel::new(
        labels(&["h1", "h2"]),
        QMatrix::from_ints(&[&[0, b], &[b, a]]),
        Vec::new(),
        quadrant.clone(),
        quadrant.clone(),
    )?;
    ThreefoldModel::new(ThreefoldData {
        basis_labels: labels(&["H1", "H2"]),
        eff_generators: vec![
            EffGenerator { label: "H1".into(), class: v(&[1, 0]) },
            EffGenerator { label: "H2".into(), class: v(&[0, 1]) },
        ],
        chambers: vec![chamber("nef", quadrant, QMatrix::identity(2), true, false, &[])],
        flag_surface_label: "H1".into(),
        flag_surface_class: v(&[1, 0]),
        restriction_map: QMatrix::identity(2),
        surface,
        surface_flag: SurfaceFlag::new(v(&[0, 1]), rational::int(a)),
        trilinear_form: Some(
            Trilinear::new(2)
                .with(0, 0, 1, rational::int(b))
                .with(0, 1, 1, rational::int(a)),
        ),
    })
}

/// Which divisor class carries the flag surface in the `d = 2` case.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlagSurface {
    H1,
    H2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P1xP3Options {
    pub gamma: i64,
    pub s1: i64,
    pub s2: i64,
    pub surface: FlagSurface,
}

impl Default for P1xP3Options {
    fn default() -> Self {
        P1xP3Options {
            gamma: 0,
            s1: 1,
            s2: 1,
            surface: FlagSurface::H2,
        }
    }
}

/// General hypersurface `X` of bidegree `(d, e)` in `P^1 x P^3`, basis
/// `(H1, H2)`. In the ambient ring `H1^2 = 0` and `H1 H2^3 = 1`, so
/// `H2^3 = d` and `H1 H2^2 = e` on `X`.
///
/// * `d = 3` or `e = 1`: one chamber, effective = nef = `<H1, H2>`; flag
///   surface in `|H2|` with form `[[0, e], [e, d]]`, flag curve `h2`.
/// * `d = 1`, `e >= 2`: `X` is the blow-up of `P^3` along
///   `C0' = (f0 = f1 = 0)` with exceptional divisor `E = e H2 - H1`.
///   Chambers `c1 = <E, H2>` and `c2 = <H1, H2>`. The flag surface is
///   `E = P^1 x C0'`, a ruled surface with `H1|E = C0`, `H2|E = e^2 F`; the
///   product structure forces `C0^2 = 0`, so the trilinear form is only
///   attached when `gamma = 0`.
/// * `d = 2`, `e >= 2`: effective = movable = `<H1, e H2 - H1>`, chambers
///   `nef = <H1, H2>` and the flopped `flip = <H2, e H2 - H1>`. With the
///   flag surface in `|H2|` (chosen off the flopped curves) both chambers
///   are usable; with it in `|H1|` the flopped chamber is not.
pub fn hypersurface_p1xp3(d: i64, e: i64, options: &P1xP3Options) -> Result<ThreefoldModel, Error> {
    if !(1..=3).contains(&d) || e < 1 {
        return Err(Error::InvalidParameter("bidegree (d, e) needs 1 <= d <= 3 and e >= 1".into()));
    }
    let trilinear = Trilinear::new(2)
        .with(1, 1, 1, rational::int(d))
        .with(0, 1, 1, rational::int(e));
    let basis = labels(&["H1", "H2"]);
    let quadrant = cone(2, &[&[1, 0], &[0, 1]]);
    if d == 3 || e == 1 {
        let surface = SurfaceModel::new(
            labels(&["h1", "h2"]),
            QMatrix::from_ints(&[&[0, e], &[e, d]]),
            Vec::new(),
            quadrant.clone(),
            quadrant.clone(),
        )?;
        return ThreefoldModel::new(ThreefoldData {
            basis_labels: basis,
            eff_generators: vec![
                EffGenerator { label: "H1".into(), class: v(&[1, 0]) },
                EffGenerator { label: "H2".into(), class: v(&[0, 1]) },
            ],
            chambers: vec![chamber("nef", quadrant, QMatrix::identity(2), true, false, &[])],
            flag_surface_label: "H2".into(),
            flag_surface_class: v(&[0, 1]),
            restriction_map: QMatrix::identity(2),
            surface,
            surface_flag: SurfaceFlag::new(v(&[0, 1]), rational::int(d)),
            trilinear_form: Some(trilinear),
        });
    }
    if d == 1 {
        // D = x E + y H2 on c1 has P = y H2 = (h2 + e h1) H2
        let c1 = MoriChamber {
            name: "c1".into(),
            cone: cone(2, &[&[-1, e], &[0, 1]]),
            p_map: QMatrix::from_ints(&[&[0, 0], &[e, 1]]),
            n_map: QMatrix::from_ints(&[&[1, 0], &[-e, 0]]),
            identity_sqm: true,
            flag_disjoint: false,
            n_generator_shifts: [("E".to_string(), zero_shift())].into_iter().collect(),
        };
        let c2 = chamber("c2", quadrant, QMatrix::identity(2), true, false, &[]);
        return ThreefoldModel::new(ThreefoldData {
            basis_labels: basis,
            eff_generators: vec![
                EffGenerator { label: "H1".into(), class: v(&[1, 0]) },
                EffGenerator { label: "E".into(), class: v(&[-1, e]) },
            ],
            chambers: vec![c1, c2],
            flag_surface_label: "E".into(),
            flag_surface_class: v(&[-1, e]),
            restriction_map: QMatrix::from_ints(&[&[1, 0], &[0, e * e]]),
            surface: ruled_surface(options.gamma)?,
            surface_flag: ruled_flag(options.gamma, options.s1, options.s2)?,
            trilinear_form: if options.gamma == 0 { Some(trilinear) } else { None },
        });
    }
    // d = 2
    let flip_disjoint = options.surface == FlagSurface::H2;
    let chambers = vec![
        chamber("flip", cone(2, &[&[0, 1], &[-1, e]]), QMatrix::identity(2), false, flip_disjoint, &[]),
        chamber("nef", quadrant, QMatrix::identity(2), true, false, &[]),
    ];
    let eff_generators = vec![
        EffGenerator { label: "H1".into(), class: v(&[1, 0]) },
        EffGenerator { label: "G".into(), class: v(&[-1, e]) },
    ];
    let (label, class, restriction, surface, flag) = match options.surface {
        FlagSurface::H2 => {
            let c = cone(2, &[&[1, 0], &[-1, e]]);
            (
                "H2",
                v(&[0, 1]),
                QMatrix::identity(2),
                SurfaceModel::new(labels(&["h1", "h2"]), QMatrix::from_ints(&[&[0, e], &[e, 2]]), Vec::new(), c.clone(), c)?,
                SurfaceFlag::new(v(&[0, 1]), rational::int(2)),
            )
        }
        FlagSurface::H1 => (
            "H1",
            v(&[1, 0]),
            QMatrix::from_ints(&[&[0, 1]]),
            SurfaceModel::new(labels(&["h"]), QMatrix::from_ints(&[&[e]]), Vec::new(), cone(1, &[&[1]]), cone(1, &[&[1]]))?,
            SurfaceFlag::new(v(&[1]), rational::int(e)),
        ),
    };
    ThreefoldModel::new(ThreefoldData {
        basis_labels: basis,
        eff_generators,
        chambers,
        flag_surface_label: label.into(),
        flag_surface_class: class,
        restriction_map: restriction,
        surface,
        surface_flag: flag,
        trilinear_form: Some(trilinear),
    })
}

/// Names of the threefold built-ins with a representative parameter set
/// for each case, used by audits and tests.
pub fn threefold_catalogue() -> Vec<(String, ThreefoldModel)> {
    let mut out = Vec::new();
    for d in [1, 2] {
        out.push((format!("blowup-p3-2pts d={d}"), blowup_p3_two_points(d).expect("model")));
    }
    out.push(("hypersurface-p2xp2 a=1 b=2".into(), hypersurface_p2xp2(1, 2).expect("model")));
    out.push((
        "hypersurface-p1xp3 d=3 e=2".into(),
        hypersurface_p1xp3(3, 2, &P1xP3Options::default()).expect("model"),
    ));
    out.push((
        "hypersurface-p1xp3 d=1 e=2".into(),
        hypersurface_p1xp3(1, 2, &P1xP3Options::default()).expect("model"),
    ));
    out.push((
        "hypersurface-p1xp3 d=2 e=3".into(),
        hypersurface_p1xp3(2, 3, &P1xP3Options::default()).expect("model"),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rational::int;
    use crate::threefold::{chamber_of, okounkov_body};

    #[test]
    fn all_builtins_construct() {
        for name in MODEL_NAMES {
            builtin_model(&ModelRecipe::new(name)).unwrap();
        }
        assert_eq!(builtin_model(&ModelRecipe::new("nope")), Err(Error::UnknownModel("nope".into())));
        assert!(builtin_model(&ModelRecipe::new("blowup-p3-2pts").param("d", 0)).is_err());
        assert!(builtin_model(&ModelRecipe::new("blowup-p3-2pts").param("q", 1)).is_err());
        assert!(builtin_model(&ModelRecipe::new("hypersurface-p1xp3").param("gamma", -1)).is_err());
    }

    #[test]
    fn p2xp2_cones_are_the_quadrant() {
        let m = hypersurface_p2xp2(1, 2).unwrap();
        assert_eq!(m.eff_cone().generators(), &[v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(m.chambers().len(), 1);
    }

    #[test]
    fn p1xp3_case_two_chambers() {
        let m = hypersurface_p1xp3(1, 2, &P1xP3Options::default()).unwrap();
        let names: Vec<&str> = m.chambers().iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["c1", "c2"]);
        assert_eq!(m.chamber("c1").unwrap().cone.generators(), &[v(&[-1, 2]), v(&[0, 1])]);
        assert_eq!(chamber_of(&m, &v(&[1, 1])).unwrap().primary, "c2");
    }

    #[test]
    fn blowup_tetrahedron() {
        let m = blowup_p3_two_points(1).unwrap();
        let body = okounkov_body(&m, &v(&[1, 0, 0])).unwrap();
        assert_eq!(
            body.polytope.vertices(),
            &[v(&[0, 0, 0]), v(&[1, 0, 0]), v(&[1, 0, 1]), v(&[1, 1, 0])]
        );
        assert_eq!(body.polytope.volume() * int(6), int(1));
    }
}
