//! JSON model files: plain data mirroring the core model types.

use std::collections::BTreeMap;

use okounkov_core::geometry::rational;
use okounkov_core::models::BuiltinModel;
use okounkov_core::surface::{NegativeCurve, SurfaceFlag, SurfaceModel};
use okounkov_core::threefold::{EffGenerator, MoriChamber, ThreefoldData, ThreefoldModel, Trilinear};
use okounkov_core::{dual_description, Error, PolyhedralCone, QMatrix, QVector, Rational};
use serde::{Deserialize, Serialize};

/// A rational written either as an integer or as a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    fn value(&self) -> Result<Rational, Error> {
        match self {
            Num::Int(n) => Ok(rational::int(*n)),
            Num::Text(s) => rational::parse(s.trim()),
        }
    }

    fn from(q: &Rational) -> Num {
        Num::Text(rational::fmt(q))
    }
}

fn vector(xs: &[Num]) -> Result<QVector, Error> {
    xs.iter().map(Num::value).collect::<Result<Vec<_>, _>>().map(QVector)
}

fn vectors(rows: &[Vec<Num>]) -> Result<Vec<QVector>, Error> {
    rows.iter().map(|r| vector(r)).collect()
}

fn matrix(rows: &[Vec<Num>]) -> Result<QMatrix, Error> {
    QMatrix::from_rows(vectors(rows)?)
}

fn nums(v: &QVector) -> Vec<Num> {
    v.iter().map(Num::from).collect()
}

fn rows(m: &QMatrix) -> Vec<Vec<Num>> {
    m.row_vectors().iter().map(nums).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Surface,
    Threefold,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<Num>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<Vec<Num>>>,
    /// Names of the generators (threefold effective cones only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl ConeFile {
    fn build(&self, dim: usize, what: &str) -> Result<PolyhedralCone, Error> {
        let g = self.generators.as_deref().map(vectors).transpose()?;
        let f = self.facets.as_deref().map(vectors).transpose()?;
        if g.is_none() && f.is_none() {
            return Err(Error::Parse(format!("{what} needs generators or facets")));
        }
        dual_description(&PolyhedralCone::raw(dim, g, f)?)
    }

    fn from_generators(c: &PolyhedralCone) -> ConeFile {
        ConeFile {
            generators: Some(c.generators().iter().map(nums).collect()),
            facets: None,
            labels: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    pub label: String,
    pub class: Vec<Num>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChamberFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<Num>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<Vec<Num>>>,
    pub p_map: Vec<Vec<Num>>,
    pub n_map: Vec<Vec<Num>>,
    pub identity_sqm: bool,
    #[serde(default)]
    pub flag_disjoint: bool,
    #[serde(default)]
    pub n_generator_shifts: BTreeMap<String, [Num; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrilinearEntry {
    pub index: [usize; 3],
    pub value: Num,
}

/// Numerical data of a surface (the flag surface of a threefold, or the
/// model itself).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceFile {
    pub basis: Vec<String>,
    pub intersection_form: Vec<Vec<Num>>,
    pub eff_cone: ConeFile,
    pub nef_cone: ConeFile,
    #[serde(default)]
    pub negative_curves: Vec<CurveFile>,
}

impl SurfaceFile {
    fn build(&self) -> Result<SurfaceModel, Error> {
        let r = self.basis.len();
        let curves = self
            .negative_curves
            .iter()
            .map(|c| {
                Ok(NegativeCurve {
                    label: c.label.clone(),
                    class: vector(&c.class)?,
                })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        SurfaceModel::new(
            self.basis.clone(),
            matrix(&self.intersection_form)?,
            curves,
            self.eff_cone.build(r, "eff_cone")?,
            self.nef_cone.build(r, "nef_cone")?,
        )
    }

    fn from_model(m: &SurfaceModel) -> SurfaceFile {
        SurfaceFile {
            basis: m.basis_labels().to_vec(),
            intersection_form: rows(m.intersection_form()),
            eff_cone: ConeFile::from_generators(m.eff_cone()),
            nef_cone: ConeFile::from_generators(m.nef_cone()),
            negative_curves: m
                .negative_curves()
                .iter()
                .map(|c| CurveFile {
                    label: c.label.clone(),
                    class: nums(&c.class),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface_label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface_class: Option<Vec<Num>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restriction_map: Option<Vec<Vec<Num>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceFile>,
    pub curve_class: Vec<Num>,
    pub curve_selfint: Num,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub point_data: BTreeMap<String, u64>,
}

impl FlagFile {
    fn curve_flag(&self) -> Result<SurfaceFlag, Error> {
        let mut f = SurfaceFlag::new(vector(&self.curve_class)?, self.curve_selfint.value()?);
        for (label, &m) in &self.point_data {
            f = f.with_point(label, m);
        }
        Ok(f)
    }

    fn from_curve_flag(flag: &SurfaceFlag) -> FlagFile {
        FlagFile {
            surface_label: None,
            surface_class: None,
            restriction_map: None,
            surface: None,
            curve_class: nums(&flag.curve_class),
            curve_selfint: Num::from(&flag.curve_selfint),
            point_data: flag.point_data.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub kind: ModelKind,
    pub basis: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intersection_form: Option<Vec<Vec<Num>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trilinear_form: Option<Vec<TrilinearEntry>>,
    pub eff_cone: ConeFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nef_cone: Option<ConeFile>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub negative_curves: Vec<CurveFile>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chambers: Vec<ChamberFile>,
    pub flag: FlagFile,
}

fn missing(what: &str) -> Error {
    Error::Parse(format!("threefold model file needs {what}"))
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<ModelFile, Error> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("model file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model file serializes")
    }

    pub fn build(&self) -> Result<BuiltinModel, Error> {
        match self.kind {
            ModelKind::Surface => {
                let surface = SurfaceFile {
                    basis: self.basis.clone(),
                    intersection_form: self
                        .intersection_form
                        .clone()
                        .ok_or_else(|| Error::Parse("surface model file needs intersection_form".into()))?,
                    eff_cone: self.eff_cone.clone(),
                    nef_cone: self
                        .nef_cone
                        .clone()
                        .ok_or_else(|| Error::Parse("surface model file needs nef_cone".into()))?,
                    negative_curves: self.negative_curves.clone(),
                };
                let model = surface.build()?;
                let flag = self.flag.curve_flag()?;
                flag.validate(&model)?;
                Ok(BuiltinModel::Surface { model, flag })
            }
            ModelKind::Threefold => self.build_threefold().map(BuiltinModel::Threefold),
        }
    }

    fn build_threefold(&self) -> Result<ThreefoldModel, Error> {
        let r = self.basis.len();
        let gens = vectors(self.eff_cone.generators.as_deref().ok_or_else(|| missing("eff_cone.generators"))?)?;
        let labels = self.eff_cone.labels.as_ref().ok_or_else(|| missing("eff_cone.labels"))?;
        if labels.len() != gens.len() {
            return Err(Error::Parse("eff_cone.labels and eff_cone.generators differ in length".into()));
        }
        // facets given alongside the generators must describe the same cone
        self.eff_cone.build(r, "eff_cone")?;
        let eff_generators = labels
            .iter()
            .zip(gens)
            .map(|(label, class)| EffGenerator {
                label: label.clone(),
                class,
            })
            .collect();
        let chambers = self
            .chambers
            .iter()
            .map(|c| {
                let cone = ConeFile {
                    generators: c.generators.clone(),
                    facets: c.facets.clone(),
                    labels: None,
                }
                .build(r, &format!("chamber {}", c.name))?;
                let shifts = c
                    .n_generator_shifts
                    .iter()
                    .map(|(k, [a, b])| Ok((k.clone(), (a.value()?, b.value()?))))
                    .collect::<Result<_, Error>>()?;
                Ok(MoriChamber {
                    name: c.name.clone(),
                    cone,
                    p_map: matrix(&c.p_map)?,
                    n_map: matrix(&c.n_map)?,
                    identity_sqm: c.identity_sqm,
                    flag_disjoint: c.flag_disjoint,
                    n_generator_shifts: shifts,
                })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let trilinear_form = match &self.trilinear_form {
            None => None,
            Some(entries) => {
                let mut t = Trilinear::new(r);
                for e in entries {
                    let [i, j, k] = e.index;
                    if i >= r || j >= r || k >= r {
                        return Err(Error::DimensionMismatch(format!("trilinear index {:?} out of range", e.index)));
                    }
                    t.set(i, j, k, e.value.value()?);
                }
                Some(t)
            }
        };
        let flag = &self.flag;
        ThreefoldModel::new(ThreefoldData {
            basis_labels: self.basis.clone(),
            eff_generators,
            chambers,
            flag_surface_label: flag.surface_label.clone().ok_or_else(|| missing("flag.surface_label"))?,
            flag_surface_class: vector(flag.surface_class.as_deref().ok_or_else(|| missing("flag.surface_class"))?)?,
            restriction_map: matrix(flag.restriction_map.as_deref().ok_or_else(|| missing("flag.restriction_map"))?)?,
            surface: flag.surface.as_ref().ok_or_else(|| missing("flag.surface"))?.build()?,
            surface_flag: flag.curve_flag()?,
            trilinear_form,
        })
    }

    pub fn from_model(model: &BuiltinModel) -> ModelFile {
        match model {
            BuiltinModel::Surface { model, flag } => {
                let s = SurfaceFile::from_model(model);
                ModelFile {
                    kind: ModelKind::Surface,
                    basis: s.basis,
                    intersection_form: Some(s.intersection_form),
                    trilinear_form: None,
                    eff_cone: s.eff_cone,
                    nef_cone: Some(s.nef_cone),
                    negative_curves: s.negative_curves,
                    chambers: Vec::new(),
                    flag: FlagFile::from_curve_flag(flag),
                }
            }
            BuiltinModel::Threefold(m) => {
                let data = m.to_data();
                let mut flag = FlagFile::from_curve_flag(&data.surface_flag);
                flag.surface_label = Some(data.flag_surface_label.clone());
                flag.surface_class = Some(nums(&data.flag_surface_class));
                flag.restriction_map = Some(rows(&data.restriction_map));
                flag.surface = Some(SurfaceFile::from_model(&data.surface));
                ModelFile {
                    kind: ModelKind::Threefold,
                    basis: data.basis_labels.clone(),
                    intersection_form: None,
                    trilinear_form: data.trilinear_form.as_ref().map(|t| {
                        t.entries()
                            .map(|(&(i, j, k), v)| TrilinearEntry {
                                index: [i, j, k],
                                value: Num::from(v),
                            })
                            .collect()
                    }),
                    eff_cone: ConeFile {
                        generators: Some(data.eff_generators.iter().map(|g| nums(&g.class)).collect()),
                        facets: None,
                        labels: Some(data.eff_generators.iter().map(|g| g.label.clone()).collect()),
                    },
                    nef_cone: None,
                    negative_curves: Vec::new(),
                    chambers: data
                        .chambers
                        .iter()
                        .map(|c| ChamberFile {
                            name: c.name.clone(),
                            generators: Some(c.cone.generators().iter().map(nums).collect()),
                            facets: None,
                            p_map: rows(&c.p_map),
                            n_map: rows(&c.n_map),
                            identity_sqm: c.identity_sqm,
                            flag_disjoint: c.flag_disjoint,
                            n_generator_shifts: c
                                .n_generator_shifts
                                .iter()
                                .map(|(k, (a, b))| (k.clone(), [Num::from(a), Num::from(b)]))
                                .collect(),
                        })
                        .collect(),
                    flag,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use okounkov_core::models::{builtin_model, ModelRecipe, MODEL_NAMES};

    #[test]
    fn builtins_round_trip() {
        for name in MODEL_NAMES {
            let model = builtin_model(&ModelRecipe::new(name)).unwrap();
            let text = ModelFile::from_model(&model).to_json();
            let back = ModelFile::parse(&text).unwrap().build().unwrap();
            assert_eq!(back, model, "{name}");
        }
    }

    #[test]
    fn integers_and_fractions_both_parse() {
        assert_eq!(Num::Int(3).value().unwrap(), rational::int(3));
        assert_eq!(Num::Text("-1/2".into()).value().unwrap(), rational::frac(-1, 2));
        assert!(Num::Text("x".into()).value().is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let e = ModelFile::parse(r#"{"kind":"surface","basis":["L"],"bogus":1}"#).unwrap_err();
        assert!(matches!(e, Error::Parse(_)));
    }
}
