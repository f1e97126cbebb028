use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use crate::geometry::cone::PolyhedralCone;
use crate::geometry::linalg::{QMatrix, QVector};
use crate::geometry::rational::{self, Rational};
use crate::surface::{SurfaceFlag, SurfaceModel};
use crate::Error;

/// Labelled extremal effective class; negative parts are expressed in
/// these.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EffGenerator {
    pub label: String,
    pub class: QVector,
}

/// A Mori chamber with its linear positive/negative-part maps.
///
/// `n_generator_shifts` lists the effective generators that may occur in the
/// negative part on this chamber, each with the valuation shift in
/// `(x2, x3)` contributed per unit of that generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoriChamber {
    pub name: String,
    pub cone: PolyhedralCone,
    pub p_map: QMatrix,
    pub n_map: QMatrix,
    pub identity_sqm: bool,
    pub flag_disjoint: bool,
    pub n_generator_shifts: BTreeMap<String, (Rational, Rational)>,
}

impl MoriChamber {
    /// The slice formula may be applied on this chamber.
    pub fn admissible(&self) -> bool {
        self.identity_sqm || self.flag_disjoint
    }

    pub fn positive(&self, d: &QVector) -> QVector {
        self.p_map.mul_vec(d)
    }

    pub fn negative(&self, d: &QVector) -> QVector {
        self.n_map.mul_vec(d)
    }
}

/// Symmetric trilinear intersection form, stored on sorted index triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trilinear {
    dim: usize,
    values: BTreeMap<(usize, usize, usize), Rational>,
}

fn sorted3(i: usize, j: usize, k: usize) -> (usize, usize, usize) {
    let mut v = [i, j, k];
    v.sort_unstable();
    (v[0], v[1], v[2])
}

impl Trilinear {
    pub fn new(dim: usize) -> Self {
        Trilinear {
            dim,
            values: BTreeMap::new(),
        }
    }

    pub fn with(mut self, i: usize, j: usize, k: usize, value: Rational) -> Self {
        self.set(i, j, k, value);
        self
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Rational) {
        let key = sorted3(i, j, k);
        if value.is_zero() {
            self.values.remove(&key);
        } else {
            self.values.insert(key, value);
        }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Rational {
        self.values.get(&sorted3(i, j, k)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Nonzero entries on sorted index triples.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &Rational)> {
        self.values.iter()
    }

    pub fn eval(&self, a: &QVector, b: &QVector, c: &QVector) -> Rational {
        let mut s = Rational::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let v = self.get(i, j, k);
                    if !v.is_zero() {
                        s += v * &a[i] * &b[j] * &c[k];
                    }
                }
            }
        }
        s
    }

    pub fn cube(&self, d: &QVector) -> Rational {
        self.eval(d, d, d)
    }
}

/// Numerical data of a Mori dream threefold with a flag
/// `X > S > C > {x}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreefoldModel {
    pub(crate) basis_labels: Vec<String>,
    pub(crate) eff_generators: Vec<EffGenerator>,
    pub(crate) eff_cone: PolyhedralCone,
    pub(crate) chambers: Vec<MoriChamber>,
    pub(crate) flag_surface_label: String,
    pub(crate) flag_surface_class: QVector,
    pub(crate) restriction_map: QMatrix,
    pub(crate) surface: SurfaceModel,
    pub(crate) surface_flag: SurfaceFlag,
    pub(crate) trilinear_form: Option<Trilinear>,
}

/// Everything needed to build a [`ThreefoldModel`].
#[derive(Clone, Debug)]
pub struct ThreefoldData {
    pub basis_labels: Vec<String>,
    pub eff_generators: Vec<EffGenerator>,
    pub chambers: Vec<MoriChamber>,
    pub flag_surface_label: String,
    pub flag_surface_class: QVector,
    pub restriction_map: QMatrix,
    pub surface: SurfaceModel,
    pub surface_flag: SurfaceFlag,
    pub trilinear_form: Option<Trilinear>,
}

impl ThreefoldModel {
    /// Builds and audits a model.
    pub fn new(data: ThreefoldData) -> Result<Self, Error> {
        let r = data.basis_labels.len();
        let bad = |msg: String| Err(Error::ModelInconsistent(msg));
        if r == 0 || r > crate::geometry::cone::MAX_CONE_DIM {
            return Err(Error::DimensionMismatch(format!("Picard rank {r} not supported")));
        }
        let mut labels = BTreeSet::new();
        for g in &data.eff_generators {
            if g.class.dim() != r {
                return Err(Error::DimensionMismatch(format!("generator {} has the wrong dimension", g.label)));
            }
            if !labels.insert(g.label.clone()) {
                return bad(format!("duplicate generator label {}", g.label));
            }
        }
        let eff_cone =
            PolyhedralCone::from_generators(r, data.eff_generators.iter().map(|g| g.class.clone()).collect())?;
        if data.flag_surface_class.dim() != r {
            return Err(Error::DimensionMismatch("flag surface class has the wrong dimension".into()));
        }
        if let Some(g) = data.eff_generators.iter().find(|g| g.label == data.flag_surface_label) {
            if g.class != data.flag_surface_class {
                return bad(format!("flag surface {} disagrees with its generator class", g.label));
            }
        }
        if !eff_cone.contains(&data.flag_surface_class) {
            return bad("flag surface class is not effective".into());
        }
        if data.restriction_map.nrows() != data.surface.rank() || data.restriction_map.ncols() != r {
            return Err(Error::DimensionMismatch(format!(
                "restriction map must be {}x{r}",
                data.surface.rank()
            )));
        }
        data.surface_flag.validate(&data.surface)?;
        if let Some(t) = &data.trilinear_form {
            if t.dim() != r {
                return Err(Error::DimensionMismatch("trilinear form has the wrong dimension".into()));
            }
        }
        if data.chambers.is_empty() {
            return bad("no Mori chambers".into());
        }
        let mut names = BTreeSet::new();
        for ch in &data.chambers {
            if !names.insert(ch.name.clone()) {
                return bad(format!("duplicate chamber name {}", ch.name));
            }
        }
        let model = ThreefoldModel {
            basis_labels: data.basis_labels,
            eff_generators: data.eff_generators,
            eff_cone,
            chambers: data
                .chambers
                .into_iter()
                .map(|mut ch| {
                    ch.cone = crate::geometry::cone::dual_description(&ch.cone)?;
                    Ok(ch)
                })
                .collect::<Result<Vec<_>, Error>>()?,
            flag_surface_label: data.flag_surface_label,
            flag_surface_class: data.flag_surface_class,
            restriction_map: data.restriction_map,
            surface: data.surface,
            surface_flag: data.surface_flag,
            trilinear_form: data.trilinear_form,
        };
        model.audit()?;
        Ok(model)
    }

    pub fn rank(&self) -> usize {
        self.basis_labels.len()
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    pub fn eff_generators(&self) -> &[EffGenerator] {
        &self.eff_generators
    }

    pub fn eff_cone(&self) -> &PolyhedralCone {
        &self.eff_cone
    }

    pub fn chambers(&self) -> &[MoriChamber] {
        &self.chambers
    }

    pub fn chamber(&self, name: &str) -> Option<&MoriChamber> {
        self.chambers.iter().find(|c| c.name == name)
    }

    pub fn flag_surface_label(&self) -> &str {
        &self.flag_surface_label
    }

    pub fn flag_surface_class(&self) -> &QVector {
        &self.flag_surface_class
    }

    pub fn restriction_map(&self) -> &QMatrix {
        &self.restriction_map
    }

    pub fn surface(&self) -> &SurfaceModel {
        &self.surface
    }

    pub fn surface_flag(&self) -> &SurfaceFlag {
        &self.surface_flag
    }

    pub fn trilinear_form(&self) -> Option<&Trilinear> {
        self.trilinear_form.as_ref()
    }

    pub fn generator(&self, label: &str) -> Option<&EffGenerator> {
        self.eff_generators.iter().find(|g| g.label == label)
    }

    pub fn is_big(&self, d: &QVector) -> bool {
        self.eff_cone.interior_contains(d)
    }

    pub fn to_data(&self) -> ThreefoldData {
        ThreefoldData {
            basis_labels: self.basis_labels.clone(),
            eff_generators: self.eff_generators.clone(),
            chambers: self.chambers.clone(),
            flag_surface_label: self.flag_surface_label.clone(),
            flag_surface_class: self.flag_surface_class.clone(),
            restriction_map: self.restriction_map.clone(),
            surface: self.surface.clone(),
            surface_flag: self.surface_flag.clone(),
            trilinear_form: self.trilinear_form.clone(),
        }
    }

    pub(crate) fn check_dim(&self, d: &QVector) -> Result<(), Error> {
        if d.dim() != self.rank() {
            return Err(Error::DimensionMismatch(format!(
                "divisor of dimension {} on a model of Picard rank {}",
                d.dim(),
                self.rank()
            )));
        }
        Ok(())
    }

    /// Coordinates of a negative part in the chamber's generator list.
    pub(crate) fn negative_coordinates(
        &self,
        chamber: &MoriChamber,
        n: &QVector,
    ) -> Result<BTreeMap<String, Rational>, Error> {
        if chamber.n_generator_shifts.is_empty() {
            if n.is_zero() {
                return Ok(BTreeMap::new());
            }
            return Err(Error::ModelInconsistent(format!(
                "chamber {} has a nonzero negative part ({n}) but no negative generators",
                chamber.name
            )));
        }
        let gens: Vec<(&String, &QVector)> = chamber
            .n_generator_shifts
            .keys()
            .map(|l| {
                self.generator(l)
                    .map(|g| (l, &g.class))
                    .ok_or_else(|| Error::ModelInconsistent(format!("chamber {} names unknown generator {l}", chamber.name)))
            })
            .collect::<Result<_, _>>()?;
        let m = QMatrix::from_columns(&gens.iter().map(|(_, c)| (*c).clone()).collect::<Vec<_>>())?;
        let x = m.solve_unique(n).ok_or_else(|| {
            Error::ModelInconsistent(format!(
                "negative part ({n}) is not a unique combination of the negative generators of chamber {}",
                chamber.name
            ))
        })?;
        Ok(gens.into_iter().map(|(l, _)| l.clone()).zip(x.0).collect())
    }

    /// Structural audit: map identities, effective negative parts, chamber
    /// cones inside the effective cone, sample-point coverage and disjoint
    /// interiors, and nef restrictions on identity chambers.
    fn audit(&self) -> Result<(), Error> {
        let r = self.rank();
        let id = QMatrix::identity(r);
        for ch in &self.chambers {
            let name = &ch.name;
            if ch.cone.dim() != r
                || ch.p_map.nrows() != r
                || ch.p_map.ncols() != r
                || ch.n_map.nrows() != r
                || ch.n_map.ncols() != r
            {
                return Err(Error::DimensionMismatch(format!("chamber {name} has maps of the wrong size")));
            }
            if ch.p_map.add(&ch.n_map) != id {
                return Err(Error::ModelInconsistent(format!("chamber {name}: p_map + n_map is not the identity")));
            }
            for g in ch.cone.generators() {
                if !self.eff_cone.contains(g) {
                    return Err(Error::ModelInconsistent(format!(
                        "chamber {name}: generator ({g}) is not effective"
                    )));
                }
                let n = ch.negative(g);
                let coords = self.negative_coordinates(ch, &n)?;
                if let Some((l, _)) = coords.iter().find(|(_, a)| a.is_negative()) {
                    return Err(Error::ModelInconsistent(format!(
                        "n_map output not effective: model inconsistent (chamber {name}, generator {l})"
                    )));
                }
                let p = ch.positive(g);
                if !self.eff_cone.contains(&p) {
                    return Err(Error::ModelInconsistent(format!(
                        "chamber {name}: positive part ({p}) is not effective"
                    )));
                }
                if ch.identity_sqm {
                    let restricted = self.restriction_map.mul_vec(&p);
                    if !self.surface.nef_cone().contains(&restricted) {
                        return Err(Error::ModelInconsistent(format!(
                            "chamber {name}: restriction of ({p}) is not nef on the flag surface"
                        )));
                    }
                }
            }
        }
        // coverage on a grid of effective classes
        let gens: Vec<&QVector> = self.eff_generators.iter().map(|g| &g.class).collect();
        let k = gens.len();
        let mut counter = vec![0u32; k];
        loop {
            let mut d = QVector::zeros(r);
            for (c, g) in counter.iter().zip(&gens) {
                d = d.add_scaled(&rational::int(*c as i64), g);
            }
            if !self.chambers.iter().any(|ch| ch.cone.contains(&d)) {
                return Err(Error::ChamberDataIncomplete(format!("no chamber contains ({d})")));
            }
            let mut i = 0;
            while i < k && counter[i] == 2 {
                counter[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
            counter[i] += 1;
        }
        // an interior point of each full chamber lies in no other chamber's interior
        for ch in &self.chambers {
            let mut centre = QVector::zeros(r);
            for g in ch.cone.generators() {
                centre = &centre + g;
            }
            if !ch.cone.interior_contains(&centre) {
                continue;
            }
            if let Some(other) = self
                .chambers
                .iter()
                .find(|o| o.name != ch.name && o.cone.interior_contains(&centre))
            {
                return Err(Error::ModelInconsistent(format!(
                    "chambers {} and {} overlap in their interiors",
                    ch.name, other.name
                )));
            }
        }
        Ok(())
    }
}
