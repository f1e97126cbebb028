//! Zariski decompositions, Zariski chamber walls and Okounkov polygons of
//! divisors on smooth projective surfaces given numerically.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use crate::geometry::cone::{ray_exit, PolyhedralCone};
use crate::geometry::linalg::{QMatrix, QVector};
use crate::geometry::pl::PiecewiseLinear;
use crate::geometry::polygon::{convex_hull_2d, Polygon2};
use crate::geometry::rational::{self, Rational};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NegativeCurve {
    pub label: String,
    pub class: QVector,
}

/// Numerical data of a surface: intersection form on `N^1(S)`, a finite set
/// of irreducible negative curves and the effective and nef cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceModel {
    basis_labels: Vec<String>,
    intersection_form: QMatrix,
    negative_curves: Vec<NegativeCurve>,
    eff_cone: PolyhedralCone,
    nef_cone: PolyhedralCone,
}

impl SurfaceModel {
    pub fn new(
        basis_labels: Vec<String>,
        intersection_form: QMatrix,
        negative_curves: Vec<NegativeCurve>,
        eff_cone: PolyhedralCone,
        nef_cone: PolyhedralCone,
    ) -> Result<Self, Error> {
        let r = basis_labels.len();
        if r == 0 || intersection_form.nrows() != r || intersection_form.ncols() != r {
            return Err(Error::DimensionMismatch(format!(
                "surface of rank {r} needs an {r}x{r} intersection form"
            )));
        }
        if !intersection_form.is_symmetric() {
            return Err(Error::ModelInconsistent("intersection form is not symmetric".into()));
        }
        if eff_cone.dim() != r || nef_cone.dim() != r {
            return Err(Error::DimensionMismatch("surface cones have the wrong dimension".into()));
        }
        let eff_cone = crate::geometry::cone::dual_description(&eff_cone)?;
        let nef_cone = crate::geometry::cone::dual_description(&nef_cone)?;
        let mut labels = BTreeSet::new();
        for c in &negative_curves {
            if c.class.dim() != r {
                return Err(Error::DimensionMismatch(format!("curve {} has the wrong dimension", c.label)));
            }
            if !labels.insert(c.label.clone()) {
                return Err(Error::ModelInconsistent(format!("duplicate curve label {}", c.label)));
            }
            if !intersection_form.bilinear(&c.class, &c.class).is_negative() {
                return Err(Error::ModelInconsistent(format!(
                    "curve {} does not have negative self-intersection",
                    c.label
                )));
            }
            if !eff_cone.contains(&c.class) {
                return Err(Error::ModelInconsistent(format!("curve {} is not effective", c.label)));
            }
        }
        for n in nef_cone.generators() {
            for e in eff_cone.generators() {
                if intersection_form.bilinear(n, e).is_negative() {
                    return Err(Error::ModelInconsistent(format!(
                        "nef generator ({n}) meets effective generator ({e}) negatively"
                    )));
                }
            }
        }
        Ok(SurfaceModel {
            basis_labels,
            intersection_form,
            negative_curves,
            eff_cone,
            nef_cone,
        })
    }

    pub fn rank(&self) -> usize {
        self.basis_labels.len()
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    pub fn intersection_form(&self) -> &QMatrix {
        &self.intersection_form
    }

    pub fn negative_curves(&self) -> &[NegativeCurve] {
        &self.negative_curves
    }

    pub fn eff_cone(&self) -> &PolyhedralCone {
        &self.eff_cone
    }

    pub fn nef_cone(&self) -> &PolyhedralCone {
        &self.nef_cone
    }

    pub fn dot(&self, u: &QVector, v: &QVector) -> Rational {
        self.intersection_form.bilinear(u, v)
    }

    pub fn curve(&self, label: &str) -> Option<&NegativeCurve> {
        self.negative_curves.iter().find(|c| c.label == label)
    }

    pub fn curve_with_class(&self, class: &QVector) -> Option<&NegativeCurve> {
        self.negative_curves.iter().find(|c| &c.class == class)
    }

    pub fn is_big(&self, d: &QVector) -> bool {
        self.eff_cone.interior_contains(d)
    }

    /// Same model with the candidate curves listed in another order.
    pub fn with_curve_order(&self, order: &[usize]) -> SurfaceModel {
        let mut m = self.clone();
        m.negative_curves = order.iter().map(|&i| self.negative_curves[i].clone()).collect();
        m
    }

    fn check_dim(&self, d: &QVector) -> Result<(), Error> {
        if d.dim() != self.rank() {
            return Err(Error::DimensionMismatch(format!(
                "class of dimension {} on a surface of rank {}",
                d.dim(),
                self.rank()
            )));
        }
        Ok(())
    }

    fn classes(&self, support: &BTreeSet<String>) -> Vec<&NegativeCurve> {
        support.iter().map(|l| self.curve(l).expect("support label")).collect()
    }

    fn gram(&self, curves: &[&NegativeCurve]) -> QMatrix {
        let n = curves.len();
        let mut g = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = self.dot(&curves[i].class, &curves[j].class);
            }
        }
        g
    }
}

/// Flag `S > C > {x}`: the curve class, its self-intersection and the local
/// intersection multiplicity at `x` of each negative curve with `C`
/// (missing labels mean the curve avoids `x`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceFlag {
    pub curve_class: QVector,
    pub curve_selfint: Rational,
    pub point_data: BTreeMap<String, u64>,
}

impl SurfaceFlag {
    pub fn new(curve_class: QVector, curve_selfint: Rational) -> Self {
        SurfaceFlag {
            curve_class,
            curve_selfint,
            point_data: BTreeMap::new(),
        }
    }

    pub fn with_point(mut self, label: &str, mult: u64) -> Self {
        self.point_data.insert(label.to_string(), mult);
        self
    }

    pub fn multiplicity(&self, label: &str) -> Rational {
        rational::int(self.point_data.get(label).copied().unwrap_or(0) as i64)
    }

    pub fn validate(&self, model: &SurfaceModel) -> Result<(), Error> {
        model.check_dim(&self.curve_class)?;
        if model.dot(&self.curve_class, &self.curve_class) != self.curve_selfint {
            return Err(Error::ModelInconsistent(format!(
                "flag curve self-intersection {} disagrees with the intersection form ({})",
                rational::fmt(&self.curve_selfint),
                rational::fmt(&model.dot(&self.curve_class, &self.curve_class))
            )));
        }
        for (label, &mult) in &self.point_data {
            let curve = model
                .curve(label)
                .ok_or_else(|| Error::ModelInconsistent(format!("point data for unknown curve {label}")))?;
            if curve.class == self.curve_class {
                continue;
            }
            if rational::int(mult as i64) > model.dot(&curve.class, &self.curve_class) {
                return Err(Error::ModelInconsistent(format!(
                    "local multiplicity of {label} exceeds its intersection with the flag curve"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZariskiDecomposition {
    pub positive: QVector,
    pub negative_coeffs: BTreeMap<String, Rational>,
    pub support: BTreeSet<String>,
}

impl ZariskiDecomposition {
    pub fn coefficient(&self, label: &str) -> Rational {
        self.negative_coeffs.get(label).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn negative_class(&self, model: &SurfaceModel) -> QVector {
        let mut n = QVector::zeros(model.rank());
        for (label, c) in &self.negative_coeffs {
            n = n.add_scaled(c, &model.curve(label).expect("support label").class);
        }
        n
    }
}

/// Solves `(D - sum x_i C_i) . C_j = 0` on the given support.
fn solve_on_support(
    model: &SurfaceModel,
    d: &QVector,
    support: &BTreeSet<String>,
) -> Result<BTreeMap<String, Rational>, Error> {
    let curves = model.classes(support);
    if curves.is_empty() {
        return Ok(BTreeMap::new());
    }
    let g = model.gram(&curves);
    let b = QVector(curves.iter().map(|c| model.dot(d, &c.class)).collect());
    let x = g.solve(&b).ok_or_else(|| {
        Error::ModelInconsistent(format!(
            "candidate curve set incomplete or not irreducible-negative: singular Gram matrix on {{{}}}",
            support.iter().cloned().collect::<Vec<_>>().join(",")
        ))
    })?;
    Ok(support.iter().cloned().zip(x.0).collect())
}

/// Unique Zariski decomposition of a pseudo-effective class.
pub fn zariski_decompose(model: &SurfaceModel, d: &QVector) -> Result<ZariskiDecomposition, Error> {
    model.check_dim(d)?;
    if !model.eff_cone.contains(d) {
        return Err(Error::NotPseudoEffective(format!("({d}) lies outside the effective cone")));
    }
    let mut support: BTreeSet<String> = model
        .negative_curves
        .iter()
        .filter(|c| model.dot(d, &c.class).is_negative())
        .map(|c| c.label.clone())
        .collect();
    loop {
        let coeffs = solve_on_support(model, d, &support)?;
        let mut positive = d.clone();
        for (label, x) in &coeffs {
            positive = positive.add_scaled(&-x.clone(), &model.curve(label).expect("label").class);
        }
        let extra: Vec<String> = model
            .negative_curves
            .iter()
            .filter(|c| !support.contains(&c.label) && model.dot(&positive, &c.class).is_negative())
            .map(|c| c.label.clone())
            .collect();
        if extra.is_empty() {
            let zd = ZariskiDecomposition {
                positive,
                negative_coeffs: coeffs,
                support,
            };
            check_axioms(model, d, &zd).map_err(Error::ModelInconsistent)?;
            return Ok(zd);
        }
        support.extend(extra);
    }
}

/// Checks every defining property of a Zariski decomposition of `d`.
pub fn check_axioms(model: &SurfaceModel, d: &QVector, zd: &ZariskiDecomposition) -> Result<(), String> {
    let n = zd.negative_class(model);
    if &(&zd.positive + &n) != d {
        return Err("P + N does not equal D".into());
    }
    if let Some((label, _)) = zd.negative_coeffs.iter().find(|(_, c)| !c.is_positive()) {
        return Err(format!(
            "candidate curve set incomplete or not irreducible-negative: coefficient of {label} is not positive"
        ));
    }
    for label in &zd.support {
        let c = &model.curve(label).ok_or("unknown support label")?.class;
        if !model.dot(&zd.positive, c).is_zero() {
            return Err(format!("P is not orthogonal to support curve {label}"));
        }
    }
    if let Some(c) = model
        .negative_curves
        .iter()
        .find(|c| model.dot(&zd.positive, &c.class).is_negative())
    {
        return Err(format!("P meets curve {} negatively", c.label));
    }
    if !zd.support.is_empty() && !model.gram(&model.classes(&zd.support)).is_negative_definite() {
        return Err("Gram matrix of the support is not negative definite".into());
    }
    if !model.nef_cone.contains(&zd.positive) {
        return Err(format!(
            "candidate curve set incomplete or not irreducible-negative: P = ({}) is not nef",
            zd.positive
        ));
    }
    Ok(())
}

pub fn asymptotic_valuation_surface(model: &SurfaceModel, d: &QVector, label: &str) -> Result<Rational, Error> {
    if model.curve(label).is_none() {
        return Err(Error::InvalidParameter(format!("unknown curve {label}")));
    }
    Ok(zariski_decompose(model, d)?.coefficient(label))
}

/// Coefficient of the negative curve with class `class` in `N_D`, zero when
/// no candidate curve has that class.
pub fn ord_along(model: &SurfaceModel, d: &QVector, class: &QVector) -> Result<Rational, Error> {
    let zd = zariski_decompose(model, d)?;
    Ok(match model.curve_with_class(class) {
        Some(c) => zd.coefficient(&c.label),
        None => Rational::zero(),
    })
}

pub fn mu_surface(model: &SurfaceModel, d: &QVector, curve_class: &QVector) -> Result<Rational, Error> {
    model.check_dim(d)?;
    if !model.eff_cone.contains(d) {
        return Err(Error::NotPseudoEffective(format!("({d}) lies outside the effective cone")));
    }
    ray_exit(&model.eff_cone, d, curve_class)?
        .ok_or_else(|| Error::Unavailable(format!("D - t({curve_class}) stays effective for all t")))
}

/// Linear functionals on `N^1(S)` whose zero sets contain every Zariski
/// chamber wall and the boundary of the effective cone: facets of the
/// effective cone, and for each negative-definite set of candidate curves
/// the coefficient functionals and the functionals `P . C''`. Each is given
/// as a vector `w` acting by the plain dot product.
pub fn wall_functionals(model: &SurfaceModel, extra_curves: &[QVector]) -> Vec<QVector> {
    let mut out: BTreeSet<QVector> = model.eff_cone.facets().iter().map(QVector::primitive).collect();
    let form = &model.intersection_form;
    let mut tests: Vec<QVector> = model.negative_curves.iter().map(|c| c.class.clone()).collect();
    tests.extend(extra_curves.iter().cloned());
    let n = model.negative_curves.len();
    for mask in 0u32..(1 << n) {
        let curves: Vec<&NegativeCurve> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| &model.negative_curves[i])
            .collect();
        let coeff_fns: Vec<QVector> = if curves.is_empty() {
            Vec::new()
        } else {
            let g = model.gram(&curves);
            if !g.is_negative_definite() {
                continue;
            }
            // x(v) = G^{-1} (C_j . v)_j
            let k = curves.len();
            (0..k)
                .map(|i| {
                    let row = g.solve(&QVector::unit(k, i)).expect("definite Gram");
                    let mut w = QVector::zeros(model.rank());
                    for (j, c) in curves.iter().enumerate() {
                        w = w.add_scaled(&row[j], &form.mul_vec(&c.class));
                    }
                    w
                })
                .collect()
        };
        for w in &coeff_fns {
            if !w.is_zero() {
                out.insert(w.primitive());
            }
        }
        for t in &tests {
            let mut w = form.mul_vec(t);
            for (phi, c) in coeff_fns.iter().zip(&curves) {
                w = w.add_scaled(&-model.dot(&c.class, t), phi);
            }
            if !w.is_zero() {
                out.insert(w.primitive());
            }
        }
    }
    out.into_iter().collect()
}

/// Candidate wall crossings of `D - tC` strictly inside `(a, b)`, together
/// with the endpoints, sorted and merged.
fn candidate_points(model: &SurfaceModel, d: &QVector, c: &QVector, a: &Rational, b: &Rational) -> Vec<Rational> {
    let mut ts: BTreeSet<Rational> = BTreeSet::new();
    ts.insert(a.clone());
    ts.insert(b.clone());
    for w in wall_functionals(model, std::slice::from_ref(c)) {
        let wc = w.dot(c);
        if wc.is_zero() {
            continue;
        }
        let t = w.dot(d) / wc;
        if &t > a && &t < b {
            ts.insert(t);
        }
    }
    ts.into_iter().collect()
}

fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / rational::int(2)
}

/// Values of `t` in `[ord_C(||D||), mu]` where the support of the negative
/// part of `D - tC` changes, plus both endpoints.
pub fn negative_part_breakpoints(model: &SurfaceModel, d: &QVector, curve_class: &QVector) -> Result<Vec<Rational>, Error> {
    model.check_dim(d)?;
    if !model.is_big(d) {
        return Err(Error::NotBig);
    }
    let (a, b) = (ord_along(model, d, curve_class)?, mu_surface(model, d, curve_class)?);
    let pts = candidate_points(model, d, curve_class, &a, &b);
    let supports = piece_supports(model, d, curve_class, &pts)?;
    let mut out = vec![pts[0].clone()];
    for i in 1..pts.len().saturating_sub(1) {
        if supports[i - 1] != supports[i] {
            out.push(pts[i].clone());
        }
    }
    if pts.len() > 1 {
        out.push(pts[pts.len() - 1].clone());
    }
    Ok(out)
}

fn piece_supports(
    model: &SurfaceModel,
    d: &QVector,
    c: &QVector,
    pts: &[Rational],
) -> Result<Vec<BTreeSet<String>>, Error> {
    pts.windows(2)
        .map(|w| {
            let m = midpoint(&w[0], &w[1]);
            Ok(zariski_decompose(model, &d.add_scaled(&-m, c))?.support)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceOkounkovPolygon {
    pub polygon: Polygon2,
    pub t_breakpoints: Vec<Rational>,
    pub alpha: PiecewiseLinear,
    pub beta: PiecewiseLinear,
    pub neg_support_per_piece: Vec<BTreeSet<String>>,
    pub limiting: bool,
}

/// Negative-part coefficients of `D - tC` at `t`, extended affinely from the
/// open piece with the given support.
fn coefficients_on_piece(
    model: &SurfaceModel,
    d: &QVector,
    c: &QVector,
    support: &BTreeSet<String>,
    t: &Rational,
) -> Result<BTreeMap<String, Rational>, Error> {
    solve_on_support(model, &d.add_scaled(&-t.clone(), c), support)
}

/// Okounkov polygon of `D` with respect to the flag; pseudo-effective
/// classes on the boundary give the limiting polygon.
pub fn okounkov_polygon(model: &SurfaceModel, flag: &SurfaceFlag, d: &QVector) -> Result<SurfaceOkounkovPolygon, Error> {
    model.check_dim(d)?;
    let c = &flag.curve_class;
    let a = ord_along(model, d, c)?;
    let b = mu_surface(model, d, c)?;
    let pts = candidate_points(model, d, c, &a, &b);
    let supports: Vec<BTreeSet<String>> = if pts.len() == 1 {
        vec![zariski_decompose(model, &d.add_scaled(&-a.clone(), c))?.support]
    } else {
        piece_supports(model, d, c, &pts)?
    };
    let flag_curve = model.curve_with_class(c).map(|x| x.label.clone());

    let eval = |support: &BTreeSet<String>, t: &Rational| -> Result<(Rational, Rational), Error> {
        let coeffs = coefficients_on_piece(model, d, c, support, t)?;
        let mut alpha = Rational::zero();
        let mut positive = d.add_scaled(&-t.clone(), c);
        for (label, x) in &coeffs {
            alpha += x * flag.multiplicity(label);
            positive = positive.add_scaled(&-x.clone(), &model.curve(label).expect("label").class);
        }
        let beta = &alpha + model.dot(c, &positive);
        Ok((alpha, beta))
    };

    let mut points: Vec<QVector> = Vec::new();
    let mut alphas: Vec<Rational> = Vec::new();
    let mut betas: Vec<Rational> = Vec::new();
    if pts.len() == 1 {
        let (al, be) = eval(&supports[0], &pts[0])?;
        points.push(QVector(vec![pts[0].clone(), al.clone()]));
        points.push(QVector(vec![pts[0].clone(), be.clone()]));
        alphas.push(al);
        betas.push(be);
    }
    for (i, support) in supports.iter().enumerate() {
        if pts.len() == 1 {
            break;
        }
        if let Some(label) = &flag_curve {
            if support.contains(label) {
                return Err(Error::InadmissibleFlagCurve(format!(
                    "{label} lies in the negative support on ({}, {})",
                    rational::fmt(&pts[i]),
                    rational::fmt(&pts[i + 1])
                )));
            }
        }
        let left = eval(support, &pts[i])?;
        let right = eval(support, &pts[i + 1])?;
        if i > 0 && (alphas[i].clone(), betas[i].clone()) != left {
            return Err(Error::ModelInconsistent(format!(
                "Okounkov polygon bounds jump at t = {}",
                rational::fmt(&pts[i])
            )));
        }
        if i == 0 {
            alphas.push(left.0.clone());
            betas.push(left.1.clone());
        }
        for (t, (al, be)) in [(&pts[i], &left), (&pts[i + 1], &right)] {
            if be < al {
                return Err(Error::ModelInconsistent(format!(
                    "upper bound below lower bound at t = {}",
                    rational::fmt(t)
                )));
            }
            points.push(QVector(vec![t.clone(), al.clone()]));
            points.push(QVector(vec![t.clone(), be.clone()]));
        }
        alphas.push(right.0);
        betas.push(right.1);
    }
    let polygon = convex_hull_2d(&points)?;
    let alpha = PiecewiseLinear::scalar(pts.clone(), alphas)?.simplified();
    let beta = PiecewiseLinear::scalar(pts.clone(), betas)?.simplified();

    let mut t_breakpoints = vec![pts[0].clone()];
    let mut neg_support_per_piece = vec![supports[0].clone()];
    for i in 1..supports.len() {
        if supports[i] != supports[i - 1] {
            t_breakpoints.push(pts[i].clone());
            neg_support_per_piece.push(supports[i].clone());
        }
    }
    if pts.len() > 1 {
        t_breakpoints.push(pts[pts.len() - 1].clone());
    }
    Ok(SurfaceOkounkovPolygon {
        polygon,
        t_breakpoints,
        alpha,
        beta,
        neg_support_per_piece,
        limiting: !model.is_big(d),
    })
}

/// Okounkov body `[0, d]` of a degree-`d` divisor on a curve.
pub fn okounkov_curve(d: &Rational) -> Result<(Rational, Rational), Error> {
    if d.is_negative() {
        return Err(Error::NotEffective(format!("degree {} is negative", rational::fmt(d))));
    }
    Ok((Rational::zero(), d.clone()))
}
