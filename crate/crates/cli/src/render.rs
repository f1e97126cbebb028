//! Text, CSV and OFF renderings. Every ordering is fixed so identical input
//! gives identical bytes.

use std::fmt::Write;

use okounkov_core::geometry::rational::{self, to_f64};
use okounkov_core::models::BuiltinModel;
use okounkov_core::surface::{SurfaceModel, SurfaceOkounkovPolygon, ZariskiDecomposition};
use okounkov_core::threefold::{
    AdmissibilityReport, MdsDecomposition, OkounkovBody3, PolyhedralityReport, TInterval, ThreefoldModel,
};
use okounkov_core::{Polygon2, Polytope3, QVector, Rational};

use crate::Format;

fn points_inline(vs: &[QVector]) -> String {
    vs.iter().map(|v| v.to_text()).collect::<Vec<_>>().join(";")
}

pub fn polytope(p: &Polytope3, format: Format) -> String {
    match format {
        Format::Off => off(p),
        _ => polytope_text(p),
    }
}

fn polytope_text(p: &Polytope3) -> String {
    let mut s = String::new();
    writeln!(s, "vertices {}", p.vertices().len()).unwrap();
    for v in p.vertices() {
        writeln!(s, "{v}").unwrap();
    }
    writeln!(s, "facets {}", p.facets().len()).unwrap();
    let mut facets = p.facets().to_vec();
    facets.sort();
    for f in &facets {
        writeln!(s, "{} >= {}", f.normal, rational::fmt(&f.offset)).unwrap();
    }
    writeln!(s, "affine_dim {}", p.affine_dim()).unwrap();
    writeln!(s, "volume {}", rational::fmt(&p.volume())).unwrap();
    s
}

/// OFF mesh; each facet is fanned from its lowest-index vertex.
fn off(p: &Polytope3) -> String {
    let vs = p.vertices();
    let index = |v: &QVector| vs.iter().position(|w| w == v).expect("facet vertex");
    let mut faces: Vec<Vec<usize>> = Vec::new();
    for ring in p.facet_rings() {
        let ids: Vec<usize> = ring.iter().map(index).collect();
        if ids.len() < 3 {
            continue;
        }
        let start = (0..ids.len()).min_by_key(|&i| ids[i]).expect("non-empty ring");
        let rotated: Vec<usize> = ids[start..].iter().chain(&ids[..start]).copied().collect();
        for k in 1..rotated.len() - 1 {
            faces.push(vec![rotated[0], rotated[k], rotated[k + 1]]);
        }
    }
    let mut s = String::from("OFF\n");
    writeln!(s, "{} {} 0", vs.len(), faces.len()).unwrap();
    for v in vs {
        let coords: Vec<String> = v.iter().map(|x| format!("{}", to_f64(x))).collect();
        writeln!(s, "{}", coords.join(" ")).unwrap();
    }
    for f in faces {
        writeln!(s, "3 {} {} {}", f[0], f[1], f[2]).unwrap();
    }
    s
}

pub fn body(b: &OkounkovBody3, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = String::from("t,chamber,vertices\n");
            for r in &b.profile.slices {
                writeln!(s, "{},{},\"{}\"", rational::fmt(&r.t), r.chamber, points_inline(r.polygon.vertices())).unwrap();
            }
            s
        }
        _ => polytope(&b.polytope, format),
    }
}

fn polygon_lines(p: &Polygon2, s: &mut String) {
    writeln!(s, "vertices {}", p.vertices().len()).unwrap();
    for v in p.vertices() {
        writeln!(s, "{v}").unwrap();
    }
}

pub fn slice(t: &Rational, chamber: &str, p: &Polygon2, format: Format) -> String {
    let mut s = String::new();
    if format == Format::Csv {
        s.push_str("t,chamber,vertices\n");
        writeln!(s, "{},{chamber},\"{}\"", rational::fmt(t), points_inline(p.vertices())).unwrap();
        return s;
    }
    writeln!(s, "t {}", rational::fmt(t)).unwrap();
    writeln!(s, "chamber {chamber}").unwrap();
    polygon_lines(p, &mut s);
    writeln!(s, "area {}", rational::fmt(&p.area())).unwrap();
    s
}

pub fn surface_polygon(p: &SurfaceOkounkovPolygon, format: Format) -> String {
    let mut s = String::new();
    if format == Format::Csv {
        s.push_str("t,alpha,beta\n");
        for t in &p.t_breakpoints {
            writeln!(
                s,
                "{},{},{}",
                rational::fmt(t),
                rational::fmt(&p.alpha.eval_scalar(t).expect("breakpoint in domain")),
                rational::fmt(&p.beta.eval_scalar(t).expect("breakpoint in domain"))
            )
            .unwrap();
        }
        return s;
    }
    polygon_lines(&p.polygon, &mut s);
    writeln!(s, "area {}", rational::fmt(&p.polygon.area())).unwrap();
    writeln!(s, "limiting {}", p.limiting).unwrap();
    s
}

pub fn surface_zariski(model: &SurfaceModel, zd: &ZariskiDecomposition) -> String {
    let mut s = String::new();
    writeln!(s, "positive {}", zd.positive).unwrap();
    writeln!(s, "negative {}", zd.negative_class(model)).unwrap();
    for (label, a) in &zd.negative_coeffs {
        writeln!(s, "coefficient {label} {}", rational::fmt(a)).unwrap();
    }
    s
}

pub fn threefold_zariski(zd: &MdsDecomposition) -> String {
    let mut s = String::new();
    writeln!(s, "chamber {}", zd.chamber).unwrap();
    writeln!(s, "positive {}", zd.positive).unwrap();
    writeln!(s, "negative {}", zd.negative).unwrap();
    for (label, a) in &zd.negative_coeffs {
        writeln!(s, "coefficient {label} {}", rational::fmt(a)).unwrap();
    }
    s
}

pub fn partition(p: &[TInterval], format: Format) -> String {
    let mut s = String::new();
    if format == Format::Csv {
        s.push_str("chamber,start,end\n");
    }
    for iv in p {
        let sep = if format == Format::Csv { "," } else { " " };
        writeln!(s, "{}{sep}{}{sep}{}", iv.chamber, rational::fmt(&iv.start), rational::fmt(&iv.end)).unwrap();
    }
    s
}

pub fn chamber_list(m: &ThreefoldModel) -> String {
    let mut s = String::new();
    for c in m.chambers() {
        writeln!(
            s,
            "{} admissible={} identity_sqm={} generators={}",
            c.name,
            c.admissible(),
            c.identity_sqm,
            points_inline(c.cone.generators())
        )
        .unwrap();
    }
    s
}

pub fn admissibility(r: &AdmissibilityReport) -> String {
    let mut s = String::from(if r.pass { "pass\n" } else { "fail\n" });
    for (name, ok) in &r.chambers {
        writeln!(s, "chamber {name} {}", if *ok { "admissible" } else { "inadmissible" }).unwrap();
    }
    s
}

pub fn polyhedrality(r: &PolyhedralityReport) -> String {
    let mut s = String::new();
    writeln!(s, "verdict {}", r.verdict).unwrap();
    writeln!(s, "mori_intervals {}", r.mori_intervals).unwrap();
    writeln!(s, "surface_chamber_pieces {}", r.surface_chamber_pieces).unwrap();
    writeln!(s, "mu_pieces {}", r.mu_pieces).unwrap();
    writeln!(s, "surface_picard_rank {}", r.surface_picard_rank).unwrap();
    writeln!(s, "rank_one_shortcut {}", r.rank_one_shortcut).unwrap();
    if let Some(reason) = &r.reason {
        writeln!(s, "reason {reason}").unwrap();
    }
    writeln!(s, "vertices {}", r.vertices.len()).unwrap();
    for v in &r.vertices {
        writeln!(s, "{v}").unwrap();
    }
    s
}

pub fn validation(model: &BuiltinModel) -> String {
    match model {
        BuiltinModel::Surface { model, .. } => format!(
            "ok surface rank {} negative_curves {}\n",
            model.rank(),
            model.negative_curves().len()
        ),
        BuiltinModel::Threefold(m) => format!("ok threefold rank {} chambers {}\n", m.rank(), m.chambers().len()),
    }
}
