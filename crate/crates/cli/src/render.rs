//! SVG drawing of a real arrangement. All combinatorial decisions are made
//! exactly before any float appears.

use std::fmt::Write as _;

use arrmod_core::algebra::sturm::{isolate_real_roots, refine};
use arrmod_core::algebra::{rational::to_f64, real_root_count_in, CtxElem, Rat};
use arrmod_core::lattice::{compute_lattice_branches, CtxArrangement, IntersectionLattice};
use arrmod_core::moduli::ArrangementFile;
use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::CliError;

const SIZE: f64 = 600.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

#[derive(Debug, Serialize)]
pub struct MarkedPoint {
    pub lines: Vec<usize>,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Serialize)]
pub struct Drawing {
    pub root: Option<f64>,
    /// Coefficients of the line drawn at infinity.
    pub chart: [f64; 3],
    pub window: [f64; 4],
    pub lines_drawn: Vec<usize>,
    pub points: Vec<MarkedPoint>,
    #[serde(skip)]
    pub svg: String,
}

const CHARTS: [[f64; 3]; 4] = [[0.0, 0.0, 1.0], [0.125, 0.0625, 1.0], [-0.1, 0.15, 1.0], [0.2, -0.3, 1.0]];

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// The selected root as a narrow rational interval, or `None` without a
/// minimal polynomial.
fn select_root(file: &ArrangementFile, arr: &CtxArrangement, index: usize) -> Result<Option<(Rat, Rat)>, CliError> {
    let Some(f) = arr.ctx().modulus() else {
        if index != 0 {
            return Err(CliError::Usage("--root-index needs a minpoly".into()));
        }
        return Ok(None);
    };
    let degree = f.degree().unwrap_or(0);
    if index >= degree {
        return Err(CliError::Usage(format!("--root-index {index} out of range: {degree} roots")));
    }
    let real = isolate_real_roots(f).map_err(|e| CliError::Input(e.to_string()))?;
    let Some(iv) = real.get(index) else {
        return Err(CliError::NonRealRoot {
            index,
            real: real.len(),
            minpoly: file.minpoly.clone().unwrap_or_default(),
        });
    };
    let width = Rat::new(BigInt::one(), BigInt::one() << 64);
    let iv = refine(f, iv, &width).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(Some((iv.lo, iv.hi)))
}

fn eval(x: &CtxElem, at: &Option<(Rat, Rat)>) -> f64 {
    match at {
        None => to_f64(&x.rep().coeff(0)),
        Some((lo, hi)) => to_f64(&x.rep().eval(&((lo + hi) / Rat::from_integer(2.into())))),
    }
}

/// The exact lattice on the branch containing the selected root.
fn branch_lattice(arr: &CtxArrangement, at: &Option<(Rat, Rat)>) -> Result<IntersectionLattice, CliError> {
    for (ctx, lat) in compute_lattice_branches(arr) {
        let here = match (ctx.modulus(), at) {
            (Some(m), Some((lo, hi))) => {
                if lo == hi {
                    m.eval(hi) == Rat::from_integer(0.into())
                } else {
                    real_root_count_in(m, lo, hi).map_err(|e| CliError::Input(e.to_string()))? > 0
                }
            }
            _ => true,
        };
        if here {
            return lat.map_err(|e| CliError::Input(e.to_string()));
        }
    }
    Err(CliError::Input("no branch contains the selected root".into()))
}

/// Clips `a x + b y + c = 0` to the window.
fn clip(l: [f64; 3], w: &Window) -> Option<((f64, f64), (f64, f64))> {
    let [a, b, c] = l;
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let mut push = |p: (f64, f64)| {
        if p.0 >= w.x0 - 1e-12 && p.0 <= w.x1 + 1e-12 && p.1 >= w.y0 - 1e-12 && p.1 <= w.y1 + 1e-12
            && !pts.iter().any(|q| (q.0 - p.0).abs() < 1e-12 && (q.1 - p.1).abs() < 1e-12)
        {
            pts.push(p);
        }
    };
    if b.abs() > 1e-15 {
        push((w.x0, -(a * w.x0 + c) / b));
        push((w.x1, -(a * w.x1 + c) / b));
    }
    if a.abs() > 1e-15 {
        push((-(b * w.y0 + c) / a, w.y0));
        push((-(b * w.y1 + c) / a, w.y1));
    }
    pts.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
    (pts.len() >= 2).then(|| (pts[0], pts[pts.len() - 1]))
}

pub fn render(file: &ArrangementFile, window: Option<Window>, root_index: usize) -> Result<Drawing, CliError> {
    let (_, arr) = file.build().map_err(|e| CliError::Input(e.to_string()))?;
    let at = select_root(file, &arr, root_index)?;
    let lattice = branch_lattice(&arr, &at)?;
    let raw: Vec<[f64; 3]> = arr.lines().iter().map(|l| l.coeffs().clone().map(|x| eval(&x, &at))).collect();
    let homog: Vec<(Vec<usize>, [f64; 3])> = lattice
        .multiple_points()
        .map(|p| (p.iter().map(|i| i + 1).collect(), cross(raw[p[0]], raw[p[1]])))
        .collect();

    // Line at infinity of the drawing: Z=0 unless a multiple point lies on it.
    let chart = CHARTS
        .iter()
        .copied()
        .find(|u| homog.iter().all(|(_, q)| dot(*u, *q).abs() > 1e-6 * norm(*q)))
        .unwrap_or(CHARTS[0]);
    let lines: Vec<[f64; 3]> = raw
        .iter()
        .map(|l| [l[0] - l[2] * chart[0] / chart[2], l[1] - l[2] * chart[1] / chart[2], l[2] / chart[2]])
        .collect();
    let mut points = Vec::new();
    for (lines, q) in homog {
        let w = dot(chart, q);
        if w.abs() <= 1e-12 * norm(q) {
            continue;
        }
        points.push(MarkedPoint { lines, x: q[0] / w + 0.0, y: q[1] / w + 0.0 });
    }

    let w = match window {
        Some(w) => {
            let ok = [w.x0, w.y0, w.x1, w.y1].iter().all(|v| v.is_finite()) && w.x0 < w.x1 && w.y0 < w.y1;
            if !ok {
                return Err(CliError::UnboundedWindow);
            }
            w
        }
        None if points.is_empty() => Window { x0: -3.0, y0: -3.0, x1: 3.0, y1: 3.0 },
        None => {
            let fold = |f: fn(f64, f64) -> f64, init: f64, g: fn(&MarkedPoint) -> f64| points.iter().map(g).fold(init, f);
            let (x0, x1) = (fold(f64::min, f64::INFINITY, |p| p.x), fold(f64::max, f64::NEG_INFINITY, |p| p.x));
            let (y0, y1) = (fold(f64::min, f64::INFINITY, |p| p.y), fold(f64::max, f64::NEG_INFINITY, |p| p.y));
            let pad = 0.15 * (x1 - x0).max(y1 - y0).max(1.0);
            Window { x0: x0 - pad, y0: y0 - pad, x1: x1 + pad, y1: y1 + pad }
        }
    };
    points.retain(|p| p.x >= w.x0 && p.x <= w.x1 && p.y >= w.y0 && p.y <= w.y1);

    let scale = SIZE / (w.x1 - w.x0).max(w.y1 - w.y0);
    let sx = |x: f64| (x - w.x0) * scale;
    let sy = |y: f64| (w.y1 - y) * scale;
    let (width, height) = ((w.x1 - w.x0) * scale, (w.y1 - w.y0) * scale);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.2}" height="{height:.2}" viewBox="0 0 {width:.2} {height:.2}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let mut drawn = Vec::new();
    for (i, l) in lines.iter().enumerate() {
        let Some((p, q)) = clip(*l, &w) else { continue };
        drawn.push(i + 1);
        let _ = writeln!(
            svg,
            r#"<path id="L{}" d="M {:.3} {:.3} L {:.3} {:.3}" stroke="black" stroke-width="1.2" fill="none"/>"#,
            i + 1,
            sx(p.0),
            sy(p.1),
            sx(q.0),
            sy(q.1)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.3}" y="{:.3}" font-size="11" fill="gray">L{}</text>"#,
            sx(q.0) - 14.0,
            sy(q.1) + if sy(q.1) < 12.0 { 12.0 } else { -3.0 },
            i + 1
        );
    }
    for p in &points {
        let r = p.lines.len();
        let _ = writeln!(
            svg,
            r#"<circle cx="{:.3}" cy="{:.3}" r="{}" fill="red"><title>{:?}</title></circle>"#,
            sx(p.x),
            sy(p.y),
            1.5 + r as f64,
            p.lines
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.3}" y="{:.3}" font-size="12" fill="red">{r}</text>"#,
            sx(p.x) + 5.0 + r as f64,
            sy(p.y) - 4.0
        );
    }
    svg.push_str("</svg>\n");
    Ok(Drawing {
        root: at.map(|(lo, hi)| to_f64(&((lo + hi) / Rat::from_integer(2.into())))),
        chart,
        window: [w.x0, w.y0, w.x1, w.y1],
        lines_drawn: drawn,
        points,
        svg,
    })
}
