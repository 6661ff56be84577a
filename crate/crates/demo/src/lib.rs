//! Planar operations exposed to the browser. Every export takes and returns
//! JSON strings; errors come back as `{"error": "..."}`.

use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

use helly_lab::geometry::hull::{convex_hull, signed_area, P2};
use helly_lab::geometry::{
    build_arrangement, ellipsoid_gauge, intersect, max_inscribed_ellipsoid, min_enclosing_simplex,
    region_count_formula, volume, BodyKind, ConvexBody, Halfspace, VolumeMode,
};
use helly_lab::select::{covering_halfspace_at, Measure};

const CLIP: f64 = 1e6;
const TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Covering {
    pub hull: Vec<P2>,
    pub area: f64,
    /// The cut is the line `y = t`.
    pub t: f64,
    pub area_below: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cells {
    pub cells: Vec<Vec<P2>>,
    pub count: usize,
    /// Bound for lines in general position.
    pub formula: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Enclosure {
    pub hull: Vec<P2>,
    pub triangle: Vec<P2>,
    /// Triangle area over polygon area.
    pub ratio: f64,
    pub ellipse_center: P2,
    /// Sampled boundary of the largest inscribed ellipse.
    pub ellipse: Vec<P2>,
    /// Largest gauge of a hull vertex in the ellipse; at most 2.
    pub max_gauge: f64,
}

fn hull_body(points: &[P2]) -> Result<(Vec<P2>, ConvexBody), String> {
    let hull = convex_hull(points);
    if hull.len() < 3 || signed_area(&hull).abs() < 1e-12 {
        return Err("need three points in general position".into());
    }
    let body = ConvexBody::polygon(&hull).map_err(|e| e.to_string())?;
    Ok((hull, body))
}

fn area(body: &ConvexBody) -> Result<f64, String> {
    volume(body, VolumeMode::Exact, CLIP)
        .map(|v| v.size())
        .map_err(|e| e.to_string())
}

/// Lowest horizontal cut whose part below has area `target`.
pub fn covering(points: &[P2], target: f64) -> Result<Covering, String> {
    let (hull, body) = hull_body(points)?;
    let c = covering_halfspace_at(&body, Measure::Volume, target, TOL, CLIP)
        .map_err(|e| e.to_string())?;
    let below = intersect(&[
        body.clone(),
        ConvexBody::halfspace(c.halfspace.clone()).map_err(|e| e.to_string())?,
    ])
    .map_err(|e| e.to_string())?;
    Ok(Covering {
        area: area(&body)?,
        area_below: area(&below)?,
        t: c.t,
        hull,
    })
}

/// Cells cut by lines `a x + b y = c` inside `[-half, half]^2`.
pub fn arrangement(lines: &[[f64; 3]], half: f64) -> Result<Cells, String> {
    let hs = lines
        .iter()
        .map(|&[a, b, c]| Halfspace::new(vec![a, b], c))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let bbox = ConvexBody::boxed(vec![-half; 2], vec![half; 2]).map_err(|e| e.to_string())?;
    let arr = build_arrangement(&hs, &bbox).map_err(|e| e.to_string())?;
    let cells: Vec<Vec<P2>> = arr.regions.into_iter().filter_map(|r| r.polygon).collect();
    Ok(Cells {
        count: cells.len(),
        formula: region_count_formula(lines.len() as u64, 2) as u64,
        cells,
    })
}

/// Smallest enclosing triangle and largest inscribed ellipse of the hull.
pub fn enclose(points: &[P2]) -> Result<Enclosure, String> {
    let (hull, body) = hull_body(points)?;
    let s = min_enclosing_simplex(&body, CLIP).map_err(|e| e.to_string())?;
    let e = max_inscribed_ellipsoid(&body, TOL).map_err(|e| e.to_string())?;
    let BodyKind::Ellipsoid { center, shape } = e.kind() else {
        return Err("inscribed body is not an ellipse".into());
    };
    // x = c + L u with L L^T = shape traces the boundary for |u| = 1
    let l11 = shape[0][0].sqrt();
    let l21 = shape[1][0] / l11;
    let l22 = (shape[1][1] - l21 * l21).max(0.0).sqrt();
    let ellipse = (0..96)
        .map(|i| {
            let a = i as f64 * std::f64::consts::TAU / 96.0;
            let (u, v) = (a.cos(), a.sin());
            [center[0] + l11 * u, center[1] + l21 * u + l22 * v]
        })
        .collect();
    let max_gauge = hull
        .iter()
        .map(|p| ellipsoid_gauge(center, shape, p))
        .fold(0.0, f64::max);
    Ok(Enclosure {
        triangle: s.vertices.iter().map(|v| [v[0], v[1]]).collect(),
        ratio: s.ratio,
        ellipse_center: [center[0], center[1]],
        ellipse,
        max_gauge,
        hull,
    })
}

fn respond<T: Serialize>(r: Result<T, String>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v).unwrap_or_else(|e| error_json(&e.to_string())),
        Err(e) => error_json(&e),
    }
}

fn error_json(msg: &str) -> String {
    serde_json::json!({ "error": msg }).to_string()
}

fn parse<T: for<'a> Deserialize<'a>>(json: &str) -> Result<T, String> {
    serde_json::from_str(json).map_err(|e| format!("bad input: {e}"))
}

/// `points_json` is `[[x, y], ...]`.
#[wasm_bindgen(js_name = coveringCut)]
pub fn covering_cut(points_json: &str, target: f64) -> String {
    respond(parse::<Vec<P2>>(points_json).and_then(|p| covering(&p, target)))
}

/// `lines_json` is `[[a, b, c], ...]`.
#[wasm_bindgen(js_name = lineCells)]
pub fn line_cells(lines_json: &str, half: f64) -> String {
    respond(parse::<Vec<[f64; 3]>>(lines_json).and_then(|l| arrangement(&l, half)))
}

#[wasm_bindgen(js_name = triangleAndEllipse)]
pub fn triangle_and_ellipse(points_json: &str) -> String {
    respond(parse::<Vec<P2>>(points_json).and_then(|p| enclose(&p)))
}
