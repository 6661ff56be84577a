use serde::{Deserialize, Serialize};

use super::body::{ConvexBody, TangentConfig, GEOM_TOL};
use super::halfspace::{norm, Halfspace, Point};
use super::hull::{signed_area, P2};
use super::volume::clip_polygon;
use super::GeometryError;
use crate::combinatorics::binomial;
use crate::lp::{LinearProgram, LpError, Relation, Sense};

/// Feasibility search is exponential in the number of hyperplanes.
pub const MAX_ARRANGEMENT_HYPERPLANES: usize = 12;

/// One open cell: `signs[k]` is `+1` where `normal . x > offset` for
/// hyperplane `k`, `-1` where it is below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub signs: Vec<i8>,
    pub witness: Point,
    /// Cell polygon clipped to the box (planar arrangements only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polygon: Option<Vec<P2>>,
}

impl Region {
    /// Halfspaces whose intersection is the closure of the cell.
    pub fn halfspaces(&self, hyperplanes: &[Halfspace]) -> Vec<Halfspace> {
        hyperplanes
            .iter()
            .zip(&self.signs)
            .map(|(h, &s)| if s > 0 { h.flipped() } else { h.clone() })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Arrangement {
    pub hyperplanes: Vec<Halfspace>,
    pub regions: Vec<Region>,
}

/// `sum_{k=0}^{d} C(n, k)`, the maximum number of cells cut by `n`
/// hyperplanes in `R^d`.
pub fn region_count_formula(n: u64, d: u64) -> u128 {
    (0..=d.min(n)).map(|k| binomial(n, k)).sum()
}

/// Cells of the arrangement that meet the interior of `bbox`.
pub fn build_arrangement(
    hyperplanes: &[Halfspace],
    bbox: &ConvexBody,
) -> Result<Arrangement, GeometryError> {
    if hyperplanes.len() > MAX_ARRANGEMENT_HYPERPLANES {
        return Err(GeometryError::TooManyHyperplanes {
            n: hyperplanes.len(),
            max: MAX_ARRANGEMENT_HYPERPLANES,
        });
    }
    arrangement_uncapped(hyperplanes, bbox)
}

pub(crate) fn arrangement_uncapped(
    hyperplanes: &[Halfspace],
    bbox: &ConvexBody,
) -> Result<Arrangement, GeometryError> {
    for h in hyperplanes {
        if h.dim() != bbox.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: bbox.dim(),
                got: h.dim(),
            });
        }
    }
    if bbox.dim() == 2 {
        planar(hyperplanes, bbox)
    } else {
        build_arrangement_lp(hyperplanes, bbox)
    }
}

fn split(poly: &[P2], h: &Halfspace) -> (Vec<P2>, Vec<P2>) {
    let n = norm(&h.normal);
    let (a, b) = ([h.normal[0] / n, h.normal[1] / n], h.offset / n);
    let s: Vec<f64> = poly.iter().map(|p| a[0] * p[0] + a[1] * p[1] - b).collect();
    let mut neg = Vec::new();
    let mut pos = Vec::new();
    let k = poly.len();
    for i in 0..k {
        let j = (i + 1) % k;
        if s[i] <= 0.0 {
            neg.push(poly[i]);
        }
        if s[i] >= 0.0 {
            pos.push(poly[i]);
        }
        if (s[i] < 0.0 && s[j] > 0.0) || (s[i] > 0.0 && s[j] < 0.0) {
            let t = s[i] / (s[i] - s[j]);
            let x = [
                poly[i][0] + t * (poly[j][0] - poly[i][0]),
                poly[i][1] + t * (poly[j][1] - poly[i][1]),
            ];
            neg.push(x);
            pos.push(x);
        }
    }
    (neg, pos)
}

fn centroid(poly: &[P2]) -> P2 {
    let a = signed_area(poly);
    let k = poly.len();
    let (mut cx, mut cy) = (0.0, 0.0);
    for i in 0..k {
        let p = poly[i];
        let q = poly[(i + 1) % k];
        let w = p[0] * q[1] - q[0] * p[1];
        cx += (p[0] + q[0]) * w;
        cy += (p[1] + q[1]) * w;
    }
    [cx / (6.0 * a), cy / (6.0 * a)]
}

/// Planar sweep: split the box polygon by one line at a time.
fn planar(hyperplanes: &[Halfspace], bbox: &ConvexBody) -> Result<Arrangement, GeometryError> {
    let bhs = bbox.to_halfspaces(&TangentConfig::default());
    let r = 1e6;
    let clip = clip_polygon(&bhs, r);
    if clip.touches {
        return Err(GeometryError::Unbounded);
    }
    let box_area = signed_area(&clip.points).abs();
    if box_area <= GEOM_TOL {
        return Err(GeometryError::EmptyInterior);
    }
    let min_area = 1e-12 * box_area;
    let mut cells: Vec<(Vec<P2>, Vec<i8>)> = vec![(clip.points, Vec::new())];
    for h in hyperplanes {
        let mut next = Vec::with_capacity(2 * cells.len());
        for (poly, signs) in cells {
            let (neg, pos) = split(&poly, h);
            for (part, s) in [(neg, -1i8), (pos, 1i8)] {
                if part.len() >= 3 && signed_area(&part).abs() > min_area {
                    let mut sv = signs.clone();
                    sv.push(s);
                    next.push((part, sv));
                }
            }
        }
        cells = next;
    }
    let regions = cells
        .into_iter()
        .map(|(poly, signs)| Region {
            signs,
            witness: centroid(&poly).to_vec(),
            polygon: Some(poly),
        })
        .collect();
    Ok(Arrangement {
        hyperplanes: hyperplanes.to_vec(),
        regions,
    })
}

/// Depth-first search over sign prefixes; a prefix survives when the
/// cell has an interior point at positive margin from every hyperplane.
pub fn build_arrangement_lp(
    hyperplanes: &[Halfspace],
    bbox: &ConvexBody,
) -> Result<Arrangement, GeometryError> {
    let d = bbox.dim();
    let bhs = bbox.to_halfspaces(&TangentConfig::default());
    let mut regions = Vec::new();
    let mut stack: Vec<Vec<i8>> = vec![Vec::new()];
    while let Some(prefix) = stack.pop() {
        let Some(x) = margin_point(d, &bhs, hyperplanes, &prefix)? else {
            continue;
        };
        if prefix.len() == hyperplanes.len() {
            regions.push(Region {
                signs: prefix,
                witness: x,
                polygon: None,
            });
        } else {
            for s in [1i8, -1] {
                let mut p = prefix.clone();
                p.push(s);
                stack.push(p);
            }
        }
    }
    regions.sort_by(|a, b| a.signs.cmp(&b.signs));
    Ok(Arrangement {
        hyperplanes: hyperplanes.to_vec(),
        regions,
    })
}

fn margin_point(
    d: usize,
    bhs: &[Halfspace],
    hyperplanes: &[Halfspace],
    prefix: &[i8],
) -> Result<Option<Point>, GeometryError> {
    let mut obj = vec![0.0; d + 1];
    obj[d] = 1.0;
    let mut lp = LinearProgram::new(Sense::Maximize, obj);
    for i in 0..d {
        lp.set_free(i);
    }
    let row = |h: &Halfspace, sign: f64| {
        // sign * (a.x - b) >= s |a|  <=>  -sign a.x + s|a| <= -sign b
        let n = norm(&h.normal);
        let mut r: Vec<f64> = h.normal.iter().map(|v| -sign * v / n).collect();
        r.push(1.0);
        (r, -sign * h.offset / n)
    };
    for h in bhs {
        let (r, b) = row(h, -1.0);
        lp.add(r, Relation::Le, b)?;
    }
    for (h, &s) in hyperplanes.iter().zip(prefix) {
        let (r, b) = row(h, s as f64);
        lp.add(r, Relation::Le, b)?;
    }
    let mut cap = vec![0.0; d + 1];
    cap[d] = 1.0;
    lp.add(cap, Relation::Le, 1.0)?;
    match lp.solve() {
        Ok(sol) if sol.x[d] > GEOM_TOL => Ok(Some(sol.x[..d].to_vec())),
        Ok(_) | Err(LpError::Infeasible) => Ok(None),
        Err(e) => Err(e.into()),
    }
}
