use serde::{Deserialize, Serialize};

use super::rainbow::RainbowTuple;
use super::HypergraphError;
use crate::combinatorics::for_each_subset;
use crate::geometry::hull::{convex_hull, signed_area, P2};
use crate::geometry::{
    arrangement_uncapped, clip_polygon, min_enclosing_simplex, ConvexBody, Family, Halfspace,
    TangentConfig,
};
use crate::select::{Evaluator, Measure};

/// Margin added around intersection vertices so the enclosing triangle
/// strictly contains degenerate intersections too.
const INFLATE: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparsifyOutcome {
    /// `B ∩ R_{j_B}` for every member `B` of the first class.
    pub star: Family,
    /// The monochromatic subclasses of the other classes.
    pub subfamilies: Vec<Family>,
    /// Indices of the subclasses within their classes.
    pub classes: Vec<Vec<usize>>,
    /// Region chosen for each member of the first class.
    pub colors: Vec<usize>,
    pub triangles: usize,
    pub regions: usize,
    /// Area of the union of the enclosing triangles.
    pub cover_volume: f64,
    /// Every `s`-subset of `star` meets in volume at most `tol`.
    pub no_s_wise: bool,
}

type Color = Option<Vec<usize>>;

/// Planar sparsification: encloses every nonempty `s`-wise intersection
/// of the first class in a triangle, cuts the plane by the triangle
/// sides, colors each pair of the other two classes by the regions
/// carrying the most of `B ∩ A_2 ∩ A_3`, and searches for `target_m`
/// sized subclasses on which the coloring is constant.
pub fn sparsify(
    t: &RainbowTuple,
    target_m: usize,
    tol: f64,
) -> Result<SparsifyOutcome, HypergraphError> {
    let (ev, offsets) = t.evaluator()?;
    if t.dim() != 2 {
        return Err(HypergraphError::Unsupported(format!(
            "sparsify in dimension {}",
            t.dim()
        )));
    }
    if t.m > 6 || t.s > 4 || t.s < 2 {
        return Err(HypergraphError::TooLarge(format!(
            "need m <= 6 and 2 <= s <= 4 (got m={}, s={})",
            t.m, t.s
        )));
    }
    if target_m == 0 || target_m > t.m {
        return Err(HypergraphError::InvalidParameter(format!(
            "target size {target_m} outside 1..={}",
            t.m
        )));
    }
    if let Some((c, f)) = t.families.iter().enumerate().find(|(_, f)| f.len() != t.m) {
        return Err(HypergraphError::InvalidParameter(format!(
            "class {c} has {} members, not {}",
            f.len(),
            t.m
        )));
    }
    let r = ev.clip_radius();
    let hs_of = |class: usize, i: usize| ev.member_halfspaces(offsets[class] + i);

    let mut triangles: Vec<Vec<Halfspace>> = Vec::new();
    let mut corners: Vec<P2> = Vec::new();
    let mut failure = None;
    for_each_subset(t.m, t.s, |sub| {
        if failure.is_some() {
            return;
        }
        let hs: Vec<Halfspace> = sub
            .iter()
            .flat_map(|&i| hs_of(0, i).iter().cloned())
            .collect();
        match enclosing_triangle(&hs, r) {
            Ok(Some((tri, pts))) => {
                triangles.push(tri);
                corners.extend(pts);
            }
            Ok(None) => {}
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }

    let bbox = bounding_box(&ev, &corners, r)?;
    let lines: Vec<Halfspace> = triangles.iter().flatten().cloned().collect();
    let arrangement = arrangement_uncapped(&lines, &bbox)?;
    let in_cover = |x: &[f64]| {
        triangles
            .iter()
            .any(|tri| tri.iter().all(|h| h.eval(x) <= 0.0))
    };
    let mut cover_volume = 0.0;
    let mut outside: Vec<Vec<P2>> = Vec::new();
    for reg in &arrangement.regions {
        let poly = reg.polygon.clone().expect("planar cells carry polygons");
        if in_cover(&reg.witness) {
            cover_volume += signed_area(&poly).abs();
        } else {
            outside.push(poly);
        }
    }
    let limit = t.alpha / 2.0;
    if cover_volume > limit {
        return Err(HypergraphError::SimplexCoverTooLarge {
            volume: cover_volume,
            limit,
        });
    }
    log::debug!(
        "{} triangles, {} regions, {} outside the cover",
        triangles.len(),
        arrangement.regions.len(),
        outside.len()
    );
    let cells: Vec<(Vec<Halfspace>, [P2; 2])> = outside
        .iter()
        .map(|p| (polygon_halfspaces(p), bounds(p)))
        .collect();

    // colors[a][b] for a in class 1, b in class 2
    let pairs: Vec<(usize, usize)> = (0..t.m)
        .flat_map(|a| (0..t.m).map(move |b| (a, b)))
        .collect();
    let colors: Vec<Color> = crate::par::map(&pairs, |&(a, b)| {
        (0..t.m)
            .map(|k| {
                let hs: Vec<Halfspace> = [hs_of(0, k), hs_of(1, a), hs_of(2, b)]
                    .into_iter()
                    .flatten()
                    .cloned()
                    .collect();
                best_cell(&hs, &cells, r)
            })
            .collect()
    });
    let color = |a: usize, b: usize| &colors[a * t.m + b];

    let mut distinct: Vec<&Vec<usize>> = colors.iter().flatten().collect();
    distinct.sort();
    distinct.dedup();
    let mut grid = None;
    for_each_subset(t.m, target_m, |xa| {
        if grid.is_some() {
            return;
        }
        for_each_subset(t.m, target_m, |xb| {
            if grid.is_some() {
                return;
            }
            let Some(c0) = color(xa[0], xb[0]) else {
                return;
            };
            if xa
                .iter()
                .all(|&a| xb.iter().all(|&b| color(a, b).as_ref() == Some(c0)))
            {
                grid = Some((xa.to_vec(), xb.to_vec(), c0.clone()));
            }
        });
    });
    let Some((xa, xb, chosen)) = grid else {
        return Err(HypergraphError::NoMonochromaticGrid {
            colors: distinct.len(),
        });
    };

    let star_members = (0..t.m)
        .map(|k| {
            let hs: Vec<Halfspace> = hs_of(0, k)
                .iter()
                .chain(&cells[chosen[k]].0)
                .cloned()
                .collect();
            ConvexBody::hpolytope(2, hs)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let star = Family::with_radius(2, star_members, r)?;
    let star_ev = Evaluator::new(&star, Measure::Volume)?;
    let mut no_s_wise = true;
    for_each_subset(t.m, t.s, |sub| no_s_wise &= star_ev.of(sub) <= tol);
    Ok(SparsifyOutcome {
        star,
        subfamilies: vec![t.families[1].subfamily(&xa), t.families[2].subfamily(&xb)],
        classes: vec![xa, xb],
        colors: chosen,
        triangles: triangles.len(),
        regions: arrangement.regions.len(),
        cover_volume,
        no_s_wise,
    })
}

/// Smallest triangle around the slightly inflated intersection, or `None`
/// when the intersection is empty.
fn enclosing_triangle(
    hs: &[Halfspace],
    r: f64,
) -> Result<Option<(Vec<Halfspace>, Vec<P2>)>, HypergraphError> {
    let clip = clip_polygon(hs, r);
    if clip.points.is_empty() {
        return Ok(None);
    }
    if clip.touches {
        return Err(crate::geometry::GeometryError::Unbounded.into());
    }
    let mut pts = Vec::with_capacity(4 * clip.points.len());
    for p in &clip.points {
        for (dx, dy) in [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)] {
            pts.push([p[0] + dx * INFLATE, p[1] + dy * INFLATE]);
        }
    }
    let hull = convex_hull(&pts);
    let body = ConvexBody::polygon(&hull)?;
    let tri = min_enclosing_simplex(&body, r)?;
    let corners = tri.vertices.iter().map(|v| [v[0], v[1]]).collect();
    Ok(Some((
        tri.simplex.to_halfspaces(&TangentConfig::default()),
        corners,
    )))
}

/// Box around every member and triangle corner, with a unit margin.
fn bounding_box(ev: &Evaluator, corners: &[P2], r: f64) -> Result<ConvexBody, HypergraphError> {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    let mut take = |p: &P2| {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    };
    for i in 0..ev.len() {
        let clip = clip_polygon(ev.member_halfspaces(i), r);
        if clip.touches {
            return Err(crate::geometry::GeometryError::Unbounded.into());
        }
        clip.points.iter().for_each(&mut take);
    }
    corners.iter().for_each(&mut take);
    if !(lo[0] <= hi[0]) {
        return Err(crate::geometry::GeometryError::EmptyBody.into());
    }
    Ok(ConvexBody::boxed(
        vec![lo[0] - 1.0, lo[1] - 1.0],
        vec![hi[0] + 1.0, hi[1] + 1.0],
    )?)
}

fn polygon_halfspaces(poly: &[P2]) -> Vec<Halfspace> {
    let orient = signed_area(poly).signum();
    let n = poly.len();
    (0..n)
        .filter_map(|i| {
            let p = poly[i];
            let q = poly[(i + 1) % n];
            let normal = vec![orient * (q[1] - p[1]), orient * (p[0] - q[0])];
            (normal[0] != 0.0 || normal[1] != 0.0).then(|| {
                let offset = normal[0] * p[0] + normal[1] * p[1];
                Halfspace { normal, offset }
            })
        })
        .collect()
}

fn bounds(poly: &[P2]) -> [P2; 2] {
    let mut b = [[f64::INFINITY; 2], [f64::NEG_INFINITY; 2]];
    for p in poly {
        for k in 0..2 {
            b[0][k] = b[0][k].min(p[k]);
            b[1][k] = b[1][k].max(p[k]);
        }
    }
    b
}

/// Cell holding the largest area of the polygon cut out by `hs`; `None`
/// when every cell gets zero area.
fn best_cell(hs: &[Halfspace], cells: &[(Vec<Halfspace>, [P2; 2])], r: f64) -> Option<usize> {
    let base = clip_polygon(hs, r).points;
    if base.len() < 3 {
        return None;
    }
    let bb = bounds(&base);
    let mut best: Option<(usize, f64)> = None;
    for (j, (cell, cb)) in cells.iter().enumerate() {
        if cb[1][0] < bb[0][0] || cb[0][0] > bb[1][0] || cb[1][1] < bb[0][1] || cb[0][1] > bb[1][1]
        {
            continue;
        }
        let all: Vec<Halfspace> = hs.iter().chain(cell).cloned().collect();
        let piece = clip_polygon(&all, r).points;
        let area = if piece.len() < 3 {
            0.0
        } else {
            signed_area(&piece).abs()
        };
        if area > 0.0 && best.is_none_or(|(_, a)| area > a) {
            best = Some((j, area));
        }
    }
    best.map(|(j, _)| j)
}
