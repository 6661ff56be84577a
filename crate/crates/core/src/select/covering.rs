use serde::{Deserialize, Serialize};

use super::measure::{measure_halfspaces, Measure};
use super::SelectError;
use crate::geometry::{axis_extent, ConvexBody, Halfspace, TangentConfig, DEFAULT_BOUNDING_RADIUS};

const BISECTION_STEPS: usize = 200;

/// `H(t) = {x : x_d <= t}` with `t` minimal such that the part of the
/// body below it reaches the target measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringHalfspace {
    pub t: f64,
    pub halfspace: Halfspace,
}

/// Covering halfspace of `K` for unit volume.
pub fn covering_halfspace(k: &ConvexBody, tol: f64) -> Result<CoveringHalfspace, SelectError> {
    let hs = k.to_halfspaces(&TangentConfig::default());
    covering_for(
        Measure::Volume,
        k.dim(),
        &hs,
        1.0,
        tol,
        DEFAULT_BOUNDING_RADIUS,
    )
}

/// Covering halfspace for an arbitrary target measure.
pub fn covering_halfspace_at(
    k: &ConvexBody,
    measure: Measure,
    target: f64,
    tol: f64,
    clip: f64,
) -> Result<CoveringHalfspace, SelectError> {
    let hs = k.to_halfspaces(&TangentConfig::default());
    covering_for(measure, k.dim(), &hs, target, tol, clip)
}

/// Bisection on `t` over the `x_d` extent of `∩ hs` for the smallest `t`
/// with `measure(∩ hs ∩ H(t)) >= target`. The map is monotone in `t`. A
/// body whose measure falls short of the target by at most `tol` gets the
/// top of its extent.
pub fn covering_for(
    measure: Measure,
    dim: usize,
    hs: &[Halfspace],
    target: f64,
    tol: f64,
    clip: f64,
) -> Result<CoveringHalfspace, SelectError> {
    let axis = dim - 1;
    let total = measure_halfspaces(measure, dim, hs, clip);
    if !(total >= target - tol) {
        return Err(SelectError::NoCoveringHalfspace {
            measure: total,
            target,
        });
    }
    let (lo, hi) = axis_extent(dim, hs, axis, clip).ok_or(SelectError::NoCoveringHalfspace {
        measure: 0.0,
        target,
    })?;
    let goal = target.min(total);
    let mut buf: Vec<Halfspace> = hs.to_vec();
    buf.push(Halfspace::axis_upper(dim, axis, hi));
    let mut f = |t: f64| {
        buf.last_mut().expect("cut").offset = t;
        measure_halfspaces(measure, dim, &buf, clip)
    };
    let (mut a, mut b) = (lo, hi);
    if f(a) >= goal {
        b = a;
    }
    let mut steps = 0;
    while b - a > 1e-13 * (1.0 + a.abs().max(b.abs())) {
        steps += 1;
        if steps > BISECTION_STEPS {
            return Err(SelectError::BisectionStalled { lo: a, hi: b });
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if f(mid) >= goal {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(CoveringHalfspace {
        t: b,
        halfspace: Halfspace::axis_upper(dim, axis, b),
    })
}
