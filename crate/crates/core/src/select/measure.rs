use serde::{Deserialize, Serialize};

use crate::geometry::{
    axis_box, clipped_vertices, point_set_diameter, volume_exact, AxisBox, ConvexBody, Family,
    GeometryError, Halfspace, TangentConfig, GEOM_TOL,
};

/// Size functional used by the selection pipelines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Volume,
    Diameter,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::Volume => "volume",
            Measure::Diameter => "diameter",
        }
    }
}

/// Halfspace lists of a family prepared once, for repeated evaluation of
/// `measure(∩ members ∩ extra)`. Empty sets measure 0 and unbounded ones
/// `INFINITY`.
#[derive(Debug, Clone)]
pub struct Evaluator {
    dim: usize,
    clip: f64,
    measure: Measure,
    halfspaces: Vec<Vec<Halfspace>>,
    boxes: Vec<Option<AxisBox>>,
}

impl Evaluator {
    pub fn new(family: &Family, measure: Measure) -> Result<Self, GeometryError> {
        Self::with_tangents(family, measure, &TangentConfig::default())
    }

    pub fn with_tangents(
        family: &Family,
        measure: Measure,
        tangents: &TangentConfig,
    ) -> Result<Self, GeometryError> {
        let dim = family.dim();
        if measure == Measure::Volume && dim > 3 {
            return Err(GeometryError::ExactDimensionUnsupported(dim));
        }
        let halfspaces: Vec<Vec<Halfspace>> = family
            .members()
            .iter()
            .map(|b| b.to_halfspaces(tangents))
            .collect();
        let boxes = halfspaces.iter().map(|hs| axis_box(dim, hs)).collect();
        Ok(Self {
            dim,
            clip: family.bounding_radius(),
            measure,
            halfspaces,
            boxes,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.halfspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.halfspaces.is_empty()
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn clip_radius(&self) -> f64 {
        self.clip
    }

    pub fn member_halfspaces(&self, i: usize) -> &[Halfspace] {
        &self.halfspaces[i]
    }

    /// Halfspace list of `∩_{i in idx} F_i ∩ extra`.
    pub fn collect(&self, idx: &[usize], extra: &[Halfspace]) -> Vec<Halfspace> {
        idx.iter()
            .flat_map(|&i| self.halfspaces[i].iter().cloned())
            .chain(extra.iter().cloned())
            .collect()
    }

    pub fn of(&self, idx: &[usize]) -> f64 {
        self.of_with(idx, &[])
    }

    pub fn of_with(&self, idx: &[usize], extra: &[Halfspace]) -> f64 {
        if let Some(b) = self.box_of(idx, extra) {
            return self.box_size(&b);
        }
        self.of_halfspaces(&self.collect(idx, extra))
    }

    pub fn of_halfspaces(&self, hs: &[Halfspace]) -> f64 {
        measure_halfspaces(self.measure, self.dim, hs, self.clip)
    }

    pub fn of_body(&self, body: &ConvexBody) -> f64 {
        self.of_halfspaces(&body.to_halfspaces(&TangentConfig::default()))
    }

    fn box_of(&self, idx: &[usize], extra: &[Halfspace]) -> Option<AxisBox> {
        let mut lo = vec![f64::NEG_INFINITY; self.dim];
        let mut hi = vec![f64::INFINITY; self.dim];
        for &i in idx {
            let b = self.boxes[i].as_ref()?;
            for k in 0..self.dim {
                lo[k] = lo[k].max(b.lo[k]);
                hi[k] = hi[k].min(b.hi[k]);
            }
        }
        if !extra.is_empty() {
            let e = axis_box(self.dim, extra)?;
            for k in 0..self.dim {
                lo[k] = lo[k].max(e.lo[k]);
                hi[k] = hi[k].min(e.hi[k]);
            }
        }
        Some(AxisBox { lo, hi })
    }

    fn box_size(&self, b: &AxisBox) -> f64 {
        match self.measure {
            Measure::Volume => b.volume(self.clip).size(),
            Measure::Diameter => box_diameter(b, self.clip),
        }
    }
}

fn box_diameter(b: &AxisBox, clip: f64) -> f64 {
    let mut s = 0.0;
    for (&l, &h) in b.lo.iter().zip(&b.hi) {
        if l > h + GEOM_TOL * (1.0 + l.abs().max(h.abs())) {
            return 0.0;
        }
        if l <= -clip || h >= clip {
            return f64::INFINITY;
        }
        s += (h - l).max(0.0).powi(2);
    }
    s.sqrt()
}

/// `measure` of the clipped polytope `∩ hs`.
pub fn measure_halfspaces(measure: Measure, dim: usize, hs: &[Halfspace], clip: f64) -> f64 {
    match measure {
        Measure::Volume => volume_exact(dim, hs, clip)
            .map(|v| v.size())
            .unwrap_or(f64::NAN),
        Measure::Diameter => {
            if let Some(b) = axis_box(dim, hs) {
                return box_diameter(&b, clip);
            }
            let c = clipped_vertices(dim, hs, clip);
            if c.points.is_empty() {
                0.0
            } else if c.touches {
                f64::INFINITY
            } else {
                point_set_diameter(&c.points)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_path_matches_general_path() {
        let f = Family::new(
            2,
            vec![
                ConvexBody::boxed(vec![0.0, 0.0], vec![2.0, 2.0]).unwrap(),
                ConvexBody::boxed(vec![1.0, 0.5], vec![3.0, 3.0]).unwrap(),
            ],
        )
        .unwrap();
        for m in [Measure::Volume, Measure::Diameter] {
            let ev = Evaluator::new(&f, m).unwrap();
            let fast = ev.of(&[0, 1]);
            let slow = measure_halfspaces(m, 2, &ev.collect(&[0, 1], &[]), 1e6);
            let tilted = Halfspace::new(vec![1.0, 1e-9], 10.0).unwrap();
            let general = ev.of_with(&[0, 1], &[tilted]);
            assert!((fast - slow).abs() < 1e-12);
            assert!((fast - general).abs() < 1e-6);
        }
    }

    #[test]
    fn unbounded_and_empty_sizes() {
        let f = Family::new(
            2,
            vec![
                ConvexBody::halfspace(Halfspace::axis_upper(2, 0, 0.0)).unwrap(),
                ConvexBody::cube(2, 5.0, 1.0),
            ],
        )
        .unwrap();
        let ev = Evaluator::new(&f, Measure::Diameter).unwrap();
        assert_eq!(ev.of(&[0]), f64::INFINITY);
        assert_eq!(ev.of(&[0, 1]), 0.0);
    }
}
