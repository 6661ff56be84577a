//! Convex bodies, intersections, volumes and related approximations.

mod arrangement;
mod body;
mod ellipsoid;
mod halfspace;
pub mod hull;
mod metric;
mod simplex;
mod volume;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::LpError;

pub(crate) use arrangement::arrangement_uncapped;
pub use arrangement::{
    build_arrangement, build_arrangement_lp, region_count_formula, Arrangement, Region,
    MAX_ARRANGEMENT_HYPERPLANES,
};
pub use body::{
    ellipsoid_gauge, BodyKind, ConvexBody, Family, TangentConfig, DEFAULT_BOUNDING_RADIUS,
    FAMILY_SCHEMA_VERSION, GEOM_TOL,
};
pub(crate) use ellipsoid::ellipsoid_sqrt_det;
pub use ellipsoid::{dilate_ellipsoid, max_inscribed_ellipsoid};
pub use halfspace::{dist, dot, norm, sub, Halfspace, Point};
pub use metric::{chebyshev_ball, diameter, point_set_diameter, vertices, Ball};
pub use simplex::{min_enclosing_simplex, EnclosingSimplex};
pub use simplex::{regular_simplex, simplex_halfspaces, simplex_volume};
pub(crate) use volume::{axis_box, clip_polygon, clipped_vertices, AxisBox};
pub use volume::{
    axis_extent, intersect, intersect_with, is_feasible, polytope_support, unit_ball_volume,
    volume, volume_exact, VolumeMode,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("invalid body: {0}")]
    InvalidBody(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty list of bodies")]
    EmptyList,
    #[error("body is empty")]
    EmptyBody,
    #[error("body has empty interior")]
    EmptyInterior,
    #[error("body is unbounded")]
    Unbounded,
    #[error("exact computation not supported in dimension {0}")]
    ExactDimensionUnsupported(usize),
    #[error("clip radius must be positive, got {0}")]
    NonPositiveClipRadius(f64),
    #[error("Monte Carlo volume needs at least one sample")]
    NoSamples,
    #[error("no convergence after {0} iterations")]
    NonConvergence(usize),
    #[error("{n} hyperplanes exceed the limit of {max}")]
    TooManyHyperplanes { n: usize, max: usize },
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Volume of a set after clipping to `[-R, R]^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum VolumeKind {
    Finite(f64),
    Infinite,
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeValue {
    pub kind: VolumeKind,
    /// Sample standard error, only for Monte Carlo estimates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
}

impl VolumeValue {
    pub const EMPTY: Self = Self {
        kind: VolumeKind::Empty,
        stderr: None,
    };
    pub const INFINITE: Self = Self {
        kind: VolumeKind::Infinite,
        stderr: None,
    };

    pub fn finite(v: f64) -> Self {
        Self {
            kind: VolumeKind::Finite(v.max(0.0)),
            stderr: None,
        }
    }

    /// Numeric size: `0` for empty sets, `INFINITY` for unbounded ones.
    pub fn size(&self) -> f64 {
        match self.kind {
            VolumeKind::Finite(v) => v,
            VolumeKind::Infinite => f64::INFINITY,
            VolumeKind::Empty => 0.0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.kind == VolumeKind::Empty
    }

    pub fn is_infinite(&self) -> bool {
        self.kind == VolumeKind::Infinite
    }
}
