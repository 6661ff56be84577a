use serde::{Deserialize, Serialize};

use super::GeometryError;

pub type Point = Vec<f64>;

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn sub(a: &[f64], b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// The closed halfspace `{x : normal . x <= offset}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self, GeometryError> {
        if normal.is_empty() {
            return Err(GeometryError::InvalidBody(
                "halfspace of dimension 0".into(),
            ));
        }
        if !normal.iter().all(|v| v.is_finite()) || !offset.is_finite() {
            return Err(GeometryError::InvalidBody("non-finite halfspace".into()));
        }
        if norm(&normal) == 0.0 {
            return Err(GeometryError::InvalidBody("zero halfspace normal".into()));
        }
        Ok(Self { normal, offset })
    }

    /// `H(t) = {x : x_axis <= t}`.
    pub fn axis_upper(dim: usize, axis: usize, t: f64) -> Self {
        let mut normal = vec![0.0; dim];
        normal[axis] = 1.0;
        Self { normal, offset: t }
    }

    /// `{x : x_axis >= t}`.
    pub fn axis_lower(dim: usize, axis: usize, t: f64) -> Self {
        let mut normal = vec![0.0; dim];
        normal[axis] = -1.0;
        Self { normal, offset: -t }
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// Signed slack `normal . x - offset` (negative inside).
    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.eval(x) <= tol * norm(&self.normal).max(1.0)
    }

    /// Same set with a unit normal.
    pub fn normalized(&self) -> Self {
        let n = norm(&self.normal);
        Self {
            normal: self.normal.iter().map(|v| v / n).collect(),
            offset: self.offset / n,
        }
    }

    /// The complementary closed halfspace `{x : normal . x >= offset}`.
    pub fn flipped(&self) -> Self {
        Self {
            normal: self.normal.iter().map(|v| -v).collect(),
            offset: -self.offset,
        }
    }

    /// `Some((axis, upper))` when the normal is a multiple of a basis vector.
    pub fn axis_aligned(&self) -> Option<(usize, bool, f64)> {
        let mut found = None;
        for (i, &v) in self.normal.iter().enumerate() {
            if v != 0.0 {
                if found.is_some() {
                    return None;
                }
                found = Some((i, v));
            }
        }
        found.map(|(i, v)| (i, v > 0.0, self.offset / v))
    }
}
