use serde::{Deserialize, Serialize};

use super::HypergraphError;
use crate::combinatorics::for_each_subset;
use crate::geometry::Family;
use crate::select::{Evaluator, Measure};

/// `d+1` classes of `m` bodies: colorful `(d+1)`-wise intersections have
/// volume at least `alpha`, while any `s` members of one class meet in
/// volume at most `epsilon`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RainbowTuple {
    pub families: Vec<Family>,
    pub m: usize,
    pub alpha: f64,
    pub s: usize,
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RainbowViolation {
    Size {
        class: usize,
        len: usize,
    },
    /// One member index per class.
    Colorful {
        members: Vec<usize>,
        volume: f64,
    },
    SameClass {
        class: usize,
        members: Vec<usize>,
        volume: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RainbowCheck {
    pub ok: bool,
    pub violation: Option<RainbowViolation>,
}

impl RainbowTuple {
    pub fn dim(&self) -> usize {
        self.families.first().map_or(0, Family::dim)
    }

    fn check_shape(&self) -> Result<usize, HypergraphError> {
        let d = self.dim();
        if self.families.len() != d + 1 {
            return Err(HypergraphError::InvalidParameter(format!(
                "{} classes in dimension {d}, need {}",
                self.families.len(),
                d + 1
            )));
        }
        if let Some(f) = self.families.iter().find(|f| f.dim() != d) {
            return Err(crate::geometry::GeometryError::DimensionMismatch {
                expected: d,
                got: f.dim(),
            }
            .into());
        }
        Ok(d)
    }

    /// Volume evaluator over all classes concatenated, with the start
    /// offset of every class.
    pub(crate) fn evaluator(&self) -> Result<(Evaluator, Vec<usize>), HypergraphError> {
        let d = self.check_shape()?;
        let mut offsets = Vec::with_capacity(self.families.len());
        let mut members = Vec::new();
        for f in &self.families {
            offsets.push(members.len());
            members.extend(f.members().iter().cloned());
        }
        let radius = self
            .families
            .iter()
            .map(Family::bounding_radius)
            .fold(0.0, f64::max);
        let merged = Family::with_radius(d, members, radius)?;
        Ok((Evaluator::new(&merged, Measure::Volume)?, offsets))
    }
}

/// Exhaustive check of the three rainbow conditions; the first violation
/// found is returned.
pub fn verify_rainbow(t: &RainbowTuple, tol: f64) -> Result<RainbowCheck, HypergraphError> {
    let (ev, offsets) = t.evaluator()?;
    let bad = |v| {
        Ok(RainbowCheck {
            ok: false,
            violation: Some(v),
        })
    };
    for (class, f) in t.families.iter().enumerate() {
        if f.len() != t.m {
            return bad(RainbowViolation::Size {
                class,
                len: f.len(),
            });
        }
    }
    if t.m == 0 {
        return Ok(RainbowCheck {
            ok: true,
            violation: None,
        });
    }
    let h = t.families.len();
    let mut pick = vec![0usize; h];
    let mut idx = vec![0usize; h];
    loop {
        for c in 0..h {
            idx[c] = offsets[c] + pick[c];
        }
        let v = ev.of(&idx);
        if !(v >= t.alpha - tol) {
            return bad(RainbowViolation::Colorful {
                members: pick,
                volume: v,
            });
        }
        let mut c = 0;
        while c < h {
            pick[c] += 1;
            if pick[c] < t.m {
                break;
            }
            pick[c] = 0;
            c += 1;
        }
        if c == h {
            break;
        }
    }
    for class in 0..h {
        let mut found = None;
        for_each_subset(t.m, t.s, |sub| {
            if found.is_some() {
                return;
            }
            let idx: Vec<usize> = sub.iter().map(|&i| offsets[class] + i).collect();
            let v = ev.of(&idx);
            if !(v <= t.epsilon + tol) {
                found = Some((sub.to_vec(), v));
            }
        });
        if let Some((members, volume)) = found {
            return bad(RainbowViolation::SameClass {
                class,
                members,
                volume,
            });
        }
    }
    Ok(RainbowCheck {
        ok: true,
        violation: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QcfhHit {
    pub class: usize,
    pub members: Vec<usize>,
    pub volume: f64,
}

/// First class and `2d`-subset of it, in lexicographic order, whose
/// intersection has volume at least `delta`. Classes with fewer than
/// `2d` members are skipped.
pub fn weak_qcfh_search(t: &RainbowTuple, delta: f64) -> Result<Option<QcfhHit>, HypergraphError> {
    let (ev, offsets) = t.evaluator()?;
    let k = 2 * t.dim();
    for (class, f) in t.families.iter().enumerate() {
        if f.len() < k {
            continue;
        }
        let mut hit = None;
        for_each_subset(f.len(), k, |sub| {
            if hit.is_some() {
                return;
            }
            let idx: Vec<usize> = sub.iter().map(|&i| offsets[class] + i).collect();
            let v = ev.of(&idx);
            if v >= delta {
                hit = Some(QcfhHit {
                    class,
                    members: sub.to_vec(),
                    volume: v,
                });
            }
        });
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}
