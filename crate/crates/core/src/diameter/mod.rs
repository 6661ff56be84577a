//! Diameter versions of the selection and transversal pipelines, Gale's
//! enclosing simplex and the removal bound.

mod gale;
mod removal;
mod segments;

use serde::{Deserialize, Serialize};

use crate::geometry::Family;
use crate::select::{select, Measure, SelectError, SelectOptions, SelectionReport};

pub use gale::{gale_enclosing_simplex, GaleSimplex};
pub use removal::{diameter_after_removal, RemovalBound, DEFAULT_REMOVAL_SAMPLES};
pub use segments::{
    diameter_pq_transversal, generate_segments, segment_containment, segment_in, Segment,
    SegmentCertificate, SegmentReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiameterThresholdConfig {
    pub threshold: f64,
    pub removal_bound: f64,
}

impl Default for DiameterThresholdConfig {
    fn default() -> Self {
        Self {
            threshold: 1.0,
            removal_bound: 0.5,
        }
    }
}

impl DiameterThresholdConfig {
    pub fn validate(&self) -> Result<(), SelectError> {
        if self.threshold > 0.0 && self.removal_bound > 0.0 {
            Ok(())
        } else {
            Err(SelectError::InvalidParameter(format!(
                "threshold {} and removal bound {} must be positive",
                self.threshold, self.removal_bound
            )))
        }
    }
}

/// Selection with diameter in place of volume; the common intersection
/// of the selected members must have positive diameter.
pub fn qfh_diameter_select(
    family: &Family,
    cfg: &DiameterThresholdConfig,
    tol: f64,
) -> Result<SelectionReport, SelectError> {
    cfg.validate()?;
    let report = select(
        family,
        &SelectOptions {
            measure: Measure::Diameter,
            threshold: cfg.threshold,
            tol,
            ..SelectOptions::default()
        },
    )?;
    if !(report.measured_volume > 0.0) {
        return Err(SelectError::ClaimFailed {
            k: report.selected.first().copied().unwrap_or(0),
            case: 0,
            subset: report.selected.iter().map(|i| i.to_string()).collect(),
            detail: format!(
                "selected intersection has diameter {}",
                report.measured_volume
            ),
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ConvexBody;

    #[test]
    fn identical_segments_all_selected() {
        let f = Family::new(
            2,
            vec![ConvexBody::boxed(vec![0.0, 0.0], vec![1.0, 0.01]).unwrap(); 8],
        )
        .unwrap();
        let r = qfh_diameter_select(&f, &DiameterThresholdConfig::default(), 1e-9).unwrap();
        assert_eq!(r.selected.len(), 8);
        assert!((r.measured_volume - (1.0f64 + 1e-4).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn short_pairwise_overlaps_have_no_good_tuples() {
        // unit squares on a line with overlaps of width 0.1: pairwise diameters are about 1
        // but three-wise ones vanish, so 4-subsets never reach 1
        let f = Family::new(
            2,
            (0..8)
                .map(|i| ConvexBody::cube(2, 0.9 * i as f64, 1.0))
                .collect(),
        )
        .unwrap();
        assert!(matches!(
            qfh_diameter_select(&f, &DiameterThresholdConfig::default(), 1e-9),
            Err(SelectError::NoGoodTuples)
        ));
    }
}
