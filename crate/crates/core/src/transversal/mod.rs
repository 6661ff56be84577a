//! Fractional transversal and matching programs over finite witness
//! sets, their rounding, and the `(p, d+1)` transversal pipeline.

mod hypothesis;
mod net;
mod pipeline;
mod programs;
mod rational;
mod witness;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::GeometryError;
use crate::lp::LpError;
use crate::select::SelectError;

pub use hypothesis::{
    pq_constants, pq_hypothesis_check, pq_hypothesis_measure, PqCheck, MAX_P_SUBSETS,
};
pub use net::{
    min_cover_exhaustive, weak_epsilon_net_greedy, weak_epsilon_net_matrix, TransversalCertificate,
};
pub use pipeline::{pq_transversal, PqOptions, PqTransversalReport};
pub use programs::{
    frac_matching_lp, frac_matching_matrix, frac_transversal_lp, frac_transversal_matrix,
    FractionalAssignment,
};
pub use rational::{multiset_expand, rationalize, ExpandedFamily, DEFAULT_MAX_DEN, MAX_EXPANDED};
pub use witness::{containment_matrix, contains_body, generate_witnesses, WitnessKind, WitnessSet};

/// Pipeline step an error came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Hypothesis,
    Witnesses,
    Lp,
    Net,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Stage::Hypothesis => "hypothesis",
            Stage::Witnesses => "witnesses",
            Stage::Lp => "lp",
            Stage::Net => "net",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransversalError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Select(#[from] SelectError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("member {member} contains no witness")]
    Uncovered { member: usize },
    #[error("witness {index} has volume {volume}, below {v}")]
    SmallWitness { index: usize, volume: f64, v: f64 },
    #[error("common denominator exceeds the limit: {0}")]
    DenominatorOverflow(String),
    #[error("{subsets} subsets exceed the enumeration limit {max}")]
    BudgetExceeded { subsets: u128, max: u128 },
    #[error("no {q} members of {subset:?} reach the threshold")]
    HypothesisFailed { subset: Vec<usize>, q: usize },
    #[error("member {member} holds witness weight {weight}, below {eps}")]
    LowWeight {
        member: usize,
        weight: f64,
        eps: f64,
    },
    #[error("{stage} stage: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<TransversalError>,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl TransversalError {
    pub(crate) fn at(self, stage: Stage) -> Self {
        TransversalError::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
