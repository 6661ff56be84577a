//! Covering halfspaces, good tuples and the popular-subset selection.

mod claim;
mod covering;
mod measure;
mod oracle;
mod qfh;
mod tuples;

use thiserror::Error;

use crate::geometry::GeometryError;

pub use claim::{claim_verify, ClaimFailure, ClaimOutcome};
pub use covering::{covering_for, covering_halfspace, covering_halfspace_at, CoveringHalfspace};
pub use measure::{measure_halfspaces, Evaluator, Measure};
pub use oracle::{
    brute_force_best_subfamily, brute_force_best_with, fractional_helly_baseline,
    quantitative_helly_check, HellyCheck, MAX_BRUTE_FORCE_N,
};
pub use qfh::{qfh2d_select, select, select_from_table, SelectOptions, SelectionReport};
pub use tuples::{
    enumerate_good_tuples, enumerate_good_tuples_with, GoodTuple, GoodTupleTable, MAX_TUPLES,
    TIE_TOL,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SelectError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("measure {measure} is below the covering target {target}")]
    NoCoveringHalfspace { measure: f64, target: f64 },
    #[error("bisection stalled on [{lo}, {hi}]")]
    BisectionStalled { lo: f64, hi: f64 },
    #[error("{n} members, need at least {need}")]
    TooFewMembers { n: usize, need: usize },
    #[error("{tuples} subsets exceed the enumeration limit {max}")]
    FamilyTooLarge { tuples: u128, max: u128 },
    #[error("no good tuples")]
    NoGoodTuples,
    #[error("claim fails for member {k} in case {case} on {subset:?}: {detail}")]
    ClaimFailed {
        k: usize,
        case: u8,
        subset: Vec<String>,
        detail: String,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
