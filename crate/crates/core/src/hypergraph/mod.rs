//! Uniform hypergraphs over family indices, partite copies, rainbow
//! tuples and the reduction from `(d+1)`-wise to `2d`-wise hypotheses.

mod graph;
mod rainbow;
mod reduce;
mod sparsify;

use thiserror::Error;

use crate::geometry::GeometryError;
use crate::select::SelectError;

pub use graph::{
    count_partite_copies, find_partite_copy, find_partite_copy_from, PartiteCopy,
    UniformHypergraph, MAX_VERTICES,
};
pub use rainbow::{
    verify_rainbow, weak_qcfh_search, QcfhHit, RainbowCheck, RainbowTuple, RainbowViolation,
};
pub use reduce::{
    good_hypergraph, reduce_d1_to_2d, reduce_with_hypergraph, ReduceOptions, ReductionOutcome,
};
pub use sparsify::{sparsify, SparsifyOutcome};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HypergraphError {
    #[error("invalid edge: {0}")]
    InvalidEdge(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Select(#[from] SelectError),
    #[error("{n} members, need at least {need}")]
    TooFewMembers { n: usize, need: usize },
    #[error("no partite copy found in {restarts} restarts")]
    NoCopies { restarts: usize },
    #[error("no monochromatic grid among {colors} colors")]
    NoMonochromaticGrid { colors: usize },
    #[error("simplex cover has volume {volume}, above {limit}")]
    SimplexCoverTooLarge { volume: f64, limit: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
