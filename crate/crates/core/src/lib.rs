//! Quantitative fractional Helly toolkit.
//!
//! Convex bodies and their intersection volumes live in [`geometry`];
//! [`select`] finds large subfamilies with a common intersection of
//! guaranteed volume; [`hypergraph`] reduces `(d+1)`-wise hypotheses to
//! `2d`-wise ones; [`transversal`] solves fractional transversal and
//! matching programs with the in-repo simplex solver in [`lp`];
//! [`diameter`] repeats the pipelines with diameter in place of volume.

// `!(x > 0.0)` deliberately rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod combinatorics;
pub mod diameter;
pub mod generators;
pub mod geometry;
pub mod hypergraph;
pub mod lp;
mod par;
pub mod select;
pub mod transversal;
