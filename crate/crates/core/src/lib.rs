//! Exact analysis of finite single-system operational theories.
//!
//! States are tuples of outcome distributions over a fixed list of fiducial
//! measurements, with every probability an exact [`Rational`]. On top of that
//! the crate provides simplex tests and affine dependencies, an exact LP
//! solver with Farkas certificates, joint measurability, disturbance and
//! uncertainty analyses, gdit theories, ontological models, and contextuality
//! tools (joint distributions, OS/XOS inequalities, contextual boxes).
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod comeasure;
pub mod contextuality;
pub mod error;
pub mod fixtures;
pub mod gdit;
pub mod geometry;
pub mod ontology;
pub mod rational;
pub mod sampling;
pub mod statics;
pub mod theory;

pub use error::{Error, Result};
pub use rational::{rat, Rational};
pub use theory::{Eigenstate, Measurement, Mixture, Point, PureState, Theory};

/// All outcome tuples for the given outcome counts, in lexicographic order
/// with the first position most significant.
pub fn outcome_tuples(counts: &[usize]) -> alloc::vec::Vec<alloc::vec::Vec<usize>> {
    let total: usize = counts.iter().product();
    let mut out = alloc::vec::Vec::with_capacity(total);
    let mut cur = alloc::vec![0usize; counts.len()];
    for _ in 0..total {
        out.push(cur.clone());
        for pos in (0..counts.len()).rev() {
            cur[pos] += 1;
            if cur[pos] < counts[pos] {
                break;
            }
            cur[pos] = 0;
        }
    }
    out
}

/// Position of `tuple` in [`outcome_tuples`] order.
pub fn tuple_index(counts: &[usize], tuple: &[usize]) -> usize {
    tuple
        .iter()
        .zip(counts)
        .fold(0, |acc, (&v, &n)| acc * n + v)
}
