//! Deterministic pairwise (tree) reduction.
//!
//! Every final reduction in the crate goes through these helpers so that a
//! given input vector always sums in the same order regardless of how the
//! terms were produced.

use std::ops::Add;

use crate::C64;

const BLOCK: usize = 8;

fn pairwise<T: Copy + Add<Output = T>>(xs: &[T], zero: T) -> T {
    if xs.len() <= BLOCK {
        return xs.iter().fold(zero, |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise(&xs[..mid], zero) + pairwise(&xs[mid..], zero)
}

pub fn pairwise_sum(xs: &[f64]) -> f64 {
    pairwise(xs, 0.0)
}

pub fn pairwise_sum_complex(xs: &[C64]) -> C64 {
    pairwise(xs, C64::new(0.0, 0.0))
}

/// `sum_i a_i b_i` with the same tree shape as [`pairwise_sum_complex`], without allocating.
pub fn pairwise_dot(a: &[C64], b: &[C64]) -> C64 {
    let n = a.len().min(b.len());
    if n <= BLOCK {
        return a[..n]
            .iter()
            .zip(&b[..n])
            .fold(C64::new(0.0, 0.0), |acc, (&x, &y)| acc + x * y);
    }
    let mid = n / 2;
    pairwise_dot(&a[..mid], &b[..mid]) + pairwise_dot(&a[mid..n], &b[mid..n])
}
