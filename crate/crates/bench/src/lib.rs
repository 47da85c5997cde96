//! Fixtures shared by the benchmarks.

use htl_core::{regression_corpus, PowerSeries};

pub const FIXTURE_SEED: u64 = 17;

/// Seeded polynomial with exactly `len` random coefficients.
pub fn fixture(len: usize) -> PowerSeries {
    let coeffs = regression_corpus(FIXTURE_SEED, len, 1)
        .iter()
        .map(|c| c.coeffs()[0])
        .collect();
    PowerSeries::new(coeffs).expect("nonempty finite coefficients")
}
