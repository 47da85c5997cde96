//! Hilbert tensor operators on spaces of analytic functions in the unit disk.
//!
//! The m-order Hilbert tensor has entries `1/(i_1 + ... + i_m + 1)`. Acting on
//! the Taylor coefficients of `f(z) = sum a_k z^k` it defines the
//! (m-1)-homogeneous operator
//!
//! ```text
//! H(f)(z) = sum_k ( sum_{i_2..i_m} a_{i_2} ... a_{i_m} / (k + i_2 + ... + i_m + 1) ) z^k
//! ```
//!
//! This crate evaluates `H(f)` three ways (coefficient contraction, the line
//! integral `int_0^1 f(s)^{m-1} / (1 - z s) ds`, and the same integral along a
//! Mobius-transformed path), estimates Bergman and Hardy norms by deterministic
//! quadrature, computes the closed-form norm-bound constants, and checks those
//! bounds empirically.
//!
//! ```
//! use htl_core::{apply_series, PowerSeries, TensorOrder};
//!
//! let f = PowerSeries::from_real(&[0.0, 1.0]).unwrap();
//! let out = apply_series(&f, TensorOrder::new(2).unwrap(), 3).unwrap();
//! assert!((out.series.coeffs()[0].re - 0.5).abs() < 1e-15);
//! ```

pub mod error;
pub mod experiments;
pub mod hilbert;
pub mod quadrature;
pub mod series;
pub mod spaces;
pub mod special;
pub mod summation;

pub use error::{Error, ErrorClass, Result};
pub use experiments::{
    extremal_search, extremal_search_with, f_operator, operator_ratio, regression_corpus,
    slice_constant, t_operator, verify_bound, verify_bound_on, verify_fh_bound, verify_slice_bound,
    BoundReport, EvalConfig, FhValue, ReportKind, SearchConfig, SearchResult,
};
pub use hilbert::{
    apply_integral, apply_mobius, apply_series, hankel_kernel, hilbert_matrix_apply, mobius_phi,
    mobius_psi, output_len_for_radius, slice_operator, tensor_entry, HilbertEntryIndex,
    OperatorOutput,
};
pub use quadrature::{disk_grid, gauss_line_rule, singular_line_rule, DiskGrid, QuadratureRule};
pub use series::{convolve, power, PowerSeries, TensorOrder};
pub use spaces::{
    bergman_norm, bergman_norm_with, circle_mean, growth_bound_check, hardy_norm, Family,
    GrowthCheck, GrowthVerdict, HardyEstimate, SpaceSpec,
};
pub use special::{beta, bound_constant, gamma, ln_beta, ln_gamma, BoundConstantSpec, Regime};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
