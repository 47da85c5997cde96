//! Normalized operators, empirical bound verification and extremal search.

mod evaluator;
mod report;
mod search;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hilbert::{apply_integral, apply_series, slice_operator, OperatorOutput};
use crate::quadrature::{disk_grid, singular_line_rule, DiskGrid, QuadratureRule};
use crate::series::{PowerSeries, TensorOrder};
use crate::spaces::{bergman_norm_with, lp_from_moduli};
use crate::special::{bound_constant, BoundConstantSpec, Regime};
use crate::C64;

use evaluator::{poly_bergman_norm, RatioEvaluator};
pub use report::{BoundReport, EvalConfig, ReportKind, REPORT_SCHEMA};
pub use search::{
    extremal_search, extremal_search_with, SearchConfig, SearchResult, DEFAULT_RESTARTS,
    SEARCH_SCHEMA,
};

/// Norms below this are treated as the zero function.
const ZERO_NORM: f64 = 1e-300;
/// Below this modulus the root operator reports a branch warning.
const ROOT_FLOOR: f64 = 1e-13;

/// Label for left-hand sides evaluated through the closed-form Hankel kernel.
pub const EXACT_HANKEL: &str = "exact_hankel";
/// Label for left-hand sides evaluated by line quadrature at every node.
pub const LINE_QUADRATURE: &str = "line_quadrature";
/// Label for slice integrands sampled directly.
pub const DIRECT: &str = "direct";

fn check_tensor_exponent(p: f64) -> Result<Regime> {
    Regime::for_tensor(p)
}

fn check_nonzero(f: &PowerSeries) -> Result<()> {
    if f.is_zero() {
        return Err(Error::input("bound verification needs a nonzero input"));
    }
    Ok(())
}

/// `T_H(f) = ||f||_{A^{p(m-1)}}^{2-m} H(f)`, and `T_H(0) = 0`.
pub fn t_operator(
    f: &PowerSeries,
    p: f64,
    m: TensorOrder,
    out_len: usize,
    grid: &DiskGrid,
) -> Result<OperatorOutput> {
    check_tensor_exponent(p)?;
    let norm = poly_bergman_norm(f.coeffs(), p * m.degree() as f64, grid);
    if f.is_zero() || norm < ZERO_NORM {
        return OperatorOutput::zero(f, m, out_len);
    }
    let out = apply_series(f, m, out_len)?;
    if m.get() == 2 {
        return Ok(out);
    }
    Ok(out.scaled(norm.powi(2 - m.get() as i32)))
}

/// Value of the root operator at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FhValue {
    pub value: C64,
    /// Set when `|H(f)(z)|` was below the root floor and 0 was returned.
    pub branch_warning: bool,
}

fn principal_root(w: C64, d: u32) -> FhValue {
    if w.norm() < ROOT_FLOOR {
        return FhValue {
            value: C64::new(0.0, 0.0),
            branch_warning: true,
        };
    }
    let value = if d == 1 { w } else { (w.ln() / d as f64).exp() };
    FhValue {
        value,
        branch_warning: false,
    }
}

/// `F_H(f)(z) = H(f)(z)^{1/(m-1)}` on the principal branch, for even `m`.
pub fn f_operator(
    f: &PowerSeries,
    m: TensorOrder,
    z: C64,
    rule: &QuadratureRule,
) -> Result<FhValue> {
    if !m.is_even() {
        return Err(Error::domain(format!(
            "the root operator needs even m, got m = {}",
            m.get()
        )));
    }
    let w = apply_integral(f, m, z, rule)?;
    Ok(principal_root(w, m.degree()))
}

/// Checks `||H(f)||_{A^p} <= C(p) ||f||_{A^{p(m-1)}}^{m-1}` for `p > 2`.
pub fn verify_bound(
    f: &PowerSeries,
    p: f64,
    m: TensorOrder,
    config: &EvalConfig,
) -> Result<BoundReport> {
    let grid = disk_grid(config.radial_order, config.n_theta)?;
    verify_bound_on(f, p, m, config, &grid)
}

/// As [`verify_bound`] with a prebuilt grid matching `config`.
pub fn verify_bound_on(
    f: &PowerSeries,
    p: f64,
    m: TensorOrder,
    config: &EvalConfig,
    grid: &DiskGrid,
) -> Result<BoundReport> {
    let regime = check_tensor_exponent(p)?;
    check_nonzero(f)?;
    let constant = bound_constant(BoundConstantSpec::new(regime, p, m))?;
    let parts = RatioEvaluator::new(p, m, f.len(), grid).parts(f)?;
    Ok(BoundReport {
        kind: ReportKind::Tensor,
        p,
        m,
        regime,
        t: None,
        input: f.clone(),
        config: *config,
        evaluation: EXACT_HANKEL,
        lhs: parts.output_norm,
        constant,
        input_norm: parts.input_norm,
        input_norm_power: m.degree(),
        branch_warnings: 0,
    })
}

/// Slice factor: `t^{2/p-1} (1-t)^{-2/p}` for `p >= 4`,
/// `2^{4/p-1} t^{-2/p} (1-t)^{-2/p}` for `2 < p < 4`.
pub fn slice_constant(p: f64, t: f64) -> Result<(Regime, f64)> {
    let regime = check_tensor_exponent(p)?;
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::domain(format!(
            "slice parameter must satisfy 0 < t < 1, got {t}"
        )));
    }
    let e = 2.0 / p;
    let c = match regime {
        Regime::TensorLargeP => t.powf(e - 1.0) * (1.0 - t).powf(-e),
        _ => 2f64.powf(2.0 * e - 1.0) * t.powf(-e) * (1.0 - t).powf(-e),
    };
    Ok((regime, c))
}

/// Checks the per-slice bound on `||T_t(f)||_{A^p}`.
pub fn verify_slice_bound(
    f: &PowerSeries,
    p: f64,
    m: TensorOrder,
    t: f64,
    grid: &DiskGrid,
) -> Result<BoundReport> {
    let (regime, constant) = slice_constant(p, t)?;
    check_nonzero(f)?;
    slice_operator(f, m, t, C64::new(0.0, 0.0))?;
    let d = m.degree();
    let lhs = bergman_norm_with(
        |z| {
            let psi = 1.0 / ((t - 1.0) * z + 1.0);
            f.eval(psi * t).powu(d) * psi
        },
        p,
        grid,
    )?;
    let input_norm = poly_bergman_norm(f.coeffs(), p * d as f64, grid);
    Ok(BoundReport {
        kind: ReportKind::Slice,
        p,
        m,
        regime,
        t: Some(t),
        input: f.clone(),
        config: EvalConfig {
            radial_order: grid.radial_order(),
            n_theta: grid.n_theta(),
            line_order: 0,
            levels: 0,
        },
        evaluation: DIRECT,
        lhs,
        constant,
        input_norm,
        input_norm_power: d,
        branch_warnings: 0,
    })
}

/// Checks `||F_H(f)||_{A^p} <= C ||f||_{A^p}` for even `m` and `p > 2(m-1)`.
pub fn verify_fh_bound(
    f: &PowerSeries,
    p: f64,
    m: TensorOrder,
    config: &EvalConfig,
) -> Result<BoundReport> {
    if !m.is_even() {
        return Err(Error::domain(format!(
            "the root operator needs even m, got m = {}",
            m.get()
        )));
    }
    let regime = Regime::for_fh(p, m)?;
    check_nonzero(f)?;
    let constant = bound_constant(BoundConstantSpec::new(regime, p, m))?;
    let grid = disk_grid(config.radial_order, config.n_theta)?;
    let rule = singular_line_rule(config.line_order, config.levels)?;
    let values = grid.map(|z| f_operator(f, m, z, &rule));
    let mut moduli = Vec::with_capacity(values.len());
    let mut branch_warnings = 0;
    for v in values {
        let v = v?;
        branch_warnings += v.branch_warning as usize;
        moduli.push(v.value.norm());
    }
    let lhs = lp_from_moduli(&moduli, p, &grid);
    let input_norm = poly_bergman_norm(f.coeffs(), p, &grid);
    Ok(BoundReport {
        kind: ReportKind::Root,
        p,
        m,
        regime,
        t: None,
        input: f.clone(),
        config: *config,
        evaluation: LINE_QUADRATURE,
        lhs,
        constant,
        input_norm,
        input_norm_power: 1,
        branch_warnings,
    })
}

/// `||H(f)||_{A^p} / ||f||_{A^{p(m-1)}}^{m-1}`, evaluated from scratch.
pub fn operator_ratio(f: &PowerSeries, p: f64, m: TensorOrder, grid: &DiskGrid) -> Result<f64> {
    check_nonzero(f)?;
    Ok(RatioEvaluator::new(p, m, f.len(), grid).parts(f)?.ratio(m))
}

/// Seeded random polynomials: length uniform in `1..=max_len`, real
/// coefficients uniform in `[-1, 1]`, never identically zero.
pub fn regression_corpus(seed: u64, count: usize, max_len: usize) -> Vec<PowerSeries> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_len = max_len.max(1);
    (0..count)
        .map(|_| loop {
            let n = rng.random_range(1..=max_len);
            let coeffs: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
            if coeffs.iter().any(|&c| c != 0.0) {
                break PowerSeries::from_real(&coeffs).expect("finite coefficients");
            }
        })
        .collect()
}
