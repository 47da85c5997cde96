//! The Hilbert tensor and the operator `H(f)` it induces.
//!
//! Three independent evaluation paths are provided:
//!
//! * [`apply_series`]: coefficient contraction. The multi-index sum collapses
//!   through `b = f^{m-1}` to `c_k = sum_j b_j / (k + j + 1)`.
//! * [`apply_integral`]: `int_0^1 f(s)^{m-1} / (1 - z s) ds`.
//! * [`apply_mobius`]: the same integral along `s = t / ((t - 1) z + 1)`.
//!
//! [`OperatorOutput::evaluate_exact`] sums the full (untruncated) coefficient
//! series in closed form via the Hankel kernel `I_j(z) = sum_k z^k / (k + j + 1)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{singular_line_rule, QuadratureRule, DEFAULT_LEVELS, DEFAULT_LINE_ORDER};
use crate::series::{power, PowerSeries, TensorOrder};
use crate::summation::{pairwise_dot, pairwise_sum_complex};
use crate::C64;

/// Index `(i_1, ..., i_m)` into an m-order Hilbert tensor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertEntryIndex {
    indices: Vec<u64>,
}

impl HilbertEntryIndex {
    pub fn new(indices: Vec<u64>, m: TensorOrder) -> Result<Self> {
        if indices.len() != m.get() as usize {
            return Err(Error::input(format!(
                "index of an order-{} tensor needs {} entries, got {}",
                m.get(),
                m.get(),
                indices.len()
            )));
        }
        Ok(Self { indices })
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }
}

/// `1 / (i_1 + ... + i_m + 1)`.
pub fn tensor_entry(idx: &HilbertEntryIndex) -> f64 {
    let sum: u64 = idx.indices.iter().sum();
    1.0 / (sum as f64 + 1.0)
}

/// Truncated Hilbert matrix action `y_i = sum_j x_j / (i + j + 1)`, `i < out_len`.
pub fn hilbert_matrix_apply(x: &[C64], out_len: usize) -> Vec<C64> {
    let mut terms = Vec::with_capacity(x.len());
    (0..out_len)
        .map(|i| {
            terms.clear();
            terms.extend(
                x.iter()
                    .enumerate()
                    .map(|(j, &xj)| xj / (i as f64 + j as f64 + 1.0)),
            );
            pairwise_sum_complex(&terms)
        })
        .collect()
}

/// Coefficients of `H(f)` plus the exact power coefficients they came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorOutput {
    /// `c_0 ... c_{K-1}`.
    pub series: PowerSeries,
    /// Length of the input series.
    pub source_trunc: usize,
    pub m: TensorOrder,
    #[serde(skip)]
    power_coeffs: Vec<C64>,
}

impl OperatorOutput {
    /// Coefficients of `f^{m-1}`, untruncated.
    pub fn power_coeffs(&self) -> &[C64] {
        &self.power_coeffs
    }

    /// Value of the truncated series at `z`.
    pub fn eval(&self, z: C64) -> C64 {
        self.series.eval(z)
    }

    /// Value of the full infinite series `H(f)(z)` for `|z| < 1`.
    pub fn evaluate_exact(&self, z: C64) -> C64 {
        let kernel = hankel_kernel(z, self.power_coeffs.len());
        contract(&self.power_coeffs, &kernel)
    }

    /// `H(0)` with `out_len` zero coefficients.
    pub(crate) fn zero(f: &PowerSeries, m: TensorOrder, out_len: usize) -> Result<OperatorOutput> {
        Ok(OperatorOutput {
            series: PowerSeries::zeros(out_len)?,
            source_trunc: f.len(),
            m,
            power_coeffs: vec![C64::new(0.0, 0.0); power_len(f.len(), m)],
        })
    }

    /// Multiplies every coefficient by `alpha`.
    pub fn scaled(&self, alpha: f64) -> OperatorOutput {
        let a = C64::new(alpha, 0.0);
        OperatorOutput {
            series: self.series.scale(a),
            source_trunc: self.source_trunc,
            m: self.m,
            power_coeffs: self.power_coeffs.iter().map(|&b| b * a).collect(),
        }
    }
}

pub(crate) fn contract(b: &[C64], kernel: &[C64]) -> C64 {
    pairwise_dot(b, kernel)
}

/// Exact coefficient count of `f^{m-1}` for a length-`n` input.
pub(crate) fn power_len(n: usize, m: TensorOrder) -> usize {
    let d = m.degree() as usize;
    n * d - (d - 1)
}

pub(crate) fn power_coefficients(f: &PowerSeries, m: TensorOrder) -> Result<Vec<C64>> {
    Ok(power(f, m.degree(), power_len(f.len(), m))?.into_coeffs())
}

/// `H(f)` truncated to `out_len` output coefficients.
///
/// The inner sum runs over the full support of `f^{m-1}`; only the output
/// index is truncated.
pub fn apply_series(f: &PowerSeries, m: TensorOrder, out_len: usize) -> Result<OperatorOutput> {
    if out_len == 0 {
        return Err(Error::input("out_len must be at least 1"));
    }
    let b = power_coefficients(f, m)?;
    let c = hilbert_matrix_apply(&b, out_len);
    Ok(OperatorOutput {
        series: PowerSeries::new(c)?,
        source_trunc: f.len(),
        m,
        power_coeffs: b,
    })
}

/// Smallest `K` with `l1 * r^K / ((K + 1)(1 - r)) < tol`.
///
/// Since `|c_k| <= ||b||_1 / (k + 1)`, truncating `H(f)` after `K` terms then
/// changes its value on `|z| <= r` by less than `tol`.
pub fn output_len_for_radius(b_l1: f64, radius: f64, tol: f64) -> Result<usize> {
    if !(0.0..1.0).contains(&radius) {
        return Err(Error::domain(format!(
            "tail policy needs 0 <= r < 1, got {radius}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::input("tail tolerance must be positive"));
    }
    if b_l1 == 0.0 || radius == 0.0 {
        return Ok(1);
    }
    let mut k = 1usize;
    let mut rk = radius;
    while b_l1 * rk / ((k as f64 + 1.0) * (1.0 - radius)) >= tol {
        k += 1;
        rk *= radius;
        if k > 100_000_000 {
            return Err(Error::domain(format!(
                "radius {radius} too close to 1 for tail tolerance {tol}"
            )));
        }
    }
    Ok(k)
}

/// `I_j(z) = sum_{k >= 0} z^k / (k + j + 1)` for `j < len`, `|z| < 1`.
///
/// Either `I_0 = -log(1 - z) / z` with the upward recurrence
/// `I_j = (I_{j-1} - 1/j) / z`, used only while `|z|^len` keeps its error
/// growth below 10^3, or the top entry by direct summation followed by the
/// stable downward recurrence `I_{j-1} = z I_j + 1/j`.
pub fn hankel_kernel(z: C64, len: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); len];
    if len == 0 {
        return out;
    }
    let r = z.norm();
    let upward = r > 0.5 && (len as f64) * r.ln() > (1e-3f64).ln();
    if upward {
        let one = C64::new(1.0, 0.0);
        out[0] = -(one - z).ln() / z;
        for j in 1..len {
            out[j] = (out[j - 1] - 1.0 / j as f64) / z;
        }
        return out;
    }
    let top = len - 1;
    let base = top as f64 + 1.0;
    let tol = 1e-17 / (2.0 * base);
    let mut acc = C64::new(0.0, 0.0);
    let mut zk = C64::new(1.0, 0.0);
    let mut rk = 1.0;
    let mut k = 0usize;
    loop {
        acc += zk / (k as f64 + base);
        k += 1;
        zk *= z;
        rk *= r;
        if rk / ((k as f64 + base) * (1.0 - r)) < tol || rk == 0.0 {
            break;
        }
    }
    out[top] = acc;
    for j in (1..=top).rev() {
        out[j - 1] = z * out[j] + 1.0 / j as f64;
    }
    out
}

fn check_disk_point(z: C64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::input("evaluation point is not finite"));
    }
    if z.norm() >= 1.0 {
        return Err(Error::domain(format!(
            "evaluation point must satisfy |z| < 1, got |z| = {}",
            z.norm()
        )));
    }
    Ok(())
}

/// Default line rule for the integral paths: order 16, 40 geometric levels.
pub fn default_line_rule() -> QuadratureRule {
    singular_line_rule(DEFAULT_LINE_ORDER, DEFAULT_LEVELS)
        .expect("default rule parameters are valid")
}

/// `int_0^1 f(s)^{m-1} / (1 - z s) ds` by quadrature.
pub fn apply_integral(
    f: &PowerSeries,
    m: TensorOrder,
    z: C64,
    rule: &QuadratureRule,
) -> Result<C64> {
    check_disk_point(z)?;
    let d = m.degree();
    Ok(rule.integrate_complex(|s| {
        let fs = f.eval(C64::new(s, 0.0));
        fs.powu(d) / (1.0 - z * s)
    }))
}

fn mobius_denominator(t: f64, z: C64) -> Result<C64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain(format!(
            "Mobius kernels need t in [0, 1], got {t}"
        )));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::input("evaluation point is not finite"));
    }
    let den = (t - 1.0) * z + 1.0;
    if den.norm() < 1e-14 {
        return Err(Error::domain(format!(
            "Mobius denominator vanishes at t = {t}, z = {z}"
        )));
    }
    Ok(den)
}

/// `phi(t, z) = t / ((t - 1) z + 1)`; `|phi| <= 1` on the unit disk.
pub fn mobius_phi(t: f64, z: C64) -> Result<C64> {
    Ok(t / mobius_denominator(t, z)?)
}

/// `psi(t, z) = 1 / ((t - 1) z + 1)`.
pub fn mobius_psi(t: f64, z: C64) -> Result<C64> {
    Ok(1.0 / mobius_denominator(t, z)?)
}

#[inline]
fn slice_value(f: &PowerSeries, d: u32, t: f64, z: C64) -> C64 {
    let psi = 1.0 / ((t - 1.0) * z + 1.0);
    f.eval(psi * t).powu(d) * psi
}

/// `int_0^1 f(phi(t, z))^{m-1} psi(t, z) dt` by quadrature.
pub fn apply_mobius(f: &PowerSeries, m: TensorOrder, z: C64, rule: &QuadratureRule) -> Result<C64> {
    check_disk_point(z)?;
    let d = m.degree();
    // |(t - 1) z + 1| >= 1 - |z| > 0, so the kernels are finite for every node.
    Ok(rule.integrate_complex(|t| slice_value(f, d, t, z)))
}

/// Slice integrand `T_t(f)(z) = psi(t, z) f(phi(t, z))^{m-1}`, `0 < t < 1`.
pub fn slice_operator(f: &PowerSeries, m: TensorOrder, t: f64, z: C64) -> Result<C64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::domain(format!(
            "slice parameter must satisfy 0 < t < 1, got {t}"
        )));
    }
    check_disk_point(z)?;
    mobius_denominator(t, z)?;
    Ok(slice_value(f, m.degree(), t, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_line_rule;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn order(m: u32) -> TensorOrder {
        TensorOrder::new(m).unwrap()
    }

    fn real(xs: &[f64]) -> PowerSeries {
        PowerSeries::from_real(xs).unwrap()
    }

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn assert_close(a: C64, b: C64, tol: f64) {
        assert!((a - b).norm() <= tol * (1.0 + b.norm()), "{a} vs {b}");
    }

    #[test]
    fn entries() {
        let e = |ix: Vec<u64>, m| tensor_entry(&HilbertEntryIndex::new(ix, order(m)).unwrap());
        assert_eq!(e(vec![0, 0, 0], 3), 1.0);
        assert_eq!(e(vec![1, 2, 3], 3), 1.0 / 7.0);
        // Entry as the moment int_0^1 t^{sum} dt.
        let rule = gauss_line_rule(4).unwrap();
        let q = rule.integrate(|t| t.powi(3));
        assert!((q - e(vec![2, 0, 1, 0], 4)).abs() < 1e-15);
        assert!((q - 0.25).abs() < 1e-15);
        assert!(HilbertEntryIndex::new(vec![1, 2], order(3)).is_err());
    }

    #[test]
    fn hilbert_matrix_examples() {
        let y = hilbert_matrix_apply(&[c(1.0)], 3);
        assert_eq!(y, vec![c(1.0), c(0.5), c(1.0 / 3.0)]);
        let y = hilbert_matrix_apply(&[c(0.0), c(1.0)], 2);
        assert_eq!(y, vec![c(0.5), c(1.0 / 3.0)]);
        let y = hilbert_matrix_apply(&[c(1.0); 4], 1);
        assert!((y[0].re - 25.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn apply_series_examples() {
        let out = apply_series(&real(&[1.0]), order(2), 4).unwrap();
        assert_eq!(
            out.series.coeffs(),
            &[c(1.0), c(0.5), c(1.0 / 3.0), c(0.25)]
        );
        let out = apply_series(&real(&[1.0]), order(3), 3).unwrap();
        assert_eq!(out.series.coeffs(), &[c(1.0), c(0.5), c(1.0 / 3.0)]);
        let out = apply_series(&real(&[0.0, 1.0]), order(2), 3).unwrap();
        assert_eq!(out.series.coeffs(), &[c(0.5), c(1.0 / 3.0), c(0.25)]);
        assert_eq!(out.source_trunc, 2);
        assert!(apply_series(&real(&[1.0]), order(2), 0).is_err());
        // Exact power support: length-3 input, m = 4 -> degree 6.
        let out = apply_series(&real(&[1.0, 2.0, 3.0]), order(4), 2).unwrap();
        assert_eq!(out.power_coeffs().len(), 7);
    }

    #[test]
    fn apply_series_matches_double_sum_for_cubic_tensor() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a: Vec<C64> = (0..5)
                .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let out = apply_series(&PowerSeries::new(a.clone()).unwrap(), order(3), 8).unwrap();
            for k in 0..8 {
                let mut want = C64::new(0.0, 0.0);
                for (i2, &x) in a.iter().enumerate() {
                    for (i3, &y) in a.iter().enumerate() {
                        want += x * y / (k + i2 + i3 + 1) as f64;
                    }
                }
                assert_close(out.series.coeffs()[k], want, 1e-12);
            }
        }
    }

    #[test]
    fn integral_examples() {
        let rule = default_line_rule();
        let one = real(&[1.0]);
        assert_close(
            apply_integral(&one, order(2), c(0.0), &rule).unwrap(),
            c(1.0),
            1e-14,
        );
        let v = apply_integral(&one, order(2), c(0.5), &rule).unwrap();
        assert_close(v, c(-(0.5f64).ln() / 0.5), 1e-13);
        assert!((v.re - 1.386_294_361_1).abs() < 1e-10);
        let id = real(&[0.0, 1.0]);
        assert_close(
            apply_integral(&id, order(3), c(0.0), &rule).unwrap(),
            c(1.0 / 3.0),
            1e-14,
        );
        assert!(apply_integral(&one, order(2), c(1.0), &rule).is_err());
        assert!(apply_integral(&one, order(2), C64::new(0.8, 0.7), &rule).is_err());
    }

    #[test]
    fn mobius_kernels() {
        let z = C64::new(0.3, -0.4);
        assert_eq!(mobius_phi(0.3, c(0.0)).unwrap(), c(0.3));
        assert_eq!(mobius_psi(0.3, c(0.0)).unwrap(), c(1.0));
        assert_eq!(mobius_phi(1.0, z).unwrap(), c(1.0));
        assert_eq!(mobius_psi(1.0, z).unwrap(), c(1.0));
        let phi = mobius_phi(0.5, C64::new(0.0, 0.5)).unwrap();
        // 0.5 / (1 - 0.25 i) = (0.5 + 0.125 i) / 1.0625
        assert_close(phi, C64::new(0.5 / 1.0625, 0.125 / 1.0625), 1e-15);
        assert!(phi.norm() <= 1.0);
        assert!(mobius_psi(0.0, c(1.0)).is_err());
        assert!(mobius_phi(1.5, z).is_err());
    }

    #[test]
    fn mobius_path_examples() {
        let rule = default_line_rule();
        for m in 2..=5 {
            let f = real(&[1.0]);
            let a = apply_mobius(&f, order(m), c(0.3), &rule).unwrap();
            let b = apply_integral(&f, order(m), c(0.3), &rule).unwrap();
            assert_close(a, b, 1e-12);
        }
        let f = real(&[1.0, 1.0]);
        let a = apply_mobius(&f, order(2), c(0.4), &rule).unwrap();
        let b = apply_integral(&f, order(2), c(0.4), &rule).unwrap();
        assert_close(a, b, 1e-8);
        let f = real(&[0.2, -0.7, 0.4]);
        let a = apply_mobius(&f, order(3), c(0.0), &rule).unwrap();
        let c0 = apply_series(&f, order(3), 1).unwrap().series.coeffs()[0];
        assert_close(a, c0, 1e-13);
    }

    #[test]
    fn slice_examples() {
        let z = C64::new(-0.2, 0.6);
        let one = real(&[1.0]);
        for t in [0.1, 0.5, 0.9] {
            assert_close(
                slice_operator(&one, order(3), t, z).unwrap(),
                mobius_psi(t, z).unwrap(),
                1e-15,
            );
        }
        let f = real(&[0.5, 1.0, -0.25]);
        let ft = f.eval(c(0.3));
        assert_close(
            slice_operator(&f, order(4), 0.3, c(0.0)).unwrap(),
            ft * ft * ft,
            1e-15,
        );
        let rule = default_line_rule();
        let via_slices = rule.integrate_complex(|t| slice_value(&f, 3, t, z));
        let mob = apply_mobius(&f, order(4), z, &rule).unwrap();
        assert_close(via_slices, mob, 1e-14);
        assert!(slice_operator(&f, order(2), 0.0, z).is_err());
        assert!(slice_operator(&f, order(2), 1.0, z).is_err());
    }

    #[test]
    fn hankel_kernel_matches_direct_summation() {
        let pts = [
            c(0.0),
            c(0.3),
            C64::new(0.45, -0.2),
            C64::from_polar(0.7, 2.0),
            C64::from_polar(0.85, -0.4),
            C64::from_polar(0.95, 3.0),
            c(-0.97),
        ];
        for z in pts {
            for len in [1usize, 5, 23, 60] {
                let k = hankel_kernel(z, len);
                for (j, &v) in k.iter().enumerate() {
                    // Direct summation with an explicit tail bound.
                    let mut want = C64::new(0.0, 0.0);
                    let mut zk = c(1.0);
                    for n in 0..4000 {
                        want += zk / (n + j + 1) as f64;
                        zk *= z;
                    }
                    assert_close(v, want, 1e-11);
                }
            }
        }
    }

    #[test]
    fn exact_evaluation_agrees_with_integral_near_the_boundary() {
        let f = real(&[0.3, -1.0, 0.5, 0.25]);
        let fine = singular_line_rule(24, 60).unwrap();
        for m in 2..=4 {
            let out = apply_series(&f, order(m), 1).unwrap();
            for z in [
                C64::from_polar(0.99, 0.05),
                C64::from_polar(0.995, 2.5),
                c(0.999),
            ] {
                let a = out.evaluate_exact(z);
                let b = apply_integral(&f, order(m), z, &fine).unwrap();
                assert_close(a, b, 1e-9);
            }
        }
    }

    #[test]
    fn tail_policy_bounds_the_truncation_error() {
        let f = real(&[1.0, -0.5, 0.25]);
        let exact = apply_series(&f, order(3), 1).unwrap();
        let l1: f64 = exact.power_coeffs().iter().map(|b| b.norm()).sum();
        for r in [0.3, 0.6, 0.9] {
            let k = output_len_for_radius(l1, r, 1e-9).unwrap();
            let out = apply_series(&f, order(3), k).unwrap();
            for theta in [0.0, 1.0, 3.0] {
                let z = C64::from_polar(r, theta);
                assert!((out.eval(z) - out.evaluate_exact(z)).norm() < 1e-9);
            }
        }
        assert_eq!(output_len_for_radius(0.0, 0.5, 1e-9).unwrap(), 1);
        assert!(output_len_for_radius(1.0, 1.0, 1e-9).is_err());
    }

    #[test]
    fn positivity_and_matrix_consistency() {
        let f = real(&[0.5, 0.0, 2.0, 0.1]);
        for m in 2..=4 {
            let out = apply_series(&f, order(m), 12).unwrap();
            assert!(out
                .series
                .coeffs()
                .iter()
                .all(|c| c.re > 0.0 && c.im == 0.0));
        }
        let g = PowerSeries::new(vec![C64::new(0.5, 1.0), c(-2.0), C64::new(0.0, 0.3)]).unwrap();
        let out = apply_series(&g, order(2), 6).unwrap();
        assert_eq!(
            out.series.coeffs(),
            hilbert_matrix_apply(g.coeffs(), 6).as_slice()
        );
    }

    proptest! {
        #[test]
        fn entries_are_permutation_invariant(ix in prop::collection::vec(0u64..50, 2..6), rot in 0usize..6) {
            let m = order(ix.len() as u32);
            let mut perm = ix.clone();
            perm.rotate_left(rot % ix.len());
            perm.swap(0, ix.len() - 1);
            let a = tensor_entry(&HilbertEntryIndex::new(ix, m).unwrap());
            let b = tensor_entry(&HilbertEntryIndex::new(perm, m).unwrap());
            prop_assert_eq!(a, b);
        }

        #[test]
        fn operator_is_homogeneous(coeffs in prop::collection::vec(-1.0f64..1.0, 1..8),
                                   ar in -2.0f64..2.0, ai in -2.0f64..2.0, m in 2u32..=4) {
            let f = real(&coeffs);
            let alpha = C64::new(ar, ai);
            let base = apply_series(&f, order(m), 10).unwrap();
            let scaled = apply_series(&f.scale(alpha), order(m), 10).unwrap();
            let factor = alpha.powu(m - 1);
            for (s, b) in scaled.series.coeffs().iter().zip(base.series.coeffs()) {
                let want = b * factor;
                prop_assert!((s - want).norm() <= 1e-12 * (1.0 + want.norm()));
            }
        }
    }
}
