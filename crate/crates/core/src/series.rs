//! Dense truncated power series with explicit truncation control.
//!
//! Coefficients are stored in ascending degree order. Every operation that
//! produces a new series takes the output length explicitly; nothing grows or
//! shrinks silently.

use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::summation::pairwise_sum_complex;
use crate::C64;

/// A polynomial `f(z) = sum_{k<N} c_k z^k` with finite complex coefficients, `N >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<C64>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::input("power series needs at least one coefficient"));
        }
        if let Some(k) = coeffs
            .iter()
            .position(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::input(format!("coefficient {k} is not finite")));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// The zero series with `len` coefficients.
    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(vec![C64::new(0.0, 0.0); len])
    }

    /// `z^k`, stored with `k + 1` coefficients.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); k + 1];
        coeffs[k] = C64::new(1.0, 0.0);
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    /// Truncation length `N`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// Sum of coefficient moduli.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn scale(&self, alpha: C64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * alpha).collect(),
        }
    }

    /// Truncate or zero-pad to exactly `len` coefficients.
    pub fn resized(&self, len: usize) -> Result<Self> {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(len, C64::new(0.0, 0.0));
        Self::new(coeffs)
    }

    /// Horner evaluation; rejects non-finite `z`.
    pub fn evaluate(&self, z: C64) -> Result<C64> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::input("evaluation point is not finite"));
        }
        Ok(self.eval(z))
    }

    /// Horner evaluation without argument checks.
    #[inline]
    pub fn eval(&self, z: C64) -> C64 {
        horner(&self.coeffs, z)
    }
}

#[inline]
pub(crate) fn horner(coeffs: &[C64], z: C64) -> C64 {
    coeffs
        .iter()
        .rev()
        .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Order `m >= 2` of a Hilbert tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct TensorOrder(u32);

impl TensorOrder {
    pub fn new(m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::domain(format!(
                "tensor order must satisfy m >= 2, got {m}"
            )));
        }
        Ok(Self(m))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Homogeneity degree `m - 1`.
    pub fn degree(self) -> u32 {
        self.0 - 1
    }

    pub fn is_even(self) -> bool {
        self.0.is_multiple_of(2)
    }
}

impl<'de> Deserialize<'de> for TensorOrder {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = u32::deserialize(d)?;
        TensorOrder::new(m).map_err(de::Error::custom)
    }
}

/// Cauchy product truncated to `out_len` coefficients.
pub fn convolve(a: &PowerSeries, b: &PowerSeries, out_len: usize) -> Result<PowerSeries> {
    if out_len == 0 {
        return Err(Error::input("out_len must be at least 1"));
    }
    PowerSeries::new(cauchy_product(a.coeffs(), b.coeffs(), out_len))
}

pub(crate) fn cauchy_product(a: &[C64], b: &[C64], out_len: usize) -> Vec<C64> {
    let mut terms = Vec::with_capacity(a.len().min(b.len()));
    (0..out_len)
        .map(|k| {
            terms.clear();
            let lo = k.saturating_sub(b.len() - 1);
            let hi = k.min(a.len() - 1);
            if lo <= hi {
                terms.extend((lo..=hi).map(|i| a[i] * b[k - i]));
            }
            pairwise_sum_complex(&terms)
        })
        .collect()
}

/// `f^e` truncated to `out_len`, built by repeated truncated convolution.
pub fn power(f: &PowerSeries, e: u32, out_len: usize) -> Result<PowerSeries> {
    if e == 0 {
        return Err(Error::input("power exponent must be at least 1"));
    }
    if out_len == 0 {
        return Err(Error::input("out_len must be at least 1"));
    }
    let base: Vec<C64> = f.coeffs().iter().take(out_len).copied().collect();
    let mut acc = base.clone();
    for _ in 1..e {
        acc = cauchy_product(&acc, &base, out_len);
    }
    acc.resize(out_len, C64::new(0.0, 0.0));
    PowerSeries::new(acc)
}

impl Serialize for PowerSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&[c.re, c.im])?;
        }
        seq.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Coefficient {
    Real(f64),
    Pair([f64; 2]),
}

impl<'de> Deserialize<'de> for PowerSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<Coefficient>::deserialize(d)?;
        let coeffs = raw
            .into_iter()
            .map(|c| match c {
                Coefficient::Real(x) => C64::new(x, 0.0),
                Coefficient::Pair([re, im]) => C64::new(re, im),
            })
            .collect();
        PowerSeries::new(coeffs).map_err(de::Error::custom)
    }
}

impl std::str::FromStr for PowerSeries {
    type Err = Error;

    /// Parses the JSON coefficient format, e.g. `[1, [0.5, -2]]`.
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::input(format!("malformed series: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn rejects_empty_and_nonfinite() {
        assert!(PowerSeries::new(vec![]).is_err());
        assert!(PowerSeries::from_real(&[1.0, f64::NAN]).is_err());
        assert!(PowerSeries::from_real(&[f64::INFINITY]).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let one = PowerSeries::from_real(&[1.0]).unwrap();
        assert_eq!(one.evaluate(C64::new(0.7, 0.1)).unwrap(), c(1.0));
        let id = PowerSeries::from_real(&[0.0, 1.0]).unwrap();
        assert_eq!(id.evaluate(c(0.5)).unwrap(), c(0.5));
        for n in [1usize, 5, 20, 53] {
            let g = PowerSeries::from_real(&vec![1.0; n]).unwrap();
            let expected = 2.0 * (1.0 - 0.5f64.powi(n as i32));
            assert!((g.evaluate(c(0.5)).unwrap().re - expected).abs() < 1e-15);
        }
        assert!(one.evaluate(C64::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn convolve_examples() {
        let a = PowerSeries::from_real(&[1.0, 1.0]).unwrap();
        let sq = convolve(&a, &a, 3).unwrap();
        assert_eq!(sq.coeffs(), &[c(1.0), c(2.0), c(1.0)]);
        let b = PowerSeries::new(vec![C64::new(0.3, -1.0), c(2.0), C64::new(0.0, 4.0)]).unwrap();
        let id = PowerSeries::from_real(&[1.0]).unwrap();
        assert_eq!(convolve(&id, &b, b.len()).unwrap(), b);
        assert!(convolve(&a, &a, 0).is_err());
        // Padding beyond the exact degree yields zeros.
        assert_eq!(convolve(&a, &a, 5).unwrap().coeffs()[3..], [c(0.0), c(0.0)]);
    }

    #[test]
    fn convolve_matches_pointwise_product_within_tail_bound() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a: Vec<C64> = (0..8)
                .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let b: Vec<C64> = (0..8)
                .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let (fa, fb) = (
                PowerSeries::new(a.clone()).unwrap(),
                PowerSeries::new(b.clone()).unwrap(),
            );
            let prod = convolve(&fa, &fb, 8).unwrap();
            let z = C64::from_polar(rng.random_range(0.0..0.5), rng.random_range(0.0..6.3));
            // Dropped coefficients k = 8..14 bounded by sum_{i+j=k} |a_i||b_j|.
            let tail: f64 = (8..15)
                .map(|k| {
                    let s: f64 = (0..8)
                        .filter(|&i| k >= i && k - i < 8)
                        .map(|i| a[i].norm() * b[k - i].norm())
                        .sum();
                    s * z.norm().powi(k as i32)
                })
                .sum();
            let diff = (prod.eval(z) - fa.eval(z) * fb.eval(z)).norm();
            assert!(diff <= tail + 1e-13, "diff {diff} tail {tail}");
        }
    }

    fn brute_power(a: &[C64], e: u32, out_len: usize) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); out_len];
        fn rec(a: &[C64], left: u32, deg: usize, prod: C64, out: &mut [C64]) {
            if left == 0 {
                if deg < out.len() {
                    out[deg] += prod;
                }
                return;
            }
            for (i, &ai) in a.iter().enumerate() {
                rec(a, left - 1, deg + i, prod * ai, out);
            }
        }
        rec(a, e, 0, C64::new(1.0, 0.0), &mut out);
        out
    }

    #[test]
    fn power_examples() {
        let one = PowerSeries::from_real(&[1.0]).unwrap();
        assert_eq!(
            power(&one, 2, 4).unwrap().coeffs(),
            &[c(1.0), c(0.0), c(0.0), c(0.0)]
        );
        let a = PowerSeries::from_real(&[1.0, 1.0]).unwrap();
        assert_eq!(power(&a, 2, 3).unwrap().coeffs(), &[c(1.0), c(2.0), c(1.0)]);
        assert_eq!(
            power(&a, 1, 4).unwrap().coeffs(),
            &[c(1.0), c(1.0), c(0.0), c(0.0)]
        );
        assert_eq!(power(&a, 1, 1).unwrap().coeffs(), &[c(1.0)]);
        assert!(power(&a, 0, 3).is_err());
    }

    #[test]
    fn tensor_order_bounds() {
        assert!(TensorOrder::new(1).is_err());
        assert_eq!(TensorOrder::new(4).unwrap().degree(), 3);
        assert!(serde_json::from_str::<TensorOrder>("1").is_err());
    }

    #[test]
    fn json_round_trip_accepts_bare_reals() {
        let f: PowerSeries = "[1, [0.5, -2], 0]".parse().unwrap();
        assert_eq!(f.coeffs(), &[c(1.0), C64::new(0.5, -2.0), c(0.0)]);
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(text, "[[1.0,0.0],[0.5,-2.0],[0.0,0.0]]");
        assert_eq!(text.parse::<PowerSeries>().unwrap(), f);
        assert!("[]".parse::<PowerSeries>().is_err());
        assert!("[\"x\"]".parse::<PowerSeries>().is_err());
    }

    fn cvec(max_len: usize) -> impl Strategy<Value = Vec<C64>> {
        prop::collection::vec(
            (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(r, i)| C64::new(r, i)),
            1..=max_len,
        )
    }

    proptest! {
        #[test]
        fn power_matches_multi_index_brute_force(a in cvec(8), e in 1u32..=4, extra in 0usize..4) {
            let f = PowerSeries::new(a.clone()).unwrap();
            let out_len = (a.len() - 1) * e as usize + 1 + extra;
            let got = power(&f, e, out_len).unwrap();
            let want = brute_power(&a, e, out_len);
            for (g, w) in got.coeffs().iter().zip(&want) {
                prop_assert!(close(*g, *w, 1e-12), "{g} vs {w}");
            }
            // Truncated variant agrees on its prefix.
            let short = power(&f, e, a.len()).unwrap();
            for (g, w) in short.coeffs().iter().zip(&want) {
                prop_assert!(close(*g, *w, 1e-12));
            }
        }

        #[test]
        fn convolution_commutes_and_associates(a in cvec(8), b in cvec(8), d in cvec(8), n in 1usize..12) {
            let (fa, fb, fd) = (PowerSeries::new(a).unwrap(), PowerSeries::new(b).unwrap(), PowerSeries::new(d).unwrap());
            let ab = convolve(&fa, &fb, n).unwrap();
            let ba = convolve(&fb, &fa, n).unwrap();
            for (x, y) in ab.coeffs().iter().zip(ba.coeffs()) {
                prop_assert!(close(*x, *y, 1e-12));
            }
            let left = convolve(&ab, &fd, n).unwrap();
            let right = convolve(&fa, &convolve(&fb, &fd, n).unwrap(), n).unwrap();
            for (x, y) in left.coeffs().iter().zip(right.coeffs()) {
                prop_assert!(close(*x, *y, 1e-12));
            }
        }

        #[test]
        fn evaluation_is_linear(a in cvec(10), b in cvec(10), ar in -2.0f64..2.0, ai in -2.0f64..2.0,
                                re in -0.9f64..0.9, im in -0.9f64..0.9) {
            let alpha = C64::new(ar, ai);
            let beta = C64::new(0.7, -1.3);
            let n = a.len().max(b.len());
            let fa = PowerSeries::new(a).unwrap().resized(n).unwrap();
            let fb = PowerSeries::new(b).unwrap().resized(n).unwrap();
            let combo: Vec<C64> = fa.coeffs().iter().zip(fb.coeffs()).map(|(&x, &y)| alpha * x + beta * y).collect();
            let z = C64::new(re, im);
            let lhs = PowerSeries::new(combo).unwrap().eval(z);
            let rhs = alpha * fa.eval(z) + beta * fb.eval(z);
            let scale = 1.0 + alpha.norm() * fa.eval(z).norm() + beta.norm() * fb.eval(z).norm();
            prop_assert!((lhs - rhs).norm() <= 1e-13 * scale);
        }
    }
}
