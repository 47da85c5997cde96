//! Gamma and beta functions on the positive real axis, and the closed-form
//! operator-norm constants.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TensorOrder;

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Constants above this are reported as `+inf`.
pub const DIVERGENCE_THRESHOLD: f64 = 1e15;

fn lanczos_sum(x: f64) -> f64 {
    // x is the shifted argument (original - 1).
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    acc
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "{name} requires a finite argument > 0, got {x}"
        )));
    }
    Ok(())
}

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    check_positive("ln_gamma", x)?;
    Ok(ln_gamma_unchecked(x))
}

fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x); sin(pi x) > 0 on (0, 0.5).
        return (PI / (PI * x).sin()).ln() - ln_gamma_unchecked(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + lanczos_sum(x).ln()
}

/// `Gamma(x)` for `x > 0`; overflows to `+inf` past `x ~ 171.6`.
pub fn gamma(x: f64) -> Result<f64> {
    check_positive("gamma", x)?;
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_unchecked(1.0 - x));
    }
    if x > 171.7 {
        return f64::INFINITY;
    }
    let y = x - 1.0;
    let t = y + LANCZOS_G + 0.5;
    // Split the power to delay overflow near the top of the range.
    let half = t.powf(0.5 * (y + 0.5));
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * lanczos_sum(y)
}

pub fn ln_beta(u: f64, v: f64) -> Result<f64> {
    check_positive("beta (first argument)", u)?;
    check_positive("beta (second argument)", v)?;
    Ok(ln_gamma_unchecked(u) + ln_gamma_unchecked(v) - ln_gamma_unchecked(u + v))
}

/// `B(u, v) = Gamma(u) Gamma(v) / Gamma(u + v)`, evaluated in log space.
pub fn beta(u: f64, v: f64) -> Result<f64> {
    ln_beta(u, v).map(f64::exp)
}

/// Which norm bound a constant belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Hilbert matrix on `l^p`, `1 < p < inf`: `pi / sin(pi/p)`.
    MatrixLp,
    /// Tensor operator `A^{p(m-1)} -> A^p`, `p >= 4`: `pi / sin(2 pi/p)`.
    TensorLargeP,
    /// Tensor operator, `2 < p <= 4`: `4^{4/p-1} sqrt(pi) Gamma(1-2/p) / Gamma(3/2-2/p)`.
    TensorSmallP,
    /// Root operator on `A^p`, `p >= 4(m-1)`.
    FhLargeP,
    /// Root operator on `A^p`, `2(m-1) < p <= 4(m-1)`.
    FhSmallP,
}

impl Regime {
    pub const ALL: [Regime; 5] = [
        Regime::MatrixLp,
        Regime::TensorLargeP,
        Regime::TensorSmallP,
        Regime::FhLargeP,
        Regime::FhSmallP,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::MatrixLp => "matrix_lp",
            Regime::TensorLargeP => "tensor_large_p",
            Regime::TensorSmallP => "tensor_small_p",
            Regime::FhLargeP => "fh_large_p",
            Regime::FhSmallP => "fh_small_p",
        }
    }

    /// Tensor-operator regime for exponent `p`; `p = 4` maps to the large-p branch.
    pub fn for_tensor(p: f64) -> Result<Regime> {
        if p >= 4.0 && p.is_finite() {
            Ok(Regime::TensorLargeP)
        } else if p > 2.0 {
            Ok(Regime::TensorSmallP)
        } else {
            Err(Error::domain(format!(
                "tensor operator bounds require p > 2, got p = {p}"
            )))
        }
    }

    /// Root-operator regime; `p = 4(m-1)` maps to the large-p branch.
    pub fn for_fh(p: f64, m: TensorOrder) -> Result<Regime> {
        let d = m.degree() as f64;
        if p >= 4.0 * d && p.is_finite() {
            Ok(Regime::FhLargeP)
        } else if p > 2.0 * d {
            Ok(Regime::FhSmallP)
        } else {
            Err(Error::domain(format!(
                "root operator bounds require p > 2(m-1) = {}, got p = {p}",
                2.0 * d
            )))
        }
    }

    /// Checks the regime's exponent domain, naming the violated inequality.
    pub fn check_domain(self, p: f64, m: TensorOrder) -> Result<()> {
        let d = m.degree() as f64;
        let ok = p.is_finite()
            && match self {
                Regime::MatrixLp => p > 1.0,
                Regime::TensorLargeP => p >= 4.0,
                Regime::TensorSmallP => p > 2.0 && p <= 4.0,
                Regime::FhLargeP => p >= 4.0 * d,
                Regime::FhSmallP => p > 2.0 * d && p <= 4.0 * d,
            };
        if ok {
            return Ok(());
        }
        let rule = match self {
            Regime::MatrixLp => "1 < p < inf".to_string(),
            Regime::TensorLargeP => "4 <= p < inf".to_string(),
            Regime::TensorSmallP => "2 < p <= 4".to_string(),
            Regime::FhLargeP => format!("p >= 4(m-1) = {}", 4.0 * d),
            Regime::FhSmallP => format!("2(m-1) = {} < p <= 4(m-1) = {}", 2.0 * d, 4.0 * d),
        };
        Err(Error::domain(format!(
            "{} requires {rule}, got p = {p}, m = {}",
            self.as_str(),
            m.get()
        )))
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Regime::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::input(format!("unknown regime '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundConstantSpec {
    pub p: f64,
    pub m: TensorOrder,
    pub regime: Regime,
}

impl BoundConstantSpec {
    pub fn new(regime: Regime, p: f64, m: TensorOrder) -> Self {
        Self { p, m, regime }
    }
}

fn finish(log_value: f64) -> f64 {
    if log_value > DIVERGENCE_THRESHOLD.ln() {
        f64::INFINITY
    } else {
        log_value.exp()
    }
}

/// `ln(pi / sin(x))` for `x` in `(0, pi)`.
fn ln_pi_over_sin(x: f64) -> f64 {
    PI.ln() - x.sin().ln()
}

/// `ln( 4^{4/q - 1} sqrt(pi) Gamma(1 - 2/q) / Gamma(3/2 - 2/q) )`, `2 < q <= 4`.
fn ln_small_p_constant(q: f64) -> f64 {
    let a = 1.0 - 2.0 / q;
    (4.0 / q - 1.0) * 4f64.ln() + 0.5 * PI.ln() + ln_gamma_unchecked(a)
        - ln_gamma_unchecked(a + 0.5)
}

/// Closed-form bound constant; values past [`DIVERGENCE_THRESHOLD`] come back as `+inf`.
pub fn bound_constant(spec: BoundConstantSpec) -> Result<f64> {
    let BoundConstantSpec { p, m, regime } = spec;
    regime.check_domain(p, m)?;
    let d = m.degree() as f64;
    let log_value = match regime {
        Regime::MatrixLp => ln_pi_over_sin(PI / p),
        Regime::TensorLargeP => ln_pi_over_sin(2.0 * PI / p),
        Regime::TensorSmallP => ln_small_p_constant(p),
        Regime::FhLargeP => ln_pi_over_sin(2.0 * d * PI / p) / d,
        // 4^{4/p} ( sqrt(pi) Gamma(1 - 2(m-1)/p) / (4 Gamma(3/2 - 2(m-1)/p)) )^{1/(m-1)}
        Regime::FhSmallP => {
            let a = 1.0 - 2.0 * d / p;
            let inner =
                0.5 * PI.ln() + ln_gamma_unchecked(a) - 4f64.ln() - ln_gamma_unchecked(a + 0.5);
            (4.0 / p) * 4f64.ln() + inner / d
        }
    };
    Ok(finish(log_value))
}
