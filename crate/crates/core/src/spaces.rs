//! Bergman and Hardy norm estimates and pointwise growth certificates.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::DiskGrid;
use crate::series::PowerSeries;
use crate::summation::pairwise_sum;
use crate::C64;

/// Radius ladder standing in for `sup_{r<1}` in Hardy norms.
pub const DEFAULT_HARDY_RADII: [f64; 3] = [0.9, 0.99, 0.999];

/// Relative slack for comparisons that should hold exactly.
pub const HOLDS_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Bergman,
    Hardy,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bergman" => Ok(Family::Bergman),
            "hardy" => Ok(Family::Hardy),
            other => Err(Error::input(format!("unknown space family '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub family: Family,
    pub p: f64,
}

impl SpaceSpec {
    pub fn new(family: Family, p: f64) -> Result<Self> {
        check_exponent(p)?;
        Ok(Self { family, p })
    }

    pub fn bergman(p: f64) -> Result<Self> {
        Self::new(Family::Bergman, p)
    }

    pub fn hardy(p: f64) -> Result<Self> {
        Self::new(Family::Hardy, p)
    }

    /// For `p < 1` the "norm" is only a quasi-norm.
    pub fn is_quasi_norm(&self) -> bool {
        self.p < 1.0
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::domain(format!(
            "norm exponent must satisfy 0 < p < inf, got {p}"
        )));
    }
    Ok(())
}

/// `(int_B |f|^p dmu)^{1/p}` by disk quadrature.
pub fn bergman_norm(f: &PowerSeries, p: f64, grid: &DiskGrid) -> Result<f64> {
    bergman_norm_with(|z| f.eval(z), p, grid)
}

/// Bergman norm of an arbitrary function sampled on the grid.
pub fn bergman_norm_with<F>(f: F, p: f64, grid: &DiskGrid) -> Result<f64>
where
    F: Fn(C64) -> C64 + Sync + Send,
{
    check_exponent(p)?;
    let moduli = grid.map(|z| f(z).norm());
    Ok(lp_from_moduli(&moduli, p, grid))
}

/// `(sum_i w_i |v_i|^p)^{1/p}` for moduli already evaluated at grid nodes.
pub(crate) fn lp_from_moduli(moduli: &[f64], p: f64, grid: &DiskGrid) -> f64 {
    let pw: Vec<f64> = moduli.iter().map(|&a| powp(a, p)).collect();
    grid.integrate_values(&pw).powf(1.0 / p)
}

#[inline]
pub(crate) fn powp(a: f64, p: f64) -> f64 {
    if p == 2.0 {
        a * a
    } else if p == 4.0 {
        let s = a * a;
        s * s
    } else {
        a.powf(p)
    }
}

/// `((1/2pi) int_0^{2pi} |f(r e^{it})|^p dt)^{1/p}` by the trapezoid rule.
pub fn circle_mean(f: &PowerSeries, p: f64, r: f64, n_theta: usize) -> f64 {
    let terms: Vec<f64> = (0..n_theta)
        .map(|j| {
            let z = C64::from_polar(r, 2.0 * PI * j as f64 / n_theta as f64);
            powp(f.eval(z).norm(), p)
        })
        .collect();
    (pairwise_sum(&terms) / n_theta as f64).powf(1.0 / p)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HardyEstimate {
    /// Largest circle mean over the ladder.
    pub value: f64,
    /// Radius attaining `value`.
    pub radius: f64,
    /// `(r, circle mean)` for every supplied radius, in input order.
    pub ladder: Vec<(f64, f64)>,
    /// Whether the means are nondecreasing in `r`, as they must be for a polynomial.
    pub monotone: bool,
    pub quasi_norm: bool,
}

/// Hardy norm estimate: max of circle means over `radii`.
pub fn hardy_norm(f: &PowerSeries, p: f64, n_theta: usize, radii: &[f64]) -> Result<HardyEstimate> {
    check_exponent(p)?;
    if n_theta == 0 {
        return Err(Error::input("n_theta must be at least 1"));
    }
    if radii.is_empty() {
        return Err(Error::input("Hardy norm needs at least one radius"));
    }
    if let Some(&r) = radii.iter().find(|&&r| !(0.0..1.0).contains(&r)) {
        return Err(Error::domain(format!(
            "Hardy radii must lie in [0, 1), got {r}"
        )));
    }
    let ladder: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| (r, circle_mean(f, p, r, n_theta)))
        .collect();
    let (radius, value) =
        ladder
            .iter()
            .copied()
            .fold((radii[0], f64::NEG_INFINITY), |best, cur| {
                if cur.1 > best.1 || (cur.1 == best.1 && cur.0 > best.0) {
                    cur
                } else {
                    best
                }
            });
    let mut sorted = ladder.clone();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let monotone = sorted
        .windows(2)
        .all(|w| w[1].1 >= w[0].1 * (1.0 - HOLDS_RTOL));
    Ok(HardyEstimate {
        value,
        radius,
        ladder,
        monotone,
        quasi_norm: p < 1.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthVerdict {
    Holds,
    Fails,
    /// Violated only within the slack left by estimating a Hardy sup on `r < 1`.
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthCheck {
    /// `|f(z)|`.
    pub lhs: f64,
    /// Growth bound evaluated with the supplied norm.
    pub rhs: f64,
    pub verdict: GrowthVerdict,
}

impl GrowthCheck {
    pub fn holds(&self) -> bool {
        self.verdict == GrowthVerdict::Holds
    }
}

/// Pointwise growth bound at `z`.
///
/// Bergman: `|f(z)| <= (1 / (1 - |z|^2))^{2/p} ||f||_{A^p}`.
/// Hardy: `|f(z)| <= (2 / (1 - |z|))^{1/p} ||f||_{H^p}`, with `norm` assumed to
/// come from the default radius ladder.
pub fn growth_bound_check(
    f: &PowerSeries,
    spec: SpaceSpec,
    z: C64,
    norm: f64,
) -> Result<GrowthCheck> {
    let r = DEFAULT_HARDY_RADII.iter().copied().fold(0.0, f64::max);
    growth_bound_check_with_radius(f, spec, z, norm, r)
}

/// As [`growth_bound_check`], with the largest Hardy ladder radius given explicitly.
pub fn growth_bound_check_with_radius(
    f: &PowerSeries,
    spec: SpaceSpec,
    z: C64,
    norm: f64,
    hardy_radius: f64,
) -> Result<GrowthCheck> {
    check_exponent(spec.p)?;
    if !z.re.is_finite() || !z.im.is_finite() || z.norm() >= 1.0 {
        return Err(Error::domain(format!(
            "growth bound needs |z| < 1, got {z}"
        )));
    }
    if !(norm >= 0.0) {
        return Err(Error::input(format!(
            "norm must be nonnegative, got {norm}"
        )));
    }
    let p = spec.p;
    let lhs = f.eval(z).norm();
    let r = z.norm();
    let factor = match spec.family {
        Family::Bergman => (1.0 / (1.0 - r * r)).powf(2.0 / p),
        Family::Hardy => (2.0 / (1.0 - r)).powf(1.0 / p),
    };
    let rhs = factor * norm;
    let verdict = if lhs <= rhs * (1.0 + HOLDS_RTOL) {
        GrowthVerdict::Holds
    } else if spec.family == Family::Hardy {
        // M_p(1) <= M_p(r) + sum |a_k| (1 - r^k) for p >= 1; quasi-triangle below 1.
        let drift: f64 = f
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, a)| a.norm() * (1.0 - hardy_radius.powi(k as i32)))
            .sum();
        let upper = if p >= 1.0 {
            norm + drift
        } else {
            (norm.powf(p) + drift.powf(p)).powf(1.0 / p)
        };
        if lhs <= factor * upper * (1.0 + HOLDS_RTOL) {
            GrowthVerdict::Indeterminate
        } else {
            GrowthVerdict::Fails
        }
    } else {
        GrowthVerdict::Fails
    };
    Ok(GrowthCheck { lhs, rhs, verdict })
}
