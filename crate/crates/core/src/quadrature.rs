//! Deterministic quadrature on `[0, 1]` and over the unit disk.
//!
//! Line rules carry, next to each node `s`, the complement `1 - s` computed
//! without cancellation, which matters for integrands singular at `s = 1`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::summation::{pairwise_sum, pairwise_sum_complex};
use crate::C64;

/// Default composite line rule: Gauss order per panel and geometric levels.
pub const DEFAULT_LINE_ORDER: usize = 16;
pub const DEFAULT_LEVELS: usize = 40;
/// Default disk grid.
pub const DEFAULT_RADIAL_ORDER: usize = 64;
pub const DEFAULT_N_THETA: usize = 256;

/// Below this many nodes an integral is evaluated on the calling thread.
const PAR_THRESHOLD: usize = 4096;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess for the i-th largest root.
        let mut t = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (t * p1 - p0) / (t * t - 1.0);
            let dx = p1 / dp;
            t -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        if 2 * i + 1 == n {
            t = 0.0;
        }
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        x[n - 1 - i] = t;
        x[i] = -t;
        w[n - 1 - i] = wi;
        w[i] = wi;
    }
    (x, w)
}

/// Nodes and positive weights on `(0, 1)`; weights sum to 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    complements: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `1 - s` for each node, accurate even when `s` rounds close to 1.
    pub fn complements(&self) -> &[f64] {
        &self.complements
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&s, &w)| w * f(s))
            .collect();
        pairwise_sum(&terms)
    }

    /// Integrates `f(s, 1 - s)`.
    pub fn integrate_with_complement<F: Fn(f64, f64) -> f64>(&self, f: F) -> f64 {
        let terms: Vec<f64> = (0..self.len())
            .map(|i| self.weights[i] * f(self.nodes[i], self.complements[i]))
            .collect();
        pairwise_sum(&terms)
    }

    pub fn integrate_complex<F: Fn(f64) -> C64>(&self, f: F) -> C64 {
        let terms: Vec<C64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&s, &w)| f(s) * w)
            .collect();
        pairwise_sum_complex(&terms)
    }
}

/// Gauss-Legendre rule on `[0, 1]`, exact for polynomials of degree `<= 2 order - 1`.
pub fn gauss_line_rule(order: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::input("quadrature order must be at least 1"));
    }
    let (x, w) = gauss_legendre(order);
    Ok(QuadratureRule {
        nodes: x.iter().map(|&t| 0.5 * (t + 1.0)).collect(),
        complements: x.iter().map(|&t| 0.5 * (1.0 - t)).collect(),
        weights: w.iter().map(|&wi| 0.5 * wi).collect(),
    })
}

/// Composite Gauss rule graded toward `s = 1`.
///
/// Panels are `[1 - 2^-j, 1 - 2^-(j+1)]` for `j < levels`. The last panel
/// `[1 - h, 1]`, `h = 2^-levels`, is integrated in the variable `v` with
/// `1 - s = h v^k`, `k = min(6, 2 order)`, which turns any algebraic endpoint
/// singularity `(1 - s)^-a`, `a < 1`, into the milder `v^(k(1-a)-1)` while
/// keeping the panel weights exact for constants.
///
/// Nodes in the last panel round to `1.0` in `f64`; integrands singular at 1
/// must use [`QuadratureRule::complements`], which are always exact and positive.
pub fn singular_line_rule(order: usize, levels: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::input("quadrature order must be at least 1"));
    }
    if levels == 0 {
        return Err(Error::input("refinement levels must be at least 1"));
    }
    let (x, w) = gauss_legendre(order);
    let cap = x.len() * (levels + 1);
    let mut rule = QuadratureRule {
        nodes: Vec::with_capacity(cap),
        complements: Vec::with_capacity(cap),
        weights: Vec::with_capacity(cap),
    };
    let mut push = |complement: f64, weight: f64| {
        rule.nodes.push(1.0 - complement);
        rule.complements.push(complement);
        rule.weights.push(weight);
    };
    for j in 0..levels {
        let gap = 0.5f64.powi(j as i32);
        let width = 0.5 * gap;
        for (&t, &wt) in x.iter().zip(&w) {
            push(gap - width * 0.5 * (t + 1.0), 0.5 * width * wt);
        }
    }
    let h = 0.5f64.powi(levels as i32);
    let k = (2 * order).min(6) as i32;
    for (&t, &wt) in x.iter().zip(&w) {
        let v = 0.5 * (t + 1.0);
        push(h * v.powi(k), 0.5 * h * k as f64 * v.powi(k - 1) * wt);
    }
    if rule.complements.iter().any(|&c| c < f64::MIN_POSITIVE) {
        return Err(Error::input(format!(
            "{levels} refinement levels underflow the distance to s = 1"
        )));
    }
    Ok(rule)
}

/// Product rule for the normalized area measure `dmu = r dr dtheta / pi` on the disk.
///
/// Radial Gauss nodes live in `u = r^2`, where `dmu = du dtheta / (2 pi)`; the
/// angular rule is the uniform trapezoid.
#[derive(Debug, Clone)]
pub struct DiskGrid {
    radial_order: usize,
    n_theta: usize,
    radii: Vec<f64>,
    points: Vec<C64>,
    weights: Vec<f64>,
}

pub fn disk_grid(radial_order: usize, n_theta: usize) -> Result<DiskGrid> {
    if radial_order == 0 || n_theta == 0 {
        return Err(Error::input(
            "disk grid needs radial_order >= 1 and n_theta >= 1",
        ));
    }
    let radial = gauss_line_rule(radial_order)?;
    let radii: Vec<f64> = radial.nodes().iter().map(|u| u.sqrt()).collect();
    let mut points = Vec::with_capacity(radial_order * n_theta);
    let mut weights = Vec::with_capacity(radial_order * n_theta);
    for (&r, &wu) in radii.iter().zip(radial.weights()) {
        for j in 0..n_theta {
            let theta = 2.0 * PI * j as f64 / n_theta as f64;
            points.push(C64::from_polar(r, theta));
            weights.push(wu / n_theta as f64);
        }
    }
    Ok(DiskGrid {
        radial_order,
        n_theta,
        radii,
        points,
        weights,
    })
}

impl DiskGrid {
    /// Grid with [`DEFAULT_RADIAL_ORDER`] x [`DEFAULT_N_THETA`] nodes.
    pub fn default_grid() -> DiskGrid {
        disk_grid(DEFAULT_RADIAL_ORDER, DEFAULT_N_THETA).expect("default grid parameters are valid")
    }

    pub fn radial_order(&self) -> usize {
        self.radial_order
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn points(&self) -> &[C64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest node radius; every node lies in the open disk of this radius plus zero.
    pub fn max_radius(&self) -> f64 {
        self.radii.iter().copied().fold(0.0, f64::max)
    }

    /// Evaluates `f` at every node, in node order.
    pub fn map<T, F>(&self, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(C64) -> T + Sync + Send,
    {
        self.map_indexed(|_, z| f(z))
    }

    /// As [`DiskGrid::map`], also passing the node index.
    pub fn map_indexed<T, F>(&self, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize, C64) -> T + Sync + Send,
    {
        if self.points.len() >= PAR_THRESHOLD {
            self.points
                .par_iter()
                .enumerate()
                .map(|(i, &z)| f(i, z))
                .collect()
        } else {
            self.points
                .iter()
                .enumerate()
                .map(|(i, &z)| f(i, z))
                .collect()
        }
    }

    /// Weighted sum of per-node values produced by [`DiskGrid::map`].
    pub fn integrate_values(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.weights.len());
        let terms: Vec<f64> = values
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| v * w)
            .collect();
        pairwise_sum(&terms)
    }

    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(C64) -> f64 + Sync + Send,
    {
        self.integrate_values(&self.map(f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_rule_is_midpoint() {
        let r = gauss_line_rule(1).unwrap();
        assert_eq!(r.nodes(), &[0.5]);
        assert_eq!(r.weights(), &[1.0]);
        assert!(gauss_line_rule(0).is_err());
    }

    #[test]
    fn polynomial_exactness() {
        let r2 = gauss_line_rule(2).unwrap();
        assert!((r2.integrate(|s| s.powi(3)) - 0.25).abs() < 1e-15);
        let r4 = gauss_line_rule(4).unwrap();
        assert!((r4.integrate(|s| s.powi(6)) - 1.0 / 7.0).abs() < 1e-15);
        for order in [1usize, 3, 8, 16, 64, 200] {
            let r = gauss_line_rule(order).unwrap();
            assert!(
                (pairwise_sum(r.weights()) - 1.0).abs() < 1e-12,
                "order {order}"
            );
            assert!(r.nodes().iter().all(|&s| s > 0.0 && s < 1.0));
            assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
            for q in 0..(2 * order) {
                let got = r.integrate(|s| s.powi(q as i32));
                assert!(
                    (got - 1.0 / (q as f64 + 1.0)).abs() < 1e-13,
                    "order {order} degree {q}"
                );
            }
        }
    }

    #[test]
    fn singular_rule_examples() {
        let r = singular_line_rule(8, 30).unwrap();
        let half = r.integrate_with_complement(|_, c| c.powf(-0.5));
        assert!((half - 2.0).abs() < 1e-6, "{half}");
        let d = singular_line_rule(16, 40).unwrap();
        assert!((d.integrate(|_| 1.0) - 1.0).abs() < 1e-14);
        let three_quarters = d.integrate_with_complement(|_, c| c.powf(-0.75));
        assert!((three_quarters - 4.0).abs() < 1e-4, "{three_quarters}");
        assert!(d.nodes().iter().all(|&s| s > 0.0 && s <= 1.0));
        assert!(d.complements().iter().all(|&c| c > 0.0 && c < 1.0));
        assert!(singular_line_rule(0, 3).is_err());
        assert!(singular_line_rule(3, 0).is_err());
        assert!(singular_line_rule(16, 1100).is_err());
        for order in 1..=4 {
            let r = singular_line_rule(order, 3).unwrap();
            assert!((r.integrate(|_| 1.0) - 1.0).abs() < 1e-14, "order {order}");
        }
    }

    #[test]
    fn singular_rule_refinement_is_stable() {
        let cases: [(f64, f64, f64); 3] = [(0.0, 1.0, 1e-14), (0.5, 2.0, 1e-6), (0.75, 4.0, 1e-4)];
        for (alpha, _, tol) in cases {
            let coarse = singular_line_rule(16, 20).unwrap();
            let fine = singular_line_rule(16, 40).unwrap();
            let a = coarse.integrate_with_complement(|_, c| c.powf(-alpha));
            let b = fine.integrate_with_complement(|_, c| c.powf(-alpha));
            assert!((a - b).abs() < tol, "alpha {alpha}: {a} vs {b}");
        }
    }

    #[test]
    fn disk_grid_moments() {
        let g = disk_grid(16, 32).unwrap();
        assert!((g.integrate(|_| 1.0) - 1.0).abs() < 1e-12);
        assert!((g.integrate(|z| z.norm_sqr()) - 0.5).abs() < 1e-14);
        assert!(g.integrate(|z| z.re).abs() < 1e-15);
        for q in 0..=16 {
            let got = g.integrate(|z| z.norm_sqr().powi(q));
            assert!((got - 1.0 / (q as f64 + 1.0)).abs() < 1e-10, "q = {q}");
        }
        assert!(g.max_radius() < 1.0);
        assert!(disk_grid(0, 4).is_err());
    }
}
