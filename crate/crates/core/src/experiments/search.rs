//! Derivative-free search for inputs with a large operator ratio.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::evaluator::RatioEvaluator;
use crate::error::{Error, Result};
use crate::quadrature::{disk_grid, DEFAULT_N_THETA, DEFAULT_RADIAL_ORDER};
use crate::series::{PowerSeries, TensorOrder};
use crate::special::{bound_constant, BoundConstantSpec, Regime};

pub const SEARCH_SCHEMA: &str = "htl-search/1";
pub const DEFAULT_RESTARTS: usize = 8;
const INITIAL_STEP: f64 = 0.5;
const STEP_FLOOR: f64 = 1e-6;
/// Slack before a best ratio above the bound counts as an anomaly.
const BOUND_SLACK: f64 = 1e-6;
const RECOMPUTE_RTOL: f64 = 1e-9;

/// Full search configuration; embedded in every result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub p: f64,
    pub m: TensorOrder,
    pub n_coeffs: usize,
    pub budget: usize,
    pub seed: u64,
    pub restarts: usize,
    pub radial_order: usize,
    pub n_theta: usize,
    /// Starting point for restart 0, zero-padded or truncated to `n_coeffs`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warm_start: Option<Vec<f64>>,
}

impl SearchConfig {
    pub fn new(p: f64, m: TensorOrder, n_coeffs: usize, budget: usize, seed: u64) -> Self {
        Self {
            p,
            m,
            n_coeffs,
            budget,
            seed,
            restarts: DEFAULT_RESTARTS,
            radial_order: DEFAULT_RADIAL_ORDER,
            n_theta: DEFAULT_N_THETA,
            warm_start: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub schema: &'static str,
    pub config: SearchConfig,
    /// Real coefficients normalized to `||f||_{A^{p(m-1)}} = 1`.
    pub best_coeffs: Vec<f64>,
    pub best_ratio: f64,
    pub evaluations: usize,
    pub seed: u64,
    pub regime: Regime,
    pub bound: f64,
    /// `bound - best_ratio`.
    pub gap: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anomaly: Option<String>,
    /// `(evaluation index, best ratio so far)` for every evaluation.
    pub trajectory: Vec<(usize, f64)>,
}

impl SearchResult {
    pub const TRAJECTORY_HEADER: [&'static str; 2] = ["iteration", "best_ratio"];

    pub fn best_series(&self) -> PowerSeries {
        PowerSeries::from_real(&self.best_coeffs).expect("finite coefficients")
    }
}

struct Restart {
    best: Vec<f64>,
    best_ratio: f64,
    history: Vec<f64>,
}

struct Objective<'e, 'g> {
    eval: &'e RatioEvaluator<'g>,
    m: TensorOrder,
}

impl Objective<'_, '_> {
    /// Ratio at `x` and `x` rescaled to unit input norm; `None` for zero inputs.
    fn eval(&self, x: &[f64]) -> Result<Option<(f64, Vec<f64>)>> {
        if x.iter().all(|&c| c == 0.0) {
            return Ok(None);
        }
        let f = PowerSeries::from_real(x)?;
        let parts = self.eval.parts(&f)?;
        if !(parts.input_norm > 0.0) {
            return Ok(None);
        }
        let ratio = parts.ratio(self.m);
        let unit = x.iter().map(|c| c / parts.input_norm).collect();
        Ok(Some((ratio, unit)))
    }
}

fn random_start(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        if x.iter().any(|&c| c != 0.0) {
            return x;
        }
    }
}

fn run_restart(obj: &Objective, start: Vec<f64>, budget: usize) -> Result<Restart> {
    let mut history = Vec::with_capacity(budget);
    let mut out = Restart {
        best: start.clone(),
        best_ratio: f64::NEG_INFINITY,
        history: Vec::new(),
    };
    if budget == 0 {
        return Ok(out);
    }
    let mut x = start;
    if let Some((r, unit)) = obj.eval(&x)? {
        out.best_ratio = r;
        x = unit;
    }
    history.push(out.best_ratio);
    let mut step = INITIAL_STEP;
    'outer: while step >= STEP_FLOOR {
        let mut improved = false;
        for i in 0..x.len() {
            for sign in [1.0, -1.0] {
                if history.len() >= budget {
                    break 'outer;
                }
                let mut y = x.clone();
                y[i] += sign * step;
                let trial = obj.eval(&y)?;
                if let Some((r, unit)) = trial.filter(|(r, _)| *r > out.best_ratio) {
                    out.best_ratio = r;
                    x = unit;
                    improved = true;
                }
                history.push(out.best_ratio);
                if improved {
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    out.best = x;
    out.history = history;
    Ok(out)
}

/// Flips the sign so the first nonzero coefficient is positive.
fn canonical_sign(mut x: Vec<f64>) -> Vec<f64> {
    if x.iter().find(|&&c| c != 0.0).is_some_and(|&c| c < 0.0) {
        x.iter_mut().for_each(|c| *c = -*c);
    }
    x
}

/// Maximizes `||H(f)||_{A^p} / ||f||_{A^{p(m-1)}}^{m-1}` over real polynomials of
/// length `n_coeffs`, with default restarts and grid.
pub fn extremal_search(
    p: f64,
    m: TensorOrder,
    n_coeffs: usize,
    budget: usize,
    seed: u64,
) -> Result<SearchResult> {
    extremal_search_with(&SearchConfig::new(p, m, n_coeffs, budget, seed))
}

/// Restarts run concurrently, each with its own stream of the seeded generator,
/// and are merged in restart order.
pub fn extremal_search_with(cfg: &SearchConfig) -> Result<SearchResult> {
    let regime = Regime::for_tensor(cfg.p)?;
    if cfg.n_coeffs == 0 {
        return Err(Error::input("search needs n_coeffs >= 1"));
    }
    if cfg.budget == 0 {
        return Err(Error::input("search needs budget >= 1"));
    }
    if cfg.restarts == 0 {
        return Err(Error::input("search needs at least one restart"));
    }
    if let Some(w) = &cfg.warm_start {
        if w.iter().any(|c| !c.is_finite()) {
            return Err(Error::input("warm start coefficients must be finite"));
        }
    }
    let bound = bound_constant(BoundConstantSpec::new(regime, cfg.p, cfg.m))?;
    let grid = disk_grid(cfg.radial_order, cfg.n_theta)?;
    let evaluator = RatioEvaluator::new(cfg.p, cfg.m, cfg.n_coeffs, &grid);
    let obj = Objective {
        eval: &evaluator,
        m: cfg.m,
    };
    let restarts = cfg.restarts;
    let runs: Vec<Result<Restart>> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let share = cfg.budget / restarts + usize::from(r < cfg.budget % restarts);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(r as u64);
            let mut start = random_start(&mut rng, cfg.n_coeffs);
            if r == 0 {
                if let Some(w) = cfg
                    .warm_start
                    .as_ref()
                    .filter(|w| w.iter().any(|&c| c != 0.0))
                {
                    start = w
                        .iter()
                        .copied()
                        .chain(std::iter::repeat(0.0))
                        .take(cfg.n_coeffs)
                        .collect();
                    if start.iter().all(|&c| c == 0.0) {
                        start = random_start(&mut rng, cfg.n_coeffs);
                    }
                }
            }
            run_restart(&obj, start, share)
        })
        .collect();

    let mut best: Option<Vec<f64>> = None;
    let mut best_run_ratio = f64::NEG_INFINITY;
    let mut best_ratio = f64::NEG_INFINITY;
    let mut trajectory = Vec::with_capacity(cfg.budget);
    for run in runs {
        let run = run?;
        for r in run.history {
            best_ratio = best_ratio.max(r);
            trajectory.push((trajectory.len(), best_ratio));
        }
        if best.is_none() || run.best_ratio > best_run_ratio {
            best_run_ratio = run.best_ratio;
            best = Some(run.best);
        }
    }
    let best_coeffs = canonical_sign(best.expect("at least one restart"));
    let evaluations = trajectory.len();

    let recomputed = RatioEvaluator::new(cfg.p, cfg.m, cfg.n_coeffs, &grid)
        .parts(&PowerSeries::from_real(&best_coeffs)?)?
        .ratio(cfg.m);
    let mut anomaly = None;
    if (recomputed - best_ratio).abs() > RECOMPUTE_RTOL * best_ratio.abs() {
        anomaly = Some(format!(
            "recomputed ratio {recomputed} disagrees with search ratio {best_ratio}"
        ));
    }
    if recomputed > bound + BOUND_SLACK {
        anomaly = Some(format!(
            "best ratio {recomputed} exceeds the bound constant {bound}"
        ));
    }
    Ok(SearchResult {
        schema: SEARCH_SCHEMA,
        config: cfg.clone(),
        best_coeffs,
        best_ratio: recomputed,
        evaluations,
        seed: cfg.seed,
        regime,
        bound,
        gap: bound - recomputed,
        anomaly,
        trajectory,
    })
}
