use serde::{Serialize, Serializer};

use crate::quadrature::{
    DEFAULT_LEVELS, DEFAULT_LINE_ORDER, DEFAULT_N_THETA, DEFAULT_RADIAL_ORDER,
};
use crate::series::{PowerSeries, TensorOrder};
use crate::spaces::HOLDS_RTOL;
use crate::special::Regime;

/// Version tag carried by every serialized report.
pub const REPORT_SCHEMA: &str = "htl-report/1";

/// Quadrature parameters used by a verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct EvalConfig {
    pub radial_order: usize,
    pub n_theta: usize,
    pub line_order: usize,
    pub levels: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            radial_order: DEFAULT_RADIAL_ORDER,
            n_theta: DEFAULT_N_THETA,
            line_order: DEFAULT_LINE_ORDER,
            levels: DEFAULT_LEVELS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportKind {
    /// `||H(f)||_{A^p} <= C ||f||_{A^{p(m-1)}}^{m-1}`.
    Tensor,
    /// `||T_t(f)||_{A^p} <= c(t) ||f||_{A^{p(m-1)}}^{m-1}`.
    Slice,
    /// `||F_H(f)||_{A^p} <= C ||f||_{A^p}`.
    Root,
}

impl ReportKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ReportKind::Tensor => "tensor",
            ReportKind::Slice => "slice",
            ReportKind::Root => "root",
        }
    }
}

/// One instance of a norm inequality, measured.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub kind: ReportKind,
    pub p: f64,
    pub m: TensorOrder,
    pub regime: Regime,
    /// Slice parameter, for slice reports.
    pub t: Option<f64>,
    pub input: PowerSeries,
    pub config: EvalConfig,
    /// How the left-hand side was evaluated.
    pub evaluation: &'static str,
    /// Measured norm of the operator output.
    pub lhs: f64,
    /// The constant multiplying the input-norm power.
    pub constant: f64,
    /// Norm of the input in the source space.
    pub input_norm: f64,
    /// Exponent applied to `input_norm` (`m - 1` or 1).
    pub input_norm_power: u32,
    /// Grid points where a root was taken at (numerically) zero.
    pub branch_warnings: usize,
}

impl BoundReport {
    pub fn rhs(&self) -> f64 {
        self.constant * self.input_norm.powi(self.input_norm_power as i32)
    }

    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs()
    }

    pub fn margin(&self) -> f64 {
        self.rhs() - self.lhs
    }

    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs() * (1.0 + HOLDS_RTOL)
    }

    /// Root reports with branch warnings do not certify anything.
    pub fn certifying(&self) -> bool {
        self.branch_warnings == 0
    }

    pub const CSV_HEADER: [&'static str; 20] = [
        "schema",
        "kind",
        "p",
        "m",
        "regime",
        "t",
        "input_len",
        "input",
        "radial_order",
        "n_theta",
        "line_order",
        "levels",
        "evaluation",
        "lhs",
        "rhs",
        "ratio",
        "margin",
        "holds",
        "branch_warnings",
        "certifying",
    ];

    /// Flat row matching [`BoundReport::CSV_HEADER`].
    pub fn csv_record(&self) -> Vec<String> {
        vec![
            REPORT_SCHEMA.to_string(),
            self.kind.as_str().to_string(),
            cell(self.p),
            self.m.get().to_string(),
            self.regime.as_str().to_string(),
            self.t.map(cell).unwrap_or_default(),
            self.input.len().to_string(),
            serde_json::to_string(&self.input).unwrap_or_default(),
            self.config.radial_order.to_string(),
            self.config.n_theta.to_string(),
            self.config.line_order.to_string(),
            self.config.levels.to_string(),
            self.evaluation.to_string(),
            cell(self.lhs),
            cell(self.rhs()),
            cell(self.ratio()),
            cell(self.margin()),
            self.holds().to_string(),
            self.branch_warnings.to_string(),
            self.certifying().to_string(),
        ]
    }
}

/// Shortest round-trip decimal; non-finite values are spelled out.
pub(crate) fn cell(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).expect("finite floats serialize")
    } else {
        x.to_string()
    }
}

#[derive(Serialize)]
struct ReportConfigView<'a> {
    kind: ReportKind,
    p: f64,
    m: TensorOrder,
    regime: Regime,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
    input: &'a PowerSeries,
    #[serde(flatten)]
    quadrature: EvalConfig,
    evaluation: &'static str,
}

#[derive(Serialize)]
struct ReportView<'a> {
    schema: &'static str,
    config: ReportConfigView<'a>,
    lhs: f64,
    constant: f64,
    input_norm: f64,
    input_norm_power: u32,
    rhs: f64,
    ratio: f64,
    margin: f64,
    holds: bool,
    branch_warnings: usize,
    certifying: bool,
}

impl Serialize for BoundReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ReportView {
            schema: REPORT_SCHEMA,
            config: ReportConfigView {
                kind: self.kind,
                p: self.p,
                m: self.m,
                regime: self.regime,
                t: self.t,
                input: &self.input,
                quadrature: self.config,
                evaluation: self.evaluation,
            },
            lhs: self.lhs,
            constant: self.constant,
            input_norm: self.input_norm,
            input_norm_power: self.input_norm_power,
            rhs: self.rhs(),
            ratio: self.ratio(),
            margin: self.margin(),
            holds: self.holds(),
            branch_warnings: self.branch_warnings,
            certifying: self.certifying(),
        }
        .serialize(s)
    }
}
