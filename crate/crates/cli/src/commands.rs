use std::path::Path;

use htl_core::hilbert::default_line_rule;
use htl_core::quadrature::{disk_grid, singular_line_rule};
use htl_core::special::Regime;
use htl_core::{
    apply_integral, apply_mobius, apply_series, bergman_norm, bound_constant, extremal_search_with,
    hardy_norm, output_len_for_radius, regression_corpus, verify_bound, verify_fh_bound,
    verify_slice_bound, BoundConstantSpec, BoundReport, Error, EvalConfig, OperatorOutput,
    PowerSeries, QuadratureRule, Result, SearchConfig, SearchResult, TensorOrder, C64,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::*;
use crate::input::{
    batch_files, load_real, load_series, order, parse_complex, read_series_file, source_label,
};
use crate::output::{num, write_csv_file, Output};

pub const APPLY_SCHEMA: &str = "htl-apply/1";
pub const NORM_SCHEMA: &str = "htl-norm/1";
pub const CONSTANTS_SCHEMA: &str = "htl-constants/1";
pub const EQUIVALENCE_SCHEMA: &str = "htl-equivalence/1";

fn pair(c: C64) -> Value {
    json!([c.re, c.im])
}

fn line_rule(line: &LineArgs) -> Result<QuadratureRule> {
    singular_line_rule(line.order, line.levels)
}

/// `H(f)` truncated so that its value at `z` is within `tol` of the full series.
fn series_for_point(f: &PowerSeries, m: TensorOrder, z: C64, tol: f64) -> Result<OperatorOutput> {
    let probe = apply_series(f, m, 1)?;
    let l1: f64 = probe.power_coeffs().iter().map(|c| c.norm()).sum();
    let k = output_len_for_radius(l1, z.norm(), tol)?;
    apply_series(f, m, k)
}

pub fn apply(a: &ApplyArgs) -> Result<Output> {
    let f = load_series(&a.coeffs)?;
    let m = order(a.m)?;
    if a.k == 0 {
        return Err(Error::InvalidInput("--K must be at least 1".into()));
    }
    let out = apply_series(&f, m, a.k)?;
    let mut rows: Vec<Vec<String>> = out
        .series
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| vec!["coefficient".into(), k.to_string(), num(c.re), num(c.im)])
        .collect();

    let mut values = serde_json::Map::new();
    let mut series_terms = Value::Null;
    let mut max_dev = Value::Null;
    let z = a.z.as_deref().map(parse_complex).transpose()?;
    if let Some(z) = z {
        if z.norm() >= 1.0 {
            return Err(Error::Domain(format!(
                "evaluation point must satisfy |z| < 1, got {z}"
            )));
        }
        let rule = line_rule(&a.line)?;
        let want = |p: Paths| a.paths == Paths::All || a.paths == p;
        let mut got: Vec<(&str, C64)> = Vec::new();
        if want(Paths::Series) {
            let s = series_for_point(&f, m, z, a.tail_tol)?;
            series_terms = json!(s.series.len());
            got.push(("series", s.eval(z)));
        }
        if want(Paths::Integral) {
            got.push(("integral", apply_integral(&f, m, z, &rule)?));
        }
        if want(Paths::Mobius) {
            got.push(("mobius", apply_mobius(&f, m, z, &rule)?));
        }
        let mut dev = 0.0f64;
        for (i, (_, x)) in got.iter().enumerate() {
            for (_, y) in &got[i + 1..] {
                dev = dev.max((x - y).norm());
            }
        }
        if got.len() > 1 {
            max_dev = json!(dev);
        }
        for (name, v) in got {
            values.insert(name.into(), pair(v));
            rows.push(vec![name.into(), String::new(), num(v.re), num(v.im)]);
        }
    }
    let json = json!({
        "schema": APPLY_SCHEMA,
        "config": {
            "input": f,
            "m": m,
            "K": a.k,
            "z": z.map(pair),
            "paths": z.map(|_| format!("{:?}", a.paths).to_lowercase()),
            "order": a.line.order,
            "levels": a.line.levels,
            "tail_tol": a.tail_tol,
        },
        "coefficients": out.series,
        "values": values,
        "series_terms": series_terms,
        "max_pairwise_deviation": max_dev,
    });
    Ok(Output::new(json, &["kind", "index", "re", "im"], rows))
}

pub fn norm(a: &NormArgs) -> Result<Output> {
    let f = load_series(&a.coeffs)?;
    if !(a.p >= 1.0) || !a.p.is_finite() {
        return Err(Error::Domain(format!(
            "the command line accepts norms with 1 <= p < inf, got {}",
            a.p
        )));
    }
    let header = [
        "schema",
        "space",
        "p",
        "radial_order",
        "n_theta",
        "radii",
        "value",
        "radius",
        "monotone",
    ];
    match a.space {
        SpaceArg::Bergman => {
            let grid = disk_grid(a.grid.radial_order, a.grid.n_theta)?;
            let value = bergman_norm(&f, a.p, &grid)?;
            let json = json!({
                "schema": NORM_SCHEMA,
                "config": {
                    "space": "bergman",
                    "p": a.p,
                    "input": f,
                    "radial_order": a.grid.radial_order,
                    "n_theta": a.grid.n_theta,
                },
                "value": value,
            });
            let row = vec![
                NORM_SCHEMA.into(),
                "bergman".into(),
                num(a.p),
                a.grid.radial_order.to_string(),
                a.grid.n_theta.to_string(),
                String::new(),
                num(value),
                String::new(),
                String::new(),
            ];
            Ok(Output::new(json, &header, vec![row]))
        }
        SpaceArg::Hardy => {
            let est = hardy_norm(&f, a.p, a.grid.n_theta, &a.radii)?;
            let radii = a
                .radii
                .iter()
                .map(|r| num(*r))
                .collect::<Vec<_>>()
                .join(";");
            let json = json!({
                "schema": NORM_SCHEMA,
                "config": {
                    "space": "hardy",
                    "p": a.p,
                    "input": f,
                    "n_theta": a.grid.n_theta,
                    "radii": a.radii,
                },
                "value": est.value,
                "radius": est.radius,
                "ladder": est.ladder,
                "monotone": est.monotone,
            });
            let row = vec![
                NORM_SCHEMA.into(),
                "hardy".into(),
                num(a.p),
                String::new(),
                a.grid.n_theta.to_string(),
                radii,
                num(est.value),
                num(est.radius),
                est.monotone.to_string(),
            ];
            Ok(Output::new(json, &header, vec![row]))
        }
    }
}

pub fn constants(a: &ConstantsArgs) -> Result<Output> {
    let m = order(a.m)?;
    let regimes: Vec<Regime> = match &a.regime {
        Some(name) => vec![name.parse()?],
        None => Regime::ALL
            .iter()
            .copied()
            .filter(|r| r.check_domain(a.p, m).is_ok())
            .collect(),
    };
    if regimes.is_empty() {
        return Err(Error::Domain(format!(
            "no regime covers p = {}, m = {}",
            a.p, a.m
        )));
    }
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    for regime in regimes {
        let value = bound_constant(BoundConstantSpec::new(regime, a.p, m))?;
        let divergent = value.is_infinite();
        entries.push(json!({
            "regime": regime,
            "value": if divergent { Value::Null } else { json!(value) },
            "divergent": divergent,
        }));
        rows.push(vec![
            CONSTANTS_SCHEMA.into(),
            regime.as_str().into(),
            num(a.p),
            a.m.to_string(),
            num(value),
            divergent.to_string(),
        ]);
    }
    let json = json!({
        "schema": CONSTANTS_SCHEMA,
        "config": { "p": a.p, "m": m, "regime": a.regime },
        "constants": entries,
    });
    Ok(Output::new(
        json,
        &["schema", "regime", "p", "m", "value", "divergent"],
        rows,
    ))
}

fn reports_output(items: Vec<(String, BoundReport)>) -> Output {
    let mut header = vec!["source"];
    header.extend(BoundReport::CSV_HEADER);
    let mut rows = Vec::with_capacity(items.len());
    let mut list = Vec::with_capacity(items.len());
    let mut violations = 0;
    for (source, report) in &items {
        let mut row = vec![source.clone()];
        row.extend(report.csv_record());
        rows.push(row);
        let mut v = serde_json::to_value(report).expect("report serializes");
        v.as_object_mut()
            .expect("report is an object")
            .insert("source".into(), json!(source));
        list.push(v);
        violations += usize::from(!report.holds());
    }
    let mut out = Output::new(Value::Array(list), &header, rows);
    if violations > 0 {
        out.anomaly = Some(format!(
            "{violations} of {} reports violate the bound",
            items.len()
        ));
    }
    out
}

pub fn verify(a: &VerifyArgs) -> Result<Output> {
    let m = order(a.m)?;
    let config = EvalConfig {
        radial_order: a.grid.radial_order,
        n_theta: a.grid.n_theta,
        line_order: a.line.order,
        levels: a.line.levels,
    };
    let run = |f: &PowerSeries| match a.operator {
        OperatorArg::Th => verify_bound(f, a.p, m, &config),
        OperatorArg::Fh => verify_fh_bound(f, a.p, m, &config),
    };
    let items = match (&a.coeffs, &a.batch) {
        (Some(spec), _) => vec![(source_label(spec), run(&load_series(spec)?)?)],
        (None, Some(dir)) => {
            let files = batch_files(dir)?;
            let inputs = files
                .iter()
                .map(|p| Ok((file_label(p), read_series_file(p)?)))
                .collect::<Result<Vec<_>>>()?;
            inputs
                .into_par_iter()
                .map(|(label, f)| {
                    run(&f)
                        .map(|r| (label.clone(), r))
                        .map_err(|e| with_context(e, &label))
                })
                .collect::<Result<Vec<_>>>()?
        }
        (None, None) => unreachable!("clap requires --coeffs or --batch"),
    };
    Ok(reports_output(items))
}

fn file_label(p: &Path) -> String {
    p.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn with_context(e: Error, label: &str) -> Error {
    match e {
        Error::InvalidInput(s) => Error::InvalidInput(format!("{label}: {s}")),
        Error::Domain(s) => Error::Domain(format!("{label}: {s}")),
        Error::Anomaly(s) => Error::Anomaly(format!("{label}: {s}")),
    }
}

pub fn slice(a: &SliceArgs) -> Result<Output> {
    let f = load_series(&a.coeffs)?;
    let m = order(a.m)?;
    let grid = disk_grid(a.grid.radial_order, a.grid.n_theta)?;
    let source = source_label(&a.coeffs);
    let items =
        a.t.iter()
            .map(|&t| Ok((source.clone(), verify_slice_bound(&f, a.p, m, t, &grid)?)))
            .collect::<Result<Vec<_>>>()?;
    Ok(reports_output(items))
}

pub const SEARCH_CSV_HEADER: [&str; 15] = [
    "schema",
    "p",
    "m",
    "n_coeffs",
    "budget",
    "seed",
    "restarts",
    "radial_order",
    "n_theta",
    "evaluations",
    "best_ratio",
    "bound",
    "gap",
    "regime",
    "best_coeffs",
];

pub fn search(a: &SearchArgs) -> Result<Output> {
    let cfg = SearchConfig {
        restarts: a.restarts,
        radial_order: a.grid.radial_order,
        n_theta: a.grid.n_theta,
        warm_start: a.warm_start.as_deref().map(load_real).transpose()?,
        ..SearchConfig::new(a.p, order(a.m)?, a.n, a.budget, a.seed)
    };
    let res: SearchResult = extremal_search_with(&cfg)?;
    if let Some(path) = &a.trajectory {
        let rows: Vec<Vec<String>> = res
            .trajectory
            .iter()
            .map(|(i, r)| vec![i.to_string(), num(*r)])
            .collect();
        write_csv_file(path, &SearchResult::TRAJECTORY_HEADER, &rows)?;
    }
    let row = vec![
        res.schema.into(),
        num(cfg.p),
        cfg.m.get().to_string(),
        cfg.n_coeffs.to_string(),
        cfg.budget.to_string(),
        cfg.seed.to_string(),
        cfg.restarts.to_string(),
        cfg.radial_order.to_string(),
        cfg.n_theta.to_string(),
        res.evaluations.to_string(),
        num(res.best_ratio),
        num(res.bound),
        num(res.gap),
        res.regime.as_str().into(),
        serde_json::to_string(&res.best_coeffs).expect("finite coefficients"),
    ];
    let mut out = Output::new(
        serde_json::to_value(&res).expect("result serializes"),
        &SEARCH_CSV_HEADER,
        vec![row],
    );
    out.anomaly = res.anomaly.clone();
    Ok(out)
}

pub fn equivalence(a: &EquivalenceArgs) -> Result<Output> {
    let m = order(a.m)?;
    if !(a.max_radius >= 0.0 && a.max_radius < 1.0) {
        return Err(Error::Domain(format!(
            "--max-radius must lie in [0, 1), got {}",
            a.max_radius
        )));
    }
    if a.radii == 0 || a.angles == 0 {
        return Err(Error::InvalidInput(
            "--radii and --angles must be at least 1".into(),
        ));
    }
    let rule = if a.line.order == htl_core::quadrature::DEFAULT_LINE_ORDER
        && a.line.levels == htl_core::quadrature::DEFAULT_LEVELS
    {
        default_line_rule()
    } else {
        line_rule(&a.line)?
    };
    let inputs: Vec<(String, PowerSeries)> = match &a.coeffs {
        Some(spec) => vec![(source_label(spec), load_series(spec)?)],
        None => regression_corpus(a.seed, a.count, a.max_len)
            .into_iter()
            .enumerate()
            .map(|(i, f)| (format!("corpus[{i}]"), f))
            .collect(),
    };
    let points: Vec<C64> = (1..=a.radii)
        .flat_map(|i| {
            let r = a.max_radius * i as f64 / a.radii as f64;
            (0..a.angles).map(move |j| {
                C64::from_polar(r, std::f64::consts::TAU * j as f64 / a.angles as f64)
            })
        })
        .collect();
    let cases = inputs
        .par_iter()
        .map(|(label, f)| {
            let series = series_for_point(f, m, C64::new(a.max_radius, 0.0), a.tail_tol)?;
            let mut worst = [0.0f64; 3];
            let mut worst_z = points[0];
            let mut overall = -1.0;
            for &z in &points {
                let s = series.eval(z);
                let i = apply_integral(f, m, z, &rule)?;
                let b = apply_mobius(f, m, z, &rule)?;
                let d = [(s - i).norm(), (s - b).norm(), (i - b).norm()];
                for k in 0..3 {
                    worst[k] = worst[k].max(d[k]);
                }
                let here = d.iter().copied().fold(0.0, f64::max);
                if here > overall {
                    overall = here;
                    worst_z = z;
                }
            }
            Ok((label.clone(), worst, worst_z))
        })
        .collect::<Result<Vec<_>>>()?;
    let max_dev = cases
        .iter()
        .flat_map(|(_, w, _)| w.iter().copied())
        .fold(0.0, f64::max);
    let rows = cases
        .iter()
        .map(|(label, w, z)| {
            let total = w.iter().copied().fold(0.0, f64::max);
            vec![
                label.clone(),
                a.m.to_string(),
                num(w[0]),
                num(w[1]),
                num(w[2]),
                num(total),
                num(z.re),
                num(z.im),
            ]
        })
        .collect();
    let json = json!({
        "schema": EQUIVALENCE_SCHEMA,
        "config": {
            "m": m,
            "input": a.coeffs.as_deref().map(load_series).transpose()?,
            "seed": a.coeffs.is_none().then_some(a.seed),
            "count": a.coeffs.is_none().then_some(a.count),
            "max_len": a.coeffs.is_none().then_some(a.max_len),
            "radii": a.radii,
            "angles": a.angles,
            "max_radius": a.max_radius,
            "tail_tol": a.tail_tol,
            "order": a.line.order,
            "levels": a.line.levels,
        },
        "cases": cases.iter().map(|(label, w, z)| json!({
            "source": label,
            "series_vs_integral": w[0],
            "series_vs_mobius": w[1],
            "integral_vs_mobius": w[2],
            "worst_z": pair(*z),
        })).collect::<Vec<_>>(),
        "max_pairwise_deviation": max_dev,
    });
    let header = [
        "source",
        "m",
        "series_vs_integral",
        "series_vs_mobius",
        "integral_vs_mobius",
        "max_deviation",
        "worst_re",
        "worst_im",
    ];
    Ok(Output::new(json, &header, rows))
}
