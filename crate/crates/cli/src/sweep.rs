//! Sweep execution: one bound report per `(f, n, k, t)`, deterministic
//! serialization, and per-mesh sanity diagnostics.

use std::collections::BTreeMap;

use rayon::prelude::*;

use schoenberg::{
    collocation_matrix, schoenberg, BoundContext, BoundReport, GridSpec, TestFunction,
    UniformMesh,
};

use crate::config::{ConfigError, OutputFormat, SweepConfig};

/// Exact column set of the sweep CSV; JSON mirrors it field for field.
pub const CSV_HEADER: &str = "fn,n,k,t,delta,omega2_t,omega2_delta,err_norm,epsilon_nk,d_k,\
                              lower_const,upper_const,five_check,sandwich_check,slack";

/// One serialized experiment.
#[derive(Debug, Clone)]
pub struct Row {
    pub fn_name: String,
    pub report: BoundReport,
}

/// Everything a sweep produces: the payload for stdout, diagnostics for
/// stderr, and the aggregate verdict for the exit code.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub output: String,
    pub diagnostics: String,
    pub all_pass: bool,
    pub rows: usize,
}

/// Floats carry 17 significant digits so a reader can reproduce them
/// bit for bit.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_bool(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

pub fn csv_row(row: &Row) -> String {
    let r = &row.report;
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        row.fn_name,
        r.n,
        r.k,
        fmt_float(r.t),
        fmt_float(r.delta),
        fmt_float(r.omega2_at_t),
        fmt_float(r.omega2_at_delta),
        fmt_float(r.error_norm),
        fmt_float(r.epsilon_nk),
        fmt_float(r.d_k),
        fmt_float(r.lower_const),
        fmt_float(r.upper_const),
        fmt_bool(r.five_check),
        fmt_bool(r.sandwich_check),
        fmt_float(r.slack),
    )
}

fn json_row(row: &Row) -> String {
    let r = &row.report;
    format!(
        "{{\"fn\":\"{}\",\"n\":{},\"k\":{},\"t\":{},\"delta\":{},\"omega2_t\":{},\
         \"omega2_delta\":{},\"err_norm\":{},\"epsilon_nk\":{},\"d_k\":{},\"lower_const\":{},\
         \"upper_const\":{},\"five_check\":{},\"sandwich_check\":{},\"slack\":{}}}",
        row.fn_name,
        r.n,
        r.k,
        fmt_float(r.t),
        fmt_float(r.delta),
        fmt_float(r.omega2_at_t),
        fmt_float(r.omega2_at_delta),
        fmt_float(r.error_norm),
        fmt_float(r.epsilon_nk),
        fmt_float(r.d_k),
        fmt_float(r.lower_const),
        fmt_float(r.upper_const),
        fmt_bool(r.five_check),
        fmt_bool(r.sandwich_check),
        fmt_float(r.slack),
    )
}

pub fn serialize(rows: &[Row], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for row in rows {
                out.push_str(&csv_row(row));
                out.push('\n');
            }
            out
        }
        OutputFormat::Json => {
            let mut out = String::from("[\n");
            for (i, row) in rows.iter().enumerate() {
                out.push_str("  ");
                out.push_str(&json_row(row));
                out.push_str(if i + 1 < rows.len() { ",\n" } else { "\n" });
            }
            out.push_str("]\n");
            out
        }
    }
}

/// Basis and operator sanity results for one mesh, reported alongside the
/// bound rows and folded into the exit code.
pub fn mesh_property_checks(mesh: &UniformMesh) -> Vec<(String, bool, String)> {
    let (n, k) = (mesh.segments(), mesh.degree());
    let mut out = Vec::new();

    let mut partition_dev = 0.0f64;
    for i in 0..200 {
        let x = i as f64 / 199.0;
        let sum: f64 = (-(k as i64)..n as i64)
            .map(|j| mesh.bspline_value(k, j, x).unwrap())
            .sum();
        partition_dev = partition_dev.max((sum - 1.0).abs());
    }
    out.push((
        format!("property n={n} k={k} partition_unity"),
        partition_dev < 1e-12,
        format!("max dev {:.2e}", partition_dev),
    ));

    let mut linear_dev = 0.0f64;
    for (a, b) in [(2.0, -0.3), (-10.0, 10.0)] {
        let s = schoenberg(mesh, |x| a * x + b);
        for i in 0..200 {
            let x = i as f64 / 199.0;
            linear_dev = linear_dev.max((s.eval(x).unwrap() - (a * x + b)).abs());
        }
    }
    out.push((
        format!("property n={n} k={k} linear_reproduction"),
        linear_dev < 1e-12,
        format!("max dev {:.2e}", linear_dev),
    ));

    let matrix = collocation_matrix(mesh);
    let row_dev = matrix
        .row_sums()
        .iter()
        .fold(0.0f64, |m, &s| m.max((s - 1.0).abs()));
    out.push((
        format!("property n={n} k={k} collocation_row_sums"),
        row_dev < 1e-12,
        format!("max dev {:.2e}", row_dev),
    ));

    out
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutcome, ConfigError> {
    config.validate()?;
    let grid = GridSpec::new(config.x_points, config.h_points)
        .map_err(|e| ConfigError(format!("fields `x_points`/`h_points`: {e}")))?;

    let corpus: Vec<TestFunction> = config
        .function_names
        .iter()
        .map(|name| schoenberg::find_function(name).expect("validated name"))
        .collect();

    // Per-mesh constants, computed in parallel but keyed deterministically.
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for &n in &config.n_list {
        for &k in &config.k_list {
            if !pairs.contains(&(n, k)) {
                pairs.push((n, k));
            }
        }
    }
    let contexts: BTreeMap<(usize, usize), BoundContext> = pairs
        .par_iter()
        .map(|&(n, k)| {
            let mesh = UniformMesh::new(n, k)
                .map_err(|e| ConfigError(format!("field `n_list`/`k_list`: {e}")))?;
            let context = BoundContext::new(&mesh, config.strategy_for(n, k))
                .map_err(|e| ConfigError(format!("field `n_list`/`k_list`: {e}")))?;
            Ok(((n, k), context))
        })
        .collect::<Result<_, ConfigError>>()?;

    // Sanity diagnostics per mesh.
    let mut diagnostics = String::new();
    let mut all_pass = true;
    for ((_, _), context) in &contexts {
        for (label, ok, detail) in mesh_property_checks(context.mesh()) {
            all_pass &= ok;
            diagnostics.push_str(&format!(
                "{label}: {} ({detail})\n",
                if ok { "pass" } else { "FAIL" }
            ));
        }
    }

    // One task per (f, n, k); rows for all t of a task share the heavy parts.
    let tasks: Vec<(usize, usize, usize)> = corpus
        .iter()
        .enumerate()
        .flat_map(|(fi, _)| {
            config.n_list.iter().flat_map(move |&n| {
                config.k_list.iter().map(move |&k| (fi, n, k))
            })
        })
        .collect();

    let groups: Vec<Vec<Row>> = tasks
        .par_iter()
        .map(|&(fi, n, k)| {
            let f = corpus[fi];
            let context = &contexts[&(n, k)];
            let gauge = context.mesh().gauge();
            let ts: Vec<f64> = config
                .t_list
                .iter()
                .map(|spec| spec.resolve(gauge, context.delta()))
                .collect();
            let reports = context
                .reports(|x| f.eval(x), &ts, &grid, config.slack)
                .map_err(|e| ConfigError(format!("field `t_list`: {e}")))?;
            Ok(reports
                .into_iter()
                .map(|report| Row {
                    fn_name: f.name.to_string(),
                    report,
                })
                .collect())
        })
        .collect::<Result<_, ConfigError>>()?;

    let rows: Vec<Row> = groups.into_iter().flatten().collect();
    for row in &rows {
        all_pass &= row.report.five_check && row.report.sandwich_check;
    }

    let output = serialize(&rows, config.output_format);
    diagnostics.push_str(&format!(
        "sweep: {} rows, checks {}\n",
        rows.len(),
        if all_pass { "pass" } else { "FAIL" }
    ));

    Ok(SweepOutcome {
        output,
        diagnostics,
        all_pass,
        rows: rows.len(),
    })
}
