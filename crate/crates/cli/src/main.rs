//! Command-line harness: basis sanity checks, approximation reports, spread
//! tables, single bound reports, and config-driven sweeps.
//!
//! Exit codes: 0 when every check passes, 1 when at least one check fails,
//! 2 on usage or configuration errors.

mod config;
mod sweep;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use schoenberg::{
    collocation_matrix, epsilon_nk, find_function, schoenberg, sup_norm_error, BoundContext,
    GridSpec, UniformMesh,
};

use config::{ConfigError, StepSpec, SweepConfig};
use sweep::{fmt_float, mesh_property_checks, run_sweep};

#[derive(Parser)]
#[command(
    name = "schoenberg",
    version,
    about = "Variation-diminishing spline operator toolbox: basis checks, \
             approximation error reports, and modulus-of-smoothness bound sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Basis and collocation sanity checks for one mesh
    BasisCheck {
        /// Number of segments
        #[arg(long)]
        n: usize,
        /// Spline degree
        #[arg(long)]
        k: usize,
    },
    /// Apply the operator to a corpus function and report the error
    Approx {
        /// Corpus function name (see `corpus --list`)
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Write x, f(x), (S f)(x), |f - S f| samples to this CSV
        #[arg(long = "plot-csv")]
        plot_csv: Option<PathBuf>,
    },
    /// Interior second-difference spread for several segment counts
    Epsilon {
        #[arg(long)]
        k: usize,
        /// Comma-separated segment counts
        #[arg(long = "n-list", value_delimiter = ',')]
        n_list: Vec<usize>,
    },
    /// Full bound report for one (fn, n, k, t) experiment
    Bounds {
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Step: a number in (0, 0.5], or h, 2h, auto-delta
        #[arg(long, default_value = "auto-delta")]
        t: String,
        /// Stability-ratio search: alternating or grid_lp
        #[arg(long = "dk-strategy", default_value = "alternating")]
        dk_strategy: String,
        /// Seed for grid_lp sign patterns
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a config-driven sweep and emit CSV or JSON on stdout
    Sweep {
        /// Flat key-value config file
        #[arg(long)]
        config: PathBuf,
        /// Write the table here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in corpus
    Corpus {
        /// Print one function per line
        #[arg(long)]
        list: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // clap exits 2 on usage errors and 0 for --help/--version.
        Err(e) => e.exit(),
    };
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<bool, ConfigError> {
    match command {
        Command::BasisCheck { n, k } => basis_check(n, k),
        Command::Approx {
            function,
            n,
            k,
            plot_csv,
        } => approx(&function, n, k, plot_csv.as_deref()),
        Command::Epsilon { k, n_list } => epsilon_table(k, &n_list),
        Command::Bounds {
            function,
            n,
            k,
            t,
            dk_strategy,
            seed,
        } => bounds_report(&function, n, k, &t, &dk_strategy, seed),
        Command::Sweep { config, out } => sweep_command(&config, out.as_deref()),
        Command::Corpus { list: _ } => {
            for f in schoenberg::builtin_corpus() {
                println!("{:<16} {}", f.name, f.smoothness.as_str());
            }
            Ok(true)
        }
    }
}

fn require_mesh(n: usize, k: usize) -> Result<UniformMesh, ConfigError> {
    UniformMesh::new(n, k).map_err(|e| ConfigError(format!("invalid mesh: {e}")))
}

fn basis_check(n: usize, k: usize) -> Result<bool, ConfigError> {
    let mesh = require_mesh(n, k)?;
    let mut all_pass = true;
    let mut report = |label: &str, ok: bool, detail: String| {
        all_pass &= ok;
        println!("{label}: {} ({detail})", if ok { "pass" } else { "FAIL" });
    };

    for (label, ok, detail) in mesh_property_checks(&mesh) {
        let short = label
            .rsplit(' ')
            .next()
            .unwrap_or(label.as_str())
            .to_string();
        report(&short, ok, detail);
    }

    // Nonnegativity and exact local support.
    let mut support_ok = true;
    let mut min_value = f64::INFINITY;
    for j in -(k as i64)..n as i64 {
        for i in 0..=400 {
            let x = i as f64 / 400.0;
            let v = mesh.bspline_value(k, j, x).unwrap();
            min_value = min_value.min(v);
            if (x < mesh.knot(j) || x > mesh.knot(j + k as i64 + 1)) && v != 0.0 {
                support_ok = false;
            }
        }
    }
    report(
        "nonnegative_local_support",
        support_ok && min_value >= 0.0,
        format!("min value {min_value:.2e}"),
    );

    // Endpoint collocation rows are coordinate vectors.
    let matrix = collocation_matrix(&mesh);
    let (ki, ni) = (k as i64, n as i64);
    let mut endpoint_dev = 0.0f64;
    for j in -ki..ni {
        let first = if j == -ki { 1.0 } else { 0.0 };
        let last = if j == ni - 1 { 1.0 } else { 0.0 };
        endpoint_dev = endpoint_dev
            .max((matrix.entry(-ki, j) - first).abs())
            .max((matrix.entry(ni - 1, j) - last).abs());
    }
    report(
        "endpoint_rows_interpolate",
        endpoint_dev < 1e-15,
        format!("max dev {endpoint_dev:.2e}"),
    );

    // Interior translates agree at node shifts.
    if n >= k + 2 {
        let nodes = mesh.greville_nodes(k).unwrap();
        let mut shift_dev = 0.0f64;
        for j in 0..=(ni - ki - 2) {
            for i in 0..=(ni - ki) {
                let lhs = mesh.bspline_value(k, j + 1, nodes.node(i)).unwrap();
                let rhs = mesh.bspline_value(k, j, nodes.node(i - 1)).unwrap();
                shift_dev = shift_dev.max((lhs - rhs).abs());
            }
        }
        report(
            "shift_invariance",
            shift_dev < 1e-13,
            format!("max dev {shift_dev:.2e}"),
        );
    }

    println!("basis-check n={n} k={k}: {}", if all_pass { "pass" } else { "FAIL" });
    Ok(all_pass)
}

fn approx(name: &str, n: usize, k: usize, plot_csv: Option<&std::path::Path>) -> Result<bool, ConfigError> {
    let f = find_function(name)
        .ok_or_else(|| ConfigError(format!("unknown function `{name}` (see `corpus --list`)")))?;
    let mesh = require_mesh(n, k)?;
    let s = schoenberg(&mesh, |x| f.eval(x));
    let err = sup_norm_error(|x| f.eval(x), &s, &GridSpec::default());
    println!("fn          {}", f.name);
    println!("smoothness  {}", f.smoothness.as_str());
    println!("n           {n}");
    println!("k           {k}");
    println!("h           {}", fmt_float(mesh.gauge()));
    println!("err_norm    {}", fmt_float(err));
    if let Some(path) = plot_csv {
        let mut text = String::from("x,f,sf,abs_err\n");
        for i in 0..=512 {
            let x = i as f64 / 512.0;
            let fx = f.eval(x);
            let sx = s.eval(x).unwrap();
            text.push_str(&format!(
                "{},{},{},{}\n",
                fmt_float(x),
                fmt_float(fx),
                fmt_float(sx),
                fmt_float((fx - sx).abs())
            ));
        }
        std::fs::write(path, text)
            .map_err(|e| ConfigError(format!("cannot write `{}`: {e}", path.display())))?;
        println!("plot_csv    {}", path.display());
    }
    Ok(true)
}

fn epsilon_table(k: usize, n_list: &[usize]) -> Result<bool, ConfigError> {
    if n_list.is_empty() {
        return Err(ConfigError("`--n-list` must not be empty".into()));
    }
    println!("n,k,epsilon_nk");
    for &n in n_list {
        let mesh = require_mesh(n, k)?;
        let eps = epsilon_nk(&mesh).map_err(|e| ConfigError(e.to_string()))?;
        println!("{n},{k},{}", fmt_float(eps));
    }
    Ok(true)
}

fn bounds_report(
    name: &str,
    n: usize,
    k: usize,
    t_spec: &str,
    strategy: &str,
    seed: u64,
) -> Result<bool, ConfigError> {
    let f = find_function(name)
        .ok_or_else(|| ConfigError(format!("unknown function `{name}` (see `corpus --list`)")))?;
    let mesh = require_mesh(n, k)?;
    let strategy = match strategy {
        "alternating" => schoenberg::DkStrategy::Alternating,
        "grid_lp" => schoenberg::DkStrategy::GridLp { seed },
        other => {
            return Err(ConfigError(format!(
                "`--dk-strategy`: `{other}` is not alternating or grid_lp"
            )))
        }
    };
    let spec = StepSpec::parse(t_spec)?;
    let context = BoundContext::new(&mesh, strategy).map_err(|e| ConfigError(e.to_string()))?;
    let t = spec.resolve(mesh.gauge(), context.delta());
    let report = context
        .reports(|x| f.eval(x), &[t], &GridSpec::default(), schoenberg::DEFAULT_SLACK)
        .map_err(|e| ConfigError(e.to_string()))?
        .remove(0);

    println!("fn              {}", f.name);
    println!("n               {}", report.n);
    println!("k               {}", report.k);
    println!("t               {}", fmt_float(report.t));
    println!("delta           {}", fmt_float(report.delta));
    println!("omega2_t        {}", fmt_float(report.omega2_at_t));
    println!("omega2_delta    {}", fmt_float(report.omega2_at_delta));
    println!("err_norm        {}", fmt_float(report.error_norm));
    println!("epsilon_nk      {}", fmt_float(report.epsilon_nk));
    println!("d_k             {}", fmt_float(report.d_k));
    println!("lower_const     {}", fmt_float(report.lower_const));
    println!("upper_const     {}", fmt_float(report.upper_const));
    println!("five_check      {}", if report.five_check { "pass" } else { "FAIL" });
    println!(
        "sandwich_check  {}",
        if report.sandwich_check { "pass" } else { "FAIL" }
    );
    println!("slack           {}", fmt_float(report.slack));
    Ok(report.five_check && report.sandwich_check)
}

fn sweep_command(path: &std::path::Path, out: Option<&std::path::Path>) -> Result<bool, ConfigError> {
    let config = SweepConfig::load(path)?;
    let outcome = run_sweep(&config)?;
    eprint!("{}", outcome.diagnostics);
    match out {
        Some(path) => std::fs::write(path, &outcome.output)
            .map_err(|e| ConfigError(format!("cannot write `{}`: {e}", path.display())))?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(outcome.output.as_bytes())
                .map_err(|e| ConfigError(format!("cannot write output: {e}")))?;
        }
    }
    Ok(outcome.all_pass)
}
