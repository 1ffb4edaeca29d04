//! Harness acceptance: byte-identical reruns of the same sweep config, and
//! the exit-code contract (0 all pass, 1 check failure, 2 config error),
//! exercised through the real binary.

use std::path::Path;
use std::process::{Command, Output};

const CSV_HEADER: &str = "fn,n,k,t,delta,omega2_t,omega2_delta,err_norm,epsilon_nk,d_k,\
                          lower_const,upper_const,five_check,sandwich_check,slack";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schoenberg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const QUICK_SWEEP: &str = "n_list = 32\nk_list = 3\nfunction_names = abs_half, linear\n\
                           t_list = h, auto-delta\nx_points = 257\nh_points = 24\nseed = 11\n\
                           dk_strategy = grid_lp\n";

#[test]
fn acceptance_13_determinism_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "sweep.conf", QUICK_SWEEP);

    // Two runs of the same config produce byte-identical output and exit 0.
    let first = run(&["sweep", "--config", &config]);
    let second = run(&["sweep", "--config", &config]);
    assert_eq!(first.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&first.stderr));
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout, "sweep output must be byte-identical");
    assert_eq!(first.stderr, second.stderr);

    // Schema: exact header, one row per (f, n, k, t).
    let text = String::from_utf8(first.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 1 + 2 * 1 * 1 * 2);
    for line in &lines[1..] {
        assert_eq!(line.split(',').count(), 15);
        assert!(line.ends_with(",true,true,") == false);
    }

    // Intentionally violated synthetic check: a large negative slack makes
    // every honest inequality fail, rows are still emitted, exit code is 1.
    let violated = write_config(
        dir.path(),
        "violated.conf",
        &format!("{QUICK_SWEEP}slack = -0.5\n"),
    );
    let failing = run(&["sweep", "--config", &violated]);
    assert_eq!(failing.status.code(), Some(1));
    let text = String::from_utf8(failing.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 4, "all rows emitted despite failures");
    assert!(text.contains("false"));

    // Config errors exit 2 and name the offending field.
    let bad = write_config(
        dir.path(),
        "bad.conf",
        "n_list = 32\nk_list = 3\nfunction_names = not_a_function\n",
    );
    let out = run(&["sweep", "--config", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("function_names"), "{stderr}");

    let missing = run(&["sweep", "--config", dir.path().join("nope.conf").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));

    println!("acceptance 13 harness determinism and exit codes: PASS");
}

#[test]
fn sweep_json_output_matches_schema() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "json.conf",
        &format!("{QUICK_SWEEP}output_format = json\n"),
    );
    let out = run(&["sweep", "--config", &config]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("[\n") && text.trim_end().ends_with(']'));
    for field in CSV_HEADER.split(',') {
        assert!(text.contains(&format!("\"{field}\":")), "missing {field}");
    }
    assert_eq!(text.matches("\"fn\":").count(), 4);
}

#[test]
fn sweep_out_file_matches_stdout_payload() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "sweep.conf", QUICK_SWEEP);
    let out_path = dir.path().join("table.csv");
    let piped = run(&["sweep", "--config", &config]);
    let to_file = run(&["sweep", "--config", &config, "--out", out_path.to_str().unwrap()]);
    assert_eq!(to_file.status.code(), Some(0));
    assert!(to_file.stdout.is_empty());
    let written = std::fs::read(&out_path).unwrap();
    assert_eq!(written, piped.stdout);
}

#[test]
fn single_report_and_usage_errors() {
    let ok = run(&["bounds", "--fn", "square", "--n", "32", "--k", "3", "--t", "0.25"]);
    assert_eq!(ok.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&ok.stderr));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert!(text.contains("five_check      pass"));
    assert!(text.contains("sandwich_check  pass"));

    // Unknown corpus function is a usage error.
    let bad_fn = run(&["bounds", "--fn", "mystery", "--n", "32", "--k", "3"]);
    assert_eq!(bad_fn.status.code(), Some(2));

    // Degree below 3 cannot produce a bound report.
    let bad_k = run(&["bounds", "--fn", "square", "--n", "32", "--k", "2"]);
    assert_eq!(bad_k.status.code(), Some(2));

    // Unknown flags are clap usage errors.
    let bad_flag = run(&["bounds", "--wibble"]);
    assert_eq!(bad_flag.status.code(), Some(2));
}

#[test]
fn basis_check_and_corpus_listing() {
    let out = run(&["basis-check", "--n", "24", "--k", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("partition_unity: pass"));
    assert!(text.contains("shift_invariance: pass"));

    let out = run(&["corpus", "--list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "linear",
        "square",
        "sine",
        "abs_half",
        "sqrt_abs_third",
        "broken_line",
        "runge",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
}

#[test]
fn approx_writes_plot_csv() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("plot.csv");
    let out = run(&[
        "approx", "--fn", "runge", "--n", "16", "--k", "3", "--plot-csv",
        plot.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&plot).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,f,sf,abs_err");
    assert_eq!(lines.len(), 1 + 513);
}

#[test]
fn epsilon_subcommand_emits_table() {
    let out = run(&["epsilon", "--k", "3", "--n-list", "20,40"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,k,epsilon_nk");
    assert_eq!(lines.len(), 3);
    // Too-small meshes are a usage error naming the requirement.
    let small = run(&["epsilon", "--k", "3", "--n-list", "12"]);
    assert_eq!(small.status.code(), Some(2));
    let stderr = String::from_utf8(small.stderr).unwrap();
    assert!(stderr.contains("4k + 8") || stderr.contains("n >= 20"), "{stderr}");
}
