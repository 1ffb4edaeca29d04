//! Acceptance suite: every library-level criterion at its pinned tolerance,
//! one test (and one printed pass line) per criterion. The harness criteria
//! (CSV determinism, exit codes) live in the CLI crate next to the binary.

use std::sync::OnceLock;
use std::time::Instant;

use schoenberg::{
    builtin_corpus, epsilon_nk, iterate, iterate_d2_bound, kfunctional_rhs, lower_bound_report,
    omega2, schoenberg, spline_sup_abs, sup_abs, zeta_three_halves, BoundReport, DkStrategy,
    GridSpec, UniformMesh, DEFAULT_SLACK,
};

fn pass(number: u32, name: &str, detail: &str) {
    println!("acceptance {number:02} {name}: PASS ({detail})");
}

#[test]
fn acceptance_01_partition_of_unity() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 4..=64usize {
        for k in 1..=8usize {
            let mesh = UniformMesh::new(n, k).unwrap();
            for i in 0..200 {
                let x = i as f64 / 199.0;
                let sum: f64 = (-(k as i64)..n as i64)
                    .map(|j| mesh.bspline_value(k, j, x).unwrap())
                    .sum();
                worst = worst.max((sum - 1.0).abs());
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(worst < 1e-12, "max deviation {worst}");
    assert!(elapsed < 10.0, "took {elapsed:.1} s");
    pass(1, "partition of unity", &format!("max dev {worst:.2e}, {elapsed:.2} s"));
}

#[test]
fn acceptance_02_linear_reproduction() {
    let mut worst = 0.0f64;
    for n in 4..=64usize {
        for k in 1..=8usize {
            let mesh = UniformMesh::new(n, k).unwrap();
            for (a, b) in [(2.0, -0.3), (-10.0, 10.0), (0.5, 0.25)] {
                let s = schoenberg(&mesh, |x| a * x + b);
                for i in 0..200 {
                    let x = i as f64 / 199.0;
                    worst = worst.max((s.eval(x).unwrap() - (a * x + b)).abs());
                }
            }
        }
    }
    assert!(worst < 1e-12, "max deviation {worst}");
    pass(2, "linear reproduction", &format!("max dev {worst:.2e}"));
}

#[test]
fn acceptance_03_shift_invariance() {
    let mut worst = 0.0f64;
    for k in 1..=8usize {
        for n in (k + 2)..=64usize {
            let mesh = UniformMesh::new(n, k).unwrap();
            let nodes = mesh.greville_nodes(k).unwrap();
            for j in 0..=(n as i64 - k as i64 - 2) {
                for i in 0..=(n as i64 - k as i64) {
                    let lhs = mesh.bspline_value(k, j + 1, nodes.node(i)).unwrap();
                    let rhs = mesh.bspline_value(k, j, nodes.node(i - 1)).unwrap();
                    worst = worst.max((lhs - rhs).abs());
                }
            }
        }
    }
    assert!(worst < 1e-13, "max deviation {worst}");
    pass(3, "interior basis shift invariance", &format!("max dev {worst:.2e}"));
}

#[test]
fn acceptance_04_bernstein_degeneration() {
    fn binomial(k: usize, i: usize) -> f64 {
        let mut value = 1.0f64;
        for r in 0..i.min(k - i) {
            value = value * (k - r) as f64 / (r + 1) as f64;
        }
        value
    }
    let mut worst = 0.0f64;
    for k in 1..=8usize {
        let mesh = UniformMesh::new(1, k).unwrap();
        for f in builtin_corpus() {
            let s = schoenberg(&mesh, |x| f.eval(x));
            for q in 0..=100 {
                let x = q as f64 / 100.0;
                let bernstein: f64 = (0..=k)
                    .map(|i| {
                        f.eval(i as f64 / k as f64)
                            * binomial(k, i)
                            * x.powi(i as i32)
                            * (1.0 - x).powi((k - i) as i32)
                    })
                    .sum();
                worst = worst.max((s.eval(x).unwrap() - bernstein).abs());
            }
        }
    }
    assert!(worst < 1e-12, "max deviation {worst}");
    pass(4, "single-segment operator is Bernstein", &format!("max dev {worst:.2e}"));
}

#[test]
fn acceptance_05_iterate_oracle_equivalence() {
    let mut worst = 0.0f64;
    for n in [4usize, 8, 16] {
        for k in [2usize, 3, 4] {
            let mesh = UniformMesh::new(n, k).unwrap();
            for f in builtin_corpus() {
                let mut naive = schoenberg(&mesh, |x| f.eval(x));
                for m in 2..=5usize {
                    let prev = naive.clone();
                    naive = schoenberg(&mesh, |x| prev.eval(x).unwrap());
                    let fast = iterate(&mesh, |x| f.eval(x), m).unwrap();
                    for (a, b) in fast.coefficients().iter().zip(naive.coefficients()) {
                        worst = worst.max((a - b).abs());
                    }
                }
            }
        }
    }
    assert!(worst < 1e-10, "max deviation {worst}");
    pass(5, "matrix-power iterates match naive application", &format!("max dev {worst:.2e}"));
}

#[test]
fn acceptance_06_derivative_matches_finite_differences() {
    let mut worst = 0.0f64;
    let e = 1e-6;
    for k in [3usize, 4, 5] {
        for n in [8usize, 16] {
            let mesh = UniformMesh::new(n, k).unwrap();
            for f in builtin_corpus() {
                let s = schoenberg(&mesh, |x| f.eval(x));
                let ds = s.derivative().unwrap();
                for i in 0..n {
                    for u in [0.3, 0.7] {
                        let x = (i as f64 + u) / n as f64;
                        let fd = (s.eval(x + e).unwrap() - s.eval(x - e).unwrap()) / (2.0 * e);
                        worst = worst.max((ds.eval(x).unwrap() - fd).abs());
                    }
                }
            }
        }
    }
    assert!(worst < 1e-5, "max deviation {worst}");
    pass(6, "spline derivative matches central differences", &format!("max dev {worst:.2e}"));
}

#[test]
fn acceptance_07_iterate_second_derivative_decay_bound() {
    let start = Instant::now();
    let grid = GridSpec::default();
    let mut tightest = f64::INFINITY;
    for n in [32usize, 64] {
        for k in [3usize, 4] {
            let mesh = UniformMesh::new(n, k).unwrap();
            let (ni, ki) = (n as i64, k as i64);
            let x_lo = mesh.knot(2 * ki + 2);
            let x_hi = mesh.knot(ni - 2 * ki - 2);
            for f in builtin_corpus() {
                let norm = sup_abs(|x| f.eval(x), &grid);
                for m in 2..=10usize {
                    let s = iterate(&mesh, |x| f.eval(x), m).unwrap();
                    let d2 = s.derivative().unwrap().derivative().unwrap();
                    let sup = spline_sup_abs(&d2, x_lo, x_hi, 32);
                    let bound = iterate_d2_bound(&mesh, m).unwrap() * norm;
                    assert!(
                        sup <= bound + 1e-9,
                        "{} n={n} k={k} m={m}: {sup} > {bound}",
                        f.name
                    );
                    if bound > 0.0 {
                        tightest = tightest.min(bound - sup);
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "took {elapsed:.1} s");
    pass(
        7,
        "interior decay bound on iterate second derivatives",
        &format!("min margin {tightest:.3e}, {elapsed:.2} s"),
    );
}

#[test]
fn acceptance_08_modulus_kfunctional_inequality() {
    let grid = GridSpec::default();
    let mut tightest = f64::INFINITY;
    for k in [3usize, 4, 5] {
        for n in [16usize, 32, 64] {
            let mesh = UniformMesh::new(n, k).unwrap();
            let h = mesh.gauge();
            for t in [h, 2.0 * h, 0.25] {
                for f in builtin_corpus() {
                    let lhs = omega2(|x| f.eval(x), t, &grid).unwrap();
                    let rhs = kfunctional_rhs(|x| f.eval(x), &mesh, t, &grid).unwrap();
                    assert!(
                        lhs <= rhs + 1e-9,
                        "{} n={n} k={k} t={t}: {lhs} > {rhs}",
                        f.name
                    );
                    tightest = tightest.min(rhs + 1e-9 - lhs);
                }
            }
        }
    }
    pass(8, "modulus bounded by K-functional form", &format!("min margin {tightest:.3e}"));
}

/// Shared sweep for the two-sided criteria: every corpus member, degrees
/// {3, 4, 5}, segment counts {32, 64, 128}, at t = 1/4 with the default grid.
fn equivalence_sweep() -> &'static Vec<(&'static str, BoundReport)> {
    static SWEEP: OnceLock<Vec<(&'static str, BoundReport)>> = OnceLock::new();
    SWEEP.get_or_init(|| {
        let grid = GridSpec::default();
        let mut out = Vec::new();
        for k in [3usize, 4, 5] {
            for n in [32usize, 64, 128] {
                let mesh = UniformMesh::new(n, k).unwrap();
                for f in builtin_corpus() {
                    let report = lower_bound_report(
                        |x| f.eval(x),
                        &mesh,
                        0.25,
                        &grid,
                        DkStrategy::Alternating,
                    )
                    .unwrap();
                    out.push((f.name, report));
                }
            }
        }
        out
    })
}

#[test]
fn acceptance_09_five_constant_headline() {
    let mut nontrivial = 0usize;
    let mut worst_ratio = 0.0f64;
    for (name, r) in equivalence_sweep() {
        assert!(
            r.five_check,
            "{name} n={} k={}: omega2(delta) = {} > 5 * {} + {}",
            r.n, r.k, r.omega2_at_delta, r.error_norm, r.slack
        );
        if r.omega2_at_delta > 0.0 {
            nontrivial += 1;
            if r.error_norm > 0.0 {
                worst_ratio = worst_ratio.max(r.omega2_at_delta / r.error_norm);
            }
        }
    }
    assert!(nontrivial > 0);
    pass(
        9,
        "five-constant estimate at the tuned step",
        &format!("{nontrivial} nontrivial cases, worst omega2(delta)/err = {worst_ratio:.3}"),
    );
}

#[test]
fn acceptance_10_two_sided_equivalence() {
    for (name, r) in equivalence_sweep() {
        assert!(
            r.sandwich_check,
            "{name} n={} k={}: err = {}, omega2(t) = {}, lower 1/{}, upper {}",
            r.n, r.k, r.error_norm, r.omega2_at_t, r.lower_const, r.upper_const
        );
    }
    pass(
        10,
        "two-sided modulus/error equivalence",
        &format!("{} cases", equivalence_sweep().len()),
    );
}

#[test]
fn acceptance_11_zeta_three_halves() {
    // Independent series-plus-tail oracle at N = 1e6.
    let n = 1_000_000u64;
    let mut partial = 0.0;
    for m in (1..=n).rev() {
        let m = m as f64;
        partial += 1.0 / (m * m.sqrt());
    }
    let oracle = partial + 2.0 / (n as f64).sqrt();
    let z = zeta_three_halves();
    assert!((z - oracle).abs() <= 1e-9, "{z} vs oracle {oracle}");
    assert!((z - 2.612375348).abs() <= 1e-9, "{z}");
    pass(11, "zeta(3/2) reproduction", &format!("value {z:.12}"));
}

#[test]
fn acceptance_12_epsilon_stabilizes_in_n() {
    let mut worst = 0.0f64;
    for k in [3usize, 4, 5] {
        let base = 4 * k + 8;
        let reference = epsilon_nk(&UniformMesh::new(base, k).unwrap()).unwrap();
        for factor in [2usize, 4] {
            let eps = epsilon_nk(&UniformMesh::new(factor * base, k).unwrap()).unwrap();
            worst = worst.max((eps - reference).abs());
        }
        assert!(reference > 0.0);
    }
    assert!(worst < 1e-12, "max drift {worst}");
    pass(12, "interior spread independent of segment count", &format!("max drift {worst:.2e}"));
}

#[test]
fn acceptance_slack_is_pinned() {
    // The inequality slack carried by every check in this suite.
    assert_eq!(DEFAULT_SLACK, 1e-9);
}
