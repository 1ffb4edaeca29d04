//! Constants relating the spline approximation error to the second-order
//! modulus of smoothness: the interior second-difference spread of the
//! collocation rows, the basis stability ratio, zeta(3/2), the decay bound
//! for second derivatives of operator iterates, and the assembled two-sided
//! report with its pass/fail checks.

use std::sync::OnceLock;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::basis::UniformMesh;
use crate::error::{Error, Result};
use crate::modulus::{omega2, spline_sup_abs, sup_norm_error, GridSpec};
use crate::operator::{collocation_matrix, schoenberg, CollocationMatrix};

/// Additive slack carried by every inequality check, absorbing grid and
/// rounding effects. Reported, never hidden.
pub const DEFAULT_SLACK: f64 = 1e-9;

/// Denominator guard for the second-difference spread: basis values at or
/// below this threshold are replaced by 1 to avoid division blow-ups.
const GUARD_THRESHOLD: f64 = 1e-14;

/// How the basis stability ratio is searched for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DkStrategy {
    /// Sign-alternating and coordinate trial vectors only. Deterministic.
    Alternating,
    /// Additionally hill-climbs random sign patterns drawn from a seeded
    /// generator, flipping one coordinate at a time.
    GridLp { seed: u64 },
}

/// All constants of one `(f, n, k, t)` experiment plus its pass/fail flags.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n: usize,
    pub k: usize,
    pub t: f64,
    /// Step at which the modulus is compared against five times the error.
    pub delta: f64,
    pub omega2_at_t: f64,
    pub omega2_at_delta: f64,
    /// Sup-norm estimate of `||f - S f||`.
    pub error_norm: f64,
    pub epsilon_nk: f64,
    /// Stability-ratio estimate used for all downstream constants.
    pub d_k: f64,
    /// `4 + t^2 (4 d_k + 2 eps zeta(3/2)) / h^2`; its reciprocal is a valid
    /// lower-bound factor.
    pub lower_const: f64,
    /// Upper equivalence constant `1 + min(1/(2k), (k+1) h^2 / 12) / (2 t^2)`.
    pub upper_const: f64,
    /// `omega2(f, delta) <= 5 ||f - S f|| + slack`.
    pub five_check: bool,
    /// `omega2(f, t) / lower_const <= ||f - S f|| <= upper_const * omega2(f, t)`,
    /// each side up to `slack`.
    pub sandwich_check: bool,
    pub slack: f64,
}

fn require_interior(mesh: &UniformMesh) -> Result<()> {
    let (n, k) = (mesh.segments(), mesh.degree());
    let required = 4 * k + 8;
    if n < required {
        return Err(Error::MeshTooSmall { n, k, required });
    }
    Ok(())
}

/// Spread of undivided second differences across collocation rows:
/// the square root of
/// `sup_i sum_j (A[i][j] - 2 A[i-1][j] + A[i-2][j])^2 / guard(A[i][j])`,
/// where the supremum runs over rows whose node stencil lies inside the
/// translation-invariant interior `[x_{2k+2}, x_{n-2k-2}]` and the guard
/// substitutes 1 for vanishing denominators.
///
/// Needs `n >= 4k + 8` so that interior stencils exist.
pub fn epsilon_nk(mesh: &UniformMesh) -> Result<f64> {
    require_interior(mesh)?;
    let (n, k) = (mesh.segments() as i64, mesh.degree() as i64);
    let matrix = collocation_matrix(mesh);
    let nodes = mesh.greville_nodes(mesh.degree())?;
    let x_lo = mesh.knot(2 * k + 2);
    let x_hi = mesh.knot(n - 2 * k - 2);
    let mut sup = 0.0f64;
    let mut seen = false;
    for i in (-k + 2)..n {
        if nodes.node(i - 2) < x_lo || nodes.node(i) > x_hi {
            continue;
        }
        seen = true;
        let mut sum = 0.0;
        for j in -k..n {
            let a0 = matrix.entry(i, j);
            let diff = a0 - 2.0 * matrix.entry(i - 1, j) + matrix.entry(i - 2, j);
            let den = if a0 > GUARD_THRESHOLD { a0 } else { 1.0 };
            sum += diff * diff / den;
        }
        sup = sup.max(sum);
    }
    debug_assert!(seen, "interior stencil set must be nonempty for n >= 4k+8");
    Ok(sup.sqrt())
}

/// Lower-bound estimate of the basis stability ratio: the largest observed
/// `||c||_inf / ||sum_j c_j N_j||_inf` over trial coefficient vectors, with
/// the spline sup norm taken on a refined grid. Every trial yields a valid
/// lower bound, so the maximum does too.
pub fn estimate_dk(mesh: &UniformMesh, strategy: DkStrategy) -> f64 {
    let (n, k) = (mesh.segments(), mesh.degree());
    let size = n + k;
    let ratio = |c: &[f64]| -> f64 {
        let norm_c = c.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        if norm_c == 0.0 {
            return 0.0;
        }
        let s = crate::operator::SplineFunction::new(mesh.clone(), k, c.to_vec())
            .expect("trial vector has the right length");
        let sup = spline_sup_abs(&s, 0.0, 1.0, 32);
        if sup == 0.0 {
            0.0
        } else {
            norm_c / sup
        }
    };

    let mut best = 0.0f64;
    // Coordinate vectors.
    for j in 0..size {
        let mut c = vec![0.0; size];
        c[j] = 1.0;
        best = best.max(ratio(&c));
    }
    // Full sign-alternating vector. Endpoint interpolation pins its sup norm
    // at 1, so also try the alternation restricted to the interior basis
    // functions, where the cancellation actually bites.
    let alternating: Vec<f64> = (0..size)
        .map(|j| if j % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    best = best.max(ratio(&alternating));
    if n > k {
        let mut interior = vec![0.0; size];
        for (j, slot) in interior.iter_mut().enumerate().take(n).skip(k) {
            // j - k runs over the interior indices 0 ..= n-k-1.
            *slot = if (j - k) % 2 == 0 { 1.0 } else { -1.0 };
        }
        best = best.max(ratio(&interior));
    }

    if let DkStrategy::GridLp { seed } = strategy {
        let matrix = collocation_matrix(mesh);
        // Cheap guide for the hill climb: the sup norm at the nodes. It only
        // ranks candidates; accepted candidates are re-scored with the tight
        // grid sup above.
        let guide = |c: &[f64], matrix: &CollocationMatrix| -> f64 {
            let norm_c = c.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
            if norm_c == 0.0 {
                return 0.0;
            }
            let at_nodes = matrix.apply(c);
            let sup = at_nodes.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
            if sup == 0.0 {
                0.0
            } else {
                norm_c / sup
            }
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..8 {
            let mut c: Vec<f64> = (0..size)
                .map(|_| match rng.next_u64() % 3 {
                    0 => -1.0,
                    1 => 0.0,
                    _ => 1.0,
                })
                .collect();
            if c.iter().all(|&v| v == 0.0) {
                c[size / 2] = 1.0;
            }
            let mut score = guide(&c, &matrix);
            for _pass in 0..2 {
                let mut improved = false;
                for j in 0..size {
                    let original = c[j];
                    for candidate in [-1.0, 0.0, 1.0] {
                        if candidate == original {
                            continue;
                        }
                        c[j] = candidate;
                        let trial = guide(&c, &matrix);
                        if trial > score {
                            score = trial;
                            improved = true;
                        } else {
                            c[j] = original;
                        }
                    }
                }
                if !improved {
                    break;
                }
            }
            best = best.max(ratio(&c));
        }
    }
    best
}

/// zeta(3/2) by direct summation plus the integral tail bound `2/sqrt(N)`,
/// summed in ascending magnitude; absolute error below 1e-9.
pub fn zeta_three_halves() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    *VALUE.get_or_init(|| {
        let n = 10_000_000u64;
        let mut sum = 0.0;
        for m in (1..=n).rev() {
            let m = m as f64;
            sum += 1.0 / (m * m.sqrt());
        }
        sum + 2.0 / (n as f64).sqrt()
    })
}

/// Decay bound for second derivatives of the m-th operator iterate on the
/// interior: `2 eps / ((m-1)^(3/2) h^2)` per unit of `||f||`.
pub fn iterate_d2_bound(mesh: &UniformMesh, m: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::IterateBoundOrder { m });
    }
    let eps = epsilon_nk(mesh)?;
    let h = mesh.gauge();
    Ok(2.0 * eps / (((m - 1) as f64).powf(1.5) * h * h))
}

fn bracket(mesh: &UniformMesh, d_k: f64) -> Result<f64> {
    let eps = epsilon_nk(mesh)?;
    Ok(4.0 * d_k + 2.0 * eps * zeta_three_halves())
}

/// The factor `4 + t^2 (4 d_k + 2 eps zeta(3/2)) / h^2`; its reciprocal
/// multiplies the modulus in the lower bound. Requires degree k >= 3.
pub fn lower_bound_constant(mesh: &UniformMesh, t: f64, d_k: f64) -> Result<f64> {
    if mesh.degree() < 3 {
        return Err(Error::DegreeBelowThree { k: mesh.degree() });
    }
    let h = mesh.gauge();
    Ok(4.0 + t * t * bracket(mesh, d_k)? / (h * h))
}

/// The step `h / sqrt(4 d_k + 2 eps zeta(3/2))` that turns the lower-bound
/// factor into exactly 5.
pub fn delta(mesh: &UniformMesh, d_k: f64) -> Result<f64> {
    Ok(mesh.gauge() / bracket(mesh, d_k)?.sqrt())
}

/// Upper equivalence constant
/// `1 + min(1/(2k), (k+1) H^2 / 12) / (2 t^2)` with `H = h` on uniform
/// meshes.
pub fn beutel_upper_constant(mesh: &UniformMesh, t: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 0.5) {
        return Err(Error::InvalidStep { t });
    }
    let k = mesh.degree() as f64;
    let h = mesh.gauge();
    let min_term = (1.0 / (2.0 * k)).min((k + 1.0) * h * h / 12.0);
    Ok(1.0 + min_term / (2.0 * t * t))
}

/// Per-mesh constants computed once and shared across experiments: the
/// second-difference spread, the stability-ratio estimate, and the tuned
/// step derived from them.
#[derive(Debug, Clone)]
pub struct BoundContext {
    mesh: UniformMesh,
    epsilon: f64,
    d_k: f64,
    delta: f64,
}

impl BoundContext {
    pub fn new(mesh: &UniformMesh, strategy: DkStrategy) -> Result<Self> {
        if mesh.degree() < 3 {
            return Err(Error::DegreeBelowThree { k: mesh.degree() });
        }
        let epsilon = epsilon_nk(mesh)?;
        let d_k = estimate_dk(mesh, strategy);
        let delta = delta(mesh, d_k)?;
        Ok(Self {
            mesh: mesh.clone(),
            epsilon,
            d_k,
            delta,
        })
    }

    pub fn mesh(&self) -> &UniformMesh {
        &self.mesh
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn d_k(&self) -> f64 {
        self.d_k
    }

    /// The step at which the lower-bound factor equals 5.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Reports for one function at several steps; the error norm and the
    /// modulus at the tuned step are computed once and shared.
    pub fn reports(
        &self,
        f: impl Fn(f64) -> f64 + Sync,
        ts: &[f64],
        grid: &GridSpec,
        slack: f64,
    ) -> Result<Vec<BoundReport>> {
        for &t in ts {
            if !(t > 0.0 && t <= 0.5) {
                return Err(Error::InvalidStep { t });
            }
        }
        let s = schoenberg(&self.mesh, &f);
        let error_norm = sup_norm_error(&f, &s, grid);
        let omega2_at_delta = omega2(&f, self.delta, grid)?;
        let five_check = omega2_at_delta <= 5.0 * error_norm + slack;
        let mut out = Vec::with_capacity(ts.len());
        for &t in ts {
            let omega2_at_t = if t == self.delta {
                omega2_at_delta
            } else {
                omega2(&f, t, grid)?
            };
            let lower = lower_bound_constant(&self.mesh, t, self.d_k)?;
            let upper = beutel_upper_constant(&self.mesh, t)?;
            let sandwich_check = omega2_at_t / lower <= error_norm + slack
                && error_norm <= upper * omega2_at_t + slack;
            out.push(BoundReport {
                n: self.mesh.segments(),
                k: self.mesh.degree(),
                t,
                delta: self.delta,
                omega2_at_t,
                omega2_at_delta,
                error_norm,
                epsilon_nk: self.epsilon,
                d_k: self.d_k,
                lower_const: lower,
                upper_const: upper,
                five_check,
                sandwich_check,
                slack,
            });
        }
        Ok(out)
    }
}

/// Assembles every constant and check for one `(f, n, k, t)` experiment,
/// using the default slack.
pub fn lower_bound_report(
    f: impl Fn(f64) -> f64 + Sync,
    mesh: &UniformMesh,
    t: f64,
    grid: &GridSpec,
    strategy: DkStrategy,
) -> Result<BoundReport> {
    lower_bound_report_with_slack(f, mesh, t, grid, strategy, DEFAULT_SLACK)
}

/// Like [`lower_bound_report`] with an explicit additive slack on every
/// inequality check.
pub fn lower_bound_report_with_slack(
    f: impl Fn(f64) -> f64 + Sync,
    mesh: &UniformMesh,
    t: f64,
    grid: &GridSpec,
    strategy: DkStrategy,
    slack: f64,
) -> Result<BoundReport> {
    let context = BoundContext::new(mesh, strategy)?;
    let mut reports = context.reports(f, &[t], grid, slack)?;
    Ok(reports.remove(0))
}
