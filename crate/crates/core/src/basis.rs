//! Clamped uniform knot vectors, node averages, and normalized B-spline
//! evaluation, with a divided-difference reference path for cross-checking.

use crate::error::{Error, Result};

/// Clamped uniform partition of [0, 1] into `n` segments, extended for a
/// degree-`k` spline basis.
///
/// Knots are `x_j = j/n` for `0 <= j <= n`, with the first and last knot
/// repeated `k + 1` times, so the stored sequence is `x_{-k}, ..., x_{n+k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformMesh {
    n: usize,
    k: usize,
    knots: Vec<f64>,
    h: f64,
}

impl UniformMesh {
    /// Builds the clamped uniform mesh with `n` segments for degree `k`.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidMesh { n, k });
        }
        let mut knots = Vec::with_capacity(n + 2 * k + 1);
        for a in 0..=(n + 2 * k) {
            let j = a as i64 - k as i64;
            let clamped = j.clamp(0, n as i64);
            knots.push(clamped as f64 / n as f64);
        }
        Ok(Self {
            n,
            k,
            knots,
            h: 1.0 / n as f64,
        })
    }

    /// Number of segments `n`.
    pub fn segments(&self) -> usize {
        self.n
    }

    /// Spline degree `k` the mesh was built for.
    pub fn degree(&self) -> usize {
        self.k
    }

    /// Mesh gauge `h = 1/n`, the uniform knot spacing.
    pub fn gauge(&self) -> f64 {
        self.h
    }

    /// The stored knot sequence `x_{-k}, ..., x_{n+k}`.
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Knot `x_j`. Indices beyond the stored range take the clamped boundary
    /// value (0 on the left, 1 on the right), which is what node averages of
    /// order above `k` need.
    pub fn knot(&self, j: i64) -> f64 {
        let a = (j + self.k as i64).clamp(0, (self.n + 2 * self.k) as i64) as usize;
        self.knots[a]
    }

    /// Node averages of `l` consecutive knots,
    /// `xi_{j,l} = (x_{j+1} + ... + x_{j+l}) / l` for `-l <= j <= n-1`.
    pub fn greville_nodes(&self, l: usize) -> Result<GrevilleNodes> {
        if l == 0 || l > self.k + 2 {
            return Err(Error::InvalidNodeOrder {
                order: l,
                max: self.k + 2,
            });
        }
        let n = self.n as i64;
        let mut nodes = Vec::with_capacity(self.n + l);
        for j in -(l as i64)..n {
            let sum: f64 = (1..=l as i64).map(|i| self.knot(j + i)).sum();
            nodes.push(sum / l as f64);
        }
        Ok(GrevilleNodes { order: l, nodes })
    }

    /// Index `i` of the half-open span `[x_i, x_{i+1})` containing `x`,
    /// with `x = 1` assigned to the last span (left-limit convention).
    pub(crate) fn span_of(&self, x: f64) -> usize {
        if x >= 1.0 {
            return self.n - 1;
        }
        ((x * self.n as f64) as usize).min(self.n - 1)
    }

    /// All basis values that can be nonzero at `x`: returns the first basis
    /// index `j0 = span - l` and the values `N_{j0,l}(x), ..., N_{j0+l,l}(x)`.
    ///
    /// Triangular degree-raising recursion; never divides by an empty span.
    pub(crate) fn basis_row(&self, l: usize, x: f64) -> (i64, Vec<f64>) {
        let span = self.span_of(x) as i64;
        let mut values = vec![0.0; l + 1];
        let mut left = vec![0.0; l + 1];
        let mut right = vec![0.0; l + 1];
        values[0] = 1.0;
        for p in 1..=l {
            left[p] = x - self.knot(span + 1 - p as i64);
            right[p] = self.knot(span + p as i64) - x;
            let mut saved = 0.0;
            for r in 0..p {
                let temp = values[r] / (right[r + 1] + left[p - r]);
                values[r] = saved + right[r + 1] * temp;
                saved = left[p - r] * temp;
            }
            values[p] = saved;
        }
        (span - l as i64, values)
    }

    /// Normalized B-spline `N_{j,l}(x)` for `1 <= l <= k`, `-l <= j <= n-1`.
    ///
    /// At `x = 1` the value is the left limit, so `N_{n-1,l}(1) = 1` and all
    /// other basis functions vanish there.
    pub fn bspline_value(&self, l: usize, j: i64, x: f64) -> Result<f64> {
        self.check_basis_args(l, j, x)?;
        let (first, values) = self.basis_row(l, x);
        let offset = j - first;
        if offset < 0 || offset > l as i64 {
            return Ok(0.0);
        }
        Ok(values[offset as usize])
    }

    /// `N_{j,l}(x)` through the truncated-power divided-difference formula
    /// `(x_{j+l+1} - x_j) [x_j, ..., x_{j+l+1}] (. - x)_+^l`.
    ///
    /// Numerically delicate; intended as a cross-check for small `n` and `l`,
    /// not as the evaluation workhorse. Coincident (clamped) knots use the
    /// confluent limit of the truncated power, whose one-sided derivatives at
    /// the crease are taken as zero, matching the left-limit convention.
    pub fn bspline_value_reference(&self, l: usize, j: i64, x: f64) -> Result<f64> {
        self.check_basis_args(l, j, x)?;
        if x == 1.0 {
            return Ok(if j == self.n as i64 - 1 { 1.0 } else { 0.0 });
        }
        let points: Vec<f64> = (j..=j + l as i64 + 1).map(|a| self.knot(a)).collect();
        let derivs = |t: f64, r: usize| truncated_power_derivative(t, x, l, r);
        let dd = confluent_divided_difference(&points, &derivs);
        Ok((self.knot(j + l as i64 + 1) - self.knot(j)) * dd)
    }

    fn check_basis_args(&self, l: usize, j: i64, x: f64) -> Result<()> {
        if l == 0 || l > self.k {
            return Err(Error::InvalidBasisDegree {
                degree: l,
                max: self.k,
            });
        }
        let (min, max) = (-(l as i64), self.n as i64 - 1);
        if j < min || j > max {
            return Err(Error::IndexOutOfRange { index: j, min, max });
        }
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::PointOutOfDomain { x });
        }
        Ok(())
    }
}

/// Averages of `order` consecutive knots, indexed `-order ..= n-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrevilleNodes {
    order: usize,
    nodes: Vec<f64>,
}

impl GrevilleNodes {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Smallest valid node index, `-order`.
    pub fn first_index(&self) -> i64 {
        -(self.order as i64)
    }

    /// Largest valid node index, `n - 1`.
    pub fn last_index(&self) -> i64 {
        self.first_index() + self.nodes.len() as i64 - 1
    }

    /// Node `xi_{j, order}`.
    pub fn node(&self, j: i64) -> f64 {
        self.nodes[(j + self.order as i64) as usize]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.nodes
    }
}

/// Divided difference over distinct points: the leading coefficient of the
/// interpolating polynomial. Repeated points are rejected; confluent tables
/// (which need derivative data) are internal to the reference basis path.
pub fn divided_difference(points: &[f64], values: &[f64]) -> Result<f64> {
    if points.is_empty() || points.len() != values.len() {
        return Err(Error::DividedDifferenceShape {
            points: points.len(),
            values: values.len(),
        });
    }
    for (a, &p) in points.iter().enumerate() {
        for &q in &points[a + 1..] {
            if p == q {
                // Adjacent duplicates would be a confluent run; either way the
                // value-only interface cannot resolve them.
                return if points[a + 1] == p {
                    Err(Error::CoincidentPoints)
                } else {
                    Err(Error::UnsortedRepeatedPoints)
                };
            }
        }
    }
    let mut table = values.to_vec();
    for order in 1..table.len() {
        for i in (order..table.len()).rev() {
            table[i] = (table[i] - table[i - 1]) / (points[i] - points[i - order]);
        }
    }
    Ok(*table.last().expect("nonempty table"))
}

/// Newton table over possibly coincident (sorted) points; `derivs(t, r)` must
/// supply the r-th derivative of the target function at `t` (r = 0 is the
/// plain value).
pub(crate) fn confluent_divided_difference(
    points: &[f64],
    derivs: &dyn Fn(f64, usize) -> f64,
) -> f64 {
    let m = points.len();
    let mut table: Vec<f64> = points.iter().map(|&t| derivs(t, 0)).collect();
    let mut factorial = 1.0;
    for order in 1..m {
        factorial *= order as f64;
        for i in (order..m).rev() {
            let (lo, hi) = (points[i - order], points[i]);
            table[i] = if hi == lo {
                derivs(lo, order) / factorial
            } else {
                (table[i] - table[i - 1]) / (hi - lo)
            };
        }
    }
    table[m - 1]
}

/// r-th derivative in `t` of the truncated power `(t - x)_+^l`, with all
/// derivatives at the crease `t = x` taken as zero (left limit).
fn truncated_power_derivative(t: f64, x: f64, l: usize, r: usize) -> f64 {
    if t <= x || r > l {
        return 0.0;
    }
    let mut coeff = 1.0;
    for i in 0..r {
        coeff *= (l - i) as f64;
    }
    coeff * (t - x).powi((l - r) as i32)
}
