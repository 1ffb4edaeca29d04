//! The variation-diminishing spline operator, its iterates through
//! collocation-matrix powers, spline evaluation, backward differences, and
//! spline derivatives.

use crate::basis::UniformMesh;
use crate::error::{Error, Result};

/// A spline in the degree-`degree` basis over a mesh, held as the coefficient
/// vector `c_{-degree}, ..., c_{n-1}`.
///
/// Evaluation is a convex combination of the coefficients, so values always
/// stay within the coefficient range.
#[derive(Debug, Clone, PartialEq)]
pub struct SplineFunction {
    mesh: UniformMesh,
    degree: usize,
    coeffs: Vec<f64>,
}

impl SplineFunction {
    pub fn new(mesh: UniformMesh, degree: usize, coeffs: Vec<f64>) -> Result<Self> {
        if degree == 0 || degree > mesh.degree() {
            return Err(Error::InvalidBasisDegree {
                degree,
                max: mesh.degree(),
            });
        }
        let expected = mesh.segments() + degree;
        if coeffs.len() != expected {
            return Err(Error::CoefficientCount {
                degree,
                n: mesh.segments(),
                expected,
                got: coeffs.len(),
            });
        }
        Ok(Self {
            mesh,
            degree,
            coeffs,
        })
    }

    pub fn mesh(&self) -> &UniformMesh {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients in index order `-degree, ..., n-1`.
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Smallest valid coefficient index, `-degree`.
    pub fn first_index(&self) -> i64 {
        -(self.degree as i64)
    }

    /// Coefficient `c_j`.
    pub fn coefficient(&self, j: i64) -> f64 {
        self.coeffs[(j + self.degree as i64) as usize]
    }

    /// Evaluates the spline at `x` in [0, 1] under the left-limit convention
    /// at `x = 1`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::PointOutOfDomain { x });
        }
        let (first, row) = self.mesh.basis_row(self.degree, x);
        let offset = (first + self.degree as i64) as usize;
        let mut acc = 0.0;
        for (r, w) in row.iter().enumerate() {
            acc += w * self.coeffs[offset + r];
        }
        Ok(acc)
    }

    /// Derivative as a spline of degree one less, with coefficients given by
    /// the backward difference quotients of the input coefficients over node
    /// averages of the input's order.
    pub fn derivative(&self) -> Result<SplineFunction> {
        if self.degree < 2 {
            return Err(Error::DerivativeDegreeTooLow {
                degree: self.degree,
            });
        }
        let diffs = backward_difference(
            &self.mesh,
            self.degree,
            &self.coeffs,
            -(self.degree as i64),
        )?;
        SplineFunction::new(self.mesh.clone(), self.degree - 1, diffs)
    }
}

/// Basis values at the degree-`k` node averages:
/// `A[i][j] = N_{j,k}(xi_{i,k})`, a row-stochastic banded matrix whose powers
/// drive the operator iterates.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocationMatrix {
    n: usize,
    k: usize,
    size: usize,
    data: Vec<f64>,
}

impl CollocationMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    /// Entry at row `i`, column `j`, both in `-k ..= n-1`.
    pub fn entry(&self, i: i64, j: i64) -> f64 {
        let k = self.k as i64;
        self.data[(i + k) as usize * self.size + (j + k) as usize]
    }

    /// Matrix-vector product, `v` ordered like the coefficient vector.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.size);
        let mut out = vec![0.0; self.size];
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.data[i * self.size..(i + 1) * self.size];
            *o = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.size)
            .map(|i| self.data[i * self.size..(i + 1) * self.size].iter().sum())
            .collect()
    }
}

/// Builds the collocation matrix of a mesh at its degree-`k` node averages.
pub fn collocation_matrix(mesh: &UniformMesh) -> CollocationMatrix {
    let (n, k) = (mesh.segments(), mesh.degree());
    let size = n + k;
    let nodes = mesh
        .greville_nodes(k)
        .expect("mesh degree is a valid node order");
    let mut data = vec![0.0; size * size];
    for i in 0..size {
        let xi = nodes.as_slice()[i];
        let (first, row) = mesh.basis_row(k, xi);
        let col0 = (first + k as i64) as usize;
        data[i * size + col0..i * size + col0 + row.len()].copy_from_slice(&row);
    }
    CollocationMatrix { n, k, size, data }
}

/// Applies the spline operator: samples `f` at the degree-`k` node averages
/// and uses the samples as coefficients of the degree-`k` basis.
pub fn schoenberg(mesh: &UniformMesh, f: impl Fn(f64) -> f64) -> SplineFunction {
    let k = mesh.degree();
    let nodes = mesh
        .greville_nodes(k)
        .expect("mesh degree is a valid node order");
    let coeffs: Vec<f64> = nodes.as_slice().iter().map(|&xi| f(xi)).collect();
    SplineFunction::new(mesh.clone(), k, coeffs).expect("node count matches coefficient count")
}

/// m-th iterate of the operator. The coefficient vector is the (m-1)-th
/// collocation-matrix power applied to the node samples of `f`; the power is
/// realized as repeated multiplication so results are bit-reproducible.
pub fn iterate(mesh: &UniformMesh, f: impl Fn(f64) -> f64, m: usize) -> Result<SplineFunction> {
    if m == 0 {
        return Err(Error::ZeroIterate);
    }
    let base = schoenberg(mesh, f);
    if m == 1 {
        return Ok(base);
    }
    let matrix = collocation_matrix(mesh);
    let mut coeffs = base.coefficients().to_vec();
    for _ in 1..m {
        coeffs = matrix.apply(&coeffs);
    }
    SplineFunction::new(mesh.clone(), mesh.degree(), coeffs)
}

/// Backward difference quotients of a node-indexed sequence: entry `j` of the
/// output is `(v_j - v_{j-1}) / (xi_{j,l} - xi_{j-1,l})`, where `first_index`
/// is the node index of `values[0]`. The output starts at `first_index + 1`.
pub fn backward_difference(
    mesh: &UniformMesh,
    l: usize,
    values: &[f64],
    first_index: i64,
) -> Result<Vec<f64>> {
    let nodes = mesh.greville_nodes(l)?;
    let mut out = Vec::with_capacity(values.len().saturating_sub(1));
    for (pos, pair) in values.windows(2).enumerate() {
        let j = first_index + 1 + pos as i64;
        let den = nodes.node(j) - nodes.node(j - 1);
        if den == 0.0 {
            return Err(Error::DegenerateSpacing { index: j });
        }
        out.push((pair[1] - pair[0]) / den);
    }
    Ok(out)
}
