//! Two-path matrices of the incidence graph and their spectra.
//!
//! The bipartite adjacency matrix `A = [[0, M], [M^T, 0]]` has eigenvalues
//! `±sqrt(mu)` for every eigenvalue `mu` of `M M^T`, plus zeros, so only the
//! `q^2 x q^2` matrix `M M^T` is ever decomposed. The solver is cyclic Jacobi,
//! generic over the floating-point type.

use std::io::Write;

use num_traits::Float;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{guard, Error, Result};
use crate::graph::GraphSpec;

/// Largest `M M^T` dimension that will be built.
pub const MAX_GRAM_DIM: u128 = 4096;
/// Sweep cap for the Jacobi solver.
pub const MAX_SWEEPS: usize = 100;
/// Off-diagonal Frobenius threshold, relative to the matrix norm.
pub const OFF_DIAGONAL_THRESHOLD: f64 = 1e-12;
/// Eigenvalues closer than this fraction of the spectral scale are merged.
pub const CLUSTER_GAP: f64 = 1e-6;

fn cast<T: Float>(x: f64) -> T {
    T::from(x).expect("f64 constant representable")
}

/// Dense symmetric matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Float> SymMatrix<T> {
    pub fn new(n: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::InvalidParameter(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        Ok(SymMatrix { n, data })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let data = (0..n * n).map(|i| f(i / n, i % n)).collect();
        SymMatrix { n, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn frobenius(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt()
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self.get(i, i))
    }
}

/// Exact non-negative integer matrix (path counts).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<u64>,
}

impl IntMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.n + j]
    }

    pub fn trace(&self) -> u128 {
        (0..self.n).map(|i| u128::from(self.get(i, i))).sum()
    }

    pub fn to_real<T: Float>(&self) -> SymMatrix<T> {
        SymMatrix::from_fn(self.n, |i, j| T::from(self.get(i, j)).expect("count representable"))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in self.data.chunks(self.n.max(1)) {
            w.write_record(row.iter().map(u64::to_string)).map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::InvalidParameter(format!("csv output failed: {e}")))
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidParameter(format!("csv output failed: {e}"))
}

/// `M M^T` for the base graph: entry `(x, x')` counts paths `x -> y -> x'`.
pub fn build_mmt(spec: &GraphSpec) -> Result<IntMatrix> {
    if spec.m() != 0 {
        return Err(Error::InvalidParameter(
            "two-path matrix is built for the base graph only (m = 0)".into(),
        ));
    }
    let n = spec.num_points();
    guard("two-path matrix dimension", u128::from(n), MAX_GRAM_DIM)?;
    let n = n as usize;
    let mut data = vec![0u64; n * n];
    data.par_chunks_mut(n).enumerate().try_for_each(|(x, row)| -> Result<()> {
        for y in spec.point_neighbor_ids(x as u64)? {
            for x2 in spec.poly_neighbor_ids(y)? {
                row[x2 as usize] += 1;
            }
        }
        Ok(())
    })?;
    Ok(IntMatrix { n, data })
}

/// `q^d I + q^{d-1} (J - S)` with `S = I_q ⊗ J_q` (points sharing `x1`).
/// Defined for `d >= 1`.
pub fn closed_form_mmt(q: u64, d: u32) -> Option<IntMatrix> {
    if d == 0 || q < 2 {
        return None;
    }
    let n = (q * q) as usize;
    let diag = q.pow(d);
    let off = q.pow(d - 1);
    let data = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let same_x1 = (i as u64) / q == (j as u64) / q;
            let identity = if i == j { diag } else { 0 };
            identity + if same_x1 { 0 } else { off }
        })
        .collect();
    Some(IntMatrix { n, data })
}

/// Eigen-decomposition; `vectors` is column-major, column `i` pairs with `values[i]`.
#[derive(Clone, Debug)]
pub struct Eigen<T> {
    pub values: Vec<T>,
    pub vectors: Vec<T>,
    pub sweeps: usize,
}

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// `1e-12 * ||A||_F` (or a few ulps of the norm for narrow float types).
pub fn jacobi_eigen<T: Float>(matrix: &SymMatrix<T>) -> Result<Eigen<T>> {
    let n = matrix.n;
    let mut a = matrix.data.clone();
    let mut v = SymMatrix::<T>::identity(n).data;
    let rel = cast::<T>(OFF_DIAGONAL_THRESHOLD).max(T::epsilon() * cast(4.0));
    let threshold = rel * matrix.frobenius();
    let two = cast::<T>(2.0);

    let off_norm = |a: &[T]| {
        let mut s = T::zero();
        for i in 0..n {
            for j in i + 1..n {
                s = s + two * a[i * n + j] * a[i * n + j];
            }
        }
        s.sqrt()
    };

    for sweep in 0..=MAX_SWEEPS {
        if off_norm(&a) <= threshold {
            let values = (0..n).map(|i| a[i * n + i]).collect();
            // columns of v are the eigenvectors; store them column-major
            let vectors = (0..n * n).map(|idx| v[(idx % n) * n + idx / n]).collect();
            return Ok(Eigen { values, vectors, sweeps: sweep });
        }
        if sweep == MAX_SWEEPS {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (two * apq);
                let t = if theta.abs() > cast(1e150) {
                    T::one() / (two * theta)
                } else {
                    let sign = if theta < T::zero() { -T::one() } else { T::one() };
                    sign / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = T::zero();
                a[q * n + p] = T::zero();
                // V <- V J
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(Error::NoConvergence { sweeps: MAX_SWEEPS })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenCluster<T> {
    pub value: T,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport<T> {
    pub dimension: usize,
    /// Clustered eigenvalues of the decomposed matrix, descending.
    pub eigenvalues: Vec<EigenCluster<T>>,
    /// Largest adjacency eigenvalue, `sqrt` of the top Gram eigenvalue.
    pub lambda1: T,
    /// Second adjacency eigenvalue, `sqrt` of the second Gram eigenvalue.
    pub lambda2: T,
    /// Filled in by [`expander_check`]; `None` when degrees are unknown.
    pub expander_ok: Option<bool>,
    /// `max_i ||A v_i - mu_i v_i||_inf`.
    pub residual: T,
    pub sweeps: usize,
}

impl<T: Float> SpectrumReport<T> {
    /// Spectrum of the full bipartite adjacency matrix when this report
    /// describes `M M^T` and the right side has `right_dim` vertices.
    pub fn adjacency_spectrum(&self, right_dim: usize, tol: T) -> Vec<EigenCluster<T>> {
        let mut positive = Vec::new();
        let mut rank = 0usize;
        for c in &self.eigenvalues {
            if c.value > tol {
                positive.push(EigenCluster { value: c.value.sqrt(), multiplicity: c.multiplicity });
                rank += c.multiplicity;
            }
        }
        let zeros = (self.dimension + right_dim).saturating_sub(2 * rank);
        let mut out = positive.clone();
        if zeros > 0 {
            out.push(EigenCluster { value: T::zero(), multiplicity: zeros });
        }
        out.extend(positive.iter().rev().map(|c| EigenCluster { value: -c.value, multiplicity: c.multiplicity }));
        out
    }

    pub fn trace(&self) -> T {
        self.eigenvalues
            .iter()
            .fold(T::zero(), |acc, c| acc + c.value * T::from(c.multiplicity).unwrap())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()>
    where
        T: std::fmt::Display,
    {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["eigenvalue", "multiplicity"]).map_err(csv_err)?;
        for c in &self.eigenvalues {
            w.write_record([c.value.to_string(), c.multiplicity.to_string()]).map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::InvalidParameter(format!("csv output failed: {e}")))
    }
}

/// Full spectrum of a symmetric matrix with multiplicities.
pub fn spectrum<T: Float>(matrix: &SymMatrix<T>, tol: T) -> Result<SpectrumReport<T>> {
    let n = matrix.n;
    for i in 0..n {
        for j in i + 1..n {
            if (matrix.get(i, j) - matrix.get(j, i)).abs() > tol {
                return Err(Error::NotSymmetric { row: i, col: j });
            }
        }
    }
    let eig = jacobi_eigen(matrix)?;

    let mut residual = T::zero();
    for (col, &mu) in eig.values.iter().enumerate() {
        let vcol = &eig.vectors[col * n..(col + 1) * n];
        for i in 0..n {
            let av = (0..n).fold(T::zero(), |acc, j| acc + matrix.get(i, j) * vcol[j]);
            residual = residual.max((av - mu * vcol[i]).abs());
        }
    }

    let mut sorted = eig.values.clone();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    let scale = sorted.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let gap = if scale > T::zero() { scale * cast(CLUSTER_GAP) } else { tol };

    let mut clusters: Vec<(T, usize)> = Vec::new();
    let mut last = None;
    for &x in &sorted {
        match (clusters.last_mut(), last) {
            (Some((sum, count)), Some(prev)) if prev - x <= gap => {
                *sum = *sum + x;
                *count += 1;
            }
            _ => clusters.push((x, 1)),
        }
        last = Some(x);
    }
    let eigenvalues = clusters
        .into_iter()
        .map(|(sum, count)| EigenCluster { value: sum / T::from(count).unwrap(), multiplicity: count })
        .collect();

    let root = |x: T| x.max(T::zero()).sqrt();
    Ok(SpectrumReport {
        dimension: n,
        eigenvalues,
        lambda1: sorted.first().map_or(T::zero(), |&x| root(x)),
        lambda2: sorted.get(1).map_or(T::zero(), |&x| root(x)),
        expander_ok: None,
        residual,
        sweeps: eig.sweeps,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpanderCheck<T> {
    pub expander_ok: bool,
    pub degree_left: u64,
    pub degree_right: u64,
    /// `sqrt(max(D_L, D_R))`.
    pub bound: T,
    /// `sqrt(D_L D_R)`, the value `lambda1` must take for a biregular graph.
    pub lambda1_expected: T,
    pub lambda1_ok: bool,
    pub report: SpectrumReport<T>,
}

fn judge<T: Float>(mut report: SpectrumReport<T>, dl: u64, dr: u64, tol: T) -> ExpanderCheck<T> {
    let to_t = |x: u64| T::from(x).expect("degree representable");
    let bound = to_t(dl.max(dr)).sqrt();
    let lambda1_expected = (to_t(dl) * to_t(dr)).sqrt();
    let expander_ok = report.lambda2 <= bound + tol;
    report.expander_ok = Some(expander_ok);
    ExpanderCheck {
        expander_ok,
        degree_left: dl,
        degree_right: dr,
        bound,
        lambda1_ok: (report.lambda1 - lambda1_expected).abs() <= tol * lambda1_expected.max(T::one()),
        lambda1_expected,
        report,
    }
}

/// Spectral expander test for the base incidence graph.
pub fn expander_check<T: Float>(spec: &GraphSpec, tol: T) -> Result<ExpanderCheck<T>> {
    let mmt = build_mmt(spec)?.to_real::<T>();
    let report = spectrum(&mmt, tol)?;
    Ok(judge(report, spec.left_degree(), spec.right_degree(), tol))
}

/// Same test for an arbitrary 0/1 biadjacency matrix (rows are left vertices).
/// Degrees are taken as the maximum row and column sums.
pub fn expander_check_biadjacency<T: Float>(rows: &[Vec<bool>], tol: T) -> Result<ExpanderCheck<T>> {
    let left = rows.len();
    let right = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != right) {
        return Err(Error::InvalidParameter("ragged biadjacency matrix".into()));
    }
    guard("two-path matrix dimension", left as u128, MAX_GRAM_DIM)?;
    let gram = SymMatrix::from_fn(left, |i, j| {
        let c = rows[i].iter().zip(&rows[j]).filter(|(a, b)| **a && **b).count();
        T::from(c).unwrap()
    });
    let report = spectrum(&gram, tol)?;
    let dl = rows.iter().map(|r| r.iter().filter(|&&b| b).count()).max().unwrap_or(0) as u64;
    let dr = (0..right).map(|j| rows.iter().filter(|r| r[j]).count()).max().unwrap_or(0) as u64;
    Ok(judge(report, dl, dr, tol))
}

/// Second eigenvalue of the `m`-amplified graph: the amplification is a tensor
/// product with the all-ones `2^m x 2^m` matrix, whose spectrum is `{2^m, 0}`.
pub fn amplified_lambda2<T: Float>(lambda2: T, m: u32) -> T {
    lambda2 * cast::<T>(2.0).powi(m as i32)
}
