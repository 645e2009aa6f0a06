//! Dense linear algebra kernel sized for desk-scale matrices: Gram matrices,
//! Householder least squares and a cyclic Jacobi symmetric eigensolver.
//!
//! Every tolerance in this module is a fixed constant so that results are
//! reproducible bit-for-bit across runs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used to decide whether a matrix is symmetric.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;
/// Jacobi stops once the off-diagonal Frobenius mass drops below this
/// fraction of the Frobenius norm of the input.
pub const JACOBI_TOLERANCE: f64 = 1e-14;
/// Maximum number of cyclic Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Diagonal entries of R below this fraction of the largest one are treated
/// as zero in the least-squares back substitution.
pub const RANK_TOLERANCE: f64 = 1e-12;

/// Dense real matrix stored in row-major order. All entries are finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n_cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {n_cols}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::new(n_rows, n_cols, data)
    }

    /// Builds a matrix from column vectors of equal length.
    pub fn from_columns<C: AsRef<[f64]>>(columns: &[C]) -> Result<Self> {
        let n_cols = columns.len();
        let n_rows = columns.first().map_or(0, |c| c.as_ref().len());
        let mut out = vec![0.0; n_rows * n_cols];
        for (j, col) in columns.iter().enumerate() {
            let col = col.as_ref();
            if col.len() != n_rows {
                return Err(Error::DimensionMismatch(format!(
                    "column {j} has {} entries, expected {n_rows}",
                    col.len()
                )));
            }
            for (i, &v) in col.iter().enumerate() {
                out[i * n_cols + j] = v;
            }
        }
        Self::new(n_rows, n_cols, out)
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    /// Row-major view of the entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm2(&self.data)
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Submatrix made of the listed columns, in the order given.
    pub fn select_columns(&self, columns: &[usize]) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::InvalidArgument("no columns selected".into()));
        }
        if let Some(&bad) = columns.iter().find(|&&c| c >= self.cols) {
            return Err(Error::DimensionMismatch(format!(
                "column index {bad} out of range for {} columns",
                self.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * columns.len());
        for i in 0..self.rows {
            let row = self.row(i);
            data.extend(columns.iter().map(|&c| row[c]));
        }
        Ok(Self {
            rows: self.rows,
            cols: columns.len(),
            data,
        })
    }

    /// Principal submatrix on the given (row = column) indices.
    pub fn principal_submatrix(&self, indices: &[usize]) -> Self {
        let k = indices.len();
        let mut data = Vec::with_capacity(k * k);
        for &i in indices {
            for &j in indices {
                data.push(self.get(i, j));
            }
        }
        Self {
            rows: k,
            cols: k,
            data,
        }
    }

    /// Computes `self * x`.
    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} applied to a {}x{} matrix",
                x.len(),
                self.rows,
                self.cols
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    /// Computes `selfᵀ * v`.
    pub fn tr_mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against a {}x{} matrix transpose",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = vec![0.0; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += a * vi;
            }
        }
        Ok(out)
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Returns `AᵀA`, the matrix of pairwise column inner products.
pub fn gram(a: &DenseMatrix) -> DenseMatrix {
    let n = a.cols;
    let columns: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = dot(&columns[i], &columns[j]);
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
    }
    DenseMatrix {
        rows: n,
        cols: n,
        data,
    }
}

fn check_symmetric(g: &DenseMatrix) -> Result<()> {
    if !g.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            g.rows, g.cols
        )));
    }
    let scale = g.frobenius_norm();
    for i in 0..g.rows {
        for j in (i + 1)..g.cols {
            let gap = (g.get(i, j) - g.get(j, i)).abs();
            if gap > SYMMETRY_TOLERANCE * scale {
                return Err(Error::NotSymmetric { i, j, gap });
            }
        }
    }
    Ok(())
}

/// All eigenvalues of a symmetric matrix in nondecreasing order, computed
/// by cyclic Jacobi rotations.
pub fn sym_eigenvalues(g: &DenseMatrix) -> Result<Vec<f64>> {
    check_symmetric(g)?;
    let n = g.rows;
    let mut a = g.data.clone();
    // symmetrize so that rotations act on an exactly symmetric matrix
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (a[i * n + j] + a[j * n + i]);
            a[i * n + j] = avg;
            a[j * n + i] = avg;
        }
    }
    let threshold = JACOBI_TOLERANCE * g.frobenius_norm();

    let off_mass = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_mass(&a) > threshold {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps: JACOBI_MAX_SWEEPS,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.is_finite() {
                    theta.signum() / (theta.abs() + theta.hypot(1.0))
                } else {
                    0.0
                };
                if t == 0.0 {
                    continue;
                }
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    let new_rp = c * arp - s * arq;
                    let new_rq = s * arp + c * arq;
                    a[r * n + p] = new_rp;
                    a[p * n + r] = new_rp;
                    a[r * n + q] = new_rq;
                    a[q * n + r] = new_rq;
                }
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Solution of a least-squares problem. `rank_deficient` is set when one or
/// more coefficients were zeroed because the matching diagonal entry of R
/// fell under [`RANK_TOLERANCE`].
#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    pub solution: Vec<f64>,
    pub rank_deficient: bool,
}

/// Minimizes `‖A z − y‖₂` through a Householder QR factorization of `A`.
pub fn least_squares(a: &DenseMatrix, y: &[f64]) -> Result<LeastSquares> {
    let (m, n) = (a.rows, a.cols);
    if m < n {
        return Err(Error::DimensionMismatch(format!(
            "least squares needs rows >= cols, got {m}x{n}"
        )));
    }
    if y.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {}, expected {m}",
            y.len()
        )));
    }

    // column-major working copy; R ends up in the upper triangle
    let mut r: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    let mut qty = y.to_vec();

    for k in 0..n {
        let norm_x = norm2(&r[k][k..]);
        if norm_x == 0.0 {
            continue;
        }
        let alpha = if r[k][k] > 0.0 { -norm_x } else { norm_x };
        let mut v: Vec<f64> = r[k][k..].to_vec();
        v[0] -= alpha;
        let vtv = dot(&v, &v);
        if vtv == 0.0 {
            continue;
        }
        let reflect = |col: &mut [f64]| {
            let f = 2.0 * dot(&v, col) / vtv;
            for (c, vi) in col.iter_mut().zip(&v) {
                *c -= f * vi;
            }
        };
        for col in r.iter_mut().skip(k + 1) {
            reflect(&mut col[k..]);
        }
        reflect(&mut qty[k..]);
        r[k][k] = alpha;
        for e in r[k][k + 1..].iter_mut() {
            *e = 0.0;
        }
    }

    let max_diag = (0..n).map(|k| r[k][k].abs()).fold(0.0, f64::max);
    let cutoff = RANK_TOLERANCE * max_diag;
    let mut z = vec![0.0; n];
    let mut rank_deficient = false;
    for k in (0..n).rev() {
        let rkk = r[k][k];
        if rkk.abs() < cutoff || rkk == 0.0 {
            rank_deficient = true;
            continue;
        }
        let tail: f64 = ((k + 1)..n).map(|j| r[j][k] * z[j]).sum();
        z[k] = (qty[k] - tail) / rkk;
    }
    Ok(LeastSquares {
        solution: z,
        rank_deficient,
    })
}
