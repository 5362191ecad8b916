//! Dense square matrices and the symmetric kernels used by the variability
//! statistics: cyclic Jacobi eigenvalues, determinant, and full-rank
//! reduction by greedy pivoted Cholesky.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Row-major square matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, 1.0)
    }

    pub fn scaled_identity(n: usize, s: f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = s;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::invalid(format!(
                "row {r} has {} entries, expected {n}",
                rows[r].len()
            )));
        }
        Ok(Matrix { n, data: rows.concat() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix { n: self.n, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    /// Sum of squared entries.
    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Largest `|a_ij - a_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.asymmetry() <= tol
    }

    pub fn principal_submatrix(&self, keep: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(keep.len());
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                out[(a, b)] = self[(i, j)];
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for l in 0..n {
                let a = self[(i, l)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[l * n + j];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.n).map(|i| self.row(i))).finish()
    }
}

/// Eigenvalues of a symmetric matrix, sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub sweeps: usize,
}

impl EigenDecomposition {
    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    pub fn product(&self) -> f64 {
        self.eigenvalues.iter().product()
    }
}

pub const SYMMETRY_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues by cyclic Jacobi rotations.
///
/// Converges when the off-diagonal Frobenius mass drops below
/// `1e-14 * ||M||_F`.
pub fn eigenvalues_sym(m: &Matrix) -> Result<EigenDecomposition> {
    let asym = m.asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(asym));
    }
    let n = m.dim();
    let mut a = m.clone();
    // symmetrize exactly so rotations see one value per pair
    for i in 0..n {
        for j in i + 1..n {
            let s = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = s;
            a[(j, i)] = s;
        }
    }
    let threshold = 1e-14 * m.frobenius_sq().sqrt();
    let off = |a: &Matrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += 2.0 * a[(i, j)] * a[(i, j)];
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let residual = off(&a);
        if residual <= threshold || n < 2 {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, residual });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                // rotation angle: t = tan(theta), smaller root for stability
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    let new_rp = arp - s * (arq + tau * arp);
                    let new_rq = arq + s * (arp - tau * arq);
                    a[(r, p)] = new_rp;
                    a[(p, r)] = new_rp;
                    a[(r, q)] = new_rq;
                    a[(q, r)] = new_rq;
                }
            }
        }
    }

    let mut eigenvalues = a.diagonal();
    eigenvalues.sort_by(|x, y| y.total_cmp(x));
    Ok(EigenDecomposition { eigenvalues, sweeps })
}

/// Determinant by Gaussian elimination with partial pivoting. Results within
/// `1e-12` below zero are clamped to zero.
pub fn det_sym(m: &Matrix) -> f64 {
    let n = m.dim();
    let mut a = m.clone();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[(x, col)].abs().total_cmp(&a[(y, col)].abs()))
            .unwrap();
        if a[(pivot, col)] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..n {
                let tmp = a[(col, j)];
                a[(col, j)] = a[(pivot, j)];
                a[(pivot, j)] = tmp;
            }
            det = -det;
        }
        let d = a[(col, col)];
        det *= d;
        for r in col + 1..n {
            let f = a[(r, col)] / d;
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                a[(r, j)] -= f * a[(col, j)];
            }
        }
    }
    if det < 0.0 && det > -1e-12 {
        0.0
    } else {
        det
    }
}

pub fn trace(m: &Matrix) -> f64 {
    m.trace()
}

/// Principal submatrix selected by greedy pivoted Cholesky.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub matrix: Matrix,
    /// Kept indices, ascending.
    pub kept: Vec<usize>,
}

impl Reduction {
    pub fn rank(&self) -> usize {
        self.kept.len()
    }

    /// True when nothing survived (the input was numerically zero).
    pub fn is_empty(&self) -> bool {
        self.kept.is_empty()
    }
}

/// Reduces a PSD matrix to a positive definite principal submatrix.
///
/// Repeatedly keeps the index with the largest remaining Schur-complement
/// pivot and stops once that pivot falls below `tol * max diagonal`. An
/// all-zero matrix yields an empty reduction.
pub fn full_rank_reduce(m: &Matrix, tol: f64) -> Result<Reduction> {
    let asym = m.asymmetry();
    if asym > SYMMETRY_TOL.max(tol) {
        return Err(Error::NotSymmetric(asym));
    }
    let n = m.dim();
    let max_diag = m.diagonal().into_iter().fold(0.0f64, f64::max);
    if max_diag <= 0.0 {
        return Ok(Reduction { matrix: Matrix::zeros(0), kept: Vec::new() });
    }
    let cutoff = tol * max_diag;
    // residual diagonal of the Schur complement and the partial factor L
    let mut resid = m.diagonal();
    let mut factor: Vec<Vec<f64>> = Vec::new();
    let mut kept = Vec::new();
    let mut remaining: Vec<usize> = (0..n).collect();
    while !remaining.is_empty() {
        let (pos, &best) = remaining
            .iter()
            .enumerate()
            .max_by(|(_, &x), (_, &y)| resid[x].total_cmp(&resid[y]).then(y.cmp(&x)))
            .unwrap();
        let pivot = resid[best];
        if pivot < cutoff || pivot <= 0.0 {
            break;
        }
        remaining.swap_remove(pos);
        let root = pivot.sqrt();
        let mut col = vec![0.0; n];
        for &i in &remaining {
            let mut v = m[(i, best)];
            for f in &factor {
                v -= f[i] * f[best];
            }
            col[i] = v / root;
            resid[i] -= col[i] * col[i];
        }
        col[best] = root;
        factor.push(col);
        kept.push(best);
    }
    kept.sort_unstable();
    Ok(Reduction { matrix: m.principal_submatrix(&kept), kept })
}
