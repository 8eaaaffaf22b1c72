//! Small dense eigenproblems: symmetric tridiagonal (implicit QL) and dense
//! symmetric matrices (Householder reduction followed by the same QL).

use alloc::vec;
use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};

const MAX_QL_SWEEPS: usize = 60;

/// Eigen-decomposition with eigenvalues ascending. `vectors` is row-major
/// `rows x n`; column `k` holds the tracked rows of eigenvector `k`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<f64>,
    pub rows: usize,
}

impl Eigen {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Entry `row` of eigenvector `k`.
    pub fn component(&self, row: usize, k: usize) -> f64 {
        self.vectors[row * self.n() + k]
    }

    /// Eigenvector `k` (only meaningful when all rows were tracked).
    pub fn vector(&self, k: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.component(r, k)).collect()
    }
}

/// The `k` lowest eigenpairs of the symmetric tridiagonal matrix with
/// diagonal `alpha` and off-diagonal `beta`.
pub fn tridiag_eigs(alpha: &[f64], beta: &[f64], k: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let eig = tridiag_eigen(alpha, beta)?;
    let k = k.min(eig.n());
    let values = eig.values[..k].to_vec();
    let vectors = (0..k).map(|i| eig.vector(i)).collect();
    Ok((values, vectors))
}

/// Full eigen-decomposition of a symmetric tridiagonal matrix.
pub fn tridiag_eigen(alpha: &[f64], beta: &[f64]) -> Result<Eigen> {
    let n = alpha.len();
    check_tridiag(n, beta)?;
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    solve_tridiag(alpha, beta, z, n)
}

/// Eigenvalues of a symmetric tridiagonal matrix together with the last
/// component of each eigenvector, in O(n^2).
pub fn tridiag_eigen_last_row(alpha: &[f64], beta: &[f64]) -> Result<Eigen> {
    let n = alpha.len();
    check_tridiag(n, beta)?;
    let mut z = vec![0.0; n];
    if n > 0 {
        z[n - 1] = 1.0;
    }
    solve_tridiag(alpha, beta, z, 1)
}

fn check_tridiag(n: usize, beta: &[f64]) -> Result<()> {
    if n == 0 || beta.len() + 1 != n {
        return Err(Error::DimensionMismatch {
            expected: n.saturating_sub(1),
            got: beta.len(),
        });
    }
    Ok(())
}

fn solve_tridiag(alpha: &[f64], beta: &[f64], mut z: Vec<f64>, rows: usize) -> Result<Eigen> {
    let n = alpha.len();
    let mut d = alpha.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(beta);
    ql_implicit(&mut d, &mut e, &mut z, rows)?;
    Ok(sorted(d, z, rows))
}

/// Full eigen-decomposition of the dense symmetric `n x n` matrix `a`
/// (row-major). Only the lower triangle is read.
pub fn symmetric_eigen(a: &[f64], n: usize) -> Result<Eigen> {
    if a.len() != n * n || n == 0 {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            got: a.len(),
        });
    }
    let mut z = a.to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    householder_tridiagonalize(&mut z, n, &mut d, &mut e);
    // e[i] couples i-1 and i after the reduction; QL wants e[i] between i, i+1.
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    ql_implicit(&mut d, &mut e, &mut z, n)?;
    Ok(sorted(d, z, n))
}

fn sorted(d: Vec<f64>, z: Vec<f64>, rows: usize) -> Eigen {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&i| d[i]).collect();
    let mut vectors = vec![0.0; rows * n];
    for r in 0..rows {
        for (k, &src) in order.iter().enumerate() {
            vectors[r * n + k] = z[r * n + src];
        }
    }
    Eigen {
        values,
        vectors,
        rows,
    }
}

/// Implicit QL with Wilkinson shifts. `d` is the diagonal, `e[i]` couples
/// `i` and `i + 1` (`e[n-1]` is scratch). The rotations are accumulated into
/// the `rows x n` row-major matrix `z`.
fn ql_implicit(d: &mut [f64], e: &mut [f64], z: &mut [f64], rows: usize) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_SWEEPS {
                return Err(Error::TridiagNotConverged);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..rows {
                    let row = &mut z[k * n..(k + 1) * n];
                    let f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Householder reduction of a symmetric matrix to tridiagonal form. On exit
/// `a` holds the orthogonal transformation, `d` the diagonal and `e[i]` the
/// coupling between `i - 1` and `i`.
fn householder_tridiagonalize(a: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    let idx = |r: usize, c: usize| r * n + c;
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..i).map(|k| a[idx(i, k)].abs()).sum();
            if scale == 0.0 {
                e[i] = a[idx(i, l)];
            } else {
                for k in 0..i {
                    a[idx(i, k)] /= scale;
                    h += a[idx(i, k)] * a[idx(i, k)];
                }
                let f = a[idx(i, l)];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[idx(i, l)] = f - g;
                let mut f = 0.0;
                for j in 0..i {
                    a[idx(j, i)] = a[idx(i, j)] / h;
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[idx(j, k)] * a[idx(i, k)];
                    }
                    for k in j + 1..i {
                        g += a[idx(k, j)] * a[idx(i, k)];
                    }
                    e[j] = g / h;
                    f += e[j] * a[idx(i, j)];
                }
                let hh = f / (h + h);
                for j in 0..i {
                    let f = a[idx(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[idx(j, k)] -= f * e[k] + g * a[idx(i, k)];
                    }
                }
            }
        } else {
            e[i] = a[idx(i, l)];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += a[idx(i, k)] * a[idx(k, j)];
                }
                for k in 0..i {
                    a[idx(k, j)] -= g * a[idx(k, i)];
                }
            }
        }
        d[i] = a[idx(i, i)];
        a[idx(i, i)] = 1.0;
        for j in 0..i {
            a[idx(j, i)] = 0.0;
            a[idx(i, j)] = 0.0;
        }
    }
}
