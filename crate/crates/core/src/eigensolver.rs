//! Thick-restart Lanczos with full reorthogonalization.
//!
//! Eigenpairs are found one at a time. Each run builds a Krylov basis in the
//! orthogonal complement of the eigenvectors already locked, reorthogonalizes
//! every new vector twice against the locked set and the whole basis, and
//! restarts by keeping the lower half of the Ritz vectors. Finding the pairs
//! sequentially means a degenerate ground state shows up twice instead of
//! hiding inside a single Krylov direction.
//!
//! A pair is accepted only after its residual `|H y - E y|` has been
//! recomputed with a fresh operator application.

use alloc::vec;
use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::SectorBasis;
use crate::error::{Error, Result};
use crate::hamiltonian::HamiltonianOperator;
use crate::lattice::{build, LatticeSpec};
use crate::linalg::{self, Eigen};

/// Energies closer than this are reported as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// A real symmetric operator known only through its action.
pub trait LinearOperator {
    fn dim(&self) -> usize;

    /// `y = A x`; both slices have length `dim()`.
    fn apply_into(&self, x: &[f64], y: &mut [f64]);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosConfig {
    /// Residual tolerance `|H v - E v|` for accepting an eigenpair.
    pub tol: f64,
    /// Krylov basis size before a restart.
    pub max_krylov: usize,
    pub max_restarts: usize,
    /// Number of lowest eigenvalues, counted with multiplicity.
    pub n_eigs: usize,
    pub seed: u64,
    /// Bytes available for Krylov vectors; the basis shrinks to fit.
    pub memory_budget: usize,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_krylov: 300,
            max_restarts: 50,
            n_eigs: 2,
            seed: 0x5eed,
            memory_budget: 8 << 30,
        }
    }
}

impl LanczosConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::Contract(alloc::format!(
                "tol = {} must be positive",
                self.tol
            )));
        }
        if self.n_eigs == 0 {
            return Err(Error::Contract("n_eigs must be at least 1".into()));
        }
        if self.max_krylov <= 2 * self.n_eigs {
            return Err(Error::Contract(alloc::format!(
                "max_krylov = {} must exceed 2 * n_eigs = {}",
                self.max_krylov,
                2 * self.n_eigs
            )));
        }
        Ok(())
    }

    /// Krylov basis size actually used for an operator of dimension `dim`.
    pub fn krylov_size(&self, dim: usize) -> usize {
        let per_vector = 8 * dim.max(1);
        // locked vectors plus the work vector and one Ritz vector
        let overhead = self.n_eigs + 2;
        let fit = (self.memory_budget / per_vector).saturating_sub(overhead);
        self.max_krylov.min(fit)
    }
}

/// How [`ground_energy`] chooses magnetization sectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectorPolicy {
    /// Only the sector with the smallest `|S^z|`. For an SU(2)-invariant
    /// Hamiltonian this sector always contains the ground state.
    MinAbsSz,
    /// Every sector with `S^z >= 0`; returns the lowest.
    ScanAll,
}

/// Lowest eigenpairs of a linear operator.
#[derive(Debug, Clone)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    pub residuals: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    /// Operator applications, including residual checks.
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct GroundStateResult {
    /// Lowest energies, ascending, with multiplicity.
    pub energies: Vec<f64>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
    /// `(n_sites, n_up)`.
    pub sector: (usize, usize),
    pub degenerate: bool,
    /// Normalized ground-state vector in the sector basis.
    pub vector: Option<Vec<f64>>,
}

impl GroundStateResult {
    pub fn energy(&self) -> f64 {
        self.energies[0]
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// The `cfg.n_eigs` lowest eigenpairs of a Heisenberg sector operator.
pub fn lowest_eigs(op: &HamiltonianOperator, cfg: &LanczosConfig) -> Result<GroundStateResult> {
    cfg.validate()?;
    let basis = op.basis();
    let sector = (basis.n_sites(), basis.n_up());
    if basis.dim() == 1 {
        let e = op.diagonal()[0];
        return Ok(GroundStateResult {
            energies: vec![e],
            residuals: vec![0.0],
            iterations: 0,
            sector,
            degenerate: false,
            vector: Some(vec![1.0]),
        });
    }
    let pairs = lanczos(op, cfg)?;
    let degenerate = pairs.values.len() > 1 && pairs.values[1] - pairs.values[0] < DEGENERACY_TOL;
    Ok(GroundStateResult {
        energies: pairs.values,
        residuals: pairs.residuals,
        iterations: pairs.iterations,
        sector,
        degenerate,
        vector: pairs.vectors.into_iter().next(),
    })
}

/// Smallest `n_up` with `|S^z|` minimal.
pub fn min_abs_sz_up(n_sites: usize) -> usize {
    n_sites.div_ceil(2)
}

/// Ground state of the Heisenberg model on `spec`.
pub fn ground_energy(
    spec: &LatticeSpec,
    cfg: &LanczosConfig,
    policy: SectorPolicy,
) -> Result<GroundStateResult> {
    let bonds = build(spec)?;
    let n = spec.n_sites();
    let first = min_abs_sz_up(n);
    let last = match policy {
        SectorPolicy::MinAbsSz => first,
        SectorPolicy::ScanAll => n,
    };
    let mut best: Option<GroundStateResult> = None;
    for n_up in first..=last {
        let basis = SectorBasis::enumerate(n, n_up)?;
        let op = HamiltonianOperator::new(bonds.clone(), basis)?;
        let res = lowest_eigs(&op, cfg)?;
        if best.as_ref().is_none_or(|b| res.energy() < b.energy()) {
            best = Some(res);
        }
    }
    Ok(best.expect("at least one sector"))
}

/// Thick-restart Lanczos for the lowest `cfg.n_eigs` eigenpairs of `op`.
pub fn lanczos(op: &impl LinearOperator, cfg: &LanczosConfig) -> Result<Eigenpairs> {
    cfg.validate()?;
    let dim = op.dim();
    if dim == 0 {
        return Err(Error::Contract("operator has dimension zero".into()));
    }
    let want = cfg.n_eigs.min(dim);
    let krylov = cfg.krylov_size(dim);
    if krylov < 3.min(dim) {
        return Err(Error::MemoryLimit {
            needed: 8 * (cfg.n_eigs as u128 + 5) * dim as u128,
            limit: cfg.memory_budget as u128,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Eigenpairs {
        values: Vec::with_capacity(want),
        residuals: Vec::with_capacity(want),
        vectors: Vec::with_capacity(want),
        iterations: 0,
    };
    while out.values.len() < want {
        let found = single_run(op, cfg, krylov, &out.vectors, &mut rng, &mut out.iterations)?;
        out.values.push(found.0);
        out.residuals.push(found.2);
        out.vectors.push(found.1);
    }

    let mut order: Vec<usize> = (0..want).collect();
    order.sort_by(|&a, &b| out.values[a].total_cmp(&out.values[b]));
    Ok(Eigenpairs {
        values: order.iter().map(|&i| out.values[i]).collect(),
        residuals: order.iter().map(|&i| out.residuals[i]).collect(),
        vectors: order.iter().map(|&i| out.vectors[i].clone()).collect(),
        iterations: out.iterations,
    })
}

/// Lowest eigenpair of `op` restricted to the complement of `locked`.
fn single_run(
    op: &impl LinearOperator,
    cfg: &LanczosConfig,
    krylov: usize,
    locked: &[Vec<f64>],
    rng: &mut ChaCha8Rng,
    iterations: &mut usize,
) -> Result<(f64, Vec<f64>, f64)> {
    let dim = op.dim();
    let avail = dim - locked.len();
    let m = krylov.min(avail).max(1);

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m);
    basis.push(random_unit(rng, dim, locked, &[]));
    let mut t = vec![0.0; m * m];
    let mut w = vec![0.0; dim];
    let mut kept = 0;
    let mut best_residual = f64::INFINITY;
    let mut next_check = cfg.tol;

    for restart in 0..=cfg.max_restarts {
        let mut j = basis.len() - 1;
        let mut beta;
        loop {
            op.apply_into(&basis[j], &mut w);
            *iterations += 1;
            project_out(&mut w, locked);
            let h = orthogonalize(&mut w, &basis);
            t[j * m + j] = h[j];
            beta = norm(&w);

            let exhausted = j + 1 == avail;
            let check_now = kept == 0 || (j - kept).is_multiple_of(5) || j + 1 == m || exhausted;
            if check_now {
                let eig = ritz(&t, m, j + 1, kept)?;
                let estimate = beta * eig.component(eig.rows - 1, 0).abs();
                if estimate <= next_check || exhausted {
                    let full = if kept == 0 {
                        let (alpha, off) = tridiagonal(&t, m, j + 1);
                        linalg::tridiag_eigen(&alpha, &off)?
                    } else {
                        eig
                    };
                    let y = combine(&basis, &full, 0);
                    let (value, residual) = rayleigh_residual(op, &y, &mut w, iterations);
                    best_residual = best_residual.min(residual);
                    if residual <= cfg.tol {
                        return Ok((value, y, residual));
                    }
                    if exhausted {
                        return Err(Error::NotConverged {
                            restarts: restart,
                            best_residual,
                        });
                    }
                    // w was clobbered by the residual check; rebuild it
                    op.apply_into(&basis[j], &mut w);
                    *iterations += 1;
                    project_out(&mut w, locked);
                    orthogonalize(&mut w, &basis);
                    beta = norm(&w);
                    next_check = estimate * 0.1;
                }
            }
            if j + 1 == m {
                break;
            }
            let scale =
                1.0 + t[j * m + j].abs() + if j > 0 { t[(j - 1) * m + j].abs() } else { 0.0 };
            let next = if beta <= 1e-13 * scale {
                // invariant subspace: continue in a fresh random direction
                random_unit(rng, dim, locked, &basis)
            } else {
                t[j * m + j + 1] = beta;
                t[(j + 1) * m + j] = beta;
                w.iter().map(|x| x / beta).collect()
            };
            basis.push(next);
            j += 1;
        }

        if restart == cfg.max_restarts {
            break;
        }

        // thick restart: keep the lower half of the Ritz vectors and the
        // current residual direction
        let eig = ritz_full(&t, m, m)?;
        let keep = (m / 2).clamp(1, m - 1);
        rotate_basis(&mut basis, &eig, keep);
        let residual_dir = if beta > 0.0 {
            w.iter().map(|x| x / beta).collect()
        } else {
            random_unit(rng, dim, locked, &basis)
        };
        basis.push(residual_dir);
        t.iter_mut().for_each(|x| *x = 0.0);
        for i in 0..keep {
            t[i * m + i] = eig.values[i];
            let s = beta * eig.component(m - 1, i);
            t[i * m + keep] = s;
            t[keep * m + i] = s;
        }
        kept = keep;
    }

    Err(Error::NotConverged {
        restarts: cfg.max_restarts,
        best_residual,
    })
}

/// Eigen-decomposition of the leading `n x n` block of `t`, tracking only
/// the last row when the block is still tridiagonal.
fn ritz(t: &[f64], stride: usize, n: usize, kept: usize) -> Result<Eigen> {
    if kept == 0 {
        let (alpha, beta) = tridiagonal(t, stride, n);
        linalg::tridiag_eigen_last_row(&alpha, &beta)
    } else {
        ritz_full(t, stride, n)
    }
}

fn ritz_full(t: &[f64], stride: usize, n: usize) -> Result<Eigen> {
    let mut a = vec![0.0; n * n];
    for r in 0..n {
        a[r * n..(r + 1) * n].copy_from_slice(&t[r * stride..r * stride + n]);
    }
    linalg::symmetric_eigen(&a, n)
}

fn tridiagonal(t: &[f64], stride: usize, n: usize) -> (Vec<f64>, Vec<f64>) {
    let alpha = (0..n).map(|i| t[i * stride + i]).collect();
    let beta = (0..n.saturating_sub(1))
        .map(|i| t[i * stride + i + 1])
        .collect();
    (alpha, beta)
}

/// Ritz vector `k` as a combination of the basis.
fn combine(basis: &[Vec<f64>], eig: &Eigen, k: usize) -> Vec<f64> {
    let mut y = vec![0.0; basis[0].len()];
    for (l, v) in basis.iter().enumerate().take(eig.rows) {
        axpy(eig.component(l, k), v, &mut y);
    }
    let n = norm(&y);
    y.iter_mut().for_each(|x| *x /= n);
    y
}

/// Replaces the first `keep` basis vectors by Ritz vectors and drops the
/// rest, working row by row to avoid a second copy of the basis.
fn rotate_basis(basis: &mut Vec<Vec<f64>>, eig: &Eigen, keep: usize) {
    let m = eig.rows;
    let dim = basis[0].len();
    let mut row = vec![0.0; m];
    for r in 0..dim {
        for (l, v) in basis.iter().enumerate().take(m) {
            row[l] = v[r];
        }
        for (i, v) in basis.iter_mut().enumerate().take(keep) {
            let mut acc = 0.0;
            for (l, &x) in row.iter().enumerate() {
                acc += eig.component(l, i) * x;
            }
            v[r] = acc;
        }
    }
    basis.truncate(keep);
}

/// Rayleigh quotient of the unit vector `y` and `|H y - rho y|`; uses `w` as
/// scratch.
fn rayleigh_residual(
    op: &impl LinearOperator,
    y: &[f64],
    w: &mut [f64],
    iterations: &mut usize,
) -> (f64, f64) {
    op.apply_into(y, w);
    *iterations += 1;
    let rho = dot(y, w);
    let mut acc = 0.0;
    for (a, b) in w.iter().zip(y) {
        let d = a - rho * b;
        acc += d * d;
    }
    (rho, acc.sqrt())
}

fn random_unit(
    rng: &mut ChaCha8Rng,
    dim: usize,
    locked: &[Vec<f64>],
    basis: &[Vec<f64>],
) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() - 0.5).collect();
    project_out(&mut v, locked);
    orthogonalize(&mut v, basis);
    let n = norm(&v);
    v.iter_mut().for_each(|x| *x /= n);
    v
}

/// Removes the components along the (orthonormal) `vectors`, twice.
fn project_out(w: &mut [f64], vectors: &[Vec<f64>]) {
    for _ in 0..2 {
        let c = dots(vectors, w);
        subtract(vectors, &c, w);
    }
}

/// Classical Gram-Schmidt against `basis`, repeated when the first pass
/// shrank `w` below `1/sqrt(2)` of its norm. Returns the accumulated
/// projection coefficients.
fn orthogonalize(w: &mut [f64], basis: &[Vec<f64>]) -> Vec<f64> {
    const REPEAT_BELOW: f64 = core::f64::consts::FRAC_1_SQRT_2;
    let before = norm(w);
    let mut h = dots(basis, w);
    subtract(basis, &h, w);
    if norm(w) < REPEAT_BELOW * before {
        let c = dots(basis, w);
        subtract(basis, &c, w);
        h.iter_mut().zip(&c).for_each(|(a, b)| *a += b);
    }
    h
}

/// Rows per block when sweeping many vectors against one, sized so the
/// block of `w` stays in L1.
const BLOCK: usize = 1024;

/// `<v, w>` for every `v` in `vectors`, reading each vector once.
fn dots(vectors: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
    let mut c = vec![0.0; vectors.len()];
    for start in (0..w.len()).step_by(BLOCK) {
        let end = (start + BLOCK).min(w.len());
        let wb = &w[start..end];
        for (ck, v) in c.iter_mut().zip(vectors) {
            *ck += dot(&v[start..end], wb);
        }
    }
    c
}

/// `w -= sum c_k v_k`, block by block.
fn subtract(vectors: &[Vec<f64>], c: &[f64], w: &mut [f64]) {
    for start in (0..w.len()).step_by(BLOCK) {
        let end = (start + BLOCK).min(w.len());
        let wb = &mut w[start..end];
        for (v, &ck) in vectors.iter().zip(c) {
            axpy(-ck, &v[start..end], wb);
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let tail: f64 = ca
        .remainder()
        .iter()
        .zip(cb.remainder())
        .map(|(x, y)| x * y)
        .sum();
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}
