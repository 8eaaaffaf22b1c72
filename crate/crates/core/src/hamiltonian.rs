//! Matrix-free Heisenberg Hamiltonian on a fixed-magnetization sector.
//!
//! For a bond `(i, j, w)` acting on a configuration, aligned spins give
//! `+w/4` on the diagonal, anti-aligned spins give `-w/4` plus an exchange
//! term `w/2` to the configuration with the two spins swapped. The operator
//! is applied row by row: output entry `r` gathers from its exchange
//! partners in bond order, so a row's accumulation order never depends on
//! how rows are distributed across threads.

use alloc::vec;
use alloc::vec::Vec;

use crate::basis::SectorBasis;
use crate::eigensolver::LinearOperator;
use crate::error::{Error, Result};
use crate::lattice::BondList;

#[derive(Debug, Clone, Copy)]
struct Exchange {
    mask: u32,
    half_w: f64,
}

#[derive(Debug, Clone)]
pub struct HamiltonianOperator {
    bonds: BondList,
    basis: SectorBasis,
    exchanges: Vec<Exchange>,
    /// Diagonal value of the fully aligned configuration, `sum w / 4`.
    aligned_diag: f64,
}

impl HamiltonianOperator {
    pub fn new(bonds: BondList, basis: SectorBasis) -> Result<Self> {
        if bonds.n_sites() != basis.n_sites() {
            return Err(Error::DimensionMismatch {
                expected: basis.n_sites(),
                got: bonds.n_sites(),
            });
        }
        let exchanges = bonds
            .bonds()
            .iter()
            .map(|b| Exchange {
                mask: (1u32 << b.i) | (1u32 << b.j),
                half_w: 0.5 * b.w,
            })
            .collect();
        let aligned_diag = 0.25 * bonds.total_weight();
        Ok(Self {
            bonds,
            basis,
            exchanges,
            aligned_diag,
        })
    }

    pub fn bonds(&self) -> &BondList {
        &self.bonds
    }

    pub fn basis(&self) -> &SectorBasis {
        &self.basis
    }

    /// `y = H x`.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let dim = self.basis.dim();
        if x.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: x.len(),
            });
        }
        let mut y = vec![0.0; dim];
        self.apply_into(x, &mut y);
        Ok(y)
    }

    /// Diagonal of `H` in rank order.
    pub fn diagonal(&self) -> Vec<f64> {
        self.basis
            .configs()
            .iter()
            .map(|&c| {
                let mut d = self.aligned_diag;
                for ex in &self.exchanges {
                    if is_anti(c, ex.mask) {
                        d -= ex.half_w;
                    }
                }
                d
            })
            .collect()
    }

    #[inline(always)]
    fn row(&self, c: u32, x: &[f64], xr: f64) -> f64 {
        let mut diag = self.aligned_diag;
        let mut off = 0.0;
        for ex in &self.exchanges {
            if is_anti(c, ex.mask) {
                diag -= ex.half_w;
                off += ex.half_w * x[self.basis.index_of(c ^ ex.mask)];
            }
        }
        diag * xr + off
    }
}

#[inline(always)]
fn is_anti(c: u32, mask: u32) -> bool {
    let m = c & mask;
    m != 0 && m != mask
}

impl LinearOperator for HamiltonianOperator {
    fn dim(&self) -> usize {
        self.basis.dim()
    }

    #[cfg(not(feature = "parallel"))]
    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        for ((out, &c), &xr) in y.iter_mut().zip(self.basis.configs()).zip(x) {
            *out = self.row(c, x, xr);
        }
    }

    #[cfg(feature = "parallel")]
    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        use rayon::prelude::*;
        const CHUNK: usize = 4096;
        let configs = self.basis.configs();
        y.par_chunks_mut(CHUNK).enumerate().for_each(|(ci, ys)| {
            let start = ci * CHUNK;
            for (k, out) in ys.iter_mut().enumerate() {
                let r = start + k;
                *out = self.row(configs[r], x, x[r]);
            }
        });
    }
}
