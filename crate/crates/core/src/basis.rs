//! Fixed-magnetization basis of spin-1/2 configurations.
//!
//! A configuration is a `u32` bit pattern, bit `i` set when site `i` is up.
//! Configurations with exactly `n_up` bits set are ordered by integer value,
//! and the rank of a configuration is its position in that order, given by
//! the combinatorial number system: for set bits at positions
//! `p_1 < p_2 < ... < p_k`, `rank = sum_t C(p_t, t)`.
//!
//! Ranking is table driven. The low half of the bits is looked up directly;
//! the high half uses a second table indexed by how many bits the low half
//! already holds, so a rank costs two loads and an add. Splitting in the
//! middle keeps both tables small enough to stay in cache.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub const MAX_SITES: usize = 32;

/// `C(n, k)` for `n, k <= 32`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for t in 0..k {
        // exact at every step: acc * (n - t) is divisible by (t + 1)
        acc = acc * (n - t) as u64 / (t as u64 + 1);
    }
    acc
}

#[derive(Debug, Clone)]
pub struct SectorBasis {
    n_sites: usize,
    n_up: usize,
    configs: Vec<u32>,
    lo: Vec<u32>,
    hi: Vec<u32>,
    lo_bits: u32,
    hi_len: usize,
}

impl SectorBasis {
    /// Enumerates all configurations of `n_sites` spins with `n_up` up spins.
    pub fn enumerate(n_sites: usize, n_up: usize) -> Result<Self> {
        if n_sites > MAX_SITES {
            return Err(Error::TooManySites { n_sites });
        }
        if n_up > n_sites {
            return Err(Error::Contract(alloc::format!(
                "n_up = {n_up} exceeds n_sites = {n_sites}"
            )));
        }

        // ranks stay below C(32, 16) < 2^32
        let lo_bits = n_sites.div_ceil(2);
        let lo: Vec<u32> = (0..1u64 << lo_bits)
            .map(|c| partial_rank(c, 0, 0) as u32)
            .collect();

        let hi_bits = n_sites - lo_bits;
        let hi_len = 1usize << hi_bits;
        let mut hi = Vec::new();
        if hi_bits > 0 {
            hi = vec![0u32; (lo_bits + 1) * hi_len];
            for below in 0..=lo_bits {
                for h in 0..hi_len {
                    hi[below * hi_len + h] = partial_rank(h as u64, lo_bits, below) as u32;
                }
            }
        }

        let dim = binomial(n_sites, n_up) as usize;
        let mut configs = Vec::with_capacity(dim);
        if dim > 0 {
            // Gosper's hack walks same-popcount words in increasing order.
            let mut c: u64 = (1u64 << n_up) - 1;
            let limit = 1u64 << n_sites;
            while c < limit {
                configs.push(c as u32);
                if c == 0 {
                    break;
                }
                let low = c & c.wrapping_neg();
                let ripple = c + low;
                c = (((ripple ^ c) >> 2) / low) | ripple;
            }
        }
        debug_assert_eq!(configs.len(), dim);

        Ok(Self {
            n_sites,
            n_up,
            configs,
            lo,
            hi,
            lo_bits: lo_bits as u32,
            hi_len,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_up(&self) -> usize {
        self.n_up
    }

    pub fn dim(&self) -> usize {
        self.configs.len()
    }

    /// Configurations in rank order.
    pub fn configs(&self) -> &[u32] {
        &self.configs
    }

    /// Rank of `config`, checking that it belongs to this sector.
    pub fn rank(&self, config: u32) -> Result<usize> {
        let in_range = self.n_sites == 32 || (config as u64) < (1u64 << self.n_sites);
        if !in_range || config.count_ones() as usize != self.n_up {
            return Err(Error::Contract(alloc::format!(
                "configuration {config:#b} is not in the ({}, {}) sector",
                self.n_sites,
                self.n_up
            )));
        }
        Ok(self.index_of(config))
    }

    /// Configuration at `index`.
    pub fn unrank(&self, index: usize) -> Result<u32> {
        self.configs.get(index).copied().ok_or_else(|| {
            Error::Contract(alloc::format!(
                "index {index} out of range for dimension {}",
                self.dim()
            ))
        })
    }

    /// Unchecked rank for the Hamiltonian inner loop. `config` must lie in
    /// the sector.
    #[inline(always)]
    pub(crate) fn index_of(&self, config: u32) -> usize {
        let low = config & ((1u32 << self.lo_bits) - 1);
        if self.hi.is_empty() {
            return self.lo[low as usize] as usize;
        }
        let below = low.count_ones() as usize;
        let high = (config >> self.lo_bits) as usize;
        (self.lo[low as usize] + self.hi[below * self.hi_len + high]) as usize
    }
}

/// Combinatorial-number-system contribution of the set bits of `bits`,
/// which sit at absolute positions `offset + p`, given that `below` set bits
/// precede them.
fn partial_rank(bits: u64, offset: usize, below: usize) -> u64 {
    let mut acc = 0;
    let mut t = below;
    let mut b = bits;
    while b != 0 {
        let p = b.trailing_zeros() as usize;
        t += 1;
        acc += binomial(offset + p, t);
        b &= b - 1;
    }
    acc
}
