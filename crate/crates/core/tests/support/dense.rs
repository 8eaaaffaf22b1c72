//! Dense reference Hamiltonians assembled from the lattice geometry alone,
//! sharing no code with the library beyond `LatticeSpec`.
#![allow(dead_code)]

use std::collections::HashMap;

use nalgebra::{DMatrix, SymmetricEigen};
use schupp_core::{Crossing, LatticeSpec};

/// Bonds from the geometry alone: legs along x, rungs along y, and both
/// diagonals on crossed plaquettes.
pub fn oracle_bonds(spec: &LatticeSpec) -> Vec<(usize, usize, f64)> {
    let (nx, ny) = (spec.nx, spec.ny);
    let id = |x: usize, y: usize| x * ny + y;
    let mut out = Vec::new();
    for x in 0..nx {
        for y in 0..ny {
            if x + 1 < nx {
                out.push((id(x, y), id(x + 1, y), spec.j));
            }
            if y + 1 < ny {
                out.push((id(x, y), id(x, y + 1), spec.j));
            }
        }
    }
    for x in 0..nx.saturating_sub(1) {
        for y in 0..ny.saturating_sub(1) {
            let crossed = match spec.family.key() {
                "x-ladder" => true,
                "pyro-a" => x % 2 == 0,
                "pyro-b" => x % 2 == 1,
                "rect" => match spec.crossing {
                    Crossing::All => true,
                    Crossing::CheckerA => (x + y) % 2 == 0,
                    Crossing::CheckerB => (x + y) % 2 == 1,
                    Crossing::None => false,
                },
                _ => false,
            };
            if crossed {
                out.push((id(x, y), id(x + 1, y + 1), spec.jd));
                out.push((id(x + 1, y), id(x, y + 1), spec.jd));
            }
        }
    }
    out
}

pub struct Dense {
    pub configs: Vec<u32>,
    pub index: HashMap<u32, usize>,
    pub h: DMatrix<f64>,
}

pub fn dense(spec: &LatticeSpec, n_up: u32) -> Dense {
    let n = spec.n_sites();
    let configs: Vec<u32> = (0u32..1 << n).filter(|c| c.count_ones() == n_up).collect();
    let index: HashMap<u32, usize> = configs.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let dim = configs.len();
    let bonds = oracle_bonds(spec);
    let mut h = DMatrix::zeros(dim, dim);
    for (col, &c) in configs.iter().enumerate() {
        for &(i, j, w) in &bonds {
            let (si, sj) = ((c >> i) & 1, (c >> j) & 1);
            if si == sj {
                h[(col, col)] += 0.25 * w;
            } else {
                h[(col, col)] -= 0.25 * w;
                let flipped = c ^ (1 << i) ^ (1 << j);
                h[(index[&flipped], col)] += 0.5 * w;
            }
        }
    }
    Dense { configs, index, h }
}

pub fn specs_up_to_12() -> Vec<LatticeSpec> {
    let mut out = Vec::new();
    for n in 2..=12 {
        out.push(LatticeSpec::chain(n));
    }
    for len in 2..=6 {
        out.push(LatticeSpec::square_ladder(len));
        out.push(LatticeSpec::crossed_ladder(len));
        out.push(LatticeSpec::pyro_a(len));
        out.push(LatticeSpec::pyro_b(len));
    }
    for (nx, ny) in [(3, 3), (4, 3), (3, 4)] {
        for c in Crossing::ALL {
            out.push(LatticeSpec::rectangle(nx, ny, c));
        }
    }
    // off-default couplings exercise weights other than 1 and 1/2
    out.push(LatticeSpec::crossed_ladder(5).with_couplings(0.7, 0.3));
    out.push(LatticeSpec::chain(9).with_couplings(1.3, 0.0));
    out
}

/// Lowest eigenvalue over every magnetization sector.
pub fn dense_ground_energy(spec: &LatticeSpec) -> f64 {
    (0..=spec.n_sites())
        .map(|n_up| {
            SymmetricEigen::new(dense(spec, n_up as u32).h)
                .eigenvalues
                .min()
        })
        .fold(f64::INFINITY, f64::min)
}
