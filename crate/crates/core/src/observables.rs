//! Two-point spin correlations `<S_i.S_j>` in a ground state.

use alloc::vec::Vec;

use crate::basis::SectorBasis;
use crate::eigensolver::{ground_energy, GroundStateResult, LanczosConfig, SectorPolicy};
use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;

/// `<S_anchor.S_j>` for every site `j` of one ground state.
#[derive(Debug, Clone)]
pub struct CorrelationSeries {
    pub spec: LatticeSpec,
    pub anchor: usize,
    pub values: Vec<(usize, f64)>,
    pub ground_energy: f64,
}

impl CorrelationSeries {
    pub fn get(&self, site: usize) -> Option<f64> {
        self.values
            .iter()
            .find(|(j, _)| *j == site)
            .map(|(_, v)| *v)
    }
}

/// `<v| S^z_i S^z_j + (S^+_i S^-_j + S^-_i S^+_j)/2 |v>` for a normalized
/// vector `v` of `basis`.
pub fn correlation_of(v: &[f64], basis: &SectorBasis, i: usize, j: usize) -> Result<f64> {
    if v.len() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            got: v.len(),
        });
    }
    let n = basis.n_sites();
    if i >= n || j >= n {
        return Err(Error::Contract(alloc::format!(
            "site out of range for {n} sites"
        )));
    }
    if i == j {
        return Ok(0.75);
    }
    let mask = (1u32 << i) | (1u32 << j);
    let mut zz = 0.0;
    let mut flip = 0.0;
    for (&c, &amp) in basis.configs().iter().zip(v) {
        let m = c & mask;
        if m == 0 || m == mask {
            zz += amp * amp;
        } else {
            zz -= amp * amp;
            flip += amp * v[basis.index_of(c ^ mask)];
        }
    }
    Ok(0.25 * zz + 0.5 * flip)
}

/// Correlation in a solved ground state. Refuses degenerate ground states,
/// where the value depends on which state of the multiplet was returned.
pub fn correlation(gs: &GroundStateResult, basis: &SectorBasis, i: usize, j: usize) -> Result<f64> {
    check_usable(gs)?;
    let v = gs.vector.as_deref().ok_or(Error::MissingVector)?;
    correlation_of(v, basis, i, j)
}

fn check_usable(gs: &GroundStateResult) -> Result<()> {
    if gs.degenerate {
        return Err(Error::DegenerateGroundState {
            gap: gs.energies[1] - gs.energies[0],
        });
    }
    Ok(())
}

/// Correlations of `anchor` with every site of the lattice.
pub fn profile(
    spec: &LatticeSpec,
    anchor: usize,
    cfg: &LanczosConfig,
) -> Result<CorrelationSeries> {
    let gs = ground_energy(spec, cfg, SectorPolicy::MinAbsSz)?;
    check_usable(&gs)?;
    let basis = SectorBasis::enumerate(gs.sector.0, gs.sector.1)?;
    let v = gs.vector.as_deref().ok_or(Error::MissingVector)?;
    let values = (0..spec.n_sites())
        .map(|j| correlation_of(v, &basis, anchor, j).map(|c| (j, c)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrelationSeries {
        spec: *spec,
        anchor,
        values,
        ground_energy: gs.energy(),
    })
}
