//! Exact diagonalization of open spin-1/2 antiferromagnetic Heisenberg
//! lattices and the Lieb-Schupp ground-state energy gap.
//!
//! The crate is `no_std` (it needs `alloc`). The `parallel` feature pulls in
//! `std` and rayon so that the Hamiltonian is applied data-parallel over
//! output rows; results are bit-identical with and without it.
//!
//! Pipeline: a [`LatticeSpec`] is expanded into a [`BondList`], the bond
//! list and a fixed-magnetization [`SectorBasis`] form a matrix-free
//! [`HamiltonianOperator`], and [`lowest_eigs`] runs thick-restart Lanczos on
//! it. [`schupp`] combines three such solves into a [`DeltaRecord`];
//! [`analysis`] fits how the gap decays with system length.

#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod analysis;
pub mod basis;
pub mod eigensolver;
mod error;
pub mod hamiltonian;
pub mod lattice;
pub mod linalg;
pub mod observables;
pub mod schupp;

pub use analysis::{DecayClass, DecayKind, FitModel, FitResult};
pub use basis::SectorBasis;
pub use eigensolver::{
    ground_energy, lowest_eigs, GroundStateResult, LanczosConfig, LinearOperator, SectorPolicy,
};
pub use error::{Error, Result};
pub use hamiltonian::HamiltonianOperator;
pub use lattice::{
    Applicability, Bond, BondList, Crossing, CutSpec, Family, InterfaceMatrix, LatticeSpec, Side,
};
pub use observables::CorrelationSeries;
pub use schupp::{DeltaRecord, EnergySource, Solver};
