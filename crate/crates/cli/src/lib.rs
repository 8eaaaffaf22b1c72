//! Command-line front end: cached energies, gaps, sweeps, profiles, fits
//! and verification against published tables.

pub mod cache;
pub mod commands;
pub mod output;
pub mod reference;
