//! Ground energies cached in memory and, optionally, on disk.
//!
//! Each canonical lattice key gets its own file holding one JSON record.
//! Writes go through a temporary file and a rename, so concurrent runs
//! sharing a directory never see half-written records. A record whose
//! checksum does not match, or whose residual exceeds the requested
//! tolerance, is ignored and the energy recomputed.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use schupp_core::basis::binomial;
use schupp_core::eigensolver::min_abs_sz_up;
use schupp_core::schupp::SolvedEnergy;
use schupp_core::{
    ground_energy, EnergySource, Error, LanczosConfig, LatticeSpec, Result, SectorPolicy,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Environment variable naming the default cache directory.
pub const CACHE_ENV: &str = "SCHUPP_CACHE";

/// Vectors the solver needs at minimum besides the Krylov basis: work
/// vector, Ritz vector, locked vectors and a few restart temporaries.
const MIN_VECTORS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solved {
    pub key: String,
    pub tol: f64,
    pub energies: Vec<f64>,
    pub residuals: Vec<f64>,
    /// `(n_sites, n_up)` of the sector holding the ground state.
    pub sector: (usize, usize),
    pub degenerate: bool,
}

impl Solved {
    pub fn energy(&self) -> f64 {
        self.energies[0]
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    fn checksum(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.key.as_bytes());
        h.update(self.tol.to_bits().to_le_bytes());
        for x in self.energies.iter().chain(&self.residuals) {
            h.update(x.to_bits().to_le_bytes());
        }
        h.update((self.sector.0 as u64).to_le_bytes());
        h.update((self.sector.1 as u64).to_le_bytes());
        h.update([self.degenerate as u8]);
        hex::encode(h.finalize())
    }
}

#[derive(Serialize, Deserialize)]
struct Record {
    #[serde(flatten)]
    solved: Solved,
    checksum: String,
}

#[derive(Debug, Clone)]
pub struct DiskCache {
    dir: PathBuf,
}

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl DiskCache {
    pub fn open(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        let digest = Sha256::digest(key.as_bytes());
        self.dir
            .join(format!("{}.json", hex::encode(&digest[..16])))
    }

    /// A valid record for `key` whose residuals all meet `tol`.
    pub fn get(&self, key: &str, tol: f64) -> Option<Solved> {
        let text = fs::read_to_string(self.path_for(key)).ok()?;
        let record: Record = serde_json::from_str(text.trim_end()).ok()?;
        let s = record.solved;
        let ok = s.key == key
            && record.checksum == s.checksum()
            && !s.energies.is_empty()
            && s.energies.len() == s.residuals.len()
            && s.max_residual() <= tol;
        ok.then_some(s)
    }

    pub fn put(&self, solved: &Solved) -> std::io::Result<()> {
        let record = Record {
            solved: solved.clone(),
            checksum: solved.checksum(),
        };
        let mut line = serde_json::to_string(&record).map_err(std::io::Error::other)?;
        line.push('\n');
        let target = self.path_for(&solved.key);
        let tmp = self.dir.join(format!(
            ".{}.{}.{}.tmp",
            target
                .file_name()
                .and_then(|n| n.to_str())
                .unwrap_or("record"),
            std::process::id(),
            TEMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(line.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, &target)
    }
}

/// Bytes the solver needs at minimum for the ground state of `spec`.
pub fn memory_estimate(spec: &LatticeSpec) -> u128 {
    let n = spec.n_sites();
    let dim = binomial(n, min_abs_sz_up(n)) as u128;
    // configurations are stored as u32 next to the f64 vectors
    dim * (8 * MIN_VECTORS as u128 + 4)
}

/// Energy source with a memory guard, an in-memory cache and an optional
/// disk cache.
#[derive(Debug)]
pub struct CachedSolver {
    cfg: LanczosConfig,
    policy: SectorPolicy,
    max_mem: u64,
    disk: Option<DiskCache>,
    memory: BTreeMap<String, Solved>,
    solves: usize,
}

impl CachedSolver {
    /// The Krylov basis may use a quarter of `max_mem`.
    pub fn new(
        mut cfg: LanczosConfig,
        policy: SectorPolicy,
        max_mem: u64,
        disk: Option<DiskCache>,
    ) -> Self {
        cfg.memory_budget = usize::try_from(max_mem / 4).unwrap_or(usize::MAX);
        Self {
            cfg,
            policy,
            max_mem,
            disk,
            memory: BTreeMap::new(),
            solves: 0,
        }
    }

    pub fn config(&self) -> &LanczosConfig {
        &self.cfg
    }

    /// Eigensolves performed, not counting cache hits.
    pub fn solves(&self) -> usize {
        self.solves
    }

    /// Refuses specs whose sector would not fit in the memory limit.
    pub fn guard(&self, spec: &LatticeSpec) -> Result<()> {
        let n_sites = spec.n_sites();
        if n_sites > schupp_core::basis::MAX_SITES {
            return Err(Error::TooManySites { n_sites });
        }
        let needed = memory_estimate(spec);
        if needed > self.max_mem as u128 {
            return Err(Error::MemoryLimit {
                needed,
                limit: self.max_mem as u128,
            });
        }
        Ok(())
    }

    pub fn ground_state(&mut self, spec: &LatticeSpec) -> Result<Solved> {
        spec.validate()?;
        let key = spec.canonical_key();
        if let Some(hit) = self.memory.get(&key) {
            return Ok(hit.clone());
        }
        if let Some(hit) = self.disk.as_ref().and_then(|d| d.get(&key, self.cfg.tol)) {
            self.memory.insert(key, hit.clone());
            return Ok(hit);
        }
        self.guard(spec)?;
        let gs = ground_energy(spec, &self.cfg, self.policy)?;
        self.solves += 1;
        let solved = Solved {
            key: key.clone(),
            tol: self.cfg.tol,
            energies: gs.energies,
            residuals: gs.residuals,
            sector: gs.sector,
            degenerate: gs.degenerate,
        };
        if let Some(disk) = &self.disk {
            if let Err(e) = disk.put(&solved) {
                eprintln!(
                    "warning: cannot write cache entry in {}: {e}",
                    disk.dir().display()
                );
            }
        }
        self.memory.insert(key, solved.clone());
        Ok(solved)
    }
}

impl EnergySource for CachedSolver {
    fn energy(&mut self, spec: &LatticeSpec) -> Result<SolvedEnergy> {
        let s = self.ground_state(spec)?;
        Ok(SolvedEnergy {
            energy: s.energy(),
            residual: s.residuals[0],
        })
    }

    fn tolerance(&self) -> f64 {
        self.cfg.tol
    }
}
