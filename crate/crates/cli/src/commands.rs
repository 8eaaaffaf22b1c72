//! Subcommand definitions and their implementations.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use schupp_core::analysis::{self, FitModel, FitResult, DEFAULT_NOISE_FLOOR};
use schupp_core::lattice::{check_applicability, cut};
use schupp_core::observables::profile;
use schupp_core::schupp::{counterexample_check, delta, sweep};
use schupp_core::{Crossing, CutSpec, Error, Family, LanczosConfig, LatticeSpec, SectorPolicy};
use serde::Serialize;

use crate::cache::{CachedSolver, DiskCache, Solved, CACHE_ENV};
use crate::output::{from_csv, sig15, status_of, to_csv, CorrelationRow, DeltaRow, FitReport};
use crate::reference;

/// Exact diagonalization of open Heisenberg lattices and Lieb-Schupp
/// energy gaps.
#[derive(Debug, Parser)]
#[command(name = "schupp", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ground state of one lattice.
    Energy(LatticeArgs),
    /// Gap for one division of a lattice.
    Delta {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        cut: CutArgs,
    },
    /// Gaps over a range of lengths and cut offsets.
    Sweep(SweepArgs),
    /// Spin correlations of one site with every other site.
    Profile {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Anchor site index, `x * ny + y`.
        #[arg(long, default_value_t = 0)]
        anchor: usize,
    },
    /// Decay-law fits of sweep output, or decay classification of a profile.
    Fit(FitArgs),
    /// Whether a cut's interface admits the inequality.
    Check {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        cut: CutArgs,
    },
    /// Recompute the embedded reference energies.
    Verify {
        /// Largest lattice, in sites, to recompute.
        #[arg(long, default_value_t = 16)]
        max_sites: usize,
    },
    /// The odd-split chain inequality that does not hold.
    Counterexample,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    /// Rows; implied by the family except for rectangles.
    #[arg(long)]
    pub ny: Option<usize>,
    #[arg(long, value_parser = parse_crossing, default_value = "none")]
    pub crossing: Crossing,
    #[arg(long)]
    pub j: Option<f64>,
    #[arg(long)]
    pub jd: Option<f64>,
}

impl FamilyArgs {
    pub fn spec(&self, nx: usize) -> Result<LatticeSpec, CliError> {
        let ny = match (self.family, self.ny) {
            (Family::Chain, ny) => ny.unwrap_or(1),
            (Family::Rectangle, Some(ny)) => ny,
            (Family::Rectangle, None) => {
                return Err(CliError::Usage("--ny is required for rect".into()))
            }
            (_, ny) => ny.unwrap_or(2),
        };
        let mut spec = LatticeSpec::of_family(self.family, nx, ny, self.crossing);
        spec.ny = ny;
        if self.j.is_some() || self.jd.is_some() {
            let j = self.j.unwrap_or(spec.j);
            let jd = self.jd.unwrap_or(spec.jd);
            spec = spec.with_couplings(j, jd);
            // explicit values win, so that an inconsistent request is
            // reported instead of silently corrected
            spec.jd = self.jd.unwrap_or(spec.jd);
        }
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Args)]
pub struct LatticeArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Columns.
    #[arg(long)]
    pub nx: usize,
}

impl LatticeArgs {
    pub fn spec(&self) -> Result<LatticeSpec, CliError> {
        self.family.spec(self.nx)
    }
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct CutArgs {
    /// `m - n`, twice the offset of the cut from the middle.
    #[arg(long, allow_hyphen_values = true)]
    pub d2: Option<i64>,
    /// Columns left of the cut.
    #[arg(long)]
    pub cut: Option<usize>,
}

impl CutArgs {
    pub fn resolve(&self, nx: usize) -> Result<CutSpec, CliError> {
        match (self.d2, self.cut) {
            (Some(d2), _) => Ok(CutSpec::from_offset(nx, d2)?),
            (None, Some(m)) if m < nx => Ok(CutSpec::new(m, nx - m)?),
            (None, Some(m)) => Err(CliError::Usage(format!(
                "--cut {m} leaves no right part of {nx} columns"
            ))),
            (None, None) => Err(CliError::Usage("give --d2 or --cut".into())),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Lengths, e.g. `6-16` or `5,7,9`.
    #[arg(long, value_parser = parse_list)]
    pub lengths: List,
    /// Offsets `m - n`, e.g. `2,4,6`.
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    pub d2: List,
    /// Skip divisions whose largest lattice exceeds this many sites.
    #[arg(long)]
    pub max_sites: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Power,
    Exp,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitMode {
    /// One fit per offset.
    PerD,
    /// All points in one regression.
    Pooled,
    /// One exponent, one amplitude per offset.
    Shared,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    /// CSV written by `sweep`, `delta` or `profile`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = ModelArg::Both)]
    pub model: ModelArg,
    #[arg(long, value_enum, default_value_t = FitMode::PerD)]
    pub mode: FitMode,
    #[arg(long, default_value_t = DEFAULT_NOISE_FLOOR)]
    pub noise_floor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SectorArg {
    Min,
    Scan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long, global = true, value_enum, default_value_t = SectorArg::Min)]
    pub sector: SectorArg,
    /// Residual tolerance for every eigenpair.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = LanczosConfig::default().seed)]
    pub seed: u64,
    #[arg(long, global = true, env = CACHE_ENV)]
    pub cache_dir: Option<PathBuf>,
    /// Memory limit, e.g. `8G`, `512M` or plain bytes.
    #[arg(long, global = true, value_parser = parse_bytes, default_value = "8G")]
    pub max_mem: u64,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub out: Option<OutFormat>,
}

impl SolverArgs {
    pub fn solver(&self) -> Result<CachedSolver, CliError> {
        let cfg = LanczosConfig {
            tol: self.tol,
            seed: self.seed,
            ..LanczosConfig::default()
        };
        cfg.validate()?;
        let policy = match self.sector {
            SectorArg::Min => SectorPolicy::MinAbsSz,
            SectorArg::Scan => SectorPolicy::ScanAll,
        };
        let disk = match &self.cache_dir {
            Some(dir) => Some(DiskCache::open(dir).map_err(|e| {
                CliError::Usage(format!("cannot use cache directory {}: {e}", dir.display()))
            })?),
            None => None,
        };
        Ok(CachedSolver::new(cfg, policy, self.max_mem, disk))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0} reference entries disagree")]
    Mismatch(usize),
    #[error("output failed: {0}")]
    Output(#[from] anyhow::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.into())
    }
}

impl CliError {
    /// 2 for bad input, 3 for failed computations, 4 for the memory guard,
    /// 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                Error::InvalidSpec(_)
                | Error::InvalidCut(_)
                | Error::NotApplicable { .. }
                | Error::Contract(_) => 2,
                Error::TooManySites { .. } | Error::MemoryLimit { .. } => 4,
                _ => 3,
            },
            CliError::Mismatch(_) | CliError::Output(_) => 1,
        }
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|_| {
        let keys: Vec<&str> = Family::ALL.iter().map(|f| f.key()).collect();
        format!("expected one of {}", keys.join(", "))
    })
}

fn parse_crossing(s: &str) -> Result<Crossing, String> {
    s.parse().map_err(|_| {
        let keys: Vec<&str> = Crossing::ALL.iter().map(|c| c.key()).collect();
        format!("expected one of {}", keys.join(", "))
    })
}

pub type List = Vec<i64>;

/// Comma-separated integers and inclusive ranges `a-b`.
pub fn parse_list(s: &str) -> Result<List, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || format!("bad list item {part:?}");
        // a leading minus belongs to the number, not a range
        match part[1..].find('-').map(|i| i + 1) {
            Some(i) => {
                let a: i64 = part[..i].parse().map_err(|_| bad())?;
                let b: i64 = part[i + 1..].parse().map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}

pub fn parse_bytes(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let (digits, shift) = match s.chars().last() {
        Some('K' | 'k') => (&s[..s.len() - 1], 10),
        Some('M' | 'm') => (&s[..s.len() - 1], 20),
        Some('G' | 'g') => (&s[..s.len() - 1], 30),
        Some('T' | 't') => (&s[..s.len() - 1], 40),
        _ => (s, 0),
    };
    let n: u64 = digits.parse().map_err(|_| format!("bad size {s:?}"))?;
    n.checked_shl(shift)
        .filter(|v| v >> shift == n)
        .ok_or_else(|| format!("size {s:?} overflows"))
}

#[derive(Debug, Serialize)]
struct EnergyJson<'a> {
    key: &'a str,
    family: &'a str,
    nx: usize,
    ny: usize,
    variant: &'a str,
    j: f64,
    jd: f64,
    energies: Vec<f64>,
    residuals: Vec<f64>,
    n_sites: usize,
    n_up: usize,
    degenerate: bool,
}

#[derive(Debug, Serialize)]
struct EnergyCsv<'a> {
    key: &'a str,
    family: &'a str,
    nx: usize,
    ny: usize,
    variant: &'a str,
    j: f64,
    jd: f64,
    energy: f64,
    next_energy: Option<f64>,
    max_residual: f64,
    n_up: usize,
    degenerate: bool,
}

#[derive(Debug, Serialize)]
struct CheckJson {
    verdict: &'static str,
    symmetric: bool,
    eigenvalues: Vec<f64>,
    left_boundary: Vec<usize>,
    right_boundary: Vec<usize>,
    k: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct VerifyRow {
    pub label: String,
    pub n_sites: usize,
    pub reference: f64,
    pub computed: Option<f64>,
    pub diff: Option<f64>,
    pub status: String,
}

#[derive(Debug, Serialize)]
struct CounterexampleJson {
    e5: f64,
    e6: f64,
    e7: f64,
    two_e6: f64,
    e5_plus_e7: f64,
    naive_gap: f64,
    naive_violated: bool,
    even_split: DeltaRow,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayJson {
    pub class: &'static str,
    pub power_r2: Option<f64>,
    pub exp_r2: Option<f64>,
    pub n_points: usize,
}

/// Absolute tolerance for reference comparisons.
pub const VERIFY_TOL: f64 = 1e-10;

fn json_line(out: &mut dyn Write, value: &impl Serialize) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(anyhow::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn emit<T: Serialize>(out: &mut dyn Write, format: OutFormat, rows: &[T]) -> Result<(), CliError> {
    match format {
        OutFormat::Csv => out.write_all(to_csv(rows)?.as_bytes())?,
        OutFormat::Json => json_line(out, &rows)?,
    }
    Ok(())
}

/// Runs one command, writing its report to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let format = |default| cli.solver.out.unwrap_or(default);
    match &cli.command {
        Command::Energy(lattice) => {
            let spec = lattice.spec()?;
            let mut solver = cli.solver.solver()?;
            let s = solver.ground_state(&spec)?;
            energy_report(out, &spec, &s, format(OutFormat::Json))
        }
        Command::Delta { lattice, cut } => {
            let spec = lattice.spec()?;
            let division = cut.resolve(spec.nx)?;
            let mut solver = cli.solver.solver()?;
            let rec = delta(&mut solver, &spec, &division)?;
            emit(
                out,
                format(OutFormat::Csv),
                &[DeltaRow::from_outcome(&spec, division.d2(), &Ok(rec))],
            )
        }
        Command::Sweep(args) => {
            let template = args.family.spec(2)?;
            let mut lengths = Vec::new();
            for &l in &args.lengths {
                let l = usize::try_from(l)
                    .map_err(|_| CliError::Usage(format!("negative length {l}")))?;
                // reject malformed families up front rather than per row
                args.family.spec(l)?;
                lengths.push(l);
            }
            let mut solver = cli.solver.solver()?;
            let rows = sweep_rows(&mut solver, &template, &lengths, &args.d2, args.max_sites);
            emit(out, format(OutFormat::Csv), &rows)
        }
        Command::Profile { lattice, anchor } => {
            let spec = lattice.spec()?;
            if *anchor >= spec.n_sites() {
                return Err(CliError::Usage(format!(
                    "anchor {anchor} outside {} sites",
                    spec.n_sites()
                )));
            }
            let solver = cli.solver.solver()?;
            solver.guard(&spec)?;
            let series = profile(&spec, *anchor, solver.config())?;
            let rows: Vec<CorrelationRow> = series
                .values
                .iter()
                .map(|&(site, c)| {
                    let (x, y) = spec.coords(site);
                    CorrelationRow {
                        family: spec.family.key().into(),
                        nx: spec.nx,
                        ny: spec.ny,
                        variant: spec.crossing.key().into(),
                        anchor: *anchor,
                        site,
                        x,
                        y,
                        correlation: sig15(c),
                    }
                })
                .collect();
            emit(out, format(OutFormat::Csv), &rows)
        }
        Command::Fit(args) => {
            let text = std::fs::read_to_string(&args.input).map_err(|e| {
                CliError::Usage(format!("cannot read {}: {e}", args.input.display()))
            })?;
            let header = text.lines().next().unwrap_or_default();
            if header.split(',').any(|c| c == "correlation") {
                let rows: Vec<CorrelationRow> =
                    from_csv(&text).map_err(|e| CliError::Usage(e.to_string()))?;
                let report = classify_rows(&rows);
                match format(OutFormat::Json) {
                    OutFormat::Json => json_line(out, &report),
                    OutFormat::Csv => emit(out, OutFormat::Csv, &[report]),
                }
            } else {
                let rows: Vec<DeltaRow> =
                    from_csv(&text).map_err(|e| CliError::Usage(e.to_string()))?;
                let reports = fit_rows(&rows, args.model, args.mode, args.noise_floor)?;
                emit(out, format(OutFormat::Json), &reports)
            }
        }
        Command::Check { lattice, cut: c } => {
            let spec = lattice.spec()?;
            let division = c.resolve(spec.nx)?;
            let (_, _, iface) = cut(&spec, &division)?;
            let verdict = check_applicability(&iface)?;
            let report = CheckJson {
                verdict: if verdict.applicable {
                    "applicable"
                } else {
                    "not-applicable"
                },
                symmetric: verdict.symmetric,
                eigenvalues: verdict.eigenvalues.iter().map(|&e| sig15(e)).collect(),
                left_boundary: iface.left_boundary.clone(),
                right_boundary: iface.right_boundary.clone(),
                k: iface.k.clone(),
            };
            match format(OutFormat::Json) {
                OutFormat::Json => json_line(out, &report),
                OutFormat::Csv => {
                    writeln!(out, "verdict,eigenvalues")?;
                    let eig: Vec<String> = report.eigenvalues.iter().map(f64::to_string).collect();
                    writeln!(out, "{},{}", report.verdict, eig.join(";"))?;
                    Ok(())
                }
            }
        }
        Command::Verify { max_sites } => {
            let mut solver = cli.solver.solver()?;
            let rows = verify_rows(&mut solver, *max_sites);
            emit(out, format(OutFormat::Csv), &rows)?;
            let failed = rows.iter().filter(|r| r.status != "pass").count();
            if failed > 0 {
                for r in rows.iter().filter(|r| r.status != "pass") {
                    eprintln!("mismatch: {} ({})", r.label, r.status);
                }
                return Err(CliError::Mismatch(failed));
            }
            Ok(())
        }
        Command::Counterexample => {
            let mut solver = cli.solver.solver()?;
            let r = counterexample_check(&mut solver)?;
            let report = CounterexampleJson {
                e5: sig15(r.e5),
                e6: sig15(r.e6),
                e7: sig15(r.e7),
                two_e6: sig15(2.0 * r.e6),
                e5_plus_e7: sig15(r.e5 + r.e7),
                naive_gap: sig15(r.naive_gap),
                naive_violated: r.naive_violated,
                even_split: DeltaRow::from_outcome(
                    &r.even_split.parent,
                    r.even_split.d2,
                    &Ok(r.even_split.clone()),
                ),
            };
            json_line(out, &report)
        }
    }
}

fn energy_report(
    out: &mut dyn Write,
    spec: &LatticeSpec,
    s: &Solved,
    format: OutFormat,
) -> Result<(), CliError> {
    let key = spec.canonical_key();
    match format {
        OutFormat::Json => json_line(
            out,
            &EnergyJson {
                key: &key,
                family: spec.family.key(),
                nx: spec.nx,
                ny: spec.ny,
                variant: spec.crossing.key(),
                j: spec.j,
                jd: spec.jd,
                energies: s.energies.iter().map(|&e| sig15(e)).collect(),
                residuals: s.residuals.iter().map(|&e| sig15(e)).collect(),
                n_sites: s.sector.0,
                n_up: s.sector.1,
                degenerate: s.degenerate,
            },
        ),
        OutFormat::Csv => emit(
            out,
            OutFormat::Csv,
            &[EnergyCsv {
                key: &key,
                family: spec.family.key(),
                nx: spec.nx,
                ny: spec.ny,
                variant: spec.crossing.key(),
                j: spec.j,
                jd: spec.jd,
                energy: sig15(s.energy()),
                next_energy: s.energies.get(1).map(|&e| sig15(e)),
                max_residual: sig15(s.max_residual()),
                n_up: s.sector.1,
                degenerate: s.degenerate,
            }],
        ),
    }
}

/// Sweep output rows, lengths outer and offsets inner.
pub fn sweep_rows(
    solver: &mut CachedSolver,
    template: &LatticeSpec,
    lengths: &[usize],
    d2s: &[i64],
    max_sites: Option<usize>,
) -> Vec<DeltaRow> {
    sweep(solver, template, lengths.iter().copied(), d2s, max_sites)
        .iter()
        .map(|item| DeltaRow::from_outcome(&item.parent, item.d2, &item.outcome))
        .collect()
}

/// Reference entries up to `max_sites`, recomputed and compared.
pub fn verify_rows(solver: &mut CachedSolver, max_sites: usize) -> Vec<VerifyRow> {
    reference::entries()
        .into_iter()
        .filter(|e| e.spec.n_sites() <= max_sites)
        .map(|e| {
            let mut row = VerifyRow {
                label: e.label,
                n_sites: e.spec.n_sites(),
                reference: e.energy,
                computed: None,
                diff: None,
                status: String::new(),
            };
            match solver.ground_state(&e.spec) {
                Ok(s) => {
                    let diff = s.energy() - e.energy;
                    row.computed = Some(sig15(s.energy()));
                    row.diff = Some(sig15(diff));
                    row.status = if diff.abs() <= VERIFY_TOL {
                        "pass"
                    } else {
                        "fail"
                    }
                    .into();
                }
                Err(err) => row.status = status_of(&err),
            }
            row
        })
        .collect()
}

/// Decay class of a profile read back from CSV.
pub fn classify_rows(rows: &[CorrelationRow]) -> DecayJson {
    let points: Vec<(f64, f64)> = rows
        .iter()
        .find(|r| r.site == r.anchor)
        .map(|a| {
            rows.iter()
                .filter(|r| r.y == a.y && r.x != a.x)
                .map(|r| (r.x.abs_diff(a.x) as f64, r.correlation.abs()))
                .collect()
        })
        .unwrap_or_default();
    let c = analysis::classify_points(&points);
    DecayJson {
        class: c.kind.key(),
        power_r2: c.power_r2.map(sig15),
        exp_r2: c.exp_r2.map(sig15),
        n_points: c.n_points,
    }
}

/// Fits of successful sweep rows, grouped by lattice class and offset.
pub fn fit_rows(
    rows: &[DeltaRow],
    model: ModelArg,
    mode: FitMode,
    noise_floor: f64,
) -> Result<Vec<FitReport>, CliError> {
    let models: &[FitModel] = match model {
        ModelArg::Power => &[FitModel::PowerLaw],
        ModelArg::Exp => &[FitModel::Exponential],
        ModelArg::Both => &[FitModel::PowerLaw, FitModel::Exponential],
    };
    let ok: Vec<&DeltaRow> = rows
        .iter()
        .filter(|r| r.status == "ok" && r.delta.is_some())
        .collect();
    let mut d2s: Vec<i64> = ok.iter().map(|r| r.d2).collect();
    d2s.sort_unstable();
    d2s.dedup();
    let group = |d2: i64| -> Vec<(f64, f64)> {
        ok.iter()
            .filter(|r| r.d2 == d2)
            .map(|r| (r.nx as f64, r.delta.unwrap_or(0.0)))
            .collect()
    };
    let span = |pts: &[(f64, f64)]| {
        let lo = pts.iter().map(|p| p.0 as usize).min().unwrap_or(0);
        let hi = pts.iter().map(|p| p.0 as usize).max().unwrap_or(0);
        (lo, hi)
    };

    let mut reports = Vec::new();
    for &m in models {
        match mode {
            FitMode::PerD => {
                for &d2 in &d2s {
                    let pts = group(d2);
                    // an offset with nothing above the noise floor has no law
                    if let Ok(fit) = analysis::fit(m, &pts, noise_floor) {
                        let (lo, hi) = span(&pts);
                        reports.push(FitReport::new(&fit, format!("per-d:{d2}"), lo, hi));
                    }
                }
            }
            FitMode::Pooled => {
                let pts: Vec<(f64, f64)> = d2s.iter().flat_map(|&d| group(d)).collect();
                let fit: FitResult = analysis::fit(m, &pts, noise_floor)?;
                let (lo, hi) = span(&pts);
                reports.push(FitReport::new(&fit, "pooled".into(), lo, hi));
            }
            FitMode::Shared => {
                let groups: Vec<Vec<(f64, f64)>> = d2s.iter().map(|&d| group(d)).collect();
                let fit = analysis::fit_shared(m, &groups, noise_floor)?;
                let all: Vec<(f64, f64)> = groups.concat();
                let (lo, hi) = span(&all);
                reports.push(FitReport::new(&fit, "shared".into(), lo, hi));
            }
        }
    }
    if reports.is_empty() {
        return Err(Error::TooFewPoints { usable: 0 }.into());
    }
    Ok(reports)
}
