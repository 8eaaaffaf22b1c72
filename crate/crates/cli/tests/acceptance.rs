//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails. The 24-site profiles make this the
//! slow part of the test suite.

#[path = "../../core/tests/support/dense.rs"]
mod dense;

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::Instant;

use schupp::cache::CachedSolver;
use schupp::commands::{fit_rows, verify_rows, FitMode, ModelArg};
use schupp::output::{DeltaRow, FitReport};
use schupp::reference;
use schupp_core::analysis::{
    classify_decay, conjecture_table, fit_exp, fit_power, DecayClass, DecayKind, FamilyEvidence,
    DEFAULT_NOISE_FLOOR,
};
use schupp_core::lattice::build;
use schupp_core::observables::profile;
use schupp_core::schupp::{counterexample_check, delta, pyrochlore_increment, sweep};
use schupp_core::{
    CorrelationSeries, Crossing, CutSpec, HamiltonianOperator, LanczosConfig, LatticeSpec,
    SectorBasis, SectorPolicy,
};

const MAX_MEM: u64 = 6 << 30;
/// Largest doubled lattice in the nonnegativity sweeps.
const SWEEP_SITES: usize = 20;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

/// State shared between criteria: one solver cache, the sweeps and the
/// long profiles.
struct Ctx {
    solver: CachedSolver,
    sweeps: BTreeMap<&'static str, Vec<DeltaRow>>,
    profiles: BTreeMap<&'static str, CorrelationSeries>,
}

fn sweep_families() -> Vec<(&'static str, LatticeSpec, Vec<usize>)> {
    let ladders = (2..=10).collect::<Vec<_>>();
    let mut out = vec![
        ("chain", LatticeSpec::chain(2), (2..=20).collect()),
        ("ladder", LatticeSpec::square_ladder(2), ladders.clone()),
        ("x-ladder", LatticeSpec::crossed_ladder(2), ladders.clone()),
        ("pyro-a", LatticeSpec::pyro_a(2), ladders.clone()),
        ("pyro-b", LatticeSpec::pyro_b(2), ladders),
    ];
    let rects: [(&str, usize, Crossing); 8] = [
        ("rect3-none", 3, Crossing::None),
        ("rect3-checker-a", 3, Crossing::CheckerA),
        ("rect3-checker-b", 3, Crossing::CheckerB),
        ("rect3-all", 3, Crossing::All),
        ("rect4-none", 4, Crossing::None),
        ("rect4-checker-a", 4, Crossing::CheckerA),
        ("rect4-checker-b", 4, Crossing::CheckerB),
        ("rect4-all", 4, Crossing::All),
    ];
    for (name, ny, crossing) in rects {
        out.push((
            name,
            LatticeSpec::rectangle(2, ny, crossing),
            (2..=SWEEP_SITES / ny).collect(),
        ));
    }
    out
}

impl Ctx {
    fn sweeps(&mut self) -> &BTreeMap<&'static str, Vec<DeltaRow>> {
        if self.sweeps.is_empty() {
            let d2s: Vec<i64> = (-18..=18).collect();
            for (name, template, lengths) in sweep_families() {
                let rows = sweep(
                    &mut self.solver,
                    &template,
                    lengths,
                    &d2s,
                    Some(SWEEP_SITES),
                )
                .iter()
                .map(|item| DeltaRow::from_outcome(&item.parent, item.d2, &item.outcome))
                .collect();
                self.sweeps.insert(name, rows);
            }
        }
        &self.sweeps
    }

    /// Sweep rows used for decay fits: positive offsets only, and even
    /// lengths for chains, whose odd lengths have an odd spin count.
    fn fit_input(&mut self, family: &str) -> Vec<DeltaRow> {
        let chain = family == "chain";
        self.sweeps()[family]
            .iter()
            .filter(|r| r.d2 > 0 && (!chain || (r.nx % 2 == 0 && r.d2 <= 8)))
            .cloned()
            .collect()
    }

    fn profile(
        &mut self,
        name: &'static str,
        spec: LatticeSpec,
    ) -> Result<&CorrelationSeries, String> {
        if !self.profiles.contains_key(name) {
            self.solver.guard(&spec).map_err(|e| e.to_string())?;
            let series =
                profile(&spec, 0, self.solver.config()).map_err(|e| format!("{spec}: {e}"))?;
            self.profiles.insert(name, series);
        }
        Ok(&self.profiles[name])
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn table_energies(ctx: &mut Ctx, chains: bool) -> Outcome {
    let rows: Vec<_> = verify_rows(&mut ctx.solver, 20)
        .into_iter()
        .filter(|r| r.label.starts_with("chain") == chains)
        .collect();
    let bad: Vec<String> = rows
        .iter()
        .filter(|r| r.status != "pass")
        .map(|r| format!("{} ({})", r.label, r.status))
        .collect();
    let worst = rows
        .iter()
        .filter_map(|r| r.diff)
        .map(f64::abs)
        .fold(0.0, f64::max);
    Outcome::new(
        bad.is_empty() && !rows.is_empty(),
        format!(
            "{} entries, max |diff| {worst:.1e}; failing: {bad:?}",
            rows.len()
        ),
    )
}

fn c1_chain_table(ctx: &mut Ctx) -> Outcome {
    table_energies(ctx, true)
}

fn c2_quasi_2d_table(ctx: &mut Ctx) -> Outcome {
    table_energies(ctx, false)
}

fn c3_nonnegativity(ctx: &mut Ctx) -> Outcome {
    let mut ok = 0;
    let mut refused = 0;
    let mut problems = Vec::new();
    let mut lowest = f64::INFINITY;
    for (name, rows) in ctx.sweeps() {
        for r in rows {
            match r.status.as_str() {
                "ok" => {
                    ok += 1;
                    lowest = lowest.min(r.delta.unwrap_or(f64::NAN));
                }
                s if s.starts_with("not-applicable") => refused += 1,
                s => problems.push(format!("{name} nx={} d2={}: {s}", r.nx, r.d2)),
            }
        }
    }
    Outcome::new(
        problems.is_empty() && ok > 0,
        format!(
            "{ok} divisions (doubled lattices <= {SWEEP_SITES} sites), min delta {lowest:.3e}, \
             {refused} not applicable; problems: {problems:?}"
        ),
    )
}

fn c4_counterexample(ctx: &mut Ctx) -> Outcome {
    const EXPECTED: f64 = -0.223028333771;
    let e = |n| reference::chain_energy(n).unwrap_or(f64::NAN);
    let table = 2.0 * e(6) - (e(5) + e(7));
    match counterexample_check(&mut ctx.solver) {
        Ok(r) => Outcome::new(
            r.naive_violated
                && close(r.naive_gap, EXPECTED, 1e-10)
                && close(table, EXPECTED, 1e-10),
            format!(
                "2E6 - (E5 + E7) = {:.12} (table arithmetic {table:.12})",
                r.naive_gap
            ),
        ),
        Err(e) => Outcome::new(false, e.to_string()),
    }
}

fn c5_saturation(ctx: &mut Ctx) -> Outcome {
    let run = |ctx: &mut Ctx| -> schupp_core::Result<(f64, bool, Vec<f64>)> {
        let rec = delta(
            &mut ctx.solver,
            &LatticeSpec::pyro_a(5),
            &CutSpec::new(3, 2)?,
        )?;
        let shape = rec.left_doubled == LatticeSpec::pyro_a(6)
            && rec.right_doubled == LatticeSpec::pyro_b(4);
        let steps = (1..=4)
            .map(|k| pyrochlore_increment(&mut ctx.solver, k))
            .collect::<schupp_core::Result<Vec<_>>>()?;
        Ok((rec.delta, shape, steps))
    };
    match run(ctx) {
        Ok((gap, shape, steps)) => Outcome::new(
            shape && gap.abs() <= 1e-9 && steps.iter().all(|s| close(*s, -0.75, 1e-9)),
            format!("2E(2x5) - E(B,2x4) - E(A,2x6) = {gap:.2e}; increments {steps:?}"),
        ),
        Err(e) => Outcome::new(false, e.to_string()),
    }
}

fn c6_edge_correlation(ctx: &mut Ctx) -> Outcome {
    let spec = LatticeSpec::pyro_a(6);
    let partner = spec.site(0, 1);
    match ctx.profile("pyro-a 2x6", spec) {
        Ok(series) => {
            let worst = series
                .values
                .iter()
                .filter(|(site, _)| *site != 0 && *site != partner)
                .map(|(_, c)| c.abs())
                .fold(0.0, f64::max);
            let pair = series.get(partner).unwrap_or(f64::NAN);
            Outcome::new(
                worst < 1e-8,
                format!("edge pair {pair:.12}, largest other |c| {worst:.1e}"),
            )
        }
        Err(e) => Outcome::new(false, e),
    }
}

fn c7_oracle(ctx: &mut Ctx) -> Outcome {
    let mut worst_energy: f64 = 0.0;
    let mut worst_apply: f64 = 0.0;
    let mut count = 0;
    let mut seed = 0x9e3779b97f4a7c15u64;
    for spec in dense::specs_up_to_12() {
        count += 1;
        let lanczos = match ctx.solver.ground_state(&spec) {
            Ok(s) => s.energy(),
            Err(e) => return Outcome::new(false, format!("{spec}: {e}")),
        };
        worst_energy = worst_energy.max((lanczos - dense::dense_ground_energy(&spec)).abs());

        let n = spec.n_sites();
        let n_up = n / 2;
        let d = dense::dense(&spec, n_up as u32);
        let op = match SectorBasis::enumerate(n, n_up)
            .and_then(|b| HamiltonianOperator::new(build(&spec)?, b))
        {
            Ok(op) => op,
            Err(e) => return Outcome::new(false, format!("{spec}: {e}")),
        };
        let x: Vec<f64> = (0..d.configs.len())
            .map(|_| {
                seed ^= seed << 13;
                seed ^= seed >> 7;
                seed ^= seed << 17;
                (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            })
            .collect();
        let mut xo = vec![0.0; x.len()];
        for (r, &c) in op.basis().configs().iter().enumerate() {
            xo[d.index[&c]] = x[r];
        }
        let yo = &d.h * nalgebra::DVector::from_vec(xo);
        let y = op.apply(&x).unwrap_or_default();
        for (r, &c) in op.basis().configs().iter().enumerate() {
            worst_apply = worst_apply.max((y[r] - yo[d.index[&c]]).abs());
        }
    }
    Outcome::new(
        worst_energy <= 1e-11 && worst_apply <= 1e-13,
        format!(
            "{count} lattices up to 12 sites; energy {worst_energy:.1e}, apply {worst_apply:.1e}"
        ),
    )
}

fn describe(r: &FitReport) -> String {
    format!(
        "{:.4} +- {:.4} (r2 {:.4}, {} points, L {}..{})",
        r.exponent, r.std_err, r.r_squared, r.n_points, r.l_min, r.l_max
    )
}

fn shared_fit(ctx: &mut Ctx, family: &str, model: ModelArg) -> Result<FitReport, String> {
    let rows = ctx.fit_input(family);
    fit_rows(&rows, model, FitMode::Shared, DEFAULT_NOISE_FLOOR)
        .map_err(|e| format!("{family}: {e}"))
        .map(|mut v| v.remove(0))
}

fn c8_fits(ctx: &mut Ctx) -> Outcome {
    let power: Vec<(f64, f64)> = (4..=40)
        .map(|l| (l as f64, 5.0 * (l as f64).powi(-3)))
        .collect();
    let exp: Vec<(f64, f64)> = (2..=30)
        .map(|l| (l as f64, 2.0 * (-0.63 * l as f64).exp()))
        .collect();
    let synthetic = match (fit_power(&power, 0.0), fit_exp(&exp, 0.0)) {
        (Ok(p), Ok(e)) => {
            ((p.exponent - 3.0) / 3.0).abs() <= 1e-6 && ((e.exponent - 0.63) / 0.63).abs() <= 1e-6
        }
        _ => false,
    };
    let fits = (|| -> Result<_, String> {
        Ok((
            shared_fit(ctx, "chain", ModelArg::Power)?,
            shared_fit(ctx, "pyro-b", ModelArg::Exp)?,
            shared_fit(ctx, "x-ladder", ModelArg::Exp)?,
            shared_fit(ctx, "pyro-a", ModelArg::Exp)?,
        ))
    })();
    match fits {
        Ok((theta, pyro, crossed, pyro_a)) => Outcome::new(
            synthetic
                && (2.3..=3.4).contains(&theta.exponent)
                && (0.53..=0.73).contains(&pyro.exponent)
                && (0.44..=0.64).contains(&crossed.exponent),
            format!(
                "synthetic ok: {synthetic}; theta(chain, even L, d2 2..8) {}; alpha(pyro-b) {}; \
                 alpha(x-ladder) {}; alpha(pyro-a, informational) {}",
                describe(&theta),
                describe(&pyro),
                describe(&crossed),
                describe(&pyro_a)
            ),
        ),
        Err(e) => Outcome::new(false, e),
    }
}

/// Longest lattice of each family whose ground state fits in memory.
fn long_profiles() -> [(&'static str, &'static str, LatticeSpec); 4] {
    [
        ("chain", "chain 20", LatticeSpec::chain(20)),
        ("ladder", "ladder 2x12", LatticeSpec::square_ladder(12)),
        ("x-ladder", "x-ladder 2x12", LatticeSpec::crossed_ladder(12)),
        ("pyro-b", "pyro-b 2x12", LatticeSpec::pyro_b(12)),
    ]
}

fn c9_decay_classes(ctx: &mut Ctx) -> Outcome {
    let mut evidence = Vec::new();
    let mut classes: Vec<(&str, DecayClass)> = Vec::new();
    for (family, label, spec) in long_profiles() {
        let class = match ctx.profile(label, spec) {
            Ok(series) => classify_decay(series),
            Err(e) => return Outcome::new(false, e),
        };
        let mut groups: BTreeMap<i64, Vec<(f64, f64)>> = BTreeMap::new();
        for r in ctx.fit_input(family) {
            if let (Some(d), "ok") = (r.delta, r.status.as_str()) {
                groups.entry(r.d2).or_default().push((r.nx as f64, d));
            }
        }
        evidence.push(FamilyEvidence {
            name: label.into(),
            decay: class.clone(),
            delta_groups: groups.into_values().collect(),
        });
        classes.push((label, class));
    }
    let rows = conjecture_table(&evidence, DEFAULT_NOISE_FLOOR);
    let kind = |label: &str| classes.iter().find(|c| c.0 == label).map(|c| c.1.kind);
    let pass = kind("chain 20") == Some(DecayKind::Algebraic)
        && kind("ladder 2x12") == Some(DecayKind::Exponential)
        && rows.iter().all(|r| r.agree == Some(true));
    let detail = rows
        .iter()
        .zip(&classes)
        .map(|(r, (_, c))| {
            format!(
                "{}: {} (r2 power {:.3}, exp {:.3}) vs gap {} -> agree {:?}",
                r.name,
                r.decay.key(),
                c.power_r2.unwrap_or(f64::NAN),
                c.exp_r2.unwrap_or(f64::NAN),
                r.delta_fit.as_ref().map_or("none", |f| f.model.key()),
                r.agree
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    Outcome::new(pass, detail)
}

fn c10_separation(ctx: &mut Ctx) -> Outcome {
    // twenty sites each, cut one column (chain) or rung (ladder) off the middle
    let run = |ctx: &mut Ctx| -> Result<(f64, f64), String> {
        let e = |ctx: &mut Ctx, spec: LatticeSpec| {
            ctx.solver
                .ground_state(&spec)
                .map(|s| s.energy())
                .map_err(|e| e.to_string())
        };
        let ladder_24 = ctx
            .profile("ladder 2x12", LatticeSpec::square_ladder(12))?
            .ground_energy;
        let ladder = 2.0 * e(ctx, LatticeSpec::square_ladder(10))?
            - ladder_24
            - e(ctx, LatticeSpec::square_ladder(8))?;
        let chain = 2.0 * e(ctx, LatticeSpec::chain(20))?
            - e(ctx, LatticeSpec::chain(22))?
            - e(ctx, LatticeSpec::chain(18))?;
        Ok((ladder, chain))
    };
    match run(ctx) {
        Ok((ladder, chain)) => {
            let ratio = ladder / chain;
            Outcome::new(
                ratio <= 1e-2,
                format!("delta(ladder 2x10, d2=2) {ladder:.4e} / delta(chain 20, d2=2) {chain:.4e} = {ratio:.3e}"),
            )
        }
        Err(e) => Outcome::new(false, e),
    }
}

fn c11_determinism(_: &mut Ctx) -> Outcome {
    let runs: [&[&str]; 3] = [
        &[
            "--max-mem",
            "1G",
            "sweep",
            "--family",
            "pyro-b",
            "--lengths",
            "3-8",
            "--d2",
            "-4-4",
        ],
        &[
            "--max-mem",
            "1G",
            "--out",
            "json",
            "energy",
            "--family",
            "x-ladder",
            "--nx",
            "7",
        ],
        &[
            "--max-mem",
            "1G",
            "profile",
            "--family",
            "chain",
            "--nx",
            "14",
        ],
    ];
    let exe = env!("CARGO_BIN_EXE_schupp");
    let once = |args: &[&str]| {
        Command::new(exe)
            .args(args)
            .env_remove("SCHUPP_CACHE")
            .output()
    };
    for args in runs {
        match (once(args), once(args)) {
            (Ok(a), Ok(b)) => {
                if !a.status.success() || a.stdout.is_empty() {
                    return Outcome::new(
                        false,
                        format!("{args:?} failed: {}", String::from_utf8_lossy(&a.stderr)),
                    );
                }
                if a.stdout != b.stdout || a.status.code() != b.status.code() {
                    return Outcome::new(false, format!("{args:?} differs between runs"));
                }
            }
            (Err(e), _) | (_, Err(e)) => return Outcome::new(false, e.to_string()),
        }
    }
    Outcome::new(
        true,
        format!("{} commands byte-identical across two runs", runs.len()),
    )
}

type Check = fn(&mut Ctx) -> Outcome;

fn main() -> ExitCode {
    let criteria: [(&str, Check); 11] = [
        ("chain reference energies, N <= 20", c1_chain_table),
        (
            "quasi-2d reference energies, nx*ny <= 20",
            c2_quasi_2d_table,
        ),
        ("gap nonnegativity", c3_nonnegativity),
        ("odd-split chain counterexample", c4_counterexample),
        ("pyrochlore saturation and -0.75 increments", c5_saturation),
        ("pyrochlore edge-pair correlations", c6_edge_correlation),
        ("dense oracle equivalence", c7_oracle),
        ("decay-law fits", c8_fits),
        (
            "correlation decay classes and conjecture rows",
            c9_decay_classes,
        ),
        ("ladder/chain gap separation", c10_separation),
        ("determinism", c11_determinism),
    ];
    let mut ctx = Ctx {
        solver: CachedSolver::new(
            LanczosConfig::default(),
            SectorPolicy::MinAbsSz,
            MAX_MEM,
            None,
        ),
        sweeps: BTreeMap::new(),
        profiles: BTreeMap::new(),
    };
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check(&mut ctx);
        failed += usize::from(!outcome.pass);
        println!(
            "{} {:>2} {name} [{:.1}s]: {}",
            if outcome.pass { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64(),
            outcome.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
