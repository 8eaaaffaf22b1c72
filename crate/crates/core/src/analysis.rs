//! Decay-law fits for the gap and for spin correlations.
//!
//! All fits are unweighted ordinary least squares in log space: a power
//! law `y = A x^-theta` regresses `ln y` on `ln x`, an exponential
//! `y = A e^(-alpha x)` regresses `ln y` on `x`. Points at or below the noise
//! floor never enter a regression.

use alloc::string::String;
use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::observables::CorrelationSeries;

/// Gaps below this are treated as solver noise.
pub const DEFAULT_NOISE_FLOOR: f64 = 1e-9;

/// Minimum r-squared advantage for a decisive decay classification.
pub const DECISIVE_MARGIN: f64 = 0.05;

/// Minimum usable distances for classifying a correlation profile.
pub const MIN_DECAY_POINTS: usize = 5;

/// Shortest distance used for classification. Nearest neighbours measure
/// the bond energy rather than the decay.
pub const MIN_DECAY_DISTANCE: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    PowerLaw,
    Exponential,
}

impl FitModel {
    pub fn key(self) -> &'static str {
        match self {
            FitModel::PowerLaw => "power",
            FitModel::Exponential => "exp",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model: FitModel,
    /// `theta` for a power law, `alpha` for an exponential.
    pub exponent: f64,
    pub amplitude: f64,
    /// One-sigma standard error of the exponent.
    pub std_err: f64,
    pub r_squared: f64,
    pub n_points: usize,
    /// Points dropped for sitting at or below the noise floor.
    pub excluded: usize,
}

#[derive(Debug, Clone)]
struct LineFit {
    slope: f64,
    intercept: f64,
    se_slope: f64,
    se_intercept: f64,
    r_squared: f64,
    /// Per group, at `x = 0`.
    intercepts: Vec<f64>,
}

/// Least-squares line through groups sharing a slope, each with its own
/// intercept. A single group is ordinary linear regression.
fn fit_lines(groups: &[Vec<(f64, f64)>]) -> LineFit {
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    let mut n = 0usize;
    let mut means = Vec::with_capacity(groups.len());
    for g in groups {
        let k = g.len() as f64;
        let mx = g.iter().map(|p| p.0).sum::<f64>() / k;
        let my = g.iter().map(|p| p.1).sum::<f64>() / k;
        for &(x, y) in g {
            sxx += (x - mx) * (x - mx);
            sxy += (x - mx) * (y - my);
            syy += (y - my) * (y - my);
        }
        n += g.len();
        means.push((mx, my, k));
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let mut ssr = 0.0;
    for (g, &(mx, my, _)) in groups.iter().zip(&means) {
        for &(x, y) in g {
            let r = y - (my + slope * (x - mx));
            ssr += r * r;
        }
    }
    let dof = n.saturating_sub(groups.len() + 1).max(1) as f64;
    let sigma2 = ssr / dof;
    let se_slope = if sxx > 0.0 {
        (sigma2 / sxx).sqrt()
    } else {
        f64::INFINITY
    };
    let (mx, my, k) = means[0];
    let intercept = my - slope * mx;
    let se_intercept = (sigma2 * (1.0 / k + mx * mx / sxx)).sqrt();
    let r_squared = if syy > 0.0 { 1.0 - ssr / syy } else { 1.0 };
    LineFit {
        slope,
        intercept,
        se_slope,
        se_intercept,
        r_squared,
        intercepts: means.iter().map(|&(mx, my, _)| my - slope * mx).collect(),
    }
}

fn transform(model: FitModel, points: &[(f64, f64)], noise_floor: f64) -> (Vec<(f64, f64)>, usize) {
    let mut used = Vec::with_capacity(points.len());
    for &(x, y) in points {
        let x_ok = match model {
            FitModel::PowerLaw => x > 0.0,
            FitModel::Exponential => x.is_finite(),
        };
        if x_ok && y > noise_floor && y.is_finite() {
            let tx = match model {
                FitModel::PowerLaw => x.ln(),
                FitModel::Exponential => x,
            };
            used.push((tx, y.ln()));
        }
    }
    let excluded = points.len() - used.len();
    (used, excluded)
}

/// Fits one decay law to `(x, y)` points.
pub fn fit(model: FitModel, points: &[(f64, f64)], noise_floor: f64) -> Result<FitResult> {
    fit_shared(model, &[points.to_vec()], noise_floor)
}

/// `y = A x^-theta` on `(L, Delta)` points.
pub fn fit_power(points: &[(f64, f64)], noise_floor: f64) -> Result<FitResult> {
    fit(FitModel::PowerLaw, points, noise_floor)
}

/// `y = A e^(-alpha x)` on `(L, Delta)` points.
pub fn fit_exp(points: &[(f64, f64)], noise_floor: f64) -> Result<FitResult> {
    fit(FitModel::Exponential, points, noise_floor)
}

/// One exponent shared by several series (for example one per cut offset),
/// each with its own amplitude. The reported amplitude is that of the first
/// series with usable points.
pub fn fit_shared(
    model: FitModel,
    groups: &[Vec<(f64, f64)>],
    noise_floor: f64,
) -> Result<FitResult> {
    let mut used = Vec::new();
    let mut excluded = 0;
    for g in groups {
        let (u, e) = transform(model, g, noise_floor);
        excluded += e;
        // a lone point only pins its own intercept
        if u.len() >= 2 {
            used.push(u);
        } else {
            excluded += u.len();
        }
    }
    let n_points: usize = used.iter().map(Vec::len).sum();
    if n_points < 3 || n_points < used.len() + 2 {
        return Err(Error::TooFewPoints { usable: n_points });
    }
    let line = fit_lines(&used);
    Ok(FitResult {
        model,
        exponent: -line.slope,
        amplitude: line.intercept.exp(),
        std_err: line.se_slope,
        r_squared: line.r_squared,
        n_points,
        excluded,
    })
}

impl FitResult {
    pub fn predict(&self, x: f64) -> f64 {
        match self.model {
            FitModel::PowerLaw => self.amplitude * x.powf(-self.exponent),
            FitModel::Exponential => self.amplitude * (-self.exponent * x).exp(),
        }
    }
}

/// Fits both laws and returns the one with the larger r-squared.
pub fn best_fit(points: &[(f64, f64)], noise_floor: f64) -> Option<FitResult> {
    best_fit_shared(&[points.to_vec()], noise_floor)
}

/// [`best_fit`] with one intercept per group and a common exponent.
pub fn best_fit_shared(groups: &[Vec<(f64, f64)>], noise_floor: f64) -> Option<FitResult> {
    let power = fit_shared(FitModel::PowerLaw, groups, noise_floor).ok();
    let exp = fit_shared(FitModel::Exponential, groups, noise_floor).ok();
    match (power, exp) {
        (Some(p), Some(e)) => Some(if p.r_squared >= e.r_squared { p } else { e }),
        (p, e) => p.or(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayKind {
    Algebraic,
    Exponential,
    Constant,
    Undetermined,
}

impl DecayKind {
    pub fn key(self) -> &'static str {
        match self {
            DecayKind::Algebraic => "algebraic",
            DecayKind::Exponential => "exponential",
            DecayKind::Constant => "constant",
            DecayKind::Undetermined => "undetermined",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayClass {
    pub kind: DecayKind,
    /// Scores on `|c|`, see [`classify_points`].
    pub power_r2: Option<f64>,
    pub exp_r2: Option<f64>,
    pub n_points: usize,
}

/// Distance/magnitude pairs along the anchor's row, one per column offset.
pub fn decay_points(series: &CorrelationSeries) -> Vec<(f64, f64)> {
    let spec = &series.spec;
    let (ax, ay) = spec.coords(series.anchor);
    series
        .values
        .iter()
        .filter_map(|&(site, c)| {
            let (x, y) = spec.coords(site);
            (y == ay && x != ax).then(|| (x.abs_diff(ax) as f64, c.abs()))
        })
        .collect()
}

pub fn classify_decay(series: &CorrelationSeries) -> DecayClass {
    classify_points(&decay_points(series))
}

/// Classifies `(distance, |correlation|)` data.
///
/// Only distances from [`MIN_DECAY_DISTANCE`] on count. A linear fit
/// `|c| = a + b r` with an intercept above three standard errors and a slope
/// within three standard errors of zero marks a constant plateau. Otherwise
/// both laws are fitted in log space with one exponent and a separate
/// amplitude for odd and even distances, which absorbs the staggering near
/// open edges. Each fit is scored by the r-squared of its predictions
/// against `|c|` itself, and the scores must differ by at least
/// [`DECISIVE_MARGIN`].
pub fn classify_points(points: &[(f64, f64)]) -> DecayClass {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(r, c)| r >= MIN_DECAY_DISTANCE && c > DEFAULT_NOISE_FLOOR && c.is_finite())
        .collect();
    let mut class = DecayClass {
        kind: DecayKind::Undetermined,
        power_r2: None,
        exp_r2: None,
        n_points: usable.len(),
    };
    if usable.len() < MIN_DECAY_POINTS {
        return class;
    }

    let line = fit_lines(core::slice::from_ref(&usable));
    if line.intercept > 3.0 * line.se_intercept && line.slope.abs() <= 3.0 * line.se_slope {
        class.kind = DecayKind::Constant;
        return class;
    }

    let groups: Vec<Vec<(f64, f64)>> = [0.0, 1.0]
        .iter()
        .map(|&parity| {
            usable
                .iter()
                .copied()
                .filter(|p| p.0 % 2.0 == parity)
                .collect::<Vec<_>>()
        })
        .filter(|g| g.len() >= 2)
        .collect();
    let p = staggered_score(FitModel::PowerLaw, &groups);
    let e = staggered_score(FitModel::Exponential, &groups);
    class.power_r2 = Some(p);
    class.exp_r2 = Some(e);
    if p - e >= DECISIVE_MARGIN {
        class.kind = DecayKind::Algebraic;
    } else if e - p >= DECISIVE_MARGIN {
        class.kind = DecayKind::Exponential;
    }
    class
}

/// r-squared on the untransformed values of a shared-exponent fit with one
/// amplitude per group.
fn staggered_score(model: FitModel, groups: &[Vec<(f64, f64)>]) -> f64 {
    let logs: Vec<Vec<(f64, f64)>> = groups.iter().map(|g| transform(model, g, 0.0).0).collect();
    let line = fit_lines(&logs);
    let n = groups.iter().map(Vec::len).sum::<usize>() as f64;
    let mean = groups.iter().flatten().map(|p| p.1).sum::<f64>() / n;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (g, &b) in logs.iter().zip(&line.intercepts) {
        for &(tx, ty) in g {
            let y = ty.exp();
            ss_res += (y - (b + line.slope * tx).exp()).powi(2);
            ss_tot += (y - mean).powi(2);
        }
    }
    if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    }
}

#[derive(Debug, Clone)]
pub struct FamilyEvidence {
    pub name: String,
    pub decay: DecayClass,
    /// `(L, Delta)` points from a sweep, one group per cut offset.
    pub delta_groups: Vec<Vec<(f64, f64)>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureRow {
    pub name: String,
    pub decay: DecayKind,
    pub delta_fit: Option<FitResult>,
    /// `Some(true)` when exponential correlations pair with an exponential
    /// gap or algebraic with a power law; `None` when no claim can be made.
    pub agree: Option<bool>,
}

impl ConjectureRow {
    pub fn flagged(&self) -> bool {
        self.agree.is_none()
    }
}

/// Compares the correlation decay class with the gap-vs-length law that
/// fits better with a shared exponent.
pub fn conjecture_table(families: &[FamilyEvidence], noise_floor: f64) -> Vec<ConjectureRow> {
    families
        .iter()
        .map(|f| {
            let delta_fit = best_fit_shared(&f.delta_groups, noise_floor);
            let agree = match (f.decay.kind, delta_fit.as_ref().map(|d| d.model)) {
                (DecayKind::Algebraic, Some(m)) => Some(m == FitModel::PowerLaw),
                (DecayKind::Exponential, Some(m)) => Some(m == FitModel::Exponential),
                _ => None,
            };
            ConjectureRow {
                name: f.name.clone(),
                decay: f.decay.kind,
                delta_fit,
                agree,
            }
        })
        .collect()
}
