//! Row types for CSV and JSON output, and number formatting.

use schupp_core::analysis::FitResult;
use schupp_core::{DeltaRecord, Error, LatticeSpec};
use serde::{Deserialize, Serialize};

/// `x` rounded to 15 significant digits. Serializers print the shortest
/// decimal that round-trips, so the rounded value prints with at most 15.
pub fn sig15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// One line of delta/sweep output. Failed divisions keep their spec and
/// offset, carry no energies, and explain themselves in `status`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaRow {
    pub family: String,
    pub nx: usize,
    pub ny: usize,
    pub variant: String,
    pub d2: i64,
    pub e_lr: Option<f64>,
    pub e_ll: Option<f64>,
    pub e_rr: Option<f64>,
    pub delta: Option<f64>,
    pub residual_bound: Option<f64>,
    pub status: String,
}

impl DeltaRow {
    pub fn from_outcome(
        parent: &LatticeSpec,
        d2: i64,
        outcome: &Result<DeltaRecord, Error>,
    ) -> Self {
        let mut row = DeltaRow {
            family: parent.family.key().to_string(),
            nx: parent.nx,
            ny: parent.ny,
            variant: parent.crossing.key().to_string(),
            d2,
            e_lr: None,
            e_ll: None,
            e_rr: None,
            delta: None,
            residual_bound: None,
            status: String::new(),
        };
        match outcome {
            Ok(r) => {
                row.e_lr = Some(sig15(r.e_lr));
                row.e_ll = Some(sig15(r.e_ll));
                row.e_rr = Some(sig15(r.e_rr));
                row.delta = Some(sig15(r.delta));
                row.residual_bound = Some(sig15(r.residual_bound));
                row.status = if r.satisfies_inequality() {
                    "ok"
                } else {
                    "violated"
                }
                .to_string();
            }
            Err(e) => row.status = status_of(e),
        }
        row
    }
}

/// Short machine-readable failure tag followed by the message.
pub fn status_of(e: &Error) -> String {
    let tag = match e {
        Error::NotApplicable { .. } => "not-applicable",
        Error::TooManySites { .. } | Error::MemoryLimit { .. } => "memory",
        Error::NotConverged { .. } | Error::TridiagNotConverged => "solver-failure",
        _ => "error",
    };
    format!("{tag}: {e}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRow {
    pub family: String,
    pub nx: usize,
    pub ny: usize,
    pub variant: String,
    pub anchor: usize,
    pub site: usize,
    pub x: usize,
    pub y: usize,
    pub correlation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub model: String,
    /// `per-d:<d2>`, `pooled` or `shared`.
    pub group: String,
    pub exponent: f64,
    pub amplitude: f64,
    pub std_err: f64,
    pub r_squared: f64,
    pub n_points: usize,
    pub excluded: usize,
    pub l_min: usize,
    pub l_max: usize,
}

impl FitReport {
    pub fn new(fit: &FitResult, group: String, l_min: usize, l_max: usize) -> Self {
        Self {
            model: fit.model.key().to_string(),
            group,
            exponent: sig15(fit.exponent),
            amplitude: sig15(fit.amplitude),
            std_err: sig15(fit.std_err),
            r_squared: sig15(fit.r_squared),
            n_points: fit.n_points,
            excluded: fit.excluded,
            l_min,
            l_max,
        }
    }
}

/// CSV text with a header line.
pub fn to_csv<T: Serialize>(rows: &[T]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn from_csv<T: for<'de> Deserialize<'de>>(text: &str) -> anyhow::Result<Vec<T>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}
