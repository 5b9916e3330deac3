//! Companion diagnostics around the BD value: relative curve difference
//! sampling, interpolation-was-how-wrong estimates, and subset error
//! statistics for sparse param sweeps.

use crate::bd::{bd_value, kahan_sum, powf10, prepare_curve, BdConfig, BdError};
use crate::curve::{interval_iou, interval_overlap, SupportSet};
use crate::interp::{fit, FitError, Method};
use thiserror::Error;

/// Crossing refinement stops when the bracket is this narrow (independent
/// axis units).
const CROSSING_TOLERANCE: f64 = 1e-9;

/// Errors of the diagnostic operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Bd(#[from] BdError),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error("point with param {param} of '{config_id}' is not part of the full set")]
    NotASubset { config_id: String, param: f64 },
    #[error("independent value {value} outside the subset's fitted range [{lo}, {hi}]")]
    OutOfDomain { value: f64, lo: f64, hi: f64 },
    #[error("cannot select {requested} supporting params out of {available}")]
    InvalidCount { requested: usize, available: usize },
    #[error("param selection requires contiguous ascending integer params")]
    NonContiguousParams,
    #[error("need at least 2 samples, got {got}")]
    InvalidSampleCount { got: usize },
    #[error("empty input")]
    EmptyInput,
}

/// The relative curve difference between two fitted curves, sampled over
/// their shared range: how far apart the configurations are at *each*
/// quality level, where the BD value is only the log-domain mean.
#[derive(Debug, Clone, PartialEq)]
pub struct RcdCurve {
    /// `(independent, delta_percent)` samples, ascending in the independent
    /// value; `delta_percent = 100 * (10^(q_test - q_anchor) - 1)`.
    pub samples: Vec<(f64, f64)>,
    /// Independent positions where the sign of the difference flips,
    /// refined by bisection on the continuous log-difference.
    pub crossings: Vec<f64>,
    /// The BD value of the same pair, in percent, for reference lines.
    pub bd_percent: f64,
    /// Shared integration bounds on the (transformed) independent axis.
    pub bounds: (f64, f64),
    /// Intersection-over-union of the two independent ranges.
    pub iou: f64,
    /// Test-configuration support positions inside the bounds, with the
    /// curve's delta there (plot markers).
    pub support_test: Vec<(f64, f64)>,
    /// Anchor-configuration support positions inside the bounds.
    pub support_anchor: Vec<(f64, f64)>,
}

/// Sample the relative curve difference of `test` against `anchor` at
/// `n_samples` evenly spaced positions (endpoints included) over the shared
/// range, and locate every sign crossing.
///
/// A BD value near zero can mean "the curves agree" or "large opposite
/// differences cancel"; the RCD curve and its crossings distinguish the two.
pub fn rcd_curve(
    test: &SupportSet,
    anchor: &SupportSet,
    cfg: &BdConfig,
    n_samples: usize,
) -> Result<RcdCurve, AnalysisError> {
    if n_samples < 2 {
        return Err(AnalysisError::InvalidSampleCount { got: n_samples });
    }
    let a = prepare_curve(test, &cfg.independent_transform, cfg.method)?;
    let b = prepare_curve(anchor, &cfg.independent_transform, cfg.method)?;
    let (lo, hi) = interval_overlap(a.range, b.range).ok_or(BdError::NoOverlap {
        a: a.range,
        b: b.range,
    })?;

    let log_diff = |x: f64| -> Result<f64, BdError> {
        Ok(a.poly.evaluate(x)? - b.poly.evaluate(x)?)
    };

    let step = (hi - lo) / (n_samples - 1) as f64;
    let mut samples = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let x = if i == n_samples - 1 { hi } else { lo + step * i as f64 };
        samples.push((x, 100.0 * (powf10(log_diff(x)?) - 1.0)));
    }

    // Sign changes of delta_percent are exactly the sign changes of the
    // continuous log-difference; bisect that for the crossing positions.
    let mut crossings = Vec::new();
    for i in 0..n_samples - 1 {
        let d0 = samples[i].1;
        let d1 = samples[i + 1].1;
        if d0 == 0.0 || d0.signum() == d1.signum() || d1 == 0.0 {
            continue;
        }
        let (mut xl, mut xr) = (samples[i].0, samples[i + 1].0);
        let mut fl = log_diff(xl)?;
        while xr - xl > CROSSING_TOLERANCE {
            let xm = 0.5 * (xl + xr);
            let fm = log_diff(xm)?;
            if fm == 0.0 {
                xl = xm;
                xr = xm;
                break;
            }
            if (fm > 0.0) == (fl > 0.0) {
                xl = xm;
                fl = fm;
            } else {
                xr = xm;
            }
        }
        crossings.push(0.5 * (xl + xr));
    }

    let ia = a.poly.integrate(lo, hi).map_err(BdError::from)?;
    let ib = b.poly.integrate(lo, hi).map_err(BdError::from)?;
    let bd_percent = 100.0 * (powf10((ia - ib) / (hi - lo)) - 1.0);

    let markers = |xs: &[f64]| -> Result<Vec<(f64, f64)>, BdError> {
        let mut out = Vec::new();
        for &x in xs.iter().filter(|&&x| x >= lo && x <= hi) {
            out.push((x, 100.0 * (powf10(log_diff(x)?) - 1.0)));
        }
        Ok(out)
    };

    Ok(RcdCurve {
        support_test: markers(&a.support_x)?,
        support_anchor: markers(&b.support_x)?,
        samples,
        crossings,
        bd_percent,
        bounds: (lo, hi),
        iou: interval_iou(a.range, b.range),
    })
}

/// Relative interpolation error of a sparse subset against all measured
/// points of the same sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct RieReport {
    /// Mean of the per-point relative errors.
    pub mean: f64,
    /// Largest per-point relative error.
    pub max: f64,
    /// `(param, relative_error)` for every point of the full set.
    pub per_point: Vec<(f64, f64)>,
}

/// How well a curve fitted through `subset` reproduces every measured point
/// of `all_points`: per point `|10^q(x_i) - dep_i| / dep_i` with `q` the
/// log10-dependent fit over the raw independent axis.
///
/// `subset` must consist of points of `all_points` (exact match), and every
/// point of `all_points` must lie inside the subset's independent range.
pub fn rie(
    subset: &SupportSet,
    all_points: &SupportSet,
    method: Method,
) -> Result<RieReport, AnalysisError> {
    let report = subset.validate();
    if !report.is_usable() {
        return Err(AnalysisError::Bd(BdError::ValidationFailed {
            config_id: subset.config_id().to_string(),
            findings: report.errors,
        }));
    }
    require_subset(subset, all_points)?;

    let (lo, hi) = subset
        .independent_range()
        .ok_or(AnalysisError::EmptyInput)?;
    for p in all_points.points() {
        if p.independent < lo || p.independent > hi {
            return Err(AnalysisError::OutOfDomain {
                value: p.independent,
                lo,
                hi,
            });
        }
    }

    let pts: Vec<(f64, f64)> = subset
        .points()
        .iter()
        .map(|p| (p.independent, p.dependent.log10()))
        .collect();
    let poly = fit(&pts, method)?;

    let mut per_point = Vec::with_capacity(all_points.len());
    for p in all_points.points() {
        let predicted = powf10(poly.evaluate(p.independent).map_err(BdError::from)?);
        per_point.push((p.param, (predicted - p.dependent).abs() / p.dependent));
    }
    let mean = kahan_sum(per_point.iter().map(|&(_, e)| e)) / per_point.len() as f64;
    let max = per_point.iter().map(|&(_, e)| e).fold(0.0, f64::max);
    Ok(RieReport {
        mean,
        max,
        per_point,
    })
}

fn require_subset(subset: &SupportSet, all_points: &SupportSet) -> Result<(), AnalysisError> {
    for p in subset.points() {
        if !all_points.points().contains(p) {
            return Err(AnalysisError::NotASubset {
                config_id: subset.config_id().to_string(),
                param: p.param,
            });
        }
    }
    Ok(())
}

/// The error a sparse sweep introduces into the BD value:
/// `BD(subsets) - BD(full sets)`, both computed with the same config.
/// Each `*_sub` must consist of points of the corresponding `*_all`.
pub fn subset_error(
    test_sub: &SupportSet,
    anchor_sub: &SupportSet,
    test_all: &SupportSet,
    anchor_all: &SupportSet,
    cfg: &BdConfig,
) -> Result<f64, AnalysisError> {
    require_subset(test_sub, test_all)?;
    require_subset(anchor_sub, anchor_all)?;
    let sub = bd_value(test_sub, anchor_sub, cfg)?;
    let all = bd_value(test_all, anchor_all, cfg)?;
    Ok(sub.bd - all.bd)
}

/// Pooled statistics over a batch of subset errors.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetErrorStats {
    /// Mean of |e|: the typical magnitude a sparse sweep is off by.
    pub mean_abs: f64,
    /// Population standard deviation about the signed mean.
    pub std: f64,
    /// Signed mean: systematic bias of the sparse sweep.
    pub signed_mean: f64,
    pub count: usize,
}

/// Aggregate subset errors from the caller's batch (typically all
/// (sequence, test configuration) cases of a study).
pub fn subset_error_stats(errors: &[f64]) -> Result<SubsetErrorStats, AnalysisError> {
    if errors.is_empty() {
        return Err(AnalysisError::EmptyInput);
    }
    let n = errors.len() as f64;
    let signed_mean = kahan_sum(errors.iter().copied()) / n;
    let mean_abs = kahan_sum(errors.iter().map(|e| e.abs())) / n;
    let var = kahan_sum(errors.iter().map(|e| (e - signed_mean) * (e - signed_mean))) / n;
    Ok(SubsetErrorStats {
        mean_abs,
        std: var.sqrt(),
        signed_mean,
        count: errors.len(),
    })
}

/// The published sparse sweeps for the full param range 22..=37, by count.
/// These are not reproducible by a single rounding rule, so they are
/// looked up verbatim.
const SPARSE_SWEEPS_22_37: [&[i64]; 8] = [
    &[22, 37],
    &[22, 30, 37],
    &[22, 27, 32, 37],
    &[22, 26, 30, 34, 37],
    &[22, 25, 28, 31, 34, 37],
    &[22, 24, 27, 29, 32, 34, 37],
    &[22, 24, 26, 28, 30, 32, 34, 37],
    &[22, 24, 26, 28, 30, 32, 34, 36, 37],
];

/// Choose `count` supporting params out of a contiguous ascending integer
/// sweep: always both endpoints, the rest at equidistant fractional
/// positions rounded to the nearest integer (exact halves round down),
/// deduplicated. For the range 22..=37 with 2..=9 points the published
/// sweeps are returned verbatim.
pub fn select_supporting_params(params: &[i64], count: usize) -> Result<Vec<i64>, AnalysisError> {
    if count < 2 || count > params.len() {
        return Err(AnalysisError::InvalidCount {
            requested: count,
            available: params.len(),
        });
    }
    if params.windows(2).any(|w| w[1] != w[0] + 1) {
        return Err(AnalysisError::NonContiguousParams);
    }

    let first = params[0];
    let last = *params.last().unwrap();
    if first == 22 && last == 37 && (2..=9).contains(&count) {
        return Ok(SPARSE_SWEEPS_22_37[count - 2].to_vec());
    }

    let span = (last - first) as f64;
    let mut out = Vec::with_capacity(count);
    for j in 0..count {
        let pos = first as f64 + span * j as f64 / (count - 1) as f64;
        let rounded = round_ties_down(pos) as i64;
        if out.last() != Some(&rounded) {
            out.push(rounded);
        }
    }
    Ok(out)
}

fn round_ties_down(x: f64) -> f64 {
    let floor = x.floor();
    if x - floor == 0.5 {
        floor
    } else {
        x.round()
    }
}
