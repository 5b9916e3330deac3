//! The BD calculus: mean relative difference of the dependent metric over
//! the shared independent range of two fitted curves.
//!
//! With `q(Y)` the fitted log10-dependent curve of a configuration over the
//! (optionally transformed) independent metric `Y`, the BD value of a test
//! configuration A against an anchor B over the overlap `[Y_lo, Y_hi]` is
//!
//! ```text
//! BD = 10 ^ ( (1 / (Y_hi - Y_lo)) * int_{Y_lo}^{Y_hi} (q_A - q_B) dY ) - 1
//! ```
//!
//! a signed fraction: -0.035 means the test needs 3.5% less of the dependent
//! quantity (bitrate, energy, time) for equal quality. Averaging the
//! difference in the log domain makes the result invariant to joint scaling
//! and turns constant ratios into exact answers; the companion
//! [`linear_domain_mean`] diagnostic shows how misleading a linear-domain
//! average of the same two curves would be.

use crate::curve::{interval_iou, interval_overlap, Finding, FindingCode, SupportSet};
use crate::interp::{fit, EvalError, FitError, FitKind, Method, PiecewisePolynomial};
use crate::transform::{DomainError, MetricTransform};
use thiserror::Error;

/// Condition numbers above this raise an `ILL_CONDITIONED_FIT` warning.
pub const ILL_CONDITION_THRESHOLD: f64 = 1e12;

/// How a BD computation is performed.
#[derive(Debug, Clone, PartialEq)]
pub struct BdConfig {
    /// Interpolation method (two/three points fall back regardless).
    pub method: Method,
    /// Transform applied to the independent metric of every point.
    pub independent_transform: MetricTransform,
    /// Panel count for sampled diagnostics such as [`linear_domain_mean`].
    pub sample_count: usize,
}

impl Default for BdConfig {
    fn default() -> Self {
        Self {
            method: Method::Akima,
            independent_transform: MetricTransform::identity(),
            sample_count: 1000,
        }
    }
}

impl BdConfig {
    pub fn new(method: Method) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }
}

/// Machine-readable warning codes attached to results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WarningCode {
    NonMonotoneDependent,
    IllConditionedFit,
    DiscouragedMetric,
}

impl WarningCode {
    pub const fn as_str(&self) -> &'static str {
        match self {
            WarningCode::NonMonotoneDependent => "NON_MONOTONE_DEPENDENT",
            WarningCode::IllConditionedFit => "ILL_CONDITIONED_FIT",
            WarningCode::DiscouragedMetric => "DISCOURAGED_METRIC",
        }
    }
}

impl std::fmt::Display for WarningCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A non-fatal caveat about a computed result.
#[derive(Debug, Clone, PartialEq)]
pub struct Warning {
    pub code: WarningCode,
    pub message: String,
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

/// Why a BD computation could not produce a value.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BdError {
    #[error("support set '{config_id}' failed validation: {}", format_findings(.findings))]
    ValidationFailed {
        config_id: String,
        findings: Vec<Finding>,
    },
    #[error("support set '{config_id}': {source}")]
    Transform {
        config_id: String,
        source: DomainError,
    },
    #[error("support set '{config_id}': {source}")]
    Fit {
        config_id: String,
        source: FitError,
    },
    #[error("independent ranges {a:?} and {b:?} share no usable overlap")]
    NoOverlap { a: (f64, f64), b: (f64, f64) },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("empty input")]
    EmptyInput,
    #[error("sample count must be at least 2, got {got}")]
    InvalidSampleCount { got: usize },
}

fn format_findings(findings: &[Finding]) -> String {
    findings
        .iter()
        .map(|f| f.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// A BD value plus its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct BdResult {
    /// Signed fraction, always > -1.
    pub bd: f64,
    /// Integration bounds on the (transformed) independent axis.
    pub bounds: (f64, f64),
    /// Intersection-over-union of the two (transformed) independent ranges.
    pub iou: f64,
    /// Method requested by the caller.
    pub method: Method,
    /// What each fit actually produced (test, anchor); two or three points
    /// degrade to `Linear` / `Quadratic`.
    pub fit_kinds: (FitKind, FitKind),
    pub warnings: Vec<Warning>,
}

/// Absolute mean quality difference over the shared log-rate range
/// (the BD-quality variant of the calculus, axes swapped).
#[derive(Debug, Clone, PartialEq)]
pub struct QualityDelta {
    /// Mean difference test minus anchor in (transformed) quality units.
    pub delta: f64,
    /// Integration bounds on the log10-dependent axis.
    pub bounds: (f64, f64),
    /// Intersection-over-union of the two log10-dependent ranges.
    pub iou: f64,
    pub warnings: Vec<Warning>,
}

pub(crate) struct PreparedCurve {
    pub poly: PiecewisePolynomial,
    pub range: (f64, f64),
    pub warnings: Vec<Warning>,
    pub support_x: Vec<f64>,
}

/// Validate, transform and fit one support set: independent values through
/// `transform`, dependent values through log10.
pub(crate) fn prepare_curve(
    set: &SupportSet,
    transform: &MetricTransform,
    method: Method,
) -> Result<PreparedCurve, BdError> {
    let report = set.validate();
    if !report.is_usable() {
        return Err(BdError::ValidationFailed {
            config_id: set.config_id().to_string(),
            findings: report.errors,
        });
    }

    let mut warnings: Vec<Warning> = report
        .warnings
        .iter()
        .filter(|f| f.code == FindingCode::NonMonotoneDependent)
        .map(|f| Warning {
            code: WarningCode::NonMonotoneDependent,
            message: format!("{}: {}", set.config_id(), f.message),
        })
        .collect();

    let mut pts = Vec::with_capacity(set.len());
    for p in set.points() {
        let x = transform
            .apply(p.independent)
            .map_err(|source| BdError::Transform {
                config_id: set.config_id().to_string(),
                source,
            })?;
        pts.push((x, p.dependent.log10()));
    }

    let poly = fit(&pts, method).map_err(|source| BdError::Fit {
        config_id: set.config_id().to_string(),
        source,
    })?;

    if let Some(cond) = poly.condition() {
        if cond > ILL_CONDITION_THRESHOLD {
            warnings.push(Warning {
                code: WarningCode::IllConditionedFit,
                message: format!(
                    "{}: spline system condition {cond:.3e} exceeds {ILL_CONDITION_THRESHOLD:.0e}",
                    set.config_id()
                ),
            });
        }
    }

    let range = poly.domain();
    let support_x = pts.iter().map(|&(x, _)| x).collect();
    Ok(PreparedCurve {
        poly,
        range,
        warnings,
        support_x,
    })
}

/// Validate a support set and fit its curve (transformed independent axis,
/// log10 dependent axis). Sets with error-level findings are refused.
pub fn fit_support_set(
    set: &SupportSet,
    transform: &MetricTransform,
    method: Method,
) -> Result<PiecewisePolynomial, BdError> {
    prepare_curve(set, transform, method).map(|p| p.poly)
}

/// The BD value of `test` against `anchor`.
///
/// Both sets are validated, transformed and fitted; the log10-dependent
/// difference is integrated in closed form over the overlap of the two
/// (transformed) independent ranges. A disjoint or zero-width overlap is
/// [`BdError::NoOverlap`].
pub fn bd_value(test: &SupportSet, anchor: &SupportSet, cfg: &BdConfig) -> Result<BdResult, BdError> {
    let a = prepare_curve(test, &cfg.independent_transform, cfg.method)?;
    let b = prepare_curve(anchor, &cfg.independent_transform, cfg.method)?;

    let (lo, hi) = interval_overlap(a.range, b.range).ok_or(BdError::NoOverlap {
        a: a.range,
        b: b.range,
    })?;

    let ia = a.poly.integrate(lo, hi)?;
    let ib = b.poly.integrate(lo, hi)?;
    let mean_log_delta = (ia - ib) / (hi - lo);

    let mut warnings = a.warnings;
    warnings.extend(b.warnings);

    Ok(BdResult {
        bd: powf10(mean_log_delta) - 1.0,
        bounds: (lo, hi),
        iou: interval_iou(a.range, b.range),
        method: cfg.method,
        fit_kinds: (a.poly.kind(), b.poly.kind()),
        warnings,
    })
}

/// The BD-quality variant: axes swapped, so the independent variable is the
/// log10 of the dependent quantity and the curve value is the (transformed)
/// quality itself, not logarithmized. The result is an absolute mean quality
/// difference over the shared log-rate range.
///
/// Always carries a `DISCOURAGED_METRIC` warning: averaging quality over the
/// rate axis weights operating points unevenly and hides which metric range
/// the difference comes from, so the rate-based [`bd_value`] is the primary
/// quantity.
pub fn bd_quality(
    test: &SupportSet,
    anchor: &SupportSet,
    cfg: &BdConfig,
) -> Result<QualityDelta, BdError> {
    let a = prepare_quality_curve(test, cfg)?;
    let b = prepare_quality_curve(anchor, cfg)?;

    let (lo, hi) = interval_overlap(a.range, b.range).ok_or(BdError::NoOverlap {
        a: a.range,
        b: b.range,
    })?;

    let ia = a.poly.integrate(lo, hi)?;
    let ib = b.poly.integrate(lo, hi)?;

    let mut warnings = vec![Warning {
        code: WarningCode::DiscouragedMetric,
        message: "quality-axis BD averages unevenly over operating points; prefer the \
                  rate-based BD value"
            .to_string(),
    }];
    warnings.extend(a.warnings);
    warnings.extend(b.warnings);

    Ok(QualityDelta {
        delta: (ia - ib) / (hi - lo),
        bounds: (lo, hi),
        iou: interval_iou(a.range, b.range),
        warnings,
    })
}

fn prepare_quality_curve(set: &SupportSet, cfg: &BdConfig) -> Result<PreparedCurve, BdError> {
    let report = set.validate();
    if !report.is_usable() {
        return Err(BdError::ValidationFailed {
            config_id: set.config_id().to_string(),
            findings: report.errors,
        });
    }

    let mut pts = Vec::with_capacity(set.len());
    for p in set.points() {
        let quality = cfg
            .independent_transform
            .apply(p.independent)
            .map_err(|source| BdError::Transform {
                config_id: set.config_id().to_string(),
                source,
            })?;
        pts.push((p.dependent.log10(), quality));
    }
    pts.sort_by(|l, r| l.0.total_cmp(&r.0));
    if pts.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(BdError::ValidationFailed {
            config_id: set.config_id().to_string(),
            findings: vec![Finding {
                code: FindingCode::NonMonotoneIndependent,
                message: "dependent values contain ties, no quality curve over the rate axis"
                    .to_string(),
            }],
        });
    }

    let mut warnings = Vec::new();
    let non_dec = pts.windows(2).all(|w| w[0].1 <= w[1].1);
    let non_inc = pts.windows(2).all(|w| w[0].1 >= w[1].1);
    if !(non_dec || non_inc) {
        warnings.push(Warning {
            code: WarningCode::NonMonotoneDependent,
            message: format!(
                "{}: quality is not monotone over the rate axis",
                set.config_id()
            ),
        });
    }

    let poly = fit(&pts, cfg.method).map_err(|source| BdError::Fit {
        config_id: set.config_id().to_string(),
        source,
    })?;
    if let Some(cond) = poly.condition() {
        if cond > ILL_CONDITION_THRESHOLD {
            warnings.push(Warning {
                code: WarningCode::IllConditionedFit,
                message: format!(
                    "{}: spline system condition {cond:.3e} exceeds {ILL_CONDITION_THRESHOLD:.0e}",
                    set.config_id()
                ),
            });
        }
    }

    let range = poly.domain();
    let support_x = pts.iter().map(|&(x, _)| x).collect();
    Ok(PreparedCurve {
        poly,
        range,
        warnings,
        support_x,
    })
}

/// Linear-domain counterpart of [`bd_value`], as a diagnostic: the mean of
/// `10^(q_A - q_B) - 1` sampled over the overlap with composite Simpson
/// quadrature on `cfg.sample_count` panels (rounded up to even). For curves
/// with a constant ratio it agrees with the BD value; for varying ratios it
/// is dominated by the large-dependent end, which is exactly why the BD
/// averages in the log domain.
pub fn linear_domain_mean(
    test: &SupportSet,
    anchor: &SupportSet,
    cfg: &BdConfig,
) -> Result<f64, BdError> {
    if cfg.sample_count < 2 {
        return Err(BdError::InvalidSampleCount {
            got: cfg.sample_count,
        });
    }
    let a = prepare_curve(test, &cfg.independent_transform, cfg.method)?;
    let b = prepare_curve(anchor, &cfg.independent_transform, cfg.method)?;
    let (lo, hi) = interval_overlap(a.range, b.range).ok_or(BdError::NoOverlap {
        a: a.range,
        b: b.range,
    })?;

    let panels = cfg.sample_count + cfg.sample_count % 2;
    let h = (hi - lo) / panels as f64;
    let f = |x: f64| -> Result<f64, BdError> {
        Ok(powf10(a.poly.evaluate(x)? - b.poly.evaluate(x)?) - 1.0)
    };
    let mut acc = f(lo)? + f(hi)?;
    for i in 1..panels {
        let x = lo + h * i as f64;
        acc += f(x)? * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    let integral = acc * h / 3.0;
    Ok(integral / (hi - lo))
}

/// Arithmetic mean of BD values over sequences, with compensated summation.
/// BD values average per test configuration across sequences, unweighted.
pub fn average_bd(values: &[f64]) -> Result<f64, BdError> {
    if values.is_empty() {
        return Err(BdError::EmptyInput);
    }
    Ok(kahan_sum(values.iter().copied()) / values.len() as f64)
}

/// Neumaier-compensated summation.
pub(crate) fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        comp += if sum.abs() >= v.abs() {
            (sum - t) + v
        } else {
            (v - t) + sum
        };
        sum = t;
    }
    sum + comp
}

pub(crate) fn powf10(x: f64) -> f64 {
    10f64.powf(x)
}
