//! Support sets: measured operating points of one codec configuration on one
//! sequence, and the validity checks BD calculus depends on.
//!
//! A [`SupportSet`] stores its points sorted by the independent metric; the
//! order in which params arrived is kept alongside, since a quality metric
//! that is not monotone in the control parameter invalidates the whole set
//! (there is no function to interpolate). [`SupportSet::validate`] reports
//! everything that blocks or degrades a BD computation instead of failing at
//! construction, so callers can surface all findings at once.

use thiserror::Error;

/// One measured operating point.
///
/// `param` is the ordinal control value (QP, crf, bitrate target index) the
/// encoder was driven with; `independent` and `dependent` are the two metric
/// values the BD calculus runs over. For a usable point all three are finite
/// and `dependent > 0` (it gets logarithmized); violations are reported by
/// [`SupportSet::validate`], not enforced here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerformancePoint {
    pub param: f64,
    pub independent: f64,
    pub dependent: f64,
}

/// Machine-readable validation finding codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FindingCode {
    NonMonotoneIndependent,
    NonMonotoneDependent,
    TooFewPoints,
    NonPositiveDependent,
    NonFiniteValue,
    DuplicateParam,
}

impl FindingCode {
    pub const fn as_str(&self) -> &'static str {
        match self {
            FindingCode::NonMonotoneIndependent => "NON_MONOTONE_INDEPENDENT",
            FindingCode::NonMonotoneDependent => "NON_MONOTONE_DEPENDENT",
            FindingCode::TooFewPoints => "TOO_FEW_POINTS",
            FindingCode::NonPositiveDependent => "NON_POSITIVE_DEPENDENT",
            FindingCode::NonFiniteValue => "NON_FINITE_VALUE",
            FindingCode::DuplicateParam => "DUPLICATE_PARAM",
        }
    }
}

impl std::fmt::Display for FindingCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A single validation finding: a code plus a human-readable detail.
#[derive(Debug, Clone, PartialEq)]
pub struct Finding {
    pub code: FindingCode,
    pub message: String,
}

impl std::fmt::Display for Finding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

/// Outcome of validating a support set. Errors block BD computation,
/// warnings degrade interpretability but not computability.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub errors: Vec<Finding>,
    pub warnings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_usable(&self) -> bool {
        self.errors.is_empty()
    }
}

/// The supporting points of one (configuration, sequence) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportSet {
    config_id: String,
    sequence_id: String,
    points: Vec<PerformancePoint>,
    param_order: Vec<f64>,
}

impl SupportSet {
    /// Build a set from measured points. Points are sorted ascending by the
    /// independent metric; the params in arrival order are retained so the
    /// original sweep is still recoverable.
    pub fn new(
        config_id: impl Into<String>,
        sequence_id: impl Into<String>,
        mut points: Vec<PerformancePoint>,
    ) -> Self {
        let param_order = points.iter().map(|p| p.param).collect();
        points.sort_by(|a, b| a.independent.total_cmp(&b.independent));
        Self {
            config_id: config_id.into(),
            sequence_id: sequence_id.into(),
            points,
            param_order,
        }
    }

    /// Convenience constructor for (independent, dependent) pairs; params are
    /// assigned 1..=n in the given order.
    pub fn from_values(
        config_id: impl Into<String>,
        sequence_id: impl Into<String>,
        values: &[(f64, f64)],
    ) -> Self {
        let points = values
            .iter()
            .enumerate()
            .map(|(i, &(independent, dependent))| PerformancePoint {
                param: (i + 1) as f64,
                independent,
                dependent,
            })
            .collect();
        Self::new(config_id, sequence_id, points)
    }

    pub fn config_id(&self) -> &str {
        &self.config_id
    }

    pub fn sequence_id(&self) -> &str {
        &self.sequence_id
    }

    /// Points sorted ascending by independent value.
    pub fn points(&self) -> &[PerformancePoint] {
        &self.points
    }

    /// Params in the order the points were supplied.
    pub fn param_order(&self) -> &[f64] {
        &self.param_order
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Range of the independent metric, `None` for an empty set.
    pub fn independent_range(&self) -> Option<(f64, f64)> {
        match (self.points.first(), self.points.last()) {
            (Some(a), Some(b)) => Some((a.independent, b.independent)),
            _ => None,
        }
    }

    /// The subset of points whose param matches one of `params` (bitwise
    /// f64 identity), as a new set with the same ids.
    pub fn restrict_to_params(&self, params: &[f64]) -> SupportSet {
        let points: Vec<PerformancePoint> = self
            .points
            .iter()
            .filter(|p| params.iter().any(|q| q.total_cmp(&p.param).is_eq()))
            .copied()
            .collect();
        SupportSet::new(self.config_id.clone(), self.sequence_id.clone(), points)
    }

    /// Check every precondition BD calculus has on this set. See
    /// [`validate_support_set`] for the rules.
    pub fn validate(&self) -> ValidationReport {
        validate_support_set(self)
    }
}

/// Validate a support set.
///
/// Errors (BD cannot be computed):
/// - `TOO_FEW_POINTS`: fewer than 2 points.
/// - `NON_FINITE_VALUE`: any param or metric value is NaN or infinite.
/// - `NON_POSITIVE_DEPENDENT`: the dependent metric gets logarithmized, so
///   every value must be > 0.
/// - `NON_MONOTONE_INDEPENDENT`: ties in the independent metric, or an
///   independent metric that is not strictly monotone as a function of the
///   control param (noisy measurements); either way no single-valued curve
///   exists over the independent axis.
/// - `DUPLICATE_PARAM`: the same param measured twice.
///
/// Warnings (BD is computable but needs care):
/// - `NON_MONOTONE_DEPENDENT`: the dependent metric is not monotone over the
///   independent metric; the fitted curve then has interior extrema and the
///   BD value averages over them. Constant runs count as monotone.
pub fn validate_support_set(set: &SupportSet) -> ValidationReport {
    let mut report = ValidationReport::default();
    let pts = set.points();

    if pts.len() < 2 {
        report.errors.push(Finding {
            code: FindingCode::TooFewPoints,
            message: format!("need at least 2 points, got {}", pts.len()),
        });
    }

    let mut finite = true;
    for p in pts {
        if !(p.param.is_finite() && p.independent.is_finite() && p.dependent.is_finite()) {
            finite = false;
            report.errors.push(Finding {
                code: FindingCode::NonFiniteValue,
                message: format!(
                    "non-finite value at param {}: independent {}, dependent {}",
                    p.param, p.independent, p.dependent
                ),
            });
        }
    }

    for p in pts {
        if p.dependent.is_finite() && p.dependent <= 0.0 {
            report.errors.push(Finding {
                code: FindingCode::NonPositiveDependent,
                message: format!("dependent value {} at param {} is not > 0", p.dependent, p.param),
            });
        }
    }

    if pts.windows(2).any(|w| w[0].independent == w[1].independent) {
        report.errors.push(Finding {
            code: FindingCode::NonMonotoneIndependent,
            message: "independent values contain ties".to_string(),
        });
    }

    let mut params_unique = true;
    let mut sorted_params: Vec<f64> = pts.iter().map(|p| p.param).collect();
    sorted_params.sort_by(f64::total_cmp);
    if sorted_params.windows(2).any(|w| w[0] == w[1]) {
        params_unique = false;
        report.errors.push(Finding {
            code: FindingCode::DuplicateParam,
            message: "the same param value appears more than once".to_string(),
        });
    }

    // With points ordered by independent value, the param sequence must run
    // strictly one way; otherwise the independent metric is not monotone in
    // the control parameter and no interpolation order exists.
    if finite && params_unique && pts.len() >= 2 {
        let inc = pts.windows(2).all(|w| w[0].param < w[1].param);
        let dec = pts.windows(2).all(|w| w[0].param > w[1].param);
        if !(inc || dec) {
            report.errors.push(Finding {
                code: FindingCode::NonMonotoneIndependent,
                message: "independent metric is not monotone as a function of the param sweep"
                    .to_string(),
            });
        }
    }

    if finite && pts.len() >= 2 {
        let non_dec = pts.windows(2).all(|w| w[0].dependent <= w[1].dependent);
        let non_inc = pts.windows(2).all(|w| w[0].dependent >= w[1].dependent);
        if !(non_dec || non_inc) {
            report.warnings.push(Finding {
                code: FindingCode::NonMonotoneDependent,
                message: "dependent metric is not monotone over the independent metric"
                    .to_string(),
            });
        }
    }

    report
}

/// No usable shared range between two support sets.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OverlapError {
    #[error("independent ranges [{:?}] and [{:?}] do not overlap", a, b)]
    NoOverlap { a: (f64, f64), b: (f64, f64) },
    #[error("cannot compute overlap of an empty support set")]
    EmptyInput,
}

/// Integration bounds shared by two sets: the intersection of their
/// independent ranges. A single shared point (zero width) counts as no
/// overlap since nothing can be integrated over it.
pub fn overlap_bounds(a: &SupportSet, b: &SupportSet) -> Result<(f64, f64), OverlapError> {
    let ra = a.independent_range().ok_or(OverlapError::EmptyInput)?;
    let rb = b.independent_range().ok_or(OverlapError::EmptyInput)?;
    interval_overlap(ra, rb).ok_or(OverlapError::NoOverlap { a: ra, b: rb })
}

/// Intersection-over-union of the two sets' independent ranges, in [0, 1].
/// 1.0 exactly when the ranges coincide, 0.0 when they are disjoint.
pub fn range_iou(a: &SupportSet, b: &SupportSet) -> f64 {
    match (a.independent_range(), b.independent_range()) {
        (Some(ra), Some(rb)) => interval_iou(ra, rb),
        _ => 0.0,
    }
}

pub(crate) fn interval_overlap(a: (f64, f64), b: (f64, f64)) -> Option<(f64, f64)> {
    let lo = a.0.max(b.0);
    let hi = a.1.min(b.1);
    if lo < hi {
        Some((lo, hi))
    } else {
        None
    }
}

pub(crate) fn interval_iou(a: (f64, f64), b: (f64, f64)) -> f64 {
    let inter = (a.1.min(b.1) - a.0.max(b.0)).max(0.0);
    let union = (a.1 - a.0) + (b.1 - b.0) - inter;
    if union > 0.0 {
        inter / union
    } else if a == b {
        // Two identical zero-width ranges.
        1.0
    } else {
        0.0
    }
}
