//! Bjontegaard-Delta calculus for rate-distortion curves.
//!
//! Two codec configurations measured at a handful of operating points each
//! yield two sparse curves of quality versus rate. This crate fits an
//! interpolating polynomial through each curve on a log10 rate axis,
//! integrates the difference over the shared quality range, and reports the
//! mean relative rate difference
//!
//! ```text
//! BD = 10^(mean log10 rate difference) - 1
//! ```
//!
//! so `-0.25` reads "the test configuration needs 25% less rate than the
//! anchor for the same quality". Three interpolation methods are provided:
//! cubic spline interpolation with not-a-knot boundaries ([`Method::Csi`]),
//! monotonicity-preserving piecewise cubic Hermite ([`Method::Pchip`]), and
//! Akima's locally weighted slopes ([`Method::Akima`], the default).
//!
//! Around the headline number live the diagnostics that tell you whether it
//! can be trusted: the relative curve difference over the whole quality
//! range with its sign crossings ([`rcd_curve`]), the relative interpolation
//! error of a sparse sweep ([`rie`]), the BD error introduced by measuring
//! fewer points ([`subset_error`]), and the overlap quality of the two
//! curves' ranges ([`range_iou`]).
//!
//! ```
//! use bjontegaard::{bd_value, BdConfig, Method, SupportSet};
//!
//! let anchor = SupportSet::from_values(
//!     "anchor", "seq01",
//!     &[(30.0, 100.0), (34.0, 210.0), (38.0, 500.0), (42.0, 1200.0)],
//! );
//! let halved: Vec<(f64, f64)> = anchor
//!     .points()
//!     .iter()
//!     .map(|p| (p.independent, p.dependent / 2.0))
//!     .collect();
//! let test = SupportSet::from_values("test", "seq01", &halved);
//!
//! let r = bd_value(&test, &anchor, &BdConfig::new(Method::Akima)).unwrap();
//! assert!((r.bd - (-0.5)).abs() < 1e-12);
//! ```

pub mod analysis;
pub mod bd;
pub mod curve;
pub mod interp;
pub mod transform;

pub use analysis::{
    rcd_curve, rie, select_supporting_params, subset_error, subset_error_stats, AnalysisError,
    RcdCurve, RieReport, SubsetErrorStats,
};
pub use bd::{
    average_bd, bd_quality, bd_value, fit_support_set, linear_domain_mean, BdConfig, BdError,
    BdResult, QualityDelta, Warning, WarningCode,
};
pub use curve::{
    overlap_bounds, range_iou, Finding, FindingCode, OverlapError, PerformancePoint, SupportSet,
    ValidationReport,
};
pub use interp::{fit, DerivativeSet, EvalError, FitError, FitKind, Method, PiecewisePolynomial};
pub use transform::{DomainError, MetricTransform, TransformKind};
