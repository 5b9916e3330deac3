//! Metric transforms applied before interpolation.
//!
//! Saturating quality metrics (SSIM, VMAF) bunch up near their upper bound,
//! which makes curve fits over them nearly ill-posed. Mapping them to a
//! decibel-like scale first spreads the operating range out:
//!
//! | kind        | mapping                      | domain                 |
//! |-------------|------------------------------|------------------------|
//! | `Identity`  | `v`                          | all reals              |
//! | `LogSsim`   | `-10 * log10(1 - v)`         | `[0, 1 - eps]`         |
//! | `LogVmaf`   | `-10 * log10(1 - v / 100)`   | `[0, 100 * (1 - eps)]` |
//! | `Log10`     | `log10(v)`                   | `(0, inf)`             |
//!
//! Values past the saturation guard are a hard [`DomainError`] rather than
//! being clamped silently: a saturated measurement carries no usable ordering
//! information, so the caller has to decide whether to drop or clamp it.

use thiserror::Error;

/// Value fell outside the domain of the requested transform.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("value {value} outside {transform} domain [{lo}, {hi}]")]
pub struct DomainError {
    pub transform: &'static str,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

/// The supported axis mappings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    /// Pass the value through unchanged.
    Identity,
    /// `-10 * log10(1 - v)` for SSIM-like metrics saturating at 1.
    LogSsim,
    /// `-10 * log10(1 - v / 100)` for VMAF-like metrics saturating at 100.
    LogVmaf,
    /// Plain `log10(v)` for strictly positive magnitudes such as bitrates.
    Log10,
}

/// A metric transform plus its saturation guard.
///
/// `clamp_epsilon` bounds how close to the saturation point an input may get:
/// `LogSsim` rejects values above `1 - clamp_epsilon`, `LogVmaf` above
/// `100 * (1 - clamp_epsilon)`. Callers that want clamping semantics must
/// clamp before calling [`MetricTransform::apply`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricTransform {
    pub kind: TransformKind,
    pub clamp_epsilon: f64,
}

impl MetricTransform {
    pub const DEFAULT_CLAMP_EPSILON: f64 = 1e-6;

    pub const fn new(kind: TransformKind) -> Self {
        Self {
            kind,
            clamp_epsilon: Self::DEFAULT_CLAMP_EPSILON,
        }
    }

    pub const fn identity() -> Self {
        Self::new(TransformKind::Identity)
    }

    pub const fn with_clamp_epsilon(mut self, clamp_epsilon: f64) -> Self {
        self.clamp_epsilon = clamp_epsilon;
        self
    }

    pub const fn is_identity(&self) -> bool {
        matches!(self.kind, TransformKind::Identity)
    }

    /// Stable lowercase name, used in CLI flags and report metadata.
    pub const fn label(&self) -> &'static str {
        match self.kind {
            TransformKind::Identity => "none",
            TransformKind::LogSsim => "log-ssim",
            TransformKind::LogVmaf => "log-vmaf",
            TransformKind::Log10 => "log10",
        }
    }

    /// Map one value, rejecting anything outside the transform's domain.
    ///
    /// All mappings are strictly increasing on their domain, so applying a
    /// transform to a strictly increasing series keeps it strictly
    /// increasing (up to floating-point collapse of near-equal inputs).
    pub fn apply(&self, value: f64) -> Result<f64, DomainError> {
        let eps = self.clamp_epsilon;
        match self.kind {
            TransformKind::Identity => Ok(value),
            TransformKind::LogSsim => {
                let hi = 1.0 - eps;
                if !(0.0..=hi).contains(&value) {
                    return Err(DomainError {
                        transform: "log-ssim",
                        value,
                        lo: 0.0,
                        hi,
                    });
                }
                Ok(-10.0 * (1.0 - value).log10())
            }
            TransformKind::LogVmaf => {
                let hi = 100.0 * (1.0 - eps);
                if !(0.0..=hi).contains(&value) {
                    return Err(DomainError {
                        transform: "log-vmaf",
                        value,
                        lo: 0.0,
                        hi,
                    });
                }
                Ok(-10.0 * (1.0 - value / 100.0).log10())
            }
            TransformKind::Log10 => {
                if !(value.is_finite() && value > 0.0) {
                    return Err(DomainError {
                        transform: "log10",
                        value,
                        lo: 0.0,
                        hi: f64::INFINITY,
                    });
                }
                Ok(value.log10())
            }
        }
    }
}

impl Default for MetricTransform {
    fn default() -> Self {
        Self::identity()
    }
}
