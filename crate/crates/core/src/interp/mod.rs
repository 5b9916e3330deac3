//! Piecewise-cubic interpolation over strictly increasing knots.
//!
//! All methods produce the same representation: per interval `i` a cubic in
//! the local offset `t = x - x_i`,
//!
//! ```text
//! p_i(t) = a_i + b_i t + c_i t^2 + d_i t^3,    0 <= t <= h_i = x_{i+1} - x_i
//! ```
//!
//! For the Hermite-form methods the coefficients follow from the knot values
//! and knot derivatives `v`:
//!
//! ```text
//! a_i = p_i        b_i = v_i
//! c_i = (3 D_i - 2 v_i - v_{i+1}) / h_i
//! d_i = (v_i + v_{i+1} - 2 D_i) / h_i^2        D_i = (p_{i+1} - p_i) / h_i
//! ```
//!
//! The methods differ only in how `v` is chosen:
//!
//! - **CSI**: the classic C2 cubic spline with not-a-knot end conditions
//!   (third derivative continuous across the first and last interior knot).
//!   Smoothest, but rings when slopes change abruptly.
//! - **PCHIP**: weighted-harmonic-mean slopes with Fritsch-Carlson boundary
//!   clipping; monotone data gives a monotone curve and every piece stays
//!   inside the bounding box of its endpoints.
//! - **Akima**: slope-difference-weighted average of neighbor slopes with
//!   linearly extrapolated ghost slopes at the ends; local and less prone to
//!   flattening than PCHIP while still damping overshoot.
//!
//! Two and three points degrade to the unique line / parabola for every
//! method; the fitted kind records what was actually used. Definite
//! integrals are evaluated in closed form from the antiderivative of each
//! piece.

mod akima;
mod csi;
mod pchip;

pub use akima::akima_derivatives;
pub use pchip::pchip_derivatives;

use thiserror::Error;

/// Interpolation method a caller can request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Csi,
    Pchip,
    Akima,
}

impl Method {
    pub const fn as_str(&self) -> &'static str {
        match self {
            Method::Csi => "csi",
            Method::Pchip => "pchip",
            Method::Akima => "akima",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csi" => Ok(Method::Csi),
            "pchip" => Ok(Method::Pchip),
            "akima" => Ok(Method::Akima),
            other => Err(format!("unknown interpolation method '{other}'")),
        }
    }
}

/// What a fit actually produced; `Linear` and `Quadratic` are the forced
/// fallbacks for two and three points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitKind {
    Csi,
    Pchip,
    Akima,
    Linear,
    Quadratic,
}

impl FitKind {
    pub const fn as_str(&self) -> &'static str {
        match self {
            FitKind::Csi => "csi",
            FitKind::Pchip => "pchip",
            FitKind::Akima => "akima",
            FitKind::Linear => "linear",
            FitKind::Quadratic => "quadratic",
        }
    }
}

impl std::fmt::Display for FitKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Knot derivative estimates produced by the slope rules.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeSet {
    values: Vec<f64>,
}

impl DerivativeSet {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl std::ops::Index<usize> for DerivativeSet {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

/// The input cannot support a fit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("degenerate input: need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("degenerate input: x values not strictly increasing at index {index} ({left} >= {right})")]
    NotStrictlyIncreasing { index: usize, left: f64, right: f64 },
    #[error("degenerate input: non-finite value at index {index}")]
    NonFinite { index: usize },
    #[error("spline system is singular")]
    SingularSystem,
    #[error("invalid piecewise polynomial parts: {0}")]
    InvalidParts(&'static str),
}

/// Evaluation outside the fitted domain or over an empty/inverted range.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("x = {x} outside fitted domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },
    #[error("invalid integration range [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },
}

/// A fitted piecewise cubic: knots plus local-offset coefficients per piece.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePolynomial {
    knots: Vec<f64>,
    coeffs: Vec<[f64; 4]>,
    kind: FitKind,
    condition: Option<f64>,
}

impl PiecewisePolynomial {
    /// Assemble a polynomial from raw parts. `coeffs[i]` is `[a, b, c, d]`
    /// for the interval `[knots[i], knots[i+1]]` in the local offset.
    pub fn from_parts(
        knots: Vec<f64>,
        coeffs: Vec<[f64; 4]>,
        kind: FitKind,
    ) -> Result<Self, FitError> {
        if knots.len() < 2 {
            return Err(FitError::InvalidParts("need at least two knots"));
        }
        if coeffs.len() != knots.len() - 1 {
            return Err(FitError::InvalidParts("need one coefficient row per interval"));
        }
        if knots.iter().any(|k| !k.is_finite())
            || coeffs.iter().flatten().any(|c| !c.is_finite())
        {
            return Err(FitError::InvalidParts("non-finite part"));
        }
        if knots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FitError::InvalidParts("knots not strictly increasing"));
        }
        Ok(Self {
            knots,
            coeffs,
            kind,
            condition: None,
        })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// `[a, b, c, d]` rows, one per interval.
    pub fn coefficients(&self) -> &[[f64; 4]] {
        &self.coeffs
    }

    pub fn kind(&self) -> FitKind {
        self.kind
    }

    /// Infinity-norm condition number of the spline system, for CSI fits.
    pub fn condition(&self) -> Option<f64> {
        self.condition
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[0], *self.knots.last().unwrap())
    }

    fn piece_index(&self, x: f64) -> usize {
        // First knot strictly greater than x, minus one; the last interval
        // also owns its right endpoint.
        let idx = self.knots.partition_point(|k| *k <= x);
        idx.saturating_sub(1).min(self.coeffs.len() - 1)
    }

    /// Evaluate at `x`, which must lie inside the fitted domain.
    pub fn evaluate(&self, x: f64) -> Result<f64, EvalError> {
        let (lo, hi) = self.domain();
        if !(x >= lo && x <= hi) {
            return Err(EvalError::OutOfDomain { x, lo, hi });
        }
        let i = self.piece_index(x);
        let t = x - self.knots[i];
        let [a, b, c, d] = self.coeffs[i];
        Ok(a + t * (b + t * (c + t * d)))
    }

    /// Evaluate the derivative of the given order (0..=3) at `x`.
    pub fn derivative(&self, x: f64, order: usize) -> Result<f64, EvalError> {
        let (lo, hi) = self.domain();
        if !(x >= lo && x <= hi) {
            return Err(EvalError::OutOfDomain { x, lo, hi });
        }
        let i = self.piece_index(x);
        let t = x - self.knots[i];
        let [a, b, c, d] = self.coeffs[i];
        Ok(match order {
            0 => a + t * (b + t * (c + t * d)),
            1 => b + t * (2.0 * c + t * 3.0 * d),
            2 => 2.0 * c + 6.0 * d * t,
            3 => 6.0 * d,
            _ => 0.0,
        })
    }

    /// Definite integral over `[lo, hi]`, evaluated in closed form from the
    /// per-piece antiderivative. Both ends must lie inside the domain and
    /// `lo <= hi`; `lo == hi` integrates to zero. Splitting a range at any
    /// interior point and summing reproduces the whole to rounding error.
    pub fn integrate(&self, lo: f64, hi: f64) -> Result<f64, EvalError> {
        let (dlo, dhi) = self.domain();
        if !(lo <= hi) {
            return Err(EvalError::InvalidRange { lo, hi });
        }
        if !(lo >= dlo && hi <= dhi) {
            let x = if lo < dlo { lo } else { hi };
            return Err(EvalError::OutOfDomain { x, lo: dlo, hi: dhi });
        }
        if lo == hi {
            return Ok(0.0);
        }
        let mut total = 0.0;
        for i in 0..self.coeffs.len() {
            let left = self.knots[i];
            let right = self.knots[i + 1];
            if right <= lo {
                continue;
            }
            if left >= hi {
                break;
            }
            let t0 = lo.max(left) - left;
            let t1 = hi.min(right) - left;
            let [a, b, c, d] = self.coeffs[i];
            let anti = |t: f64| t * (a + t * (b / 2.0 + t * (c / 3.0 + t * d / 4.0)));
            total += anti(t1) - anti(t0);
        }
        Ok(total)
    }
}

/// Fit a curve through `points` (strictly increasing in x) with the given
/// method. Two points force a linear fit and three points the unique
/// parabola, whatever the method; the result records the kind actually used.
pub fn fit(points: &[(f64, f64)], method: Method) -> Result<PiecewisePolynomial, FitError> {
    check_points(points, 2)?;
    let n = points.len();

    if n == 2 {
        return fit_linear(points);
    }
    if n == 3 {
        return fit_quadratic(points);
    }

    match method {
        Method::Csi => {
            let (derivs, condition) = csi::csi_derivatives(points)?;
            let mut poly = hermite_from_derivatives(points, derivs.as_slice(), FitKind::Csi)?;
            poly.condition = Some(condition);
            Ok(poly)
        }
        Method::Pchip => {
            let derivs = pchip_derivatives(points)?;
            hermite_from_derivatives(points, derivs.as_slice(), FitKind::Pchip)
        }
        Method::Akima => {
            let derivs = akima_derivatives(points)?;
            hermite_from_derivatives(points, derivs.as_slice(), FitKind::Akima)
        }
    }
}

pub(crate) fn check_points(points: &[(f64, f64)], need: usize) -> Result<(), FitError> {
    if points.len() < need {
        return Err(FitError::TooFewPoints {
            need,
            got: points.len(),
        });
    }
    for (i, &(x, y)) in points.iter().enumerate() {
        if !(x.is_finite() && y.is_finite()) {
            return Err(FitError::NonFinite { index: i });
        }
    }
    for (i, w) in points.windows(2).enumerate() {
        if w[0].0 >= w[1].0 {
            return Err(FitError::NotStrictlyIncreasing {
                index: i,
                left: w[0].0,
                right: w[1].0,
            });
        }
    }
    Ok(())
}

fn fit_linear(points: &[(f64, f64)]) -> Result<PiecewisePolynomial, FitError> {
    let (x0, y0) = points[0];
    let (x1, y1) = points[1];
    let slope = (y1 - y0) / (x1 - x0);
    PiecewisePolynomial::from_parts(vec![x0, x1], vec![[y0, slope, 0.0, 0.0]], FitKind::Linear)
}

fn fit_quadratic(points: &[(f64, f64)]) -> Result<PiecewisePolynomial, FitError> {
    // Newton form through three points, re-expressed per interval.
    let (x0, y0) = points[0];
    let (x1, y1) = points[1];
    let (x2, y2) = points[2];
    let h0 = x1 - x0;
    let c1 = (y1 - y0) / h0;
    let c2 = (((y2 - y1) / (x2 - x1)) - c1) / (x2 - x0);
    let coeffs = vec![
        [y0, c1 - c2 * h0, c2, 0.0],
        [y1, c1 + c2 * h0, c2, 0.0],
    ];
    PiecewisePolynomial::from_parts(vec![x0, x1, x2], coeffs, FitKind::Quadratic)
}

/// Build the Hermite-form piecewise cubic from knot values and derivatives.
pub(crate) fn hermite_from_derivatives(
    points: &[(f64, f64)],
    v: &[f64],
    kind: FitKind,
) -> Result<PiecewisePolynomial, FitError> {
    debug_assert_eq!(points.len(), v.len());
    let n = points.len();
    let mut knots = Vec::with_capacity(n);
    let mut coeffs = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let (x0, y0) = points[i];
        let (x1, y1) = points[i + 1];
        let h = x1 - x0;
        let delta = (y1 - y0) / h;
        knots.push(x0);
        coeffs.push([
            y0,
            v[i],
            (3.0 * delta - 2.0 * v[i] - v[i + 1]) / h,
            (v[i] + v[i + 1] - 2.0 * delta) / (h * h),
        ]);
    }
    knots.push(points[n - 1].0);
    PiecewisePolynomial::from_parts(knots, coeffs, kind)
}

pub(crate) fn slopes(points: &[(f64, f64)]) -> (Vec<f64>, Vec<f64>) {
    let mut h = Vec::with_capacity(points.len() - 1);
    let mut delta = Vec::with_capacity(points.len() - 1);
    for w in points.windows(2) {
        let dx = w[1].0 - w[0].0;
        h.push(dx);
        delta.push((w[1].1 - w[0].1) / dx);
    }
    (h, delta)
}
