//! PCHIP knot slopes: shape-preserving weighted harmonic means.

use super::{check_points, slopes, DerivativeSet, FitError};

/// Knot derivative estimates for piecewise cubic Hermite interpolation that
/// preserves monotonicity (PCHIP). Needs at least three points.
///
/// Interior knots use the spacing-weighted harmonic mean of the adjacent
/// secant slopes,
///
/// ```text
/// v_i = D_{i-1} D_i / (alpha D_i + (1 - alpha) D_{i-1})
/// alpha = (h_{i-1} + 2 h_i) / (3 (h_{i-1} + h_i))
/// ```
///
/// set to zero whenever the two slopes differ in sign or either vanishes, so
/// local extrema stay at knots. Boundary knots use the one-sided three-point
/// estimate clipped into the monotone region (Fritsch-Carlson): a slope whose
/// sign disagrees with the first secant becomes 0, and when the first two
/// secants disagree in sign the magnitude is capped at `3 |D|`. Together with
/// the interior rule (which yields `|v_i| <= 3 min(|D_{i-1}|, |D_i|)`) every
/// piece then lies in the monotone region, so monotone data produces a
/// monotone curve and every piece is bounded by its endpoint values.
pub fn pchip_derivatives(points: &[(f64, f64)]) -> Result<DerivativeSet, FitError> {
    check_points(points, 3)?;
    let n = points.len();
    let (h, delta) = slopes(points);

    let mut v = vec![0.0; n];
    for i in 1..n - 1 {
        let dl = delta[i - 1];
        let dr = delta[i];
        if dl * dr > 0.0 {
            let alpha = (h[i - 1] + 2.0 * h[i]) / (3.0 * (h[i - 1] + h[i]));
            v[i] = dl * dr / (alpha * dr + (1.0 - alpha) * dl);
        }
    }
    v[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
    v[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    Ok(DerivativeSet::new(v))
}

/// One-sided parabolic slope estimate at a boundary, clipped so the boundary
/// piece cannot overshoot: `d0` is the secant of the boundary interval, `d1`
/// the next one inward.
fn edge_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let raw = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if sign(raw) != sign(d0) {
        0.0
    } else if sign(d0) != sign(d1) && raw.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        raw
    }
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}
