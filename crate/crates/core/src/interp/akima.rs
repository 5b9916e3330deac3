//! Akima knot slopes: slope-difference-weighted averages.

use super::{check_points, slopes, DerivativeSet, FitError};

/// Knot derivative estimates after Akima. Needs at least two points; two
/// points yield the secant at both ends.
///
/// With secant slopes `D` extended by two linearly extrapolated ghost slopes
/// on each side (`D_{-1} = 2 D_0 - D_1` and so on), each knot gets
///
/// ```text
/// v_i = (|D_{i+1} - D_i| D_{i-1} + |D_{i-1} - D_{i-2}| D_i)
///       / (|D_{i+1} - D_i| + |D_{i-1} - D_{i-2}|)
/// ```
///
/// weighting each side's slope by how much the *other* side wiggles. When
/// both weights vanish (locally linear on both sides) the 0/0 is resolved to
/// the average `(D_{i-1} + D_i) / 2`, which reproduces straight lines
/// exactly.
pub fn akima_derivatives(points: &[(f64, f64)]) -> Result<DerivativeSet, FitError> {
    check_points(points, 2)?;
    let n = points.len();
    let (_, delta) = slopes(points);

    if n == 2 {
        return Ok(DerivativeSet::new(vec![delta[0]; 2]));
    }

    // ext[k] = D_{k-2} with two ghost slopes on each side.
    let m = delta.len();
    let mut ext = Vec::with_capacity(m + 4);
    ext.push(0.0);
    ext.push(0.0);
    ext.extend_from_slice(&delta);
    ext[1] = 2.0 * ext[2] - ext[3];
    ext[0] = 2.0 * ext[1] - ext[2];
    ext.push(2.0 * ext[m + 1] - ext[m]);
    ext.push(2.0 * ext[m + 2] - ext[m + 1]);

    let mut v = Vec::with_capacity(n);
    for i in 0..n {
        let d_im2 = ext[i];
        let d_im1 = ext[i + 1];
        let d_i = ext[i + 2];
        let d_ip1 = ext[i + 3];
        let w1 = (d_ip1 - d_i).abs();
        let w2 = (d_im1 - d_im2).abs();
        if w1 + w2 == 0.0 {
            v.push((d_im1 + d_i) / 2.0);
        } else {
            v.push((w1 * d_im1 + w2 * d_i) / (w1 + w2));
        }
    }
    Ok(DerivativeSet::new(v))
}
