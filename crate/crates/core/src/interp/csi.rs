//! Not-a-knot cubic spline slopes via a small dense solve.

use super::{check_points, slopes, DerivativeSet, FitError};

/// Knot derivatives of the C2 cubic spline with not-a-knot end conditions,
/// plus the infinity-norm condition number of the linear system. Needs at
/// least four points (fewer fall back before reaching this).
///
/// The system is written in the knot slopes `v`. Second-derivative
/// continuity at each interior knot gives
///
/// ```text
/// h_{i+1} v_i + 2 (h_i + h_{i+1}) v_{i+1} + h_i v_{i+2}
///     = 3 (h_{i+1} D_i + h_i D_{i+1})
/// ```
///
/// and the not-a-knot rows equate the cubic coefficient of the first two and
/// last two pieces:
///
/// ```text
/// h_1^2 v_0 + (h_1^2 - h_0^2) v_1 - h_0^2 v_2 = 2 (h_1^2 D_0 - h_0^2 D_1)
/// ```
///
/// (mirrored at the right end). Four points make every piece the same
/// cubic, so the spline coincides with the unique global cubic through them.
pub(crate) fn csi_derivatives(points: &[(f64, f64)]) -> Result<(DerivativeSet, f64), FitError> {
    check_points(points, 4)?;
    let n = points.len();
    let (h, d) = slopes(points);

    let mut a = vec![vec![0.0; n]; n];
    let mut rhs = vec![0.0; n];

    a[0][0] = h[1] * h[1];
    a[0][1] = h[1] * h[1] - h[0] * h[0];
    a[0][2] = -(h[0] * h[0]);
    rhs[0] = 2.0 * (h[1] * h[1] * d[0] - h[0] * h[0] * d[1]);

    for k in 1..n - 1 {
        a[k][k - 1] = h[k];
        a[k][k] = 2.0 * (h[k] + h[k - 1]);
        a[k][k + 1] = h[k - 1];
        rhs[k] = 3.0 * (h[k] * d[k - 1] + h[k - 1] * d[k]);
    }

    let hm = h[n - 2];
    let hp = h[n - 3];
    a[n - 1][n - 3] = hm * hm;
    a[n - 1][n - 2] = hm * hm - hp * hp;
    a[n - 1][n - 1] = -(hp * hp);
    rhs[n - 1] = 2.0 * (hm * hm * d[n - 3] - hp * hp * d[n - 2]);

    let norm_a = inf_norm(&a);
    let lu = LuFactors::factor(a).ok_or(FitError::SingularSystem)?;
    let v = lu.solve(&rhs);

    // Condition estimate: assemble the inverse column by column with the
    // factorization already in hand. The systems stay tiny, so the extra
    // n^2 solves cost nothing noticeable.
    let mut inv_rows = vec![0.0; n];
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        let col = lu.solve(&e);
        e[j] = 0.0;
        for i in 0..n {
            inv_rows[i] += col[i].abs();
        }
    }
    let norm_inv = inv_rows.iter().cloned().fold(0.0, f64::max);

    Ok((DerivativeSet::new(v), norm_a * norm_inv))
}

fn inf_norm(a: &[Vec<f64>]) -> f64 {
    a.iter()
        .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// LU factorization with partial pivoting, for the small dense spline
/// systems. Rows are swapped in place; `perm` records the pivot order.
struct LuFactors {
    lu: Vec<Vec<f64>>,
    perm: Vec<usize>,
}

impl LuFactors {
    fn factor(mut a: Vec<Vec<f64>>) -> Option<Self> {
        let n = a.len();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
            if a[pivot_row][col] == 0.0 || !a[pivot_row][col].is_finite() {
                return None;
            }
            a.swap(col, pivot_row);
            perm.swap(col, pivot_row);
            for row in col + 1..n {
                let factor = a[row][col] / a[col][col];
                a[row][col] = factor;
                for k in col + 1..n {
                    a[row][k] -= factor * a[col][k];
                }
            }
        }
        Some(Self { lu: a, perm })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut x: Vec<f64> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 1..n {
            for k in 0..i {
                x[i] -= self.lu[i][k] * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                x[i] -= self.lu[i][k] * x[k];
            }
            x[i] /= self.lu[i][i];
        }
        x
    }
}
