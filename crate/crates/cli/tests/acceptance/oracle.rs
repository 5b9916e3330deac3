//! Independent reference implementations the acceptance checks compare
//! against. Nothing in here calls into the library crates: slopes come from
//! the literal textbook formulas, spline coefficients from a dense linear
//! solve, and integrals from adaptive quadrature.

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, left) = simpson(f, a, fa, m, fm);
        let (rm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, left, lm, f(lm), 0.5 * tol, depth - 1)
            + recurse(f, m, fm, b, fb, right, rm, f(rm), 0.5 * tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    let (fa, fb) = (f(a), f(b));
    let (m, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, f(m), tol, 48)
}

fn secants(pts: &[(f64, f64)]) -> (Vec<f64>, Vec<f64>) {
    let h: Vec<f64> = pts.windows(2).map(|w| w[1].0 - w[0].0).collect();
    let d: Vec<f64> = pts
        .windows(2)
        .zip(&h)
        .map(|(w, h)| (w[1].1 - w[0].1) / h)
        .collect();
    (h, d)
}

/// Shape-preserving knot slopes, written exactly as the weighted harmonic
/// mean with correction factor alpha plus the one-sided boundary estimates.
/// No boundary clipping: callers feed data where clipping never engages.
pub fn pchip_slopes_literal(pts: &[(f64, f64)]) -> Vec<f64> {
    let n = pts.len();
    assert!(n >= 3);
    let (h, d) = secants(pts);
    let mut v = vec![0.0; n];
    for i in 1..n - 1 {
        if d[i - 1] * d[i] > 0.0 {
            let alpha = (h[i - 1] + 2.0 * h[i]) / (3.0 * (h[i - 1] + h[i]));
            v[i] = d[i - 1] * d[i] / (alpha * d[i] + (1.0 - alpha) * d[i - 1]);
        }
    }
    v[0] = ((2.0 * h[0] + h[1]) * d[0] - h[0] * d[1]) / (h[0] + h[1]);
    v[n - 1] = ((2.0 * h[n - 2] + h[n - 3]) * d[n - 2] - h[n - 2] * d[n - 3]) / (h[n - 2] + h[n - 3]);
    v
}

/// Akima knot slopes: secants extended by two extrapolated ghost slopes on
/// each side, then a slope-difference-weighted average; the 0/0 tie resolves
/// to the plain average.
pub fn akima_slopes_literal(pts: &[(f64, f64)]) -> Vec<f64> {
    let n = pts.len();
    assert!(n >= 3);
    let (_, d) = secants(pts);
    let m = d.len();
    let mut ext = vec![0.0; m + 4];
    ext[2..2 + m].copy_from_slice(&d);
    ext[1] = 2.0 * ext[2] - ext[3];
    ext[0] = 2.0 * ext[1] - ext[2];
    ext[m + 2] = 2.0 * ext[m + 1] - ext[m];
    ext[m + 3] = 2.0 * ext[m + 2] - ext[m + 1];
    (0..n)
        .map(|i| {
            let w1 = (ext[i + 3] - ext[i + 2]).abs();
            let w2 = (ext[i + 1] - ext[i]).abs();
            if w1 + w2 == 0.0 {
                0.5 * (ext[i + 1] + ext[i + 2])
            } else {
                (w1 * ext[i + 1] + w2 * ext[i + 2]) / (w1 + w2)
            }
        })
        .collect()
}

/// Evaluate the cubic Hermite interpolant given knots and knot slopes.
pub fn hermite_eval(pts: &[(f64, f64)], v: &[f64], x: f64) -> f64 {
    let n = pts.len();
    assert_eq!(v.len(), n);
    let mut j = n - 2;
    for i in 0..n - 1 {
        if x <= pts[i + 1].0 {
            j = i;
            break;
        }
    }
    let (x0, y0) = pts[j];
    let (x1, y1) = pts[j + 1];
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + t) * h * v[j]
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * h * v[j + 1]
}

/// A natural cubic spline with not-a-knot ends, solved as one dense linear
/// system over the 4(n-1) local monomial coefficients. Deliberately naive:
/// interpolation conditions, C1/C2 continuity and third-derivative
/// continuity at the first and last interior knot, Gaussian elimination.
pub struct DenseSpline {
    knots: Vec<f64>,
    coef: Vec<[f64; 4]>,
}

impl DenseSpline {
    pub fn fit(pts: &[(f64, f64)]) -> DenseSpline {
        let n = pts.len();
        assert!(n >= 4, "dense spline oracle needs four points");
        let pieces = n - 1;
        let dim = 4 * pieces;
        let mut a = vec![vec![0.0f64; dim]; dim];
        let mut b = vec![0.0f64; dim];
        let idx = |piece: usize, k: usize| 4 * piece + k;
        let mut row = 0;

        // each piece interpolates both of its endpoints
        for j in 0..pieces {
            a[row][idx(j, 0)] = 1.0;
            b[row] = pts[j].1;
            row += 1;
            let h = pts[j + 1].0 - pts[j].0;
            for k in 0..4 {
                a[row][idx(j, k)] = h.powi(k as i32);
            }
            b[row] = pts[j + 1].1;
            row += 1;
        }
        // first and second derivatives agree at interior knots
        for j in 0..pieces - 1 {
            let h = pts[j + 1].0 - pts[j].0;
            a[row][idx(j, 1)] = 1.0;
            a[row][idx(j, 2)] = 2.0 * h;
            a[row][idx(j, 3)] = 3.0 * h * h;
            a[row][idx(j + 1, 1)] = -1.0;
            row += 1;
            a[row][idx(j, 2)] = 2.0;
            a[row][idx(j, 3)] = 6.0 * h;
            a[row][idx(j + 1, 2)] = -2.0;
            row += 1;
        }
        // not-a-knot: third derivative continuous across the first and the
        // last interior knot
        a[row][idx(0, 3)] = 6.0;
        a[row][idx(1, 3)] = -6.0;
        row += 1;
        a[row][idx(pieces - 2, 3)] = 6.0;
        a[row][idx(pieces - 1, 3)] = -6.0;
        row += 1;
        assert_eq!(row, dim);

        // Gaussian elimination with partial pivoting
        for col in 0..dim {
            let pivot = (col..dim)
                .max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))
                .unwrap();
            a.swap(col, pivot);
            b.swap(col, pivot);
            assert!(a[col][col] != 0.0, "singular spline system");
            for r in col + 1..dim {
                let factor = a[r][col] / a[col][col];
                if factor == 0.0 {
                    continue;
                }
                for c in col..dim {
                    a[r][c] -= factor * a[col][c];
                }
                b[r] -= factor * b[col];
            }
        }
        let mut x = vec![0.0f64; dim];
        for r in (0..dim).rev() {
            let mut acc = b[r];
            for c in r + 1..dim {
                acc -= a[r][c] * x[c];
            }
            x[r] = acc / a[r][r];
        }

        DenseSpline {
            knots: pts.iter().map(|p| p.0).collect(),
            coef: (0..pieces)
                .map(|j| [x[idx(j, 0)], x[idx(j, 1)], x[idx(j, 2)], x[idx(j, 3)]])
                .collect(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut j = self.knots.len() - 2;
        for i in 0..self.knots.len() - 1 {
            if x <= self.knots[i + 1] {
                j = i;
                break;
            }
        }
        let t = x - self.knots[j];
        let c = self.coef[j];
        ((c[3] * t + c[2]) * t + c[1]) * t + c[0]
    }
}

/// One curve of the reference pipeline: knots in the transformed plane plus
/// an evaluator built purely from this module.
pub enum RefCurve {
    Hermite { pts: Vec<(f64, f64)>, v: Vec<f64> },
    Spline(DenseSpline),
}

impl RefCurve {
    /// Build from (independent, log10 dependent) knots with the same method
    /// naming the library uses: "pchip", "akima" or "csi".
    pub fn fit(pts: Vec<(f64, f64)>, method: &str) -> RefCurve {
        match method {
            "pchip" => {
                let v = pchip_slopes_literal(&pts);
                RefCurve::Hermite { pts, v }
            }
            "akima" => {
                let v = akima_slopes_literal(&pts);
                RefCurve::Hermite { pts, v }
            }
            "csi" => RefCurve::Spline(DenseSpline::fit(&pts)),
            other => panic!("unknown method {other}"),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            RefCurve::Hermite { pts, v } => hermite_eval(pts, v, x),
            RefCurve::Spline(s) => s.eval(x),
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        match self {
            RefCurve::Hermite { pts, .. } => (pts[0].0, pts[pts.len() - 1].0),
            RefCurve::Spline(s) => (s.knots[0], s.knots[s.knots.len() - 1]),
        }
    }
}

/// The reference BD pipeline: fit both curves over (quality, log10 rate),
/// integrate the difference over the overlap by adaptive quadrature, undo
/// the log.
pub fn bd_reference(
    test: &[(f64, f64)],
    anchor: &[(f64, f64)],
    method: &str,
) -> f64 {
    let log10 = |pts: &[(f64, f64)]| -> Vec<(f64, f64)> {
        pts.iter().map(|&(q, r)| (q, r.log10())).collect()
    };
    let ca = RefCurve::fit(log10(test), method);
    let cb = RefCurve::fit(log10(anchor), method);
    let (alo, ahi) = ca.domain();
    let (blo, bhi) = cb.domain();
    let lo = alo.max(blo);
    let hi = ahi.min(bhi);
    assert!(hi > lo, "no overlap in reference pipeline");
    let f = |x: f64| ca.eval(x) - cb.eval(x);
    let mean = adaptive_simpson(&f, lo, hi, 1e-13) / (hi - lo);
    10f64.powf(mean) - 1.0
}
