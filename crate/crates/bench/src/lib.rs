//! Deterministic synthetic sweeps for the benchmarks.

use bjontegaard::SupportSet;

/// A smooth, strictly monotone quality/rate sweep with `n` points over
/// quality 30..=39. `rate_scale` shifts the whole rate column, `bend` adds a
/// gentle curvature so the three interpolation methods actually differ.
pub fn synthetic_sweep(id: &str, n: usize, rate_scale: f64, bend: f64) -> SupportSet {
    assert!(n >= 2);
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let q = 30.0 + 9.0 * i as f64 / (n - 1) as f64;
            let level = 0.05 * (q - 30.0) + bend * ((q - 30.0) / 4.0).sin();
            (q, rate_scale * 100.0 * 10f64.powf(level))
        })
        .collect();
    SupportSet::from_values(id, "bench", &pts)
}
