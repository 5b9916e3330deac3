//! Acceptance gate: ten numbered end-to-end checks, one test and one printed
//! pass line each. Reference values come from the `oracle` module, which
//! shares no code with the library crates.

mod oracle;

use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use bjontegaard::interp::{akima_derivatives, pchip_derivatives};
use bjontegaard::{
    bd_value, fit, fit_support_set, linear_domain_mean, rcd_curve, select_supporting_params,
    subset_error, BdConfig, Method, MetricTransform, PerformancePoint, SupportSet,
};
use bjontegaard_cli::{run_report, ReportConfig, RunTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const METHODS: [Method; 3] = [Method::Csi, Method::Pchip, Method::Akima];

fn pass(n: u32, what: &str) {
    println!("criterion {n:02}: pass - {what}");
}

fn support(id: &str, pts: &[(f64, f64)]) -> SupportSet {
    SupportSet::from_values(id, "seq", pts)
}

/// Strictly increasing quality and rate, moderate slopes: the shape measured
/// rate-distortion sweeps actually have.
fn monotone_curve(rng: &mut ChaCha8Rng, n: usize, q0: f64) -> Vec<(f64, f64)> {
    let mut q = q0;
    let mut rate = rng.gen_range(80.0..600.0);
    let mut pts = Vec::with_capacity(n);
    for _ in 0..n {
        pts.push((q, rate));
        q += rng.gen_range(0.7..3.0);
        rate *= rng.gen_range(1.1..1.9);
    }
    pts
}

fn random_pair(rng: &mut ChaCha8Rng) -> (Vec<(f64, f64)>, Vec<(f64, f64)>) {
    let na = rng.gen_range(4..=9);
    let nb = rng.gen_range(4..=9);
    let q0 = rng.gen_range(25.0..40.0);
    let qa = q0 + rng.gen_range(-1.0..1.0);
    let qb = q0 + rng.gen_range(-1.0..1.0);
    let a = monotone_curve(rng, na, qa);
    let b = monotone_curve(rng, nb, qb);
    (a, b)
}

#[test]
fn criterion_01_step_ratio_averaging() {
    let t0 = Instant::now();
    // Rate ratio 10x on the first half of the quality range, 1000x on the
    // second, with a narrow transition. The log-domain mean must land at
    // 10^2 - 1 = 99, the linear-domain mean near (10 + 1000)/2 - 1 = 505.
    let qs = [0.0, 0.499, 0.501, 1.0];
    let anchor = support("anchor", &qs.map(|q| (q, 1.0)));
    let test = support("test", &[
        (qs[0], 10.0),
        (qs[1], 10.0),
        (qs[2], 1000.0),
        (qs[3], 1000.0),
    ]);
    let mut cfg = BdConfig::new(Method::Pchip);
    cfg.sample_count = 20_000;

    let bd = bd_value(&test, &anchor, &cfg).unwrap().bd;
    assert!(
        (bd - 99.0).abs() <= 0.02 * 99.0,
        "log-domain mean {bd} is not within 2% of 99"
    );

    let lin = linear_domain_mean(&test, &anchor, &cfg).unwrap();
    assert!(
        (lin - 505.0).abs() <= 0.02 * 505.0,
        "linear-domain mean {lin} is not within 2% of 505"
    );

    assert!(t0.elapsed() < Duration::from_secs(1));
    pass(1, "step-ratio pair averages to 99 in the log domain, 505 linearly");
}

#[test]
fn criterion_02_overshoot_showcase() {
    let t0 = Instant::now();
    let pts: Vec<(f64, f64)> = [1.0, 2.0, 3.0, 7.0, 8.0, 9.0, 9.1]
        .iter()
        .enumerate()
        .map(|(i, &y)| ((i + 1) as f64, y))
        .collect();

    // every method reproduces every support point
    for method in METHODS {
        let poly = fit(&pts, method).unwrap();
        for &(x, y) in &pts {
            assert!(
                (poly.evaluate(x).unwrap() - y).abs() <= 1e-9,
                "{method:?} misses ({x}, {y})"
            );
        }
    }

    // the spline leaves the hull of its data somewhere over [1, 3]
    let csi = fit(&pts, Method::Csi).unwrap();
    let mut violated = false;
    for j in 0..2 {
        let (x0, y0) = pts[j];
        let (x1, y1) = pts[j + 1];
        let (lo, hi) = (y0.min(y1), y0.max(y1));
        for k in 0..=2000 {
            let x = x0 + (x1 - x0) * k as f64 / 2000.0;
            let y = csi.evaluate(x).unwrap();
            if y < lo - 1e-9 || y > hi + 1e-9 {
                violated = true;
            }
        }
    }
    assert!(violated, "spline stayed inside every envelope over [1, 3]");

    // the shape-preserving fit never does, anywhere
    let pchip = fit(&pts, Method::Pchip).unwrap();
    for j in 0..pts.len() - 1 {
        let (x0, y0) = pts[j];
        let (x1, y1) = pts[j + 1];
        let (lo, hi) = (y0.min(y1), y0.max(y1));
        for k in 0..=2000 {
            let x = x0 + (x1 - x0) * k as f64 / 2000.0;
            let y = pchip.evaluate(x).unwrap();
            assert!(
                y >= lo - 1e-12 && y <= hi + 1e-12,
                "pchip leaves [{lo}, {hi}] at x = {x}: {y}"
            );
        }
    }

    assert!(t0.elapsed() < Duration::from_secs(1));
    pass(2, "spline overshoots the staircase data, pchip stays in every envelope");
}

#[test]
fn criterion_03_ratio_algebra() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a01);
    let scale = |pts: &[(f64, f64)], k: f64| -> Vec<(f64, f64)> {
        pts.iter().map(|&(q, r)| (q, r * k)).collect()
    };

    for i in 0..1000 {
        let cfg = BdConfig::new(METHODS[i % 3]);
        let (a, b) = random_pair(&mut rng);
        let sa = support("a", &a);
        let sb = support("b", &b);

        // reflexivity
        assert!(bd_value(&sa, &sa, &cfg).unwrap().bd.abs() <= 1e-12);
        assert!(bd_value(&sb, &sb, &cfg).unwrap().bd.abs() <= 1e-12);

        // anti-symmetry: the two directions are reciprocal ratios
        let ab = bd_value(&sa, &sb, &cfg).unwrap().bd;
        let ba = bd_value(&sb, &sa, &cfg).unwrap().bd;
        assert!(
            ((1.0 + ab) * (1.0 + ba) - 1.0).abs() <= 1e-9,
            "pair {i}: ab {ab}, ba {ba}"
        );

        // scaling both rate columns changes nothing
        let c = rng.gen_range(0.1..10.0);
        let joint = bd_value(&support("a", &scale(&a, c)), &support("b", &scale(&b, c)), &cfg)
            .unwrap()
            .bd;
        assert!((joint - ab).abs() <= 1e-9, "pair {i}: joint scale");

        // shifting the shared quality axis changes nothing
        let delta = rng.gen_range(-5.0..5.0);
        let shift = |pts: &[(f64, f64)]| -> Vec<(f64, f64)> {
            pts.iter().map(|&(q, r)| (q + delta, r)).collect()
        };
        let shifted = bd_value(&support("a", &shift(&a)), &support("b", &shift(&b)), &cfg)
            .unwrap()
            .bd;
        assert!((shifted - ab).abs() <= 1e-9, "pair {i}: axis shift");

        // scaling one side multiplies the ratio by exactly that factor
        let k = rng.gen_range(0.5..2.0);
        let one_side = bd_value(&support("a", &scale(&a, k)), &sb, &cfg).unwrap().bd;
        assert!(
            ((1.0 + one_side) / (k * (1.0 + ab)) - 1.0).abs() <= 1e-9,
            "pair {i}: single-side scale"
        );
    }

    assert!(t0.elapsed() < Duration::from_secs(10), "took {:?}", t0.elapsed());
    pass(3, "ratio algebra holds over 1000 random pairs");
}

#[test]
fn criterion_04_log_base_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a02);
    for i in 0..1000 {
        let method = METHODS[i % 3];
        let cfg = BdConfig::new(method);
        let (a, b) = random_pair(&mut rng);
        let res = bd_value(&support("a", &a), &support("b", &b), &cfg).unwrap();

        // same computation with natural logs end to end
        let ln_pts = |pts: &[(f64, f64)]| -> Vec<(f64, f64)> {
            pts.iter().map(|&(q, r)| (q, r.ln())).collect()
        };
        let pa = fit(&ln_pts(&a), method).unwrap();
        let pb = fit(&ln_pts(&b), method).unwrap();
        let (lo, hi) = res.bounds;
        let mean = (pa.integrate(lo, hi).unwrap() - pb.integrate(lo, hi).unwrap()) / (hi - lo);
        let bd_e = mean.exp() - 1.0;

        assert!(
            (bd_e - res.bd).abs() <= 1e-9,
            "pair {i}: base-10 {} vs base-e {bd_e}",
            res.bd
        );
    }
    pass(4, "natural-log pipeline agrees with the base-10 pipeline");
}

#[test]
fn criterion_05_closed_form_integration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a03);
    let identity = MetricTransform::identity();

    for i in 0..200 {
        let method = METHODS[i % 3];
        let cfg = BdConfig::new(method);
        let (a, b) = random_pair(&mut rng);
        let sa = support("a", &a);
        let sb = support("b", &b);
        let res = bd_value(&sa, &sb, &cfg).unwrap();

        let pa = fit_support_set(&sa, &identity, method).unwrap();
        let pb = fit_support_set(&sb, &identity, method).unwrap();
        let (lo, hi) = res.bounds;
        let f = |x: f64| pa.evaluate(x).unwrap() - pb.evaluate(x).unwrap();
        let integral = oracle::adaptive_simpson(&f, lo, hi, 1e-13);
        let quad_bd = 10f64.powf(integral / (hi - lo)) - 1.0;
        assert!(
            (res.bd - quad_bd).abs() <= 1e-9 * res.bd.abs().max(1.0),
            "pair {i}: closed form {} vs quadrature {quad_bd}",
            res.bd
        );

        // antiderivative evaluation matches quadrature on a random slice too
        let (dlo, dhi) = pa.domain();
        let u = rng.gen_range(dlo..dhi);
        let v = rng.gen_range(u..dhi);
        if v - u > 1e-6 {
            let g = |x: f64| pa.evaluate(x).unwrap();
            let direct = pa.integrate(u, v).unwrap();
            let quad = oracle::adaptive_simpson(&g, u, v, 1e-13);
            assert!(
                (direct - quad).abs() <= 1e-9 * direct.abs().max(1.0),
                "pair {i}: integrate {direct} vs quadrature {quad} on [{u}, {v}]"
            );
        }
    }
    pass(5, "closed-form integrals agree with adaptive quadrature");
}

#[test]
fn criterion_06_difference_curve_consistency() {
    // sample mean of the difference curve in the log domain reproduces the
    // closed-form value
    let qa: Vec<(f64, f64)> = (0..7)
        .map(|i| {
            let q = 30.0 + 1.5 * i as f64;
            let l = 2.0 + 0.05 * (q - 30.0) + 0.08 * ((q - 30.0) / 3.0).sin() + 0.03;
            (q, 10f64.powf(l))
        })
        .collect();
    let qb: Vec<(f64, f64)> = (0..10)
        .map(|i| {
            let q = 30.0 + i as f64;
            (q, 10f64.powf(2.0 + 0.05 * (q - 30.0)))
        })
        .collect();
    let cfg = BdConfig::default();
    let rcd = rcd_curve(&support("a", &qa), &support("b", &qb), &cfg, 10_000).unwrap();
    let mean_log: f64 = rcd
        .samples
        .iter()
        .map(|&(_, d)| (1.0 + d / 100.0).log10())
        .sum::<f64>()
        / rcd.samples.len() as f64;
    let from_samples = 10f64.powf(mean_log) - 1.0;
    let closed = rcd.bd_percent / 100.0;
    assert!(
        (from_samples - closed).abs() <= 1e-4,
        "sample mean {from_samples} vs closed form {closed}"
    );

    // a pair built around g(x) = 0.01 (x - 2.5) ((x - 2)^2 + 1) crosses at
    // exactly 2.5; four points and a spline fit reproduce the cubic itself
    let g = |x: f64| 0.01 * (x - 2.5) * ((x - 2.0) * (x - 2.0) + 1.0);
    let xs = [1.0, 2.0, 3.0, 4.0];
    let test = support("a", &xs.map(|x| (x, 10f64.powf(2.0 + g(x)))));
    let anchor = support("b", &xs.map(|x| (x, 100.0)));
    let rcd = rcd_curve(&test, &anchor, &BdConfig::new(Method::Csi), 512).unwrap();
    assert_eq!(rcd.crossings.len(), 1, "crossings: {:?}", rcd.crossings);
    assert!(
        (rcd.crossings[0] - 2.5).abs() <= 1e-6,
        "crossing at {}",
        rcd.crossings[0]
    );

    pass(6, "difference-curve sampling reproduces the value and its crossing");
}

#[test]
fn criterion_07_subset_error_oracle() {
    // dense sixteen-point sweeps with gently curved log-rates
    let n = 16;
    let quality = |i: usize| 30.0 + 0.6 * i as f64;
    let la = |q: f64| 1.9 + 0.055 * (q - 30.0) + 0.10 * ((q - 30.0) / 4.0).sin();
    let lb = |q: f64| 2.02 + 0.06 * (q - 30.0) + 0.08 * ((q - 30.0) / 3.5).cos();

    let build = |id: &str, level: &dyn Fn(f64) -> f64| -> SupportSet {
        let points = (0..n)
            .map(|i| PerformancePoint {
                param: (22 + i) as f64,
                independent: quality(i),
                dependent: 10f64.powf(level(quality(i))),
            })
            .collect();
        SupportSet::new(id, "seq", points)
    };
    let test_all = build("a", &la);
    let anchor_all = build("b", &lb);
    let subset = [22.0, 27.0, 32.0, 37.0];
    let test_sub = test_all.restrict_to_params(&subset);
    let anchor_sub = anchor_all.restrict_to_params(&subset);

    let tuples = |set: &SupportSet| -> Vec<(f64, f64)> {
        set.points().iter().map(|p| (p.independent, p.dependent)).collect()
    };
    for (method, name) in [(Method::Csi, "csi"), (Method::Pchip, "pchip"), (Method::Akima, "akima")]
    {
        let lib = subset_error(&test_sub, &anchor_sub, &test_all, &anchor_all, &BdConfig::new(method))
            .unwrap();
        let want = oracle::bd_reference(&tuples(&test_sub), &tuples(&anchor_sub), name)
            - oracle::bd_reference(&tuples(&test_all), &tuples(&anchor_all), name);
        assert!(
            (lib - want).abs() <= 1e-9,
            "{name}: library {lib} vs reference {want}"
        );
    }

    // log-domain cubics: a four-point spline IS the generating curve, so the
    // sparse and the dense fit integrate to the same value
    let ca = |q: f64| {
        let u = q - 34.0;
        2.0 + 0.06 * u + 0.002 * u * u + 0.0005 * u * u * u
    };
    let cb = |q: f64| {
        let u = q - 34.0;
        2.1 + 0.055 * u + 0.0015 * u * u + 0.0004 * u * u * u
    };
    let test_all = build("a", &ca);
    let anchor_all = build("b", &cb);
    let err = subset_error(
        &test_all.restrict_to_params(&subset),
        &anchor_all.restrict_to_params(&subset),
        &test_all,
        &anchor_all,
        &BdConfig::new(Method::Csi),
    )
    .unwrap();
    assert!(err.abs() <= 1e-12, "log-cubic subset error {err}");

    pass(7, "subset error matches the quadrature reference and vanishes for log-cubics");
}

#[test]
fn criterion_08_published_sparse_sweeps() {
    let params: Vec<i64> = (22..=37).collect();
    let expected: [&[i64]; 8] = [
        &[22, 37],
        &[22, 30, 37],
        &[22, 27, 32, 37],
        &[22, 26, 30, 34, 37],
        &[22, 25, 28, 31, 34, 37],
        &[22, 24, 27, 29, 32, 34, 37],
        &[22, 24, 26, 28, 30, 32, 34, 37],
        &[22, 24, 26, 28, 30, 32, 34, 36, 37],
    ];
    for (count, want) in (2..=9).zip(expected) {
        let got = select_supporting_params(&params, count).unwrap();
        assert_eq!(got, want, "count {count}");
    }
    pass(8, "all eight published sparse sweeps for 22..37 reproduced exactly");
}

#[test]
fn criterion_09_knot_slope_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a04);
    for i in 0..1000 {
        // monotone data with secant ratios inside (0.5, 2): no boundary
        // clipping, so the libraries must equal the literal formulas
        let n = rng.gen_range(4..=9);
        let mut x = rng.gen_range(0.0..50.0);
        let mut y = rng.gen_range(-10.0..10.0);
        let mut d = rng.gen_range(0.5..2.0);
        let mut pts = Vec::with_capacity(n);
        for _ in 0..n {
            pts.push((x, y));
            let h = rng.gen_range(0.5..2.0);
            x += h;
            y += d * h;
            d *= rng.gen_range(0.6..1.8);
        }

        let lib = pchip_derivatives(&pts).unwrap();
        let lit = oracle::pchip_slopes_literal(&pts);
        for (j, (&a, &b)) in lib.as_slice().iter().zip(&lit).enumerate() {
            assert!(
                (a - b).abs() <= 1e-12 * b.abs().max(1.0),
                "set {i} pchip v[{j}]: {a} vs {b}"
            );
        }

        let lib = akima_derivatives(&pts).unwrap();
        let lit = oracle::akima_slopes_literal(&pts);
        for (j, (&a, &b)) in lib.as_slice().iter().zip(&lit).enumerate() {
            assert!(
                (a - b).abs() <= 1e-12 * b.abs().max(1.0),
                "set {i} akima v[{j}]: {a} vs {b}"
            );
        }
    }

    // secants 1 and 3 at equal spacing: the weighted harmonic mean is 1.5,
    // exactly, not approximately
    let pts = [(0.0, 0.0), (1.0, 1.0), (2.0, 4.0)];
    let v = pchip_derivatives(&pts).unwrap();
    assert_eq!(v.as_slice()[1].to_bits(), 1.5f64.to_bits());

    pass(9, "knot slopes equal the literal formulas; harmonic case is exact");
}

#[test]
fn criterion_10_cli_end_to_end() {
    let bin = env!("CARGO_BIN_EXE_bdtool");
    let dir = tempfile::tempdir().unwrap();

    let mut csv = String::from("sequence,config,param,psnr,bitrate\n");
    for (seq, base) in [("seq01", 100i64), ("seq02", 140)] {
        for i in 0..4i64 {
            let (param, psnr, rate) = (22 + 5 * i, 32 + 3 * i, base << i);
            csv.push_str(&format!("{seq},anchor,{param},{psnr},{rate}\n"));
            csv.push_str(&format!("{seq},double,{param},{psnr},{}\n", 2 * rate));
        }
    }
    let input = dir.path().join("runs.csv");
    fs::write(&input, &csv).unwrap();

    let bd_args = [
        "bd", "--input", input.to_str().unwrap(), "--independent", "psnr",
        "--dependent", "bitrate", "--anchor", "anchor", "--test", "double", "--json",
    ];
    let first = Command::new(bin).args(bd_args).output().unwrap();
    let second = Command::new(bin).args(bd_args).output().unwrap();
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout, "report not deterministic");

    // every per-sequence value equals the library composition, bit for bit
    let doc: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    let table = RunTable::from_reader(csv.as_bytes()).unwrap();
    let cfg = ReportConfig::new("anchor", vec!["double".into()], "psnr", "bitrate");
    let want = run_report(&table, &cfg).unwrap().report;
    let rows = doc["per_sequence"].as_array().unwrap();
    assert_eq!(rows.len(), want.per_sequence.len());
    for (row, lib) in rows.iter().zip(&want.per_sequence) {
        assert_eq!(row["sequence"].as_str().unwrap(), lib.sequence);
        assert_eq!(
            row["bd"].as_f64().unwrap().to_bits(),
            lib.bd.to_bits(),
            "bd differs for {}",
            lib.sequence
        );
        assert_eq!(row["iou"].as_f64().unwrap().to_bits(), lib.iou.to_bits());
    }

    // the difference plot is well-formed svg
    let svg_path = dir.path().join("plot.svg");
    let rcd_args = [
        "rcd", "--input", input.to_str().unwrap(), "--independent", "psnr",
        "--dependent", "bitrate", "--sequence", "seq01", "--anchor", "anchor",
        "--test", "double", "--out", svg_path.to_str().unwrap(),
    ];
    let out = Command::new(bin).args(rcd_args).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let svg = fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches('<').count(), svg.matches('>').count());
    assert_eq!(svg.matches("<text").count(), svg.matches("</text>").count());
    assert_eq!(svg.matches('"').count() % 2, 0);

    pass(10, "cli report matches the library bit for bit and plots well-formed svg");
}
