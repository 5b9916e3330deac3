//! Static SVG renderings of curve-difference and rate-quality plots.
//!
//! The difference plot puts the relative difference on the horizontal axis
//! and the independent metric on the vertical axis, with a dashed vertical
//! line at the BD value and markers at the supporting points of both
//! configurations.

use std::fs;
use std::io;
use std::path::Path;

use bjontegaard::{PiecewisePolynomial, RcdCurve};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 32.0;
const MARGIN_BOTTOM: f64 = 52.0;

pub struct PlotLabels<'a> {
    pub title: &'a str,
    /// Axis label of the independent metric, e.g. "psnr [dB]".
    pub independent: &'a str,
    /// Axis label of the dependent metric for rate-quality plots.
    pub dependent: &'a str,
    pub test: &'a str,
    pub anchor: &'a str,
}

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn new(x: (f64, f64), y: (f64, f64)) -> Frame {
        let pad = |lo: f64, hi: f64| {
            let span = (hi - lo).abs().max(1e-12);
            (lo - 0.05 * span, hi + 0.05 * span)
        };
        let (x_min, x_max) = pad(x.0, x.1);
        let (y_min, y_max) = pad(y.0, y.1);
        Frame {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN_LEFT + (x - self.x_min) / (self.x_max - self.x_min) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        // SVG y grows downward
        HEIGHT - MARGIN_BOTTOM
            - (y - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if !(0.01..10000.0).contains(&a) {
        return format!("{v:.2e}");
    }
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn open_svg(out: &mut String, title: &str) {
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" \
         text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        esc(title)
    ));
}

fn axes(out: &mut String, frame: &Frame, x_label: &str, y_label: &str) {
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    out.push_str(&format!(
        "<rect x=\"{x0}\" y=\"{y1}\" width=\"{}\" height=\"{}\" fill=\"none\" \
         stroke=\"black\" stroke-width=\"1\"/>\n",
        x1 - x0,
        y0 - y1
    ));
    for i in 0..=4 {
        let fx = frame.x_min + (frame.x_max - frame.x_min) * i as f64 / 4.0;
        let px = frame.px(fx);
        out.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{y0}\" x2=\"{px:.2}\" y2=\"{}\" stroke=\"black\"/>\n",
            y0 + 5.0
        ));
        out.push_str(&format!(
            "<text x=\"{px:.2}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"middle\">{}</text>\n",
            y0 + 18.0,
            fmt_num(fx)
        ));
        let fy = frame.y_min + (frame.y_max - frame.y_min) * i as f64 / 4.0;
        let py = frame.py(fy);
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{py:.2}\" x2=\"{x0}\" y2=\"{py:.2}\" stroke=\"black\"/>\n",
            x0 - 5.0
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"end\">{}</text>\n",
            x0 - 8.0,
            py + 4.0,
            fmt_num(fy)
        ));
    }
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" \
         text-anchor=\"middle\">{}</text>\n",
        (x0 + x1) / 2.0,
        HEIGHT - 12.0,
        esc(x_label)
    ));
    out.push_str(&format!(
        "<text x=\"16\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" \
         text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        esc(y_label)
    ));
}

fn polyline(out: &mut String, pts: impl Iterator<Item = (f64, f64)>, color: &str, dash: Option<&str>) {
    let coords: Vec<String> = pts.map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    let dash = dash
        .map(|d| format!(" stroke-dasharray=\"{d}\""))
        .unwrap_or_default();
    out.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{dash}/>\n",
        coords.join(" ")
    ));
}

fn legend(out: &mut String, entries: &[(&str, &str)]) {
    let x = MARGIN_LEFT + 10.0;
    for (i, (color, label)) in entries.iter().enumerate() {
        let y = MARGIN_TOP + 14.0 + 16.0 * i as f64;
        out.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"{color}\" \
             stroke-width=\"2\"/>\n",
            x + 18.0
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
            x + 24.0,
            y + 4.0,
            esc(label)
        ));
    }
}

/// Render the relative-difference curve: difference in percent on the
/// horizontal axis, independent metric on the vertical axis, a dashed
/// vertical line at the BD value, and support markers of both configs.
pub fn rcd_plot_svg(rcd: &RcdCurve, labels: &PlotLabels) -> String {
    let deltas = rcd.samples.iter().map(|&(_, d)| d);
    let d_min = deltas
        .clone()
        .chain([rcd.bd_percent, 0.0])
        .fold(f64::INFINITY, f64::min);
    let d_max = rcd
        .samples
        .iter()
        .map(|&(_, d)| d)
        .chain([rcd.bd_percent, 0.0])
        .fold(f64::NEG_INFINITY, f64::max);
    let frame = Frame::new((d_min, d_max), rcd.bounds);

    let mut out = String::new();
    open_svg(&mut out, labels.title);
    axes(
        &mut out,
        &frame,
        "relative difference [%]",
        labels.independent,
    );

    // zero reference
    let zx = frame.px(0.0);
    out.push_str(&format!(
        "<line x1=\"{zx:.2}\" y1=\"{}\" x2=\"{zx:.2}\" y2=\"{}\" stroke=\"#bbbbbb\"/>\n",
        frame.py(frame.y_min),
        frame.py(frame.y_max)
    ));
    // dashed BD line
    let bx = frame.px(rcd.bd_percent);
    out.push_str(&format!(
        "<line x1=\"{bx:.2}\" y1=\"{}\" x2=\"{bx:.2}\" y2=\"{}\" stroke=\"#d62728\" \
         stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n",
        frame.py(frame.y_min),
        frame.py(frame.y_max)
    ));

    polyline(
        &mut out,
        rcd.samples.iter().map(|&(q, d)| (frame.px(d), frame.py(q))),
        "#1f77b4",
        None,
    );
    for &(q, d) in &rcd.support_test {
        out.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3.5\" fill=\"#1f77b4\"/>\n",
            frame.px(d),
            frame.py(q)
        ));
    }
    for &(q, d) in &rcd.support_anchor {
        out.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"6\" height=\"6\" fill=\"#2ca02c\"/>\n",
            frame.px(d) - 3.0,
            frame.py(q) - 3.0
        ));
    }
    legend(
        &mut out,
        &[
            ("#1f77b4", &format!("difference, markers: {}", labels.test)),
            ("#2ca02c", &format!("markers: {}", labels.anchor)),
            ("#d62728", &format!("bd = {:.4}%", rcd.bd_percent)),
        ]
        .iter()
        .map(|(c, s)| (*c, s.as_str()))
        .collect::<Vec<_>>(),
    );
    out.push_str("</svg>\n");
    out
}

/// One fitted curve plus its measured supporting points for the
/// rate-quality overview plot, in (independent, log10 dependent) space.
pub struct RdSeries<'a> {
    pub label: &'a str,
    pub poly: &'a PiecewisePolynomial,
    pub support: Vec<(f64, f64)>,
}

/// Rate-quality overview: log10 of the dependent metric on the horizontal
/// axis, independent metric on the vertical axis, one curve per config.
pub fn rd_plot_svg(series: &[RdSeries], labels: &PlotLabels) -> String {
    const COLORS: [&str; 4] = ["#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd"];
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    let mut sampled: Vec<Vec<(f64, f64)>> = Vec::new();
    for s in series {
        let (lo, hi) = s.poly.domain();
        let pts: Vec<(f64, f64)> = (0..=128)
            .map(|i| {
                let q = lo + (hi - lo) * i as f64 / 128.0;
                (q, s.poly.evaluate(q).expect("inside domain"))
            })
            .collect();
        for &(q, r) in pts.iter().chain(&s.support) {
            x_min = x_min.min(r);
            x_max = x_max.max(r);
            y_min = y_min.min(q);
            y_max = y_max.max(q);
        }
        sampled.push(pts);
    }
    let frame = Frame::new((x_min, x_max), (y_min, y_max));

    let mut out = String::new();
    open_svg(&mut out, labels.title);
    axes(
        &mut out,
        &frame,
        &format!("log10 {}", labels.dependent),
        labels.independent,
    );
    let mut entries = Vec::new();
    for (i, (s, pts)) in series.iter().zip(&sampled).enumerate() {
        let color = COLORS[i % COLORS.len()];
        polyline(
            &mut out,
            pts.iter().map(|&(q, r)| (frame.px(r), frame.py(q))),
            color,
            None,
        );
        for &(q, r) in &s.support {
            out.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>\n",
                frame.px(r),
                frame.py(q)
            ));
        }
        entries.push((color, s.label));
    }
    legend(&mut out, &entries);
    out.push_str("</svg>\n");
    out
}

/// Full-precision CSV dump of the sampled difference curve.
pub fn rcd_samples_csv(rcd: &RcdCurve) -> String {
    let mut out = String::from("independent,delta_percent\n");
    for &(q, d) in &rcd.samples {
        out.push_str(&format!("{q},{d}\n"));
    }
    out
}

pub fn write_file(path: impl AsRef<Path>, content: &str) -> io::Result<()> {
    fs::write(path, content)
}
