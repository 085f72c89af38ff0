//! Minimal SVG emitters: polylines, markers and axis ticks.

use std::fmt::Write;

use qspec_core::spectrum::SpectrumTrace;

const W: f64 = 640.0;
const H: f64 = 480.0;
const PAD: f64 = 56.0;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        PAD + (x - self.x0) / (self.x1 - self.x0).max(1e-12) * (W - 2.0 * PAD)
    }

    fn py(&self, y: f64) -> f64 {
        H - PAD - (y - self.y0) / (self.y1 - self.y0).max(1e-12) * (H - 2.0 * PAD)
    }
}

fn open(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
        W / 2.0,
        escape(title)
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Axes with integer ticks; `label` maps a tick value to its text.
fn axes(out: &mut String, f: &Frame, xt: &[i64], yt: &[i64], xlabel: &str, ylabel: &str, label: impl Fn(i64) -> String) {
    let (bx, by) = (f.px(f.x0), f.py(f.y0));
    let _ = writeln!(out, "<line x1=\"{bx:.2}\" y1=\"{by:.2}\" x2=\"{:.2}\" y2=\"{by:.2}\" stroke=\"black\"/>", f.px(f.x1));
    let _ = writeln!(out, "<line x1=\"{bx:.2}\" y1=\"{by:.2}\" x2=\"{bx:.2}\" y2=\"{:.2}\" stroke=\"black\"/>", f.py(f.y1));
    for &t in xt {
        let x = f.px(t as f64);
        let _ = writeln!(out, "<line x1=\"{x:.2}\" y1=\"{by:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/>", by + 5.0);
        let _ = writeln!(out, "<text x=\"{x:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>", by + 18.0, label(t));
    }
    for &t in yt {
        let y = f.py(t as f64);
        let _ = writeln!(out, "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{bx:.2}\" y2=\"{y:.2}\" stroke=\"black\"/>", bx - 5.0);
        let _ = writeln!(out, "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{}</text>", bx - 8.0, y + 4.0, label(t));
    }
    let _ = writeln!(out, "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>", W / 2.0, H - 12.0, escape(xlabel));
    let _ = writeln!(out, "<text x=\"16\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 {:.2})\" text-anchor=\"middle\">{}</text>", H / 2.0, H / 2.0, escape(ylabel));
}

fn polyline(out: &mut String, pts: &[(f64, f64)], color: &str, dashed: bool) {
    if pts.len() < 2 {
        return;
    }
    let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    let dash = if dashed { " stroke-dasharray=\"6 4\"" } else { "" };
    let _ = writeln!(out, "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"{dash}/>", coords.join(" "));
}

/// Support pairs as dots, the lower hull solid, and an optional expected
/// hull dashed.
pub fn polygon(title: &str, pairs: &[(i64, i64)], hull: &[(i64, i64)], expected: Option<&[(i64, i64)]>) -> String {
    let all: Vec<(i64, i64)> = pairs.iter().chain(hull).chain(expected.unwrap_or(&[])).copied().collect();
    let (xmin, xmax) = (all.iter().map(|p| p.0).min().unwrap_or(0), all.iter().map(|p| p.0).max().unwrap_or(1));
    let (ymin, ymax) = (all.iter().map(|p| p.1).min().unwrap_or(0), all.iter().map(|p| p.1).max().unwrap_or(1));
    let f = Frame { x0: xmin as f64 - 0.5, x1: xmax as f64 + 0.5, y0: ymin as f64 - 0.5, y1: ymax as f64 + 0.5 };
    let mut out = open(title);
    let xt: Vec<i64> = (xmin..=xmax).collect();
    let ystep = ((ymax - ymin) / 10).max(1);
    let yt: Vec<i64> = (ymin..=ymax).step_by(ystep as usize).collect();
    axes(&mut out, &f, &xt, &yt, "power of lambda", "power of q", |t| t.to_string());
    for &(x, y) in pairs {
        let _ = writeln!(out, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"#555\"/>", f.px(x as f64), f.py(y as f64));
    }
    let map = |v: &[(i64, i64)]| v.iter().map(|&(x, y)| (f.px(x as f64), f.py(y as f64))).collect::<Vec<_>>();
    polyline(&mut out, &map(hull), COLORS[0], false);
    if let Some(e) = expected {
        polyline(&mut out, &map(e), COLORS[1], true);
    }
    out.push_str("</svg>\n");
    out
}

/// `|mu|` against `q` on log-log axes, one polyline per label.
pub fn spectrum(title: &str, trace: &SpectrumTrace) -> String {
    let mut series: Vec<Vec<(f64, f64)>> = vec![Vec::new(); trace.labels.len()];
    for s in &trace.samples {
        for (l, z) in s.eigenvalues.iter().enumerate() {
            let m = z.norm();
            if m > 0.0 && m.is_finite() {
                series[l].push((s.q.log10(), m.log10()));
            }
        }
    }
    let pts = series.iter().flatten();
    let lo = |v: f64, w: f64| v.min(w);
    let hi = |v: f64, w: f64| v.max(w);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = lo(x0, x);
        x1 = hi(x1, x);
        y0 = lo(y0, y);
        y1 = hi(y1, y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let f = Frame { x0: x0.floor(), x1: x1.ceil(), y0: y0.floor(), y1: y1.ceil() };
    let mut out = open(title);
    let xt: Vec<i64> = (f.x0 as i64..=f.x1 as i64).collect();
    let ystep = (((f.y1 - f.y0) / 10.0).ceil() as usize).max(1);
    let yt: Vec<i64> = (f.y0 as i64..=f.y1 as i64).step_by(ystep).collect();
    axes(&mut out, &f, &xt, &yt, "q", "|eigenvalue|", |t| format!("1e{t}"));
    for (l, s) in series.iter().enumerate() {
        let pts: Vec<(f64, f64)> = s.iter().map(|&(x, y)| (f.px(x), f.py(y))).collect();
        let color = COLORS[l % COLORS.len()];
        polyline(&mut out, &pts, color, l >= trace.m() + 2);
        if let Some(&(x, y)) = pts.last() {
            let _ = writeln!(out, "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"10\" fill=\"{color}\">{}</text>", x + 4.0, y, escape(&trace.labels[l]));
        }
    }
    out.push_str("</svg>\n");
    out
}
