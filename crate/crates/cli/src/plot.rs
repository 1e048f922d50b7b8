//! Static SVG figures: painting-space scatter with the prototype
//! trajectory, index line plots, and gray-histogram overlays.

use std::fmt::Write as _;

use paintspace::corpus::GrayHistogram;

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 640.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 170.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 60.0;

/// Categorical palette, one color per painter.
const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#aec7e9", "#ffbb78",
];

pub fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn from_bounds(xs: impl Iterator<Item = f64>, ys: impl Iterator<Item = f64>) -> Frame {
        let mut x0 = f64::INFINITY;
        let mut x1 = f64::NEG_INFINITY;
        for v in xs {
            x0 = x0.min(v);
            x1 = x1.max(v);
        }
        let mut y0 = f64::INFINITY;
        let mut y1 = f64::NEG_INFINITY;
        for v in ys {
            y0 = y0.min(v);
            y1 = y1.max(v);
        }
        if !x0.is_finite() || x0 == x1 {
            x0 -= 1.0;
            x1 += 1.0;
        }
        if !y0.is_finite() || y0 == y1 {
            y0 -= 1.0;
            y1 += 1.0;
        }
        let (px, py) = ((x1 - x0) * 0.06, (y1 - y0) * 0.06);
        Frame {
            x0: x0 - px,
            x1: x1 + px,
            y0: y0 - py,
            y1: y1 + py,
        }
    }

    fn sx(&self, x: f64) -> f64 {
        MARGIN_L + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - MARGIN_L - MARGIN_R)
    }

    fn sy(&self, y: f64) -> f64 {
        // y axis grows upward
        HEIGHT - MARGIN_B - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - MARGIN_T - MARGIN_B)
    }
}

fn open_svg(out: &mut String, config_digest: &str, title: &str) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(out, "<!-- config={config_digest} -->");
    let _ = writeln!(
        out,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>",
        WIDTH / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, f: &Frame, x_label: &str, y_label: &str) {
    let (left, right) = (MARGIN_L, WIDTH - MARGIN_R);
    let (top, bottom) = (MARGIN_T, HEIGHT - MARGIN_B);
    let _ = writeln!(
        out,
        "<rect x=\"{left}\" y=\"{top}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\"/>",
        right - left,
        bottom - top
    );
    for i in 0..=5 {
        let xv = f.x0 + (f.x1 - f.x0) * i as f64 / 5.0;
        let yv = f.y0 + (f.y1 - f.y0) * i as f64 / 5.0;
        let sx = f.sx(xv);
        let sy = f.sy(yv);
        let _ = writeln!(
            out,
            "<line class=\"grid\" x1=\"{sx}\" y1=\"{bottom}\" x2=\"{sx}\" y2=\"{}\" stroke=\"#444\"/>",
            bottom + 6.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{sx}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{xv:.3}</text>",
            bottom + 20.0
        );
        let _ = writeln!(
            out,
            "<line class=\"grid\" x1=\"{}\" y1=\"{sy}\" x2=\"{left}\" y2=\"{sy}\" stroke=\"#444\"/>",
            left - 6.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{yv:.3}</text>",
            left - 10.0,
            sy + 4.0
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{}</text>",
        (left + right) / 2.0,
        HEIGHT - 16.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        "<text x=\"18\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">{}</text>",
        (top + bottom) / 2.0,
        (top + bottom) / 2.0,
        escape(y_label)
    );
}

fn legend(out: &mut String, names: &[String]) {
    let x = WIDTH - MARGIN_R + 16.0;
    for (i, name) in names.iter().enumerate() {
        let y = MARGIN_T + 14.0 + i as f64 * 18.0;
        let _ = writeln!(
            out,
            "<rect x=\"{x}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{}\"/>",
            y - 9.0,
            color(i)
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{y}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            x + 16.0,
            escape(name)
        );
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Scatter of all paintings in the active 2-D space plus the chronological
/// prototype trajectory. One `circle.painting` per painting, one
/// `rect.prototype` per painter state.
pub fn scatter_plot(
    config_digest: &str,
    title: &str,
    x_label: &str,
    y_label: &str,
    class_names: &[String],
    points: &[(usize, f64, f64)],
    trajectory: &[(f64, f64)],
) -> String {
    let frame = Frame::from_bounds(
        points
            .iter()
            .map(|&(_, x, _)| x)
            .chain(trajectory.iter().map(|&(x, _)| x)),
        points
            .iter()
            .map(|&(_, _, y)| y)
            .chain(trajectory.iter().map(|&(_, y)| y)),
    );
    let mut out = String::new();
    open_svg(&mut out, config_digest, title);
    axes(&mut out, &frame, x_label, y_label);
    for &(class, x, y) in points {
        let _ = writeln!(
            out,
            "<circle class=\"painting\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"{}\" fill-opacity=\"0.65\"/>",
            frame.sx(x),
            frame.sy(y),
            color(class)
        );
    }
    if trajectory.len() > 1 {
        let pts: Vec<String> = trajectory
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", frame.sx(x), frame.sy(y)))
            .collect();
        let _ = writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#222\" stroke-width=\"1.5\"/>",
            pts.join(" ")
        );
    }
    for (i, &(x, y)) in trajectory.iter().enumerate() {
        let _ = writeln!(
            out,
            "<rect class=\"prototype\" x=\"{:.2}\" y=\"{:.2}\" width=\"9\" height=\"9\" fill=\"{}\" stroke=\"#222\"/>",
            frame.sx(x) - 4.5,
            frame.sy(y) - 4.5,
            color(i)
        );
    }
    legend(&mut out, class_names);
    out.push_str("</svg>\n");
    out
}

/// Line plot of one or more series over integer x positions (1-based).
/// Draws one `line.tick` per x position and one `circle.point` per sample.
pub fn line_plot(
    config_digest: &str,
    title: &str,
    x_label: &str,
    series: &[(&str, Vec<f64>)],
    x_labels: &[String],
) -> String {
    let n = series.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    let frame = Frame::from_bounds(
        (1..=n.max(2)).map(|i| i as f64),
        series.iter().flat_map(|(_, v)| v.iter().copied()),
    );
    let mut out = String::new();
    open_svg(&mut out, config_digest, title);
    axes(&mut out, &frame, x_label, "");

    let bottom = HEIGHT - MARGIN_B;
    for i in 1..=n {
        let sx = frame.sx(i as f64);
        let _ = writeln!(
            out,
            "<line class=\"tick\" x1=\"{sx}\" y1=\"{bottom}\" x2=\"{sx}\" y2=\"{}\" stroke=\"#888\"/>",
            bottom + 5.0
        );
        if let Some(label) = x_labels.get(i - 1) {
            let _ = writeln!(
                out,
                "<text x=\"{sx}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"9\" text-anchor=\"end\" transform=\"rotate(-45 {sx} {})\">{}</text>",
                bottom + 34.0,
                bottom + 34.0,
                escape(label)
            );
        }
    }
    for (s, (name, values)) in series.iter().enumerate() {
        let pts: Vec<String> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| format!("{:.2},{:.2}", frame.sx((i + 1) as f64), frame.sy(v)))
            .collect();
        let _ = writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>",
            pts.join(" "),
            color(s)
        );
        for (i, &v) in values.iter().enumerate() {
            let _ = writeln!(
                out,
                "<circle class=\"point\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"3.5\" fill=\"{}\"/>",
                frame.sx((i + 1) as f64),
                frame.sy(v),
                color(s)
            );
        }
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{}\">{}</text>",
            WIDTH - MARGIN_R + 16.0,
            MARGIN_T + 14.0 + s as f64 * 18.0,
            color(s),
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Overlaid mean gray-level histograms, one polyline per painter.
pub fn histogram_overlay(
    config_digest: &str,
    title: &str,
    painters: &[String],
    histograms: &[GrayHistogram],
) -> String {
    let frame = Frame::from_bounds(
        [0.0, 255.0].into_iter(),
        histograms
            .iter()
            .flat_map(|h| h.bins.iter().copied())
            .chain([0.0]),
    );
    let mut out = String::new();
    open_svg(&mut out, config_digest, title);
    axes(&mut out, &frame, "gray level", "mass");
    for (i, hist) in histograms.iter().enumerate() {
        let pts: Vec<String> = hist
            .bins
            .iter()
            .enumerate()
            .map(|(b, &m)| format!("{:.2},{:.2}", frame.sx(b as f64), frame.sy(m)))
            .collect();
        let _ = writeln!(
            out,
            "<polyline class=\"histogram\" points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\"/>",
            pts.join(" "),
            color(i)
        );
    }
    legend(&mut out, painters);
    out.push_str("</svg>\n");
    out
}
