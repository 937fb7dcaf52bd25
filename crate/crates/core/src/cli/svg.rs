use std::fmt::Write;

use crate::empirical::FigureData;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 55.0;
const CURVE_COLOR: &str = "#1f4e9c";
const MARKER_COLORS: [&str; 4] = ["#c0392b", "#27864a", "#8e44ad", "#d68910"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Round axis step giving about `target` intervals over `span`.
fn nice_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0].iter().map(|k| k * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag)
}

fn marker(out: &mut String, kind: usize, x: f64, y: f64, color: &str) {
    match kind % 3 {
        0 => writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4.5" fill="none" stroke="{color}" stroke-width="1.8"/>"#),
        1 => writeln!(
            out,
            r#"<rect x="{:.2}" y="{:.2}" width="8" height="8" fill="{color}"/>"#,
            x - 4.0,
            y - 4.0
        ),
        _ => writeln!(
            out,
            r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{color}"/>"#,
            x,
            y - 5.0,
            x - 4.5,
            y + 4.0,
            x + 4.5,
            y + 4.0
        ),
    }
    .expect("write to String");
}

/// Standalone SVG 1.1 figure: the curve as a polyline, one marker shape per
/// scatter series, labelled axes and a legend.
pub fn render_svg(fig: &FigureData) -> String {
    let all = fig.curve.points.iter().chain(fig.scatter.iter().flat_map(|s| s.points.iter()));
    let (mut x_max, mut y_max) = (1.0f64, 1.0f64);
    for &(x, y) in all {
        x_max = x_max.max(x);
        y_max = y_max.max(y);
    }
    let x_step = nice_step(x_max, 10.0);
    let y_step = nice_step(y_max, 8.0);
    let x_top = (x_max / x_step).ceil() * x_step;
    let y_top = (y_max / y_step).ceil() * y_step;
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + x / x_top * plot_w;
    let py = |y: f64| TOP + plot_h - y / y_top * plot_h;

    let mut s = String::new();
    let w = &mut s;
    let _ = writeln!(w, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(w, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);

    let _ = writeln!(w, r##"<g stroke="#dddddd" stroke-width="1">"##);
    let mut ticks = String::new();
    let nx = (x_top / x_step).round() as usize;
    for k in 0..=nx {
        let x = k as f64 * x_step;
        let _ = writeln!(w, r#"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}"/>"#, px(x), TOP, TOP + plot_h);
        let _ = writeln!(ticks, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, px(x), TOP + plot_h + 16.0, x);
    }
    let ny = (y_top / y_step).round() as usize;
    for k in 0..=ny {
        let y = k as f64 * y_step;
        let _ = writeln!(w, r#"<line x1="{1:.2}" y1="{0:.2}" x2="{2:.2}" y2="{0:.2}"/>"#, py(y), LEFT, LEFT + plot_w);
        let _ = writeln!(ticks, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, LEFT - 6.0, py(y) + 4.0, y);
    }
    let _ = writeln!(w, "</g>");
    w.push_str(&ticks);
    let _ = writeln!(
        w,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14">Z</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        w,
        r#"<text x="18" y="{0:.2}" text-anchor="middle" font-size="14" transform="rotate(-90 18 {0:.2})">radius/pm</text>"#,
        TOP + plot_h / 2.0
    );

    if !fig.curve.points.is_empty() {
        let pts: Vec<String> = fig.curve.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        let _ = writeln!(
            w,
            r#"<polyline points="{}" fill="none" stroke="{CURVE_COLOR}" stroke-width="2"/>"#,
            pts.join(" ")
        );
    }
    for (k, series) in fig.scatter.iter().enumerate() {
        let color = MARKER_COLORS[k % MARKER_COLORS.len()];
        for &(x, y) in &series.points {
            marker(w, k, px(x), py(y), color);
        }
    }

    // Legend in the lower right, where radius curves leave room.
    let entries = 1 + fig.scatter.len();
    let (lx, ly) = (LEFT + plot_w - 190.0, TOP + plot_h - 12.0 - 20.0 * entries as f64);
    let _ = writeln!(
        w,
        r##"<rect x="{:.2}" y="{:.2}" width="180" height="{:.2}" fill="white" stroke="#999999"/>"##,
        lx,
        ly,
        20.0 * entries as f64 + 4.0
    );
    let _ = writeln!(
        w,
        r#"<line x1="{:.2}" y1="{2:.2}" x2="{1:.2}" y2="{2:.2}" stroke="{CURVE_COLOR}" stroke-width="2"/>"#,
        lx + 8.0,
        lx + 30.0,
        ly + 14.0
    );
    let _ = writeln!(w, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 38.0, ly + 18.0, escape(&fig.curve.label));
    for (k, series) in fig.scatter.iter().enumerate() {
        let y = ly + 14.0 + 20.0 * (k + 1) as f64;
        marker(w, k, lx + 19.0, y, MARKER_COLORS[k % MARKER_COLORS.len()]);
        let _ = writeln!(w, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 38.0, y + 4.0, escape(&series.label));
    }
    let _ = writeln!(w, "</svg>");
    s
}
