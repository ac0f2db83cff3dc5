//! Static SVG of the moment image `Φ(S² × S²)`.

use std::fmt::Write;

use quadric_core::semitoric::MomentCloud;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 30.0;

fn x(f: f64) -> f64 {
    MARGIN + (f + 2.0) / 4.0 * (WIDTH - 2.0 * MARGIN)
}

fn y(g: f64) -> f64 {
    HEIGHT - MARGIN - (g + 1.0) / 2.0 * (HEIGHT - 2.0 * MARGIN)
}

/// Sampled points in grey, the per-bin envelope in blue, the line
/// `G = −1/2` dashed, and the fibers `L = (0,−1)`, `K = (0,−1/2)` marked.
pub fn moment_svg(cloud: &MomentCloud) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r##"<g stroke="#444" stroke-width="1"><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/></g>"##,
        x(-2.0),
        y(0.0),
        x(2.0),
        y(0.0),
        x(0.0),
        y(-1.0),
        x(0.0),
        y(1.0)
    );
    let _ = writeln!(s, r##"<g fill="#999" fill-opacity="0.5">"##);
    for (f, g) in &cloud.points {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="0.8"/>"#, x(*f), y(*g));
    }
    let _ = writeln!(s, "</g>");
    let lower: Vec<String> = cloud.sketch.iter().map(|(f, lo, _)| format!("{:.2},{:.2}", x(*f), y(*lo))).collect();
    let _ = writeln!(s, r##"<polyline fill="none" stroke="#2060c0" stroke-width="1.5" points="{}"/>"##, lower.join(" "));
    let _ = writeln!(
        s,
        r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#c03020" stroke-dasharray="6 4"/>"##,
        x(-2.0),
        y(-0.5),
        x(2.0),
        y(-0.5)
    );
    for (label, g) in [("L", -1.0), ("K", -0.5)] {
        let _ = writeln!(
            s,
            r##"<circle cx="{:.2}" cy="{:.2}" r="4" fill="#c03020"/><text x="{:.2}" y="{:.2}" font-size="12">{label}</text>"##,
            x(0.0),
            y(g),
            x(0.0) + 6.0,
            y(g) - 6.0
        );
    }
    let _ = writeln!(s, "</svg>");
    s
}
