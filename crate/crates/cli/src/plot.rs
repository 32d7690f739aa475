//! Minimal SVG bar chart of a probability distribution.

use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;

/// One bar per node; the y axis runs from 0 to the largest probability.
pub fn distribution_svg(probabilities: &[f64], title: &str) -> String {
    let n = probabilities.len().max(1);
    let peak = probabilities.iter().copied().fold(0.0, f64::max);
    let y_max = if peak > 0.0 { peak } else { 1.0 };
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let bar_w = plot_w / n as f64;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        MARGIN / 2.0,
        escape(title)
    );
    let _ = writeln!(svg, r##"<g fill="#3465a4">"##);
    for (i, &p) in probabilities.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        let h = p / y_max * plot_h;
        let _ = writeln!(
            svg,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/>"#,
            MARGIN + i as f64 * bar_w,
            HEIGHT - MARGIN - h,
            bar_w,
            h
        );
    }
    let _ = writeln!(svg, "</g>");

    let (x0, y0, x1, y1) = (MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN, MARGIN);
    let _ = writeln!(
        svg,
        r#"<path d="M{x0:.2} {y1:.2} L{x0:.2} {y0:.2} L{x1:.2} {y0:.2}" stroke="black" fill="none"/>"#
    );
    let label = r#"font-family="sans-serif" font-size="11""#;
    let _ = writeln!(svg, r#"<text x="{x0:.2}" y="{:.2}" {label}>0</text>"#, y0 + 16.0);
    let _ = writeln!(
        svg,
        r#"<text x="{x1:.2}" y="{:.2}" {label} text-anchor="end">{}</text>"#,
        y0 + 16.0,
        n - 1
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" {label} text-anchor="end">{y_max:.4}</text>"#,
        x0 - 4.0,
        y1 + 4.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" {label} text-anchor="middle">node</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0
    );
    svg.push_str("</svg>\n");
    svg
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
