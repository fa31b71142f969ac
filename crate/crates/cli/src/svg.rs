//! Inverse roots against the unit circle.

use std::fmt::Write;

use tsecon::varmodel::StabilityReport;

const SIZE: f64 = 400.0;
const MARGIN: f64 = 30.0;

/// Square viewport, unit circle at the centre, axes through the origin.
/// Roots outside the circle are drawn as red crosses, the rest as filled dots.
pub fn render_unit_circle_svg(report: &StabilityReport) -> String {
    let extent = report.max_modulus().max(1.0) * 1.1;
    let c = SIZE / 2.0;
    let scale = (c - MARGIN) / extent;
    let px = |x: f64| c + x * scale;
    let py = |y: f64| c - y * scale;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<line class="axis" x1="{MARGIN}" y1="{c}" x2="{}" y2="{c}" stroke="gray" stroke-width="1"/>"#,
        SIZE - MARGIN
    );
    let _ = writeln!(
        s,
        r#"<line class="axis" x1="{c}" y1="{MARGIN}" x2="{c}" y2="{}" stroke="gray" stroke-width="1"/>"#,
        SIZE - MARGIN
    );
    let _ = writeln!(
        s,
        r#"<circle class="unit-circle" cx="{c}" cy="{c}" r="{:.3}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        scale
    );
    for root in &report.roots {
        let (x, y) = (px(root.re), py(root.im));
        if root.modulus > 1.0 {
            let _ = writeln!(
                s,
                r#"<path class="root-outside" d="M {:.3} {:.3} L {:.3} {:.3} M {:.3} {:.3} L {:.3} {:.3}" stroke="red" stroke-width="2"/>"#,
                x - 5.0,
                y - 5.0,
                x + 5.0,
                y + 5.0,
                x - 5.0,
                y + 5.0,
                x + 5.0,
                y - 5.0
            );
        } else {
            let _ = writeln!(
                s,
                r#"<circle class="root-inside" cx="{x:.3}" cy="{y:.3}" r="4" fill="steelblue"/>"#
            );
        }
    }
    let _ = writeln!(
        s,
        r#"<text x="{MARGIN}" y="20" font-family="sans-serif" font-size="12">Inverse roots of the AR characteristic polynomial</text>"#
    );
    s.push_str("</svg>\n");
    s
}
