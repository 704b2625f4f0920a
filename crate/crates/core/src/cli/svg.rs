use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use crate::aps::Report;
use crate::geometry::{Point, PolygonV};

const SIZE: f64 = 480.0;
const MARGIN: f64 = 48.0;
const TICKS: usize = 5;

/// Writes the starting set (outline) and the final set (filled) as SVG.
pub fn emit_svg(report: &Report, out_path: &Path) -> io::Result<()> {
    fs::write(out_path, render_svg(report))
}

pub fn render_svg(report: &Report) -> String {
    let sets = [&report.initial_set, &report.final_set];
    let pts: Vec<Point> = sets
        .iter()
        .flat_map(|s| s.vertices().iter().copied())
        .collect();
    let (lo, hi) = bounds(&pts);
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let map = |p: Point| {
        (
            (p.x - lo.x) * scale + MARGIN,
            SIZE - MARGIN - (p.y - lo.y) * scale,
        )
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

    // axes with tick labels in payoff units
    let (x0, y0) = (MARGIN, SIZE - MARGIN);
    let _ = writeln!(
        s,
        r#"<g stroke="black" stroke-width="1"><line x1="{x0}" y1="{y0}" x2="{}" y2="{y0}"/><line x1="{x0}" y1="{y0}" x2="{x0}" y2="{MARGIN}"/></g>"#,
        SIZE - MARGIN
    );
    let _ = writeln!(
        s,
        r#"<g font-family="sans-serif" font-size="11" fill="black">"#
    );
    for k in 0..=TICKS {
        let f = k as f64 / TICKS as f64;
        let px = MARGIN + f * (SIZE - 2.0 * MARGIN);
        let py = SIZE - MARGIN - f * (SIZE - 2.0 * MARGIN);
        let _ = writeln!(
            s,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{:.2}</text>"#,
            y0 + 16.0,
            lo.x + f * span
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{py:.2}" text-anchor="end">{:.2}</text>"#,
            x0 - 6.0,
            lo.y + f * span
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">payoff of player 1</text>"#,
        SIZE / 2.0,
        SIZE - 8.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">payoff of player 2</text>"#,
        SIZE / 2.0,
        SIZE / 2.0
    );
    let _ = writeln!(s, "</g>");

    shape(&mut s, &report.initial_set, &map, "none", "#555555");
    shape(&mut s, &report.final_set, &map, "#4a78c2", "#1f3f7a");
    let _ = writeln!(s, "</svg>");
    s
}

fn shape(
    s: &mut String,
    p: &PolygonV,
    map: &impl Fn(Point) -> (f64, f64),
    fill: &str,
    stroke: &str,
) {
    let v: Vec<(f64, f64)> = p.vertices().iter().map(|&q| map(q)).collect();
    match v.len() {
        0 => {}
        1 => {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.3}" cy="{:.3}" r="4" fill="{stroke}"/>"#,
                v[0].0, v[0].1
            );
        }
        2 => {
            let _ = writeln!(
                s,
                r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{stroke}" stroke-width="2"/>"#,
                v[0].0, v[0].1, v[1].0, v[1].1
            );
        }
        _ => {
            let pts = v
                .iter()
                .map(|(x, y)| format!("{x:.3},{y:.3}"))
                .collect::<Vec<_>>()
                .join(" ");
            let opacity = if fill == "none" {
                ""
            } else {
                r#" fill-opacity="0.6""#
            };
            let _ = writeln!(
                s,
                r#"<polygon points="{pts}" fill="{fill}"{opacity} stroke="{stroke}" stroke-width="1.5"/>"#
            );
        }
    }
}

fn bounds(pts: &[Point]) -> (Point, Point) {
    if pts.is_empty() {
        return (Point::new(0.0, 0.0), Point::new(1.0, 1.0));
    }
    let lo = pts
        .iter()
        .fold(Point::new(f64::INFINITY, f64::INFINITY), |m, p| {
            Point::new(m.x.min(p.x), m.y.min(p.y))
        });
    let hi = pts
        .iter()
        .fold(Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY), |m, p| {
            Point::new(m.x.max(p.x), m.y.max(p.y))
        });
    // pad so single points and segments stay visible
    let pad = 0.05 * (hi.x - lo.x).max(hi.y - lo.y).max(1.0);
    (
        Point::new(lo.x - pad, lo.y - pad),
        Point::new(hi.x + pad, hi.y + pad),
    )
}
