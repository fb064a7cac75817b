//! Plain SVG drawings of patches: one `<polygon>` per tile.

use std::fmt::Write;

use tilehull_core::collar::CollaredSystem;
use tilehull_core::exact::Point;
use tilehull_core::tiling::{Patch, SubstitutionSystem, TileKind};

fn fill(kind: TileKind) -> &'static str {
    match kind {
        TileKind::TriangleLeft => "#8ecae6",
        TileKind::TriangleRight => "#ffb703",
        TileKind::Kite => "#90be6d",
        TileKind::RectLeft => "#f28482",
        TileKind::RectRight => "#84a59d",
        TileKind::Other => "#dddddd",
    }
}

struct Shape {
    points: Vec<(f64, f64)>,
    marks: Vec<((f64, f64), (f64, f64))>,
    kind: TileKind,
    label: Option<String>,
}

fn draw(shapes: &[Shape], dot: Option<(f64, f64)>) -> String {
    let mut lo = (f64::INFINITY, f64::INFINITY);
    let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for s in shapes {
        for &(x, y) in &s.points {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
    }
    if shapes.is_empty() {
        lo = (0.0, 0.0);
        hi = (1.0, 1.0);
    }
    let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-9);
    let pad = span * 0.02;
    let stroke = span / 400.0;
    // y grows downwards in SVG, so points are mirrored through the x-axis
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.6} {:.6} {:.6} {:.6}">"#,
        lo.0 - pad,
        -hi.1 - pad,
        hi.0 - lo.0 + 2.0 * pad,
        hi.1 - lo.1 + 2.0 * pad
    );
    for s in shapes {
        let pts: Vec<String> = s.points.iter().map(|(x, y)| format!("{x:.6},{:.6}", -y)).collect();
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="{}" stroke="black" stroke-width="{stroke:.6}"/>"#,
            pts.join(" "),
            fill(s.kind)
        );
        for ((x0, y0), (x1, y1)) in &s.marks {
            let _ = writeln!(
                out,
                r##"<line x1="{x0:.6}" y1="{:.6}" x2="{x1:.6}" y2="{:.6}" stroke="#555555" stroke-width="{:.6}"/>"##,
                -y0,
                -y1,
                stroke / 2.0
            );
        }
        if let Some(l) = &s.label {
            let n = s.points.len() as f64;
            let cx = s.points.iter().map(|p| p.0).sum::<f64>() / n;
            let cy = s.points.iter().map(|p| p.1).sum::<f64>() / n;
            let _ = writeln!(
                out,
                r#"<text x="{cx:.6}" y="{:.6}" font-size="{:.6}" text-anchor="middle">{l}</text>"#,
                -cy,
                span / 30.0
            );
        }
    }
    if let Some((x, y)) = dot {
        let _ = writeln!(out, r#"<circle cx="{x:.6}" cy="{:.6}" r="{:.6}" fill="black"/>"#, -y, span / 80.0);
    }
    out.push_str("</svg>\n");
    out
}

fn shapes(p: &Patch, s: &SubstitutionSystem, label: impl Fn(usize) -> Option<String>) -> Vec<Shape> {
    p.tiles
        .iter()
        .map(|t| {
            let proto = s.prototile(t.proto);
            let f = |q: &Point| t.motion.apply(q).to_f64();
            Shape {
                points: s.polygon(t).vertices().iter().map(Point::to_f64).collect(),
                marks: proto.marks.iter().map(|(a, b)| (f(a), f(b))).collect(),
                kind: proto.kind,
                label: label(t.proto),
            }
        })
        .collect()
}

pub fn render_patch(p: &Patch, s: &SubstitutionSystem) -> String {
    draw(&shapes(p, s, |_| None), None)
}

/// Collared tiles with their labels, centred on the origin, which is marked.
pub fn render_collared(p: &Patch, cs: &CollaredSystem) -> String {
    draw(&shapes(p, cs.system(), |k| Some(cs.label(k).to_string())), Some((0.0, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use tilehull_core::exact::Motion;
    use tilehull_core::tiling::{substitute, toy_square_system, Tile};

    #[test]
    fn one_polygon_per_tile() {
        let s = toy_square_system();
        let p = substitute(&Patch::single(Tile::new(0, Motion::identity())), &s, 2);
        let svg = render_patch(&p, &s);
        assert_eq!(svg.matches("<polygon").count(), 16);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
