use crate::geometry::{PolyhedronSet, Point};
use crate::partition::{AnalyticPartition, Domain, PolyhedralPartition};
use std::fmt::Write;

/// Layers drawn by [`svg`]; absent layers are skipped.
pub struct SvgScene<'a> {
    pub input: &'a AnalyticPartition<2>,
    pub pieces: Option<&'a PolyhedronSet<2>>,
    pub output: Option<&'a PolyhedralPartition<2>>,
    /// Draw the Voronoi skeleton when the tessellation has at most this many cells.
    pub skeleton_limit: usize,
    /// Drawing window; defaults to the bounds of the input.
    pub window: Option<(Point<2>, Point<2>)>,
}

const SIZE: f64 = 800.0;

struct Canvas {
    lo: Point<2>,
    scale: f64,
    height: f64,
    out: String,
}

impl Canvas {
    fn map(&self, p: &Point<2>) -> (f64, f64) {
        ((p[0] - self.lo[0]) * self.scale, self.height - (p[1] - self.lo[1]) * self.scale)
    }

    fn polyline(&mut self, pts: &[Point<2>], closed: bool, style: &str) {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (x, y) = self.map(p);
            let _ = write!(d, "{}{x:.3},{y:.3}", if i == 0 { "M" } else { " L" });
        }
        if closed {
            d.push_str(" Z");
        }
        let _ = writeln!(self.out, r#"<path d="{d}" {style}/>"#);
    }
}

fn domain_outline(d: &Domain) -> (Vec<Point<2>>, bool) {
    match d {
        Domain::Disc { center, radius } => {
            let k = 256;
            let pts = (0..k)
                .map(|i| {
                    let a = std::f64::consts::TAU * i as f64 / k as f64;
                    Point::<2>::new(center[0] + radius * a.cos(), center[1] + radius * a.sin())
                })
                .collect();
            (pts, true)
        }
        Domain::ConvexPolygon { vertices } => (vertices.iter().map(|v| Point::<2>::new(v[0], v[1])).collect(), true),
    }
}

/// Overlay of Ω, the input interfaces, the flat pieces, the tessellation
/// skeleton and the output jump set.
pub fn svg(scene: &SvgScene<'_>) -> String {
    let (lo, hi) = scene.window.unwrap_or_else(|| scene.input.bounds());
    let ext = hi - lo;
    let scale = SIZE / ext.max();
    let (w, h) = (ext[0] * scale, ext[1] * scale);
    let mut c = Canvas { lo, scale, height: h, out: String::new() };
    let _ = writeln!(c.out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#);
    let _ = writeln!(c.out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if let Some(d) = scene.input.domain() {
        let (pts, closed) = domain_outline(d);
        c.polyline(&pts, closed, r##"fill="#f4f4f4" stroke="#999" stroke-width="1""##);
    }
    if let Some(w) = scene.output {
        if w.cells().len() <= scene.skeleton_limit {
            let _ = writeln!(c.out, r#"<g id="skeleton">"#);
            for cell in w.cells() {
                for f in cell.faces() {
                    let pts: Vec<Point<2>> = f.vertices.iter().map(|&i| cell.vertices()[i]).collect();
                    c.polyline(&pts, false, r##"fill="none" stroke="#ccc" stroke-width="0.3""##);
                }
            }
            let _ = writeln!(c.out, "</g>");
        }
    }
    let _ = writeln!(c.out, r#"<g id="input">"#);
    for p in scene.input.patches() {
        let k = 400;
        let pts: Vec<Point<2>> = (0..=k).map(|i| p.geometry.point([i as f64 / k as f64, 0.0])).collect();
        c.polyline(&pts, false, r##"fill="none" stroke="#1f77b4" stroke-width="3" stroke-opacity="0.5""##);
    }
    let _ = writeln!(c.out, "</g>");
    if let Some(set) = scene.pieces {
        let _ = writeln!(c.out, r#"<g id="pieces">"#);
        for piece in set.pieces() {
            for f in &piece.facets {
                c.polyline(f.vertices(), false, r##"fill="none" stroke="#2ca02c" stroke-width="2""##);
            }
        }
        let _ = writeln!(c.out, "</g>");
    }
    if let Some(w) = scene.output {
        let _ = writeln!(c.out, r#"<g id="output">"#);
        for j in w.jump_facets() {
            c.polyline(j.facet.vertices(), false, r##"fill="none" stroke="#d62728" stroke-width="1""##);
        }
        let _ = writeln!(c.out, "</g>");
    }
    c.out.push_str("</svg>\n");
    c.out
}

/// ASCII PLY of the jump facets of `w`, with the two phases as face properties.
pub fn ply(w: &PolyhedralPartition<3>) -> String {
    let mut verts = String::new();
    let mut faces = String::new();
    let mut nv = 0usize;
    for j in w.jump_facets() {
        let vs = j.facet.vertices();
        for v in vs {
            let _ = writeln!(verts, "{:e} {:e} {:e}", v[0], v[1], v[2]);
        }
        let _ = write!(faces, "{}", vs.len());
        for k in 0..vs.len() {
            let _ = write!(faces, " {}", nv + k);
        }
        let _ = writeln!(faces, " {} {}", j.minus, j.plus);
        nv += vs.len();
    }
    let mut out = String::new();
    let _ = writeln!(out, "ply\nformat ascii 1.0\ncomment jump facets of a polyhedral partition");
    let _ = writeln!(out, "element vertex {nv}\nproperty double x\nproperty double y\nproperty double z");
    let _ = writeln!(
        out,
        "element face {}\nproperty list uchar int vertex_indices\nproperty int minus\nproperty int plus\nend_header",
        w.jump_facets().len()
    );
    out + &verts + &faces
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ConvexPolytope;
    use crate::harness::{planar, ScenarioKind};

    #[test]
    fn svg_has_all_layers() {
        let u = planar(ScenarioKind::Circle).unwrap();
        let cells = vec![
            ConvexPolytope::from_box(&Point::<2>::zeros(), &Point::<2>::new(0.5, 1.0)),
            ConvexPolytope::from_box(&Point::<2>::new(0.5, 0.0), &Point::<2>::repeat(1.0)),
        ];
        let w = PolyhedralPartition::from_cells(cells, vec![0, 1], 2).unwrap();
        let s = svg(&SvgScene { input: &u, pieces: None, output: Some(&w), skeleton_limit: 10, window: None });
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        for id in ["skeleton", "input", "output"] {
            assert!(s.contains(&format!(r#"id="{id}""#)), "{id}");
        }
        assert!(!s.contains(r#"id="pieces""#));
    }

    #[test]
    fn ply_counts() {
        let a = ConvexPolytope::<3>::from_box(&Point::<3>::zeros(), &Point::<3>::repeat(1.0));
        let b = ConvexPolytope::<3>::from_box(&Point::<3>::new(1.0, 0.0, 0.0), &Point::<3>::new(2.0, 1.0, 1.0));
        let w = PolyhedralPartition::from_cells(vec![a, b], vec![0, 1], 2).unwrap();
        let text = ply(&w);
        assert!(text.contains("element vertex 4\n") && text.contains("element face 1\n"));
        assert!(text.trim_end().ends_with("4 0 1 2 3 0 1"));
    }
}
