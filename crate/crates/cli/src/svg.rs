//! Static SVG figures for paths, shadows and support regions.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use greedy_core::dyck::{DyckPath, Edge, ShadowReport};
use greedy_core::greedy::{PointedElement, SupportRegion};
use num_traits::ToPrimitive;

const UNIT: f64 = 40.0;
const MARGIN: f64 = 30.0;

struct Canvas {
    width: f64,
    height: f64,
    body: String,
}

impl Canvas {
    fn new(w: f64, h: f64) -> Self {
        Canvas { width: w * UNIT + 2.0 * MARGIN, height: h * UNIT + 2.0 * MARGIN, body: String::new() }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + x * UNIT
    }

    // y grows upward in figure coordinates
    fn py(&self, y: f64) -> f64 {
        self.height - MARGIN - y * UNIT
    }

    fn line(&mut self, a: (f64, f64), b: (f64, f64), style: &str) {
        let (x1, y1, x2, y2) = (self.px(a.0), self.py(a.1), self.px(b.0), self.py(b.1));
        let _ = writeln!(self.body, r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" {style}/>"#);
    }

    fn rect(&mut self, lo: (f64, f64), hi: (f64, f64), style: &str) {
        let (x, y) = (self.px(lo.0), self.py(hi.1));
        let (w, h) = ((hi.0 - lo.0) * UNIT, (hi.1 - lo.1) * UNIT);
        let _ = writeln!(self.body, r#"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" {style}/>"#);
    }

    fn dot(&mut self, p: (f64, f64), r: f64, style: &str) {
        let (cx, cy) = (self.px(p.0), self.py(p.1));
        let _ = writeln!(self.body, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{r:.1}" {style}/>"#);
    }

    fn text(&mut self, p: (f64, f64), dy: f64, s: &str) {
        let (x, y) = (self.px(p.0), self.py(p.1) + dy);
        let _ = writeln!(self.body, r#"<text x="{x:.2}" y="{y:.2}" font-size="11" text-anchor="middle">{s}</text>"#);
    }

    fn grid(&mut self, w: usize, h: usize) {
        for i in 0..=w {
            self.line((i as f64, 0.0), (i as f64, h as f64), r##"stroke="#ddd" stroke-width="1""##);
        }
        for j in 0..=h {
            self.line((0.0, j as f64), (w as f64, j as f64), r##"stroke="#ddd" stroke-width="1""##);
        }
    }

    fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.0} {:.0}\">\n{}</svg>\n",
            self.width, self.height, self.width, self.height, self.body
        )
    }
}

fn draw_path(cv: &mut Canvas, path: &DyckPath) {
    cv.grid(path.a1(), path.a2());
    cv.line((0.0, 0.0), (path.a1() as f64, path.a2() as f64), r##"stroke="#999" stroke-dasharray="4 3""##);
    let verts = path.vertices();
    for (i, e) in path.edges().iter().enumerate() {
        let (a, b) = (verts[i], verts[i + 1]);
        let (a, b) = ((a.x as f64, a.y as f64), (b.x as f64, b.y as f64));
        let label = match *e {
            Edge::H(k) => format!("u{k}"),
            Edge::V(j) => format!("v{j}"),
        };
        cv.line(a, b, r##"stroke="#000" stroke-width="2""##);
        let mid = ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
        match e {
            Edge::H(_) => cv.text(mid, -5.0, &label),
            Edge::V(_) => cv.text((mid.0 + 0.3, mid.1), 4.0, &label),
        }
    }
    for v in verts {
        cv.dot((v.x as f64, v.y as f64), 2.5, r##"fill="#000""##);
    }
}

/// The maximal Dyck path with edge labels and the diagonal.
pub fn dyck_svg(path: &DyckPath) -> String {
    let mut cv = Canvas::new(path.a1() as f64, path.a2() as f64);
    draw_path(&mut cv, path);
    cv.finish()
}

/// Each `v_j` in `S2` dotted, with a grey strip in the row below its upper
/// end over its local shadow; remote-shadow edges dotted and numbered.
pub fn shadows_svg(path: &DyckPath, s2: &BTreeSet<usize>, report: &ShadowReport) -> String {
    let mut cv = Canvas::new(path.a1() as f64, path.a2() as f64);
    for (&j, local) in &report.local {
        let top = path.upper_end(j).y as f64;
        for &k in local {
            let x = (k - 1) as f64;
            cv.rect((x, top - 1.0), (x + 1.0, top - 0.1), r##"fill="#ccc" stroke="none""##);
        }
    }
    draw_path(&mut cv, path);
    let verts = path.vertices();
    for (i, e) in path.edges().iter().enumerate() {
        let dotted = match *e {
            Edge::H(k) => report.rsh.contains(&k),
            Edge::V(j) => s2.contains(&j),
        };
        if dotted {
            let (a, b) = (verts[i], verts[i + 1]);
            cv.line(
                (a.x as f64, a.y as f64),
                (b.x as f64, b.y as f64),
                r##"stroke="#fff" stroke-width="3" stroke-dasharray="2 3""##,
            );
        }
    }
    for (n, &k) in report.rsh.iter().enumerate() {
        let y = path.height_of(k) as f64;
        cv.text((k as f64 - 0.5, y), 14.0, &format!("({})", n + 1));
    }
    cv.finish()
}

fn f(r: &num_rational::BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// The region in `(p, q)` coordinates: included edges solid, excluded dashed;
/// support points filled, other lattice points of the region hollow.
pub fn support_svg(region: &SupportRegion, e: &PointedElement) -> String {
    let pts = region.lattice_points();
    let max_x = region.vertices.iter().map(|v| f(&v.0)).fold(1.0, f64::max).ceil();
    let max_y = region.vertices.iter().map(|v| f(&v.1)).fold(1.0, f64::max).ceil();
    let mut cv = Canvas::new(max_x, max_y);
    cv.grid(max_x as usize, max_y as usize);
    let n = region.vertices.len();
    for i in 0..n {
        let (a, b) = (&region.vertices[i], &region.vertices[(i + 1) % n]);
        let style = if region.edge_included[i] {
            r##"stroke="#06c" stroke-width="2""##
        } else {
            r##"stroke="#06c" stroke-width="2" stroke-dasharray="6 4""##
        };
        cv.line((f(&a.0), f(&a.1)), (f(&b.0), f(&b.1)), style);
    }
    let support = e.pointed_support();
    for &(p, q) in &pts {
        let style = if support.contains(&(p, q)) { r##"fill="#000""## } else { r##"fill="none" stroke="#000""## };
        cv.dot((p as f64, q as f64), 3.5, style);
    }
    cv.text((max_x / 2.0, max_y), -12.0, &format!("case {}", region.case));
    cv.finish()
}
