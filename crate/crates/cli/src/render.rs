//! Plane figures of blocks: ASCII in the terminal, or self-contained SVG.
//!
//! Points live on an integer grid, `x` to the right and `y` upwards.
//! Edges join points at offsets `(1,0)`, `(0,1)` and, when diagonals are
//! on, `(1,-1)`; the last one is the third direction of the rank-3
//! apartment in bracket coordinates.

use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Figure {
    pub title: String,
    pub points: BTreeMap<(i64, i64), String>,
    pub diagonals: bool,
}

impl Figure {
    pub fn new(title: impl Into<String>, diagonals: bool) -> Self {
        Figure { title: title.into(), points: BTreeMap::new(), diagonals }
    }

    pub fn put(&mut self, x: i64, y: i64, mark: impl Into<String>) {
        self.points.insert((x, y), mark.into());
    }

    fn bounds(&self) -> Option<(i64, i64, i64, i64)> {
        let xs = self.points.keys().map(|p| p.0);
        let ys = self.points.keys().map(|p| p.1);
        Some((xs.clone().min()?, xs.max()?, ys.clone().min()?, ys.max()?))
    }

    fn edges(&self) -> Vec<((i64, i64), (i64, i64))> {
        let mut steps = vec![(1, 0), (0, 1)];
        if self.diagonals {
            steps.push((1, -1));
        }
        let mut out = Vec::new();
        for &(x, y) in self.points.keys() {
            for &(dx, dy) in &steps {
                let q = (x + dx, y + dy);
                if self.points.contains_key(&q) {
                    out.push(((x, y), q));
                }
            }
        }
        out
    }

    pub fn to_ascii(&self) -> String {
        let mut out = format!("{}\n", self.title);
        let Some((x0, x1, y0, y1)) = self.bounds() else {
            out.push_str("(empty)\n");
            return out;
        };
        let w = self.points.values().map(|m| m.chars().count()).max().unwrap_or(1).max(1);
        let step = w + 3;
        let cols = (x1 - x0) as usize * step + w;
        let rows = (y1 - y0) as usize * 2 + 1;
        let mut canvas = vec![vec![' '; cols]; rows];
        let at = |x: i64, y: i64| ((y1 - y) as usize * 2, (x - x0) as usize * step);
        for ((x, y), (qx, qy)) in self.edges() {
            let (r, c) = at(x, y);
            match (qx - x, qy - y) {
                (1, 0) => {
                    for k in c + w..c + step {
                        canvas[r][k] = '-';
                    }
                }
                (0, 1) => canvas[r - 1][c + (w - 1) / 2] = '|',
                _ => canvas[r + 1][c + w + 1] = '\\',
            }
        }
        for (&(x, y), mark) in &self.points {
            let (r, c) = at(x, y);
            for (k, ch) in format!("{mark:^w$}").chars().enumerate() {
                canvas[r][c + k] = ch;
            }
        }
        for row in canvas {
            let line: String = row.into_iter().collect();
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }

    fn svg_body(&self, out: &mut String, top: f64) -> f64 {
        const UNIT: f64 = 48.0;
        const PAD: f64 = 24.0;
        let _ = writeln!(out, r#"<text x="{PAD}" y="{:.1}" font-family="monospace" font-size="14">{}</text>"#, top + 16.0, escape(&self.title));
        let Some((x0, _, _, y1)) = self.bounds() else {
            return top + 32.0;
        };
        let origin = top + 32.0 + PAD;
        let pos = |x: i64, y: i64| (PAD + (x - x0) as f64 * UNIT, origin + (y1 - y) as f64 * UNIT);
        for (p, q) in self.edges() {
            let (ax, ay) = pos(p.0, p.1);
            let (bx, by) = pos(q.0, q.1);
            let _ = writeln!(out, r##"<line x1="{ax:.1}" y1="{ay:.1}" x2="{bx:.1}" y2="{by:.1}" stroke="#555" stroke-width="1.5"/>"##);
        }
        let mut bottom = origin;
        for (&(x, y), mark) in &self.points {
            let (cx, cy) = pos(x, y);
            bottom = bottom.max(cy);
            let _ = writeln!(out, r##"<circle cx="{cx:.1}" cy="{cy:.1}" r="11" fill="#fff" stroke="#222"/>"##);
            let _ = writeln!(
                out,
                r#"<text x="{cx:.1}" y="{:.1}" text-anchor="middle" font-family="monospace" font-size="12">{}</text>"#,
                cy + 4.0,
                escape(mark)
            );
        }
        bottom + PAD
    }

    fn svg_width(&self) -> f64 {
        self.bounds().map_or(200.0, |(x0, x1, _, _)| (x1 - x0) as f64 * 48.0 + 48.0).max(200.0)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn ascii(figures: &[Figure]) -> String {
    figures.iter().map(Figure::to_ascii).collect::<Vec<_>>().join("\n")
}

/// All figures stacked vertically in one document.
pub fn svg(figures: &[Figure]) -> String {
    let mut body = String::new();
    let mut y = 0.0;
    for f in figures {
        y = f.svg_body(&mut body, y) + 8.0;
    }
    let width = figures.iter().map(Figure::svg_width).fold(200.0, f64::max);
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{y:.0}\" viewBox=\"0 0 {width:.0} {y:.0}\">\n{body}</svg>\n"
    )
}
