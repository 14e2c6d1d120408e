//! Plain-text pixmaps and SVG drawings of instances.

use std::fmt::Write as _;
use std::path::Path as FsPath;

use crate::exact::Tour;
use crate::instances::PointSet;
use crate::reduction::Triangulation;

pub type Rgb = [u8; 3];

pub const BACKGROUND: Rgb = [255, 255, 255];
pub const GREEN: Rgb = [0, 255, 0];
pub const RED: Rgb = [255, 0, 0];
/// Brightest grey used for costs; keeps greys distinct from the background.
pub const GREY_MAX: u8 = 200;

/// PPM plain lines are limited to this many characters.
const PPM_LINE_LIMIT: usize = 70;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pixmap {
    width: usize,
    height: usize,
    pixels: Vec<Rgb>,
}

impl Pixmap {
    pub fn new(width: usize, height: usize, fill: Rgb) -> Self {
        Self {
            width,
            height,
            pixels: vec![fill; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, row: usize, col: usize) -> Rgb {
        self.pixels[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, c: Rgb) {
        self.pixels[row * self.width + col] = c;
    }

    pub fn count(&self, c: Rgb) -> usize {
        self.pixels.iter().filter(|&&p| p == c).count()
    }

    /// Columns holding at least one non-background pixel.
    pub fn non_background_columns(&self) -> usize {
        (0..self.width)
            .filter(|&c| (0..self.height).any(|r| self.get(r, c) != BACKGROUND))
            .count()
    }

    /// ASCII `P3` encoding.
    pub fn to_p3(&self) -> String {
        let mut out = format!("P3\n{} {}\n255\n", self.width, self.height);
        for r in 0..self.height {
            let mut line = String::new();
            for c in 0..self.width {
                let [red, g, b] = self.get(r, c);
                let tok = format!("{red} {g} {b}");
                if !line.is_empty() && line.len() + 1 + tok.len() > PPM_LINE_LIMIT {
                    out.push_str(&line);
                    out.push('\n');
                    line.clear();
                }
                if !line.is_empty() {
                    line.push(' ');
                }
                line.push_str(&tok);
            }
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    pub fn write_p3(&self, path: impl AsRef<FsPath>) -> std::io::Result<()> {
        std::fs::write(path, self.to_p3())
    }
}

/// SVG of the points, optional triangulation edges (grey) and an optional
/// tour drawn thick on top. Vertex labels are 1-based.
pub fn render_svg(ps: &PointSet, tr: Option<&Triangulation>, tour: Option<&Tour>) -> String {
    const SIZE: f64 = 480.0;
    const MARGIN: f64 = 24.0;
    let pts = ps.points();
    let (mut min_x, mut min_y, mut max_x, mut max_y) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in pts {
        min_x = min_x.min(p.x);
        min_y = min_y.min(p.y);
        max_x = max_x.max(p.x);
        max_y = max_y.max(p.y);
    }
    let span = (max_x - min_x).max(max_y - min_y).max(f64::MIN_POSITIVE);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    // SVG y grows downwards.
    let xy = |i: usize| {
        (
            MARGIN + (pts[i].x - min_x) * scale,
            SIZE - MARGIN - (pts[i].y - min_y) * scale,
        )
    };
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    if let Some(tr) = tr {
        writeln!(out, r##"<g stroke="#999999" stroke-width="1">"##).unwrap();
        for (a, b) in tr.edges() {
            let ((x1, y1), (x2, y2)) = (xy(a), xy(b));
            writeln!(
                out,
                r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#
            )
            .unwrap();
        }
        writeln!(out, "</g>").unwrap();
    }
    if let Some(t) = tour {
        writeln!(
            out,
            r##"<g stroke="#1f5fbf" stroke-width="3" fill="none">"##
        )
        .unwrap();
        for (a, b) in t.edges() {
            let ((x1, y1), (x2, y2)) = (xy(a), xy(b));
            writeln!(
                out,
                r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#
            )
            .unwrap();
        }
        writeln!(out, "</g>").unwrap();
    }
    writeln!(
        out,
        r#"<g fill="black" font-family="sans-serif" font-size="11">"#
    )
    .unwrap();
    for i in 0..pts.len() {
        let (x, y) = xy(i);
        writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="3"/>"#).unwrap();
        writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}">{}</text>"#,
            x + 5.0,
            y - 5.0,
            i + 1
        )
        .unwrap();
    }
    writeln!(out, "</g>\n</svg>").unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p3_header_and_wrapping() {
        let mut pm = Pixmap::new(10, 2, BACKGROUND);
        pm.set(1, 3, GREEN);
        let text = pm.to_p3();
        assert!(text.starts_with("P3\n10 2\n255\n"));
        assert!(text.lines().all(|l| l.len() <= 70));
        let values: Vec<u32> = text
            .lines()
            .skip(3)
            .flat_map(|l| l.split_whitespace().map(|t| t.parse::<u32>().unwrap()))
            .collect();
        assert_eq!(values.len(), 10 * 2 * 3);
        assert_eq!(&values[(10 + 3) * 3..(10 + 3) * 3 + 3], &[0, 255, 0]);
        assert_eq!(pm.non_background_columns(), 1);
    }

    #[test]
    fn svg_mentions_every_vertex() {
        let ps = PointSet::from_coords(&[(0.0, 0.0), (1.0, 0.0), (0.5, 1.0)]).unwrap();
        let t = Tour::from_labels(&[1, 2, 3]).unwrap();
        let svg = render_svg(&ps, None, Some(&t));
        assert_eq!(svg.matches("<circle").count(), 3);
        assert_eq!(svg.matches("<line").count(), 3);
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
