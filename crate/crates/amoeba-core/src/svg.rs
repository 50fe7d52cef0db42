//! Minimal SVG writer for rasters, curves, point clouds and benchmark
//! scatter plots. World coordinates map onto a fixed pixel viewport with
//! the y axis pointing up.

use crate::tropical::Rect;
use std::fmt::Write;

pub struct SvgCanvas {
    px_w: f64,
    px_h: f64,
    world: Rect,
    body: String,
}

impl SvgCanvas {
    pub fn new(px_w: u32, px_h: u32, world: Rect) -> Self {
        SvgCanvas {
            px_w: px_w as f64,
            px_h: px_h as f64,
            world,
            body: String::new(),
        }
    }

    fn tx(&self, p: [f64; 2]) -> (f64, f64) {
        let x = (p[0] - self.world.x0) / self.world.width() * self.px_w;
        let y = (self.world.y1 - p[1]) / self.world.height() * self.px_h;
        (x, y)
    }

    pub fn world(&self) -> Rect {
        self.world
    }

    pub fn circle(&mut self, center: [f64; 2], radius_px: f64, fill: &str) {
        let (cx, cy) = self.tx(center);
        writeln!(
            self.body,
            r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{radius_px}" fill="{fill}"/>"#
        )
        .unwrap();
    }

    pub fn line(&mut self, a: [f64; 2], b: [f64; 2], stroke: &str, width_px: f64) {
        let (x1, y1) = self.tx(a);
        let (x2, y2) = self.tx(b);
        writeln!(
            self.body,
            r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{stroke}" stroke-width="{width_px}"/>"#
        )
        .unwrap();
    }

    pub fn polyline(&mut self, pts: &[[f64; 2]], stroke: &str, width_px: f64) {
        if pts.len() < 2 {
            return;
        }
        let mut coords = String::new();
        for p in pts {
            let (x, y) = self.tx(*p);
            write!(coords, "{x:.2},{y:.2} ").unwrap();
        }
        writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{width_px}"/>"#,
            coords.trim_end()
        )
        .unwrap();
    }

    /// Axis-aligned filled rectangle given in world coordinates.
    pub fn rect(&mut self, r: Rect, fill: &str) {
        let (x, y) = self.tx([r.x0, r.y1]);
        let w = r.width() / self.world.width() * self.px_w;
        let h = r.height() / self.world.height() * self.px_h;
        writeln!(
            self.body,
            r#"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="{fill}"/>"#
        )
        .unwrap();
    }

    pub fn text(&mut self, p: [f64; 2], size_px: f64, content: &str) {
        let (x, y) = self.tx(p);
        writeln!(
            self.body,
            r#"<text x="{x:.2}" y="{y:.2}" font-size="{size_px}" font-family="monospace">{content}</text>"#
        )
        .unwrap();
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n{}</svg>\n",
            self.px_w, self.px_h, self.px_w, self.px_h, self.body
        )
    }
}
