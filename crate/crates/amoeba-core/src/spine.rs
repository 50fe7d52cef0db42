//! Spine assembly: the orders and Ronkin coefficients of an analysis become
//! a max-affine family whose nonsmoothness locus is a tropical curve inside
//! the amoeba.

use crate::analysis::AnalysisReport;
use crate::poly::ExponentVector;
use crate::svg::SvgCanvas;
use crate::tropical::{self, AffinePiece, Rect, TropicalCurve};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SpineError {
    #[error("a spine needs at least 2 complement components, got {0}")]
    TooFewComponents(usize),
    #[error("analysis report is artifact-suspect; refusing to build a spine from it")]
    ArtifactSuspect,
    #[error("component order or coefficient missing from the report")]
    IncompleteReport,
    #[error(transparent)]
    Tropical(#[from] tropical::TropicalError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpinePiece {
    pub slope: Vec<i64>,
    pub intercept: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpineResult {
    pub pieces: Vec<SpinePiece>,
    pub curve: TropicalCurve,
}

impl SpineResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spine serializes")
    }

    pub fn vertex_count(&self) -> usize {
        self.curve.vertex_count()
    }

    /// Samples the curve at `step` spacing: segments end to end, rays from
    /// their vertex until they leave the window.
    pub fn sample_points(&self, step: f64, window: Rect) -> Vec<[f64; 2]> {
        let mut out = Vec::new();
        for seg in &self.curve.segments {
            let a = self.curve.vertices[seg[0]];
            let b = self.curve.vertices[seg[1]];
            let len = (b[0] - a[0]).hypot(b[1] - a[1]);
            let steps = (len / step).ceil() as usize;
            for k in 0..=steps {
                let t = k as f64 / steps.max(1) as f64;
                out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
            }
        }
        for ray in &self.curve.rays {
            let v = self.curve.vertices[ray.vertex];
            let d = [ray.dir[0] as f64, ray.dir[1] as f64];
            let norm = d[0].hypot(d[1]);
            let mut t = 0.0;
            loop {
                let p = [v[0] + t * d[0] / norm, v[1] + t * d[1] / norm];
                if !window.contains(p) {
                    break;
                }
                out.push(p);
                t += step;
            }
        }
        out
    }

    /// Spine drawn over an amoeba raster.
    pub fn to_svg_overlay(&self, raster: &crate::raster::Raster, px_w: u32, px_h: u32) -> String {
        let base = raster.to_svg(px_w, px_h);
        let mut canvas = SvgCanvas::new(px_w, px_h, raster.domain);
        for seg in &self.curve.segments {
            canvas.line(
                self.curve.vertices[seg[0]],
                self.curve.vertices[seg[1]],
                "red",
                1.5,
            );
        }
        for ray in &self.curve.rays {
            let v = self.curve.vertices[ray.vertex];
            let d = [ray.dir[0] as f64, ray.dir[1] as f64];
            let reach = raster.domain.width() + raster.domain.height();
            canvas.line(v, [v[0] + reach * d[0], v[1] + reach * d[1]], "red", 1.5);
        }
        let overlay = canvas.finish();
        // splice the overlay body into the raster svg
        let inner = overlay
            .lines()
            .skip(1)
            .take_while(|l| !l.starts_with("</svg>"))
            .collect::<Vec<_>>()
            .join("\n");
        base.replace("</svg>", &format!("{inner}\n</svg>"))
    }
}

/// Builds the spine from an artifact-clean analysis: one affine piece per
/// component (slope = order, intercept = Ronkin coefficient), then the
/// corner locus of their maximum.
pub fn build_spine(report: &AnalysisReport, window: Rect) -> Result<SpineResult, SpineError> {
    if report.artifact_suspect {
        return Err(SpineError::ArtifactSuspect);
    }
    if report.count < 2 {
        return Err(SpineError::TooFewComponents(report.count));
    }
    let mut pieces = Vec::with_capacity(report.count);
    for comp in &report.components {
        if comp.order.is_empty() || !comp.a.is_finite() {
            return Err(SpineError::IncompleteReport);
        }
        pieces.push(AffinePiece {
            slope: ExponentVector::new(comp.order.clone()),
            intercept: comp.a,
        });
    }
    let affine: Vec<AffinePiece> = pieces.clone();
    let curve = tropical::tropical_curve(&affine, window)?;
    Ok(SpineResult {
        pieces: pieces
            .into_iter()
            .map(|p| SpinePiece {
                slope: p.slope.0,
                intercept: p.intercept,
            })
            .collect(),
        curve,
    })
}
