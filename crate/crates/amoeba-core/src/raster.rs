//! Pixel rasters of amoebas by three algorithms (fiber sampling, per-pixel
//! membership, greedy frontier expansion) plus coamoeba, compactified-amoeba
//! and contour point clouds.
//!
//! Membership rasterization tests fibers in both variables with a tolerance
//! tied to the pixel size; a single sweep direction loses axis-aligned
//! tentacles thinner than a pixel column.

use crate::membership::{self, FiberRoots, FiberSolver, MembershipError};
use crate::poly::{C64, LaurentPolynomial, moment_map};
use crate::roots::RootError;
use crate::svg::SvgCanvas;
use crate::tropical::{self, Rect};
use rayon::prelude::*;
use serde::Serialize;
use std::io::{self, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("rasters need at least 2 pixels per side")]
    TooSmall,
    #[error("raster operations handle 2 variables, got {0}")]
    Unsupported(usize),
    #[error("z{} derivative vanishes at every sampled locus point", variable + 1)]
    GradientVanishes { variable: usize },
    #[error("no locus points were sampled")]
    EmptyLocus,
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Membership(#[from] MembershipError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CellState {
    Amoeba,
    Complement,
    Untested,
}

/// How a raster was produced, plus the numeric incident counters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub algorithm: String,
    pub params: String,
    /// Fibers whose root iteration failed (skipped, never silent).
    pub no_convergence: usize,
    /// Pixels that went through the membership decision.
    pub tested_pixels: usize,
    /// Pixels skipped by the tropical pruning certificate.
    pub pruned_pixels: usize,
}

/// Pixel grid over a log-space window, center-of-pixel convention,
/// row 0 at the bottom of the window.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub domain: Rect,
    pub width: usize,
    pub height: usize,
    cells: Vec<CellState>,
    pub provenance: Provenance,
}

impl Raster {
    fn new(domain: Rect, width: usize, height: usize, provenance: Provenance) -> Self {
        Raster {
            domain,
            width,
            height,
            cells: vec![CellState::Untested; width * height],
            provenance,
        }
    }

    pub fn cells(&self) -> &[CellState] {
        &self.cells
    }

    pub fn get(&self, col: usize, row: usize) -> CellState {
        self.cells[row * self.width + col]
    }

    fn set(&mut self, col: usize, row: usize, s: CellState) {
        self.cells[row * self.width + col] = s;
    }

    pub fn pixel_center(&self, col: usize, row: usize) -> [f64; 2] {
        [
            self.domain.x0 + (col as f64 + 0.5) * self.domain.width() / self.width as f64,
            self.domain.y0 + (row as f64 + 0.5) * self.domain.height() / self.height as f64,
        ]
    }

    /// Pixel containing a point, if inside the domain. Points on the upper
    /// edges map to the last pixel so the domain is fully covered.
    pub fn pixel_of(&self, p: [f64; 2]) -> Option<(usize, usize)> {
        if !self.domain.contains(p) {
            return None;
        }
        let col = (((p[0] - self.domain.x0) / self.domain.width() * self.width as f64) as usize)
            .min(self.width - 1);
        let row = (((p[1] - self.domain.y0) / self.domain.height() * self.height as f64) as usize)
            .min(self.height - 1);
        Some((col, row))
    }

    pub fn count(&self, s: CellState) -> usize {
        self.cells.iter().filter(|&&c| c == s).count()
    }

    pub fn has_untested(&self) -> bool {
        self.cells.iter().any(|&c| c == CellState::Untested)
    }

    /// Fraction of amoeba pixels with at most one amoeba 8-neighbor; high
    /// values flag sampling artifacts ("dust").
    pub fn isolated_pixel_metric(&self) -> f64 {
        let mut amoeba = 0usize;
        let mut isolated = 0usize;
        for row in 0..self.height {
            for col in 0..self.width {
                if self.get(col, row) != CellState::Amoeba {
                    continue;
                }
                amoeba += 1;
                let mut neighbors = 0;
                for dr in -1i64..=1 {
                    for dc in -1i64..=1 {
                        if dr == 0 && dc == 0 {
                            continue;
                        }
                        let (nc, nr) = (col as i64 + dc, row as i64 + dr);
                        if nc >= 0
                            && nr >= 0
                            && (nc as usize) < self.width
                            && (nr as usize) < self.height
                            && self.get(nc as usize, nr as usize) == CellState::Amoeba
                        {
                            neighbors += 1;
                        }
                    }
                }
                if neighbors <= 1 {
                    isolated += 1;
                }
            }
        }
        if amoeba == 0 {
            0.0
        } else {
            isolated as f64 / amoeba as f64
        }
    }

    /// Binary P6 image: amoeba black, complement white, untested gray.
    pub fn write_ppm(&self, out: &mut impl Write) -> io::Result<()> {
        write!(out, "P6\n{} {}\n255\n", self.width, self.height)?;
        let mut buf = Vec::with_capacity(self.width * self.height * 3);
        for row in (0..self.height).rev() {
            for col in 0..self.width {
                let rgb: [u8; 3] = match self.get(col, row) {
                    CellState::Amoeba => [0, 0, 0],
                    CellState::Complement => [255, 255, 255],
                    CellState::Untested => [200, 200, 200],
                };
                buf.extend_from_slice(&rgb);
            }
        }
        out.write_all(&buf)
    }

    pub fn ppm_bytes(&self) -> Vec<u8> {
        let mut v = Vec::new();
        self.write_ppm(&mut v).expect("write to Vec cannot fail");
        v
    }

    /// Amoeba pixels as run-length rectangles, one polyline-free SVG.
    pub fn to_svg(&self, px_w: u32, px_h: u32) -> String {
        let mut canvas = SvgCanvas::new(px_w, px_h, self.domain);
        canvas.rect(self.domain, "white");
        let pw = self.domain.width() / self.width as f64;
        let ph = self.domain.height() / self.height as f64;
        for row in 0..self.height {
            let mut col = 0;
            while col < self.width {
                if self.get(col, row) == CellState::Amoeba {
                    let start = col;
                    while col < self.width && self.get(col, row) == CellState::Amoeba {
                        col += 1;
                    }
                    let x0 = self.domain.x0 + start as f64 * pw;
                    let y0 = self.domain.y0 + row as f64 * ph;
                    canvas.rect(
                        Rect::new(x0, x0 + (col - start) as f64 * pw, y0, y0 + ph),
                        "black",
                    );
                } else {
                    col += 1;
                }
            }
        }
        canvas.finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CloudTag {
    Amoeba,
    Coamoeba,
    Compactified,
    Contour,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub tag: CloudTag,
    pub points: Vec<[f64; 2]>,
}

impl PointCloud {
    /// Bare JSON array of [x, y] pairs.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.points).expect("points serialize")
    }

    pub fn to_svg(&self, px_w: u32, px_h: u32, world: Rect) -> String {
        let mut canvas = SvgCanvas::new(px_w, px_h, world);
        for p in &self.points {
            canvas.circle(*p, 1.0, "black");
        }
        canvas.finish()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GridRootParams {
    pub moduli: usize,
    pub angles: usize,
    pub width: usize,
    pub height: usize,
}

impl Default for GridRootParams {
    fn default() -> Self {
        GridRootParams {
            moduli: 100,
            angles: 100,
            width: 256,
            height: 256,
        }
    }
}

fn lerp(a: f64, b: f64, t: f64) -> f64 {
    a * (1.0 - t) + b * t
}

/// Fiber-sampling ("naive") raster: sweep `moduli x angles` values of the
/// first variable over the window's x-range, solve each fiber in the second
/// variable and mark the pixels containing the Log images. Pixels never hit
/// stay untested; this algorithm cannot certify the complement.
pub fn grid_root_raster(
    p: &LaurentPolynomial,
    domain: Rect,
    params: GridRootParams,
) -> Result<(Raster, PointCloud), RasterError> {
    if p.dimension() != 2 {
        return Err(RasterError::Unsupported(p.dimension()));
    }
    if params.moduli < 2 || params.angles < 2 || params.width < 2 || params.height < 2 {
        return Err(RasterError::TooSmall);
    }
    let (width, height) = (params.width, params.height);
    let provenance = Provenance {
        algorithm: "grid-root".into(),
        params: format!(
            "moduli={} angles={} res={}x{}",
            params.moduli, params.angles, params.width, params.height
        ),
        no_convergence: 0,
        tested_pixels: 0,
        pruned_pixels: 0,
    };
    let mut raster = Raster::new(domain, width, height, provenance);
    let solver = FiberSolver::new(p, 1);
    let thetas = membership::torus_angles(params.angles);

    struct ModulusSweep {
        points: Vec<[f64; 2]>,
        degenerate: bool,
        failures: usize,
    }

    let sweeps: Vec<ModulusSweep> = (0..params.moduli)
        .into_par_iter()
        .map(|i| {
            let x1 = lerp(
                domain.x0,
                domain.x1,
                i as f64 / (params.moduli - 1) as f64,
            );
            let mut points = Vec::new();
            let mut degenerate = false;
            let mut failures = 0usize;
            for &theta in &thetas {
                match solver.solve(x1, theta) {
                    Ok(FiberRoots::Degenerate) => degenerate = true,
                    Ok(FiberRoots::Mods(mods)) => {
                        for m in mods {
                            let pt = [x1, m];
                            if domain.contains(pt) {
                                points.push(pt);
                            }
                        }
                    }
                    Err(_) => failures += 1,
                }
            }
            ModulusSweep {
                points,
                degenerate,
                failures,
            }
        })
        .collect();

    let mut cloud = Vec::new();
    for (i, sweep) in sweeps.iter().enumerate() {
        raster.provenance.no_convergence += sweep.failures;
        if sweep.degenerate {
            // the whole vertical line lies on the zero locus
            let x1 = lerp(
                domain.x0,
                domain.x1,
                i as f64 / (params.moduli - 1) as f64,
            );
            if let Some((col, _)) = raster.pixel_of([x1, domain.center()[1]]) {
                for row in 0..raster.height {
                    raster.set(col, row, CellState::Amoeba);
                }
            }
        }
        for &pt in &sweep.points {
            if let Some((col, row)) = raster.pixel_of(pt) {
                raster.set(col, row, CellState::Amoeba);
            }
            cloud.push(pt);
        }
    }
    Ok((
        raster,
        PointCloud {
            tag: CloudTag::Amoeba,
            points: cloud,
        },
    ))
}

#[derive(Debug, Clone, Copy)]
pub struct PixelRasterParams {
    pub samples: usize,
    /// Log-scale modulus tolerance; `None` ties it to the pixel size,
    /// max(1e-3, 0.55 * pixel side), per sweep orientation.
    pub tau_mod: Option<f64>,
    pub prune: bool,
    pub bisection_steps: usize,
}

impl Default for PixelRasterParams {
    fn default() -> Self {
        PixelRasterParams {
            samples: 128,
            tau_mod: None,
            prune: false,
            bisection_steps: 10,
        }
    }
}

fn effective_tau(requested: Option<f64>, pixel_side: f64) -> f64 {
    requested.unwrap_or_else(|| (0.55 * pixel_side).max(1e-3))
}

/// Per-pixel classification shared by the pixel and greedy algorithms.
/// A pixel is amoeba when a fiber sweep in either orientation finds a root
/// modulus within tau of the center. The complement certificates (tropical
/// gap, lopsidedness) carry a margin covering the whole tau-ball of the
/// pixel, so they can never contradict a would-be fiber hit; without the
/// margin, centers certified outside right next to a sub-pixel tentacle
/// would erase it from the picture.
struct PixelTester<'a> {
    p: &'a LaurentPolynomial,
    pieces: Vec<tropical::AffinePiece>,
    prune_gap: Option<f64>,
    tau_x: f64,
    tau_y: f64,
    /// Lipschitz bound of the piece values over the pixel tau-ball.
    ball_margin: f64,
    samples: usize,
    steps: usize,
}

struct TestOutcome {
    state: CellState,
    failures: usize,
}

impl<'a> PixelTester<'a> {
    fn new(p: &'a LaurentPolynomial, domain: Rect, width: usize, height: usize, params: &PixelRasterParams) -> Self {
        let prune_gap = if params.prune && p.term_count() >= 2 {
            Some(tropical::prune_distance(p))
        } else {
            None
        };
        let tau_x = effective_tau(params.tau_mod, domain.width() / width as f64);
        let tau_y = effective_tau(params.tau_mod, domain.height() / height as f64);
        let ball_margin = 2.0
            * p.support()
                .map(|e| e.get(0).unsigned_abs() as f64 * tau_x + e.get(1).unsigned_abs() as f64 * tau_y)
                .fold(0.0, f64::max);
        PixelTester {
            p,
            pieces: tropical::archimedean_tropicalization(p),
            prune_gap,
            tau_x,
            tau_y,
            ball_margin,
            samples: params.samples,
            steps: params.bisection_steps,
        }
    }

    /// Lopsidedness over the whole pixel ball: one term exceeds the margin-
    /// inflated sum of the others at the center, hence dominates everywhere
    /// within tau of it.
    fn ball_lopsided(&self, x: [f64; 2]) -> bool {
        let logs: Vec<f64> = self.pieces.iter().map(|p| p.value(&x)).collect();
        let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = logs.iter().map(|l| (l - m).exp()).collect();
        let total: f64 = weights.iter().sum();
        let inflate = self.ball_margin.exp();
        weights.iter().any(|&w| w > inflate * (total - w))
    }

    fn scan_hit(
        &self,
        fiber_var: usize,
        base: f64,
        level: f64,
        tau: f64,
    ) -> (bool, usize) {
        let solver = FiberSolver::new(self.p, fiber_var);
        let thetas = membership::torus_angles(self.samples);
        let mut failures = 0usize;
        let scan: Vec<FiberRoots> = thetas
            .iter()
            .map(|&t| match solver.solve(base, t) {
                Ok(fr) => fr,
                Err(_) => {
                    failures += 1;
                    FiberRoots::Mods(Vec::new())
                }
            })
            .collect();
        match membership::classify_level(&scan, &thetas, level, tau, self.steps, &solver, base) {
            Ok(hit) => (hit.is_some(), failures),
            Err(_) => (false, failures + 1),
        }
    }

    fn test(&self, x: [f64; 2]) -> TestOutcome {
        if let Some(gap) = self.prune_gap {
            if tropical::max_gap(&self.pieces, &x) > gap + self.ball_margin {
                return TestOutcome {
                    state: CellState::Complement,
                    failures: 0,
                };
            }
        }
        if self.ball_lopsided(x) {
            return TestOutcome {
                state: CellState::Complement,
                failures: 0,
            };
        }
        let (hit_y, f1) = self.scan_hit(1, x[0], x[1], self.tau_y);
        if hit_y {
            return TestOutcome {
                state: CellState::Amoeba,
                failures: f1,
            };
        }
        let (hit_x, f2) = self.scan_hit(0, x[1], x[0], self.tau_x);
        TestOutcome {
            state: if hit_x {
                CellState::Amoeba
            } else {
                CellState::Complement
            },
            failures: f1 + f2,
        }
    }
}

/// Classifies every pixel center; all pixels end amoeba or complement.
///
/// Fiber data is shared along pixel columns and rows (the root moduli of a
/// fiber sweep depend only on the pinned coordinate), so the cost scales
/// with the perimeter rather than the area. Results are identical to
/// running the per-pixel test everywhere, for any thread count.
pub fn pixel_membership_raster(
    p: &LaurentPolynomial,
    domain: Rect,
    width: usize,
    height: usize,
    params: &PixelRasterParams,
) -> Result<Raster, RasterError> {
    if p.dimension() != 2 {
        return Err(RasterError::Unsupported(p.dimension()));
    }
    if width < 2 || height < 2 {
        return Err(RasterError::TooSmall);
    }
    let tester = PixelTester::new(p, domain, width, height, params);
    let provenance = Provenance {
        algorithm: "pixel-membership".into(),
        params: format!(
            "samples={} tau_x={:.3e} tau_y={:.3e} prune={}",
            tester.samples, tester.tau_x, tester.tau_y, params.prune
        ),
        no_convergence: 0,
        tested_pixels: 0,
        pruned_pixels: 0,
    };
    let mut raster = Raster::new(domain, width, height, provenance);

    // phase 1: certificates (tropical gap, lopsidedness), cheap per pixel
    #[derive(Clone, Copy, PartialEq)]
    enum Phase {
        Complement,
        Pruned,
        Pending,
    }
    let centers_x: Vec<f64> = (0..width)
        .map(|c| domain.x0 + (c as f64 + 0.5) * domain.width() / width as f64)
        .collect();
    let centers_y: Vec<f64> = (0..height)
        .map(|r| domain.y0 + (r as f64 + 0.5) * domain.height() / height as f64)
        .collect();
    let phase1: Vec<Phase> = (0..width * height)
        .into_par_iter()
        .map(|idx| {
            let x = [centers_x[idx % width], centers_y[idx / width]];
            if let Some(gap) = tester.prune_gap {
                if tropical::max_gap(&tester.pieces, &x) > gap + tester.ball_margin {
                    return Phase::Pruned;
                }
            }
            if tester.ball_lopsided(x) {
                Phase::Complement
            } else {
                Phase::Pending
            }
        })
        .collect();

    // phase 2: column sweeps in the second variable
    let solver_y = FiberSolver::new(p, 1);
    let thetas = membership::torus_angles(tester.samples);
    struct ColumnResult {
        hits: Vec<(usize, bool)>, // (row, amoeba)
        failures: usize,
    }
    let columns: Vec<Option<ColumnResult>> = (0..width)
        .into_par_iter()
        .map(|col| {
            let pending: Vec<usize> = (0..height)
                .filter(|&row| phase1[row * width + col] == Phase::Pending)
                .collect();
            if pending.is_empty() {
                return None;
            }
            let base = centers_x[col];
            let mut failures = 0usize;
            let scan: Vec<FiberRoots> = thetas
                .iter()
                .map(|&t| match solver_y.solve(base, t) {
                    Ok(fr) => fr,
                    Err(_) => {
                        failures += 1;
                        FiberRoots::Mods(Vec::new())
                    }
                })
                .collect();
            let mut hits = Vec::with_capacity(pending.len());
            for row in pending {
                let res = membership::classify_level(
                    &scan,
                    &thetas,
                    centers_y[row],
                    tester.tau_y,
                    tester.steps,
                    &solver_y,
                    base,
                );
                match res {
                    Ok(h) => hits.push((row, h.is_some())),
                    Err(_) => {
                        failures += 1;
                        hits.push((row, false));
                    }
                }
            }
            Some(ColumnResult { hits, failures })
        })
        .collect();

    let mut still_pending: Vec<Vec<usize>> = vec![Vec::new(); height]; // per row: columns
    for (col, res) in columns.iter().enumerate() {
        let Some(res) = res else { continue };
        raster.provenance.no_convergence += res.failures;
        for &(row, amoeba) in &res.hits {
            if amoeba {
                raster.set(col, row, CellState::Amoeba);
            } else {
                still_pending[row].push(col);
            }
        }
    }

    // phase 3: row sweeps in the first variable for the leftovers
    let solver_x = FiberSolver::new(p, 0);
    let rows: Vec<Option<ColumnResult>> = (0..height)
        .into_par_iter()
        .map(|row| {
            if still_pending[row].is_empty() {
                return None;
            }
            let base = centers_y[row];
            let mut failures = 0usize;
            let scan: Vec<FiberRoots> = thetas
                .iter()
                .map(|&t| match solver_x.solve(base, t) {
                    Ok(fr) => fr,
                    Err(_) => {
                        failures += 1;
                        FiberRoots::Mods(Vec::new())
                    }
                })
                .collect();
            let mut hits = Vec::with_capacity(still_pending[row].len());
            for &col in &still_pending[row] {
                let res = membership::classify_level(
                    &scan,
                    &thetas,
                    centers_x[col],
                    tester.tau_x,
                    tester.steps,
                    &solver_x,
                    base,
                );
                match res {
                    Ok(h) => hits.push((col, h.is_some())),
                    Err(_) => {
                        failures += 1;
                        hits.push((col, false));
                    }
                }
            }
            Some(ColumnResult { hits, failures })
        })
        .collect();

    for (row, res) in rows.iter().enumerate() {
        let Some(res) = res else { continue };
        raster.provenance.no_convergence += res.failures;
        for &(col, amoeba) in &res.hits {
            raster.set(
                col,
                row,
                if amoeba {
                    CellState::Amoeba
                } else {
                    CellState::Complement
                },
            );
        }
    }

    for (idx, ph) in phase1.iter().enumerate() {
        match ph {
            Phase::Pruned => {
                raster.cells[idx] = CellState::Complement;
                raster.provenance.pruned_pixels += 1;
            }
            Phase::Complement => {
                raster.cells[idx] = CellState::Complement;
                raster.provenance.tested_pixels += 1;
            }
            Phase::Pending => {
                raster.provenance.tested_pixels += 1;
            }
        }
    }
    absorb_subresolution_complement(&mut raster);
    debug_assert!(!raster.has_untested());
    Ok(raster)
}

/// Complement slivers thinner than the marking tolerance fragment into
/// pixel dust between dilated amoeba walls; a component whose every pixel
/// touches the amoeba 8-neighborhood is unresolvable at this grid and is
/// closed into the band.
fn absorb_subresolution_complement(raster: &mut Raster) {
    let (w, h) = (raster.width, raster.height);
    if !raster.cells.iter().any(|&c| c == CellState::Amoeba) {
        return;
    }
    let deep = |cells: &[CellState], col: usize, row: usize| -> bool {
        for dr in -1i64..=1 {
            for dc in -1i64..=1 {
                let (nc, nr) = (col as i64 + dc, row as i64 + dr);
                if nc < 0 || nr < 0 || nc as usize >= w || nr as usize >= h {
                    continue;
                }
                if cells[nr as usize * w + nc as usize] == CellState::Amoeba {
                    return false;
                }
            }
        }
        true
    };
    let mut visited = vec![false; w * h];
    for start in 0..w * h {
        if visited[start] || raster.cells[start] != CellState::Complement {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([start]);
        let mut pixels = Vec::new();
        let mut shallow = true;
        visited[start] = true;
        while let Some(idx) = queue.pop_front() {
            let (col, row) = (idx % w, idx / w);
            pixels.push(idx);
            if deep(&raster.cells, col, row) {
                shallow = false;
            }
            for (dc, dr) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
                let (nc, nr) = (col as i64 + dc, row as i64 + dr);
                if nc < 0 || nr < 0 || nc as usize >= w || nr as usize >= h {
                    continue;
                }
                let nidx = nr as usize * w + nc as usize;
                if !visited[nidx] && raster.cells[nidx] == CellState::Complement {
                    visited[nidx] = true;
                    queue.push_back(nidx);
                }
            }
        }
        if shallow {
            for idx in pixels {
                raster.cells[idx] = CellState::Amoeba;
            }
        }
    }
}

/// Breadth-first frontier expansion from seed points: an amoeba pixel tests
/// its 8 neighborhood, a complement pixel stops the frontier. Pixels never
/// reached stay untested.
pub fn greedy_raster(
    p: &LaurentPolynomial,
    domain: Rect,
    width: usize,
    height: usize,
    seeds: &[[f64; 2]],
    params: &PixelRasterParams,
) -> Result<Raster, RasterError> {
    if p.dimension() != 2 {
        return Err(RasterError::Unsupported(p.dimension()));
    }
    if width < 2 || height < 2 {
        return Err(RasterError::TooSmall);
    }
    assert!(!seeds.is_empty(), "greedy expansion needs seed points");
    let tester = PixelTester::new(p, domain, width, height, params);
    let provenance = Provenance {
        algorithm: "greedy".into(),
        params: format!(
            "samples={} tau_x={:.3e} tau_y={:.3e} seeds={}",
            tester.samples,
            tester.tau_x,
            tester.tau_y,
            seeds.len()
        ),
        no_convergence: 0,
        tested_pixels: 0,
        pruned_pixels: 0,
    };
    let mut raster = Raster::new(domain, width, height, provenance);
    let mut queue: std::collections::VecDeque<(usize, usize)> = std::collections::VecDeque::new();
    let mut visited = vec![false; width * height];
    for s in seeds {
        if let Some((col, row)) = raster.pixel_of(*s) {
            if !visited[row * width + col] {
                visited[row * width + col] = true;
                queue.push_back((col, row));
            }
        }
    }
    while let Some((col, row)) = queue.pop_front() {
        let outcome = tester.test(raster.pixel_center(col, row));
        raster.provenance.no_convergence += outcome.failures;
        raster.provenance.tested_pixels += 1;
        raster.set(col, row, outcome.state);
        if outcome.state != CellState::Amoeba {
            continue;
        }
        for dr in -1i64..=1 {
            for dc in -1i64..=1 {
                if dr == 0 && dc == 0 {
                    continue;
                }
                let (nc, nr) = (col as i64 + dc, row as i64 + dr);
                if nc < 0 || nr < 0 || nc as usize >= width || nr as usize >= height {
                    continue;
                }
                let idx = nr as usize * width + nc as usize;
                if !visited[idx] {
                    visited[idx] = true;
                    queue.push_back((nc as usize, nr as usize));
                }
            }
        }
    }
    Ok(raster)
}

/// Default greedy seeds: the hits of a coarse fiber-sampling sweep.
pub fn default_greedy_seeds(p: &LaurentPolynomial, domain: Rect) -> Result<Vec<[f64; 2]>, RasterError> {
    let (_, cloud) = grid_root_raster(
        p,
        domain,
        GridRootParams {
            moduli: 48,
            angles: 48,
            width: 48,
            height: 48,
        },
    )?;
    Ok(cloud.points)
}

/// Argument-torus image of the sampled zero locus; every point lies in
/// [-pi, pi)^2.
pub fn coamoeba_cloud(
    p: &LaurentPolynomial,
    moduli: usize,
    angles: usize,
    moduli_window: Rect,
) -> Result<PointCloud, RasterError> {
    if p.dimension() != 2 {
        return Err(RasterError::Unsupported(p.dimension()));
    }
    let solver = FiberSolver::new(p, 1);
    let thetas = membership::torus_angles(angles);
    let sweeps: Vec<Vec<[f64; 2]>> = (0..moduli)
        .into_par_iter()
        .map(|i| {
            let x1 = lerp(
                moduli_window.x0,
                moduli_window.x1,
                i as f64 / (moduli.max(2) - 1) as f64,
            );
            let mut pts = Vec::new();
            for &theta in &thetas {
                if let Ok(Some(roots)) = solver.solve_roots(x1, theta) {
                    for r in roots {
                        if r.norm() > 0.0 {
                            if let Ok(t) = crate::poly::arg_map(&[C64::from_polar(1.0, theta), r]) {
                                pts.push([t.0[0], t.0[1]]);
                            }
                        }
                    }
                }
            }
            pts
        })
        .collect();
    Ok(PointCloud {
        tag: CloudTag::Coamoeba,
        points: sweeps.concat(),
    })
}

/// Moment-map image of the sampled zero locus; lands in the Newton polytope.
/// The sweep uses a window five times the drawing domain so the cloud
/// reaches its boundary contacts.
pub fn compactified_cloud(
    p: &LaurentPolynomial,
    moduli: usize,
    angles: usize,
) -> Result<PointCloud, RasterError> {
    if p.dimension() != 2 {
        return Err(RasterError::Unsupported(p.dimension()));
    }
    let window = tropical::select_domain(p).scaled(5.0);
    let support: Vec<_> = p.support().cloned().collect();
    let solver = FiberSolver::new(p, 1);
    let thetas = membership::torus_angles(angles);
    let sweeps: Vec<Vec<[f64; 2]>> = (0..moduli)
        .into_par_iter()
        .map(|i| {
            let x1 = lerp(window.x0, window.x1, i as f64 / (moduli.max(2) - 1) as f64);
            let mut pts = Vec::new();
            for &theta in &thetas {
                if let Ok(Some(roots)) = solver.solve_roots(x1, theta) {
                    for r in roots {
                        if r.norm() > 0.0 {
                            let z = [C64::from_polar(x1.exp(), theta), r];
                            if let Ok(nu) = moment_map(&z, &support) {
                                pts.push([nu[0], nu[1]]);
                            }
                        }
                    }
                }
            }
            pts
        })
        .collect();
    Ok(PointCloud {
        tag: CloudTag::Compactified,
        points: sweeps.concat(),
    })
}

/// Log images of sampled locus points where the logarithmic Gauss ratio
/// (z1 d1 p) / (z2 d2 p) is real within `tau_real`; contains the amoeba
/// boundary. Points where the denominator gradient term vanishes are
/// flagged and skipped; if nothing survives the operation fails.
pub fn contour_cloud(
    p: &LaurentPolynomial,
    moduli: usize,
    angles: usize,
    tau_real: f64,
    window: Rect,
) -> Result<PointCloud, RasterError> {
    if p.dimension() != 2 {
        return Err(RasterError::Unsupported(p.dimension()));
    }
    // a derivative that vanishes identically is kept as None
    let d1 = p.partial_derivative(0).ok();
    let d2 = p.partial_derivative(1).ok();
    let thetas = membership::torus_angles(angles);
    let mut points = Vec::new();
    let mut flagged = [0usize; 2];
    let mut sampled = 0usize;

    struct SweepOut {
        points: Vec<[f64; 2]>,
        flagged: [usize; 2],
        sampled: usize,
    }

    // both sweep orientations, so steep boundary branches stay covered
    for fiber_var in [1usize, 0usize] {
        let solver = FiberSolver::new(p, fiber_var);
        let (b0, b1) = if fiber_var == 1 {
            (window.x0, window.x1)
        } else {
            (window.y0, window.y1)
        };
        let sweeps: Vec<SweepOut> = (0..moduli)
            .into_par_iter()
            .map(|i| {
                let base = lerp(b0, b1, i as f64 / (moduli.max(2) - 1) as f64);
                let mut out = SweepOut {
                    points: Vec::new(),
                    flagged: [0, 0],
                    sampled: 0,
                };
                for &theta in &thetas {
                    if let Ok(Some(roots)) = solver.solve_roots(base, theta) {
                        let pinned = C64::from_polar(base.exp(), theta);
                        for r in roots {
                            if r.norm() == 0.0 {
                                continue;
                            }
                            let z = if fiber_var == 1 { [pinned, r] } else { [r, pinned] };
                            out.sampled += 1;
                            if let Some(pt) = classify_contour_point(
                                &z,
                                &d1,
                                &d2,
                                tau_real,
                                window,
                                &mut out.flagged,
                            ) {
                                out.points.push(pt);
                            }
                        }
                    }
                }
                out
            })
            .collect();
        for s in sweeps {
            points.extend(s.points);
            flagged[0] += s.flagged[0];
            flagged[1] += s.flagged[1];
            sampled += s.sampled;
        }
    }
    if sampled == 0 {
        return Err(RasterError::EmptyLocus);
    }
    if points.is_empty() && (flagged[0] > 0 || flagged[1] > 0) {
        let variable = if flagged[1] >= flagged[0] { 1 } else { 0 };
        return Err(RasterError::GradientVanishes { variable });
    }
    Ok(PointCloud {
        tag: CloudTag::Contour,
        points,
    })
}

fn classify_contour_point(
    z: &[C64; 2],
    d1: &Option<LaurentPolynomial>,
    d2: &Option<LaurentPolynomial>,
    tau_real: f64,
    window: Rect,
    flagged: &mut [usize; 2],
) -> Option<[f64; 2]> {
    let zero = C64::new(0.0, 0.0);
    let w = match d1 {
        Some(d) => z[0] * d.evaluate(z).ok()?,
        None => zero,
    };
    let v = match d2 {
        Some(d) => z[1] * d.evaluate(z).ok()?,
        None => zero,
    };
    let (wn, vn) = (w.norm(), v.norm());
    let scale = wn + vn;
    if scale < 1e-300 {
        flagged[0] += 1;
        flagged[1] += 1;
        return None;
    }
    if vn <= 1e-12 * scale {
        // logarithmic Gauss ratio degenerates in the second variable
        flagged[1] += 1;
        return None;
    }
    let sin = (w * v.conj()).im.abs() / (wn * vn);
    if sin <= tau_real {
        let x = [z[0].norm().ln(), z[1].norm().ln()];
        if x[0].is_finite() && x[1].is_finite() && window.contains(x) {
            return Some(x);
        }
    }
    None
}
