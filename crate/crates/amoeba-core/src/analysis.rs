//! Complement-component analysis: flood labeling of the raster complement,
//! order vectors and Ronkin coefficients by torus quadrature, and solidity
//! verdicts checked against the Newton-polytope bounds.

use crate::newton;
use crate::poly::{C64, ExponentVector, LaurentPolynomial, LogPoint};
use crate::raster::{CellState, Raster};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("raster contains untested pixels; label a fully classified raster")]
    UntestedPixels,
    #[error("raster has no complement pixels")]
    EmptyComplement,
    #[error("|p| = {value:.3e} at a quadrature node, point too close to the amoeba")]
    NearZeroDenominator { value: f64 },
    #[error("order-jump residual {residual:.3} falls in the indeterminate band")]
    IndeterminateOrderJump { residual: f64 },
    #[error("torus quadrature supports up to 3 variables, got {0}")]
    Unsupported(usize),
    #[error(transparent)]
    Newton(#[from] newton::NewtonError),
}

/// One labeled connected component of the raster complement.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplementComponent {
    pub label: usize,
    /// (col, row) pixels, in row-major discovery order.
    pub pixels: Vec<(usize, usize)>,
    /// Center of the pixel deepest inside the component (Chebyshev distance
    /// to the nearest amoeba pixel, ties broken lexicographically).
    pub representative: LogPoint,
    pub bounded: bool,
    pub order: Option<ExponentVector>,
    pub order_residual: Option<f64>,
    pub a_coeff: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Solid,
    Optimal,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentSummary {
    pub order: Vec<i64>,
    pub a: f64,
    pub bounded: bool,
}

/// Full analysis result; serializes to the report JSON schema.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub count: usize,
    pub components: Vec<ComponentSummary>,
    pub bounds: [usize; 2],
    pub verdict: Verdict,
    pub artifact_metric: f64,
    pub artifact_suspect: bool,
    pub ms: f64,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Chebyshev distance to the nearest amoeba pixel for every raster cell,
/// by multi-source breadth-first search over 8-neighborhoods. Rasters with
/// no amoeba pixels get usize::MAX everywhere.
fn chebyshev_distance(r: &Raster) -> Vec<usize> {
    let (w, h) = (r.width, r.height);
    let mut dist = vec![usize::MAX; w * h];
    let mut queue = std::collections::VecDeque::new();
    for row in 0..h {
        for col in 0..w {
            if r.get(col, row) == CellState::Amoeba {
                dist[row * w + col] = 0;
                queue.push_back((col, row));
            }
        }
    }
    while let Some((col, row)) = queue.pop_front() {
        let d = dist[row * w + col];
        for dr in -1i64..=1 {
            for dc in -1i64..=1 {
                if dr == 0 && dc == 0 {
                    continue;
                }
                let (nc, nr) = (col as i64 + dc, row as i64 + dr);
                if nc < 0 || nr < 0 || nc as usize >= w || nr as usize >= h {
                    continue;
                }
                let idx = nr as usize * w + nc as usize;
                if dist[idx] == usize::MAX {
                    dist[idx] = d + 1;
                    queue.push_back((nc as usize, nr as usize));
                }
            }
        }
    }
    dist
}

/// Labels maximal 4-connected components of the complement. Components
/// touching the window border are unbounded; representatives are the
/// deepest pixels. Orders stay unfilled.
pub fn label_components(r: &Raster) -> Result<Vec<ComplementComponent>, AnalysisError> {
    if r.has_untested() {
        return Err(AnalysisError::UntestedPixels);
    }
    let (w, h) = (r.width, r.height);
    let dist = chebyshev_distance(r);
    let mut labels = vec![0usize; w * h];
    let mut components = Vec::new();
    for row in 0..h {
        for col in 0..w {
            if r.get(col, row) != CellState::Complement || labels[row * w + col] != 0 {
                continue;
            }
            let label = components.len() + 1;
            let mut pixels = Vec::new();
            let mut bounded = true;
            let mut queue = std::collections::VecDeque::new();
            labels[row * w + col] = label;
            queue.push_back((col, row));
            while let Some((c, rr)) = queue.pop_front() {
                pixels.push((c, rr));
                if c == 0 || rr == 0 || c == w - 1 || rr == h - 1 {
                    bounded = false;
                }
                for (dc, dr) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
                    let (nc, nr) = (c as i64 + dc, rr as i64 + dr);
                    if nc < 0 || nr < 0 || nc as usize >= w || nr as usize >= h {
                        continue;
                    }
                    let idx = nr as usize * w + nc as usize;
                    if labels[idx] == 0 && r.get(nc as usize, nr as usize) == CellState::Complement
                    {
                        labels[idx] = label;
                        queue.push_back((nc as usize, nr as usize));
                    }
                }
            }
            let rep = deepest_pixel(&pixels, &dist, w);
            let center = r.pixel_center(rep.0, rep.1);
            components.push(ComplementComponent {
                label,
                pixels,
                representative: LogPoint::new(center.to_vec()),
                bounded,
                order: None,
                order_residual: None,
                a_coeff: None,
            });
        }
    }
    if components.is_empty() {
        return Err(AnalysisError::EmptyComplement);
    }
    Ok(components)
}

fn deepest_pixel(pixels: &[(usize, usize)], dist: &[usize], w: usize) -> (usize, usize) {
    let mut best = pixels[0];
    let mut best_d = dist[best.1 * w + best.0];
    for &(c, r) in pixels {
        let d = dist[r * w + c];
        if d > best_d || (d == best_d && (c, r) < best) {
            best = (c, r);
            best_d = d;
        }
    }
    best
}

/// Quadrature points for a component: bounded components integrate at the
/// deepest pixels; unbounded ones push toward the window border, where the
/// dominant regime has fully set in. Up to three candidates for retries.
fn integration_candidates(
    comp: &ComplementComponent,
    r: &Raster,
    dist: &[usize],
) -> Vec<(usize, usize)> {
    let w = r.width;
    let mut pool: Vec<(usize, usize)> = if comp.bounded {
        comp.pixels.clone()
    } else {
        comp.pixels
            .iter()
            .copied()
            .filter(|&(c, rr)| c == 0 || rr == 0 || c == w - 1 || rr == r.height - 1)
            .collect()
    };
    if pool.is_empty() {
        pool = comp.pixels.clone();
    }
    pool.sort_by(|&(c1, r1), &(c2, r2)| {
        let d1 = dist[r1 * w + c1];
        let d2 = dist[r2 * w + c2];
        d2.cmp(&d1).then((c1, r1).cmp(&(c2, r2)))
    });
    pool.truncate(3);
    pool
}

const NEAR_ZERO: f64 = 1e-12;

fn torus_nodes(q: usize) -> Vec<f64> {
    (0..q)
        .map(|k| 2.0 * std::f64::consts::PI * k as f64 / q as f64)
        .collect()
}

/// Order vector of the complement component containing `u`: the mean over
/// the torus fiber of Re(z_j d_j p / p) per coordinate, rounded to the
/// nearest integer vector; also returns the Euclidean distance to that
/// rounding. Uniform grids on the periodic integrand converge spectrally.
pub fn order_vector(
    p: &LaurentPolynomial,
    u: &LogPoint,
    q: usize,
) -> Result<(ExponentVector, f64), AnalysisError> {
    assert!(q >= 16, "order quadrature needs q >= 16");
    let n = p.dimension();
    if n > 3 {
        return Err(AnalysisError::Unsupported(n));
    }
    let nodes = torus_nodes(q);
    let moduli: Vec<f64> = u.coords().iter().map(|x| x.exp()).collect();
    let mut sums = vec![0.0f64; n];
    let mut index = vec![0usize; n];
    let total = q.pow(n as u32);
    let mut z = vec![C64::new(0.0, 0.0); n];
    let mut nums = vec![C64::new(0.0, 0.0); n];
    for _ in 0..total {
        for j in 0..n {
            z[j] = C64::from_polar(moduli[j], nodes[index[j]]);
            nums[j] = C64::new(0.0, 0.0);
        }
        let mut val = C64::new(0.0, 0.0);
        for (e, c) in p.terms() {
            let t = c * crate::poly::monomial_value(&z, e);
            val += t;
            for j in 0..n {
                nums[j] += t * e.get(j) as f64;
            }
        }
        if val.norm() < NEAR_ZERO {
            return Err(AnalysisError::NearZeroDenominator { value: val.norm() });
        }
        for j in 0..n {
            sums[j] += (nums[j] / val).re;
        }
        for j in 0..n {
            index[j] += 1;
            if index[j] < q {
                break;
            }
            index[j] = 0;
        }
    }
    let means: Vec<f64> = sums.iter().map(|s| s / total as f64).collect();
    let rounded: Vec<i64> = means.iter().map(|m| m.round() as i64).collect();
    let residual = means
        .iter()
        .zip(&rounded)
        .map(|(m, &r)| (m - r as f64).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok((ExponentVector::new(rounded), residual))
}

/// Ronkin-function intercept on the component of order `alpha`: the torus
/// mean of ln|p| minus <alpha, u>. Independent of the choice of `u` within
/// one component.
pub fn ronkin_coefficient(
    p: &LaurentPolynomial,
    alpha: &ExponentVector,
    u: &LogPoint,
    q: usize,
) -> Result<f64, AnalysisError> {
    assert!(q >= 16, "quadrature needs q >= 16");
    let n = p.dimension();
    if n > 3 {
        return Err(AnalysisError::Unsupported(n));
    }
    let nodes = torus_nodes(q);
    let moduli: Vec<f64> = u.coords().iter().map(|x| x.exp()).collect();
    let mut sum = 0.0f64;
    let mut index = vec![0usize; n];
    let total = q.pow(n as u32);
    let mut z = vec![C64::new(0.0, 0.0); n];
    for _ in 0..total {
        for j in 0..n {
            z[j] = C64::from_polar(moduli[j], nodes[index[j]]);
        }
        let mut val = C64::new(0.0, 0.0);
        for (e, c) in p.terms() {
            val += c * crate::poly::monomial_value(&z, e);
        }
        if val.norm() < NEAR_ZERO {
            return Err(AnalysisError::NearZeroDenominator { value: val.norm() });
        }
        sum += val.norm().ln();
        for j in 0..n {
            index[j] += 1;
            if index[j] < q {
                break;
            }
            index[j] = 0;
        }
    }
    Ok(sum / total as f64 - alpha.dot(u.coords()))
}

const RESIDUAL_ACCEPT: f64 = 0.05;
const RESIDUAL_REJECT: f64 = 0.25;
const ARTIFACT_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderJump {
    LikelyAmoeba,
    LikelyComplement,
}

/// Order-function jump criterion: the quadrature converges cleanly on the
/// complement and misbehaves on the amoeba, so the residual itself
/// classifies the point. The gray zone escalates to the membership test.
pub fn order_jump_membership(
    p: &LaurentPolynomial,
    x: &LogPoint,
    q: usize,
) -> Result<OrderJump, AnalysisError> {
    assert!(q >= 64, "order-jump criterion needs q >= 64");
    let r1 = match order_vector(p, x, q) {
        Err(AnalysisError::NearZeroDenominator { .. }) => return Ok(OrderJump::LikelyAmoeba),
        Err(e) => return Err(e),
        Ok((_, r)) => r,
    };
    if r1 > RESIDUAL_REJECT {
        return Ok(OrderJump::LikelyAmoeba);
    }
    let r2 = match order_vector(p, x, 2 * q) {
        Err(AnalysisError::NearZeroDenominator { .. }) => return Ok(OrderJump::LikelyAmoeba),
        Err(e) => return Err(e),
        Ok((_, r)) => r,
    };
    if r1 <= RESIDUAL_ACCEPT && (r2 <= 0.5 * r1 || r2 < 1e-12) {
        return Ok(OrderJump::LikelyComplement);
    }
    Err(AnalysisError::IndeterminateOrderJump { residual: r1 })
}

/// Full analysis of a classified raster: labels the complement, computes
/// every component's order and Ronkin coefficient, and issues the verdict.
/// Validation failures (duplicate orders, orders outside the polytope,
/// counts outside the bounds, isolated-pixel dust) mark the report
/// artifact-suspect instead of erroring.
pub fn analyze(
    p: &LaurentPolynomial,
    r: &Raster,
    q: usize,
) -> Result<(AnalysisReport, Vec<ComplementComponent>), AnalysisError> {
    let start = std::time::Instant::now();
    let mut components = label_components(r)?;
    let dist = chebyshev_distance(r);
    let nd = newton::newton_polytope(p)?;
    let results: Vec<(Option<(ExponentVector, f64)>, Option<f64>)> = components
        .par_iter()
        .map(|comp| {
            let candidates = integration_candidates(comp, r, &dist);
            for (c, rr) in candidates {
                let u = LogPoint::new(r.pixel_center(c, rr).to_vec());
                match order_vector(p, &u, q) {
                    Ok((order, res)) => {
                        let a = ronkin_coefficient(p, &order, &u, q).ok();
                        return (Some((order, res)), a);
                    }
                    Err(AnalysisError::NearZeroDenominator { .. }) => continue,
                    Err(_) => break,
                }
            }
            (None, None)
        })
        .collect();
    for (comp, (order_res, a)) in components.iter_mut().zip(results) {
        if let Some((order, res)) = order_res {
            comp.order = Some(order);
            comp.order_residual = Some(res);
        }
        comp.a_coeff = a;
    }

    let count = components.len();
    let bounds = newton::component_bounds(&nd);
    let metric = r.isolated_pixel_metric();
    let mut suspect = metric > ARTIFACT_THRESHOLD;
    let mut orders_seen: Vec<&ExponentVector> = Vec::new();
    for comp in &components {
        match &comp.order {
            Some(o) => {
                if orders_seen.contains(&o) || !nd.contains_lattice_point(o) {
                    suspect = true;
                }
                orders_seen.push(o);
            }
            None => suspect = true,
        }
        if comp.order_residual.map_or(true, |r| r > RESIDUAL_ACCEPT) {
            suspect = true;
        }
    }
    if count < bounds.0 || count > bounds.1 {
        suspect = true;
    }
    let verdict = if count == bounds.0 {
        Verdict::Solid
    } else if count == bounds.1 {
        Verdict::Optimal
    } else {
        Verdict::Neither
    };
    let report = AnalysisReport {
        count,
        components: components
            .iter()
            .map(|c| ComponentSummary {
                order: c.order.as_ref().map_or(Vec::new(), |o| o.0.clone()),
                a: c.a_coeff.unwrap_or(f64::NAN),
                bounded: c.bounded,
            })
            .collect(),
        bounds: [bounds.0, bounds.1],
        verdict,
        artifact_metric: metric,
        artifact_suspect: suspect,
        ms: start.elapsed().as_secs_f64() * 1e3,
    };
    Ok((report, components))
}
