//! Newton polytopes: exact integer convex hulls, lattice point enumeration,
//! sparsity classification and the component-count bounds they induce.

use crate::poly::{ExponentVector, LaurentPolynomial};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NewtonError {
    #[error("hull operations are implemented for dimensions 1 and 2, got {0}")]
    Unsupported(usize),
}

/// Sparsity class of a support relative to its Newton polytope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Sparsity {
    MaximallySparse,
    Dense,
    Intermediate,
}

/// The Newton polytope of a polynomial together with its lattice points.
///
/// For n = 2 the vertices are listed counterclockwise starting from the
/// lexicographic minimum; collinear support points on an edge are not
/// vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonData {
    pub vertices: Vec<ExponentVector>,
    pub lattice_points: Vec<ExponentVector>,
    pub support: Vec<ExponentVector>,
}

impl NewtonData {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn lattice_count(&self) -> usize {
        self.lattice_points.len()
    }

    /// Exact membership test for a lattice point.
    pub fn contains_lattice_point(&self, p: &ExponentVector) -> bool {
        self.lattice_points.contains(p)
    }

    /// Point-in-polytope test in real coordinates, with a small tolerance on
    /// the supporting-line inequalities.
    pub fn contains_real(&self, x: &[f64], tol: f64) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => self.vertices[0]
                .as_slice()
                .iter()
                .zip(x)
                .all(|(&a, &v)| (a as f64 - v).abs() <= tol),
            2 => {
                let a = &self.vertices[0].0;
                let b = &self.vertices[1].0;
                let (ax, ay) = (a[0] as f64, a[1] as f64);
                let (bx, by) = (b[0] as f64, b[1] as f64);
                let cross = (bx - ax) * (x[1] - ay) - (by - ay) * (x[0] - ax);
                if cross.abs() > tol * (1.0 + (bx - ax).abs() + (by - ay).abs()) {
                    return false;
                }
                let t = (x[0] - ax) * (bx - ax) + (x[1] - ay) * (by - ay);
                let len2 = (bx - ax).powi(2) + (by - ay).powi(2);
                t >= -tol && t <= len2 + tol
            }
            _ => {
                let m = self.vertices.len();
                for i in 0..m {
                    let a = &self.vertices[i].0;
                    let b = &self.vertices[(i + 1) % m].0;
                    let cross = (b[0] - a[0]) as f64 * (x[1] - a[1] as f64)
                        - (b[1] - a[1]) as f64 * (x[0] - a[0] as f64);
                    if cross < -tol {
                        return false;
                    }
                }
                true
            }
        }
    }
}

/// Exact integer convex hull of the support.
pub fn newton_polytope(p: &LaurentPolynomial) -> Result<NewtonData, NewtonError> {
    let support: Vec<ExponentVector> = p.support().cloned().collect();
    match p.dimension() {
        1 => {
            let lo = support.iter().map(|e| e.get(0)).min().unwrap();
            let hi = support.iter().map(|e| e.get(0)).max().unwrap();
            let vertices = if lo == hi {
                vec![ExponentVector::new(vec![lo])]
            } else {
                vec![ExponentVector::new(vec![lo]), ExponentVector::new(vec![hi])]
            };
            let lattice_points = (lo..=hi).map(|k| ExponentVector::new(vec![k])).collect();
            Ok(NewtonData {
                vertices,
                lattice_points,
                support,
            })
        }
        2 => {
            let pts: Vec<(i64, i64)> = support.iter().map(|e| (e.get(0), e.get(1))).collect();
            let vertices = hull_2d(&pts);
            let lattice = lattice_points_2d(&vertices);
            Ok(NewtonData {
                vertices: vertices
                    .iter()
                    .map(|&(x, y)| ExponentVector::new(vec![x, y]))
                    .collect(),
                lattice_points: lattice
                    .into_iter()
                    .map(|(x, y)| ExponentVector::new(vec![x, y]))
                    .collect(),
                support,
            })
        }
        n => Err(NewtonError::Unsupported(n)),
    }
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Monotone chain with strict turns; output is counterclockwise starting
/// from the lexicographic minimum. Degenerate inputs give one or two points.
fn hull_2d(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut pts: Vec<(i64, i64)> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() == 1 {
        return pts;
    }
    let collinear = pts
        .iter()
        .all(|&p| cross(pts[0], *pts.last().unwrap(), p) == 0);
    if collinear {
        return vec![pts[0], *pts.last().unwrap()];
    }
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    // monotone chain already starts at the lexicographic minimum and runs
    // counterclockwise for this orientation convention
    lower
}

fn lattice_points_2d(vertices: &[(i64, i64)]) -> Vec<(i64, i64)> {
    match vertices.len() {
        0 => Vec::new(),
        1 => vec![vertices[0]],
        2 => {
            let (a, b) = (vertices[0], vertices[1]);
            let g = gcd((b.0 - a.0).abs(), (b.1 - a.1).abs());
            let step = ((b.0 - a.0) / g, (b.1 - a.1) / g);
            (0..=g).map(|t| (a.0 + t * step.0, a.1 + t * step.1)).collect()
        }
        m => {
            let xs: Vec<i64> = vertices.iter().map(|v| v.0).collect();
            let ys: Vec<i64> = vertices.iter().map(|v| v.1).collect();
            let mut out = Vec::new();
            for x in *xs.iter().min().unwrap()..=*xs.iter().max().unwrap() {
                for y in *ys.iter().min().unwrap()..=*ys.iter().max().unwrap() {
                    let inside = (0..m).all(|i| {
                        cross(vertices[i], vertices[(i + 1) % m], (x, y)) >= 0
                    });
                    if inside {
                        out.push((x, y));
                    }
                }
            }
            out
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Support equals vertices, support equals lattice points, or neither.
/// When the polytope has no non-vertex lattice points both conditions hold
/// and the maximally sparse reading wins.
pub fn classify_sparsity(p: &LaurentPolynomial) -> Result<Sparsity, NewtonError> {
    let nd = newton_polytope(p)?;
    let mut support = nd.support.clone();
    support.sort();
    let mut vertices = nd.vertices.clone();
    vertices.sort();
    if support == vertices {
        return Ok(Sparsity::MaximallySparse);
    }
    let mut lattice = nd.lattice_points.clone();
    lattice.sort();
    if support == lattice {
        return Ok(Sparsity::Dense);
    }
    Ok(Sparsity::Intermediate)
}

/// Lower and upper bounds on the number of complement components:
/// (vertex count, lattice point count).
pub fn component_bounds(nd: &NewtonData) -> (usize, usize) {
    (nd.vertices.len(), nd.lattice_points.len())
}
