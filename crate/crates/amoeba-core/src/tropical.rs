//! Piecewise-linear side of the toolkit: Archimedean tropicalization of a
//! polynomial, corner loci of max-affine families (tropical curves and
//! spines), drawing-domain selection and the lopsidedness pruning distance.

use crate::poly::{ExponentVector, LaurentPolynomial};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TropicalError {
    #[error("all pieces share one slope, the max is smooth everywhere")]
    DegenerateFamily,
}

/// One affine piece x -> <slope, x> + intercept of a max-affine family.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinePiece {
    pub slope: ExponentVector,
    pub intercept: f64,
}

impl AffinePiece {
    pub fn value(&self, x: &[f64]) -> f64 {
        self.slope.dot(x) + self.intercept
    }
}

/// Axis-aligned rectangle in log coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        assert!(x0 < x1 && y0 < y1, "degenerate rectangle");
        Rect { x0, x1, y0, y1 }
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn center(&self) -> [f64; 2] {
        [(self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0]
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        p[0] >= self.x0 && p[0] <= self.x1 && p[1] >= self.y0 && p[1] <= self.y1
    }

    pub fn scaled(&self, factor: f64) -> Rect {
        let [cx, cy] = self.center();
        let hw = self.width() / 2.0 * factor;
        let hh = self.height() / 2.0 * factor;
        Rect::new(cx - hw, cx + hw, cy - hh, cy + hh)
    }
}

/// Ray of a tropical curve: starts at a vertex, runs along a primitive
/// integer direction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ray {
    pub vertex: usize,
    pub dir: [i64; 2],
}

/// Piecewise-linear curve: the locus where a max-affine family is attained
/// by at least two pieces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TropicalCurve {
    pub vertices: Vec<[f64; 2]>,
    pub segments: Vec<[usize; 2]>,
    pub rays: Vec<Ray>,
}

impl TropicalCurve {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tropical curve serializes")
    }
}

const ATTAIN_TOL: f64 = 1e-9;
const DEDUP_TOL: f64 = 1e-9;

/// One piece per term: slope = exponent, intercept = ln|coefficient|.
pub fn archimedean_tropicalization(p: &LaurentPolynomial) -> Vec<AffinePiece> {
    p.terms()
        .iter()
        .map(|(e, c)| AffinePiece {
            slope: e.clone(),
            intercept: c.norm().ln(),
        })
        .collect()
}

fn family_max(pieces: &[AffinePiece], x: &[f64]) -> f64 {
    pieces
        .iter()
        .map(|p| p.value(x))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Intrinsic vertices of the corner locus: points where three pieces tie
/// and attain the family maximum, deduplicated within 1e-9.
pub fn corner_vertices(pieces: &[AffinePiece]) -> Vec<[f64; 2]> {
    let n = pieces.len();
    let mut verts: Vec<[f64; 2]> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let (pi, pj, pk) = (&pieces[i], &pieces[j], &pieces[k]);
                let a11 = (pi.slope.get(0) - pj.slope.get(0)) as f64;
                let a12 = (pi.slope.get(1) - pj.slope.get(1)) as f64;
                let a21 = (pi.slope.get(0) - pk.slope.get(0)) as f64;
                let a22 = (pi.slope.get(1) - pk.slope.get(1)) as f64;
                let det = a11 * a22 - a12 * a21;
                if det.abs() < 1e-14 {
                    continue;
                }
                let b1 = pj.intercept - pi.intercept;
                let b2 = pk.intercept - pi.intercept;
                let x = [(b1 * a22 - a12 * b2) / det, (a11 * b2 - b1 * a21) / det];
                if !x[0].is_finite() || !x[1].is_finite() {
                    continue;
                }
                let m = family_max(pieces, &x);
                if pi.value(&x) >= m - ATTAIN_TOL
                    && pj.value(&x) >= m - ATTAIN_TOL
                    && pk.value(&x) >= m - ATTAIN_TOL
                    && !verts
                        .iter()
                        .any(|v| (v[0] - x[0]).abs() < DEDUP_TOL && (v[1] - x[1]).abs() < DEDUP_TOL)
                {
                    verts.push(x);
                }
            }
        }
    }
    verts
}

fn primitive(d: (i64, i64)) -> [i64; 2] {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    let g = gcd(d.0, d.1).max(1);
    [d.0 / g, d.1 / g]
}

/// Corner locus of the family inside `window`.
///
/// Edges come from pairwise bisectors restricted to the set where both
/// pieces attain the family maximum; unbounded directions become rays with
/// primitive integer directions, and bisectors with no vertex at all (two
/// parallel regimes) are clipped to the window as segments.
pub fn tropical_curve(pieces: &[AffinePiece], window: Rect) -> Result<TropicalCurve, TropicalError> {
    let distinct_slopes = {
        let mut s: Vec<&ExponentVector> = pieces.iter().map(|p| &p.slope).collect();
        s.sort();
        s.dedup();
        s.len()
    };
    if distinct_slopes < 2 {
        return Err(TropicalError::DegenerateFamily);
    }

    let mut vertices: Vec<[f64; 2]> = Vec::new();
    let mut segments: Vec<[usize; 2]> = Vec::new();
    let mut rays: Vec<Ray> = Vec::new();

    let vertex_index = |vertices: &mut Vec<[f64; 2]>, p: [f64; 2]| -> usize {
        if let Some(i) = vertices
            .iter()
            .position(|v| (v[0] - p[0]).abs() < DEDUP_TOL && (v[1] - p[1]).abs() < DEDUP_TOL)
        {
            i
        } else {
            vertices.push(p);
            vertices.len() - 1
        }
    };

    let n = pieces.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let (pi, pj) = (&pieces[i], &pieces[j]);
            let delta = (
                pi.slope.get(0) - pj.slope.get(0),
                pi.slope.get(1) - pj.slope.get(1),
            );
            if delta == (0, 0) {
                continue;
            }
            // bisector: <delta, x> = bj - bi; direction along the line
            let dvec = primitive((-delta.1, delta.0));
            let c = pj.intercept - pi.intercept;
            let d2 = (delta.0 * delta.0 + delta.1 * delta.1) as f64;
            let x0 = [c * delta.0 as f64 / d2, c * delta.1 as f64 / d2];
            let dir = [dvec[0] as f64, dvec[1] as f64];

            // restrict to where both pieces attain the max: for every other
            // piece m, value_i(x0 + t dir) >= value_m(x0 + t dir)
            let mut t_lo = f64::NEG_INFINITY;
            let mut t_hi = f64::INFINITY;
            let vi0 = pi.value(&x0);
            let si = pi.slope.dot(&dir);
            let mut empty = false;
            for (m, pm) in pieces.iter().enumerate() {
                if m == i || m == j {
                    continue;
                }
                let vm0 = pm.value(&x0);
                let sm = pm.slope.dot(&dir);
                // vi0 + t si >= vm0 + t sm  <=>  t (si - sm) >= vm0 - vi0
                let k = si - sm;
                let rhs = vm0 - vi0;
                if k.abs() < 1e-14 {
                    if rhs > ATTAIN_TOL {
                        empty = true;
                        break;
                    }
                } else if k > 0.0 {
                    t_lo = t_lo.max(rhs / k);
                } else {
                    t_hi = t_hi.min(rhs / k);
                }
            }
            if empty || t_lo > t_hi + ATTAIN_TOL {
                continue;
            }

            let at = |t: f64| [x0[0] + t * dir[0], x0[1] + t * dir[1]];
            match (t_lo.is_finite(), t_hi.is_finite()) {
                (true, true) => {
                    if t_hi - t_lo > DEDUP_TOL {
                        let a = vertex_index(&mut vertices, at(t_lo));
                        let b = vertex_index(&mut vertices, at(t_hi));
                        if a != b && !segments.contains(&[a, b]) && !segments.contains(&[b, a]) {
                            segments.push([a, b]);
                        }
                    }
                }
                (true, false) => {
                    let a = vertex_index(&mut vertices, at(t_lo));
                    let r = Ray {
                        vertex: a,
                        dir: dvec,
                    };
                    if !rays.contains(&r) {
                        rays.push(r);
                    }
                }
                (false, true) => {
                    let a = vertex_index(&mut vertices, at(t_hi));
                    let r = Ray {
                        vertex: a,
                        dir: [-dvec[0], -dvec[1]],
                    };
                    if !rays.contains(&r) {
                        rays.push(r);
                    }
                }
                (false, false) => {
                    // full line: clip to the window
                    if let Some((ta, tb)) = clip_line_to_rect(x0, dir, window) {
                        let a = vertex_index(&mut vertices, at(ta));
                        let b = vertex_index(&mut vertices, at(tb));
                        if a != b && !segments.contains(&[a, b]) && !segments.contains(&[b, a]) {
                            segments.push([a, b]);
                        }
                    }
                }
            }
        }
    }

    Ok(TropicalCurve {
        vertices,
        segments,
        rays,
    })
}

fn clip_line_to_rect(x0: [f64; 2], dir: [f64; 2], r: Rect) -> Option<(f64, f64)> {
    let mut t_lo = f64::NEG_INFINITY;
    let mut t_hi = f64::INFINITY;
    for (p, d, lo, hi) in [
        (x0[0], dir[0], r.x0, r.x1),
        (x0[1], dir[1], r.y0, r.y1),
    ] {
        if d.abs() < 1e-300 {
            if p < lo || p > hi {
                return None;
            }
        } else {
            let (a, b) = ((lo - p) / d, (hi - p) / d);
            t_lo = t_lo.max(a.min(b));
            t_hi = t_hi.min(a.max(b));
        }
    }
    (t_lo < t_hi).then_some((t_lo, t_hi))
}

/// Drawing window: bounding box of the corner locus expanded by
/// ln(k-1) + 1 where k is the term count. Vertexless loci anchor on the
/// closest-to-origin point of each max-attained bisector; [-3,3]^2 if even
/// that is empty.
pub fn select_domain(p: &LaurentPolynomial) -> Rect {
    let pieces = archimedean_tropicalization(p);
    let k = p.term_count();
    let mut anchors = corner_vertices(&pieces);
    if anchors.is_empty() {
        let n = pieces.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let (pi, pj) = (&pieces[i], &pieces[j]);
                let delta = (
                    pi.slope.get(0) - pj.slope.get(0),
                    pi.slope.get(1) - pj.slope.get(1),
                );
                if delta == (0, 0) {
                    continue;
                }
                let c = pj.intercept - pi.intercept;
                let d2 = (delta.0 * delta.0 + delta.1 * delta.1) as f64;
                let x0 = [c * delta.0 as f64 / d2, c * delta.1 as f64 / d2];
                let m = family_max(&pieces, &x0);
                if pi.value(&x0) >= m - ATTAIN_TOL && pj.value(&x0) >= m - ATTAIN_TOL {
                    anchors.push(x0);
                }
            }
        }
    }
    if anchors.is_empty() {
        return Rect::new(-3.0, 3.0, -3.0, 3.0);
    }
    let margin = ((k as f64 - 1.0).max(1.0)).ln() + 1.0;
    let xs: Vec<f64> = anchors.iter().map(|a| a[0]).collect();
    let ys: Vec<f64> = anchors.iter().map(|a| a[1]).collect();
    let fold = |v: &[f64], init: f64, f: fn(f64, f64) -> f64| v.iter().cloned().fold(init, f);
    Rect::new(
        fold(&xs, f64::INFINITY, f64::min) - margin,
        fold(&xs, f64::NEG_INFINITY, f64::max) + margin,
        fold(&ys, f64::INFINITY, f64::min) - margin,
        fold(&ys, f64::NEG_INFINITY, f64::max) + margin,
    )
}

/// Lopsidedness pruning distance ln(k-1): a tropical max-gap above it
/// certifies the dominant term exceeds the sum of all the others.
pub fn prune_distance(p: &LaurentPolynomial) -> f64 {
    let k = p.term_count();
    assert!(k >= 2, "pruning distance needs at least two terms");
    ((k - 1) as f64).ln()
}

/// Gap between the largest and second-largest piece value at `x`.
pub fn max_gap(pieces: &[AffinePiece], x: &[f64]) -> f64 {
    let mut best = f64::NEG_INFINITY;
    let mut second = f64::NEG_INFINITY;
    for p in pieces {
        let v = p.value(x);
        if v > best {
            second = best;
            best = v;
        } else if v > second {
            second = v;
        }
    }
    best - second
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::poly::C64;

    #[test]
    fn tropicalization_of_unit_coefficients() {
        let p = fixtures::trinomial(1);
        let pieces = archimedean_tropicalization(&p);
        assert_eq!(pieces.len(), 3);
        for piece in &pieces {
            assert_eq!(piece.intercept, 0.0);
        }
    }

    #[test]
    fn tropicalization_intercepts_are_log_moduli() {
        let p = LaurentPolynomial::from_terms(
            2,
            &[(&[1, 0], C64::new(5.0, 0.0)), (&[0, 2], C64::new(10.0, 0.0))],
        )
        .unwrap();
        let pieces = archimedean_tropicalization(&p);
        assert!((pieces[1].intercept - 5.0f64.ln()).abs() < 1e-15);
        assert!((pieces[0].intercept - 10.0f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn tropical_line() {
        let p = fixtures::trinomial(1);
        let pieces = archimedean_tropicalization(&p);
        let curve = tropical_curve(&pieces, Rect::new(-3.0, 3.0, -3.0, 3.0)).unwrap();
        assert_eq!(curve.vertices.len(), 1);
        assert!(curve.vertices[0][0].abs() < 1e-12);
        assert!(curve.vertices[0][1].abs() < 1e-12);
        assert_eq!(curve.segments.len(), 0);
        let mut dirs: Vec<[i64; 2]> = curve.rays.iter().map(|r| r.dir).collect();
        dirs.sort();
        assert_eq!(dirs, vec![[-1, 0], [0, -1], [1, 1]]);
    }

    #[test]
    fn two_piece_vertical_line() {
        // z1 + 2 as a bivariate polynomial: corner locus is x1 = ln 2
        let p = LaurentPolynomial::from_terms(
            2,
            &[(&[1, 0], C64::new(1.0, 0.0)), (&[0, 0], C64::new(2.0, 0.0))],
        )
        .unwrap();
        let pieces = archimedean_tropicalization(&p);
        let w = Rect::new(-2.0, 2.0, -2.0, 2.0);
        let curve = tropical_curve(&pieces, w).unwrap();
        assert_eq!(curve.segments.len(), 1);
        assert_eq!(curve.rays.len(), 0);
        for v in &curve.vertices {
            assert!((v[0] - 2.0f64.ln()).abs() < 1e-12);
        }
        let ys: Vec<f64> = curve.vertices.iter().map(|v| v[1]).collect();
        assert!(ys.contains(&-2.0) && ys.contains(&2.0));
    }

    #[test]
    fn segment_midpoints_attain_max_twice() {
        let p = fixtures::p2();
        let pieces = archimedean_tropicalization(&p);
        let w = select_domain(&p);
        let curve = tropical_curve(&pieces, w).unwrap();
        assert!(!curve.segments.is_empty());
        for seg in &curve.segments {
            let a = curve.vertices[seg[0]];
            let b = curve.vertices[seg[1]];
            let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
            let m = family_max(&pieces, &mid);
            let near = pieces
                .iter()
                .filter(|p| p.value(&mid) >= m - 1e-9)
                .count();
            assert!(near >= 2, "midpoint {mid:?} attained by {near} pieces");
        }
        for ray in &curve.rays {
            let v = curve.vertices[ray.vertex];
            let probe = [v[0] + 0.5 * ray.dir[0] as f64, v[1] + 0.5 * ray.dir[1] as f64];
            let m = family_max(&pieces, &probe);
            let near = pieces
                .iter()
                .filter(|p| p.value(&probe) >= m - 1e-9)
                .count();
            assert!(near >= 2);
        }
    }

    #[test]
    fn degenerate_family_rejected() {
        let pieces = vec![
            AffinePiece {
                slope: ExponentVector::new(vec![1, 1]),
                intercept: 0.0,
            },
            AffinePiece {
                slope: ExponentVector::new(vec![1, 1]),
                intercept: 1.0,
            },
        ];
        assert_eq!(
            tropical_curve(&pieces, Rect::new(-1.0, 1.0, -1.0, 1.0)),
            Err(TropicalError::DegenerateFamily)
        );
    }

    #[test]
    fn domain_for_trinomial() {
        let p = fixtures::trinomial(1);
        let d = select_domain(&p);
        let m = 2.0f64.ln() + 1.0;
        assert!((d.x0 + m).abs() < 1e-12 && (d.x1 - m).abs() < 1e-12);
        assert!((d.y0 + m).abs() < 1e-12 && (d.y1 - m).abs() < 1e-12);
    }

    #[test]
    fn domain_for_vertexless_binomial() {
        let p = LaurentPolynomial::from_terms(
            2,
            &[(&[1, 0], C64::new(1.0, 0.0)), (&[0, 0], C64::new(2.0, 0.0))],
        )
        .unwrap();
        let d = select_domain(&p);
        let ln2 = 2.0f64.ln();
        assert!((d.x0 - (ln2 - 1.0)).abs() < 1e-12);
        assert!((d.x1 - (ln2 + 1.0)).abs() < 1e-12);
        assert!((d.y0 + 1.0).abs() < 1e-12 && (d.y1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn domain_fallback_for_monomial() {
        let p = LaurentPolynomial::from_terms(2, &[(&[3, 1], C64::new(2.0, 0.0))]).unwrap();
        assert_eq!(select_domain(&p), Rect::new(-3.0, 3.0, -3.0, 3.0));
    }

    #[test]
    fn prune_distances() {
        assert!((prune_distance(&fixtures::trinomial(1)) - 2.0f64.ln()).abs() < 1e-15);
        assert!((prune_distance(&fixtures::p2()) - 13.0f64.ln()).abs() < 1e-15);
        let p = LaurentPolynomial::from_terms(
            2,
            &[(&[1, 0], C64::new(1.0, 0.0)), (&[0, 0], C64::new(2.0, 0.0))],
        )
        .unwrap();
        assert_eq!(prune_distance(&p), 0.0);
    }
}
