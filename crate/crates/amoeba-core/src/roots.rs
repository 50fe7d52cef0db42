//! Simultaneous-iteration (Aberth-Ehrlich) root finding for the univariate
//! fiber polynomials.
//!
//! Every returned root z satisfies the backward-error bound
//! |q(z)| <= tol * sum_j |c_j| |z|^j, which reduces to tol * max|c_j| on
//! the unit disk and stays attainable in double precision for large roots,
//! where an absolute bound cannot be met. The iteration restarts from
//! deterministically perturbed positions when it stagnates, so clustered
//! and multiple roots still converge.

use crate::poly::C64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RootError {
    #[error("root iteration did not converge after {iterations} iterations (worst residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("polynomial degree must be >= 1 after normalization")]
    InvalidDegree,
    #[error("all coefficients are zero")]
    IdenticallyZero,
}

#[derive(Debug, Clone, Copy)]
pub struct RootConfig {
    /// Backward-error bound: |q(root)| <= tol * sum_i |c_i| |root|^i.
    pub tol: f64,
    pub max_iterations: usize,
    /// Iterations between deterministic perturbation restarts.
    pub restart_every: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig {
            tol: 1e-10,
            max_iterations: 200,
            restart_every: 60,
        }
    }
}

/// Roots (with multiplicity) of `sum coeffs[i] z^i`, sorted by (re, im).
pub fn solve(coeffs: &[C64], cfg: &RootConfig) -> Result<Vec<C64>, RootError> {
    let max_mag = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max_mag == 0.0 {
        return Err(RootError::IdenticallyZero);
    }
    // rescale so the residual bound is absolute
    let scaled: Vec<C64> = coeffs.iter().map(|c| c / max_mag).collect();
    let lead = scaled
        .iter()
        .rposition(|c| c.norm() > 0.0)
        .ok_or(RootError::IdenticallyZero)?;
    let tail = scaled.iter().position(|c| c.norm() > 0.0).unwrap();
    if lead == 0 {
        return Err(RootError::InvalidDegree);
    }
    // factor out z^tail: those roots sit at the origin, which the torus
    // geometry never sees; callers normalize first anyway
    let q = &scaled[tail..=lead];
    let d = q.len() - 1;
    let mut zs = initial_guesses(q);
    let mut status = vec![false; d]; // residual bound met
    let mut rng = SplitMix64::new(0x9E37_79B9_7F4A_7C15);
    let mut worst = f64::INFINITY;
    for iter in 0..cfg.max_iterations {
        let mut all_done = true;
        let mut max_step = 0.0f64;
        for i in 0..d {
            let (val, deriv, mag) = horner_with_derivative(q, zs[i]);
            status[i] = val.norm() <= cfg.tol * mag;
            if status[i] {
                continue;
            }
            all_done = false;
            let newton = if deriv.norm() > 0.0 {
                val / deriv
            } else {
                // flat spot: nudge off it
                C64::new(cfg.tol.sqrt(), cfg.tol.sqrt())
            };
            let mut repulsion = C64::new(0.0, 0.0);
            for (j, zj) in zs.iter().enumerate() {
                if j != i {
                    let diff = zs[i] - zj;
                    if diff.norm() > 1e-300 {
                        repulsion += diff.inv();
                    }
                }
            }
            let denom = C64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            zs[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if all_done {
            // Newton polish: the backward-error stop can leave well-
            // conditioned forward accuracy on the table; steps are kept
            // only when they reduce the residual
            for _ in 0..2 {
                for z in zs.iter_mut() {
                    let (val, deriv, _) = horner_with_derivative(q, *z);
                    if deriv.norm() > 0.0 {
                        let step = val / deriv;
                        if step.norm() <= 0.1 * (1.0 + z.norm()) {
                            let candidate = *z - step;
                            let (val2, _, _) = horner_with_derivative(q, candidate);
                            if val2.norm() <= val.norm() {
                                *z = candidate;
                            }
                        }
                    }
                }
            }
            let mut out: Vec<C64> = zs;
            out.sort_by(|a, b| {
                (a.re, a.im)
                    .partial_cmp(&(b.re, b.im))
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
            return Ok(out);
        }
        worst = zs
            .iter()
            .map(|&z| {
                let (val, _, mag) = horner_with_derivative(q, z);
                val.norm() / mag
            })
            .fold(0.0, f64::max);
        // stagnation: perturb the unconverged approximations
        let stagnated = max_step < 1e-15;
        if stagnated || (iter + 1) % cfg.restart_every == 0 {
            for (i, z) in zs.iter_mut().enumerate() {
                if !status[i] {
                    let r = 1.0 + 1e-3 * rng.next_unit();
                    let phi = 2.0 * std::f64::consts::PI * rng.next_unit();
                    *z *= C64::from_polar(r, 0.05 * phi);
                }
            }
        }
    }
    Err(RootError::NoConvergence {
        iterations: cfg.max_iterations,
        residual: worst,
    })
}

/// Initial positions on circles read off the upper hull of (i, ln|c_i|),
/// so widely scaled coefficients start near the right moduli.
fn initial_guesses(q: &[C64]) -> Vec<C64> {
    let d = q.len() - 1;
    let pts: Vec<(usize, f64)> = q
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(i, c)| (i, c.norm().ln()))
        .collect();
    // upper convex hull over exponent index
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &(x, y) in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            let cross = (x2 - x1) as f64 * (y - y1) - (y2 - y1) * (x - x1) as f64;
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((x, y));
    }
    let mut out = Vec::with_capacity(d);
    let golden = 0.4;
    for w in hull.windows(2) {
        let (i1, y1) = w[0];
        let (i2, y2) = w[1];
        let count = i2 - i1;
        let radius = ((y1 - y2) / count as f64).exp().clamp(1e-150, 1e150);
        for k in 0..count {
            let phi = 2.0 * std::f64::consts::PI * (k as f64 + golden) / count as f64
                + 0.1 * (i1 as f64);
            out.push(C64::from_polar(radius, phi));
        }
    }
    debug_assert_eq!(out.len(), d);
    out
}

/// Value, derivative and the coefficient-magnitude majorant
/// sum_j |c_j| |z|^j in one pass.
fn horner_with_derivative(q: &[C64], z: C64) -> (C64, C64, f64) {
    let az = z.norm();
    let mut val = C64::new(0.0, 0.0);
    let mut der = C64::new(0.0, 0.0);
    let mut mag = 0.0f64;
    for c in q.iter().rev() {
        der = der * z + val;
        val = val * z + c;
        mag = mag * az + c.norm();
    }
    (val, der, mag)
}

/// Deterministic pseudo-random stream for restart perturbations.
struct SplitMix64(u64);

impl SplitMix64 {
    fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn residual_ok(coeffs: &[C64], roots: &[C64], tol: f64) -> bool {
        roots.iter().all(|&r| {
            let mut v = C64::new(0.0, 0.0);
            let mut mag = 0.0f64;
            for c in coeffs.iter().rev() {
                v = v * r + c;
                mag = mag * r.norm() + c.norm();
            }
            v.norm() <= tol * mag
        })
    }

    #[test]
    fn linear() {
        let coeffs = [c(3.0, 0.0), c(1.0, 0.0)];
        let roots = solve(&coeffs, &RootConfig::default()).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - c(-3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn cyclotomic() {
        let coeffs = [c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)];
        let roots = solve(&coeffs, &RootConfig::default()).unwrap();
        let expect = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        assert!((roots[0] - expect.conj()).norm() < 1e-10 || (roots[0] - expect).norm() < 1e-10);
        assert!(residual_ok(&coeffs, &roots, 1e-10));
    }

    #[test]
    fn double_root() {
        // (z - 1)^2
        let coeffs = [c(1.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)];
        let roots = solve(&coeffs, &RootConfig::default()).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert!((r - c(1.0, 0.0)).norm() < 1e-4, "root {r} too far from 1");
        }
        assert!(residual_ok(&coeffs, &roots, 1e-10));
    }

    #[test]
    fn widely_scaled_coefficients() {
        // z^20 + 1e15: roots on circle of radius 1e15^(1/20)
        let mut coeffs = vec![c(0.0, 0.0); 21];
        coeffs[0] = c(1e15, 0.0);
        coeffs[20] = c(1.0, 0.0);
        let roots = solve(&coeffs, &RootConfig::default()).unwrap();
        assert_eq!(roots.len(), 20);
        let expect = 1e15f64.powf(1.0 / 20.0);
        for r in &roots {
            assert!((r.norm() - expect).abs() / expect < 1e-8);
        }
        assert!(residual_ok(&coeffs, &roots, 1e-10));
    }

    #[test]
    fn wilkinson_style_degree_10() {
        // (z-1)(z-2)...(z-10)
        let mut coeffs = vec![c(1.0, 0.0)];
        for k in 1..=10 {
            let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
            for (i, &a) in coeffs.iter().enumerate() {
                next[i] -= a * k as f64;
                next[i + 1] += a;
            }
            coeffs = next;
        }
        let roots = solve(&coeffs, &RootConfig::default()).unwrap();
        for (i, r) in roots.iter().enumerate() {
            assert!(
                (r - c((i + 1) as f64, 0.0)).norm() < 1e-6,
                "root {i}: {r}"
            );
        }
    }

    #[test]
    fn rejects_degenerate_input() {
        assert_eq!(
            solve(&[c(0.0, 0.0)], &RootConfig::default()),
            Err(RootError::IdenticallyZero)
        );
        assert_eq!(
            solve(&[c(1.0, 0.0)], &RootConfig::default()),
            Err(RootError::InvalidDegree)
        );
    }

    #[test]
    fn deterministic_output() {
        let coeffs = [c(0.3, 0.1), c(-1.0, 2.0), c(0.5, 0.0), c(1.0, -1.0)];
        let a = solve(&coeffs, &RootConfig::default()).unwrap();
        let b = solve(&coeffs, &RootConfig::default()).unwrap();
        assert_eq!(a, b);
    }
}
