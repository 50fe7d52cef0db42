//! Point-in-amoeba decisions: a lopsidedness certificate for the complement,
//! a torus-fiber root search for containment, and the combined verdict.

use crate::poly::{C64, LaurentPolynomial, LogPoint};
use crate::roots::{self, RootConfig, RootError};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MembershipError {
    #[error("fiber root search failed: {0}")]
    Root(#[from] RootError),
    #[error("fiber membership handles 1 or 2 variables, got {0}")]
    Unsupported(usize),
    #[error(transparent)]
    Poly(#[from] crate::poly::PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum MembershipStatus {
    InAmoeba,
    CertifiedOutside,
    ProbablyOutside,
}

/// Evidence attached to a verdict.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub enum Witness {
    /// Angle of the swept variable at which a fiber root lands on the point.
    /// `crossing` marks a bisection-confirmed modulus crossing; plain
    /// tolerance hits are lower confidence.
    FiberAngle { theta: f64, crossing: bool },
    /// Index (in canonical term order) of the term whose modulus exceeds
    /// the sum of all the others.
    Dominator { term: usize },
    /// Sampling resolution that failed to find the point.
    Resolution { samples: usize, tau_mod: f64 },
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct MembershipVerdict {
    pub status: MembershipStatus,
    pub witness: Witness,
}

#[derive(Debug, Clone, Copy)]
pub struct MembershipParams {
    pub samples: usize,
    /// Log-scale tolerance on |ln|root| - x|.
    pub tau_mod: f64,
    /// Bisection steps used to confirm a root-modulus crossing.
    pub bisection_steps: usize,
    /// Sweep the first variable instead of the last.
    pub transpose: bool,
}

impl Default for MembershipParams {
    fn default() -> Self {
        MembershipParams {
            samples: 128,
            tau_mod: 1e-3,
            bisection_steps: 10,
            transpose: false,
        }
    }
}

/// Uniform angle grid over [-pi, pi), computed so that symmetric fractions
/// land exactly on representable values.
pub(crate) fn torus_angles(samples: usize) -> Vec<f64> {
    (0..samples)
        .map(|j| PI * (2.0 * j as f64 / samples as f64 - 1.0))
        .collect()
}

/// Returns the index of a term whose modulus at `x` exceeds the sum of all
/// the others; such a point is certified outside the amoeba. Moduli are
/// rescaled by the dominant term before exponentiation so large exponents
/// cannot overflow.
pub fn lopsided(p: &LaurentPolynomial, x: &LogPoint) -> Option<usize> {
    let logs: Vec<f64> = p
        .terms()
        .iter()
        .map(|(e, c)| c.norm().ln() + e.dot(x.coords()))
        .collect();
    let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = logs.iter().map(|l| (l - m).exp()).collect();
    let total: f64 = weights.iter().sum();
    weights
        .iter()
        .position(|&w| w > total - w)
}

/// Sorted root log-moduli of one torus fiber, or the whole fiber when the
/// restricted polynomial vanishes identically.
pub(crate) enum FiberRoots {
    Degenerate,
    Mods(Vec<f64>),
}

pub(crate) struct FiberSolver<'a> {
    p: &'a LaurentPolynomial,
    pub fiber_var: usize,
    cfg: RootConfig,
}

impl<'a> FiberSolver<'a> {
    /// `fiber_var` is the variable solved for; the other variable is pinned
    /// to modulus e^base and swept in angle. Two-variable polynomials only.
    pub(crate) fn new(p: &'a LaurentPolynomial, fiber_var: usize) -> Self {
        debug_assert_eq!(p.dimension(), 2);
        FiberSolver {
            p,
            fiber_var,
            cfg: RootConfig::default(),
        }
    }

    pub(crate) fn solve(&self, base: f64, theta: f64) -> Result<FiberRoots, RootError> {
        match self.solve_roots(base, theta)? {
            None => Ok(FiberRoots::Degenerate),
            Some(roots) => {
                let mut mods: Vec<f64> = roots
                    .iter()
                    .filter(|r| r.norm() > 0.0)
                    .map(|r| r.norm().ln())
                    .filter(|m| m.is_finite())
                    .collect();
                mods.sort_by(|a, b| a.partial_cmp(b).unwrap());
                Ok(FiberRoots::Mods(mods))
            }
        }
    }

    /// Full complex fiber roots; `None` when the restricted polynomial
    /// vanishes identically.
    pub(crate) fn solve_roots(
        &self,
        base: f64,
        theta: f64,
    ) -> Result<Option<Vec<C64>>, RootError> {
        let z = C64::from_polar(base.exp(), theta);
        let fiber = self
            .p
            .restrict_fiber(&[z], self.fiber_var)
            .expect("two-variable fiber restriction cannot fail on torus values");
        if fiber.is_identically_zero() {
            return Ok(None);
        }
        let coeffs = fiber.normalized();
        if coeffs.len() < 2 {
            return Ok(Some(Vec::new()));
        }
        Ok(Some(roots::solve(&coeffs, &self.cfg)?))
    }
}

pub(crate) struct Hit {
    pub theta: f64,
    pub crossing: bool,
}

fn count_below(mods: &[f64], level: f64) -> usize {
    mods.partition_point(|&m| m < level)
}

fn min_distance(mods: &[f64], level: f64) -> f64 {
    let i = mods.partition_point(|&m| m < level);
    let mut d = f64::INFINITY;
    if i < mods.len() {
        d = d.min((mods[i] - level).abs());
    }
    if i > 0 {
        d = d.min((mods[i - 1] - level).abs());
    }
    d
}

/// Classifies one level against a scanned fiber family: a tolerance hit or a
/// bisection-confirmed crossing of the root-modulus curves.
///
/// `scan[j]` are the sorted root log-moduli at `thetas[j]`; degenerate
/// fibers are `None` inside the caller-provided view. The solver re-solves
/// fibers during bisection.
pub(crate) fn classify_level(
    scan: &[FiberRoots],
    thetas: &[f64],
    level: f64,
    tau: f64,
    steps: usize,
    solver: &FiberSolver,
    base: f64,
) -> Result<Option<Hit>, RootError> {
    // degenerate fiber: the whole line over that angle lies on the locus
    for (j, fr) in scan.iter().enumerate() {
        if matches!(fr, FiberRoots::Degenerate) {
            return Ok(Some(Hit {
                theta: thetas[j],
                crossing: true,
            }));
        }
    }
    let mods =
        |j: usize| -> &[f64] { match &scan[j] { FiberRoots::Mods(m) => m, _ => unreachable!() } };

    let mut tolerance_hit: Option<Hit> = None;
    for j in 0..scan.len() {
        if min_distance(mods(j), level) <= tau {
            tolerance_hit = Some(Hit {
                theta: thetas[j],
                crossing: false,
            });
            break;
        }
    }

    // root-count jumps across adjacent angles flag a modulus crossing;
    // bisection then pins it down and verifies the distance
    let m = scan.len();
    for j in 0..m {
        let k = (j + 1) % m;
        let nj = count_below(mods(j), level);
        let nk = count_below(mods(k), level);
        if nj == nk {
            continue;
        }
        let mut ta = thetas[j];
        let mut tb = if k == 0 {
            thetas[j] + (thetas[1] - thetas[0])
        } else {
            thetas[k]
        };
        let mut na = nj;
        let total_steps = steps.max(10) + 30;
        let mut confirmed = None;
        for step in 0..total_steps {
            let tm = 0.5 * (ta + tb);
            let fm = solver.solve(base, tm)?;
            let mm = match &fm {
                FiberRoots::Degenerate => {
                    confirmed = Some(tm);
                    break;
                }
                FiberRoots::Mods(v) => v,
            };
            let d = min_distance(mm, level);
            if step >= steps && d <= tau.max(1e-9) {
                confirmed = Some(tm);
                break;
            }
            if count_below(mm, level) != na {
                tb = tm;
            } else {
                ta = tm;
                na = count_below(mm, level);
            }
        }
        if let Some(theta) = confirmed {
            return Ok(Some(Hit {
                theta,
                crossing: true,
            }));
        }
    }

    if tolerance_hit.is_some() {
        return Ok(tolerance_hit);
    }

    // a modulus curve can dip through the level and back between two
    // samples, leaving neither a tolerance hit nor a count jump; sampled
    // local minima of the distance flag those dips for refinement
    let d: Vec<f64> = (0..m).map(|j| min_distance(mods(j), level)).collect();
    let step = if m >= 2 { thetas[1] - thetas[0] } else { return Ok(None) };
    for j in 0..m {
        let (prev, next) = (d[(j + m - 1) % m], d[(j + 1) % m]);
        if d[j] > prev || d[j] > next {
            continue;
        }
        let variation = (next - d[j]).max(d[j] - prev).abs();
        if d[j] > 8.0 * tau + 2.0 * variation {
            continue;
        }
        if let Some(theta) =
            golden_refine(solver, base, level, thetas[j] - step, thetas[j] + step, tau)?
        {
            return Ok(Some(Hit {
                theta,
                crossing: false,
            }));
        }
    }

    Ok(None)
}

/// Golden-section search for a root-modulus approach below `tau` inside
/// the bracket.
fn golden_refine(
    solver: &FiberSolver,
    base: f64,
    level: f64,
    mut a: f64,
    mut b: f64,
    tau: f64,
) -> Result<Option<f64>, RootError> {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let dist = |t: f64| -> Result<f64, RootError> {
        Ok(match solver.solve(base, t)? {
            FiberRoots::Degenerate => 0.0,
            FiberRoots::Mods(v) => min_distance(&v, level),
        })
    };
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = dist(x1)?;
    let mut f2 = dist(x2)?;
    for _ in 0..24 {
        if f1.min(f2) <= tau {
            return Ok(Some(if f1 <= f2 { x1 } else { x2 }));
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = dist(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = dist(x2)?;
        }
    }
    Ok(None)
}

fn normalize_angle(theta: f64) -> f64 {
    let mut t = theta;
    while t >= PI {
        t -= 2.0 * PI;
    }
    while t < -PI {
        t += 2.0 * PI;
    }
    t
}

/// Fiber-sampling membership test: sweep the pinned variable over a uniform
/// angle grid, solve the fiber in the other variable and look for a root
/// whose log-modulus matches the target within `tau_mod`, upgrading
/// tolerance hits to confirmed crossings by bisection.
///
/// A root-solver failure surfaces as an error unless a containment witness
/// was already found.
pub fn fiber_membership(
    p: &LaurentPolynomial,
    x: &LogPoint,
    samples: usize,
    tau_mod: f64,
) -> Result<MembershipVerdict, MembershipError> {
    fiber_membership_with(p, x, &MembershipParams {
        samples,
        tau_mod,
        ..MembershipParams::default()
    })
}

pub fn fiber_membership_with(
    p: &LaurentPolynomial,
    x: &LogPoint,
    params: &MembershipParams,
) -> Result<MembershipVerdict, MembershipError> {
    assert!(params.samples >= 8, "need at least 8 angle samples");
    match p.dimension() {
        1 => fiber_membership_univariate(p, x, params),
        2 => {
            let fiber_var = if params.transpose { 0 } else { 1 };
            let solver = FiberSolver::new(p, fiber_var);
            let base = x.coords()[1 - fiber_var];
            let level = x.coords()[fiber_var];
            let thetas = torus_angles(params.samples);
            let mut scan = Vec::with_capacity(params.samples);
            let mut failure: Option<RootError> = None;
            for &t in &thetas {
                match solver.solve(base, t) {
                    Ok(fr) => scan.push(fr),
                    Err(e) => {
                        failure = Some(e);
                        scan.push(FiberRoots::Mods(Vec::new()));
                    }
                }
            }
            let hit = classify_level(
                &scan,
                &thetas,
                level,
                params.tau_mod,
                params.bisection_steps,
                &solver,
                base,
            )?;
            match hit {
                Some(h) => Ok(MembershipVerdict {
                    status: MembershipStatus::InAmoeba,
                    witness: Witness::FiberAngle {
                        theta: normalize_angle(h.theta),
                        crossing: h.crossing,
                    },
                }),
                None => {
                    if let Some(e) = failure {
                        return Err(e.into());
                    }
                    Ok(MembershipVerdict {
                        status: MembershipStatus::ProbablyOutside,
                        witness: Witness::Resolution {
                            samples: params.samples,
                            tau_mod: params.tau_mod,
                        },
                    })
                }
            }
        }
        n => Err(MembershipError::Unsupported(n)),
    }
}

fn fiber_membership_univariate(
    p: &LaurentPolynomial,
    x: &LogPoint,
    params: &MembershipParams,
) -> Result<MembershipVerdict, MembershipError> {
    let fiber = p.restrict_fiber(&[], 0)?;
    if fiber.is_identically_zero() {
        return Ok(MembershipVerdict {
            status: MembershipStatus::InAmoeba,
            witness: Witness::FiberAngle {
                theta: 0.0,
                crossing: true,
            },
        });
    }
    let coeffs = fiber.normalized();
    if coeffs.len() >= 2 {
        let roots = roots::solve(&coeffs, &RootConfig::default())?;
        for r in roots {
            let m = r.norm().ln();
            if (m - x.coords()[0]).abs() <= params.tau_mod {
                let mut a = r.arg();
                if a >= PI {
                    a -= 2.0 * PI;
                }
                return Ok(MembershipVerdict {
                    status: MembershipStatus::InAmoeba,
                    witness: Witness::FiberAngle {
                        theta: a,
                        crossing: (m - x.coords()[0]).abs() <= 1e-12,
                    },
                });
            }
        }
    }
    Ok(MembershipVerdict {
        status: MembershipStatus::ProbablyOutside,
        witness: Witness::Resolution {
            samples: params.samples,
            tau_mod: params.tau_mod,
        },
    })
}

/// Combined decision: the lopsidedness certificate first, then the fiber
/// search.
pub fn decide(
    p: &LaurentPolynomial,
    x: &LogPoint,
    params: &MembershipParams,
) -> Result<MembershipVerdict, MembershipError> {
    if let Some(term) = lopsided(p, x) {
        return Ok(MembershipVerdict {
            status: MembershipStatus::CertifiedOutside,
            witness: Witness::Dominator { term },
        });
    }
    fiber_membership_with(p, x, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::poly::LaurentPolynomial;

    fn lp(coords: &[f64]) -> LogPoint {
        LogPoint::new(coords.to_vec())
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn z1_plus_z2_plus_10() -> LaurentPolynomial {
        LaurentPolynomial::from_terms(
            2,
            &[
                (&[1, 0], c(1.0, 0.0)),
                (&[0, 1], c(1.0, 0.0)),
                (&[0, 0], c(10.0, 0.0)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn lopsided_constant_dominates() {
        let p = z1_plus_z2_plus_10();
        let idx = lopsided(&p, &lp(&[0.0, 0.0])).unwrap();
        assert_eq!(p.terms()[idx].0.as_slice(), &[0, 0]);
    }

    #[test]
    fn lopsided_inconclusive_at_balanced_point() {
        let p = fixtures::trinomial(1);
        assert_eq!(lopsided(&p, &lp(&[0.0, 0.0])), None);
    }

    #[test]
    fn lopsided_p1_far_corner() {
        let p = fixtures::p1();
        let idx = lopsided(&p, &lp(&[10.0, 10.0])).unwrap();
        assert_eq!(p.terms()[idx].0.as_slice(), &[2, 4]);
    }

    #[test]
    fn fiber_hit_at_origin() {
        let p = fixtures::trinomial(1);
        let v = fiber_membership(&p, &lp(&[0.0, 0.0]), 128, 1e-3).unwrap();
        assert_eq!(v.status, MembershipStatus::InAmoeba);
    }

    #[test]
    fn fiber_miss_far_right() {
        let p = fixtures::trinomial(1);
        let v = fiber_membership(&p, &lp(&[3.0, 0.0]), 128, 1e-3).unwrap();
        assert_eq!(v.status, MembershipStatus::ProbablyOutside);
    }

    #[test]
    fn fiber_hit_near_junction() {
        let p = fixtures::trinomial(1);
        let v = fiber_membership(&p, &lp(&[0.1, 0.1]), 128, 1e-3).unwrap();
        assert_eq!(v.status, MembershipStatus::InAmoeba);
    }

    #[test]
    fn decide_pipeline() {
        let p10 = z1_plus_z2_plus_10();
        let v = decide(&p10, &lp(&[0.0, 0.0]), &MembershipParams::default()).unwrap();
        assert_eq!(v.status, MembershipStatus::CertifiedOutside);

        let p = fixtures::trinomial(1);
        let v = decide(&p, &lp(&[0.0, 0.0]), &MembershipParams::default()).unwrap();
        assert_eq!(v.status, MembershipStatus::InAmoeba);
    }

    #[test]
    fn degenerate_fiber_marks_whole_line() {
        // z1 + 2 embedded in two variables: at x1 = ln 2 the angle grid hits
        // z1 = -2 and the fiber vanishes identically
        let p = LaurentPolynomial::from_terms(
            2,
            &[(&[1, 0], c(1.0, 0.0)), (&[0, 0], c(2.0, 0.0))],
        )
        .unwrap();
        let v = fiber_membership(&p, &lp(&[2.0f64.ln(), 0.7]), 128, 1e-3).unwrap();
        assert_eq!(v.status, MembershipStatus::InAmoeba);
        match v.witness {
            Witness::FiberAngle { crossing, .. } => assert!(crossing),
            w => panic!("unexpected witness {w:?}"),
        }
        let v = fiber_membership(&p, &lp(&[0.0, 0.7]), 128, 1e-3).unwrap();
        assert_eq!(v.status, MembershipStatus::ProbablyOutside);
    }

    #[test]
    fn univariate_direct_test() {
        let p = LaurentPolynomial::from_terms(1, &[(&[1], c(1.0, 0.0)), (&[0], c(2.0, 0.0))])
            .unwrap();
        let v = fiber_membership(&p, &lp(&[2.0f64.ln()]), 8, 1e-9).unwrap();
        assert_eq!(v.status, MembershipStatus::InAmoeba);
        let v = fiber_membership(&p, &lp(&[0.0]), 8, 1e-3).unwrap();
        assert_eq!(v.status, MembershipStatus::ProbablyOutside);
    }

    #[test]
    fn rotation_invariance() {
        let rot = C64::from_polar(1.0, 0.9);
        let p = fixtures::p1();
        let q = LaurentPolynomial::new(
            2,
            p.terms().iter().map(|(e, c)| (e.clone(), c * rot)).collect(),
        )
        .unwrap();
        for pt in [[0.0, 0.0], [1.0, -0.5], [4.0, 4.0], [-2.0, 1.0]] {
            let a = decide(&p, &lp(&pt), &MembershipParams::default()).unwrap();
            let b = decide(&q, &lp(&pt), &MembershipParams::default()).unwrap();
            assert_eq!(a.status, b.status, "at {pt:?}");
        }
    }

    #[test]
    fn monotone_refinement() {
        let p = fixtures::p1();
        for pt in [[0.0, 0.0], [0.5, 0.5], [1.0, 2.0]] {
            let v64 = fiber_membership(&p, &lp(&pt), 64, 1e-3).unwrap();
            if v64.status == MembershipStatus::InAmoeba {
                let v128 = fiber_membership(&p, &lp(&pt), 128, 1e-3).unwrap();
                assert_eq!(v128.status, MembershipStatus::InAmoeba);
            }
        }
    }
}
