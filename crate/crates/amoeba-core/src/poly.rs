//! Laurent polynomials over the complex torus and the projection maps
//! (log-modulus, argument, moment) that produce amoebas, coamoebas and
//! compactified amoebas.

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

pub type C64 = Complex64;

#[derive(Debug, Error, PartialEq)]
pub enum PolyError {
    #[error("coordinate {variable} is zero but must be nonzero here")]
    ZeroCoordinate { variable: usize },
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("a Laurent polynomial needs at least one nonzero term")]
    EmptyPolynomial,
    #[error("variable index {0} out of range")]
    VariableOutOfRange(usize),
    #[error("logarithmic map produced a nonfinite coordinate")]
    NonfiniteCoordinate,
}

/// Integer exponent vector of one monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(pub Vec<i64>);

impl ExponentVector {
    pub fn new(entries: Vec<i64>) -> Self {
        assert!(!entries.is_empty(), "exponent vector must have length >= 1");
        ExponentVector(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, var: usize) -> i64 {
        self.0[var]
    }

    /// Euclidean inner product with a real point.
    pub fn dot(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(self.0.len(), x.len());
        self.0.iter().zip(x).map(|(&a, &v)| a as f64 * v).sum()
    }

    pub fn translated(&self, shift: &[i64]) -> Self {
        debug_assert_eq!(self.0.len(), shift.len());
        ExponentVector(self.0.iter().zip(shift).map(|(a, s)| a + s).collect())
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        ExponentVector::new(v)
    }
}

/// Point in log-modulus coordinates, the target of the Log map.
#[derive(Debug, Clone, PartialEq)]
pub struct LogPoint(pub Vec<f64>);

impl LogPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        LogPoint(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

/// Point on the argument torus, every angle in [-pi, pi).
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint(pub Vec<f64>);

impl TorusPoint {
    pub fn angles(&self) -> &[f64] {
        &self.0
    }
}

/// Finitely supported Laurent polynomial in `dimension` complex variables.
///
/// Terms are kept sorted lexicographically by exponent, with like terms
/// combined and zero coefficients dropped, so evaluation order and printing
/// are deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPolynomial {
    dimension: usize,
    terms: Vec<(ExponentVector, C64)>,
}

impl LaurentPolynomial {
    pub fn new(
        dimension: usize,
        terms: Vec<(ExponentVector, C64)>,
    ) -> Result<Self, PolyError> {
        assert!(dimension >= 1, "dimension must be >= 1");
        let mut map: std::collections::BTreeMap<ExponentVector, C64> =
            std::collections::BTreeMap::new();
        for (e, c) in terms {
            if e.len() != dimension {
                return Err(PolyError::DimensionMismatch {
                    expected: dimension,
                    got: e.len(),
                });
            }
            let entry = map.entry(e).or_insert(C64::new(0.0, 0.0));
            *entry += c;
        }
        let terms: Vec<_> = map
            .into_iter()
            .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
            .collect();
        if terms.is_empty() {
            return Err(PolyError::EmptyPolynomial);
        }
        Ok(LaurentPolynomial { dimension, terms })
    }

    /// Convenience constructor from `(exponents, coefficient)` tuples.
    pub fn from_terms(
        dimension: usize,
        terms: &[(&[i64], C64)],
    ) -> Result<Self, PolyError> {
        LaurentPolynomial::new(
            dimension,
            terms
                .iter()
                .map(|(e, c)| (ExponentVector::new(e.to_vec()), *c))
                .collect(),
        )
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn terms(&self) -> &[(ExponentVector, C64)] {
        &self.terms
    }

    pub fn support(&self) -> impl Iterator<Item = &ExponentVector> {
        self.terms.iter().map(|(e, _)| e)
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// True if some term has a negative exponent in `var`.
    fn has_negative_exponent(&self, var: usize) -> bool {
        self.terms.iter().any(|(e, _)| e.get(var) < 0)
    }

    /// Term-wise evaluation in the fixed lexicographic term order.
    pub fn evaluate(&self, z: &[C64]) -> Result<C64, PolyError> {
        if z.len() != self.dimension {
            return Err(PolyError::DimensionMismatch {
                expected: self.dimension,
                got: z.len(),
            });
        }
        for (i, zi) in z.iter().enumerate() {
            if zi.re == 0.0 && zi.im == 0.0 && self.has_negative_exponent(i) {
                return Err(PolyError::ZeroCoordinate { variable: i });
            }
        }
        let mut acc = C64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            acc += c * monomial_value(z, e);
        }
        Ok(acc)
    }

    /// The plain partial derivative with respect to `var` (0-based). A
    /// polynomial constant in `var` differentiates to zero, which this type
    /// cannot hold; that case reports `EmptyPolynomial`.
    pub fn partial_derivative(&self, var: usize) -> Result<LaurentPolynomial, PolyError> {
        if var >= self.dimension {
            return Err(PolyError::VariableOutOfRange(var));
        }
        let terms: Vec<_> = self
            .terms
            .iter()
            .filter(|(e, _)| e.get(var) != 0)
            .map(|(e, c)| {
                let mut exps = e.0.clone();
                let a = exps[var];
                exps[var] -= 1;
                (ExponentVector(exps), c * a as f64)
            })
            .collect();
        LaurentPolynomial::new(self.dimension, terms)
    }

    /// Substitutes `fixed` for every variable except `fiber_var` and collects
    /// the result as a univariate Laurent polynomial in that variable.
    ///
    /// `fixed` lists the substituted values in variable order, skipping
    /// `fiber_var`. Coefficient slots whose contributions cancel below
    /// 1e-12 of their accumulated magnitude are treated as exact zeros.
    pub fn restrict_fiber(
        &self,
        fixed: &[C64],
        fiber_var: usize,
    ) -> Result<UnivariateLaurent, PolyError> {
        if fiber_var >= self.dimension {
            return Err(PolyError::VariableOutOfRange(fiber_var));
        }
        if fixed.len() != self.dimension - 1 {
            return Err(PolyError::DimensionMismatch {
                expected: self.dimension - 1,
                got: fixed.len(),
            });
        }
        for (i, v) in fixed.iter().enumerate() {
            if v.re == 0.0 && v.im == 0.0 {
                let var = if i < fiber_var { i } else { i + 1 };
                return Err(PolyError::ZeroCoordinate { variable: var });
            }
        }
        let lo = self.terms.iter().map(|(e, _)| e.get(fiber_var)).min().unwrap();
        let hi = self.terms.iter().map(|(e, _)| e.get(fiber_var)).max().unwrap();
        let width = (hi - lo) as usize + 1;
        let mut coeffs = vec![C64::new(0.0, 0.0); width];
        let mut mags = vec![0.0f64; width];
        for (e, c) in &self.terms {
            let mut v = *c;
            for (k, &f) in fixed.iter().enumerate() {
                let var = if k < fiber_var { k } else { k + 1 };
                v *= pow_i64(f, e.get(var));
            }
            let slot = (e.get(fiber_var) - lo) as usize;
            coeffs[slot] += v;
            mags[slot] += v.norm();
        }
        for (c, &m) in coeffs.iter_mut().zip(&mags) {
            if c.norm() < 1e-12 * m {
                *c = C64::new(0.0, 0.0);
            }
        }
        Ok(UnivariateLaurent {
            min_power: lo,
            coeffs,
        })
    }
}

/// z^e with integer (possibly negative) exponent vector.
pub fn monomial_value(z: &[C64], e: &ExponentVector) -> C64 {
    let mut acc = C64::new(1.0, 0.0);
    for (zi, &ei) in z.iter().zip(&e.0) {
        acc *= pow_i64(*zi, ei);
    }
    acc
}

fn pow_i64(z: C64, e: i64) -> C64 {
    debug_assert!(e.unsigned_abs() <= i32::MAX as u64);
    z.powi(e as i32)
}

/// Univariate Laurent polynomial produced by fiber restriction.
#[derive(Debug, Clone, PartialEq)]
pub struct UnivariateLaurent {
    /// Power of the variable carried by `coeffs[0]`.
    pub min_power: i64,
    /// Ascending coefficients for powers `min_power ..= min_power + len - 1`.
    pub coeffs: Vec<C64>,
}

impl UnivariateLaurent {
    /// True when every coefficient vanished, i.e. the whole fiber lies on the
    /// zero locus.
    pub fn is_identically_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// Multiplies by the variable power that clears negative exponents and
    /// trailing zeros, returning ordinary ascending coefficients with a
    /// nonzero constant and leading term. Zero roots introduced or removed
    /// this way lie on coordinate hyperplanes, which Log excludes.
    pub fn normalized(&self) -> Vec<C64> {
        let is_zero = |c: &C64| c.re == 0.0 && c.im == 0.0;
        let lo = match self.coeffs.iter().position(|c| !is_zero(c)) {
            Some(i) => i,
            None => return Vec::new(),
        };
        let hi = self.coeffs.iter().rposition(|c| !is_zero(c)).unwrap();
        self.coeffs[lo..=hi].to_vec()
    }

    /// Degree of the normalized ordinary polynomial; 0 for constants and
    /// identically-zero input.
    pub fn normalized_degree(&self) -> usize {
        self.normalized().len().saturating_sub(1)
    }
}

/// Coordinate-wise natural log of moduli.
pub fn log_map(z: &[C64]) -> Result<LogPoint, PolyError> {
    let mut coords = Vec::with_capacity(z.len());
    for (i, zi) in z.iter().enumerate() {
        let r = zi.norm();
        if r == 0.0 {
            return Err(PolyError::ZeroCoordinate { variable: i });
        }
        let x = r.ln();
        if !x.is_finite() {
            return Err(PolyError::NonfiniteCoordinate);
        }
        coords.push(x);
    }
    Ok(LogPoint(coords))
}

/// Coordinate-wise argument, normalized to [-pi, pi).
pub fn arg_map(z: &[C64]) -> Result<TorusPoint, PolyError> {
    let mut angles = Vec::with_capacity(z.len());
    for (i, zi) in z.iter().enumerate() {
        if zi.re == 0.0 && zi.im == 0.0 {
            return Err(PolyError::ZeroCoordinate { variable: i });
        }
        let mut a = zi.arg();
        if a >= PI {
            a -= 2.0 * PI;
        }
        angles.push(a);
    }
    Ok(TorusPoint(angles))
}

/// Moment map nu(z) = sum |z^a| a / sum |z^a| over the support; lands in the
/// Newton polytope. Weights are rescaled by the dominant term so large
/// exponents do not overflow.
pub fn moment_map(z: &[C64], support: &[ExponentVector]) -> Result<Vec<f64>, PolyError> {
    assert!(!support.is_empty(), "moment map needs a nonempty support");
    let x = log_map(z)?;
    let n = x.0.len();
    let logs: Vec<f64> = support.iter().map(|a| a.dot(&x.0)).collect();
    let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut num = vec![0.0; n];
    let mut den = 0.0;
    for (a, &l) in support.iter().zip(&logs) {
        let w = (l - m).exp();
        den += w;
        for (acc, &ai) in num.iter_mut().zip(&a.0) {
            *acc += w * ai as f64;
        }
    }
    Ok(num.into_iter().map(|v| v / den).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn trinomial() -> LaurentPolynomial {
        LaurentPolynomial::from_terms(
            2,
            &[
                (&[1, 0], c(1.0, 0.0)),
                (&[0, 1], c(1.0, 0.0)),
                (&[0, 0], c(1.0, 0.0)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn evaluate_cyclotomic_zero() {
        let p = trinomial();
        let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
        let v = p.evaluate(&[w, w.conj()]).unwrap();
        assert!(v.norm() < 1e-14, "got {v}");
    }

    #[test]
    fn evaluate_linear_root() {
        let p = LaurentPolynomial::from_terms(1, &[(&[1], c(1.0, 0.0)), (&[0], c(2.0, 0.0))])
            .unwrap();
        let v = p.evaluate(&[c(-2.0, 0.0)]).unwrap();
        assert_eq!(v, c(0.0, 0.0));
    }

    #[test]
    fn evaluate_p2_at_ones() {
        let p = crate::fixtures::p2();
        let v = p.evaluate(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(v.re, 3156.0);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn evaluate_rejects_zero_with_negative_exponent() {
        let p = LaurentPolynomial::from_terms(1, &[(&[-1], c(1.0, 0.0))]).unwrap();
        assert_eq!(
            p.evaluate(&[c(0.0, 0.0)]),
            Err(PolyError::ZeroCoordinate { variable: 0 })
        );
        // zero is fine when all exponents are nonnegative
        let q = LaurentPolynomial::from_terms(1, &[(&[2], c(1.0, 0.0))]).unwrap();
        assert_eq!(q.evaluate(&[c(0.0, 0.0)]).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn evaluate_term_order_is_canonical() {
        let a = LaurentPolynomial::from_terms(
            2,
            &[
                (&[0, 0], c(1.0, 0.0)),
                (&[1, 0], c(2.0, 0.0)),
                (&[0, 1], c(3.0, 0.0)),
            ],
        )
        .unwrap();
        let b = LaurentPolynomial::from_terms(
            2,
            &[
                (&[0, 1], c(3.0, 0.0)),
                (&[0, 0], c(1.0, 0.0)),
                (&[1, 0], c(2.0, 0.0)),
            ],
        )
        .unwrap();
        assert_eq!(a, b);
        let z = [c(0.3, 0.7), c(-1.2, 0.4)];
        assert_eq!(a.evaluate(&z).unwrap(), b.evaluate(&z).unwrap());
    }

    #[test]
    fn derivative_drops_constant() {
        let p = trinomial();
        let d = p.partial_derivative(0).unwrap();
        assert_eq!(d.terms().len(), 1);
        assert_eq!(d.terms()[0].0.as_slice(), &[0, 0]);
        assert_eq!(d.terms()[0].1, c(1.0, 0.0));
    }

    #[test]
    fn derivative_in_absent_variable_is_zero() {
        let p = LaurentPolynomial::from_terms(
            2,
            &[(&[1, 0], c(1.0, 0.0)), (&[0, 0], c(2.0, 0.0))],
        )
        .unwrap();
        assert_eq!(
            p.partial_derivative(1).unwrap_err(),
            PolyError::EmptyPolynomial
        );
    }

    #[test]
    fn derivative_power_rule() {
        let p = LaurentPolynomial::from_terms(2, &[(&[3, 2], c(1.0, 0.0))]).unwrap();
        let d = p.partial_derivative(1).unwrap();
        assert_eq!(d.terms()[0].0.as_slice(), &[3, 1]);
        assert_eq!(d.terms()[0].1, c(2.0, 0.0));
    }

    #[test]
    fn derivative_laurent_power_rule() {
        let p = LaurentPolynomial::from_terms(2, &[(&[-1, 0], c(1.0, 0.0)), (&[0, 1], c(1.0, 0.0))])
            .unwrap();
        let d = p.partial_derivative(0).unwrap();
        assert_eq!(d.terms().len(), 1);
        assert_eq!(d.terms()[0].0.as_slice(), &[-2, 0]);
        assert_eq!(d.terms()[0].1, c(-1.0, 0.0));
    }

    #[test]
    fn restrict_fiber_collects_powers() {
        // z1 + z2 + 1 with z1 = 2 -> z2 + 3
        let p = trinomial();
        let f = p.restrict_fiber(&[c(2.0, 0.0)], 1).unwrap();
        assert_eq!(f.min_power, 0);
        assert_eq!(f.coeffs, vec![c(3.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn restrict_fiber_complex_substitution() {
        // z1^2 z2 + z2^2 with z1 = i -> z2^2 - z2
        let p = LaurentPolynomial::from_terms(
            2,
            &[(&[2, 1], c(1.0, 0.0)), (&[0, 2], c(1.0, 0.0))],
        )
        .unwrap();
        let f = p.restrict_fiber(&[c(0.0, 1.0)], 1).unwrap();
        assert_eq!(f.min_power, 1);
        assert_eq!(f.coeffs, vec![c(-1.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn restrict_fiber_normalizes_negative_powers() {
        // z1 + z1^-1 + z2 with z2 = 1 -> z1 + z1^-1 + 1 -> z1^2 + z1 + 1
        let p = LaurentPolynomial::from_terms(
            2,
            &[
                (&[1, 0], c(1.0, 0.0)),
                (&[-1, 0], c(1.0, 0.0)),
                (&[0, 1], c(1.0, 0.0)),
            ],
        )
        .unwrap();
        let f = p.restrict_fiber(&[c(1.0, 0.0)], 0).unwrap();
        assert_eq!(f.min_power, -1);
        assert_eq!(f.normalized(), vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn log_map_values() {
        let x = log_map(&[c(1.0, 0.0), c(std::f64::consts::E, 0.0)]).unwrap();
        assert!((x.0[0] - 0.0).abs() < 1e-15);
        assert!((x.0[1] - 1.0).abs() < 1e-15);
        assert!(log_map(&[c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn arg_map_half_open_range() {
        let t = arg_map(&[c(-1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert_eq!(t.0[0], -PI);
        assert!((t.0[1] - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn moment_map_dominant_term_limit() {
        let p = trinomial();
        let support: Vec<_> = p.support().cloned().collect();
        // off the zero locus, |z1| -> infinity with z2 fixed pushes nu to (1, 0)
        let nu = moment_map(&[c(1e9, 0.0), c(1.0, 0.0)], &support).unwrap();
        assert!((nu[0] - 1.0).abs() < 1e-6);
        assert!(nu[1].abs() < 1e-6);
    }

    #[test]
    fn moment_map_univariate_binomial() {
        // support {(1),(0)} at z1 = -2: (2*1 + 1*0) / (2 + 1) = 2/3
        let s = vec![ExponentVector::new(vec![1]), ExponentVector::new(vec![0])];
        let nu = moment_map(&[c(-2.0, 0.0)], &s).unwrap();
        assert!((nu[0] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn like_terms_cancel_to_empty() {
        let r = LaurentPolynomial::from_terms(
            1,
            &[(&[1], c(1.0, 0.0)), (&[1], c(-1.0, 0.0))],
        );
        assert_eq!(r.unwrap_err(), PolyError::EmptyPolynomial);
    }
}
