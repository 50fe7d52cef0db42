//! Shared corpus of named polynomials used by the benchmark harness and the
//! test suites.

use crate::poly::{C64, LaurentPolynomial};

fn r(v: f64) -> C64 {
    C64::new(v, 0.0)
}

/// 10-term octagon polynomial with two interior monomials.
pub fn p1() -> LaurentPolynomial {
    LaurentPolynomial::from_terms(
        2,
        &[
            (&[1, 0], r(5.0)),
            (&[2, 0], r(15.0)),
            (&[3, 1], r(8.0)),
            (&[0, 2], r(10.0)),
            (&[3, 2], r(10.0)),
            (&[0, 3], r(8.0)),
            (&[1, 4], r(15.0)),
            (&[2, 4], r(5.0)),
            (&[1, 3], r(50.0)),
            (&[2, 1], r(50.0)),
        ],
    )
    .expect("fixture is well formed")
}

pub fn p1_expression() -> &'static str {
    "5*z1 + 15*z1^2 + 8*z1^3*z2 + 10*z2^2 + 10*z1^3*z2^2 + 8*z2^3 + 15*z1*z2^4 + 5*z1^2*z2^4 + 50*z1*z2^3 + 50*z1^2*z2"
}

/// `p1` with the two interior monomials dropped: maximally sparse on the
/// same octagon.
pub fn p1_sparse() -> LaurentPolynomial {
    LaurentPolynomial::from_terms(
        2,
        &[
            (&[1, 0], r(5.0)),
            (&[2, 0], r(15.0)),
            (&[3, 1], r(8.0)),
            (&[0, 2], r(10.0)),
            (&[3, 2], r(10.0)),
            (&[0, 3], r(8.0)),
            (&[1, 4], r(15.0)),
            (&[2, 4], r(5.0)),
        ],
    )
    .expect("fixture is well formed")
}

pub fn p1_sparse_expression() -> &'static str {
    "5*z1 + 15*z1^2 + 8*z1^3*z2 + 10*z2^2 + 10*z1^3*z2^2 + 8*z2^3 + 15*z1*z2^4 + 5*z1^2*z2^4"
}

/// 14-term polynomial supported on every lattice point of the octagon.
pub fn p2() -> LaurentPolynomial {
    LaurentPolynomial::from_terms(
        2,
        &[
            (&[1, 0], r(5.0)),
            (&[2, 0], r(15.0)),
            (&[1, 1], r(240.0)),
            (&[2, 1], r(400.0)),
            (&[3, 1], r(8.0)),
            (&[0, 2], r(10.0)),
            (&[1, 2], r(900.0)),
            (&[2, 2], r(900.0)),
            (&[3, 2], r(10.0)),
            (&[0, 3], r(8.0)),
            (&[1, 3], r(400.0)),
            (&[2, 3], r(240.0)),
            (&[1, 4], r(15.0)),
            (&[2, 4], r(5.0)),
        ],
    )
    .expect("fixture is well formed")
}

pub fn p2_expression() -> &'static str {
    "5*z1 + 15*z1^2 + 240*z1*z2 + 400*z1^2*z2 + 8*z1^3*z2 + 10*z2^2 + 900*z1*z2^2 + 900*z1^2*z2^2 + 10*z1^3*z2^2 + 8*z2^3 + 400*z1*z2^3 + 240*z1^2*z2^3 + 15*z1*z2^4 + 5*z1^2*z2^4"
}

/// z1^n + z2^n + 1.
pub fn trinomial(n: u32) -> LaurentPolynomial {
    let n = n as i64;
    LaurentPolynomial::from_terms(
        2,
        &[(&[n, 0], r(1.0)), (&[0, n], r(1.0)), (&[0, 0], r(1.0))],
    )
    .expect("fixture is well formed")
}
