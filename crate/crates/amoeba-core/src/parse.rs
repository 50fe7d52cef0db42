//! Text grammar for Laurent polynomials in variables z1..z9 and the
//! canonical printer that round-trips through it.
//!
//! A polynomial is a signed sum of terms; a term is an optional coefficient
//! (decimal, or `(re,im)` for complex) followed by factors `z<k>` with
//! optional integer exponents, negative exponents parenthesized:
//! `5*z1 + (0,-2)*z1^2*z2^(-1) - 3`.

use crate::poly::{C64, ExponentVector, LaurentPolynomial};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("all terms cancel; the zero polynomial has no amoeba data")]
    EmptyPolynomial,
}

/// Source text together with its parsed polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialExpression {
    pub source: String,
    pub poly: LaurentPolynomial,
}

pub fn parse(text: &str) -> Result<PolynomialExpression, ParseError> {
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let poly = parser.polynomial()?;
    Ok(PolynomialExpression {
        source: text.to_string(),
        poly,
    })
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

struct RawTerm {
    coeff: C64,
    exponents: [i64; 9],
    max_var: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn polynomial(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let mut terms: Vec<RawTerm> = Vec::new();
        let mut max_var = 1usize;
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1.0
            }
            Some(b'+') => {
                self.pos += 1;
                1.0
            }
            Some(_) => 1.0,
            None => return self.err("empty input"),
        };
        loop {
            let term = self.term()?;
            max_var = max_var.max(term.max_var);
            terms.push(RawTerm {
                coeff: term.coeff * sign,
                ..term
            });
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1.0;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1.0;
                }
                Some(c) => return self.err(format!("expected '+' or '-', found '{}'", c as char)),
            }
        }
        let dim = max_var;
        let built: Vec<(ExponentVector, C64)> = terms
            .into_iter()
            .map(|t| (ExponentVector::new(t.exponents[..dim].to_vec()), t.coeff))
            .collect();
        LaurentPolynomial::new(dim, built).map_err(|_| ParseError::EmptyPolynomial)
    }

    fn term(&mut self) -> Result<RawTerm, ParseError> {
        let mut coeff: Option<C64> = None;
        match self.peek() {
            Some(b'(') => {
                coeff = Some(self.complex_coefficient()?);
                if self.eat(b'*') && self.peek() != Some(b'z') {
                    return self.err("expected a variable after '*'");
                }
            }
            Some(c) if c.is_ascii_digit() => {
                coeff = Some(C64::new(self.number()?, 0.0));
                if self.eat(b'*') && self.peek() != Some(b'z') {
                    return self.err("expected a variable after '*'");
                }
            }
            _ => {}
        }
        let mut exponents = [0i64; 9];
        let mut max_var = 1usize;
        let mut any_factor = false;
        while let Some(b'z') = self.peek() {
            let (var, exp) = self.factor()?;
            exponents[var - 1] += exp;
            max_var = max_var.max(var);
            any_factor = true;
            if self.eat(b'*') && self.peek() != Some(b'z') {
                return self.err("expected a variable after '*'");
            }
        }
        if coeff.is_none() && !any_factor {
            return self.err("expected a coefficient or a variable");
        }
        Ok(RawTerm {
            coeff: coeff.unwrap_or(C64::new(1.0, 0.0)),
            exponents,
            max_var,
        })
    }

    fn factor(&mut self) -> Result<(usize, i64), ParseError> {
        assert_eq!(self.bump(), Some(b'z'));
        let var = match self.bytes.get(self.pos) {
            Some(&d) if (b'1'..=b'9').contains(&d) => {
                self.pos += 1;
                (d - b'0') as usize
            }
            _ => return self.err("variables are z1 through z9"),
        };
        if !self.eat(b'^') {
            return Ok((var, 1));
        }
        if self.eat(b'(') {
            let neg = self.eat(b'-');
            let n = self.integer()?;
            if !self.eat(b')') {
                return self.err("expected ')' after exponent");
            }
            Ok((var, if neg { -n } else { n }))
        } else {
            let n = self.integer()?;
            Ok((var, n))
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| self.err("integer out of range"))
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b'.' {
            self.pos += 1;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        if self.pos < self.bytes.len() && (self.bytes[self.pos] | 0x20) == b'e' {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < self.bytes.len() && (self.bytes[self.pos] == b'+' || self.bytes[self.pos] == b'-') {
                self.pos += 1;
            }
            let digits_start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == digits_start {
                self.pos = mark;
            }
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| self.err("malformed number"))
    }

    fn signed_number(&mut self) -> Result<f64, ParseError> {
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let v = self.number()?;
        Ok(if neg { -v } else { v })
    }

    fn complex_coefficient(&mut self) -> Result<C64, ParseError> {
        assert_eq!(self.bump(), Some(b'('));
        let re = self.signed_number()?;
        if !self.eat(b',') {
            return self.err("expected ',' in complex coefficient");
        }
        let im = self.signed_number()?;
        if !self.eat(b')') {
            return self.err("expected ')' after complex coefficient");
        }
        Ok(C64::new(re, im))
    }
}

/// Canonical form: terms in the stored lexicographic order, shortest
/// round-trip float formatting, explicit '*' between all parts.
impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (e, c)) in self.terms().iter().enumerate() {
            let mut factors = String::new();
            for (j, &exp) in e.as_slice().iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                if !factors.is_empty() {
                    factors.push('*');
                }
                factors.push_str(&format!("z{}", j + 1));
                if exp != 1 {
                    if exp < 0 {
                        factors.push_str(&format!("^({exp})"));
                    } else {
                        factors.push_str(&format!("^{exp}"));
                    }
                }
            }
            let (lead, body) = term_text(*c, &factors);
            if i == 0 {
                if lead < 0.0 {
                    write!(f, "-")?;
                }
            } else if lead < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{body}")?;
        }
        Ok(())
    }
}

/// Splits a term into a printable sign and body. Complex coefficients keep
/// their signs inside the parentheses.
fn term_text(c: C64, factors: &str) -> (f64, String) {
    if c.im == 0.0 {
        let mag = c.re.abs();
        let body = if factors.is_empty() {
            format!("{mag}")
        } else if mag == 1.0 {
            factors.to_string()
        } else {
            format!("{mag}*{factors}")
        };
        (c.re.signum(), body)
    } else {
        let body = if factors.is_empty() {
            format!("({},{})", c.re, c.im)
        } else {
            format!("({},{})*{factors}", c.re, c.im)
        };
        (1.0, body)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn roundtrip(text: &str) {
        let first = parse(text).unwrap().poly;
        let printed = first.to_string();
        let second = parse(&printed).unwrap().poly;
        assert_eq!(first, second, "printed form: {printed}");
    }

    #[test]
    fn parses_p1_with_ten_terms() {
        let e = parse(fixtures::p1_expression()).unwrap();
        assert_eq!(e.poly, fixtures::p1());
        assert_eq!(e.poly.term_count(), 10);
    }

    #[test]
    fn parses_p2_to_fixture() {
        let e = parse(fixtures::p2_expression()).unwrap();
        assert_eq!(e.poly, fixtures::p2());
    }

    #[test]
    fn cancelling_terms_are_empty() {
        assert_eq!(parse("z1 - z1").unwrap_err(), ParseError::EmptyPolynomial);
        assert_eq!(parse("0*z1").unwrap_err(), ParseError::EmptyPolynomial);
    }

    #[test]
    fn negative_exponents_need_parentheses() {
        let e = parse("z1^(-2) + 1").unwrap();
        assert_eq!(e.poly.terms()[0].0.as_slice(), &[-2]);
        assert!(parse("z1^-2").is_err());
    }

    #[test]
    fn complex_coefficients() {
        let e = parse("(1,-2)*z1*z2 + (0,1)").unwrap();
        assert_eq!(e.poly.terms()[1].1, C64::new(1.0, -2.0));
        assert_eq!(e.poly.terms()[0].1, C64::new(0.0, 1.0));
        roundtrip("(1,-2)*z1*z2 + (0,1)");
    }

    #[test]
    fn implicit_multiplication_and_signs() {
        let e = parse("-5z1z2^2 + 3").unwrap();
        assert_eq!(e.poly.terms()[1].1, C64::new(-5.0, 0.0));
        assert_eq!(e.poly.terms()[1].0.as_slice(), &[1, 2]);
        roundtrip("-5z1z2^2 + 3");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse("5*z1 + @") {
            Err(ParseError::Syntax { position, .. }) => assert_eq!(position, 7),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(parse("z10").is_err());
        assert!(parse("5*").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn like_terms_combine() {
        let e = parse("z1 + z1 + z2").unwrap();
        assert_eq!(e.poly.terms().len(), 2);
        assert_eq!(e.poly.terms()[1].1, C64::new(2.0, 0.0));
    }

    #[test]
    fn fixture_corpus_roundtrips() {
        roundtrip(fixtures::p1_expression());
        roundtrip(fixtures::p1_sparse_expression());
        roundtrip(fixtures::p2_expression());
        roundtrip("z1^5 + z2^5 + 1");
        roundtrip("0.25*z1^(-3)*z2 - 17.5 + (2.5,-0.125)*z2^2");
    }
}
