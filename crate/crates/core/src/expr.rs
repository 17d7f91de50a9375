//! A small expression parser for serialized scalars and polynomials.
//!
//! Grammar: sums/differences of terms, terms are products/quotients of
//! factors, factors are integers, identifiers (the field generator or a
//! declared parameter), parenthesized expressions, with optional `^ n`.

use crate::poly::{PolyElement, PolyError, PolyRing};
use crate::scalar::FieldElement;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    UnexpectedChar(char, usize),
    UnexpectedEnd,
    UnknownIdent(String),
    TrailingInput(usize),
    BadExponent,
    Poly(PolyError),
    NotAScalar(String),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::UnexpectedChar(c, pos) => {
                write!(f, "unexpected character '{}' at byte {}", c, pos)
            }
            ParseError::UnexpectedEnd => write!(f, "unexpected end of expression"),
            ParseError::UnknownIdent(s) => write!(f, "unknown identifier '{}'", s),
            ParseError::TrailingInput(pos) => write!(f, "trailing input at byte {}", pos),
            ParseError::BadExponent => write!(f, "exponent must be a nonnegative integer"),
            ParseError::Poly(e) => write!(f, "{}", e),
            ParseError::NotAScalar(s) => write!(f, "expression '{}' is not a scalar", s),
        }
    }
}

impl std::error::Error for ParseError {}

impl From<PolyError> for ParseError {
    fn from(e: PolyError) -> Self {
        ParseError::Poly(e)
    }
}

struct Parser<'a> {
    ring: &'a PolyRing,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        self.skip_ws();
        let c = self.chars.get(self.pos).copied();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expr(&mut self) -> Result<PolyElement, ParseError> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.bump();
                self.term()?.neg()
            }
            Some('+') => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some('-') => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<PolyElement, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                    let t = self.factor()?;
                    acc = acc.mul(&t);
                }
                Some('/') => {
                    self.bump();
                    let t = self.factor()?;
                    acc = acc.div(&t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<PolyElement, ParseError> {
        let base = match self.peek() {
            Some('-') => {
                self.bump();
                return Ok(self.factor()?.neg());
            }
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                match self.bump() {
                    Some(')') => inner,
                    Some(c) => return Err(ParseError::UnexpectedChar(c, self.pos - 1)),
                    None => return Err(ParseError::UnexpectedEnd),
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                self.ring.from_int(n)
            }
            Some(c) if is_ident_start(c) => {
                let name = self.ident();
                if name == self.ring.field().symbol() {
                    self.ring.constant(self.ring.field().zeta())
                } else if self.ring.param_index(&name).is_some() {
                    self.ring.param(&name)?
                } else {
                    return Err(ParseError::UnknownIdent(name));
                }
            }
            Some(c) => return Err(ParseError::UnexpectedChar(c, self.pos)),
            None => return Err(ParseError::UnexpectedEnd),
        };
        if self.peek() == Some('^') {
            self.bump();
            let e = self.integer()?;
            if e < 0 {
                return Err(ParseError::BadExponent);
            }
            Ok(base.pow(e as u32))
        } else {
            Ok(base)
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.chars.get(self.pos) {
                Some(&c) => Err(ParseError::UnexpectedChar(c, self.pos)),
                None => Err(ParseError::UnexpectedEnd),
            };
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| ParseError::BadExponent)
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && is_ident_char(self.chars[self.pos]) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Parses an expression in the given ring.
pub fn parse_poly(ring: &PolyRing, input: &str) -> Result<PolyElement, ParseError> {
    let mut p = Parser {
        ring,
        chars: input.chars().collect(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(ParseError::TrailingInput(p.pos));
    }
    Ok(v)
}

/// Parses a scalar (no parameters permitted in the result).
pub fn parse_scalar(ring: &PolyRing, input: &str) -> Result<FieldElement, ParseError> {
    let v = parse_poly(ring, input)?;
    v.as_constant()
        .ok_or_else(|| ParseError::NotAScalar(input.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Field};

    #[test]
    fn parses_scalars_and_polys() {
        let ring = PolyRing::new(&Field::cyclotomic(3), &["gamma"]);
        let k = ring.field().clone();
        let s = parse_scalar(&ring, "1/2 + 3/2*z^2").unwrap();
        let expected = k
            .from_rat(rat(1, 2))
            .add(&k.zeta_pow(2).mul_rat(&rat(3, 2)));
        assert_eq!(s, expected);

        let p = parse_poly(&ring, "gamma*z/(1+z)").unwrap();
        let z = ring.constant(k.zeta());
        let g = ring.param("gamma").unwrap();
        assert_eq!(p, g.mul(&z).div(&ring.one().add(&z)).unwrap());
    }

    #[test]
    fn round_trips_display() {
        let ring = PolyRing::new(&Field::cyclotomic(8), &["beta", "gamma"]);
        let p = parse_poly(&ring, "3/2*beta^2*z^3 - 3/2*beta^2*z - 2*beta^2 + gamma").unwrap();
        let q = parse_poly(&ring, &p.to_string()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn rejects_unknown_identifiers() {
        let ring = PolyRing::new(&Field::rational(), &[]);
        assert!(matches!(
            parse_poly(&ring, "q + 1"),
            Err(ParseError::UnknownIdent(_))
        ));
    }
}
