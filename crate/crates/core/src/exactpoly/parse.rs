//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ('^' uint)?
//! atom     := rational | var | '(' expr ')' | '-' atom
//! rational := uint ('/' uint)?
//! var      := ('x'|'p') uint        (1-based)
//! ```
//!
//! Whitespace is insignificant and implicit multiplication is rejected.

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use super::{Ambient, Polynomial, PolyError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character '{0}'")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("zero denominator")]
    ZeroDenominator,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub offset: usize,
}

/// Parse `text` into a canonical polynomial over `ambient`.
pub fn parse_expression(text: &str, ambient: Ambient) -> Result<Polynomial, ParseError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        ambient,
    };
    let poly = parser.expr()?;
    parser.skip_ws();
    if let Some(c) = parser.peek() {
        return Err(parser.error(ParseErrorKind::UnexpectedChar(c as char)));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ambient: Ambient,
}

impl Parser<'_> {
    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            kind,
            offset: self.pos,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek_token(&mut self) -> Option<u8> {
        self.skip_ws();
        self.peek()
    }

    // Products of same-ambient polynomials can only fail on exponent overflow.
    fn lift(&self, at: usize, _e: PolyError) -> ParseError {
        ParseError {
            kind: ParseErrorKind::ExponentOverflow,
            offset: at,
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek_token() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = &acc + &rhs;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = &acc - &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while self.peek_token() == Some(b'*') {
            self.pos += 1;
            let at = self.pos;
            let rhs = self.factor()?;
            acc = acc.checked_mul(&rhs).map_err(|e| self.lift(at, e))?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if self.peek_token() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let digits = self.uint()?;
            let k: u32 = digits
                .try_into()
                .map_err(|_| ParseError {
                    kind: ParseErrorKind::ExponentOverflow,
                    offset: at,
                })?;
            return base.pow(k).map_err(|e| self.lift(at, e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek_token() {
            None => Err(self.error(ParseErrorKind::UnexpectedEnd)),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek_token() {
                    Some(b')') => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    Some(c) => Err(self.error(ParseErrorKind::UnexpectedChar(c as char))),
                    None => Err(self.error(ParseErrorKind::UnexpectedEnd)),
                }
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.atom()?)
            }
            Some(c @ (b'x' | b'p')) => {
                let start = self.pos;
                self.pos += 1;
                if !self.peek().is_some_and(|d| d.is_ascii_digit()) {
                    return Err(ParseError {
                        kind: ParseErrorKind::UnknownVariable((c as char).to_string()),
                        offset: start,
                    });
                }
                let idx = self.uint()?;
                let name = format!("{}{}", c as char, idx);
                let unknown = || ParseError {
                    kind: ParseErrorKind::UnknownVariable(name.clone()),
                    offset: start,
                };
                let i: usize = idx.try_into().map_err(|_| unknown())?;
                if i == 0 || i > self.ambient.n() {
                    return Err(unknown());
                }
                let slot = if c == b'x' {
                    self.ambient.x(i - 1)
                } else {
                    if !self.ambient.has_fiber() {
                        return Err(unknown());
                    }
                    self.ambient.p(i - 1)
                };
                Ok(Polynomial::variable(self.ambient, slot).map_err(|_| unknown())?)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint()?;
                let mut value = Rational::from_integer(num.into());
                if self.peek_token() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let at = self.pos;
                    let den = self.uint()?;
                    if den.is_zero() {
                        return Err(ParseError {
                            kind: ParseErrorKind::ZeroDenominator,
                            offset: at,
                        });
                    }
                    value /= Rational::from_integer(den.into());
                }
                Ok(Polynomial::constant(self.ambient, value))
            }
            Some(c) => Err(self.error(ParseErrorKind::UnexpectedChar(c as char))),
        }
    }

    fn uint(&mut self) -> Result<BigUint, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|d| d.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(match self.peek() {
                Some(c) => self.error(ParseErrorKind::UnexpectedChar(c as char)),
                None => self.error(ParseErrorKind::UnexpectedEnd),
            });
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(digits.parse().unwrap())
    }
}
