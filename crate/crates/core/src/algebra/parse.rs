//! Textual polynomial syntax.
//!
//! Terms look like `-3/2*a^2*t^-1*x`; whitespace is insignificant and the
//! printer of [`ParamPoly`] round-trips through this parser exactly.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::poly::ParamPoly;
use crate::algebra::rational::Rational;
use crate::algebra::vars::Ring;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    End,
}

struct Lexer<'a> {
    input: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(input: &'a str, line: usize) -> Self {
        Lexer {
            input: input.as_bytes(),
            pos: 0,
            line,
            col: 1,
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.col,
            message: message.into(),
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.input.get(self.pos).copied();
        if let Some(c) = c {
            self.pos += 1;
            if c == b'\n' {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
        }
        c
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn next_token(&mut self) -> Result<(Token, usize, usize)> {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.bump();
        }
        let (line, col) = (self.line, self.col);
        let c = match self.peek() {
            None => return Ok((Token::End, line, col)),
            Some(c) => c,
        };
        let token = match c {
            b'+' => {
                self.bump();
                Token::Plus
            }
            b'-' => {
                self.bump();
                Token::Minus
            }
            b'*' => {
                self.bump();
                Token::Star
            }
            b'^' => {
                self.bump();
                Token::Caret
            }
            b'/' => {
                self.bump();
                Token::Slash
            }
            b'0'..=b'9' => {
                let mut digits = String::new();
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    digits.push(self.bump().unwrap() as char);
                }
                Token::Number(digits.parse().expect("digits"))
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut ident = String::new();
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    ident.push(self.bump().unwrap() as char);
                }
                Token::Ident(ident)
            }
            other => return Err(self.error(format!("unexpected character `{}`", other as char))),
        };
        Ok((token, line, col))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    current: (Token, usize, usize),
    ring: &'a Ring,
}

impl<'a> Parser<'a> {
    fn new(ring: &'a Ring, input: &'a str, line: usize) -> Result<Self> {
        let mut lexer = Lexer::new(input, line);
        let current = lexer.next_token()?;
        Ok(Parser {
            lexer,
            current,
            ring,
        })
    }

    fn error_at(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.current.1,
            column: self.current.2,
            message: message.into(),
        }
    }

    fn advance(&mut self) -> Result<Token> {
        let next = self.lexer.next_token()?;
        Ok(std::mem::replace(&mut self.current, next).0)
    }

    fn parse_poly(&mut self) -> Result<ParamPoly> {
        let mut out = ParamPoly::zero(self.ring);
        let mut sign = Rational::one();
        match self.current.0 {
            Token::Minus => {
                self.advance()?;
                sign = -sign;
            }
            Token::Plus => {
                self.advance()?;
            }
            _ => {}
        }
        loop {
            let term = self.parse_term()?;
            out = out.try_add(&term.scale(&sign))?;
            match self.current.0 {
                Token::Plus => {
                    self.advance()?;
                    sign = Rational::one();
                }
                Token::Minus => {
                    self.advance()?;
                    sign = -Rational::one();
                }
                Token::End => return Ok(out),
                _ => return Err(self.error_at("expected `+`, `-` or end of input")),
            }
        }
    }

    fn parse_term(&mut self) -> Result<ParamPoly> {
        let mut acc = self.parse_factor()?;
        while self.current.0 == Token::Star {
            self.advance()?;
            let f = self.parse_factor()?;
            acc = acc.try_mul(&f)?;
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<ParamPoly> {
        match self.current.0.clone() {
            Token::Number(n) => {
                self.advance()?;
                let mut value = Rational::from_integer(n);
                if self.current.0 == Token::Slash {
                    self.advance()?;
                    match self.advance()? {
                        Token::Number(d) => {
                            if d.is_zero() {
                                return Err(self.error_at("zero denominator"));
                            }
                            value /= Rational::from_integer(d);
                        }
                        _ => return Err(self.error_at("expected denominator digits after `/`")),
                    }
                }
                Ok(ParamPoly::constant(self.ring, value))
            }
            Token::Ident(name) => {
                let (line, col) = (self.current.1, self.current.2);
                self.advance()?;
                let id = self.ring.id_of(&name).ok_or(Error::Parse {
                    line,
                    column: col,
                    message: format!("unknown variable `{name}`"),
                })?;
                let mut exp: i64 = 1;
                if self.current.0 == Token::Caret {
                    self.advance()?;
                    let mut neg = false;
                    if self.current.0 == Token::Minus {
                        self.advance()?;
                        neg = true;
                    }
                    match self.advance()? {
                        Token::Number(n) => {
                            exp = i64::try_from(n)
                                .map_err(|_| self.error_at("exponent out of range"))?;
                            if neg {
                                exp = -exp;
                            }
                        }
                        _ => return Err(self.error_at("expected exponent digits after `^`")),
                    }
                }
                let exp = i32::try_from(exp).map_err(|_| self.error_at("exponent out of range"))?;
                ParamPoly::var_pow(self.ring, id, exp).map_err(|e| Error::Parse {
                    line,
                    column: col,
                    message: e.to_string(),
                })
            }
            Token::End => Err(self.error_at("unexpected end of input")),
            _ => Err(self.error_at("expected a number or variable")),
        }
    }
}

/// Parse a polynomial over a declared ring.
pub fn parse_poly(ring: &Ring, input: &str) -> Result<ParamPoly> {
    parse_poly_at(ring, input, 1)
}

/// Same as [`parse_poly`] but reporting errors relative to `line`.
pub fn parse_poly_at(ring: &Ring, input: &str, line: usize) -> Result<ParamPoly> {
    Parser::new(ring, input, line)?.parse_poly()
}

/// Parse a rational number `p` or `p/q`.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let err = || Error::Parse {
        line: 1,
        column: 1,
        message: format!("invalid rational `{input}`"),
    };
    let s = input.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| err())?;
    let d: BigInt = den.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

/// Identifiers mentioned in a polynomial expression, in first-appearance order.
pub fn collect_identifiers(input: &str) -> Result<Vec<String>> {
    let mut lexer = Lexer::new(input, 1);
    let mut seen = Vec::new();
    loop {
        match lexer.next_token()?.0 {
            Token::End => return Ok(seen),
            Token::Ident(name) => {
                if !seen.contains(&name) {
                    seen.push(name);
                }
            }
            _ => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::algebra::vars::VarTable;

    fn ring() -> Ring {
        VarTable::new(&[("a", false), ("t", true), ("x", true)]).unwrap()
    }

    #[test]
    fn parses_spec_example() {
        let r = ring();
        let p = parse_poly(&r, "-3/2*a^2*t^-1*x").unwrap();
        assert_eq!(p.num_terms(), 1);
        let (expo, coeff) = p.as_monomial().unwrap();
        assert_eq!(expo, &vec![2, -1, 1]);
        assert_eq!(coeff, &rat(-3, 2));
    }

    #[test]
    fn whitespace_insensitive() {
        let r = ring();
        let a = parse_poly(&r, "x + 2*a - t^-2").unwrap();
        let b = parse_poly(&r, "x+2*a-t^-2").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn round_trip_print_parse() {
        let r = ring();
        for src in ["0", "1", "-1", "a^2 - 2*a + 1", "-3/2*a^2*t^-1*x + x^2 - 5"] {
            let p = parse_poly(&r, src).unwrap();
            let q = parse_poly(&r, &p.to_string()).unwrap();
            assert_eq!(p, q, "round trip failed for `{src}`");
        }
    }

    #[test]
    fn rejects_unknown_variable_with_position() {
        let r = ring();
        match parse_poly(&r, "a + zz") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_laurent_violation() {
        let r = ring();
        assert!(parse_poly(&r, "a^-1").is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/2").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), rat(7, 1));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn identifier_collection() {
        let ids = collect_identifiers("b25*x - 3*theta^2 + b25").unwrap();
        assert_eq!(ids, vec!["b25".to_string(), "x".into(), "theta".into()]);
    }
}
