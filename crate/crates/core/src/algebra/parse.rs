//! Text form of polynomials.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | literal [name-power] | power
//! power  := atom ['^' integer]
//! atom   := name | '(' expr ')'
//! literal:= integer ['/' integer]
//! ```
//!
//! A literal immediately followed by a name (`1/2f1`, `2x3`) multiplies. Any
//! other juxtaposition is rejected. Names with underscores (`f_1`) resolve to
//! the underscore-free name when that is the one in scope.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::{default_names, Polynomial, DEFAULT_DEGREE_CAP};
use super::rational::{format_rational, Rational};
use crate::error::{Error, ParseError, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational, bool),
    Name(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    start: usize,
    end: usize,
}

fn perr(position: usize, message: impl Into<String>) -> Error {
    Error::Parse(ParseError {
        position,
        message: message.into(),
    })
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = text[i..].chars().next().expect("in bounds");
        let start = i;
        if ch.is_whitespace() {
            i += ch.len_utf8();
            continue;
        }
        let simple = match ch {
            '+' => Some(Tok::Plus),
            '-' | '\u{2212}' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            i += ch.len_utf8();
            out.push(Token { tok, start, end: i });
            continue;
        }
        if ch.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let num: BigInt = text[start..i].parse().map_err(|_| perr(start, "bad integer"))?;
            let mut value = Rational::from_integer(num);
            let mut is_fraction = false;
            let mut j = i;
            while j < bytes.len() && (bytes[j] as char).is_whitespace() {
                j += 1;
            }
            if j < bytes.len() && bytes[j] == b'/' {
                j += 1;
                while j < bytes.len() && (bytes[j] as char).is_whitespace() {
                    j += 1;
                }
                let dstart = j;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if dstart == j {
                    return Err(perr(dstart, "expected denominator after '/'"));
                }
                let den: BigInt = text[dstart..j].parse().map_err(|_| perr(dstart, "bad integer"))?;
                if den.is_zero() {
                    return Err(perr(dstart, "zero denominator"));
                }
                value /= Rational::from_integer(den);
                is_fraction = true;
                i = j;
            }
            out.push(Token {
                tok: Tok::Num(value, is_fraction),
                start,
                end: i,
            });
            continue;
        }
        if ch.is_ascii_alphabetic() || ch == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Name(text[start..i].to_string()),
                start,
                end: i,
            });
            continue;
        }
        if ch == '/' {
            return Err(perr(start, "'/' is only allowed inside a rational literal"));
        }
        return Err(perr(start, format!("unexpected character {ch:?}")));
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    names: &'a [String],
    text_len: usize,
}

impl Parser<'_> {
    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn here(&self) -> usize {
        self.peek().map(|t| t.start).unwrap_or(self.text_len)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = match self.peek().map(|t| &t.tok) {
            Some(Tok::Plus) => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek().map(|t| &t.tok) {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek().map(|t| &t.tok) {
            self.bump();
            let rhs = self.factor()?;
            acc = acc.try_mul(&rhs)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        match self.peek().cloned() {
            Some(Token { tok: Tok::Minus, .. }) => {
                self.bump();
                Ok(-&self.factor()?)
            }
            Some(Token {
                tok: Tok::Num(value, is_fraction),
                end,
                ..
            }) => {
                self.bump();
                let lit = Polynomial::constant(self.nvars(), value);
                match self.peek() {
                    Some(Token {
                        tok: Tok::Name(_),
                        start,
                        ..
                    }) if *start == end => {
                        let rhs = self.power()?;
                        Ok(lit.try_mul(&rhs)?)
                    }
                    Some(Token {
                        tok: Tok::Caret, start, ..
                    }) => {
                        if is_fraction {
                            return Err(perr(*start, "parenthesize a rational literal before '^'"));
                        }
                        self.bump();
                        let e = self.exponent()?;
                        lit.pow_capped(e, DEFAULT_DEGREE_CAP)
                    }
                    _ => Ok(lit),
                }
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek().map(|t| &t.tok) {
            self.bump();
            let e = self.exponent()?;
            return base.pow_capped(e, DEFAULT_DEGREE_CAP);
        }
        if let Some(Token {
            tok: Tok::Name(_) | Tok::Num(..) | Tok::LParen,
            start,
            ..
        }) = self.peek()
        {
            return Err(perr(*start, "juxtaposition is not multiplication; use '*'"));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u32> {
        let at = self.here();
        match self.bump() {
            Some(Token {
                tok: Tok::Num(v, false),
                ..
            }) => {
                let n = v.to_integer();
                if n.is_negative() {
                    return Err(perr(at, "negative exponent"));
                }
                u32::try_from(n).map_err(|_| perr(at, "exponent overflow"))
            }
            _ => Err(perr(at, "expected a non-negative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let at = self.here();
        match self.bump() {
            Some(Token {
                tok: Tok::Name(name), ..
            }) => {
                let idx =
                    resolve_name(self.names, &name).ok_or_else(|| perr(at, format!("unknown variable {name:?}")))?;
                Polynomial::var(self.nvars(), idx)
            }
            Some(Token { tok: Tok::LParen, .. }) => {
                let inner = self.expr()?;
                let close = self.here();
                match self.bump() {
                    Some(Token { tok: Tok::RParen, .. }) => Ok(inner),
                    _ => Err(perr(close, "expected ')'")),
                }
            }
            Some(_) => Err(perr(at, "expected a variable, literal or '('")),
            None => Err(perr(at, "unexpected end of input")),
        }
    }
}

fn resolve_name(names: &[String], name: &str) -> Option<usize> {
    names.iter().position(|n| n == name).or_else(|| {
        let squashed: String = name.chars().filter(|&c| c != '_').collect();
        names.iter().position(|n| *n == squashed)
    })
}

/// Parses a polynomial in the variables `x1..x<nvars>`.
pub fn parse_poly(text: &str, nvars: usize) -> Result<Polynomial> {
    parse_poly_with_names(text, &default_names(nvars))
}

/// Parses a polynomial whose variables are `names` (in order).
pub fn parse_poly_with_names(text: &str, names: &[String]) -> Result<Polynomial> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(perr(0, "empty expression"));
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        names,
        text_len: text.len(),
    };
    let p = parser.expr()?;
    if let Some(t) = parser.peek() {
        return Err(perr(t.start, "unexpected trailing input"));
    }
    Ok(p)
}

/// Canonical text: terms in descending graded-lex order, explicit `*`.
pub fn format_poly(p: &Polynomial) -> String {
    format_poly_with_names(p, &default_names(p.nvars()))
}

pub fn format_poly_with_names(p: &Polynomial, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let negative = c.is_negative();
        let magnitude = c.abs();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if m.degree() == 0 {
            out.push_str(&format_rational(&magnitude));
        } else if magnitude.is_one() {
            out.push_str(&m.format_with(names));
        } else {
            out.push_str(&format_rational(&magnitude));
            out.push('*');
            out.push_str(&m.format_with(names));
        }
    }
    out
}
