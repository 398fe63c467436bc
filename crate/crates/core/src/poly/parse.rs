//! Recursive-descent reader for polynomial text.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary ('*' unary)*
//! unary   := ('+' | '-') unary | power
//! power   := atom ('^' integer)?
//! atom    := integer ('/' integer)? | ident | '(' sum ')'
//! ident   := [A-Za-z_][A-Za-z0-9_]* ('[' '-'? digits ']')*
//! ```
//!
//! Implicit multiplication is rejected. A map is a `;`-separated list of
//! sums.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Poly, Rational, VarTable};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable `{name}` at byte {position}")]
    UnknownVariable { name: String, position: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            Self::Syntax { position, .. } | Self::UnknownVariable { position, .. } => *position,
        }
    }

    fn shifted(self, by: usize) -> Self {
        match self {
            Self::Syntax { position, message } => Self::Syntax {
                position: position + by,
                message,
            },
            Self::UnknownVariable { name, position } => Self::UnknownVariable {
                name,
                position: position + by,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn syntax(position: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        position,
        message: message.into(),
    }
}

fn digits(bytes: &[u8], mut i: usize) -> usize {
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    i
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((Tok::Plus, start)),
            b'-' => out.push((Tok::Minus, start)),
            b'*' => out.push((Tok::Star, start)),
            b'^' => out.push((Tok::Caret, start)),
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            b'0'..=b'9' => {
                let end = digits(bytes, i);
                let num: BigInt = text[i..end].parse().unwrap();
                i = end;
                let mut value = Rational::from_integer(num);
                if i < bytes.len() && bytes[i] == b'/' {
                    let dstart = i + 1;
                    let dend = digits(bytes, dstart);
                    if dend == dstart {
                        return Err(syntax(i, "expected integer denominator after '/'"));
                    }
                    let den: BigInt = text[dstart..dend].parse().unwrap();
                    if den.is_zero() {
                        return Err(syntax(dstart, "zero denominator"));
                    }
                    value /= Rational::from_integer(den);
                    i = dend;
                }
                out.push((Tok::Num(value), start));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                while i < bytes.len() && bytes[i] == b'[' {
                    let mut j = i + 1;
                    if j < bytes.len() && bytes[j] == b'-' {
                        j += 1;
                    }
                    let end = digits(bytes, j);
                    if end == j || end >= bytes.len() || bytes[end] != b']' {
                        return Err(syntax(i, "malformed index in variable name"));
                    }
                    i = end + 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            b'/' => return Err(syntax(start, "'/' is only allowed inside rational literals")),
            _ => {
                let ch = text[start..].chars().next().unwrap();
                return Err(syntax(start, alloc::format!("unexpected character '{ch}'")));
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    vars: &'a VarTable,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn sum(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.product()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let at = self.offset();
            let exp = match self.toks.get(self.pos) {
                Some((Tok::Num(n), _)) if n.is_integer() => {
                    u32::try_from(n.to_integer()).map_err(|_| syntax(at, "exponent out of range"))?
                }
                _ => return Err(syntax(at, "expected nonnegative integer exponent")),
            };
            self.pos += 1;
            if let Some(Tok::Caret) = self.peek() {
                return Err(syntax(self.offset(), "chained exponents need parentheses"));
            }
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        let at = self.offset();
        let Some((tok, _)) = self.toks.get(self.pos).cloned() else {
            return Err(syntax(at, "unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(Poly::constant(self.vars, n)),
            Tok::Ident(name) => match self.vars.index_of(&name) {
                Some(i) => Ok(Poly::var(self.vars, i)),
                None => Err(ParseError::UnknownVariable { name, position: at }),
            },
            Tok::LParen => {
                let inner = self.sum()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(syntax(self.offset(), "expected ')'")),
                }
            }
            _ => Err(syntax(at, "expected number, variable or '('")),
        }
    }
}

/// Parses one polynomial over `vars`.
pub fn parse_poly(text: &str, vars: &VarTable) -> Result<Poly, ParseError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(syntax(0, "empty input"));
    }
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
        vars,
    };
    let p = parser.sum()?;
    if parser.pos != parser.toks.len() {
        return Err(syntax(parser.offset(), "expected operator or end of input"));
    }
    Ok(p)
}

/// Parses a `;`-separated list of polynomials.
pub fn parse_map(text: &str, vars: &VarTable) -> Result<Vec<Poly>, ParseError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split(';') {
        out.push(parse_poly(part, vars).map_err(|e| e.shifted(offset))?);
        offset += part.len() + 1;
    }
    Ok(out)
}

/// Variable names in order of first appearance.
pub fn infer_variables(text: &str) -> Result<Vec<String>, ParseError> {
    let mut names: Vec<String> = Vec::new();
    for part in text.split(';') {
        for (tok, _) in tokenize(part)? {
            if let Tok::Ident(n) = tok {
                if !names.contains(&n) {
                    names.push(n);
                }
            }
        }
    }
    Ok(names)
}
