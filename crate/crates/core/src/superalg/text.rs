//! Canonical text rendering and a small parser for it.
//!
//! Rendering lists terms from the largest monomial down, e.g.
//! `3/2*x1^2*e1*e2 - x1 + 1`. The parser also accepts parentheses, integer
//! powers of sub-expressions and `/` by an integer literal.

use std::fmt;

use super::monomial::Monomial;
use super::poly::SuperPolynomial;
use super::table::Table;
use super::AlgebraError;
use crate::scalar::Coefficient;

pub fn monomial_text(table: &Table, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.evens().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(table.evens()[i].clone()),
            _ => parts.push(format!("{}^{}", table.evens()[i], e)),
        }
    }
    for i in m.odd_indices() {
        parts.push(table.odds()[i].clone());
    }
    parts.join("*")
}

impl<C: Coefficient> fmt::Display for SuperPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().rev().enumerate() {
            let (neg, mag) = c.split_sign();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", monomial_text(self.table(), m))?;
            } else {
                write!(f, "{}*{}", mag, monomial_text(self.table(), m))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(String),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Token)>, AlgebraError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Token::Int(chars[start..i].iter().collect())));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Token::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Token::Sym(c)));
            i += 1;
        } else {
            return Err(AlgebraError::Parse { pos: i, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser<'a, C> {
    table: &'a Table,
    tokens: Vec<(usize, Token)>,
    pos: usize,
    len: usize,
    _c: std::marker::PhantomData<C>,
}

impl<C: Coefficient> Parser<'_, C> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, AlgebraError> {
        Err(AlgebraError::Parse { pos: self.here(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<SuperPolynomial<C>, AlgebraError> {
        let mut acc = SuperPolynomial::zero(self.table);
        let mut first = true;
        loop {
            let negative = if self.eat('-') {
                true
            } else if self.eat('+') || first {
                false
            } else {
                break;
            };
            let t = self.term()?;
            acc = if negative { acc - t } else { acc + t };
            first = false;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<SuperPolynomial<C>, AlgebraError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if self.eat('/') {
                let d = self.integer()?;
                match C::one().div(&d) {
                    Some(inv) => acc = acc.scale(&inv),
                    None => return self.err("division by zero"),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<SuperPolynomial<C>, AlgebraError> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = match self.peek() {
                Some(Token::Int(s)) => s.parse::<u32>().ok(),
                _ => None,
            };
            match e {
                Some(e) => {
                    self.pos += 1;
                    Ok(base.pow(e))
                }
                None => self.err("expected a non-negative exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn integer(&mut self) -> Result<C, AlgebraError> {
        match self.peek().cloned() {
            Some(Token::Int(s)) => {
                self.pos += 1;
                C::parse_text(&s).map_or_else(|| self.err("bad integer"), Ok)
            }
            _ => self.err("expected an integer"),
        }
    }

    fn atom(&mut self) -> Result<SuperPolynomial<C>, AlgebraError> {
        match self.peek().cloned() {
            Some(Token::Int(_)) => {
                let c = self.integer()?;
                Ok(SuperPolynomial::constant(self.table, c))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                SuperPolynomial::var(self.table, &name)
            }
            Some(Token::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            Some(Token::Sym('-')) => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            _ => self.err("expected a number, variable or '('"),
        }
    }
}

/// Parses polynomial text over `table`.
pub fn parse_polynomial<C: Coefficient>(table: &Table, s: &str) -> Result<SuperPolynomial<C>, AlgebraError> {
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err(AlgebraError::Parse { pos: 0, msg: "empty expression".into() });
    }
    let mut p = Parser { table, tokens, pos: 0, len: s.chars().count(), _c: std::marker::PhantomData };
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

impl<C: Coefficient> SuperPolynomial<C> {
    pub fn parse(table: &Table, s: &str) -> Result<Self, AlgebraError> {
        parse_polynomial(table, s)
    }
}

