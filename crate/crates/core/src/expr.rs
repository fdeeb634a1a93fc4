//! Tiny expression language shared by the presentation and local-system file formats.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := '-'? power ('*' power)*
//! power  := atom ('^' integer)?
//! atom   := integer ('/' integer)? | identifier | '(' expr ')'
//! ```

use crate::error::ParseError;
use crate::qlinalg::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rational),
    Sym(String),
    Sum(Vec<Expr>),
    Neg(Box<Expr>),
    Product(Vec<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
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
            out.push(Token::Num(chars[start..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(ParseError::syntax(0, format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat('+') {
                terms.push(self.term()?);
            } else if self.eat('-') {
                terms.push(Expr::Neg(Box::new(self.term()?)));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Sum(terms) })
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let negate = self.eat('-');
        let mut factors = vec![self.power()?];
        while self.eat('*') {
            factors.push(self.power()?);
        }
        let e = if factors.len() == 1 { factors.pop().unwrap() } else { Expr::Product(factors) };
        Ok(if negate { Expr::Neg(Box::new(e)) } else { e })
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.next() {
                Some(Token::Num(n)) => {
                    let k = n.parse().map_err(|_| ParseError::syntax(0, "bad exponent"))?;
                    Ok(Expr::Pow(Box::new(base), k))
                }
                _ => Err(ParseError::syntax(0, "expected exponent after '^'")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.next() {
            Some(Token::Num(n)) => {
                if self.eat('/') {
                    match self.next() {
                        Some(Token::Num(d)) => Ok(Expr::Num(rational::parse(&format!("{n}/{d}"))?)),
                        _ => Err(ParseError::syntax(0, "expected denominator")),
                    }
                } else {
                    Ok(Expr::Num(rational::parse(&n)?))
                }
            }
            Some(Token::Ident(s)) => Ok(Expr::Sym(s)),
            Some(Token::Op('(')) => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(ParseError::syntax(0, "expected ')'"));
                }
                Ok(e)
            }
            t => Err(ParseError::syntax(0, format!("unexpected token {t:?}"))),
        }
    }
}

pub fn parse(s: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { tokens: tokenize(s)?, pos: 0 };
    if p.tokens.is_empty() {
        return Err(ParseError::syntax(0, "empty expression"));
    }
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(ParseError::syntax(0, format!("trailing input in {s:?}")));
    }
    Ok(e)
}

/// How to interpret an [`Expr`] in some ring.
pub trait Interpret {
    type Value: Clone;
    fn constant(&self, q: &Rational) -> Self::Value;
    fn symbol(&self, name: &str) -> Result<Self::Value, ParseError>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn neg(&self, a: &Self::Value) -> Self::Value;
}

impl Expr {
    pub fn eval<I: Interpret>(&self, ring: &I) -> Result<I::Value, ParseError> {
        Ok(match self {
            Expr::Num(q) => ring.constant(q),
            Expr::Sym(s) => ring.symbol(s)?,
            Expr::Sum(ts) => {
                let mut acc = ring.constant(&rational::zero());
                for t in ts {
                    acc = ring.add(&acc, &t.eval(ring)?);
                }
                acc
            }
            Expr::Neg(e) => ring.neg(&e.eval(ring)?),
            Expr::Product(fs) => {
                let mut acc = ring.constant(&rational::one());
                for f in fs {
                    acc = ring.mul(&acc, &f.eval(ring)?);
                }
                acc
            }
            Expr::Pow(b, k) => {
                let base = b.eval(ring)?;
                let mut acc = ring.constant(&rational::one());
                for _ in 0..*k {
                    acc = ring.mul(&acc, &base);
                }
                acc
            }
        })
    }
}
