//! Tokenizer and recursive-descent parser for the polynomial text grammar.
//!
//! Terms are joined by `+`/`-`, products use `*`, powers use `^` with a
//! nonnegative integer exponent, and parentheses group. Whitespace is
//! ignored. The parser only builds a syntax tree; callers fold it into
//! whatever ring they work in.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("unexpected character {found:?} at offset {offset}")]
    UnexpectedChar { found: char, offset: usize },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token at offset {offset}")]
    UnexpectedToken { offset: usize },
    #[error("integer literal too large at offset {offset}")]
    IntegerOverflow { offset: usize },
    #[error("empty expression")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(u64),
    Sym(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push((Tok::Plus, off));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, off));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, off));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, off));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, off));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, off));
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let mut v: u64 = 0;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    let digit = chars[i].1 as u64 - '0' as u64;
                    v = v
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(digit))
                        .ok_or(SyntaxError::IntegerOverflow { offset: off })?;
                    i += 1;
                }
                out.push((Tok::Int(v), off));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                    s.push(chars[i].1);
                    i += 1;
                }
                out.push((Tok::Ident(s), off));
            }
            other => {
                return Err(SyntaxError::UnexpectedChar {
                    found: other,
                    offset: off,
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, o)| *o).unwrap_or(0)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, SyntaxError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let off = self.offset();
            match self.next() {
                Some(Tok::Int(e)) => {
                    let e = u32::try_from(e).map_err(|_| SyntaxError::IntegerOverflow { offset: off })?;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                Some(_) => Err(SyntaxError::UnexpectedToken { offset: off }),
                None => Err(SyntaxError::UnexpectedEnd),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        let off = self.offset();
        match self.next() {
            Some(Tok::Int(v)) => Ok(Expr::Int(v)),
            Some(Tok::Ident(s)) => Ok(Expr::Sym(s)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let off = self.offset();
                match self.next() {
                    Some(Tok::RParen) => Ok(inner),
                    Some(_) => Err(SyntaxError::UnexpectedToken { offset: off }),
                    None => Err(SyntaxError::UnexpectedEnd),
                }
            }
            Some(_) => Err(SyntaxError::UnexpectedToken { offset: off }),
            None => Err(SyntaxError::UnexpectedEnd),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr, SyntaxError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(SyntaxError::Empty);
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(SyntaxError::UnexpectedToken { offset: p.offset() });
    }
    Ok(e)
}

/// Folds a syntax tree into a ring, given constructors for leaves.
pub trait Fold {
    type Value;
    type Error: From<SyntaxError>;

    fn int(&self, v: u64) -> Result<Self::Value, Self::Error>;
    fn sym(&self, name: &str) -> Result<Self::Value, Self::Error>;
    fn neg(&self, a: Self::Value) -> Self::Value;
    fn add(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn sub(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn one(&self) -> Self::Value;

    fn pow(&self, a: &Self::Value, mut e: u32) -> Self::Value {
        let mut acc = self.one();
        let mut base = self.mul(a, &self.one());
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn fold(&self, e: &Expr) -> Result<Self::Value, Self::Error> {
        Ok(match e {
            Expr::Int(v) => self.int(*v)?,
            Expr::Sym(s) => self.sym(s)?,
            Expr::Neg(a) => self.neg(self.fold(a)?),
            Expr::Add(a, b) => self.add(self.fold(a)?, self.fold(b)?),
            Expr::Sub(a, b) => self.sub(self.fold(a)?, self.fold(b)?),
            Expr::Mul(a, b) => self.mul(&self.fold(a)?, &self.fold(b)?),
            Expr::Pow(a, k) => self.pow(&self.fold(a)?, *k),
        })
    }
}
