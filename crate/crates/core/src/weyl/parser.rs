//! Operator-expression grammar:
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' int)?
//! atom   := t | x | dt | dx | i | rational | param | '(' expr ')'
//! ```
//!
//! Products are noncommutative and evaluated left to right. A leading unary minus is
//! accepted so that printed operators parse back.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::gauss::GaussRat;
use super::operator::WeylOperator;
use super::param::{Param, ParamPoly};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Atom {
    T,
    X,
    Dt,
    Dx,
    I,
    Rational(BigRational),
    Param(Param),
}

#[derive(Clone, Debug, PartialEq)]
pub enum OperatorExpr {
    Atom(Atom),
    Neg(Box<OperatorExpr>),
    Add(Box<OperatorExpr>, Box<OperatorExpr>),
    Sub(Box<OperatorExpr>, Box<OperatorExpr>),
    Mul(Box<OperatorExpr>, Box<OperatorExpr>),
    Pow(Box<OperatorExpr>, i32),
}

impl OperatorExpr {
    pub fn eval(&self) -> WeylOperator {
        match self {
            OperatorExpr::Atom(a) => match a {
                Atom::T => WeylOperator::t(),
                Atom::X => WeylOperator::x(),
                Atom::Dt => WeylOperator::dt(),
                Atom::Dx => WeylOperator::dx(),
                Atom::I => WeylOperator::scalar(GaussRat::i()),
                Atom::Rational(r) => WeylOperator::scalar(GaussRat::real(r.clone())),
                Atom::Param(p) => WeylOperator::constant(ParamPoly::param(*p)),
            },
            OperatorExpr::Neg(e) => e.eval().neg(),
            OperatorExpr::Add(a, b) => a.eval().add(&b.eval()),
            OperatorExpr::Sub(a, b) => a.eval().sub(&b.eval()),
            OperatorExpr::Mul(a, b) => a.eval().mul(&b.eval()),
            OperatorExpr::Pow(base, k) => {
                if *k < 0 {
                    // only x^-k reaches here
                    WeylOperator::x_pow(*k)
                } else {
                    base.eval().pow(*k as u32)
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (pos, c) = chars[k];
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push((pos, tok));
            k += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].1.is_ascii_digit() {
                k += 1;
            }
            let num: String = chars[start..k].iter().map(|p| p.1).collect();
            let mut value = BigRational::from_integer(num.parse::<BigInt>().expect("digits"));
            if k < chars.len() && chars[k].1 == '/' {
                k += 1;
                let ds = k;
                while k < chars.len() && chars[k].1.is_ascii_digit() {
                    k += 1;
                }
                if ds == k {
                    return Err(Error::Syntax { pos: chars[ds - 1].0, msg: "expected denominator after '/'".into() });
                }
                let den: String = chars[ds..k].iter().map(|p| p.1).collect();
                let den = den.parse::<BigInt>().expect("digits");
                if den == BigInt::from(0) {
                    return Err(Error::Syntax { pos, msg: "zero denominator".into() });
                }
                value /= BigRational::from_integer(den);
            }
            out.push((pos, Tok::Num(value)));
            continue;
        }
        if c.is_alphabetic() {
            let start = k;
            while k < chars.len() && (chars[k].1.is_alphanumeric() || chars[k].1 == '_') {
                k += 1;
            }
            let name: String = chars[start..k].iter().map(|p| p.1).collect();
            out.push((pos, Tok::Ident(name)));
            continue;
        }
        return Err(Error::Syntax { pos, msg: format!("unexpected character '{c}'") });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    k: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.k).map(|p| &p.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.k).map(|p| p.0).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<OperatorExpr> {
        let mut lhs = if self.peek() == Some(&Tok::Minus) {
            self.k += 1;
            OperatorExpr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.k += 1;
                    lhs = OperatorExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.k += 1;
                    lhs = OperatorExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<OperatorExpr> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.k += 1;
            lhs = OperatorExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<OperatorExpr> {
        let atom_pos = self.pos();
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.k += 1;
        let negative = if self.peek() == Some(&Tok::Minus) {
            self.k += 1;
            true
        } else {
            false
        };
        let exp_pos = self.pos();
        let n = match self.toks.get(self.k) {
            Some((_, Tok::Num(r))) if r.is_integer() => r.to_integer(),
            _ => return Err(Error::Syntax { pos: exp_pos, msg: "expected integer exponent".into() }),
        };
        self.k += 1;
        let n: i32 = i32::try_from(n).map_err(|_| Error::Syntax { pos: exp_pos, msg: "exponent too large".into() })?;
        if negative {
            if base != OperatorExpr::Atom(Atom::X) {
                let atom = match &base {
                    OperatorExpr::Atom(Atom::T) => "t",
                    OperatorExpr::Atom(Atom::Dt) => "dt",
                    OperatorExpr::Atom(Atom::Dx) => "dx",
                    _ => "expression",
                };
                return Err(Error::NegativePower { pos: atom_pos, atom: atom.into() });
            }
            return Ok(OperatorExpr::Pow(Box::new(base), -n));
        }
        Ok(OperatorExpr::Pow(Box::new(base), n))
    }

    fn atom(&mut self) -> Result<OperatorExpr> {
        let pos = self.pos();
        let tok = self.toks.get(self.k).map(|p| p.1.clone());
        self.k += 1;
        match tok {
            Some(Tok::Num(r)) => Ok(OperatorExpr::Atom(Atom::Rational(r))),
            Some(Tok::Ident(name)) => {
                let atom = match name.as_str() {
                    "t" => Atom::T,
                    "x" => Atom::X,
                    "dt" => Atom::Dt,
                    "dx" => Atom::Dx,
                    "i" => Atom::I,
                    other => match Param::from_name(other) {
                        Some(p) => Atom::Param(p),
                        None => return Err(Error::UnknownIdentifier { pos, name }),
                    },
                };
                Ok(OperatorExpr::Atom(atom))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(Error::Syntax { pos: self.pos(), msg: "expected ')'".into() });
                }
                self.k += 1;
                Ok(inner)
            }
            Some(other) => Err(Error::Syntax { pos, msg: format!("unexpected token {other:?}") }),
            None => Err(Error::Syntax { pos, msg: "unexpected end of input".into() }),
        }
    }
}

pub fn parse_operator(text: &str) -> Result<OperatorExpr> {
    let toks = lex(text)?;
    let mut p = Parser { toks, k: 0, end: text.len() };
    let e = p.expr()?;
    if p.k < p.toks.len() {
        let msg = match p.peek() {
            Some(Tok::RParen) => "unbalanced ')'".to_string(),
            _ => "expected operator ('+', '-', '*'); juxtaposition is not multiplication".to_string(),
        };
        return Err(Error::Syntax { pos: p.pos(), msg });
    }
    Ok(e)
}

/// Parses and evaluates in one step.
pub fn parse_weyl(text: &str) -> Result<WeylOperator> {
    Ok(parse_operator(text)?.eval())
}
