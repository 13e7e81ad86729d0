//! The operator expression language.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ['^' uint] | '(' expr ')' ['^' uint]
//! atom   := RATIONAL | 'i' | 't' ['^' int] | 'E' | 'D'
//! ```
//!
//! `E` is the Euler derivation, `D = t⁻¹E` the ordinary derivative, and `*`
//! is the (noncommutative) operator product. Expressions are evaluated
//! exactly and truncated only at the end.

use std::fmt;

use fuchsforge_core::{Field, OperatorSeries, Poly, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parse error at column {}: {message}", .position + 1)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { position, message: message.into() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ast {
    Rational(BigRational),
    I,
    /// `t^k`
    T(i64),
    E,
    D,
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Slash,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    I,
    T,
    E,
    D,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Num(n) => return write!(f, "number `{n}`"),
            Tok::Slash => "`/`",
            Tok::Plus => "`+`",
            Tok::Minus => "`-`",
            Tok::Star => "`*`",
            Tok::Caret => "`^`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::I => "`i`",
            Tok::T => "`t`",
            Tok::E => "`E`",
            Tok::D => "`D`",
            Tok::End => "end of input",
        };
        f.write_str(s)
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Num(src[start..i].parse().unwrap()), start));
                continue;
            }
            b'/' => Tok::Slash,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'i' => Tok::I,
            b't' => Tok::T,
            b'E' => Tok::E,
            b'D' => Tok::D,
            _ => {
                let ch = src[i..].chars().next().unwrap();
                return err(i, format!("unexpected character `{ch}`"));
            }
        };
        out.push((tok, i));
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn at(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            err(self.at(), format!("expected {want}, found {}", self.peek()))
        }
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = if *self.peek() == Tok::Minus {
            self.bump();
            Ast::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = Ast::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn uint(&mut self) -> Result<u32, ParseError> {
        let at = self.at();
        match self.bump() {
            Tok::Num(n) => u32::try_from(n).or_else(|_| err(at, "exponent too large")),
            Tok::Minus => err(at, "negative exponent is only allowed on `t`"),
            other => err(at, format!("expected exponent, found {other}")),
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let at = self.at();
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let at_num = self.at();
        match self.bump() {
            Tok::Num(n) => {
                let v = i64::try_from(n).or_else(|_| err(at_num, "exponent too large"))?;
                Ok(if neg { -v } else { v })
            }
            other => err(if neg { at_num } else { at }, format!("expected exponent, found {other}")),
        }
    }

    fn power(&mut self, base: Ast) -> Result<Ast, ParseError> {
        if *self.peek() == Tok::Caret {
            self.bump();
            Ok(Ast::Pow(Box::new(base), self.uint()?))
        } else {
            Ok(base)
        }
    }

    fn factor(&mut self) -> Result<Ast, ParseError> {
        let at = self.at();
        match self.bump() {
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                self.power(inner)
            }
            Tok::Num(n) => {
                let value = if *self.peek() == Tok::Slash {
                    self.bump();
                    let at_den = self.at();
                    match self.bump() {
                        Tok::Num(d) if d != BigInt::from(0) => BigRational::new(n, d),
                        Tok::Num(_) => return err(at_den, "zero denominator"),
                        other => return err(at_den, format!("expected denominator, found {other}")),
                    }
                } else {
                    BigRational::from_integer(n)
                };
                self.power(Ast::Rational(value))
            }
            Tok::T => {
                if *self.peek() == Tok::Caret {
                    self.bump();
                    Ok(Ast::T(self.int()?))
                } else {
                    Ok(Ast::T(1))
                }
            }
            Tok::I => self.power(Ast::I),
            Tok::E => self.power(Ast::E),
            Tok::D => self.power(Ast::D),
            other => err(at, format!("expected an operand, found {other}")),
        }
    }
}

pub fn parse(src: &str) -> Result<Ast, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let ast = p.expr()?;
    if *p.peek() != Tok::End {
        return err(p.at(), format!("unexpected {}", p.peek()));
    }
    Ok(ast)
}

/// Evaluation failure (the only one is `i` outside ℚ(i)).
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("the imaginary unit is not available over {0}")]
pub struct FieldError(pub &'static str);

/// An exactly known Laurent polynomial operator; `trunc` covers every term.
fn exact(op: OperatorSeries) -> OperatorSeries {
    let top = op.max_power().unwrap_or(0);
    op.extend_exact(top.max(op.kmin()))
}

fn exact_add(a: &OperatorSeries, b: &OperatorSeries, negate: bool) -> OperatorSeries {
    let t = a.trunc().max(b.trunc());
    let (a, b) = (a.extend_exact(t), b.extend_exact(t));
    exact(if negate { &a - &b } else { &a + &b })
}

fn exact_mul(a: &OperatorSeries, b: &OperatorSeries) -> OperatorSeries {
    if a.is_zero() || b.is_zero() {
        return OperatorSeries::zero(0);
    }
    let top = a.max_power().unwrap() + b.max_power().unwrap();
    let a2 = a.extend_exact(top - b.kmin());
    let b2 = b.extend_exact(top - a.kmin());
    exact(&a2 * &b2)
}

fn eval_exact(ast: &Ast, field: Field) -> Result<OperatorSeries, FieldError> {
    Ok(match ast {
        Ast::Rational(q) => exact(OperatorSeries::constant(Scalar::from_rational(q.clone()), 0)),
        Ast::I => {
            if field == Field::Q {
                return Err(FieldError("Q"));
            }
            OperatorSeries::constant(Scalar::i(), 0)
        }
        Ast::T(k) => OperatorSeries::monomial(*k, Poly::one(), *k),
        Ast::E => OperatorSeries::euler(Poly::epsilon(), 0),
        Ast::D => OperatorSeries::monomial(-1, Poly::epsilon(), -1),
        Ast::Neg(a) => {
            let v = eval_exact(a, field)?;
            -&v
        }
        Ast::Add(a, b) => exact_add(&eval_exact(a, field)?, &eval_exact(b, field)?, false),
        Ast::Sub(a, b) => exact_add(&eval_exact(a, field)?, &eval_exact(b, field)?, true),
        Ast::Mul(a, b) => exact_mul(&eval_exact(a, field)?, &eval_exact(b, field)?),
        Ast::Pow(a, e) => {
            let base = eval_exact(a, field)?;
            let mut acc = OperatorSeries::one(0);
            for _ in 0..*e {
                acc = exact_mul(&acc, &base);
            }
            acc
        }
    })
}

/// The exact value of an expression, before truncation.
pub fn evaluate_exact(ast: &Ast, field: Field) -> Result<OperatorSeries, FieldError> {
    eval_exact(ast, field)
}

/// Evaluates and truncates (or zero-pads) at `t^trunc`.
pub fn evaluate(ast: &Ast, trunc: i64, field: Field) -> Result<OperatorSeries, FieldError> {
    let v = eval_exact(ast, field)?;
    Ok(if v.trunc() >= trunc { v.truncate(trunc) } else { v.extend_exact(trunc) })
}

/// `parse` then `evaluate`.
pub fn parse_operator(src: &str, trunc: i64, field: Field) -> Result<OperatorSeries, crate::CliError> {
    let ast = parse(src)?;
    Ok(evaluate(&ast, trunc, field)?)
}

/// Canonical text of an operator (the inverse of [`parse_operator`]).
pub fn print_text(l: &OperatorSeries) -> String {
    l.to_string()
}
