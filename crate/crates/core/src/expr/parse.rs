//! Recursive-descent parser for the scalar expression grammar.
//!
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := ('-')? power
//! power  := atom ('^' exponent)?
//! atom   := number | ident | ident '(' expr ')' | '(' expr ')'
//!
//! Numbers are integers or decimals; decimals are read exactly (0.25 = 1/4).
//! The exponent is an integer, optionally negative inside parentheses.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::pow::Pow;

use crate::error::Error;

use super::{Expr, FnKind};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(input: &str) -> Result<Vec<Spanned>, Error> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump(&mut chars);
                continue;
            }
            '+' => {
                bump(&mut chars);
                out.push(Spanned { tok: Tok::Plus, line: tline, col: tcol });
            }
            '-' => {
                bump(&mut chars);
                out.push(Spanned { tok: Tok::Minus, line: tline, col: tcol });
            }
            '*' => {
                bump(&mut chars);
                out.push(Spanned { tok: Tok::Star, line: tline, col: tcol });
            }
            '/' => {
                bump(&mut chars);
                out.push(Spanned { tok: Tok::Slash, line: tline, col: tcol });
            }
            '^' => {
                bump(&mut chars);
                out.push(Spanned { tok: Tok::Caret, line: tline, col: tcol });
            }
            '(' => {
                bump(&mut chars);
                out.push(Spanned { tok: Tok::LParen, line: tline, col: tcol });
            }
            ')' => {
                bump(&mut chars);
                out.push(Spanned { tok: Tok::RParen, line: tline, col: tcol });
            }
            '0'..='9' | '.' => {
                let mut digits = String::new();
                let mut frac = String::new();
                let mut seen_dot = false;
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        bump(&mut chars);
                        if seen_dot {
                            frac.push(d);
                        } else {
                            digits.push(d);
                        }
                    } else if d == '.' && !seen_dot {
                        bump(&mut chars);
                        seen_dot = true;
                    } else {
                        break;
                    }
                }
                if digits.is_empty() && frac.is_empty() {
                    return Err(Error::Syntax {
                        line: tline,
                        col: tcol,
                        msg: "malformed number".into(),
                    });
                }
                let int_part: BigInt = if digits.is_empty() {
                    BigInt::from(0)
                } else {
                    digits.parse().map_err(|_| Error::Syntax {
                        line: tline,
                        col: tcol,
                        msg: "malformed number".into(),
                    })?
                };
                let mut q = BigRational::from_integer(int_part);
                if !frac.is_empty() {
                    let num: BigInt = frac.parse().unwrap();
                    let den = BigInt::from(10u32).pow(frac.len() as u32);
                    q += BigRational::new(num, den);
                }
                out.push(Spanned { tok: Tok::Num(q), line: tline, col: tcol });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        bump(&mut chars);
                        name.push(d);
                    } else {
                        break;
                    }
                }
                out.push(Spanned { tok: Tok::Ident(name), line: tline, col: tcol });
            }
            other => {
                return Err(Error::Syntax {
                    line: tline,
                    col: tcol,
                    msg: format!("unexpected character `{}`", other),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|s| (s.line, s.col))
            .unwrap_or((1, 1))
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.here();
        Error::Syntax { line, col, msg: msg.into() }
    }

    fn advance(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), Error> {
        if self.peek() == Some(t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {}", what)))
        }
    }

    fn expr(&mut self) -> Result<Expr, Error> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, Error> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    acc = Expr::Div(Box::new(acc), Box::new(self.factor()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, Error> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            Ok(Expr::Neg(Box::new(self.power()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, Error> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let n = self.exponent()?;
            Ok(Expr::Pow(Box::new(base), n))
        } else {
            Ok(base)
        }
    }

    fn exponent(&mut self) -> Result<i32, Error> {
        let parenthesized = self.peek() == Some(&Tok::LParen);
        if parenthesized {
            self.pos += 1;
        }
        let neg = if self.peek() == Some(&Tok::Minus) {
            if !parenthesized {
                return Err(self.err("negative exponent must be parenthesized"));
            }
            self.pos += 1;
            true
        } else {
            false
        };
        let n = match self.advance() {
            Some(Tok::Num(q)) => {
                use num_traits::{One, ToPrimitive};
                if !q.denom().is_one() {
                    return Err(self.err("exponent must be an integer"));
                }
                q.numer().to_i32().ok_or_else(|| self.err("exponent out of range"))?
            }
            _ => return Err(self.err("expected integer exponent")),
        };
        if parenthesized {
            self.expect(&Tok::RParen, "`)`")?;
        }
        Ok(if neg { -n } else { n })
    }

    fn atom(&mut self) -> Result<Expr, Error> {
        match self.advance() {
            Some(Tok::Num(q)) => Ok(Expr::Num(q)),
            Some(Tok::Ident(name)) => {
                if self.peek() == Some(&Tok::LParen) {
                    let kind = FnKind::from_name(&name)
                        .ok_or(Error::UnsupportedFunction(name.clone()))?;
                    self.pos += 1;
                    let arg = self.expr()?;
                    self.expect(&Tok::RParen, "`)`")?;
                    Ok(Expr::Fn(kind, Box::new(arg)))
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(self.err("expected a number, identifier or `(`")),
        }
    }
}

/// Parse a full expression; trailing tokens are an error.
pub fn parse_expr(input: &str) -> Result<Expr, Error> {
    let toks = lex(input)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}
