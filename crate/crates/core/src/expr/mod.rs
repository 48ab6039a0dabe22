//! Scalar expressions as written in connection files: parsing, printing and
//! lowering onto the exact and numeric backends.

pub mod parse;

use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;

use crate::error::Error;
use crate::scalar::{Jet2, JetFn, RatFn};

pub use parse::parse_expr;

/// Transcendental functions accepted by the grammar. They are only available
/// on the numeric backend.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FnKind {
    Tanh,
    Cosh,
    Sinh,
    Exp,
    Sin,
    Cos,
}

impl FnKind {
    pub fn from_name(name: &str) -> Option<FnKind> {
        Some(match name {
            "tanh" => FnKind::Tanh,
            "cosh" => FnKind::Cosh,
            "sinh" => FnKind::Sinh,
            "exp" => FnKind::Exp,
            "sin" => FnKind::Sin,
            "cos" => FnKind::Cos,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            FnKind::Tanh => "tanh",
            FnKind::Cosh => "cosh",
            FnKind::Sinh => "sinh",
            FnKind::Exp => "exp",
            FnKind::Sin => "sin",
            FnKind::Cos => "cos",
        }
    }

    fn jet_fn(self) -> JetFn {
        match self {
            FnKind::Tanh => JetFn::Tanh,
            FnKind::Cosh => JetFn::Cosh,
            FnKind::Sinh => JetFn::Sinh,
            FnKind::Exp => JetFn::Exp,
            FnKind::Sin => JetFn::Sin,
            FnKind::Cos => JetFn::Cos,
        }
    }
}

/// Abstract syntax of a scalar expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigRational),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Fn(FnKind, Box<Expr>),
}

impl Expr {
    pub fn num_i64(n: i64) -> Expr {
        Expr::Num(BigRational::from_integer(n.into()))
    }

    /// True when the expression mentions a transcendental function.
    pub fn has_transcendental(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Var(_) => false,
            Expr::Neg(a) | Expr::Pow(a, _) => a.has_transcendental(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.has_transcendental() || b.has_transcendental()
            }
            Expr::Fn(_, _) => true,
        }
    }

    pub fn free_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Fn(_, a) => a.free_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.free_vars(out);
                b.free_vars(out);
            }
        }
    }
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(_, _) | Expr::Sub(_, _) => 1,
        Expr::Mul(_, _) | Expr::Div(_, _) => 2,
        Expr::Neg(_) => 3,
        Expr::Pow(_, _) => 4,
        Expr::Num(_) | Expr::Var(_) | Expr::Fn(_, _) => 5,
    }
}

fn fmt_child(e: &Expr, parent_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if prec(e) < parent_prec {
        write!(f, "({})", e)
    } else {
        write!(f, "{}", e)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(q) => {
                use num_traits::{One, Signed};
                if q.is_negative() {
                    write!(f, "(-{}", q.abs().numer())?;
                    if !q.denom().is_one() {
                        write!(f, "/{}", q.denom())?;
                    }
                    write!(f, ")")
                } else if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Expr::Var(v) => write!(f, "{}", v),
            Expr::Neg(a) => {
                write!(f, "-")?;
                fmt_child(a, 4, f)
            }
            Expr::Add(a, b) => {
                fmt_child(a, 1, f)?;
                write!(f, " + ")?;
                fmt_child(b, 2, f)
            }
            Expr::Sub(a, b) => {
                fmt_child(a, 1, f)?;
                write!(f, " - ")?;
                fmt_child(b, 2, f)
            }
            Expr::Mul(a, b) => {
                fmt_child(a, 2, f)?;
                write!(f, "*")?;
                fmt_child(b, 3, f)
            }
            Expr::Div(a, b) => {
                fmt_child(a, 2, f)?;
                write!(f, "/")?;
                fmt_child(b, 5, f)
            }
            Expr::Pow(a, n) => {
                fmt_child(a, 5, f)?;
                if *n < 0 {
                    write!(f, "^({})", n)
                } else {
                    write!(f, "^{}", n)
                }
            }
            Expr::Fn(k, a) => write!(f, "{}({})", k.name(), a),
        }
    }
}

/// Symbol environment for lowering: coordinate names are built in; declared
/// parameters get variable indices 2.. in declaration order, and may carry a
/// rational binding.
#[derive(Clone, Debug, Default)]
pub struct Params {
    names: Vec<String>,
    bindings: HashMap<String, BigRational>,
}

impl Params {
    pub fn new() -> Self {
        Params::default()
    }

    pub fn declare(&mut self, name: &str) -> usize {
        if let Some(i) = self.index_of(name) {
            return i;
        }
        self.names.push(name.to_string());
        self.names.len() + 1
    }

    pub fn bind(&mut self, name: &str, value: BigRational) {
        self.declare(name);
        self.bindings.insert(name.to_string(), value);
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name).map(|i| i + 2)
    }

    pub fn binding(&self, name: &str) -> Option<&BigRational> {
        self.bindings.get(name)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_declared(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    /// Names declared but not bound to a value.
    pub fn unbound(&self) -> Vec<String> {
        self.names
            .iter()
            .filter(|n| !self.bindings.contains_key(*n))
            .cloned()
            .collect()
    }
}

/// Lower onto the exact backend. Bound parameters are substituted by value;
/// unbound parameters stay symbolic as extra variables.
pub fn lower_exact(e: &Expr, params: &Params) -> Result<RatFn, Error> {
    match e {
        Expr::Num(q) => Ok(RatFn::from_rational(q.clone())),
        Expr::Var(v) => match v.as_str() {
            "x1" => Ok(RatFn::var(0)),
            "x2" => Ok(RatFn::var(1)),
            name => {
                if let Some(q) = params.binding(name) {
                    Ok(RatFn::from_rational(q.clone()))
                } else if let Some(i) = params.index_of(name) {
                    Ok(RatFn::var(i))
                } else {
                    Err(Error::UnknownIdentifier(name.to_string()))
                }
            }
        },
        Expr::Neg(a) => Ok(lower_exact(a, params)?.neg()),
        Expr::Add(a, b) => Ok(lower_exact(a, params)?.add(&lower_exact(b, params)?)),
        Expr::Sub(a, b) => Ok(lower_exact(a, params)?.sub(&lower_exact(b, params)?)),
        Expr::Mul(a, b) => Ok(lower_exact(a, params)?.mul(&lower_exact(b, params)?)),
        Expr::Div(a, b) => lower_exact(a, params)?.div(&lower_exact(b, params)?),
        Expr::Pow(a, n) => lower_exact(a, params)?.powi(*n),
        Expr::Fn(_, _) => Err(Error::TranscendentalInExactBackend),
    }
}

/// Evaluate as an order-3 jet at a base point. All parameters must be bound
/// (the `values` map carries both bindings and any overrides).
pub fn eval_jet(e: &Expr, x1: f64, x2: f64, values: &HashMap<String, f64>) -> Result<Jet2, Error> {
    match e {
        Expr::Num(q) => {
            use num_traits::ToPrimitive;
            Ok(Jet2::constant(q.to_f64().unwrap_or(f64::NAN)))
        }
        Expr::Var(v) => match v.as_str() {
            "x1" => Ok(Jet2::var_x1(x1)),
            "x2" => Ok(Jet2::var_x2(x2)),
            name => values
                .get(name)
                .map(|v| Jet2::constant(*v))
                .ok_or_else(|| Error::UnboundParameter(name.to_string())),
        },
        Expr::Neg(a) => Ok(eval_jet(a, x1, x2, values)?.neg()),
        Expr::Add(a, b) => Ok(eval_jet(a, x1, x2, values)?.add(&eval_jet(b, x1, x2, values)?)),
        Expr::Sub(a, b) => Ok(eval_jet(a, x1, x2, values)?.sub(&eval_jet(b, x1, x2, values)?)),
        Expr::Mul(a, b) => Ok(eval_jet(a, x1, x2, values)?.mul(&eval_jet(b, x1, x2, values)?)),
        Expr::Div(a, b) => eval_jet(a, x1, x2, values)?.div(&eval_jet(b, x1, x2, values)?),
        Expr::Pow(a, n) => eval_jet(a, x1, x2, values)?.powi(*n),
        Expr::Fn(k, a) => eval_jet(a, x1, x2, values)?.apply(k.jet_fn()),
    }
}
