//! Rendering of polynomials and rational functions in the connection-file
//! expression grammar, so printed tensors re-parse exactly.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::poly::{Monomial, Poly};
use super::ratfn::RatFn;

pub fn var_name(index: usize, names: &[String]) -> String {
    match index {
        0 => "x1".to_string(),
        1 => "x2".to_string(),
        i => names
            .get(i - 2)
            .cloned()
            .unwrap_or_else(|| format!("p{}", i)),
    }
}

fn fmt_coeff(c: &BigRational) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn fmt_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    if let Some(maxv) = m.max_var() {
        for i in 0..=maxv {
            let e = m.exp(i);
            if e == 1 {
                parts.push(var_name(i, names));
            } else if e > 1 {
                parts.push(format!("{}^{}", var_name(i, names), e));
            }
        }
    }
    parts.join("*")
}

pub fn poly_to_string(p: &Poly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    // Terms in descending graded order, leading term first.
    for (idx, (m, c)) in p.terms().collect::<Vec<_>>().into_iter().rev().enumerate() {
        let mono = fmt_monomial(m, names);
        let abs = c.abs();
        let coeff = fmt_coeff(&abs);
        let body = if mono.is_empty() {
            coeff
        } else if abs.is_one() {
            mono
        } else {
            format!("{}*{}", coeff, mono)
        };
        if idx == 0 {
            if c.is_negative() {
                out.push('-');
            }
            out.push_str(&body);
        } else if c.is_negative() {
            out.push_str(" - ");
            out.push_str(&body);
        } else {
            out.push_str(" + ");
            out.push_str(&body);
        }
    }
    out
}

pub fn ratfn_to_string(f: &RatFn, names: &[String]) -> String {
    if f.is_polynomial() {
        poly_to_string(f.num(), names)
    } else {
        let num = poly_to_string(f.num(), names);
        let den = poly_to_string(f.den(), names);
        format!("({})/({})", num, den)
    }
}

pub fn fmt_poly(p: &Poly, f: &mut fmt::Formatter<'_>, names: &[String]) -> fmt::Result {
    write!(f, "{}", poly_to_string(p, names))
}

pub fn fmt_ratfn(r: &RatFn, f: &mut fmt::Formatter<'_>, names: &[String]) -> fmt::Result {
    write!(f, "{}", ratfn_to_string(r, names))
}
