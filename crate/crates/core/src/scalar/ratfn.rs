//! Canonical multivariate rational functions: the exact-backend scalar.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gcd::{div_exact, gcd};
use super::poly::Poly;
use crate::error::Error;

/// A rational function `num/den` in canonical form: gcd(num, den) = 1 and
/// the denominator is monic under the graded order (den = 1 when the
/// function is polynomial).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFn { num, den: Poly::one() };
        }
        let g = gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (div_exact(&num, &g), div_exact(&den, &g))
        };
        let lc = den.leading_coeff();
        if !lc.is_one() {
            let inv = BigRational::one() / lc;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFn { num, den }
    }

    /// Divide the gcd out of a coprime-target pair.
    fn cancel(a: &Poly, b: &Poly) -> (Poly, Poly) {
        let g = gcd(a, b);
        if g.is_one() {
            (a.clone(), b.clone())
        } else {
            (div_exact(a, &g), div_exact(b, &g))
        }
    }

    /// Rescale an already reduced pair so the denominator is monic.
    fn monic(num: Poly, den: Poly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFn::zero();
        }
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatFn { num, den }
        } else {
            let inv = BigRational::one() / lc;
            RatFn { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn zero() -> Self {
        RatFn { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFn { num: Poly::one(), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFn { num: p, den: Poly::one() }
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::from_poly(Poly::constant(q))
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(index: usize) -> Self {
        Self::from_poly(Poly::var(index))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The constant value, when this is a constant function.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn add(&self, other: &RatFn) -> RatFn {
        // Both operands are reduced, so cancellation can only come from a
        // common factor of the denominators; work over the lcm.
        let g = gcd(&self.den, &other.den);
        if g.is_one() {
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            let den = self.den.mul(&other.den);
            return Self::monic(num, den);
        }
        let d1g = div_exact(&self.den, &g);
        let d2g = div_exact(&other.den, &g);
        let num = self.num.mul(&d2g).add(&other.num.mul(&d1g));
        let den = d1g.mul(&other.den);
        if num.is_zero() {
            return RatFn::zero();
        }
        let g2 = gcd(&num, &g);
        if g2.is_one() {
            Self::monic(num, den)
        } else {
            Self::monic(div_exact(&num, &g2), div_exact(&den, &g2))
        }
    }

    pub fn sub(&self, other: &RatFn) -> RatFn {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RatFn) -> RatFn {
        if self.is_zero() || other.is_zero() {
            return RatFn::zero();
        }
        // Cross-cancel: with both operands reduced, the product of the
        // leftovers is already in lowest terms.
        let (n1, d2) = Self::cancel(&self.num, &other.den);
        let (n2, d1) = Self::cancel(&other.num, &self.den);
        Self::monic(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn div(&self, other: &RatFn) -> Result<RatFn, Error> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(RatFn::zero());
        }
        let (n1, n2) = Self::cancel(&self.num, &other.num);
        let (d2, d1) = Self::cancel(&other.den, &self.den);
        Ok(Self::monic(n1.mul(&d2), d1.mul(&n2)))
    }

    pub fn recip(&self) -> Result<RatFn, Error> {
        RatFn::one().div(self)
    }

    pub fn powi(&self, n: i32) -> Result<RatFn, Error> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut out = RatFn::one();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// Partial derivative by the quotient rule.
    pub fn diff(&self, var: usize) -> RatFn {
        if self.den.is_one() {
            return RatFn { num: self.num.diff(var), den: Poly::one() };
        }
        let t = self.num.diff(var).mul(&self.den).sub(&self.num.mul(&self.den.diff(var)));
        if t.is_zero() {
            return RatFn::zero();
        }
        // Reduce against the single denominator twice rather than running
        // one gcd against its square; two passes leave the pair coprime.
        let (t, d1) = Self::cancel(&t, &self.den);
        let (t, d2) = Self::cancel(&t, &self.den);
        Self::monic(t, d1.mul(&d2))
    }

    /// Substitute a rational value for one variable; errors if the
    /// denominator vanishes identically after substitution.
    pub fn eval_var(&self, var: usize, value: &BigRational) -> Result<RatFn, Error> {
        let den = self.den.eval_var(var, value);
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.num.eval_var(var, value), den))
    }

    /// Full evaluation at rational coordinates/parameter values.
    pub fn eval(&self, values: &[BigRational]) -> Result<BigRational, Error> {
        let d = self.den.eval(values);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(values) / d)
    }

    pub fn max_var(&self) -> Option<usize> {
        self.num.max_var().max(self.den.max_var())
    }

    /// True when the function does not involve `var`.
    pub fn is_free_of(&self, var: usize) -> bool {
        self.num.degree_in(var) == 0 && self.den.degree_in(var) == 0
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::scalar::display::fmt_ratfn(self, f, &[])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x1() -> RatFn {
        RatFn::var(0)
    }

    #[test]
    fn additive_inverse() {
        assert!(x1().add(&x1().neg()).is_zero());
    }

    #[test]
    fn multiplicative_inverse() {
        let inv = RatFn::one().div(&x1()).unwrap();
        assert!(inv.mul(&x1()).is_one());
    }

    #[test]
    fn cancellation() {
        // x1^2 / x1 = x1
        let f = RatFn::new(Poly::var(0).pow(2), Poly::var(0)).unwrap();
        assert_eq!(f, x1());
    }

    #[test]
    fn combine_over_common_denominator() {
        // (gamma + x1)/x1 - gamma/x1 = 1, with gamma = var 2
        let gamma = RatFn::var(2);
        let lhs = gamma.add(&x1()).div(&x1()).unwrap().sub(&gamma.div(&x1()).unwrap());
        assert!(lhs.is_one());
    }

    #[test]
    fn diff_quotient_rule() {
        // d/dx1 (c/x1) = -c/x1^2, with c = var 2
        let c = RatFn::var(2);
        let f = c.div(&x1()).unwrap();
        let expect = c.neg().div(&x1().mul(&x1())).unwrap();
        assert_eq!(f.diff(0), expect);
        // d/dx2 (gamma * x1) = 0
        assert!(RatFn::var(2).mul(&x1()).diff(1).is_zero());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(x1().div(&RatFn::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn canonical_idempotent() {
        let f = RatFn::new(
            Poly::var(0).mul(&Poly::var(1)).add(&Poly::var(0)),
            Poly::var(0).pow(2),
        )
        .unwrap();
        let g = RatFn::new(f.num().clone(), f.den().clone()).unwrap();
        assert_eq!(f, g);
    }
}
