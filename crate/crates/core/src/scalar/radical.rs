//! Scalars of the form q*sqrt(r) with q rational and r a positive
//! square-free integer. One square-root extension is all the gauge
//! normalization pipeline ever needs; incompatible radicals are rejected.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RadicalScalar {
    q: BigRational,
    /// Square-free positive integer under the root; 1 for plain rationals.
    r: BigUint,
}

impl RadicalScalar {
    pub fn zero() -> Self {
        RadicalScalar { q: BigRational::zero(), r: BigUint::one() }
    }

    pub fn one() -> Self {
        RadicalScalar { q: BigRational::one(), r: BigUint::one() }
    }

    pub fn from_rational(q: BigRational) -> Self {
        RadicalScalar { q, r: BigUint::one() }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// Build q*sqrt(r), extracting the square part of r.
    pub fn new(q: BigRational, r: BigUint) -> Self {
        if q.is_zero() || r.is_one() {
            return RadicalScalar::from_rational(q);
        }
        assert!(!r.is_zero(), "radicand must be positive");
        let (square, free) = extract_square(&r);
        let q = q * BigRational::from_integer(BigInt::from(square));
        if free.is_one() {
            RadicalScalar::from_rational(q)
        } else {
            RadicalScalar { q, r: free }
        }
    }

    /// Exact square root of a positive rational p: sqrt(p) = (s/den)*sqrt(f).
    pub fn sqrt_of(p: &BigRational) -> Result<Self, Error> {
        if p.is_zero() {
            return Ok(Self::zero());
        }
        if p.is_negative() {
            return Err(Error::RadicalObstruction(
                "square root of a negative quantity".into(),
            ));
        }
        let num = p.numer().magnitude().clone();
        let den = p.denom().magnitude().clone();
        // sqrt(n/d) = sqrt(n*d)/d
        let q = BigRational::new(BigInt::one(), BigInt::from(den.clone()));
        Ok(Self::new(q, num * den))
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.q
    }

    pub fn radicand(&self) -> &BigUint {
        &self.r
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.r.is_one()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.q.clone())
        } else {
            None
        }
    }

    pub fn is_negative(&self) -> bool {
        self.q.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.q.is_positive()
    }

    pub fn neg(&self) -> Self {
        RadicalScalar { q: -self.q.clone(), r: self.r.clone() }
    }

    pub fn abs(&self) -> Self {
        RadicalScalar { q: self.q.abs(), r: self.r.clone() }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, Error> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.r != other.r {
            return Err(Error::RadicalObstruction(format!(
                "cannot add sqrt({}) and sqrt({}) terms exactly",
                self.r, other.r
            )));
        }
        let q = &self.q + &other.q;
        Ok(if q.is_zero() { Self::zero() } else { RadicalScalar { q, r: self.r.clone() } })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, Error> {
        self.checked_add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::new(&self.q * &other.q, &self.r * &other.r)
    }

    pub fn div(&self, other: &Self) -> Result<Self, Error> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // 1/(q*sqrt(r)) = sqrt(r)/(q*r)
        let inv = RadicalScalar::new(
            (BigRational::one() / &other.q) / BigRational::from_integer(BigInt::from(other.r.clone())),
            other.r.clone(),
        );
        Ok(self.mul(&inv))
    }

    pub fn square(&self) -> BigRational {
        &self.q * &self.q * BigRational::from_integer(BigInt::from(self.r.clone()))
    }

    pub fn to_f64(&self) -> f64 {
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        let r = self.r.to_f64().unwrap_or(f64::NAN);
        q * r.sqrt()
    }

    pub fn eq_rational(&self, v: &BigRational) -> bool {
        self.is_rational() && &self.q == v
    }

    pub fn eq_i64(&self, v: i64) -> bool {
        self.eq_rational(&BigRational::from_integer(BigInt::from(v)))
    }
}

/// Split n = square^2 * free with free square-free, by trial division.
fn extract_square(n: &BigUint) -> (BigUint, BigUint) {
    let mut m = n.clone();
    let mut square = BigUint::one();
    let mut free = BigUint::one();
    let mut d = BigUint::from(2u32);
    while &d * &d <= m {
        let mut count = 0u32;
        while (&m % &d).is_zero() {
            m /= &d;
            count += 1;
        }
        if count > 0 {
            for _ in 0..count / 2 {
                square *= &d;
            }
            if count % 2 == 1 {
                free *= &d;
            }
        }
        d += 1u32;
    }
    free *= &m; // residual prime
    (square, free)
}

impl fmt::Display for RadicalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.q)
        } else if self.q.is_one() {
            write!(f, "sqrt({})", self.r)
        } else {
            write!(f, "{}*sqrt({})", self.q, self.r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_extracts_square_part() {
        // sqrt(12) = 2*sqrt(3)
        let s = RadicalScalar::sqrt_of(&BigRational::from_integer(12.into())).unwrap();
        assert_eq!(s.rational_part(), &BigRational::from_integer(2.into()));
        assert_eq!(s.radicand(), &BigUint::from(3u32));
    }

    #[test]
    fn sqrt_of_fraction() {
        // sqrt(1/2) = (1/2)*sqrt(2)
        let s = RadicalScalar::sqrt_of(&BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(s.rational_part(), &BigRational::new(1.into(), 2.into()));
        assert_eq!(s.radicand(), &BigUint::from(2u32));
        // and it squares back to 1/2
        assert_eq!(s.square(), BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn same_radical_addition() {
        let a = RadicalScalar::new(BigRational::from_integer(1.into()), BigUint::from(5u32));
        let b = RadicalScalar::new(BigRational::from_integer(2.into()), BigUint::from(5u32));
        let c = a.checked_add(&b).unwrap();
        assert_eq!(c.rational_part(), &BigRational::from_integer(3.into()));
    }

    #[test]
    fn mixed_radical_addition_rejected() {
        let a = RadicalScalar::new(BigRational::one(), BigUint::from(2u32));
        let b = RadicalScalar::new(BigRational::one(), BigUint::from(3u32));
        assert!(a.checked_add(&b).is_err());
    }

    #[test]
    fn multiplication_closes() {
        // sqrt(2)*sqrt(2) = 2; sqrt(2)*sqrt(3) = sqrt(6)
        let s2 = RadicalScalar::new(BigRational::one(), BigUint::from(2u32));
        let s3 = RadicalScalar::new(BigRational::one(), BigUint::from(3u32));
        assert!(s2.mul(&s2).eq_i64(2));
        assert_eq!(s2.mul(&s3).radicand(), &BigUint::from(6u32));
    }

    #[test]
    fn division_inverts() {
        let s = RadicalScalar::new(BigRational::new(3.into(), 2.into()), BigUint::from(7u32));
        let one = s.div(&s).unwrap();
        assert!(one.eq_i64(1));
    }
}
