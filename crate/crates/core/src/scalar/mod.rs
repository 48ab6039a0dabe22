//! Exact and numeric scalar kernels.

pub mod display;
pub mod gcd;
pub mod jet;
pub mod poly;
pub mod radical;
pub mod ratfn;

pub use jet::{Jet2, JetFn};
pub use poly::{Monomial, Poly};
pub use radical::RadicalScalar;
pub use ratfn::RatFn;

/// Coordinate variables of the surface. Parameters are never coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coord {
    X1,
    X2,
}

impl Coord {
    pub fn index(self) -> usize {
        match self {
            Coord::X1 => 0,
            Coord::X2 => 1,
        }
    }

    pub fn both() -> [Coord; 2] {
        [Coord::X1, Coord::X2]
    }
}

/// The scalar interface the tensor formulas are generic over. All tensor
/// computations are straight-line ring arithmetic plus coordinate
/// derivatives, so no division is required here.
pub trait Coef: Clone {
    fn zero() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn diff(&self, var: Coord) -> Self;
    fn from_ratio(n: i64, d: i64) -> Self;

    fn half(v: &Self) -> Self {
        v.mul(&Self::from_ratio(1, 2))
    }
}

impl Coef for RatFn {
    fn zero() -> Self {
        RatFn::zero()
    }
    fn add(&self, other: &Self) -> Self {
        RatFn::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        RatFn::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        RatFn::mul(self, other)
    }
    fn neg(&self) -> Self {
        RatFn::neg(self)
    }
    fn diff(&self, var: Coord) -> Self {
        RatFn::diff(self, var.index())
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        RatFn::from_rational(num_rational::BigRational::new(n.into(), d.into()))
    }
}

impl Coef for Jet2 {
    fn zero() -> Self {
        Jet2::zero()
    }
    fn add(&self, other: &Self) -> Self {
        Jet2::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Jet2::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Jet2::mul(self, other)
    }
    fn neg(&self) -> Self {
        Jet2::neg(self)
    }
    fn diff(&self, var: Coord) -> Self {
        match var {
            Coord::X1 => self.diff_x1(),
            Coord::X2 => self.diff_x2(),
        }
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        Jet2::constant(n as f64 / d as f64)
    }
}
