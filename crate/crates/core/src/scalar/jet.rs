//! Bivariate truncated Taylor jets: the numeric-backend scalar.
//!
//! A `Jet2` holds the Taylor coefficients of a function of (x1, x2) around a
//! base point, up to total order 3. Order 3 is enough for the second
//! derivatives of Christoffel symbols that the covariant derivative of the
//! Ricci tensor requires, with one order of headroom.

use crate::error::Error;

pub const JET_ORDER: usize = 3;

/// Taylor coefficients c[i][j] ~ (1/(i! j!)) d^{i+j} f / dx1^i dx2^j,
/// stored for i + j <= 3.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2 {
    c: [[f64; JET_ORDER + 1]; JET_ORDER + 1],
}

impl Jet2 {
    pub fn constant(v: f64) -> Self {
        let mut c = [[0.0; 4]; 4];
        c[0][0] = v;
        Jet2 { c }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    /// The coordinate x1 as a jet around `at`.
    pub fn var_x1(at: f64) -> Self {
        let mut j = Self::constant(at);
        j.c[1][0] = 1.0;
        j
    }

    pub fn var_x2(at: f64) -> Self {
        let mut j = Self::constant(at);
        j.c[0][1] = 1.0;
        j
    }

    pub fn value(&self) -> f64 {
        self.c[0][0]
    }

    /// Partial derivative value d^{i+j} f / dx1^i dx2^j at the base point.
    pub fn deriv(&self, i: usize, j: usize) -> f64 {
        assert!(i + j <= JET_ORDER);
        self.c[i][j] * factorial(i) * factorial(j)
    }

    pub fn add(&self, o: &Jet2) -> Jet2 {
        let mut out = *self;
        for i in 0..=JET_ORDER {
            for j in 0..=JET_ORDER - i {
                out.c[i][j] += o.c[i][j];
            }
        }
        out
    }

    pub fn sub(&self, o: &Jet2) -> Jet2 {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Jet2 {
        let mut out = *self;
        for row in out.c.iter_mut() {
            for v in row.iter_mut() {
                *v = -*v;
            }
        }
        out
    }

    pub fn scale(&self, k: f64) -> Jet2 {
        let mut out = *self;
        for row in out.c.iter_mut() {
            for v in row.iter_mut() {
                *v *= k;
            }
        }
        out
    }

    /// Truncated product.
    pub fn mul(&self, o: &Jet2) -> Jet2 {
        let mut out = Jet2::zero();
        for i1 in 0..=JET_ORDER {
            for j1 in 0..=JET_ORDER - i1 {
                if self.c[i1][j1] == 0.0 {
                    continue;
                }
                for i2 in 0..=JET_ORDER - i1 - j1 {
                    for j2 in 0..=JET_ORDER - i1 - j1 - i2 {
                        out.c[i1 + i2][j1 + j2] += self.c[i1][j1] * o.c[i2][j2];
                    }
                }
            }
        }
        out
    }

    pub fn recip(&self) -> Result<Jet2, Error> {
        let v = self.value();
        if v.abs() < 1e-300 {
            return Err(Error::DomainError("division by zero at the base point".into()));
        }
        // 1/(v + e) = (1/v) sum_k (-e/v)^k, truncated.
        let coeffs = [1.0 / v, -1.0 / (v * v), 1.0 / (v * v * v), -1.0 / (v * v * v * v)];
        Ok(self.compose_at(v, &coeffs))
    }

    pub fn div(&self, o: &Jet2) -> Result<Jet2, Error> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn powi(&self, n: i32) -> Result<Jet2, Error> {
        let base = if n < 0 { self.recip()? } else { *self };
        let mut out = Jet2::one();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// Derivative jet with respect to x1. The top-order band of the result is
    /// unknown and set to zero; values remain exact through three nested
    /// applications.
    pub fn diff_x1(&self) -> Jet2 {
        let mut out = Jet2::zero();
        for i in 0..JET_ORDER {
            for j in 0..JET_ORDER - i {
                out.c[i][j] = self.c[i + 1][j] * (i + 1) as f64;
            }
        }
        out
    }

    pub fn diff_x2(&self) -> Jet2 {
        let mut out = Jet2::zero();
        for i in 0..JET_ORDER {
            for j in 0..JET_ORDER - i {
                out.c[i][j] = self.c[i][j + 1] * (j + 1) as f64;
            }
        }
        out
    }

    /// Compose a univariate Taylor series (value and first three derivatives
    /// at `u0`, already divided by factorials) with this jet.
    fn compose_at(&self, u0: f64, taylor: &[f64; 4]) -> Jet2 {
        let mut e = *self;
        e.c[0][0] -= u0;
        // Horner: t0 + e*(t1 + e*(t2 + e*t3))
        let mut acc = Jet2::constant(taylor[3]);
        for k in (0..3).rev() {
            acc = e.mul(&acc).add(&Jet2::constant(taylor[k]));
        }
        acc
    }

    pub fn apply(&self, f: JetFn) -> Result<Jet2, Error> {
        let u = self.value();
        let t: [f64; 4] = match f {
            JetFn::Exp => {
                let e = u.exp();
                [e, e, e / 2.0, e / 6.0]
            }
            JetFn::Sin => [u.sin(), u.cos(), -u.sin() / 2.0, -u.cos() / 6.0],
            JetFn::Cos => [u.cos(), -u.sin(), -u.cos() / 2.0, u.sin() / 6.0],
            JetFn::Sinh => [u.sinh(), u.cosh(), u.sinh() / 2.0, u.cosh() / 6.0],
            JetFn::Cosh => [u.cosh(), u.sinh(), u.cosh() / 2.0, u.sinh() / 6.0],
            JetFn::Tanh => {
                let t = u.tanh();
                let s = 1.0 - t * t; // sech^2
                let d1 = s;
                let d2 = -2.0 * t * s;
                let d3 = (6.0 * t * t - 2.0) * s;
                [t, d1, d2 / 2.0, d3 / 6.0]
            }
        };
        Ok(self.compose_at(u, &t))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JetFn {
    Tanh,
    Cosh,
    Sinh,
    Exp,
    Sin,
    Cos,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product::<f64>().max(1.0)
}
