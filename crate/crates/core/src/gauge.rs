//! Gauge actions on homogeneous connections: GL(2) basis changes on Type A,
//! shears on Type A and Type B, the coordinate flip, and torsion
//! normalization. All changes of variables used here are linear, so the
//! Christoffel symbols transform without inhomogeneous terms:
//! Gamma'_{ab}^c = (P^{-1})^c_k P^i_a P^j_b Gamma_{ij}^k
//! for the basis e_a = P^i_a d_i (P constant and invertible).

use num_rational::BigRational;

use crate::connection::{Connection, Kind};
use crate::error::Error;
use crate::scalar::{RadicalScalar, RatFn};
use crate::tensor::{Gamma, Mat2, Vec2};

/// Ring-with-division interface shared by the exact rational functions and
/// the radical scalars; addition is fallible for the latter.
pub trait GaugeScalar: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn add(&self, other: &Self) -> Result<Self, Error>;
    fn sub(&self, other: &Self) -> Result<Self, Error>;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div(&self, other: &Self) -> Result<Self, Error>;
    fn is_zero(&self) -> bool;
}

impl GaugeScalar for RatFn {
    fn zero() -> Self {
        RatFn::zero()
    }
    fn one() -> Self {
        RatFn::one()
    }
    fn from_rational(q: &BigRational) -> Self {
        RatFn::from_rational(q.clone())
    }
    fn add(&self, other: &Self) -> Result<Self, Error> {
        Ok(RatFn::add(self, other))
    }
    fn sub(&self, other: &Self) -> Result<Self, Error> {
        Ok(RatFn::sub(self, other))
    }
    fn mul(&self, other: &Self) -> Self {
        RatFn::mul(self, other)
    }
    fn neg(&self) -> Self {
        RatFn::neg(self)
    }
    fn div(&self, other: &Self) -> Result<Self, Error> {
        RatFn::div(self, other)
    }
    fn is_zero(&self) -> bool {
        RatFn::is_zero(self)
    }
}

impl GaugeScalar for RadicalScalar {
    fn zero() -> Self {
        RadicalScalar::zero()
    }
    fn one() -> Self {
        RadicalScalar::one()
    }
    fn from_rational(q: &BigRational) -> Self {
        RadicalScalar::from_rational(q.clone())
    }
    fn add(&self, other: &Self) -> Result<Self, Error> {
        self.checked_add(other)
    }
    fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.checked_sub(other)
    }
    fn mul(&self, other: &Self) -> Self {
        RadicalScalar::mul(self, other)
    }
    fn neg(&self) -> Self {
        RadicalScalar::neg(self)
    }
    fn div(&self, other: &Self) -> Result<Self, Error> {
        RadicalScalar::div(self, other)
    }
    fn is_zero(&self) -> bool {
        RadicalScalar::is_zero(self)
    }
}

pub fn det2<S: GaugeScalar>(p: &Mat2<S>) -> Result<S, Error> {
    p[0][0].mul(&p[1][1]).sub(&p[0][1].mul(&p[1][0]))
}

pub fn mat_inv<S: GaugeScalar>(p: &Mat2<S>) -> Result<Mat2<S>, Error> {
    let d = det2(p)?;
    if d.is_zero() {
        return Err(Error::SingularMatrix);
    }
    Ok([
        [p[1][1].div(&d)?, p[0][1].neg().div(&d)?],
        [p[1][0].neg().div(&d)?, p[0][0].div(&d)?],
    ])
}

pub fn mat_mul<S: GaugeScalar>(a: &Mat2<S>, b: &Mat2<S>) -> Result<Mat2<S>, Error> {
    let mut out = [[S::zero(), S::zero()], [S::zero(), S::zero()]];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]))?;
        }
    }
    Ok(out)
}

pub fn mat_vec<S: GaugeScalar>(a: &Mat2<S>, v: &Vec2<S>) -> Result<Vec2<S>, Error> {
    Ok([
        a[0][0].mul(&v[0]).add(&a[0][1].mul(&v[1]))?,
        a[1][0].mul(&v[0]).add(&a[1][1].mul(&v[1]))?,
    ])
}

/// Transform constant Christoffel symbols under the basis e_a = P^i_a d_i;
/// `p[i][a]` holds P^i_a (columns are the new basis vectors).
pub fn frame_change<S: GaugeScalar>(g: &Gamma<S>, p: &Mat2<S>) -> Result<Gamma<S>, Error> {
    let pinv = mat_inv(p)?;
    let mut out: Gamma<S> =
        std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| S::zero())));
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                let mut acc = S::zero();
                for i in 0..2 {
                    for j in 0..2 {
                        for k in 0..2 {
                            let term = pinv[c][k].mul(&p[i][a]).mul(&p[j][b]).mul(&g[i][j][k]);
                            acc = acc.add(&term)?;
                        }
                    }
                }
                out[a][b][c] = acc;
            }
        }
    }
    Ok(out)
}

/// How the torsion vector transforms under the same basis change:
/// t' = det(P) P^{-1} t.
pub fn transform_torsion<S: GaugeScalar>(t: &Vec2<S>, p: &Mat2<S>) -> Result<Vec2<S>, Error> {
    let d = det2(p)?;
    let pinv = mat_inv(p)?;
    let v = mat_vec(&pinv, t)?;
    Ok([d.mul(&v[0]), d.mul(&v[1])])
}

/// The shear (y1, y2) = (x1, (x2 - b*x1)/a) as a basis matrix:
/// d_{y1} = d_{x1} + b d_{x2}, d_{y2} = a d_{x2}.
pub fn shear_matrix<S: GaugeScalar>(a: &S, b: &S) -> Mat2<S> {
    [[S::one(), S::zero()], [b.clone(), a.clone()]]
}

/// The coordinate flip x2 -> -x2.
pub fn flip_matrix<S: GaugeScalar>() -> Mat2<S> {
    [[S::one(), S::zero()], [S::zero(), S::one().neg()]]
}

/// One recorded step of a normalization witness.
#[derive(Clone, Debug)]
pub enum GaugeStep {
    Linear(Mat2<RadicalScalar>),
    Shear { a: RadicalScalar, b: BigRational },
    Flip,
}

impl GaugeStep {
    pub fn matrix(&self) -> Mat2<RadicalScalar> {
        match self {
            GaugeStep::Linear(m) => m.clone(),
            GaugeStep::Shear { a, b } => {
                shear_matrix(a, &RadicalScalar::from_rational(b.clone()))
            }
            GaugeStep::Flip => flip_matrix(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            GaugeStep::Linear(m) => format!(
                "linear [[{}, {}], [{}, {}]]",
                m[0][0], m[0][1], m[1][0], m[1][1]
            ),
            GaugeStep::Shear { a, b } => format!("shear a = {}, b = {}", a, b),
            GaugeStep::Flip => "flip x2 -> -x2".to_string(),
        }
    }
}

/// Ordered list of gauge steps mapping an input connection to a normal form.
#[derive(Clone, Debug, Default)]
pub struct GaugeChain {
    pub steps: Vec<GaugeStep>,
}

impl GaugeChain {
    pub fn new() -> Self {
        GaugeChain::default()
    }

    pub fn push(&mut self, step: GaugeStep) {
        self.steps.push(step);
    }

    pub fn push_shear(&mut self, a: RadicalScalar, b: BigRational) {
        // Drop identity steps so witnesses stay readable.
        if !(a.eq_i64(1) && b == BigRational::from_integer(0.into())) {
            self.push(GaugeStep::Shear { a, b });
        }
    }

    /// Product of the step matrices, applied left to right.
    pub fn matrix(&self) -> Result<Mat2<RadicalScalar>, Error> {
        let mut acc: Mat2<RadicalScalar> = [
            [RadicalScalar::one(), RadicalScalar::zero()],
            [RadicalScalar::zero(), RadicalScalar::one()],
        ];
        for step in &self.steps {
            acc = mat_mul(&acc, &step.matrix())?;
        }
        Ok(acc)
    }

    /// Apply every step in order to constant symbols.
    pub fn apply(&self, g: &Gamma<RadicalScalar>) -> Result<Gamma<RadicalScalar>, Error> {
        let mut acc = g.clone();
        for step in &self.steps {
            acc = frame_change(&acc, &step.matrix())?;
        }
        Ok(acc)
    }
}

fn require_kind(conn: &Connection, kind: Kind) -> Result<(), Error> {
    if conn.kind == kind {
        Ok(())
    } else {
        Err(Error::NotTypeA)
    }
}

/// GL(2) action on a Type A connection, with exact rational entries.
pub fn apply_linear(conn: &Connection, p: &Mat2<RatFn>) -> Result<Connection, Error> {
    require_kind(conn, Kind::TypeA)?;
    let g = conn.exact_gamma()?;
    let out = frame_change(&g, p)?;
    Ok(Connection::from_exact(Kind::TypeA, conn.params.clone(), &out))
}

/// Shear action, valid on Type A symbols and Type B tilde symbols alike
/// since x1 is untouched.
pub fn apply_shear(conn: &Connection, a: &RatFn, b: &RatFn) -> Result<Connection, Error> {
    if a.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let p = shear_matrix(a, b);
    match conn.kind {
        Kind::TypeA => apply_linear(conn, &p),
        Kind::TypeB => {
            let g = conn.tilde_gamma()?;
            let out = frame_change(&g, &p)?;
            let x1 = RatFn::var(0);
            let scaled: Gamma<RatFn> = std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    std::array::from_fn(|k| out[i][j][k].div(&x1).expect("x1 != 0"))
                })
            });
            Ok(Connection::from_exact(Kind::TypeB, conn.params.clone(), &scaled))
        }
        Kind::General => Err(Error::NotHomogeneousModel),
    }
}

/// The coordinate flip x2 -> -x2 on either homogeneous type.
pub fn apply_flip(conn: &Connection) -> Result<Connection, Error> {
    apply_shear_like(conn, &flip_matrix())
}

fn apply_shear_like(conn: &Connection, p: &Mat2<RatFn>) -> Result<Connection, Error> {
    match conn.kind {
        Kind::TypeA => apply_linear(conn, p),
        Kind::TypeB => {
            let g = conn.tilde_gamma()?;
            let out = frame_change(&g, p)?;
            let x1 = RatFn::var(0);
            let scaled: Gamma<RatFn> = std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    std::array::from_fn(|k| out[i][j][k].div(&x1).expect("x1 != 0"))
                })
            });
            Ok(Connection::from_exact(Kind::TypeB, conn.params.clone(), &scaled))
        }
        Kind::General => Err(Error::NotHomogeneousModel),
    }
}

/// Deterministic gauge bringing the torsion of a Type A connection to
/// (dx1 ^ dx2) (x) d_{x2}: second column of P is t itself, first column the
/// standard basis vector making the larger determinant, rescaled so
/// det(P) = 1. Then t' = det(P) P^{-1} t = (0, 1).
pub fn normalize_torsion_matrix(
    t: &Vec2<RadicalScalar>,
) -> Result<Mat2<RadicalScalar>, Error> {
    if t[0].is_zero() && t[1].is_zero() {
        return Err(Error::ZeroTorsion);
    }
    // det [e1, t] = t^2, det [e2, t] = -t^1; pick the larger magnitude.
    // The squares are positive rationals, so no abs is needed.
    let (e, d) = if t[1].square() >= t[0].square() {
        ([RadicalScalar::one(), RadicalScalar::zero()], t[1].clone())
    } else {
        ([RadicalScalar::zero(), RadicalScalar::one()], t[0].neg())
    };
    Ok([
        [e[0].div(&d)?, t[0].clone()],
        [e[1].div(&d)?, t[1].clone()],
    ])
}
