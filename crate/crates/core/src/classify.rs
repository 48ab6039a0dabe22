//! Decision procedures: Ricci signature, the normal-form classifiers for
//! homogeneous connections with torsion, and the dimension of the space of
//! parallel abstract torsion tensors.
//!
//! The classifier is a retraction onto the catalog: it normalizes the input
//! by an explicit gauge chain and reads the family parameters off the
//! normalized symbols. Every branch condition is an exact equality test on
//! radical scalars, so there are no ties.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::catalog::Theorem;
use crate::connection::{Connection, ExactTensors, Kind};
use crate::error::Error;
use crate::gauge::{frame_change, normalize_torsion_matrix, GaugeChain, GaugeStep};
use crate::scalar::{RadicalScalar, RatFn};
use crate::tensor::{self, Gamma, Mat2, Vec2};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignatureClass {
    Zero,
    PositiveSemidefinite,
    NegativeSemidefinite,
    PositiveDefinite,
    NegativeDefinite,
    Indefinite,
}

impl SignatureClass {
    pub fn name(self) -> &'static str {
        match self {
            SignatureClass::Zero => "zero",
            SignatureClass::PositiveSemidefinite => "positive-semidefinite",
            SignatureClass::NegativeSemidefinite => "negative-semidefinite",
            SignatureClass::PositiveDefinite => "positive-definite",
            SignatureClass::NegativeDefinite => "negative-definite",
            SignatureClass::Indefinite => "indefinite",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignatureInfo {
    pub rank: u8,
    pub class: SignatureClass,
}

fn rs_i(n: i64) -> RadicalScalar {
    RadicalScalar::from_i64(n)
}

fn rq(n: i64, d: i64) -> RadicalScalar {
    RadicalScalar::from_ratio(n, d)
}

/// Exact equality; radically incompatible values are simply unequal.
fn rs_eq(a: &RadicalScalar, b: &RadicalScalar) -> bool {
    a.checked_sub(b).map(|d| d.is_zero()).unwrap_or(false)
}

fn half_of(x: &RadicalScalar) -> RadicalScalar {
    x.mul(&rq(1, 2))
}

fn torsion_rad(g: &Gamma<RadicalScalar>) -> Result<Vec2<RadicalScalar>, Error> {
    Ok([
        half_of(&g[0][1][0].checked_sub(&g[1][0][0])?),
        half_of(&g[0][1][1].checked_sub(&g[1][0][1])?),
    ])
}

fn sym_rad(g: &Gamma<RadicalScalar>, i: usize, j: usize, k: usize) -> Result<RadicalScalar, Error> {
    Ok(half_of(&g[i][j][k].checked_add(&g[j][i][k])?))
}

/// Signature of a concrete symmetric Ricci tensor at the base point.
pub fn signature_of(rho: &Mat2<RadicalScalar>) -> Result<SignatureInfo, Error> {
    if !rs_eq(&rho[0][1], &rho[1][0]) {
        return Err(Error::NotSymmetric);
    }
    let det = rho[0][0]
        .mul(&rho[1][1])
        .checked_sub(&rho[0][1].mul(&rho[1][0]))?;
    let trace = rho[0][0].checked_add(&rho[1][1])?;
    let zero = rho.iter().flatten().all(RadicalScalar::is_zero);
    let (rank, class) = if zero {
        (0, SignatureClass::Zero)
    } else if det.is_positive() {
        if trace.is_positive() {
            (2, SignatureClass::PositiveDefinite)
        } else {
            (2, SignatureClass::NegativeDefinite)
        }
    } else if det.is_negative() {
        (2, SignatureClass::Indefinite)
    } else if trace.is_positive() {
        (1, SignatureClass::PositiveSemidefinite)
    } else if trace.is_negative() {
        (1, SignatureClass::NegativeSemidefinite)
    } else {
        // trace = det = 0 but rho != 0 contradicts symmetry of a real form
        return Err(Error::NotSymmetric);
    };
    Ok(SignatureInfo { rank, class })
}

#[derive(Clone, Debug)]
pub struct ParallelSpaceDim {
    pub dim: usize,
    /// Initial values at the base point spanning the solution space.
    pub basis: Vec<[BigRational; 2]>,
}

type QMat = [[BigRational; 2]; 2];

fn qmat_mul(a: &QMat, b: &QMat) -> QMat {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j])
    })
}

fn qmat_sub(a: &QMat, b: &QMat) -> QMat {
    std::array::from_fn(|i| std::array::from_fn(|j| &a[i][j] - &b[i][j]))
}

fn qmat_is_zero(a: &QMat) -> bool {
    a.iter().flatten().all(BigRational::is_zero)
}

fn qmat_vec(a: &QMat, v: &[BigRational; 2]) -> [BigRational; 2] {
    std::array::from_fn(|i| &a[i][0] * &v[0] + &a[i][1] * &v[1])
}

fn qdet(a: &QMat) -> BigRational {
    &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0]
}

fn cross(u: &[BigRational; 2], v: &[BigRational; 2]) -> BigRational {
    &u[0] * &v[1] - &u[1] * &v[0]
}

/// Dimension of the space of parallel abstract torsion tensors of a
/// homogeneous connection with constant symbols. The parallel equation
/// reduces to d_i S = A_i S with
/// (A_i)^k{}_m = -Gamma_{im}{}^k + (Gamma_{i1}{}^1 + Gamma_{i2}{}^2) delta^k_m,
/// so the answer is the largest subspace killed by [A_1, A_2] and invariant
/// under both A_i.
pub fn parallel_torsion_dim(conn: &Connection) -> Result<ParallelSpaceDim, Error> {
    if conn.kind != Kind::TypeA {
        return Err(Error::NotTypeA);
    }
    let g = conn.exact_gamma()?;
    let q = |f: &RatFn| -> Result<BigRational, Error> {
        f.as_rational()
            .ok_or_else(|| Error::ConstraintViolation("symbols must be constant".into()))
    };
    let mut a: [QMat; 2] =
        std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| BigRational::zero())));
    for i in 0..2 {
        let trace = q(&g[i][0][0].add(&g[i][1][1]))?;
        for k in 0..2 {
            for m in 0..2 {
                let mut v = -q(&g[i][m][k])?;
                if k == m {
                    v += &trace;
                }
                a[i][k][m] = v;
            }
        }
    }
    let comm = qmat_sub(&qmat_mul(&a[0], &a[1]), &qmat_mul(&a[1], &a[0]));
    let e1 = [BigRational::one(), BigRational::zero()];
    let e2 = [BigRational::zero(), BigRational::one()];
    if qmat_is_zero(&comm) {
        return Ok(ParallelSpaceDim { dim: 2, basis: vec![e1, e2] });
    }
    if !qdet(&comm).is_zero() {
        return Ok(ParallelSpaceDim { dim: 0, basis: vec![] });
    }
    // rank one: kernel is the line (b, -a) for a nonzero row (a, b)
    let row = if !comm[0][0].is_zero() || !comm[0][1].is_zero() {
        &comm[0]
    } else {
        &comm[1]
    };
    let v = [row[1].clone(), -row[0].clone()];
    let stable = (0..2).all(|i| cross(&qmat_vec(&a[i], &v), &v).is_zero());
    if stable {
        Ok(ParallelSpaceDim { dim: 1, basis: vec![v] })
    } else {
        Ok(ParallelSpaceDim { dim: 0, basis: vec![] })
    }
}

#[derive(Clone, Debug)]
pub struct ClassificationResult {
    pub theorem: Theorem,
    pub family: usize,
    pub params: BTreeMap<String, RadicalScalar>,
    pub signature: SignatureInfo,
    pub witness: GaugeChain,
}

/// Constant symbols of a homogeneous connection as radical scalars
/// (tilde symbols for Type B).
fn const_gamma(conn: &Connection) -> Result<Gamma<RadicalScalar>, Error> {
    let unbound = conn.params.unbound();
    if let Some(name) = unbound.first() {
        return Err(Error::UnboundParameter(name.clone()));
    }
    let g = match conn.kind {
        Kind::TypeA => conn.exact_gamma()?,
        Kind::TypeB => conn.tilde_gamma()?,
        Kind::General => return Err(Error::NotHomogeneousModel),
    };
    let mut out: Gamma<RadicalScalar> = std::array::from_fn(|_| {
        std::array::from_fn(|_| std::array::from_fn(|_| RadicalScalar::zero()))
    });
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let q = g[i][j][k].as_rational().ok_or_else(|| {
                    Error::ConstraintViolation("symbols must be constant".into())
                })?;
                out[i][j][k] = RadicalScalar::from_rational(q);
            }
        }
    }
    Ok(out)
}

/// Mutable normalization state: current symbols plus the recorded witness.
struct Norm {
    g: Gamma<RadicalScalar>,
    chain: GaugeChain,
}

impl Norm {
    fn new(g: Gamma<RadicalScalar>) -> Self {
        Norm { g, chain: GaugeChain::new() }
    }

    fn step(&mut self, step: GaugeStep) -> Result<(), Error> {
        self.g = frame_change(&self.g, &step.matrix())?;
        self.chain.push(step);
        Ok(())
    }

    fn linear(&mut self, m: Mat2<RadicalScalar>) -> Result<(), Error> {
        let id = rs_eq(&m[0][0], &rs_i(1))
            && m[0][1].is_zero()
            && m[1][0].is_zero()
            && rs_eq(&m[1][1], &rs_i(1));
        if id {
            return Ok(());
        }
        self.step(GaugeStep::Linear(m))
    }

    fn shear(&mut self, a: RadicalScalar, b: BigRational) -> Result<(), Error> {
        if a.eq_i64(1) && b.is_zero() {
            return Ok(());
        }
        self.step(GaugeStep::Shear { a, b })
    }

    fn flip(&mut self) -> Result<(), Error> {
        self.step(GaugeStep::Flip)
    }

    fn sym(&self, i: usize, j: usize, k: usize) -> Result<RadicalScalar, Error> {
        sym_rad(&self.g, i, j, k)
    }

    fn tor(&self) -> Result<Vec2<RadicalScalar>, Error> {
        torsion_rad(&self.g)
    }
}

fn as_q(x: &RadicalScalar) -> Result<BigRational, Error> {
    x.as_rational().ok_or_else(|| {
        Error::RadicalObstruction("a second incompatible radical would be required".into())
    })
}

fn bad_input() -> Error {
    Error::NotHomogeneousModel
}

type Classified = (usize, BTreeMap<String, RadicalScalar>, GaugeChain, Gamma<RadicalScalar>);

/// Theorem 2 branch for Type A: build the adapted frame constructively.
/// e1 is t rescaled so nabla_{e1} e1 = e1, e2 spans the kernel of
/// v -> nabla_v e1, then e2 is rescaled to pin the remaining symbol.
fn classify_thm2_a(gc: &Gamma<RadicalScalar>) -> Result<Classified, Error> {
    let t = torsion_rad(gc)?;
    // w = nabla_t t
    let mut w = [RadicalScalar::zero(), RadicalScalar::zero()];
    for k in 0..2 {
        for i in 0..2 {
            for m in 0..2 {
                w[k] = w[k].checked_add(&t[i].mul(&t[m]).mul(&gc[i][m][k]))?;
            }
        }
    }
    let knz = if !t[0].is_zero() { 0 } else { 1 };
    let kappa = w[knz].div(&t[knz])?;
    if kappa.is_zero() {
        return Err(bad_input());
    }
    for k in 0..2 {
        if !rs_eq(&w[k], &kappa.mul(&t[k])) {
            return Err(bad_input());
        }
    }
    let e1 = [t[0].div(&kappa)?, t[1].div(&kappa)?];
    // m[k][i] = Gamma_{im}^k e1^m, the matrix of v -> nabla_v e1
    let mut m: Mat2<RadicalScalar> =
        std::array::from_fn(|_| std::array::from_fn(|_| RadicalScalar::zero()));
    for k in 0..2 {
        for i in 0..2 {
            for mm in 0..2 {
                m[k][i] = m[k][i].checked_add(&gc[i][mm][k].mul(&e1[mm]))?;
            }
        }
    }
    let mdet = m[0][0].mul(&m[1][1]).checked_sub(&m[0][1].mul(&m[1][0]))?;
    let e2 = if m.iter().flatten().all(RadicalScalar::is_zero) {
        // nabla e1 = 0; any independent direction will do
        if e1[0].square() >= e1[1].square() {
            [RadicalScalar::zero(), rs_i(1)]
        } else {
            [rs_i(1), RadicalScalar::zero()]
        }
    } else if !mdet.is_zero() {
        return Err(bad_input());
    } else {
        let row = if !m[0][0].is_zero() || !m[0][1].is_zero() { &m[0] } else { &m[1] };
        [row[1].clone(), row[0].neg()]
    };
    let mut n = Norm::new(gc.clone());
    let p = [[e1[0].clone(), e2[0].clone()], [e1[1].clone(), e2[1].clone()]];
    n.linear(p)?;
    // nabla_{e1} e1 = e1 and nabla_{e2} e1 = 0 by construction
    let ok = rs_eq(&n.g[0][0][0], &rs_i(1))
        && n.g[0][0][1].is_zero()
        && n.g[1][0][0].is_zero()
        && n.g[1][0][1].is_zero()
        && n.g[1][1][1].is_zero()
        && n.g[0][1][1].is_zero();
    if !ok {
        return Err(bad_input());
    }
    let nu = n.g[1][1][0].clone();
    if nu.is_zero() {
        let g12 = n.g[0][1][0].clone();
        if g12.is_zero() {
            return Err(bad_input());
        }
        let c = rs_i(2).div(&g12)?;
        n.linear([[rs_i(1), RadicalScalar::zero()], [RadicalScalar::zero(), c]])?;
        let out = n.g.clone();
        Ok((1, BTreeMap::new(), n.chain, out))
    } else {
        let mu = rs_i(1).div(&RadicalScalar::sqrt_of(&as_q(&nu.abs())?)?)?;
        n.linear([[rs_i(1), RadicalScalar::zero()], [RadicalScalar::zero(), mu]])?;
        let mut u = half_of(&n.g[0][1][0]);
        if u.is_negative() {
            n.flip()?;
            u = half_of(&n.g[0][1][0]);
        }
        let v = if nu.is_positive() { rs_i(1) } else { rs_i(-1) };
        let mut params = BTreeMap::new();
        params.insert("u".to_string(), u.clone());
        params.insert("u_squared".to_string(), RadicalScalar::from_rational(u.square()));
        params.insert("v".to_string(), v);
        let out = n.g.clone();
        Ok((2, params, n.chain, out))
    }
}

/// Theorem 2 branch by invariants alone (used for Type B inputs, where the
/// gauge group fixes x1 and no normalizing frame exists).
fn classify_thm2_invariant(
    tensors: &ExactTensors,
    signature: &SignatureInfo,
) -> Result<(usize, BTreeMap<String, RadicalScalar>), Error> {
    if tensors.ricci.iter().flatten().all(RatFn::is_zero) {
        return Ok((1, BTreeMap::new()));
    }
    let v: i64 = match signature.class {
        SignatureClass::PositiveSemidefinite => 1,
        SignatureClass::NegativeSemidefinite => -1,
        _ => return Err(bad_input()),
    };
    // rho of the symmetrized connection is a constant multiple of rho;
    // the multiple is (v - u^2)/v, which pins u.
    let g0 = tensor::symmetrize(&tensors.gamma);
    let rho0 = tensor::ricci_of(&g0);
    let (j, k) = (0..2)
        .flat_map(|j| (0..2).map(move |k| (j, k)))
        .find(|&(j, k)| !tensors.ricci[j][k].is_zero())
        .unwrap();
    let lambda = rho0[j][k].div(&tensors.ricci[j][k])?;
    let lam = lambda.as_rational().ok_or_else(bad_input)?;
    for j in 0..2 {
        for k in 0..2 {
            if rho0[j][k] != lambda.mul(&tensors.ricci[j][k]) {
                return Err(bad_input());
            }
        }
    }
    let u2 = BigRational::from_integer(v.into()) * (BigRational::one() - lam);
    if !u2.is_positive() {
        return Err(bad_input());
    }
    let u = RadicalScalar::sqrt_of(&u2)?;
    let mut params = BTreeMap::new();
    params.insert("u".to_string(), u);
    params.insert("u_squared".to_string(), RadicalScalar::from_rational(u2));
    params.insert("v".to_string(), rs_i(v));
    Ok((2, params))
}

/// The Type A case tree, entered with non-parallel torsion.
fn classify_thm4(gc: &Gamma<RadicalScalar>) -> Result<Classified, Error> {
    let t = torsion_rad(gc)?;
    let p0 = normalize_torsion_matrix(&t)?;
    let mut n = Norm::new(gc.clone());
    n.linear(p0)?;

    let a22_1 = n.sym(1, 1, 0)?;
    let a22_2 = n.sym(1, 1, 1)?;
    let mut params = BTreeMap::new();
    let family;
    if a22_1.is_zero() && !a22_2.is_zero() {
        n.shear(rs_i(1).div(&a22_2)?, BigRational::zero())?;
        let a12_1 = n.sym(0, 1, 0)?;
        if a12_1.is_zero() {
            let gamma = n.sym(0, 0, 0)?;
            if gamma.is_zero() {
                return Err(bad_input());
            }
            let b = -as_q(&n.sym(0, 1, 1)?)?;
            n.shear(rs_i(1), b)?;
            params.insert("gamma".to_string(), gamma);
            family = 1;
        } else if rs_eq(&a12_1, &rs_i(1)) {
            let b = -as_q(&half_of(&n.sym(0, 0, 0)?))?;
            n.shear(rs_i(1), b)?;
            params.insert("alpha".to_string(), n.sym(0, 0, 1)?);
            family = 2;
        } else {
            return Err(bad_input());
        }
    } else if a22_1.is_zero() && a22_2.is_zero() {
        if !n.sym(0, 1, 0)?.is_zero() {
            return Err(bad_input());
        }
        let a11_1 = n.sym(0, 0, 0)?;
        let a11_2 = n.sym(0, 0, 1)?;
        let a12_2 = n.sym(0, 1, 1)?;
        if a11_1.is_zero() {
            return Err(bad_input());
        }
        if rs_eq(&a12_2, &a11_1.checked_sub(&rs_i(1))?) {
            if !rs_eq(&a11_1, &rs_i(2)) {
                let den = a11_1.checked_sub(&rs_i(2))?;
                n.shear(rs_i(1), -as_q(&a11_2.div(&den)?)?)?;
                params.insert("gamma".to_string(), a11_1);
                family = 3;
            } else if !a11_2.is_zero() {
                n.shear(a11_2, BigRational::zero())?;
                family = 4;
            } else {
                params.insert("gamma".to_string(), rs_i(2));
                family = 3;
            }
        } else if rs_eq(&a12_2, &rs_i(1)) {
            let den = rs_i(2).checked_sub(&a11_1)?;
            n.shear(rs_i(1), -as_q(&a11_2.div(&den)?)?)?;
            params.insert("beta".to_string(), a11_1);
            family = 5;
        } else {
            return Err(bad_input());
        }
    } else {
        let b = -as_q(&n.sym(0, 1, 0)?.div(&a22_1)?)?;
        let a = rs_i(1).div(&RadicalScalar::sqrt_of(&as_q(&a22_1.abs())?)?)?;
        n.shear(a, b)?;
        let eps = n.sym(1, 1, 0)?;
        let omega = n.sym(0, 0, 0)?;
        let mut eta = n.sym(1, 1, 1)?;
        if eta.is_negative() {
            n.flip()?;
            eta = n.sym(1, 1, 1)?;
        }
        params.insert("omega".to_string(), omega);
        params.insert("eta".to_string(), eta);
        params.insert("eps".to_string(), eps);
        family = 6;
    }
    let out = n.g.clone();
    Ok((family, params, n.chain, out))
}

/// The Type B case tree on the tilde symbols, entered with non-parallel
/// torsion; the gauge group only shears, so the torsion is not normalized
/// first.
fn classify_thm5(gc: &Gamma<RadicalScalar>) -> Result<Classified, Error> {
    let t0 = torsion_rad(gc)?;
    let s12_1 = sym_rad(gc, 0, 1, 0)?;
    let s22_2 = sym_rad(gc, 1, 1, 1)?;
    // the symmetry relation tying the mixed symbol to the torsion
    if !rs_eq(&s12_1, &t0[0].checked_sub(&s22_2)?) {
        return Err(Error::NotSymmetric);
    }
    let mut n = Norm::new(gc.clone());
    let a22_1 = n.sym(1, 1, 0)?;
    let a22_2 = n.sym(1, 1, 1)?;
    let mut params = BTreeMap::new();
    let family;
    if a22_1.is_zero() && !a22_2.is_zero() {
        n.shear(rs_i(1).div(&a22_2)?, BigRational::zero())?;
        let t = n.tor()?;
        if !rs_eq(&t[0], &rq(1, 2)) {
            return Err(bad_input());
        }
        let b = -as_q(&n.sym(0, 1, 1)?.checked_add(&t[1])?)?;
        n.shear(rs_i(1), b)?;
        params.insert("xi".to_string(), n.g[0][0][1].clone());
        family = 1;
    } else if a22_1.is_zero() && a22_2.is_zero() {
        let t = n.tor()?;
        let a12_2 = n.sym(0, 1, 1)?;
        if !rs_eq(&a12_2, &t[1]) {
            // Case 2.1: the mixed symbol disagrees with the torsion
            if !t[0].is_zero() {
                return Err(bad_input());
            }
            let a11_1 = n.sym(0, 0, 0)?;
            let a11_2 = n.sym(0, 0, 1)?;
            let den = rs_i(2).mul(&a12_2).checked_sub(&a11_1)?;
            if a11_2.is_zero() || !den.is_zero() {
                if !a11_2.is_zero() {
                    n.shear(rs_i(1), -as_q(&a11_2.div(&den)?)?)?;
                }
                params.insert("eta".to_string(), a11_1);
                params.insert("delta".to_string(), t[1].clone());
                family = 2;
            } else {
                n.shear(a11_2, BigRational::zero())?;
                params.insert("beta".to_string(), t[1].clone());
                family = 3;
            }
        } else {
            // Case 2.2: A12^2 agrees with the torsion
            let a11_1 = n.sym(0, 0, 0)?;
            let a11_2 = n.sym(0, 0, 1)?;
            if !t[0].is_zero() {
                let two_t1 = rs_i(2).mul(&t[0]);
                let a = rs_i(1).div(&two_t1)?;
                let b = -as_q(&a11_1.div(&two_t1)?)?;
                n.shear(a, b)?;
                let t = n.tor()?;
                params.insert("xi".to_string(), n.sym(0, 0, 1)?);
                params.insert("beta".to_string(), t[1].clone());
                family = 4;
            } else {
                let den = rs_i(2).mul(&t[1]).checked_sub(&a11_1)?;
                if a11_2.is_zero() || !den.is_zero() {
                    if !a11_2.is_zero() {
                        n.shear(rs_i(1), -as_q(&a11_2.div(&den)?)?)?;
                    }
                    params.insert("xi".to_string(), a11_1);
                    params.insert("beta".to_string(), t[1].clone());
                    family = 5;
                } else {
                    n.shear(a11_2, BigRational::zero())?;
                    params.insert("beta".to_string(), t[1].clone());
                    family = 6;
                }
            }
        }
    } else {
        // Case 3: A22^1 survives and is scaled to +-1
        let b = as_q(&a22_2.div(&a22_1)?)?;
        let a = rs_i(1).div(&RadicalScalar::sqrt_of(&as_q(&a22_1.abs())?)?)?;
        n.shear(a, b)?;
        let eps = n.sym(1, 1, 0)?;
        let t = n.tor()?;
        let a12_2 = n.sym(0, 1, 1)?;
        let a11_1 = n.sym(0, 0, 0)?;
        if rs_eq(&a12_2, &t[1]) {
            if rs_eq(&t[1], &rq(-1, 2)) {
                family = 7;
                params.insert("xi".to_string(), a11_1);
            } else {
                if !rs_eq(&a11_1, &rs_i(2).mul(&t[1]).checked_add(&rs_i(1))?) {
                    return Err(bad_input());
                }
                family = 8;
                params.insert("gamma".to_string(), t[1].clone());
            }
        } else if rs_eq(&a12_2, &a11_1.checked_sub(&t[1])?) {
            if !rs_eq(&a11_1, &rs_i(-1)) {
                return Err(bad_input());
            }
            family = 9;
            params.insert("gamma".to_string(), t[1].clone());
        } else {
            return Err(bad_input());
        }
        let mut alpha = n.tor()?[0].clone();
        if alpha.is_negative() {
            n.flip()?;
            alpha = n.tor()?[0].clone();
        }
        params.insert("alpha".to_string(), alpha);
        params.insert("eps".to_string(), eps);
    }
    let out = n.g.clone();
    Ok((family, params, n.chain, out))
}

/// Normal-form symbols of a family (tilde symbols for Theorem 5) built from
/// classified parameters.
fn family_gamma(
    theorem: Theorem,
    family: usize,
    params: &BTreeMap<String, RadicalScalar>,
) -> Result<Gamma<RadicalScalar>, Error> {
    let p = |name: &str| -> Result<RadicalScalar, Error> {
        params
            .get(name)
            .cloned()
            .ok_or_else(|| Error::Internal(format!("missing parameter `{}`", name)))
    };
    let mut g: Gamma<RadicalScalar> = std::array::from_fn(|_| {
        std::array::from_fn(|_| std::array::from_fn(|_| RadicalScalar::zero()))
    });
    match (theorem, family) {
        (Theorem::Thm2, 1) => {
            g[0][0][0] = rs_i(1);
            g[0][1][0] = rs_i(2);
        }
        (Theorem::Thm2, 2) => {
            g[0][0][0] = rs_i(1);
            g[0][1][0] = rs_i(2).mul(&p("u")?);
            g[1][1][0] = p("v")?;
        }
        (Theorem::Thm4, 1) => {
            let gamma = p("gamma")?;
            g[0][0][0] = gamma.clone();
            g[0][0][1] = gamma.checked_sub(&rs_i(1))?;
            g[0][1][1] = rs_i(1);
            g[1][0][1] = rs_i(-1);
            g[1][1][1] = rs_i(1);
        }
        (Theorem::Thm4, 2) => {
            g[0][0][1] = p("alpha")?;
            g[0][1][0] = rs_i(1);
            g[0][1][1] = rs_i(2);
            g[1][0][0] = rs_i(1);
            g[1][1][1] = rs_i(1);
        }
        (Theorem::Thm4, 3) => {
            let gamma = p("gamma")?;
            g[0][0][0] = gamma.clone();
            g[0][1][1] = gamma.clone();
            g[1][0][1] = gamma.checked_sub(&rs_i(2))?;
        }
        (Theorem::Thm4, 4) => {
            g[0][0][0] = rs_i(2);
            g[0][0][1] = rs_i(1);
            g[0][1][1] = rs_i(2);
        }
        (Theorem::Thm4, 5) => {
            g[0][0][0] = p("beta")?;
            g[0][1][1] = rs_i(2);
        }
        (Theorem::Thm4, 6) => {
            let omega = p("omega")?;
            g[0][0][0] = omega.clone();
            g[0][1][1] = omega.clone();
            g[1][0][1] = omega.checked_sub(&rs_i(2))?;
            g[1][1][0] = p("eps")?;
            g[1][1][1] = p("eta")?;
        }
        (Theorem::Thm5, 1) => {
            let xi = p("xi")?;
            g[0][0][0] = rs_i(-2);
            g[0][0][1] = xi.clone();
            g[1][0][0] = rs_i(-1);
            g[1][0][1] = xi;
            g[1][1][1] = rs_i(1);
        }
        (Theorem::Thm5, 2) => {
            let eta = p("eta")?;
            let delta = p("delta")?;
            g[0][0][0] = eta.clone();
            g[0][1][1] = eta.checked_add(&rs_i(1))?;
            g[1][0][1] = eta
                .checked_add(&rs_i(1))?
                .checked_sub(&rs_i(2).mul(&delta))?;
        }
        (Theorem::Thm5, 3) => {
            let beta = p("beta")?;
            g[0][0][0] = rs_i(2).mul(&beta).checked_sub(&rs_i(2))?;
            g[0][0][1] = rs_i(1);
            g[0][1][1] = rs_i(2).mul(&beta).checked_sub(&rs_i(1))?;
            g[1][0][1] = rs_i(-1);
        }
        (Theorem::Thm5, 4) => {
            g[0][0][1] = p("xi")?;
            g[0][1][0] = rs_i(1);
            g[0][1][1] = rs_i(2).mul(&p("beta")?);
        }
        (Theorem::Thm5, 5) => {
            g[0][0][0] = p("xi")?;
            g[0][1][1] = rs_i(2).mul(&p("beta")?);
        }
        (Theorem::Thm5, 6) => {
            let beta = p("beta")?;
            g[0][0][0] = rs_i(2).mul(&beta);
            g[0][0][1] = rs_i(1);
            g[0][1][1] = rs_i(2).mul(&beta);
        }
        (Theorem::Thm5, 7) => {
            g[0][0][0] = p("xi")?;
            g[0][1][0] = rs_i(2).mul(&p("alpha")?);
            g[0][1][1] = rs_i(-1);
            g[1][1][0] = p("eps")?;
        }
        (Theorem::Thm5, 8) => {
            let gamma = p("gamma")?;
            g[0][0][0] = rs_i(2).mul(&gamma).checked_add(&rs_i(1))?;
            g[0][1][0] = rs_i(2).mul(&p("alpha")?);
            g[0][1][1] = rs_i(2).mul(&gamma);
            g[1][1][0] = p("eps")?;
        }
        (Theorem::Thm5, 9) => {
            let gamma = p("gamma")?;
            let alpha = p("alpha")?;
            let eps = p("eps")?;
            let two_g1 = rs_i(2).mul(&gamma).checked_add(&rs_i(1))?;
            g[0][0][0] = rs_i(-1);
            g[0][0][1] = rs_i(-2).mul(&eps).mul(&alpha).mul(&two_g1);
            g[0][1][0] = rs_i(2).mul(&alpha);
            g[0][1][1] = rs_i(-1);
            g[1][0][1] = two_g1.neg();
            g[1][1][0] = eps;
        }
        _ => return Err(Error::Internal(format!("unknown family {:?} {}", theorem, family))),
    }
    Ok(g)
}

fn check_params(
    theorem: Theorem,
    family: usize,
    params: &BTreeMap<String, RadicalScalar>,
) -> Result<(), Error> {
    let violated = |what: &str| Err(Error::Internal(format!("constraint violated: {}", what)));
    let p = |name: &str| params.get(name).cloned().unwrap_or_else(RadicalScalar::zero);
    let is_sign = |x: &RadicalScalar| x.eq_i64(1) || x.eq_i64(-1);
    match (theorem, family) {
        (Theorem::Thm2, 2) => {
            if !p("u").is_positive() {
                return violated("u > 0");
            }
            if !is_sign(&p("v")) {
                return violated("v = +-1");
            }
        }
        (Theorem::Thm4, 1) | (Theorem::Thm4, 3) => {
            if p("gamma").is_zero() {
                return violated("gamma != 0");
            }
        }
        (Theorem::Thm4, 5) => {
            let beta = p("beta");
            if beta.is_zero() || beta.eq_i64(2) {
                return violated("beta outside {0, 2}");
            }
        }
        (Theorem::Thm4, 6) => {
            if p("eta").is_negative() {
                return violated("eta >= 0");
            }
            if !is_sign(&p("eps")) {
                return violated("eps = +-1");
            }
        }
        (Theorem::Thm5, 2) => {
            let lhs = p("eta").checked_add(&rs_i(1))?;
            if rs_eq(&lhs, &rs_i(2).mul(&p("delta"))) {
                return violated("eta + 1 != 2 delta");
            }
        }
        (Theorem::Thm5, 7) => {
            if p("alpha").is_negative() {
                return violated("alpha >= 0");
            }
            if !is_sign(&p("eps")) {
                return violated("eps = +-1");
            }
        }
        (Theorem::Thm5, 8) | (Theorem::Thm5, 9) => {
            if p("alpha").is_negative() {
                return violated("alpha >= 0");
            }
            if rs_eq(&p("gamma"), &rq(-1, 2)) {
                return violated("gamma != -1/2");
            }
            if !is_sign(&p("eps")) {
                return violated("eps = +-1");
            }
        }
        _ => {}
    }
    Ok(())
}

/// Classify a homogeneous connection into the normal-form catalog.
pub fn classify(conn: &Connection) -> Result<ClassificationResult, Error> {
    if conn.kind == Kind::General {
        return Err(Error::NotHomogeneousModel);
    }
    let gc = const_gamma(conn)?;
    let tensors = ExactTensors::of(conn)?;
    if tensors.torsion_is_zero() {
        return Err(Error::TorsionFree);
    }
    if !tensors.ricci_is_parallel() {
        return Err(Error::NotSymmetric);
    }
    let one = BigRational::one();
    let pt = [one.clone(), one];
    let mut rho_pt: Mat2<RadicalScalar> =
        std::array::from_fn(|_| std::array::from_fn(|_| RadicalScalar::zero()));
    for j in 0..2 {
        for k in 0..2 {
            rho_pt[j][k] = RadicalScalar::from_rational(tensors.ricci[j][k].eval(&pt)?);
        }
    }
    let signature = signature_of(&rho_pt)?;

    let (theorem, family, params, witness, achieved) = if tensors.torsion_is_parallel() {
        match conn.kind {
            Kind::TypeA => {
                let (family, mut params, chain, achieved) = classify_thm2_a(&gc)?;
                // cross-check u against the gauge-invariant recovery
                let (fam_inv, params_inv) = classify_thm2_invariant(&tensors, &signature)?;
                if fam_inv != family {
                    return Err(Error::Internal("family mismatch in the parallel branch".into()));
                }
                if family == 2 {
                    let u = params.get("u").unwrap();
                    let u_inv = params_inv.get("u").unwrap();
                    if !rs_eq(u, u_inv) {
                        return Err(Error::Internal("u mismatch in the parallel branch".into()));
                    }
                }
                params.extend(params_inv);
                (Theorem::Thm2, family, params, chain, Some(achieved))
            }
            Kind::TypeB => {
                let (family, params) = classify_thm2_invariant(&tensors, &signature)?;
                (Theorem::Thm2, family, params, GaugeChain::new(), None)
            }
            Kind::General => unreachable!(),
        }
    } else {
        match conn.kind {
            Kind::TypeA => {
                let (family, params, chain, achieved) = classify_thm4(&gc)?;
                (Theorem::Thm4, family, params, chain, Some(achieved))
            }
            Kind::TypeB => {
                let (family, params, chain, achieved) = classify_thm5(&gc)?;
                (Theorem::Thm5, family, params, chain, Some(achieved))
            }
            Kind::General => unreachable!(),
        }
    };

    check_params(theorem, family, &params)?;
    if let Some(achieved) = achieved {
        let want = family_gamma(theorem, family, &params)?;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    if !rs_eq(&achieved[i][j][k], &want[i][j][k]) {
                        return Err(Error::Internal(format!(
                            "normalization mismatch at Gamma {} {} {}: got {}, want {}",
                            i + 1,
                            j + 1,
                            k + 1,
                            achieved[i][j][k],
                            want[i][j][k]
                        )));
                    }
                }
            }
        }
    }

    Ok(ClassificationResult { theorem, family, params, signature, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::connection::Backend;
    use crate::expr::{parse_expr, Params};
    use crate::gauge::{apply_flip, apply_shear};

    fn qi(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn conn_for(t: Theorem, f: usize, binds: &[(&str, i64)]) -> Connection {
        let spec = catalog::find(t, f).unwrap();
        let b: Vec<(String, BigRational)> =
            binds.iter().map(|(n, v)| (n.to_string(), qi(*v))).collect();
        catalog::make(spec, &b).unwrap()
    }

    #[test]
    fn signature_examples() {
        let z = RadicalScalar::zero;
        let sig = signature_of(&[[rs_i(1), z()], [z(), rs_i(1)]]).unwrap();
        assert_eq!(sig.rank, 2);
        assert_eq!(sig.class, SignatureClass::PositiveDefinite);
        let sig = signature_of(&[[z(), rs_i(1)], [rs_i(1), z()]]).unwrap();
        assert_eq!(sig.class, SignatureClass::Indefinite);
        let sig = signature_of(&[[z(), z()], [z(), rs_i(-1)]]).unwrap();
        assert_eq!(sig.rank, 1);
        assert_eq!(sig.class, SignatureClass::NegativeSemidefinite);
        let sig = signature_of(&[[z(), z()], [z(), z()]]).unwrap();
        assert_eq!(sig.class, SignatureClass::Zero);
        assert!(matches!(
            signature_of(&[[z(), rs_i(1)], [rs_i(2), z()]]),
            Err(Error::NotSymmetric)
        ));
    }

    fn muv(u: i64, v: i64) -> Connection {
        conn_for(Theorem::Muv, 1, &[("u", u), ("v", v)])
    }

    #[test]
    fn parallel_dim_examples() {
        assert_eq!(parallel_torsion_dim(&muv(1, 0)).unwrap().dim, 2);
        let p = parallel_torsion_dim(&muv(1, 1)).unwrap();
        assert_eq!(p.dim, 1);
        assert_eq!(p.basis.len(), 1);
        let zero = Connection::new(Kind::TypeA, Backend::Exact, Params::new());
        assert_eq!(parallel_torsion_dim(&zero).unwrap().dim, 2);
    }

    #[test]
    fn classify_m21() {
        let r = classify(&muv(2, 1)).unwrap();
        assert_eq!(r.theorem, Theorem::Thm2);
        assert_eq!(r.family, 2);
        assert!(r.params["u"].eq_i64(2));
        assert!(r.params["u_squared"].eq_i64(4));
        assert!(r.params["v"].eq_i64(1));
        assert_eq!(r.signature.class, SignatureClass::PositiveSemidefinite);
    }

    #[test]
    fn classify_flat_family() {
        let r = classify(&conn_for(Theorem::Thm2, 1, &[])).unwrap();
        assert_eq!((r.theorem, r.family), (Theorem::Thm2, 1));
        assert_eq!(r.signature.class, SignatureClass::Zero);
    }

    #[test]
    fn retraction_on_all_families() {
        let cases: Vec<(Theorem, usize, Vec<(&str, i64)>)> = vec![
            (Theorem::Thm2, 2, vec![("u", 3), ("v", -1)]),
            (Theorem::Thm4, 1, vec![("gamma", 3)]),
            (Theorem::Thm4, 2, vec![("alpha", -2)]),
            (Theorem::Thm4, 3, vec![("gamma", 5)]),
            (Theorem::Thm4, 4, vec![]),
            (Theorem::Thm4, 5, vec![("beta", 3)]),
            (Theorem::Thm4, 6, vec![("omega", 4), ("eta", 2), ("eps", -1)]),
            (Theorem::Thm5, 1, vec![("xi", 3)]),
            (Theorem::Thm5, 2, vec![("eta", 2), ("delta", 3)]),
            (Theorem::Thm5, 3, vec![("beta", 2)]),
            (Theorem::Thm5, 4, vec![("xi", 1), ("beta", 2)]),
            (Theorem::Thm5, 5, vec![("xi", 2), ("beta", 3)]),
            (Theorem::Thm5, 6, vec![("beta", 1)]),
            (Theorem::Thm5, 7, vec![("xi", 2), ("alpha", 1), ("eps", 1)]),
            (Theorem::Thm5, 8, vec![("gamma", 1), ("alpha", 2), ("eps", -1)]),
            (Theorem::Thm5, 9, vec![("gamma", 1), ("alpha", 1), ("eps", 1)]),
        ];
        for (t, f, binds) in cases {
            let c = conn_for(t, f, &binds);
            let r = classify(&c).unwrap_or_else(|e| panic!("{:?} {} failed: {}", t, f, e));
            assert_eq!((r.theorem, r.family), (t, f), "family for {:?} {}", t, f);
            for (name, v) in &binds {
                assert!(
                    r.params[*name].eq_i64(*v),
                    "{:?} {} param {} = {}, want {}",
                    t,
                    f,
                    name,
                    r.params[*name],
                    v
                );
            }
        }
    }

    #[test]
    fn gauge_invariance_samples() {
        // shear a Type A instance and a Type B instance, flip another, and
        // check the classification does not move
        let base = conn_for(Theorem::Thm4, 6, &[("omega", 4), ("eta", 2), ("eps", -1)]);
        let sheared = apply_shear(&base, &RatFn::from_i64(2), &RatFn::from_i64(3)).unwrap();
        let r = classify(&sheared).unwrap();
        assert_eq!((r.theorem, r.family), (Theorem::Thm4, 6));
        assert!(r.params["omega"].eq_i64(4));
        assert!(r.params["eta"].eq_i64(2));
        assert!(r.params["eps"].eq_i64(-1));

        let base = conn_for(Theorem::Thm5, 8, &[("gamma", 1), ("alpha", 2), ("eps", -1)]);
        let moved = apply_shear(&base, &RatFn::from_i64(3), &RatFn::from_i64(-1)).unwrap();
        let moved = apply_flip(&moved).unwrap();
        let r = classify(&moved).unwrap();
        assert_eq!((r.theorem, r.family), (Theorem::Thm5, 8));
        assert!(r.params["gamma"].eq_i64(1));
        assert!(r.params["alpha"].eq_i64(2));
        assert!(r.params["eps"].eq_i64(-1));

        let flipped = apply_flip(&muv(2, -1)).unwrap();
        let r = classify(&flipped).unwrap();
        assert_eq!((r.theorem, r.family), (Theorem::Thm2, 2));
        assert!(r.params["u"].eq_i64(2));
        assert!(r.params["v"].eq_i64(-1));
    }

    #[test]
    fn dispatch_errors() {
        let torsion_free = conn_for(Theorem::Thm1A, 5, &[]);
        assert!(matches!(classify(&torsion_free), Err(Error::TorsionFree)));
        let general = catalog::make(catalog::find(Theorem::Example1, 1).unwrap(), &[]).unwrap();
        assert!(matches!(classify(&general), Err(Error::NotHomogeneousModel)));
        let spec = catalog::find(Theorem::Thm4, 5).unwrap();
        let (symbolic, _) = crate::connfile::parse_connection(spec.source).unwrap();
        assert!(matches!(classify(&symbolic), Err(Error::UnboundParameter(_))));
    }

    #[test]
    fn parallel_dim_bound_on_muv() {
        for (u, v) in [(1, 0), (1, 1), (2, 1), (3, -1)] {
            let c = muv(u, v);
            let dim = parallel_torsion_dim(&c).unwrap().dim;
            let g = c.exact_gamma().unwrap();
            let rho = tensor::ricci_of(&g);
            let rank = if rho.iter().flatten().all(RatFn::is_zero) { 0 } else { 1 };
            assert!(dim + rank <= 2, "u={} v={}", u, v);
        }
    }

    #[test]
    fn witness_replays_on_the_input() {
        let c = conn_for(Theorem::Thm4, 6, &[("omega", 3), ("eta", 1), ("eps", 1)]);
        let sheared = apply_shear(&c, &RatFn::from_i64(5), &RatFn::from_i64(2)).unwrap();
        let r = classify(&sheared).unwrap();
        let gc = const_gamma(&sheared).unwrap();
        let replayed = r.witness.apply(&gc).unwrap();
        let want = family_gamma(r.theorem, r.family, &r.params).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    assert!(rs_eq(&replayed[i][j][k], &want[i][j][k]));
                }
            }
        }
        let _ = parse_expr; // referenced to keep the import pattern uniform
    }
}
