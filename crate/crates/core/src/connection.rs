//! Connections as parsed objects: eight Christoffel expressions plus a kind
//! and a backend, lowered on demand to the exact or jet scalar kernel.

use std::collections::HashMap;

use num_traits::ToPrimitive;

use crate::error::Error;
use crate::expr::{eval_jet, lower_exact, Expr, Params};
use crate::scalar::{Jet2, RatFn};
use crate::tensor::{self, Gamma, Mat2, Vec2};

/// Fixed sample grid for numeric checks, inside (0.5, 2) x (-1, 1) so Type B
/// connections (domain x1 > 0) are always defined on it.
pub const GRID: [(f64, f64); 10] = [
    (0.6, -0.5),
    (0.6, 0.5),
    (0.9, -0.5),
    (0.9, 0.5),
    (1.2, -0.5),
    (1.2, 0.5),
    (1.5, -0.5),
    (1.5, 0.5),
    (1.8, -0.5),
    (1.8, 0.5),
];

/// A numeric tensor component vanishes when below this at every grid point.
pub const TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    TypeA,
    TypeB,
    General,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::TypeA => "A",
            Kind::TypeB => "B",
            Kind::General => "general",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Numeric,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Numeric => "numeric",
        }
    }
}

/// A connection as written: `gamma[i][j][k]` is the expression for
/// Gamma_{(i+1)(j+1)}^{(k+1)}. For Type B these are the tilde symbols; the
/// 1/x1 factor is inserted when lowering.
#[derive(Clone, Debug)]
pub struct Connection {
    pub kind: Kind,
    pub backend: Backend,
    pub params: Params,
    pub gamma: [[[Expr; 2]; 2]; 2],
}

fn zero_expr() -> Expr {
    Expr::num_i64(0)
}

pub fn gamma_expr_zero() -> [[[Expr; 2]; 2]; 2] {
    std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| zero_expr())))
}

impl Connection {
    pub fn new(kind: Kind, backend: Backend, params: Params) -> Self {
        Connection { kind, backend, params, gamma: gamma_expr_zero() }
    }

    /// Build directly from exact scalars; used by gauge transforms and the
    /// catalog, which work on already-lowered data.
    pub fn from_exact(kind: Kind, params: Params, g: &Gamma<RatFn>) -> Self {
        let names = params.names().to_vec();
        let mut c = Connection::new(kind, Backend::Exact, params);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let f = if kind == Kind::TypeB {
                        // store the tilde symbol
                        g[i][j][k].mul(&RatFn::var(0))
                    } else {
                        g[i][j][k].clone()
                    };
                    c.gamma[i][j][k] = crate::connfile::ratfn_to_expr(&f, &names);
                }
            }
        }
        c
    }

    /// Lower to exact symbols, with the 1/x1 factor applied for Type B and
    /// kind invariants enforced.
    pub fn exact_gamma(&self) -> Result<Gamma<RatFn>, Error> {
        let mut out = tensor::gamma_zero::<RatFn>();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let f = lower_exact(&self.gamma[i][j][k], &self.params)?;
                    match self.kind {
                        Kind::TypeA => {
                            if !(f.is_free_of(0) && f.is_free_of(1)) {
                                return Err(Error::ConstraintViolation(format!(
                                    "Type A requires constant symbols; Gamma {} {} {} depends on a coordinate",
                                    i + 1,
                                    j + 1,
                                    k + 1
                                )));
                            }
                            out[i][j][k] = f;
                        }
                        Kind::TypeB => {
                            if !(f.is_free_of(0) && f.is_free_of(1)) {
                                return Err(Error::ConstraintViolation(format!(
                                    "Type B requires constant tilde symbols; Gamma {} {} {} depends on a coordinate",
                                    i + 1,
                                    j + 1,
                                    k + 1
                                )));
                            }
                            out[i][j][k] = f.div(&RatFn::var(0))?;
                        }
                        Kind::General => out[i][j][k] = f,
                    }
                }
            }
        }
        Ok(out)
    }

    /// Tilde symbols of a Type B connection (the stored constants).
    pub fn tilde_gamma(&self) -> Result<Gamma<RatFn>, Error> {
        if self.kind != Kind::TypeB {
            return Err(Error::Internal("tilde symbols only exist for Type B".into()));
        }
        let g = self.exact_gamma()?;
        let x1 = RatFn::var(0);
        Ok(std::array::from_fn(|i| {
            std::array::from_fn(|j| std::array::from_fn(|k| g[i][j][k].mul(&x1)))
        }))
    }

    fn param_values(&self) -> Result<HashMap<String, f64>, Error> {
        let mut out = HashMap::new();
        for name in self.params.names() {
            let q = self
                .params
                .binding(name)
                .ok_or_else(|| Error::UnboundParameter(name.clone()))?;
            out.insert(name.clone(), q.to_f64().unwrap_or(f64::NAN));
        }
        Ok(out)
    }

    /// Evaluate all symbols as order-3 jets at a base point.
    pub fn jet_gamma(&self, x1: f64, x2: f64) -> Result<Gamma<Jet2>, Error> {
        let values = self.param_values()?;
        let mut out = tensor::gamma_zero::<Jet2>();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let mut jet = eval_jet(&self.gamma[i][j][k], x1, x2, &values)?;
                    if self.kind == Kind::TypeB {
                        jet = jet.div(&Jet2::var_x1(x1))?;
                    }
                    out[i][j][k] = jet;
                }
            }
        }
        Ok(out)
    }

    /// True when the Ricci tensor is parallel: identically for the exact
    /// backend, below tolerance on the sample grid for the numeric one.
    pub fn is_symmetric_surface(&self) -> Result<bool, Error> {
        match self.backend {
            Backend::Exact => {
                let g = self.exact_gamma()?;
                let rho = tensor::ricci_of(&g);
                let dr = tensor::cov_deriv_ricci(&g, &rho);
                Ok(dr.iter().flatten().flatten().all(RatFn::is_zero))
            }
            Backend::Numeric => {
                for (x1, x2) in GRID {
                    let g = self.jet_gamma(x1, x2)?;
                    let rho = tensor::ricci_of(&g);
                    let dr = tensor::cov_deriv_ricci(&g, &rho);
                    for c in dr.iter().flatten().flatten() {
                        if c.value().abs() >= TOL {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
        }
    }

    /// True when L_X nabla = 0 for the vector field given by two expressions.
    pub fn is_affine_killing(&self, field: &[Expr; 2]) -> Result<bool, Error> {
        match self.backend {
            Backend::Exact => {
                let g = self.exact_gamma()?;
                let x: Vec2<RatFn> = [
                    lower_exact(&field[0], &self.params)?,
                    lower_exact(&field[1], &self.params)?,
                ];
                let k = tensor::killing_op(&g, &x);
                Ok(k.iter().flatten().flatten().all(RatFn::is_zero))
            }
            Backend::Numeric => {
                let values = self.param_values()?;
                for (x1, x2) in GRID {
                    let g = self.jet_gamma(x1, x2)?;
                    let x: Vec2<Jet2> = [
                        eval_jet(&field[0], x1, x2, &values)?,
                        eval_jet(&field[1], x1, x2, &values)?,
                    ];
                    let k = tensor::killing_op(&g, &x);
                    for c in k.iter().flatten().flatten() {
                        if c.value().abs() >= TOL {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
        }
    }
}

/// All exact tensors of a connection, computed in one pass.
#[derive(Clone, Debug)]
pub struct ExactTensors {
    pub gamma: Gamma<RatFn>,
    pub torsion: Vec2<RatFn>,
    pub curvature: tensor::Curvature<RatFn>,
    pub ricci: Mat2<RatFn>,
    pub ricci_cd: [[[RatFn; 2]; 2]; 2],
    pub torsion_cd: Mat2<RatFn>,
}

impl ExactTensors {
    pub fn of(conn: &Connection) -> Result<Self, Error> {
        let gamma = conn.exact_gamma()?;
        Ok(Self::of_gamma(&gamma))
    }

    pub fn of_gamma(gamma: &Gamma<RatFn>) -> Self {
        let torsion = tensor::torsion_of(gamma);
        let curvature = tensor::curvature_of(gamma);
        let ricci = tensor::ricci_of(gamma);
        let ricci_cd = tensor::cov_deriv_ricci(gamma, &ricci);
        let torsion_cd = tensor::cov_deriv_torsion(gamma, &torsion);
        ExactTensors {
            gamma: gamma.clone(),
            torsion,
            curvature,
            ricci,
            ricci_cd,
            torsion_cd,
        }
    }

    pub fn torsion_is_zero(&self) -> bool {
        self.torsion.iter().all(RatFn::is_zero)
    }

    pub fn ricci_is_parallel(&self) -> bool {
        self.ricci_cd.iter().flatten().flatten().all(RatFn::is_zero)
    }

    pub fn torsion_is_parallel(&self) -> bool {
        self.torsion_cd.iter().flatten().all(RatFn::is_zero)
    }
}

/// Evaluate an exact scalar at a grid point with all parameters bound,
/// used for backend agreement checks.
pub fn eval_exact_at(f: &RatFn, x1: f64, x2: f64, params: &Params) -> Result<f64, Error> {
    use num_rational::BigRational;
    // Substitute rationals for the coordinates by approximating the floats
    // exactly (they are dyadic, so this is lossless).
    let to_q = |v: f64| BigRational::from_float(v).ok_or(Error::DomainError("non-finite".into()));
    let mut values = vec![to_q(x1)?, to_q(x2)?];
    for name in params.names() {
        let q = params
            .binding(name)
            .cloned()
            .ok_or_else(|| Error::UnboundParameter(name.clone()))?;
        values.push(q);
    }
    Ok(f.eval(&values)?.to_f64().unwrap_or(f64::NAN))
}
