//! Tensor calculus on a 2-dimensional affine connection with torsion.
//!
//! Index conventions. `Gamma[i][j][k]` holds the Christoffel symbol
//! of the second kind for nabla_{partial_i} partial_j = Gamma_{ij}^k partial_k.
//! The curvature is
//! R_{ijk}^l = d_i Gamma_{jk}^l - d_j Gamma_{ik}^l
//!           + Gamma_{im}^l Gamma_{jk}^m - Gamma_{jm}^l Gamma_{ik}^m,
//! the Ricci tensor is rho_{jk} = R_{1jk}^1 + R_{2jk}^2, and covariant
//! derivatives put the direction in the first lower slot.

use crate::scalar::{Coef, Coord};

pub type Vec2<C> = [C; 2];
pub type Mat2<C> = [[C; 2]; 2];
/// Christoffel symbols: `gamma[i][j][k]` = Gamma_{ij}^k.
pub type Gamma<C> = [[[C; 2]; 2]; 2];
/// Full curvature: `r[i][j][k][l]` = R_{ijk}^l.
pub type Curvature<C> = [[[[C; 2]; 2]; 2]; 2];

pub fn gamma_zero<C: Coef>() -> Gamma<C> {
    std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| C::zero())))
}

pub fn mat_zero<C: Coef>() -> Mat2<C> {
    std::array::from_fn(|_| std::array::from_fn(|_| C::zero()))
}

fn coord(i: usize) -> Coord {
    if i == 0 {
        Coord::X1
    } else {
        Coord::X2
    }
}

/// Torsion vector: T = (dx1 ^ dx2) (x) (t^1 d_1 + t^2 d_2) with
/// t^k = (Gamma_{12}^k - Gamma_{21}^k) / 2.
pub fn torsion_of<C: Coef>(g: &Gamma<C>) -> Vec2<C> {
    std::array::from_fn(|k| C::half(&g[0][1][k].sub(&g[1][0][k])))
}

/// The associated torsion-free symbols Gamma_{(ij)}^k.
pub fn symmetrize<C: Coef>(g: &Gamma<C>) -> Gamma<C> {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| std::array::from_fn(|k| C::half(&g[i][j][k].add(&g[j][i][k]))))
    })
}

/// Perturb a torsion-free connection to realize `s` as its torsion vector.
pub fn with_torsion<C: Coef>(base: &Gamma<C>, s: &Vec2<C>) -> Gamma<C> {
    let mut g = base.clone();
    for k in 0..2 {
        g[0][1][k] = base[0][1][k].add(&s[k]);
        g[1][0][k] = base[0][1][k].sub(&s[k]);
    }
    g
}

pub fn curvature_of<C: Coef>(g: &Gamma<C>) -> Curvature<C> {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            std::array::from_fn(|k| {
                std::array::from_fn(|l| {
                    let mut acc = g[j][k][l].diff(coord(i)).sub(&g[i][k][l].diff(coord(j)));
                    for m in 0..2 {
                        acc = acc.add(&g[i][m][l].mul(&g[j][k][m]));
                        acc = acc.sub(&g[j][m][l].mul(&g[i][k][m]));
                    }
                    acc
                })
            })
        })
    })
}

/// Ricci tensor rho_{jk}; not symmetric in general when torsion is present.
pub fn ricci_of<C: Coef>(g: &Gamma<C>) -> Mat2<C> {
    let r = curvature_of(g);
    std::array::from_fn(|j| std::array::from_fn(|k| r[0][j][k][0].add(&r[1][j][k][1])))
}

/// Covariant derivative of the Ricci tensor:
/// `out[i][j][k]` = rho_{jk;i} = d_i rho_{jk} - Gamma_{ij}^m rho_{mk}
///                  - Gamma_{ik}^m rho_{jm}.
pub fn cov_deriv_ricci<C: Coef>(g: &Gamma<C>, rho: &Mat2<C>) -> [[[C; 2]; 2]; 2] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            std::array::from_fn(|k| {
                let mut acc = rho[j][k].diff(coord(i));
                for m in 0..2 {
                    acc = acc.sub(&g[i][j][m].mul(&rho[m][k]));
                    acc = acc.sub(&g[i][k][m].mul(&rho[j][m]));
                }
                acc
            })
        })
    })
}

/// Covariant derivative of an abstract torsion tensor
/// S = (dx1 ^ dx2) (x) S^k d_k:
/// `out[k][i]` = S^k_{;i} = d_i S^k + Gamma_{im}^k S^m
///               - (Gamma_{i1}^1 + Gamma_{i2}^2) S^k,
/// the last term coming from the 2-form factor. Rows are the component
/// index, columns the direction of differentiation.
pub fn cov_deriv_torsion<C: Coef>(g: &Gamma<C>, s: &Vec2<C>) -> Mat2<C> {
    std::array::from_fn(|k| {
        std::array::from_fn(|i| {
            let mut acc = s[k].diff(coord(i));
            for m in 0..2 {
                acc = acc.add(&g[i][m][k].mul(&s[m]));
            }
            let trace = g[i][0][0].add(&g[i][1][1]);
            acc.sub(&trace.mul(&s[k]))
        })
    })
}

/// One column of `cov_deriv_torsion`: the derivative in direction `i` as an
/// abstract torsion tensor again, so the operator can be iterated.
pub fn cov_deriv_torsion_dir<C: Coef>(g: &Gamma<C>, s: &Vec2<C>, i: usize) -> Vec2<C> {
    let d = cov_deriv_torsion(g, s);
    [d[0][i].clone(), d[1][i].clone()]
}

/// Affine Killing operator applied to the vector field X = x[i] d_i:
/// `out[j][k][l]` = (L_X Gamma)_{jk}^l
///   = X^i d_i Gamma_{jk}^l - Gamma_{jk}^m d_m X^l
///   + d_j X^i Gamma_{ik}^l + d_k X^i Gamma_{ji}^l + d_j d_k X^l.
/// X is affine Killing exactly when this vanishes.
pub fn killing_op<C: Coef>(g: &Gamma<C>, x: &Vec2<C>) -> [[[C; 2]; 2]; 2] {
    std::array::from_fn(|j| {
        std::array::from_fn(|k| {
            std::array::from_fn(|l| {
                let mut acc = x[l].diff(coord(j)).diff(coord(k));
                for i in 0..2 {
                    acc = acc.add(&x[i].mul(&g[j][k][l].diff(coord(i))));
                    acc = acc.sub(&g[j][k][i].mul(&x[l].diff(coord(i))));
                    acc = acc.add(&x[i].diff(coord(j)).mul(&g[i][k][l]));
                    acc = acc.add(&x[i].diff(coord(k)).mul(&g[j][i][l]));
                }
                acc
            })
        })
    })
}
