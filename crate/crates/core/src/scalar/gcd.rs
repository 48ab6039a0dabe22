//! Multivariate polynomial gcd via content/primitive-part recursion and the
//! subresultant polynomial remainder sequence.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::poly::Poly;

/// Monic gcd of two polynomials; gcd(0, 0) = 0.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    let g = gcd_raw(a, b);
    make_monic(&g)
}

fn make_monic(p: &Poly) -> Poly {
    if p.is_zero() {
        return Poly::zero();
    }
    let lc = p.leading_coeff();
    p.scale(&(BigRational::one() / lc))
}

fn gcd_raw(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let var = a.max_var().unwrap_or(0).max(b.max_var().unwrap_or(0));
    if a.degree_in(var) == 0 {
        // `a` does not involve the main variable: gcd(a, cont_var(b)).
        let cb = content_in(b, var);
        return gcd_raw(a, &cb);
    }
    if b.degree_in(var) == 0 {
        let ca = content_in(a, var);
        return gcd_raw(&ca, b);
    }
    let ca = content_in(a, var);
    let cb = content_in(b, var);
    let pa = div_exact(a, &ca);
    let pb = div_exact(b, &cb);
    let cont_gcd = gcd_raw(&ca, &cb);
    let pp_gcd = subresultant_gcd(&pa, &pb, var);
    cont_gcd.mul(&pp_gcd)
}

/// Content of `p` viewed as univariate in `var`: gcd of its coefficients.
fn content_in(p: &Poly, var: usize) -> Poly {
    let coeffs = p.coeffs_in(var);
    let mut g = Poly::zero();
    for c in &coeffs {
        if !c.is_zero() {
            g = gcd_raw(&g, c);
            if g.is_constant() {
                break;
            }
        }
    }
    if g.is_zero() {
        Poly::one()
    } else {
        make_monic(&g)
    }
}

/// Primitive gcd of two `var`-primitive polynomials via the subresultant PRS.
fn subresultant_gcd(a: &Poly, b: &Poly, var: usize) -> Poly {
    let (mut f, mut g) = if a.degree_in(var) >= b.degree_in(var) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    // Brown's subresultant remainder sequence.
    let mut h = Poly::one();
    let mut s = Poly::one();
    loop {
        let df = f.degree_in(var);
        let dg = g.degree_in(var);
        let delta = df - dg;
        let r = pseudo_rem(&f, &g, var);
        if r.is_zero() {
            let cg = content_in(&g, var);
            return make_monic(&div_exact(&g, &cg));
        }
        if r.degree_in(var) == 0 {
            return Poly::one();
        }
        let lc_g = lead_coeff_in(&g, var);
        // beta = -s * h^delta
        let beta = s.mul(&h.pow(delta)).neg();
        let new_g = div_exact(&r, &beta);
        // h' = lc(g)^delta * h^(1 - delta)  (as exact division when delta > 1)
        h = if delta == 0 {
            h
        } else if delta == 1 {
            lc_g.clone()
        } else {
            div_exact(&lc_g.pow(delta), &h.pow(delta - 1))
        };
        s = lc_g;
        f = g;
        g = new_g;
    }
}

fn lead_coeff_in(p: &Poly, var: usize) -> Poly {
    p.coeffs_in(var).pop().unwrap_or_else(Poly::zero)
}

/// Pseudo-remainder of f by g in `var`: lc(g)^(df-dg+1) * f = q*g + r.
fn pseudo_rem(f: &Poly, g: &Poly, var: usize) -> Poly {
    let dg = g.degree_in(var);
    let lc_g = lead_coeff_in(g, var);
    let mut r = f.clone();
    let df = f.degree_in(var);
    let mut steps = df as i64 - dg as i64 + 1;
    while !r.is_zero() && r.degree_in(var) >= dg {
        let dr = r.degree_in(var);
        let lc_r = lead_coeff_in(&r, var);
        let shift = super::poly::Monomial::unit().with_exp(var, dr - dg);
        r = r.mul(&lc_g).sub(&g.mul(&lc_r).mul_monomial(&shift));
        steps -= 1;
    }
    // Pad remaining multiplications so the subresultant divisions stay exact.
    while steps > 0 {
        r = r.mul(&lc_g);
        steps -= 1;
    }
    r
}

/// Exact division: panics in debug builds if the division is not exact.
pub fn div_exact(a: &Poly, b: &Poly) -> Poly {
    assert!(!b.is_zero(), "division by zero polynomial");
    if a.is_zero() {
        return Poly::zero();
    }
    if let Some(c) = b.as_constant() {
        return a.scale(&(BigRational::one() / c));
    }
    let var = a.max_var().unwrap_or(0).max(b.max_var().unwrap_or(0));
    if b.degree_in(var) == 0 {
        let coeffs = a.coeffs_in(var);
        let out: Vec<Poly> = coeffs.iter().map(|c| div_exact(c, b)).collect();
        return Poly::from_coeffs_in(var, &out);
    }
    let db = b.degree_in(var);
    let lb = lead_coeff_in(b, var);
    let mut r = a.clone();
    let mut q = Poly::zero();
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let lr = lead_coeff_in(&r, var);
        let c = div_exact(&lr, &lb);
        let shift = super::poly::Monomial::unit().with_exp(var, dr - db);
        let t = c.mul_monomial(&shift);
        q = q.add(&t);
        r = r.sub(&t.mul(b));
    }
    debug_assert!(r.is_zero(), "inexact polynomial division");
    q
}

/// Integer gcd helper used by radical extraction.
pub fn bigint_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    num_integer::Integer::gcd(a, b)
}
