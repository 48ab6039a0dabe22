//! Sparse multivariate polynomials over exact rationals.
//!
//! Variables are positional: index 0 is `x1`, index 1 is `x2`, indices 2..
//! are declared parameters. Monomials are kept with trailing zero exponents
//! trimmed so that equality and ordering are independent of how many
//! parameters a particular expression happens to mention.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exponent vector with trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Debug, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(index: usize) -> Self {
        let mut e = vec![0; index + 1];
        e[index] = 1;
        Monomial(e)
    }

    pub fn from_exps(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn exp(&self, index: usize) -> u32 {
        self.0.get(index).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_var(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let mut e = vec![0u32; n];
        for (i, x) in e.iter_mut().enumerate() {
            *x = self.exp(i) + other.exp(i);
        }
        Monomial::from_exps(e)
    }

    /// Exact division; `None` when some exponent of `other` exceeds ours.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let n = self.0.len().max(other.0.len());
        let mut e = vec![0u32; n];
        for (i, x) in e.iter_mut().enumerate() {
            let (a, b) = (self.exp(i), other.exp(i));
            if a < b {
                return None;
            }
            *x = a - b;
        }
        Some(Monomial::from_exps(e))
    }

    pub fn with_exp(&self, index: usize, value: u32) -> Monomial {
        let mut e = self.0.clone();
        if e.len() <= index {
            e.resize(index + 1, 0);
        }
        e[index] = value;
        Monomial::from_exps(e)
    }
}

/// Graded order: total degree first, ties broken lexicographically with the
/// highest variable index most significant (x1 < x2 < parameters).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let n = self.0.len().max(other.0.len());
        for i in (0..n).rev() {
            match self.exp(i).cmp(&other.exp(i)) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial in canonical form: no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(), c);
        }
        Poly { terms }
    }

    pub fn from_i64(n: i64) -> Self {
        Poly::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(index: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(index), BigRational::one());
        Poly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::unit())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(Monomial::is_unit)
    }

    /// The constant value, when this polynomial is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            self.terms.get(&Monomial::unit()).cloned()
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Leading term under the graded order.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(BigRational::zero)
    }

    /// Highest variable index occurring with nonzero exponent.
    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(Monomial::max_var).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative with respect to variable `var`.
    pub fn diff(&self, var: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e > 0 {
                let dm = m.with_exp(var, e - 1);
                out.add_term(dm, c * BigRational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// Substitute a rational value for one variable.
    pub fn eval_var(&self, var: usize, value: &BigRational) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(var);
            let mut coeff = c.clone();
            for _ in 0..e {
                coeff *= value;
            }
            out.add_term(m.with_exp(var, 0), coeff);
        }
        out
    }

    /// Full evaluation; `values[i]` is the value of variable `i`.
    /// Variables beyond the slice evaluate as an error in the caller's
    /// court; here missing entries are treated as 0.
    pub fn eval(&self, values: &[BigRational]) -> BigRational {
        let zero = BigRational::zero();
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            if let Some(maxv) = m.max_var() {
                for i in 0..=maxv {
                    let v = values.get(i).unwrap_or(&zero);
                    for _ in 0..m.exp(i) {
                        t *= v;
                    }
                }
            }
            acc += t;
        }
        acc
    }

    /// View as univariate in `var`: dense coefficient list, index = degree.
    pub fn coeffs_in(&self, var: usize) -> Vec<Poly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![Poly::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exp(var) as usize;
            out[e].add_term(m.with_exp(var, 0), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(var: usize, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (e, p) in coeffs.iter().enumerate() {
            let m = Monomial::unit().with_exp(var, e as u32);
            out = out.add(&p.mul_monomial(&m));
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::scalar::display::fmt_poly(self, f, &[])
    }
}
