//! Normal-form catalog: one data file per family with its expected tensors,
//! instantiation with parameter checking, and the verification engine that
//! recomputes every table.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::connection::{Connection, Kind, GRID, TOL};
use crate::connfile::{parse_connection, Expected};
use crate::error::Error;
use crate::expr::{eval_jet, lower_exact, Expr};
use crate::scalar::RatFn;
use crate::tensor;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem {
    Thm1A,
    Thm2,
    Thm4,
    Thm5,
    Muv,
    Example1,
}

impl Theorem {
    pub fn name(self) -> &'static str {
        match self {
            Theorem::Thm1A => "Thm1A",
            Theorem::Thm2 => "Thm2",
            Theorem::Thm4 => "Thm4",
            Theorem::Thm5 => "Thm5",
            Theorem::Muv => "Muv",
            Theorem::Example1 => "Example1",
        }
    }

    pub fn parse(s: &str) -> Option<Theorem> {
        Some(match s {
            "Thm1A" | "thm1a" => Theorem::Thm1A,
            "Thm2" | "thm2" => Theorem::Thm2,
            "Thm4" | "thm4" => Theorem::Thm4,
            "Thm5" | "thm5" => Theorem::Thm5,
            "Muv" | "muv" => Theorem::Muv,
            "Example1" | "example1" => Theorem::Example1,
            _ => return None,
        })
    }
}

/// Admissible values for one family parameter.
#[derive(Clone, Copy, Debug)]
pub enum Domain {
    Free,
    NonZero,
    Positive,
    NonNegative,
    /// Must be +1 or -1; always concrete.
    Sign,
    /// Any rational except the listed values.
    Excluded(&'static [(i64, i64)]),
}

pub struct FamilySpec {
    pub theorem: Theorem,
    pub family: usize,
    pub source: &'static str,
    pub params: &'static [(&'static str, Domain)],
}

static FAMILIES: &[FamilySpec] = &[
    FamilySpec {
        theorem: Theorem::Thm2,
        family: 1,
        source: include_str!("data/thm2_1.conn"),
        params: &[],
    },
    FamilySpec {
        theorem: Theorem::Thm2,
        family: 2,
        source: include_str!("data/thm2_2.conn"),
        params: &[("u", Domain::Positive), ("v", Domain::Sign)],
    },
    FamilySpec {
        theorem: Theorem::Thm4,
        family: 1,
        source: include_str!("data/thm4_1.conn"),
        params: &[("gamma", Domain::NonZero)],
    },
    FamilySpec {
        theorem: Theorem::Thm4,
        family: 2,
        source: include_str!("data/thm4_2.conn"),
        params: &[("alpha", Domain::Free)],
    },
    FamilySpec {
        theorem: Theorem::Thm4,
        family: 3,
        source: include_str!("data/thm4_3.conn"),
        params: &[("gamma", Domain::NonZero)],
    },
    FamilySpec {
        theorem: Theorem::Thm4,
        family: 4,
        source: include_str!("data/thm4_4.conn"),
        params: &[],
    },
    FamilySpec {
        theorem: Theorem::Thm4,
        family: 5,
        source: include_str!("data/thm4_5.conn"),
        params: &[("beta", Domain::Excluded(&[(0, 1), (2, 1)]))],
    },
    FamilySpec {
        theorem: Theorem::Thm4,
        family: 6,
        source: include_str!("data/thm4_6.conn"),
        params: &[
            ("omega", Domain::Free),
            ("eta", Domain::NonNegative),
            ("eps", Domain::Sign),
        ],
    },
    FamilySpec {
        theorem: Theorem::Thm5,
        family: 1,
        source: include_str!("data/thm5_1.conn"),
        params: &[("xi", Domain::Free)],
    },
    FamilySpec {
        theorem: Theorem::Thm5,
        family: 2,
        source: include_str!("data/thm5_2.conn"),
        params: &[("eta", Domain::Excluded(&[(-1, 1)])), ("delta", Domain::NonZero)],
    },
    FamilySpec {
        theorem: Theorem::Thm5,
        family: 3,
        source: include_str!("data/thm5_3.conn"),
        params: &[("beta", Domain::Excluded(&[(0, 1), (1, 2)]))],
    },
    FamilySpec {
        theorem: Theorem::Thm5,
        family: 4,
        source: include_str!("data/thm5_4.conn"),
        params: &[("xi", Domain::Free), ("beta", Domain::Free)],
    },
    FamilySpec {
        theorem: Theorem::Thm5,
        family: 5,
        source: include_str!("data/thm5_5.conn"),
        params: &[("xi", Domain::Excluded(&[(-1, 1)])), ("beta", Domain::NonZero)],
    },
    FamilySpec {
        theorem: Theorem::Thm5,
        family: 6,
        source: include_str!("data/thm5_6.conn"),
        params: &[("beta", Domain::Excluded(&[(0, 1), (-1, 2)]))],
    },
    FamilySpec {
        theorem: Theorem::Thm5,
        family: 7,
        source: include_str!("data/thm5_7.conn"),
        params: &[
            ("xi", Domain::Free),
            ("alpha", Domain::NonNegative),
            ("eps", Domain::Sign),
        ],
    },
    FamilySpec {
        theorem: Theorem::Thm5,
        family: 8,
        source: include_str!("data/thm5_8.conn"),
        params: &[
            ("gamma", Domain::Excluded(&[(-1, 2)])),
            ("alpha", Domain::NonNegative),
            ("eps", Domain::Sign),
        ],
    },
    FamilySpec {
        theorem: Theorem::Thm5,
        family: 9,
        source: include_str!("data/thm5_9.conn"),
        params: &[
            ("gamma", Domain::Excluded(&[(-1, 2)])),
            ("alpha", Domain::NonNegative),
            ("eps", Domain::Sign),
        ],
    },
    FamilySpec {
        theorem: Theorem::Muv,
        family: 1,
        source: include_str!("data/muv.conn"),
        params: &[("u", Domain::Free), ("v", Domain::Free)],
    },
    FamilySpec {
        theorem: Theorem::Thm1A,
        family: 5,
        source: include_str!("data/thm1a_5.conn"),
        params: &[],
    },
    FamilySpec {
        theorem: Theorem::Thm1A,
        family: 6,
        source: include_str!("data/thm1a_6.conn"),
        params: &[],
    },
    FamilySpec {
        theorem: Theorem::Example1,
        family: 1,
        source: include_str!("data/example1.conn"),
        params: &[],
    },
];

pub fn families() -> &'static [FamilySpec] {
    FAMILIES
}

pub fn find(theorem: Theorem, family: usize) -> Option<&'static FamilySpec> {
    FAMILIES.iter().find(|f| f.theorem == theorem && f.family == family)
}

fn domain_admits(domain: Domain, q: &BigRational) -> bool {
    match domain {
        Domain::Free => true,
        Domain::NonZero => !q.is_zero(),
        Domain::Positive => q.is_positive(),
        Domain::NonNegative => !q.is_negative(),
        Domain::Sign => {
            let one = BigRational::from_integer(1.into());
            *q == one || *q == -one
        }
        Domain::Excluded(vals) => !vals
            .iter()
            .any(|(n, d)| *q == BigRational::new((*n).into(), (*d).into())),
    }
}

/// Constraints that couple several parameters; checked only when all the
/// involved parameters are bound.
fn joint_admits(
    theorem: Theorem,
    family: usize,
    get: &dyn Fn(&str) -> Option<BigRational>,
) -> bool {
    match (theorem, family) {
        // eta + 1 != 2*delta separates this family from family (5).
        (Theorem::Thm5, 2) => match (get("eta"), get("delta")) {
            (Some(eta), Some(delta)) => {
                eta + BigRational::from_integer(1.into())
                    != BigRational::from_integer(2.into()) * delta
            }
            _ => true,
        },
        // torsion must not vanish
        (Theorem::Thm5, 8) | (Theorem::Thm5, 9) => match (get("alpha"), get("gamma")) {
            (Some(a), Some(g)) => !(a.is_zero() && g.is_zero()),
            _ => true,
        },
        _ => true,
    }
}

/// Instantiate a family. Bound parameters are validated against their
/// domains; unbound ones remain symbolic, except `Sign` parameters which
/// must always be bound.
pub fn make(
    spec: &FamilySpec,
    bindings: &[(String, BigRational)],
) -> Result<Connection, Error> {
    let (mut conn, _) = parse_connection(spec.source).expect("catalog files parse");
    for (name, value) in bindings {
        let known = spec.params.iter().any(|(n, _)| n == name);
        if !known {
            return Err(Error::UnknownIdentifier(name.clone()));
        }
        conn.params.bind(name, value.clone());
    }
    for (name, domain) in spec.params {
        match conn.params.binding(name) {
            Some(q) => {
                if !domain_admits(*domain, q) {
                    return Err(Error::ConstraintViolation(format!(
                        "parameter `{}` = {} is outside the family's domain",
                        name, q
                    )));
                }
            }
            None => {
                if matches!(domain, Domain::Sign) {
                    return Err(Error::ConstraintViolation(format!(
                        "sign parameter `{}` must be bound to +1 or -1",
                        name
                    )));
                }
            }
        }
    }
    let lookup = |n: &str| conn.params.binding(n).cloned();
    if !joint_admits(spec.theorem, spec.family, &lookup) {
        return Err(Error::ConstraintViolation(
            "parameters violate a joint family constraint".into(),
        ));
    }
    Ok(conn)
}

/// One line of the verification report.
#[derive(Clone, Debug)]
pub struct Check {
    pub label: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<Check>,
    pub families_total: usize,
    pub families_passed: usize,
}

impl Report {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

fn expected_scalar(e: &Option<Expr>, conn: &Connection) -> Result<RatFn, Error> {
    match e {
        Some(e) => lower_exact(e, &conn.params),
        None => Ok(RatFn::zero()),
    }
}

struct FamilyRun {
    label: String,
    failures: Vec<String>,
}

impl FamilyRun {
    fn new(label: String) -> Self {
        FamilyRun { label, failures: Vec::new() }
    }

    fn expect_eq(&mut self, what: &str, got: &RatFn, want: &RatFn) {
        if got != want {
            self.failures.push(format!("{}: got {}, want {}", what, got, want));
        }
    }

    fn expect_true(&mut self, what: &str, ok: bool) {
        if !ok {
            self.failures.push(what.to_string());
        }
    }

    fn into_check(self) -> Check {
        Check {
            ok: self.failures.is_empty(),
            detail: if self.failures.is_empty() {
                "ok".to_string()
            } else {
                self.failures.join("; ")
            },
            label: self.label,
        }
    }
}

/// Verify one exact family instance (one choice of the sign parameters)
/// against its expected tensors.
fn verify_exact_variant(spec: &FamilySpec, conn: &Connection, expected: &Expected, label: String) -> Check {
    let mut run = FamilyRun::new(label);
    let gamma = match conn.exact_gamma() {
        Ok(g) => g,
        Err(e) => {
            run.expect_true(&format!("lowering failed: {}", e), false);
            return run.into_check();
        }
    };
    let t = tensor::torsion_of(&gamma);
    let rho = tensor::ricci_of(&gamma);
    let drho = tensor::cov_deriv_ricci(&gamma, &rho);
    let dt = tensor::cov_deriv_torsion(&gamma, &t);

    run.expect_true(
        "nabla rho = 0",
        drho.iter().flatten().flatten().all(RatFn::is_zero),
    );

    // For Type B compare the tilde quantities and check the scaling laws.
    let x1 = RatFn::var(0);
    let (t_cmp, rho_cmp, dt_cmp) = if conn.kind == Kind::TypeB {
        let x1sq = x1.mul(&x1);
        let tt: [RatFn; 2] = std::array::from_fn(|k| t[k].mul(&x1));
        let rr: [[RatFn; 2]; 2] =
            std::array::from_fn(|j| std::array::from_fn(|k| rho[j][k].mul(&x1sq)));
        let dd: [[RatFn; 2]; 2] =
            std::array::from_fn(|k| std::array::from_fn(|i| dt[k][i].mul(&x1sq)));
        for v in tt.iter().chain(rr.iter().flatten()).chain(dd.iter().flatten()) {
            run.expect_true("scaling law: tilde tensor is constant", v.is_free_of(0) && v.is_free_of(1));
        }
        (tt, rr, dd)
    } else {
        (t, rho, dt)
    };

    for k in 0..2 {
        match expected_scalar(&expected.torsion[k], conn) {
            Ok(w) => run.expect_eq(&format!("T^{}", k + 1), &t_cmp[k], &w),
            Err(e) => run.expect_true(&format!("bad expected T: {}", e), false),
        }
    }
    for j in 0..2 {
        for k in 0..2 {
            match expected_scalar(&expected.ricci[j][k], conn) {
                Ok(w) => run.expect_eq(&format!("rho_{}{}", j + 1, k + 1), &rho_cmp[j][k], &w),
                Err(e) => run.expect_true(&format!("bad expected rho: {}", e), false),
            }
        }
    }
    for k in 0..2 {
        for i in 0..2 {
            match expected_scalar(&expected.torsion_cd[k][i], conn) {
                Ok(w) => run.expect_eq(
                    &format!("nablaT_{};{}", k + 1, i + 1),
                    &dt_cmp[k][i],
                    &w,
                ),
                Err(e) => run.expect_true(&format!("bad expected nablaT: {}", e), false),
            }
        }
    }

    // Theorem 4 and 5 families must have non-parallel torsion.
    if matches!(spec.theorem, Theorem::Thm4 | Theorem::Thm5) {
        run.expect_true(
            "nabla T != 0",
            dt_cmp.iter().flatten().any(|c| !c.is_zero()),
        );
    }
    // Theorem 4 preamble: these surfaces are flat.
    if spec.theorem == Theorem::Thm4 {
        run.expect_true("rho = 0", rho_cmp.iter().flatten().all(RatFn::is_zero));
    }

    run.into_check()
}

fn verify_muv_extra(conn: &Connection) -> Check {
    let mut run = FamilyRun::new("Muv symmetrization".to_string());
    let gamma = conn.exact_gamma().unwrap();
    let g0 = tensor::symmetrize(&gamma);
    let rho0 = tensor::ricci_of(&g0);
    let u = RatFn::var(2);
    let v = RatFn::var(3);
    let want = v.sub(&u.mul(&u));
    run.expect_eq("rho0_22 = v - u^2", &rho0[1][1], &want);
    for (j, k) in [(0, 0), (0, 1), (1, 0)] {
        run.expect_eq(&format!("rho0_{}{}", j + 1, k + 1), &rho0[j][k], &RatFn::zero());
    }
    let drho0 = tensor::cov_deriv_ricci(&g0, &rho0);
    run.expect_true(
        "0nabla rho0 = 0",
        drho0.iter().flatten().flatten().all(RatFn::is_zero),
    );
    // T is parallel for the symmetrized connection as well.
    let t = tensor::torsion_of(&gamma);
    let dt0 = tensor::cov_deriv_torsion(&g0, &t);
    run.expect_true("0nabla T = 0", dt0.iter().flatten().all(RatFn::is_zero));
    run.into_check()
}

fn verify_example1(spec: &FamilySpec) -> Check {
    let mut run = FamilyRun::new("Example 1 (numeric)".to_string());
    let (conn, expected) = parse_connection(spec.source).unwrap();
    let empty = std::collections::HashMap::new();
    for (x1, x2) in GRID {
        let g = match conn.jet_gamma(x1, x2) {
            Ok(g) => g,
            Err(e) => {
                run.expect_true(&format!("evaluation failed: {}", e), false);
                return run.into_check();
            }
        };
        let t = tensor::torsion_of(&g);
        let rho = tensor::ricci_of(&g);
        let drho = tensor::cov_deriv_ricci(&g, &rho);
        let dt = tensor::cov_deriv_torsion(&g, &t);
        let want = |e: &Option<Expr>| -> f64 {
            e.as_ref()
                .map(|e| eval_jet(e, x1, x2, &empty).map(|j| j.value()).unwrap_or(f64::NAN))
                .unwrap_or(0.0)
        };
        for k in 0..2 {
            run.expect_true(
                &format!("T^{} at ({}, {})", k + 1, x1, x2),
                (t[k].value() - want(&expected.torsion[k])).abs() < TOL,
            );
        }
        for j in 0..2 {
            for k in 0..2 {
                run.expect_true(
                    &format!("rho_{}{} at ({}, {})", j + 1, k + 1, x1, x2),
                    (rho[j][k].value() - want(&expected.ricci[j][k])).abs() < TOL,
                );
            }
        }
        for c in drho.iter().flatten().flatten() {
            run.expect_true("nabla rho = 0", c.value().abs() < TOL);
        }
        for k in 0..2 {
            for i in 0..2 {
                run.expect_true(
                    &format!("nablaT_{};{} at ({}, {})", k + 1, i + 1, x1, x2),
                    (dt[k][i].value() - want(&expected.torsion_cd[k][i])).abs() < 1e-8,
                );
            }
        }
    }
    run.into_check()
}

fn sign_values() -> [BigRational; 2] {
    [
        BigRational::from_integer(1.into()),
        BigRational::from_integer((-1).into()),
    ]
}

/// Recompute every table in the source material and compare.
pub fn verify_paper() -> Report {
    let mut report = Report::default();
    // The families counted by the headline number.
    let counted = |t: Theorem| matches!(t, Theorem::Thm2 | Theorem::Thm4 | Theorem::Thm5);

    for spec in FAMILIES {
        if spec.theorem == Theorem::Example1 {
            report.checks.push(verify_example1(spec));
            continue;
        }
        let sign_params: Vec<&str> = spec
            .params
            .iter()
            .filter(|(_, d)| matches!(d, Domain::Sign))
            .map(|(n, _)| *n)
            .collect();
        let mut family_ok = true;
        let variants: Vec<Vec<(String, BigRational)>> = if sign_params.is_empty() {
            vec![vec![]]
        } else {
            // one sign parameter per family in this catalog
            sign_values()
                .into_iter()
                .map(|v| vec![(sign_params[0].to_string(), v)])
                .collect()
        };
        for bindings in &variants {
            let label = if bindings.is_empty() {
                format!("{} family {}", spec.theorem.name(), spec.family)
            } else {
                format!(
                    "{} family {} ({} = {})",
                    spec.theorem.name(),
                    spec.family,
                    bindings[0].0,
                    bindings[0].1
                )
            };
            let conn = match make(spec, bindings) {
                Ok(c) => c,
                Err(e) => {
                    report.checks.push(Check {
                        label,
                        ok: false,
                        detail: format!("instantiation failed: {}", e),
                    });
                    family_ok = false;
                    continue;
                }
            };
            let (_, expected) = parse_connection(spec.source).unwrap();
            let check = verify_exact_variant(spec, &conn, &expected, label);
            family_ok &= check.ok;
            report.checks.push(check);
        }
        if spec.theorem == Theorem::Muv {
            let extra = verify_muv_extra(&make(spec, &[]).unwrap());
            family_ok &= extra.ok;
            report.checks.push(extra);
        }
        if counted(spec.theorem) {
            report.families_total += 1;
            if family_ok {
                report.families_passed += 1;
            }
        }
    }
    report
}
