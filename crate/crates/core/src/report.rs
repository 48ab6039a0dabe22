//! Machine-readable reports shared by the command-line tool and the C ABI.
//!
//! Index conventions in the JSON output: `ricci[j][k]` is rho_{jk},
//! `ricci_cd[i][j][k]` is rho_{jk;i}, `torsion_cd[k][i]` is T^k_{;i}, and
//! `curvature_12[k][l]` is R_{12k}^l (the other slots are determined by
//! antisymmetry).

use serde_json::{json, Value};

use crate::catalog::Report;
use crate::classify::ClassificationResult;
use crate::connection::{Backend, Connection, ExactTensors, Kind, GRID};
use crate::error::Error;
use crate::scalar::{display, RatFn};
use crate::tensor::{self, Gamma, Mat2, Vec2};

/// The tilde quantities of a Type B connection: T~ = x1 T,
/// rho~ = x1^2 rho, (nabla T)~ = x1^2 nabla T; all constant in x1.
pub fn tilde_tensors(
    t: &ExactTensors,
) -> Result<(Vec2<RatFn>, Mat2<RatFn>, Mat2<RatFn>), Error> {
    let x1 = RatFn::var(0);
    let x1sq = x1.mul(&x1);
    let tt = [t.torsion[0].mul(&x1), t.torsion[1].mul(&x1)];
    let rr: Mat2<RatFn> =
        std::array::from_fn(|j| std::array::from_fn(|k| t.ricci[j][k].mul(&x1sq)));
    let dd: Mat2<RatFn> =
        std::array::from_fn(|k| std::array::from_fn(|i| t.torsion_cd[k][i].mul(&x1sq)));
    for v in tt.iter().chain(rr.iter().flatten()).chain(dd.iter().flatten()) {
        if !v.is_free_of(0) {
            return Err(Error::Internal("tilde tensor depends on x1".into()));
        }
    }
    Ok((tt, rr, dd))
}

fn s(f: &RatFn, names: &[String]) -> String {
    display::ratfn_to_string(f, names)
}

fn exact_tensors_value(conn: &Connection) -> Result<Value, Error> {
    let t = ExactTensors::of(conn)?;
    let names = conn.params.names().to_vec();
    let torsion: Vec<String> = t.torsion.iter().map(|f| s(f, &names)).collect();
    let curvature_12: Vec<Vec<String>> = (0..2)
        .map(|k| (0..2).map(|l| s(&t.curvature[0][1][k][l], &names)).collect())
        .collect();
    let ricci: Vec<Vec<String>> = t
        .ricci
        .iter()
        .map(|row| row.iter().map(|f| s(f, &names)).collect())
        .collect();
    let ricci_cd: Vec<Vec<Vec<String>>> = t
        .ricci_cd
        .iter()
        .map(|m| m.iter().map(|row| row.iter().map(|f| s(f, &names)).collect()).collect())
        .collect();
    let torsion_cd: Vec<Vec<String>> = t
        .torsion_cd
        .iter()
        .map(|row| row.iter().map(|f| s(f, &names)).collect())
        .collect();
    let mut out = json!({
        "torsion": torsion,
        "curvature_12": curvature_12,
        "ricci": ricci,
        "ricci_cd": ricci_cd,
        "torsion_cd": torsion_cd,
    });
    if conn.kind == Kind::TypeB {
        let (tt, rr, dd) = tilde_tensors(&t)?;
        out["tilde"] = json!({
            "torsion": tt.iter().map(|f| s(f, &names)).collect::<Vec<_>>(),
            "ricci": rr.iter().map(|row| row.iter().map(|f| s(f, &names)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "torsion_cd": dd.iter().map(|row| row.iter().map(|f| s(f, &names)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        });
    }
    Ok(out)
}

fn numeric_tensors_value(conn: &Connection) -> Result<Value, Error> {
    let mut points = Vec::new();
    for (x1, x2) in GRID {
        let g: Gamma<_> = conn.jet_gamma(x1, x2)?;
        let t = tensor::torsion_of(&g);
        let rho = tensor::ricci_of(&g);
        let drho = tensor::cov_deriv_ricci(&g, &rho);
        let dt = tensor::cov_deriv_torsion(&g, &t);
        points.push(json!({
            "x1": x1,
            "x2": x2,
            "torsion": [t[0].value(), t[1].value()],
            "ricci": rho.iter().map(|r| r.iter().map(|j| j.value()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "ricci_cd": drho.iter().map(|m| m.iter().map(|r| r.iter().map(|j| j.value()).collect::<Vec<_>>()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "torsion_cd": dt.iter().map(|r| r.iter().map(|j| j.value()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }));
    }
    Ok(json!({ "points": points }))
}

pub fn tensors_json(conn: &Connection) -> Result<Value, Error> {
    let tensors = match conn.backend {
        Backend::Exact => exact_tensors_value(conn)?,
        Backend::Numeric => numeric_tensors_value(conn)?,
    };
    Ok(json!({
        "kind": conn.kind.name(),
        "backend": conn.backend.name(),
        "tensors": tensors,
    }))
}

pub fn classification_json(conn: &Connection, r: &ClassificationResult) -> Value {
    let params: serde_json::Map<String, Value> = r
        .params
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.to_string())))
        .collect();
    json!({
        "kind": conn.kind.name(),
        "backend": conn.backend.name(),
        "classification": {
            "theorem": r.theorem.name(),
            "family": r.family,
            "params": params,
            "signature": {
                "rank": r.signature.rank,
                "class": r.signature.class.name(),
            },
            "witness": r.witness.steps.iter().map(|st| st.describe()).collect::<Vec<_>>(),
        },
    })
}

pub fn verify_paper_json(report: &Report) -> Value {
    json!({
        "checks": report
            .checks
            .iter()
            .map(|c| json!({ "label": c.label, "ok": c.ok, "detail": c.detail }))
            .collect::<Vec<_>>(),
        "families_verified": report.families_passed,
        "families_total": report.families_total,
        "status": if report.all_ok() { "ok" } else { "failed" },
    })
}
