//! Command-line front end: tensor reports, classification, gauge
//! transforms, catalog generation, Killing checks, and the verification
//! suite.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_rational::BigRational;

use affsurf::catalog::{self, Theorem};
use affsurf::classify::{classify, ClassificationResult};
use affsurf::connection::{Backend, Connection, ExactTensors, Kind, GRID};
use affsurf::connfile::{constant_of, parse_connection, serialize_connection};
use affsurf::expr::parse_expr;
use affsurf::gauge::{apply_flip, apply_linear, apply_shear};
use affsurf::report;
use affsurf::scalar::{display, RatFn};
use affsurf::tensor;
use affsurf::Error;

#[derive(Parser)]
#[command(name = "affsurf", version, about = "Tensor calculus and classification for 2D affine connections with torsion")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute T, R, rho, nabla rho, and nabla T for a connection file.
    Tensors {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Classify a homogeneous connection into its normal form.
    Classify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Also print the normalizing gauge chain.
        #[arg(long)]
        witness: bool,
    },
    /// Apply a gauge transform and print the resulting connection file.
    Gauge {
        file: PathBuf,
        /// Constant matrix entries a,b,c,d for [[a, b], [c, d]].
        #[arg(long)]
        linear: Option<String>,
        /// Shear parameters a,b for (y1, y2) = (x1, (x2 - b*x1)/a).
        #[arg(long)]
        shear: Option<String>,
        /// The coordinate flip x2 -> -x2.
        #[arg(long)]
        flip: bool,
    },
    /// Emit a catalog family as a connection file.
    Catalog {
        /// Thm1A, Thm2, Thm4, Thm5, Muv, or Example1.
        theorem: String,
        family: usize,
        /// Comma-separated bindings, e.g. "gamma=3,eps=-1".
        #[arg(long)]
        params: Option<String>,
    },
    /// Test whether a vector field is affine Killing for the connection.
    Killing {
        file: PathBuf,
        /// The two components, e.g. "x1, x2" for x1 d_1 + x2 d_2.
        #[arg(long)]
        field: String,
    },
    /// Recompute every table from the source material and compare.
    #[command(name = "verify-paper")]
    VerifyPaper {
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load(path: &PathBuf) -> Result<Connection, Error> {
    let src = std::fs::read_to_string(path).map_err(|e| Error::Syntax {
        line: 0,
        col: 0,
        msg: format!("cannot read {}: {}", path.display(), e),
    })?;
    Ok(parse_connection(&src)?.0)
}

fn parse_q(s: &str) -> Result<BigRational, Error> {
    let e = parse_expr(s.trim())?;
    constant_of(&e).ok_or_else(|| Error::Syntax {
        line: 0,
        col: 0,
        msg: format!("`{}` is not a rational constant", s),
    })
}

fn parse_q_list(s: &str, n: usize) -> Result<Vec<BigRational>, Error> {
    let vals: Result<Vec<_>, _> = s.split(',').map(parse_q).collect();
    let vals = vals?;
    if vals.len() != n {
        return Err(Error::Syntax {
            line: 0,
            col: 0,
            msg: format!("expected {} comma-separated values, got {}", n, vals.len()),
        });
    }
    Ok(vals)
}

fn run(cmd: Cmd) -> Result<u8, Error> {
    match cmd {
        Cmd::Tensors { file, json } => {
            let conn = load(&file)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report::tensors_json(&conn)?).unwrap());
            } else {
                print_tensors(&conn)?;
            }
            Ok(0)
        }
        Cmd::Classify { file, json, witness } => {
            let conn = load(&file)?;
            let r = classify(&conn)?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report::classification_json(&conn, &r)).unwrap()
                );
            } else {
                print_classification(&r, witness);
            }
            Ok(0)
        }
        Cmd::Gauge { file, linear, shear, flip } => {
            let conn = load(&file)?;
            let chosen = linear.is_some() as u8 + shear.is_some() as u8 + flip as u8;
            if chosen != 1 {
                return Err(Error::Syntax {
                    line: 0,
                    col: 0,
                    msg: "pass exactly one of --linear, --shear, --flip".into(),
                });
            }
            let out = if let Some(spec) = linear {
                let v = parse_q_list(&spec, 4)?;
                let m = [
                    [RatFn::from_rational(v[0].clone()), RatFn::from_rational(v[1].clone())],
                    [RatFn::from_rational(v[2].clone()), RatFn::from_rational(v[3].clone())],
                ];
                apply_linear(&conn, &m)?
            } else if let Some(spec) = shear {
                let v = parse_q_list(&spec, 2)?;
                apply_shear(
                    &conn,
                    &RatFn::from_rational(v[0].clone()),
                    &RatFn::from_rational(v[1].clone()),
                )?
            } else {
                apply_flip(&conn)?
            };
            print!("{}", serialize_connection(&out));
            Ok(0)
        }
        Cmd::Catalog { theorem, family, params } => {
            let theorem = Theorem::parse(&theorem).ok_or_else(|| Error::Syntax {
                line: 0,
                col: 0,
                msg: format!("unknown theorem `{}`", theorem),
            })?;
            let spec = catalog::find(theorem, family).ok_or_else(|| Error::Syntax {
                line: 0,
                col: 0,
                msg: format!("no family {} in {}", family, theorem.name()),
            })?;
            let mut bindings = Vec::new();
            if let Some(p) = params {
                for piece in p.split(',') {
                    let (name, value) = piece.split_once('=').ok_or_else(|| Error::Syntax {
                        line: 0,
                        col: 0,
                        msg: format!("expected name=value, got `{}`", piece),
                    })?;
                    bindings.push((name.trim().to_string(), parse_q(value)?));
                }
            }
            let conn = catalog::make(spec, &bindings)?;
            print!("{}", serialize_connection(&conn));
            Ok(0)
        }
        Cmd::Killing { file, field } => {
            let conn = load(&file)?;
            let (c1, c2) = field.split_once(',').ok_or_else(|| Error::Syntax {
                line: 0,
                col: 0,
                msg: "expected two comma-separated components".into(),
            })?;
            let x = [parse_expr(c1.trim())?, parse_expr(c2.trim())?];
            let ok = conn.is_affine_killing(&x)?;
            println!("affine Killing: {}", if ok { "yes" } else { "no" });
            Ok(0)
        }
        Cmd::VerifyPaper { json } => {
            let rep = catalog::verify_paper();
            if json {
                println!("{}", serde_json::to_string_pretty(&report::verify_paper_json(&rep)).unwrap());
            } else {
                for c in &rep.checks {
                    if c.ok {
                        println!("ok   {}", c.label);
                    } else {
                        println!("FAIL {}: {}", c.label, c.detail);
                    }
                }
                println!("{}/{} family tables verified", rep.families_passed, rep.families_total);
            }
            Ok(if rep.all_ok() { 0 } else { 1 })
        }
    }
}

fn print_tensors(conn: &Connection) -> Result<(), Error> {
    println!("kind: {}", conn.kind.name());
    println!("backend: {}", conn.backend.name());
    match conn.backend {
        Backend::Exact => print_exact_tensors(conn),
        Backend::Numeric => print_numeric_tensors(conn),
    }
}

fn print_exact_tensors(conn: &Connection) -> Result<(), Error> {
    let t = ExactTensors::of(conn)?;
    let names = conn.params.names().to_vec();
    let s = |f: &RatFn| display::ratfn_to_string(f, &names);
    for k in 0..2 {
        println!("T^{} = {}", k + 1, s(&t.torsion[k]));
    }
    for k in 0..2 {
        for l in 0..2 {
            println!("R_12{}^{} = {}", k + 1, l + 1, s(&t.curvature[0][1][k][l]));
        }
    }
    for j in 0..2 {
        for k in 0..2 {
            println!("rho_{}{} = {}", j + 1, k + 1, s(&t.ricci[j][k]));
        }
    }
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                println!("rho_{}{};{} = {}", j + 1, k + 1, i + 1, s(&t.ricci_cd[i][j][k]));
            }
        }
    }
    for k in 0..2 {
        for i in 0..2 {
            println!("T^{}_;{} = {}", k + 1, i + 1, s(&t.torsion_cd[k][i]));
        }
    }
    if conn.kind == Kind::TypeB {
        let (tt, rr, dd) = report::tilde_tensors(&t)?;
        println!("tilde quantities (at x1 = 1):");
        for k in 0..2 {
            println!("T~^{} = {}", k + 1, s(&tt[k]));
        }
        for j in 0..2 {
            for k in 0..2 {
                println!("rho~_{}{} = {}", j + 1, k + 1, s(&rr[j][k]));
            }
        }
        for k in 0..2 {
            for i in 0..2 {
                println!("T~^{}_;{} = {}", k + 1, i + 1, s(&dd[k][i]));
            }
        }
    }
    Ok(())
}

fn print_numeric_tensors(conn: &Connection) -> Result<(), Error> {
    for (x1, x2) in GRID {
        let g = conn.jet_gamma(x1, x2)?;
        let t = tensor::torsion_of(&g);
        let rho = tensor::ricci_of(&g);
        let dt = tensor::cov_deriv_torsion(&g, &t);
        println!("at ({}, {}):", x1, x2);
        println!("  T = ({:.9}, {:.9})", t[0].value(), t[1].value());
        println!(
            "  rho = (({:.9}, {:.9}), ({:.9}, {:.9}))",
            rho[0][0].value(),
            rho[0][1].value(),
            rho[1][0].value(),
            rho[1][1].value()
        );
        println!(
            "  nabla T = (({:.9}, {:.9}), ({:.9}, {:.9}))",
            dt[0][0].value(),
            dt[0][1].value(),
            dt[1][0].value(),
            dt[1][1].value()
        );
    }
    Ok(())
}

fn print_classification(r: &ClassificationResult, witness: bool) {
    println!("{} family {}", r.theorem.name(), r.family);
    for (name, value) in &r.params {
        println!("{} = {}", name, value);
    }
    println!(
        "signature: rank {}, {}",
        r.signature.rank,
        r.signature.class.name()
    );
    if witness {
        if r.witness.steps.is_empty() {
            println!("witness: identity");
        } else {
            for (i, step) in r.witness.steps.iter().enumerate() {
                println!("witness step {}: {}", i + 1, step.describe());
            }
        }
    }
}
