//! The connection file format.
//!
//! ```text
//! # comment
//! kind: A | B | general
//! backend: exact | numeric
//! params: u, v = 1, eps = -1
//! Gamma 1 2 1 = 2*u
//! expect T 1 = u
//! expect rho 2 2 = v
//! expect nablaT 1 1 = 0
//! ```
//!
//! Omitted symbols default to 0. For Type B the bodies are the tilde
//! symbols; the 1/x1 factor is inserted by the library. `expect` lines carry
//! golden tensor data (tilde quantities for Type B) and are ignored outside
//! verification.

use num_rational::BigRational;

use crate::connection::{Backend, Connection, Kind};
use crate::error::Error;
use crate::expr::{parse_expr, Expr, Params};
use crate::scalar::{display, RatFn};

/// Golden tensor data carried by catalog files.
#[derive(Clone, Debug, Default)]
pub struct Expected {
    pub torsion: [Option<Expr>; 2],
    pub ricci: [[Option<Expr>; 2]; 2],
    pub torsion_cd: [[Option<Expr>; 2]; 2],
}

impl Expected {
    pub fn is_empty(&self) -> bool {
        self.torsion.iter().all(Option::is_none)
            && self.ricci.iter().flatten().all(Option::is_none)
            && self.torsion_cd.iter().flatten().all(Option::is_none)
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, col: 1, msg: msg.into() }
}

fn parse_index(tok: &str, line: usize) -> Result<usize, Error> {
    match tok {
        "1" => Ok(0),
        "2" => Ok(1),
        _ => Err(syntax(line, format!("index must be 1 or 2, got `{}`", tok))),
    }
}

fn parse_rational_literal(src: &str, line: usize) -> Result<BigRational, Error> {
    let e = parse_expr(src).map_err(|_| syntax(line, format!("invalid number `{}`", src)))?;
    constant_of(&e).ok_or_else(|| syntax(line, format!("`{}` is not a constant", src)))
}

/// Fold an expression to a rational constant when possible.
pub fn constant_of(e: &Expr) -> Option<BigRational> {
    lower_closed(e).and_then(|f| f.as_rational())
}

fn lower_closed(e: &Expr) -> Option<RatFn> {
    // Lower with no declared parameters; fails on any identifier.
    crate::expr::lower_exact(e, &Params::new()).ok()
}

/// Parse a full connection file.
pub fn parse_connection(source: &str) -> Result<(Connection, Expected), Error> {
    let mut kind = None;
    let mut backend = None;
    let mut params = Params::new();
    let mut gamma = crate::connection::gamma_expr_zero();
    let mut seen = [[[false; 2]; 2]; 2];
    let mut expected = Expected::default();

    for (idx, raw) in source.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("kind:") {
            kind = Some(match rest.trim() {
                "A" => Kind::TypeA,
                "B" => Kind::TypeB,
                "general" => Kind::General,
                other => return Err(syntax(lineno, format!("unknown kind `{}`", other))),
            });
        } else if let Some(rest) = line.strip_prefix("backend:") {
            backend = Some(match rest.trim() {
                "exact" => Backend::Exact,
                "numeric" => Backend::Numeric,
                other => return Err(syntax(lineno, format!("unknown backend `{}`", other))),
            });
        } else if let Some(rest) = line.strip_prefix("params:") {
            for piece in rest.split(',') {
                let piece = piece.trim();
                if piece.is_empty() {
                    continue;
                }
                match piece.split_once('=') {
                    Some((name, value)) => {
                        let name = name.trim();
                        check_param_name(name, lineno)?;
                        let q = parse_rational_literal(value.trim(), lineno)?;
                        params.bind(name, q);
                    }
                    None => {
                        check_param_name(piece, lineno)?;
                        params.declare(piece);
                    }
                }
            }
        } else if let Some(rest) = line.strip_prefix("Gamma ") {
            let (lhs, rhs) = rest
                .split_once('=')
                .ok_or_else(|| syntax(lineno, "expected `Gamma i j k = <expr>`"))?;
            let idxs: Vec<&str> = lhs.split_whitespace().collect();
            if idxs.len() != 3 {
                return Err(syntax(lineno, "expected three indices after `Gamma`"));
            }
            let (i, j, k) = (
                parse_index(idxs[0], lineno)?,
                parse_index(idxs[1], lineno)?,
                parse_index(idxs[2], lineno)?,
            );
            if seen[i][j][k] {
                return Err(syntax(
                    lineno,
                    format!("duplicate symbol Gamma {} {} {}", i + 1, j + 1, k + 1),
                ));
            }
            seen[i][j][k] = true;
            gamma[i][j][k] = parse_expr(rhs.trim())?;
        } else if let Some(rest) = line.strip_prefix("expect ") {
            let (lhs, rhs) = rest
                .split_once('=')
                .ok_or_else(|| syntax(lineno, "expected `expect <tensor> <indices> = <expr>`"))?;
            let toks: Vec<&str> = lhs.split_whitespace().collect();
            let value = parse_expr(rhs.trim())?;
            match toks.as_slice() {
                ["T", k] => {
                    expected.torsion[parse_index(k, lineno)?] = Some(value);
                }
                ["rho", j, k] => {
                    expected.ricci[parse_index(j, lineno)?][parse_index(k, lineno)?] = Some(value);
                }
                ["nablaT", k, i] => {
                    expected.torsion_cd[parse_index(k, lineno)?][parse_index(i, lineno)?] =
                        Some(value);
                }
                _ => return Err(syntax(lineno, "unknown expect target")),
            }
        } else {
            return Err(syntax(lineno, format!("unrecognized line `{}`", line)));
        }
    }

    let kind = kind.ok_or_else(|| syntax(1, "missing `kind:` header"))?;
    let backend = backend.ok_or_else(|| syntax(1, "missing `backend:` header"))?;
    let mut conn = Connection::new(kind, backend, params);
    conn.gamma = gamma;
    Ok((conn, expected))
}

fn check_param_name(name: &str, line: usize) -> Result<(), Error> {
    let valid = !name.is_empty()
        && name.chars().next().unwrap().is_ascii_alphabetic()
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "x1"
        && name != "x2"
        && crate::expr::FnKind::from_name(name).is_none();
    if valid {
        Ok(())
    } else {
        Err(syntax(line, format!("invalid parameter name `{}`", name)))
    }
}

/// Serialize back to the file format; parsing the output reproduces the
/// connection exactly.
pub fn serialize_connection(conn: &Connection) -> String {
    let mut out = String::new();
    out.push_str(&format!("kind: {}\n", conn.kind.name()));
    out.push_str(&format!("backend: {}\n", conn.backend.name()));
    if !conn.params.names().is_empty() {
        let pieces: Vec<String> = conn
            .params
            .names()
            .iter()
            .map(|n| match conn.params.binding(n) {
                Some(q) => format!("{} = {}", n, rational_to_string(q)),
                None => n.clone(),
            })
            .collect();
        out.push_str(&format!("params: {}\n", pieces.join(", ")));
    }
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let e = &conn.gamma[i][j][k];
                if *e != Expr::num_i64(0) {
                    out.push_str(&format!("Gamma {} {} {} = {}\n", i + 1, j + 1, k + 1, e));
                }
            }
        }
    }
    out
}

fn rational_to_string(q: &BigRational) -> String {
    use num_traits::One;
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Render an exact scalar as an expression tree in the grammar.
pub fn ratfn_to_expr(f: &RatFn, param_names: &[String]) -> Expr {
    let s = display::ratfn_to_string(f, param_names);
    parse_expr(&s).expect("printed scalar must re-parse")
}
