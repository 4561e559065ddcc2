//! `catfrob`: one subcommand per pipeline, versioned JSON reports.
//!
//! Exit codes: 0 when every requested check passes, 1 on a failed check or a
//! timeout, 2 on invalid flags or inputs the library rejects.

use crate::calibration::{r_matrix, r_matrix_recursive, s_matrix, s_matrix_residue_form, s_matrix_special_closed};
use crate::catalan::{count_maps_bruteforce, verify_gluing_counts, TheoremParams, DEFAULT_BOUND};
use crate::frobenius::{FrobeniusPoint, FrobeniusReport};
use crate::givental::{coefficient_rows, descendent_potential, TimeSlots};
use crate::hirota::{verify_hqe, HqeCaps, HqeError, HqeSource};
use crate::kdv::intersection_table;
use crate::lax::{lax_data, verify_nls, verify_toda, Flow, IdentityCheck, LaxCaps, LaxReport, TauFrame};
use crate::matrix::{table_to_json, Mat2};
use crate::periods::{basis, lambda_ode_residual, period_special, Representation};
use crate::rational::Q;
use crate::scalar::Scalar;
use crate::series::{Monomial, Series, Truncation, Var};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

pub const SCHEMA: &str = "catfrob-report/1";
/// Directory for cached report bodies.
pub const CACHE_ENV: &str = "CATFROB_CACHE_DIR";

#[derive(Parser, Debug)]
#[command(name = "catfrob", version, about = "Exact genus expansion of the Catalan Frobenius manifold")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    /// JSON run configuration; flags given on the command line take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    pub timings: bool,
    /// Give up after this many seconds.
    #[arg(long, global = true)]
    pub timeout_secs: Option<u64>,
    #[arg(long, global = true, env = CACHE_ENV)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Product, metric, canonical frame at a point.
    Frobenius(PointArgs),
    /// Calibration `S_0..S_K` with both routes compared.
    SMatrix(SMatrixArgs),
    /// `R_0..R_K`, closed form against the recursion.
    RMatrix(RMatrixArgs),
    /// Period vectors at infinity or near a critical value.
    Periods(PeriodArgs),
    /// ψ-class intersection numbers as CSV.
    Intersections(IntersectionArgs),
    /// Rooted gluing count `C_{g; k_1..k_n}`.
    Catalan(CatalanArgs),
    /// Coefficients of `log 𝒟`.
    Descendent(DescendentArgs),
    /// Brute-force enumeration against the Givental pipeline.
    VerifyTheorem(TheoremArgs),
    /// Residues of the Hirota quadratic equations.
    VerifyHirota(HirotaArgs),
    /// Extended Toda identities.
    VerifyLax(LaxArgs),
    /// Extended NLS identities.
    VerifyNls(LaxArgs),
    /// `v`, `u`, `φ`, `ρ` as JSON.
    LaxData(LaxDataArgs),
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointArgs {
    /// `t1,t2` with `t2` a fourth power in Q or 4·(fourth power).
    #[arg(long, default_value = "0,1")]
    pub point: String,
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SMatrixArgs {
    #[arg(long, default_value = "0,1")]
    pub point: String,
    #[arg(long, default_value_t = 8)]
    pub order: usize,
    /// A rational or `symbolic`.
    #[arg(long, default_value = "0")]
    pub psi: String,
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RMatrixArgs {
    #[arg(long, default_value = "0,1")]
    pub point: String,
    #[arg(long, default_value_t = 8)]
    pub order: usize,
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub level: i32,
    /// closed, infty, u1 or u2.
    #[arg(long, default_value = "closed")]
    pub rep: String,
    /// Number of λ-orders (or Puiseux terms).
    #[arg(long, default_value_t = 8)]
    pub order: u32,
    /// e1, e2 or `a,b`.
    #[arg(long, default_value = "e1")]
    pub label: String,
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionArgs {
    #[arg(long, default_value_t = 2)]
    pub genus_max: u32,
    #[arg(long, default_value_t = 3)]
    pub n_max: u32,
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalanArgs {
    #[arg(long)]
    pub genus: u32,
    /// Polygon sizes `k1,k2,...`.
    #[arg(long)]
    pub profile: String,
    /// Largest total number of sides accepted.
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    pub bound: u32,
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescendentArgs {
    #[arg(long, default_value_t = 2)]
    pub genus_max: u32,
    #[arg(long, default_value_t = 3)]
    pub n_max: u32,
    #[arg(long, default_value_t = 2)]
    pub index_max: u32,
    #[arg(long, default_value = "0")]
    pub psi: String,
    /// Largest `2g − 2 + n`.
    #[arg(long, default_value_t = 3)]
    pub euler_max: i32,
    /// Keep only the `t^1_a` times.
    #[arg(long)]
    pub first_only: bool,
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremArgs {
    #[arg(long, default_value_t = 2)]
    pub genus_max: u32,
    #[arg(long, default_value_t = 3)]
    pub n_max: u32,
    #[arg(long, default_value_t = 5)]
    pub k_max: u32,
    #[arg(long, default_value_t = 3)]
    pub euler_max: i32,
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HirotaArgs {
    #[arg(long, default_value_t = 2)]
    pub n_max: u32,
    /// Comma-separated values of `k`.
    #[arg(long, default_value = "-1,0,1", allow_hyphen_values = true)]
    pub k: String,
    #[arg(long, default_value_t = 3)]
    pub degree_max: u32,
    #[arg(long, default_value = "-2,2", allow_hyphen_values = true)]
    pub eps_window: String,
    #[arg(long, default_value_t = 2)]
    pub index_max: u32,
    #[arg(long, default_value = "symbolic")]
    pub psi: String,
    #[arg(long, default_value_t = 8)]
    pub psi_degree_max: u32,
    /// Seeded single-coefficient perturbations that must all be detected.
    #[arg(long, default_value_t = 0)]
    pub mutations: u32,
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaxArgs {
    #[arg(long, default_value = "1:0,1:1,2:0,2:1")]
    pub flows: String,
    #[arg(long, default_value_t = 3)]
    pub degree_max: u32,
    #[arg(long, default_value = "-2,2", allow_hyphen_values = true)]
    pub eps_window: String,
    /// Overrides the weight derived from `degree_max` and `eps_window`.
    #[arg(long)]
    pub weight: Option<u32>,
    #[arg(long, default_value = "symbolic")]
    pub psi: String,
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaxDataArgs {
    #[arg(long, default_value_t = 3)]
    pub degree_max: u32,
    #[arg(long, default_value = "-2,0", allow_hyphen_values = true)]
    pub eps_window: String,
    #[arg(long)]
    pub weight: Option<u32>,
    #[arg(long, default_value = "0")]
    pub psi: String,
    /// Also write `v.json`, `u.json`, `phi.json`, `rho.json` here.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

/// Everything that determines a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub seed: u64,
    pub threads: Option<usize>,
}

/// One compared quantity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Compared {
    pub key: String,
    pub lhs: String,
    pub rhs: String,
}

/// One check: two routes and what they produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub pass: bool,
    pub lhs_route: String,
    pub rhs_route: String,
    pub compared: usize,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub values: Vec<Compared>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub weight_checked: Option<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// The report body; cached bodies are reused verbatim.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Body {
    pub status: Status,
    pub checks: Vec<CheckRow>,
    pub result: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub version: String,
    pub config: RunConfig,
    pub conventions: BTreeMap<String, String>,
    pub status: Status,
    pub checks: Vec<CheckRow>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timings_ms: Option<BTreeMap<String, u128>>,
}

/// Failure before a report exists.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("timed out after {0} s")]
    Timeout(u64),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 2,
            CliError::Timeout(_) | CliError::Io(_) => 1,
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn conventions() -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    m.insert("residue_at_infinity".into(), "res_{lambda=oo} f dlambda = -[lambda^-1] f".into());
    m.insert("numbers".into(), "exact rationals in Q[psi, l, pi][i, sqrt2]; l = log t2".into());
    m.insert("lax_weight".into(), "time degree + eps power - operator order; weight = degree_max + max(eps_hi, 0)".into());
    m
}

pub fn parse_point(text: &str) -> Result<FrobeniusPoint, CliError> {
    let (a, b) = text.split_once(',').ok_or_else(|| CliError::Usage(format!("point must be t1,t2: {text}")))?;
    let t1 = Q::parse(a.trim()).ok_or_else(|| CliError::Usage(format!("bad rational {a}")))?;
    let t2 = Q::parse(b.trim()).ok_or_else(|| CliError::Usage(format!("bad rational {b}")))?;
    FrobeniusPoint::new(t1, t2).map_err(input)
}

pub fn parse_psi(text: &str) -> Result<Scalar, CliError> {
    if text == "symbolic" {
        return Ok(Scalar::psi());
    }
    Q::parse(text).map(Scalar::rat).ok_or_else(|| CliError::Usage(format!("psi must be a rational or `symbolic`: {text}")))
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|_| CliError::Usage(format!("bad {what}: {s}"))))
        .collect()
}

fn parse_window(text: &str) -> Result<(i32, i32), CliError> {
    let v: Vec<i32> = parse_list(text, "window")?;
    match v.as_slice() {
        [a, b] if a <= b => Ok((*a, *b)),
        _ => Err(CliError::Usage(format!("window must be lo,hi with lo <= hi: {text}"))),
    }
}

fn parse_flows(text: &str) -> Result<Vec<Flow>, CliError> {
    text.split(',').map(|s| Flow::parse(s).ok_or_else(|| CliError::Usage(format!("unknown flow {s}")))).collect()
}

fn mat_values(key: &str, a: &Mat2, b: &Mat2) -> Vec<Compared> {
    let (ta, tb) = (a.to_text(), b.to_text());
    let mut out = Vec::new();
    for r in 0..2 {
        for c in 0..2 {
            out.push(Compared { key: format!("{key}[{}{}]", r + 1, c + 1), lhs: ta[r][c].clone(), rhs: tb[r][c].clone() });
        }
    }
    out
}

fn matrix_check(name: &str, lhs_route: &str, rhs_route: &str, pairs: &[(String, Mat2, Mat2)]) -> CheckRow {
    let mut values = Vec::new();
    let mut pass = true;
    for (k, a, b) in pairs {
        pass &= a == b;
        values.extend(mat_values(k, a, b));
    }
    CheckRow {
        name: name.into(),
        pass,
        lhs_route: lhs_route.into(),
        rhs_route: rhs_route.into(),
        compared: values.len(),
        values,
        first_residual: None,
        weight_checked: None,
    }
}

fn lax_rows(r: &LaxReport) -> Vec<CheckRow> {
    let row = |c: &IdentityCheck, diagnostic: bool| CheckRow {
        name: if diagnostic { format!("diagnostic: {}", c.name) } else { c.name.clone() },
        pass: c.ok() || diagnostic,
        lhs_route: "left side".into(),
        rhs_route: "right side".into(),
        compared: c.compared_terms,
        values: Vec::new(),
        first_residual: c.first_residual.clone(),
        weight_checked: Some(c.weight_checked),
    };
    let mut rows: Vec<CheckRow> = r.checks.iter().map(|c| row(c, false)).collect();
    rows.extend(r.diagnostics.iter().map(|c| CheckRow { values: Vec::new(), ..row(c, true) }));
    rows
}

fn status_of(checks: &[CheckRow]) -> Status {
    if checks.iter().all(|c| c.pass) {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn body(checks: Vec<CheckRow>, result: Value) -> Body {
    Body { status: status_of(&checks), checks, result }
}

fn lax_caps(degree_max: u32, eps_window: &str, weight: Option<u32>) -> Result<LaxCaps, CliError> {
    let w = parse_window(eps_window)?;
    let caps = match weight {
        Some(weight_max) => LaxCaps { weight_max },
        None => LaxCaps::from_degree_eps(degree_max, w),
    };
    if !(1..=6).contains(&caps.weight_max) {
        return Err(CliError::Usage(format!("lax weight {} outside 1..=6", caps.weight_max)));
    }
    Ok(caps)
}

fn hirota_mutation(caps: &HqeCaps, rng: &mut rand_chacha::ChaCha8Rng) -> Series {
    // the symmetric slice only sees the even part of log 𝒟 around the point,
    // only blocks with 2g − 2 + n up to eps_hi + degree_max, and only
    // monomials containing a λ-shifted time (t^1_ℓ or t^2_0)
    let order_cap = caps.eps_window.1 + caps.degree_max as i32;
    let deg = 2 * rng.gen_range(1..=(caps.degree_max as i32 + 1).max(2) / 2);
    let genus_max = ((order_cap - deg + 2) / 2).max(0);
    let g = rng.gen_range(0..=genus_max);
    let mut pairs = vec![(Var::eps(), 2 * g - 2)];
    let mut exps: BTreeMap<Var, i32> = BTreeMap::new();
    for j in 0..deg {
        let v = if j == 0 && rng.gen_bool(0.5) {
            Var::t(2, 0)
        } else if j == 0 {
            Var::t(1, rng.gen_range(0..=caps.index_max as usize))
        } else {
            Var::t(rng.gen_range(1..=2), rng.gen_range(0..=caps.index_max as usize))
        };
        *exps.entry(v).or_default() += 1;
    }
    pairs.extend(exps);
    let c = Scalar::frac(rng.gen_range(1..=9), rng.gen_range(1..=9));
    Series::term(Monomial::from_pairs(&pairs), c, &Truncation::none())
}

/// Computes the report body for one command.
pub fn execute(cfg: &RunConfig) -> Result<Body, CliError> {
    match &cfg.command {
        Command::Frobenius(a) => {
            let p = parse_point(&a.point)?;
            let r = FrobeniusReport::new(&p);
            let checks = vec![
                matrix_check("product-derived intersection form", "g = [[2,t1],[t1,2t2]]", "g from E and the product", &[(
                    "g".into(),
                    p.intersection_form(),
                    p.intersection_form_from_product(),
                )]),
                matrix_check("Psi Psi^-1 = Id", "Psi Psi^-1", "identity", &[("Id".into(), p.psi().mul(&p.psi_inv()), Mat2::identity())]),
                matrix_check("Psi U Psi^-1 = diag(u)", "Psi U Psi^-1", "diag(u1,u2)", &[(
                    "U".into(),
                    p.psi().mul(&p.u_operator()).mul(&p.psi_inv()),
                    p.canonical_u(),
                )]),
            ];
            Ok(body(checks, serde_json::to_value(r).unwrap()))
        }
        Command::SMatrix(a) => {
            let p = parse_point(&a.point)?;
            let psi = parse_psi(&a.psi)?;
            let rec = s_matrix(&p, a.order, &psi);
            let res = s_matrix_residue_form(&p, a.order, &psi);
            let mut checks = Vec::new();
            let pairs: Vec<_> = (0..=a.order).map(|k| (format!("S_{k}"), rec.mats[k].clone(), res.mats[k].clone())).collect();
            checks.push(matrix_check("recursion = residue form", "recursion", "superpotential residues", &pairs));
            let resid: Vec<_> = (1..=a.order).map(|k| (format!("k={k}"), rec.recursion_residual(k), Mat2::zero())).collect();
            checks.push(matrix_check("recursion residual", "k S_k + [S_k, mu] - U S_k-1 + S_k-1 R", "zero", &resid));
            let sp = rec.symplectic_product();
            let sym: Vec<_> = (0..=a.order)
                .map(|k| (format!("z^{k}"), sp.coeff(k), if k == 0 { Mat2::identity() } else { Mat2::zero() }))
                .collect();
            checks.push(matrix_check("S*(-z) S(z) = Id", "S*(-z) S(z)", "identity", &sym));
            if p == FrobeniusPoint::special() {
                let closed: Vec<_> =
                    (0..=a.order).map(|k| (format!("S_{k}"), rec.mats[k].clone(), s_matrix_special_closed(k, &psi))).collect();
                checks.push(matrix_check("closed form at (0,1)", "recursion", "closed form", &closed));
            }
            Ok(body(checks, json!({ "point": a.point, "psi": psi.to_text(), "table": table_to_json(&rec.mats) })))
        }
        Command::RMatrix(a) => {
            let p = parse_point(&a.point)?;
            let closed = r_matrix(&p, a.order).map_err(input)?;
            let rec = r_matrix_recursive(&p, a.order).map_err(input)?;
            let pairs: Vec<_> = (0..=a.order).map(|k| (format!("R_{k}"), closed.mats[k].clone(), rec.mats[k].clone())).collect();
            let resid: Vec<_> = (0..a.order).map(|k| (format!("k={k}"), closed.recursion_residual(k), Mat2::zero())).collect();
            let sp = closed.symplectic_product();
            let sym: Vec<_> = (0..=a.order)
                .map(|k| (format!("z^{k}"), sp.coeff(k), if k == 0 { Mat2::identity() } else { Mat2::zero() }))
                .collect();
            let checks = vec![
                matrix_check("closed form = recursion", "closed form", "recursion", &pairs),
                matrix_check("[R_k+1, U] = (V + k) R_k", "[R_k+1, U] - (V+k) R_k", "zero", &resid),
                matrix_check("R(z) R*(-z) = Id", "R(z) R*(-z)", "identity", &sym),
            ];
            Ok(body(checks, json!({ "point": a.point, "table": table_to_json(&closed.mats) })))
        }
        Command::Periods(a) => {
            let rep: Representation = a.rep.parse().map_err(CliError::Usage)?;
            let label = match a.label.as_str() {
                "e1" => basis(1),
                "e2" => basis(2),
                other => {
                    let v: Vec<String> = parse_list(other, "label")?;
                    if v.len() != 2 {
                        return Err(CliError::Usage(format!("label must be e1, e2 or a,b: {other}")));
                    }
                    let s = |t: &str| Scalar::parse(t).ok_or_else(|| CliError::Usage(format!("bad label entry {t}")));
                    [s(&v[0])?, s(&v[1])?]
                }
            };
            let window = (-(a.order as i32), a.level.abs() + 1);
            let pv = period_special(a.level, &label, window, rep).map_err(input)?;
            let (pass, compared) = match (pv.lambda(), pv.puiseux()) {
                (Some(v), _) => {
                    let r = lambda_ode_residual(v, a.level);
                    let inside = |f: &crate::series::LambdaObject| f.terms().all(|(m, _, c)| m <= window.0 || m >= window.1 || c.is_zero());
                    (inside(&r[0]) && inside(&r[1]), v[0].terms().count() + v[1].terms().count())
                }
                (None, Some(p)) => (p.ode_residual(a.level).coeffs.is_empty(), p.coeffs.len()),
                _ => (false, 0),
            };
            let checks = vec![CheckRow {
                name: "(U - lambda) dI - (mu + l + 1/2) I = 0".into(),
                pass,
                lhs_route: "expansion".into(),
                rhs_route: "zero".into(),
                compared,
                values: Vec::new(),
                first_residual: None,
                weight_checked: None,
            }];
            Ok(body(checks, serde_json::to_value(pv.to_json()).unwrap()))
        }
        Command::Intersections(a) => {
            let rows: Vec<Value> = intersection_table(a.genus_max, a.n_max)
                .into_iter()
                .map(|r| json!({ "genus": r.genus, "partition": r.parts, "value": r.value.to_string() }))
                .collect();
            Ok(body(Vec::new(), Value::Array(rows)))
        }
        Command::Catalan(a) => {
            let profile: Vec<u32> = parse_list(&a.profile, "profile")?;
            let c = count_maps_bruteforce(a.genus, &profile, a.bound).map_err(input)?;
            Ok(body(Vec::new(), json!({ "genus": a.genus, "profile": profile, "count": c.to_string() })))
        }
        Command::Descendent(a) => {
            let psi = parse_psi(&a.psi)?;
            let params = TheoremParams { genus_max: a.genus_max, n_max: a.n_max, k_max: a.index_max, euler_max: a.euler_max };
            let slots = if a.first_only { TimeSlots::FirstOnly } else { TimeSlots::All };
            let d = descendent_potential(&params.blocks(), a.index_max, &psi, slots).map_err(input)?;
            Ok(body(Vec::new(), serde_json::to_value(coefficient_rows(&d)).unwrap()))
        }
        Command::VerifyTheorem(a) => {
            let params = TheoremParams { genus_max: a.genus_max, n_max: a.n_max, k_max: a.k_max, euler_max: a.euler_max };
            let r = verify_gluing_counts(&params).map_err(input)?;
            let values: Vec<Compared> = r
                .comparisons
                .iter()
                .map(|c| Compared { key: format!("g={} k={:?}", c.genus, c.k), lhs: c.pipeline.clone(), rhs: c.brute_force.clone() })
                .collect();
            let checks = vec![CheckRow {
                name: "log D coefficients = rooted gluing counts".into(),
                pass: r.ok(),
                lhs_route: "Givental quantization".into(),
                rhs_route: "brute-force gluing enumeration".into(),
                compared: values.len(),
                values,
                first_residual: r.mismatches.first().map(|m| format!("g={} k={:?}", m.genus, m.k)),
                weight_checked: None,
            }];
            Ok(body(checks, json!({ "params": r.params, "mismatches": r.mismatches.len() })))
        }
        Command::VerifyHirota(a) => {
            let caps = HqeCaps {
                degree_max: a.degree_max,
                index_max: a.index_max,
                eps_window: parse_window(&a.eps_window)?,
                psi_degree_max: a.psi_degree_max,
            };
            let k_set: Vec<i32> = parse_list(&a.k, "k")?;
            let psi = parse_psi(&a.psi)?;
            let k_abs = k_set.iter().map(|k| k.unsigned_abs()).max().unwrap_or(0);
            let src = HqeSource::new(&caps, &psi, a.n_max, k_abs).map_err(input)?;
            let r = verify_hqe(&src, a.n_max, &k_set).map_err(input)?;
            let mut checks: Vec<CheckRow> = r
                .instances
                .iter()
                .map(|i| CheckRow {
                    name: format!("residue n={} k={}", i.n, i.k),
                    pass: i.ok(),
                    lhs_route: "res lambda^(n-1) integrand".into(),
                    rhs_route: "zero".into(),
                    compared: i.monomials_checked,
                    values: i
                        .nonzero
                        .iter()
                        .map(|t| Compared { key: format!("{:?} eps^{}", t.monomial, t.eps_power), lhs: t.value.clone(), rhs: "0".into() })
                        .collect(),
                    first_residual: None,
                    weight_checked: None,
                })
                .collect();
            if a.mutations > 0 {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
                let mut values = Vec::new();
                let mut detected = 0;
                for _ in 0..a.mutations {
                    let delta = hirota_mutation(&caps, &mut rng);
                    let label = format!("{:?}", delta.sorted_terms());
                    let outcome = match verify_hqe(&src.clone().with_perturbation(delta), a.n_max, &k_set) {
                        Ok(m) if m.ok() => "missed",
                        Ok(_) => "detected",
                        Err(HqeError::Prefactor(_)) => "detected: bracket constants differ",
                        Err(e) => return Err(input(e)),
                    };
                    detected += outcome.starts_with("detected") as u32;
                    values.push(Compared { key: label, lhs: outcome.into(), rhs: "detected".into() });
                }
                checks.push(CheckRow {
                    name: "perturbations are detected".into(),
                    pass: detected == a.mutations,
                    lhs_route: "perturbed log D".into(),
                    rhs_route: "nonzero residue".into(),
                    compared: values.len(),
                    values,
                    first_residual: None,
                    weight_checked: None,
                });
            }
            Ok(body(checks, json!({ "caps": r.caps, "psi": r.psi, "t_index_max": r.t_index_max })))
        }
        Command::VerifyLax(a) | Command::VerifyNls(a) => {
            let caps = lax_caps(a.degree_max, &a.eps_window, a.weight)?;
            let flows = parse_flows(&a.flows)?;
            let psi = parse_psi(&a.psi)?;
            let frame = TauFrame::new(&caps, &psi).map_err(input)?;
            let r = if matches!(cfg.command, Command::VerifyLax(_)) { verify_toda(&frame, &flows) } else { verify_nls(&frame, &flows) }
                .map_err(input)?;
            let checks = lax_rows(&r);
            Ok(body(checks, json!({ "weight_max": caps.weight_max, "psi": r.psi, "flows": flows.iter().map(|f| f.to_string()).collect::<Vec<_>>() })))
        }
        Command::LaxData(a) => {
            let caps = lax_caps(a.degree_max, &a.eps_window, a.weight)?;
            let psi = parse_psi(&a.psi)?;
            let frame = TauFrame::new(&caps, &psi).map_err(input)?;
            let data = lax_data(&frame);
            if let Some(dir) = &a.out_dir {
                std::fs::create_dir_all(dir)?;
                for (name, rows) in [("v", &data.v), ("u", &data.u), ("phi", &data.phi), ("rho", &data.rho)] {
                    let v = json!({ "weight_max": data.weight_max, "psi": data.psi, "terms": rows });
                    std::fs::write(dir.join(format!("{name}.json")), serde_json::to_string_pretty(&v).unwrap() + "\n")?;
                }
            }
            Ok(body(Vec::new(), serde_json::to_value(&data).unwrap()))
        }
    }
}

fn default_format(c: &Command) -> Format {
    match c {
        Command::Intersections(_) => Format::Csv,
        Command::Catalan(_) => Format::Text,
        _ => Format::Json,
    }
}

fn csv_text(cfg: &RunConfig, b: &Body) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Io(std::io::Error::other(e));
    match &cfg.command {
        Command::Intersections(_) => {
            w.write_record(["genus", "partition", "value"]).map_err(err)?;
            for r in b.result.as_array().into_iter().flatten() {
                let parts: Vec<String> = r["partition"].as_array().unwrap().iter().map(|v| v.to_string()).collect();
                w.write_record([r["genus"].to_string(), parts.join(" "), r["value"].as_str().unwrap().to_string()]).map_err(err)?;
            }
        }
        Command::Descendent(_) => {
            w.write_record(["genus", "monomial", "value"]).map_err(err)?;
            for r in b.result.as_array().into_iter().flatten() {
                let mono: Vec<String> = r["monomial"]
                    .as_object()
                    .unwrap()
                    .iter()
                    .map(|(k, v)| if v.as_i64() == Some(1) { k.clone() } else { format!("{k}^{v}") })
                    .collect();
                w.write_record([r["genus"].to_string(), mono.join("*"), r["value"].as_str().unwrap().to_string()]).map_err(err)?;
            }
        }
        _ => return Err(CliError::Usage("csv output is available for intersections and descendent only".into())),
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?).unwrap())
}

/// Renders a report in the configured format.
pub fn render(report: &Report) -> Result<String, CliError> {
    let b = Body { status: report.status, checks: report.checks.clone(), result: report.result.clone() };
    match report.config.format {
        Format::Json => Ok(serde_json::to_string_pretty(report).unwrap() + "\n"),
        Format::Csv => csv_text(&report.config, &b),
        Format::Text => match &report.config.command {
            Command::Catalan(_) => Ok(format!("{}\n", b.result["count"].as_str().unwrap())),
            _ => Err(CliError::Usage("text output is available for catalan only".into())),
        },
    }
}

fn cache_path(dir: &Path, cfg: &RunConfig) -> PathBuf {
    let key = serde_json::to_string(&(SCHEMA, env!("CARGO_PKG_VERSION"), &cfg.command, cfg.seed)).unwrap();
    let digest = Sha256::digest(key.as_bytes());
    let hex: String = digest.iter().take(12).map(|b| format!("{b:02x}")).collect();
    dir.join(format!("{hex}.json"))
}

fn cached_body(cache: Option<&Path>, cfg: &RunConfig, timeout: Option<u64>) -> Result<(Body, bool), CliError> {
    if let Some(dir) = cache {
        if let Ok(text) = std::fs::read_to_string(cache_path(dir, cfg)) {
            if let Ok(b) = serde_json::from_str::<Body>(&text) {
                return Ok((b, true));
            }
        }
    }
    let b = match timeout {
        None => execute(cfg)?,
        Some(secs) => {
            let (tx, rx) = std::sync::mpsc::channel();
            let job = cfg.clone();
            std::thread::spawn(move || {
                let _ = tx.send(execute(&job));
            });
            rx.recv_timeout(Duration::from_secs(secs)).map_err(|_| CliError::Timeout(secs))??
        }
    };
    if let Some(dir) = cache {
        std::fs::create_dir_all(dir)?;
        std::fs::write(cache_path(dir, cfg), serde_json::to_string(&b).unwrap())?;
    }
    Ok((b, false))
}

/// Merges the command line over an optional config file.
pub fn resolve(cli: &Cli) -> Result<RunConfig, CliError> {
    let file: Option<RunConfig> = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("config {}: {e}", p.display())))?;
            Some(serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", p.display())))?)
        }
        None => None,
    };
    let command = match (&cli.command, &file) {
        (Some(c), _) => c.clone(),
        (None, Some(f)) => f.command.clone(),
        (None, None) => return Err(CliError::Usage("no subcommand given (see --help)".into())),
    };
    let format = cli.format.or(file.as_ref().map(|f| f.format)).unwrap_or_else(|| default_format(&command));
    Ok(RunConfig {
        command,
        format,
        seed: cli.seed.or(file.as_ref().map(|f| f.seed)).unwrap_or(0),
        threads: cli.threads.or(file.as_ref().and_then(|f| f.threads)),
    })
}

fn run_cli(cli: Cli) -> Result<Status, CliError> {
    let cfg = resolve(&cli)?;
    if let Some(n) = cfg.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let start = Instant::now();
    let (b, hit) = cached_body(cli.cache_dir.as_deref(), &cfg, cli.timeout_secs)?;
    let elapsed = start.elapsed().as_millis();
    eprintln!("catfrob: {} in {elapsed} ms{}", status_word(b.status), if hit { " (cached)" } else { "" });
    let timings_ms = cli.timings.then(|| {
        let mut m = BTreeMap::new();
        m.insert("total".to_string(), elapsed);
        m
    });
    let report = Report {
        schema: SCHEMA.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: cfg,
        conventions: conventions(),
        status: b.status,
        checks: b.checks,
        result: b.result,
        timings_ms,
    };
    let text = render(&report)?;
    match &cli.out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(report.status)
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
    }
}

/// Entry point; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run_cli(cli) {
        Ok(Status::Pass) => 0,
        Ok(Status::Fail) => 1,
        Err(e) => {
            eprintln!("catfrob: {e}");
            e.exit_code()
        }
    }
}
