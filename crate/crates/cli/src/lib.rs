//! Command-line front end for the `divsum` crate.
//!
//! Every subcommand produces a JSON report wrapped in
//! `{"schema": 1, "command", "ok", "report"}`; exact rationals appear as
//! `"p/q"` strings. `--table` renders the same report as indented text.
//! Exit codes: 0 when every check holds, 1 on a failed check, 2 on a usage
//! error, 3 when precision escalation is exhausted.

pub mod acceptance;
pub mod plot;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use divsum::borcherds::{extract_cd, rebuild_product, verify_equivariance, CmProduct};
use divsum::bqf::{class_reps, HeegnerPoint};
use divsum::eisenstein::{trace_cm, verify_dit};
use divsum::level11::{bklor_check, level11_zeros, weight2_form, Level11};
use divsum::modcurve::valence_check;
use divsum::qseries::forms::{delta, e2_level, eisenstein_qexp, faber_jn, j_invariant};
use divsum::qseries::{eta_expand, EtaQuotient, QSeries, Rat};
use divsum::regint::{eisen_case_check, rohrlich_check, rohrlich_constants, RohrlichForm, EISEN_Y};
use divsum::{Error, ModularPoint};

/// Version of the JSON envelope.
pub const SCHEMA: u32 = 1;

/// Exit code for a failed check.
pub const EXIT_CHECK: i32 = 1;
/// Exit code for a usage error.
pub const EXIT_USAGE: i32 = 2;
/// Exit code when precision escalation is exhausted.
pub const EXIT_PRECISION: i32 = 3;

fn parse_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if t > 1e-14 && t < 1e-1 {
        Ok(t)
    } else {
        Err(format!("tolerance {t} outside (1e-14, 1e-1)"))
    }
}

fn parse_point(s: &str) -> Result<ModularPoint, String> {
    ModularPoint::parse(s).ok_or_else(|| format!("{s:?} is not a point u+vi with v > 0"))
}

/// Exact and numerical checks of divisor-sum identities for modular forms.
#[derive(Debug, Parser)]
#[command(name = "divsum", version, about)]
pub struct Cli {
    /// Number of series terms.
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(i64).range(8..))]
    pub prec: i64,
    /// Acceptance tolerance; each command has its own default.
    #[arg(long, global = true, value_parser = parse_tol)]
    pub tol: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "DIVSUM_THREADS")]
    pub threads: Option<usize>,
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "table")]
    pub json: bool,
    /// Emit an indented text rendering instead of JSON.
    #[arg(long, global = true)]
    pub table: bool,
    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write an SVG of the sample grid and the relevant points.
    #[arg(long, global = true)]
    pub plot: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a q-expansion: E2, E4, E6, Delta, j, j<n>, eta:<spec>, h11, f11, f11:<m>.
    Qexp {
        form: String,
    },
    /// Valence formula for an eta quotient "delta^r,...@N".
    Valence {
        #[arg(long)]
        eta: String,
    },
    /// Reduced forms of a discriminant, with genus characters for --D.
    Classgroup {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long = "D", allow_hyphen_values = true)]
        big_d: Option<i64>,
    },
    /// Twisted trace of E(·, s) over CM points of discriminant dD.
    Trace {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long = "D", allow_hyphen_values = true)]
        big_d: i64,
        #[arg(long, default_value_t = 2.0)]
        s: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        s_im: f64,
    },
    /// Decomposition of the twisted trace into L-values and M_d(m, s).
    Dit {
        #[arg(long = "D", allow_hyphen_values = true)]
        big_d: i64,
        #[arg(long = "Dp", allow_hyphen_values = true)]
        dp: i64,
        #[arg(long, default_value_t = 1)]
        m: u64,
        #[arg(long, default_value_t = 2.0)]
        s: f64,
    },
    /// CM product Ψ_D(f_d): exact expansion, integrality and extraction.
    Borcherds {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long = "D", allow_hyphen_values = true)]
        big_d: i64,
    },
    /// Hecke equivariance of CM products at sample points.
    Equivariance {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long = "D", allow_hyphen_values = true)]
        big_d: i64,
        #[arg(long)]
        p: u64,
        /// Points "u+vi" (repeatable).
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        tau: Vec<ModularPoint>,
    },
    /// Level-11 identity f_{11,m}(z₊) + f_{11,m}(z₋) = rhs(m).
    Bklor11 {
        /// Pole orders (repeatable; default 2, 3, 4).
        #[arg(long)]
        m: Vec<i64>,
    },
    /// Zeros of the level-11 weight-2 form.
    Zeros11,
    /// Rohrlich's formula for E4 or E6.
    Rohrlich {
        #[arg(long, default_value = "E4")]
        f: String,
        /// Truncation height of the domain.
        #[arg(long, default_value_t = 8.0)]
        y: f64,
    },
    /// Regularized pairing of E(·, s) with log|Ψ_D(f_d)|.
    Eisencase {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long = "D", allow_hyphen_values = true)]
        big_d: i64,
        #[arg(long, default_value_t = 2.0)]
        s: f64,
    },
    /// Run the full acceptance suite.
    Selftest,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Qexp { .. } => "qexp",
            Command::Valence { .. } => "valence",
            Command::Classgroup { .. } => "classgroup",
            Command::Trace { .. } => "trace",
            Command::Dit { .. } => "dit",
            Command::Borcherds { .. } => "borcherds",
            Command::Equivariance { .. } => "equivariance",
            Command::Bklor11 { .. } => "bklor11",
            Command::Zeros11 => "zeros11",
            Command::Rohrlich { .. } => "rohrlich",
            Command::Eisencase { .. } => "eisencase",
            Command::Selftest => "selftest",
        }
    }

    /// Tolerance used when `--tol` is not given.
    pub fn default_tol(&self) -> f64 {
        match self {
            Command::Equivariance { .. } => 1e-5,
            Command::Bklor11 { .. } => 1e-4,
            Command::Rohrlich { .. } | Command::Eisencase { .. } => 1e-3,
            _ => 1e-6,
        }
    }
}

/// Result of one subcommand before rendering.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub ok: bool,
    pub report: Value,
    /// Lines printed verbatim in table mode instead of the generic rendering.
    pub lines: Option<Vec<String>>,
}

impl Outcome {
    fn new(ok: bool, report: Value) -> Self {
        Outcome { ok, report, lines: None }
    }
}

/// What `run` writes and the exit status.
#[derive(Debug, Clone)]
pub struct Rendered {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Map a library error to an exit code.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::PrecisionExhausted { .. } => EXIT_PRECISION,
        Error::OutOfRange(_)
        | Error::InvalidDiscriminant(_)
        | Error::NotFundamental(_)
        | Error::Parse(_)
        | Error::PrimeDividesDiscriminant { .. }
        | Error::TrivialCharacter(_)
        | Error::NontrivialMultiplier(_) => EXIT_USAGE,
        _ => EXIT_CHECK,
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn series_value(s: &QSeries<Rat>) -> Value {
    s.to_json()
}

fn qexp_form(form: &str, prec: i64) -> divsum::Result<QSeries<Rat>> {
    let f = form.trim();
    if let Some(spec) = f.strip_prefix("eta:") {
        return Ok(eta_expand(&EtaQuotient::parse(spec)?, prec));
    }
    if let Some(m) = f.strip_prefix("f11:") {
        let m: i64 = m.parse().map_err(|_| Error::Parse(format!("pole order {m:?}")))?;
        return Ok(Level11::new(prec, m).basis(m)?.series);
    }
    match f {
        "E2" => eisenstein_qexp(2, prec),
        "E4" => eisenstein_qexp(4, prec),
        "E6" => eisenstein_qexp(6, prec),
        "Delta" => Ok(delta(prec)),
        "j" => Ok(j_invariant(prec)),
        "h11" => Ok(divsum::level11::h11(prec)),
        "E2_11" => Ok(e2_level(11, prec)),
        "f11" => Ok(weight2_form(prec)),
        _ => match f.strip_prefix('j').and_then(|n| n.parse::<usize>().ok()) {
            Some(n) if n >= 1 => Ok(faber_jn(n, prec)),
            _ => Err(Error::Parse(format!("unknown form {form:?}"))),
        },
    }
}

/// Execute a parsed command line.
pub fn execute(cli: &Cli) -> divsum::Result<Outcome> {
    let tol = cli.tol.unwrap_or_else(|| cli.command.default_tol());
    let prec = cli.prec;
    let mut marks: Vec<(String, ModularPoint)> = Vec::new();
    let outcome = match &cli.command {
        Command::Qexp { form } => {
            let s = qexp_form(form, prec)?;
            Outcome::new(true, json!({ "form": form, "series": series_value(&s) }))
        }
        Command::Valence { eta } => {
            let r = valence_check(&EtaQuotient::parse(eta)?)?;
            Outcome::new(r.equal, to_value(&r))
        }
        Command::Classgroup { disc, big_d } => {
            let forms = class_reps(*disc)?;
            let mut rows = Vec::new();
            for q in &forms {
                let h = HeegnerPoint::new(*q);
                let chi = match big_d {
                    Some(dd) => Some(q.genus_char(*dd)?),
                    None => None,
                };
                marks.push((q.to_string(), h.alpha()));
                rows.push(json!({
                    "form": q.to_string(),
                    "omega": q.stabilizer_order(),
                    "alpha": [h.alpha_u, h.alpha_v],
                    "chi": chi,
                }));
            }
            Outcome::new(true, json!({ "disc": disc, "class_number": forms.len(), "forms": rows }))
        }
        Command::Trace { d, big_d, s, s_im } => {
            let r = trace_cm(*d, *big_d, Complex64::new(*s, *s_im))?;
            for c in &r.classes {
                marks.push((c.form.to_string(), HeegnerPoint::new(c.form).alpha()));
            }
            Outcome::new(true, to_value(&r))
        }
        Command::Dit { big_d, dp, m, s } => {
            let r = verify_dit(*big_d, *dp, *m, Complex64::new(*s, 0.0))?;
            Outcome::new(r.rel_err < tol, to_value(&r))
        }
        Command::Borcherds { d, big_d } => {
            let p = CmProduct::new(*d, *big_d)?;
            let s = p.series(prec)?;
            let c = extract_cd(&s, (prec - 1) as usize)?;
            let round_trip = rebuild_product(*big_d, &c, prec)? == s;
            let integral = s.is_integral();
            let coeffs: Vec<Value> = (0..prec)
                .map(|n| {
                    let (x, y) = s.coeff(n);
                    json!([x.to_string(), y.to_string()])
                })
                .collect();
            for f in &p.factors {
                marks.push((format!("{} χ={}", f.form, f.chi), HeegnerPoint::new(f.form).alpha()));
            }
            Outcome::new(
                integral && round_trip,
                json!({
                    "product": to_value(&p),
                    "coefficients_x_y": coeffs,
                    "integral": integral,
                    "c_d": c.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "round_trip": round_trip,
                }),
            )
        }
        Command::Equivariance { d, big_d, p, tau } => {
            let taus = if tau.is_empty() {
                vec![ModularPoint::new(0.13, 1.21), ModularPoint::new(0.3, 1.4), ModularPoint::new(-0.27, 0.95)]
            } else {
                tau.clone()
            };
            marks.extend(taus.iter().map(|t| (t.to_string(), *t)));
            let rows = verify_equivariance(*d, *big_d, *p, &taus)?;
            let ok = rows.iter().all(|r| r.abs_err < tol);
            Outcome::new(ok, json!({ "d": d, "D": big_d, "p": p, "rows": to_value(&rows) }))
        }
        Command::Bklor11 { m } => {
            let ms = if m.is_empty() { vec![2, 3, 4] } else { m.clone() };
            let r = bklor_check(&ms)?;
            let ok = r.rows.iter().all(|row| row.abs_err < tol);
            for (z, name) in r.zeros.iter().zip(["z+", "z-"]) {
                marks.push((name.into(), ModularPoint::new(z[0], z[1])));
            }
            Outcome::new(ok, to_value(&r))
        }
        Command::Zeros11 => {
            let zeros = level11_zeros()?;
            let v = 19f64.sqrt() / 22.0;
            let mut rows = Vec::new();
            let mut ok = zeros.len() == 2;
            for (z, sign) in zeros.iter().zip([1.0, -1.0]) {
                let want = Complex64::new(sign * 5.0 / 22.0, v);
                let err = (z.to_complex() - want).norm();
                ok &= err < tol;
                marks.push((if sign > 0.0 { "z+" } else { "z-" }.into(), *z));
                rows.push(json!({ "u": z.u, "v": z.v, "closed_form": [want.re, want.im], "abs_err": err }));
            }
            Outcome::new(ok, json!({ "form": "f11", "zeros": rows, "fricke_circle_radius": 1.0 / 11f64.sqrt() }))
        }
        Command::Rohrlich { f, y } => {
            let form = RohrlichForm::parse(f).ok_or_else(|| Error::Parse(format!("form {f:?} (E4 or E6)")))?;
            let r = rohrlich_check(form, *y, 1e-8)?;
            let (a, b) = rohrlich_constants(form.weight() as f64);
            marks.push((format!("{form:?} zero"), form.zero().0));
            Outcome::new(
                r.abs_err < tol,
                json!({
                    "lhs": r.lhs, "rhs": r.rhs, "err": r.abs_err, "quad_error": r.quad_error,
                    "cells_used": r.cells_used, "runtime_ms": r.runtime_ms,
                    "constants": { "kronecker_form": a, "classical_form": b, "diff": (a - b).abs() },
                }),
            )
        }
        Command::Eisencase { d, big_d, s } => {
            let r = eisen_case_check(*d, *big_d, *s, 1e-8)?;
            Outcome::new(
                r.rel_err < tol,
                json!({
                    "d": d, "D": big_d, "s": s, "lhs": r.lhs, "rhs": r.rhs, "err": r.rel_err,
                    "quad_error": r.quad_error, "cells_used": r.cells_used, "runtime_ms": r.runtime_ms,
                    "truncation_height": EISEN_Y,
                }),
            )
        }
        Command::Selftest => {
            let results = acceptance::run_all(cli.seed);
            let ok = results.iter().all(|c| c.passed);
            let lines = results.iter().map(|c| c.line()).collect();
            Outcome { ok, report: json!({ "criteria": to_value(&results) }), lines: Some(lines) }
        }
    };
    if let Some(path) = &cli.plot {
        let svg = plot::render(&marks, matches!(cli.command, Command::Zeros11 | Command::Bklor11 { .. }));
        std::fs::write(path, svg).map_err(|e| Error::OutOfRange(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(outcome)
}

/// Indented text rendering of a JSON value.
pub fn render_table(v: &Value) -> String {
    fn walk(v: &Value, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    match x {
                        Value::Object(_) | Value::Array(_) if !is_flat(x) => {
                            out.push_str(&format!("{pad}{k}:\n"));
                            walk(x, indent + 1, out);
                        }
                        _ => out.push_str(&format!("{pad}{k}: {}\n", inline(x))),
                    }
                }
            }
            Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    if is_flat(x) {
                        out.push_str(&format!("{pad}[{i}] {}\n", inline(x)));
                    } else {
                        out.push_str(&format!("{pad}[{i}]\n"));
                        walk(x, indent + 1, out);
                    }
                }
            }
            _ => out.push_str(&format!("{pad}{}\n", inline(v))),
        }
    }
    fn is_flat(v: &Value) -> bool {
        match v {
            Value::Array(a) => a.len() <= 4 && a.iter().all(|x| !x.is_object() && !x.is_array()),
            Value::Object(_) => false,
            _ => true,
        }
    }
    fn inline(v: &Value) -> String {
        match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        }
    }
    let mut out = String::new();
    walk(v, 0, &mut out);
    out
}

/// Run a parsed command line and render its output.
pub fn run(cli: &Cli) -> Rendered {
    if let Some(n) = cli.threads {
        // Only the first call in a process can size the global pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let name = cli.command.name();
    match execute(cli) {
        Ok(o) => {
            let stdout = if cli.table {
                match &o.lines {
                    Some(lines) => lines.join("\n") + "\n",
                    None => render_table(&o.report),
                }
            } else {
                let env = json!({ "schema": SCHEMA, "command": name, "ok": o.ok, "report": o.report });
                serde_json::to_string_pretty(&env).expect("JSON") + "\n"
            };
            Rendered { stdout, stderr: String::new(), code: if o.ok { 0 } else { EXIT_CHECK } }
        }
        Err(e) => {
            let env = json!({ "schema": SCHEMA, "command": name, "ok": false, "error": e.to_string() });
            Rendered {
                stdout: serde_json::to_string_pretty(&env).expect("JSON") + "\n",
                stderr: format!("divsum {name}: {e}\n"),
                code: error_code(&e),
            }
        }
    }
}
