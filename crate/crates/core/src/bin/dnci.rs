//! Command-line front end: expression-level operations, truncated-action
//! probes, and the verification suites, all emitting JSON on stdout.
//!
//! The signature comes from a JSON config file (`--config`) and/or the
//! `--n/--l/--phi` flags (flags win). Every printed element is in
//! canonical form and parses back to the same element.

use clap::{Parser, Subcommand};
use dnci_core::algebra::{adjoint, mul, theta, Element, Signature};
use dnci_core::deformation::{deformed_mul, verify_intertwiner, DeformationContext};
use dnci_core::ktheory::kgroups;
use dnci_core::normkit::{diagonal_symbol, pal_norm};
use dnci_core::parse::{parse_expression, parse_word};
use dnci_core::phase::{Angle, AngleAssignment, Mode};
use dnci_core::representation::{
    apply_element, extract_coefficients, MultiIndex, TruncatedState, Truncation,
};
use dnci_core::stinespring::{gram_matrix, StVector};
use dnci_core::suites::{run_suite, SuiteContext, SUITE_NAMES};
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "dnci",
    about = "Normal forms, truncated actions and verification suites for \
             algebras of phase-commuting isometries and unitaries"
)]
struct Cli {
    /// JSON config file (flags override its fields).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Number of generators.
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Number of isometries (the first l indices; the rest are unitaries).
    #[arg(long, global = true)]
    l: Option<usize>,

    /// Angle entry `i,j=VALUE` with VALUE a rational `p/q` or a decimal;
    /// repeatable. Unlisted pairs have angle zero.
    #[arg(long = "phi", global = true, value_name = "I,J=VALUE")]
    phi: Vec<String>,

    /// Truncation cutoff for representation-level commands.
    #[arg(long = "K", global = true, value_name = "CUTOFF")]
    cutoff: Option<u32>,

    /// Band margin: identities are checked on indices at least this far
    /// from the cutoff wall.
    #[arg(long, global = true)]
    band: Option<u32>,

    /// Comparison mode: `exact` (symbolic equality) or `numeric`
    /// (residuals up to 1e-12; required for decimal angles).
    #[arg(long, global = true, value_parser = ["exact", "numeric"])]
    mode: Option<String>,

    /// RNG seed for the randomized suites.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Pretty-print JSON output.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Normalize a product of generator letters; prints the scalar phase
    /// and the basis monomial.
    Normalize {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Multiply two elements.
    Mul {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Adjoint of an element.
    Adjoint {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Project onto the balanced part (the averaging projection).
    Theta {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Norm of a diagonal element (sums of `s^a s^{*a}`).
    Norm {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Truncated-action probes.
    Rep {
        #[command(subcommand)]
        cmd: RepCmd,
    },
    /// Recover an element from its truncated matrix entries.
    Extract {
        #[arg(allow_hyphen_values = true)]
        x: String,
        /// Exponent box `E,F,G` the element is known to live in.
        #[arg(long, default_value = "3,3,3")]
        bounds: String,
    },
    /// Induced-space computations.
    Stinespring {
        #[command(subcommand)]
        cmd: StCmd,
    },
    /// Deformed-product computations.
    Deform {
        #[command(subcommand)]
        cmd: DeformCmd,
    },
    /// K-group ranks for the configured signature shape.
    Ktheory,
    /// Run verification suites; one JSON report per line, exit 0 iff all
    /// pass.
    Verify {
        /// Suite name (repeatable); defaults to every suite.
        #[arg(long = "suite")]
        suites: Vec<String>,
    },
}

#[derive(Subcommand)]
enum RepCmd {
    /// Apply an element to the basis vector `e_k`, `k` given as `1,0,-2`.
    Apply {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        k: String,
    },
}

#[derive(Subcommand)]
enum StCmd {
    /// Gram matrix of labelled vectors `[x ⊗ ee_k]` at one level `k`.
    Gram {
        /// The level `k`, comma-separated, one entry per isometry.
        #[arg(long)]
        level: String,
        /// The element parts of the vectors.
        #[arg(allow_hyphen_values = true)]
        vectors: Vec<String>,
    },
}

#[derive(Subcommand)]
enum DeformCmd {
    /// Multiply two elements with the deformed product.
    Mul {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Check the diagonal intertwiner between the deformed and straight
    /// truncated actions.
    Verify,
}

#[derive(Deserialize, Default)]
struct ConfigFile {
    n: Option<usize>,
    l: Option<usize>,
    #[serde(default)]
    angles: Vec<AngleEntry>,
    mode: Option<String>,
    truncation: Option<TruncationEntry>,
    seed: Option<u64>,
    #[serde(default)]
    suites: Vec<String>,
}

#[derive(Deserialize)]
struct AngleEntry {
    i: usize,
    j: usize,
    value: Value,
}

#[derive(Deserialize)]
struct TruncationEntry {
    cutoff: u32,
    band: u32,
}

struct Resolved {
    sig: Signature,
    trunc: Truncation,
    seed: u64,
    numeric: bool,
    suites: Vec<String>,
    pretty: bool,
}

fn parse_angle_value(text: &str) -> Result<Angle, String> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p = i64::from_str(p.trim()).map_err(|e| format!("bad numerator '{p}': {e}"))?;
        let q = i64::from_str(q.trim()).map_err(|e| format!("bad denominator '{q}': {e}"))?;
        if q == 0 {
            return Err("zero denominator".into());
        }
        return Ok(Angle::Rational(BigRational::new(p.into(), q.into())));
    }
    if text.contains('.') {
        let v = f64::from_str(text).map_err(|e| format!("bad decimal '{text}': {e}"))?;
        return Ok(Angle::Real(v));
    }
    let p = i64::from_str(text).map_err(|e| format!("bad angle '{text}': {e}"))?;
    Ok(Angle::Rational(BigRational::from_integer(p.into())))
}

fn parse_phi_flag(flag: &str) -> Result<(usize, usize, Angle), String> {
    let (pair, value) = flag
        .split_once('=')
        .ok_or_else(|| format!("--phi expects I,J=VALUE, got '{flag}'"))?;
    let (i, j) = pair
        .split_once(',')
        .ok_or_else(|| format!("--phi expects I,J=VALUE, got '{flag}'"))?;
    let i = usize::from_str(i.trim()).map_err(|e| format!("bad index '{i}': {e}"))?;
    let j = usize::from_str(j.trim()).map_err(|e| format!("bad index '{j}': {e}"))?;
    Ok((i, j, parse_angle_value(value)?))
}

fn angle_from_json(value: &Value) -> Result<Angle, String> {
    match value {
        Value::String(s) => parse_angle_value(s),
        Value::Number(v) => {
            if let Some(int) = v.as_i64() {
                Ok(Angle::Rational(BigRational::from_integer(int.into())))
            } else {
                Ok(Angle::Real(v.as_f64().ok_or("bad numeric angle")?))
            }
        }
        other => Err(format!("angle value must be a string or number, got {other}")),
    }
}

fn resolve(cli: &Cli) -> Result<Resolved, String> {
    let file: ConfigFile = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("bad config file: {e}"))?
        }
        None => ConfigFile::default(),
    };

    let n = cli.n.or(file.n).unwrap_or(2);
    let l = cli.l.or(file.l).unwrap_or_else(|| n.min(1));

    let mut pairs: Vec<(usize, usize, Angle)> = Vec::new();
    for entry in &file.angles {
        pairs.push((entry.i, entry.j, angle_from_json(&entry.value)?));
    }
    for flag in &cli.phi {
        pairs.push(parse_phi_flag(flag)?);
    }

    let mode_name = cli
        .mode
        .clone()
        .or(file.mode)
        .unwrap_or_else(|| "exact".to_string());
    let numeric = match mode_name.as_str() {
        "exact" => false,
        "numeric" => true,
        other => return Err(format!("unknown mode '{other}'")),
    };
    let mode = if numeric { Mode::Numeric } else { Mode::Exact };

    let angles = AngleAssignment::new(n, pairs, mode).map_err(|e| e.to_string())?;
    let sig = Signature::new(n, l, angles).map_err(|e| e.to_string())?;

    let (cutoff, band) = match (&cli.cutoff, &cli.band, &file.truncation) {
        (Some(k), Some(b), _) => (*k, *b),
        (Some(k), None, Some(t)) => (*k, t.band),
        (Some(k), None, None) => (*k, 2.min(*k)),
        (None, Some(b), Some(t)) => (t.cutoff, *b),
        (None, Some(b), None) => (8.max(*b), *b),
        (None, None, Some(t)) => (t.cutoff, t.band),
        (None, None, None) => (8, 2),
    };
    let trunc = Truncation::new(cutoff, band).map_err(|e| e.to_string())?;

    Ok(Resolved {
        sig,
        trunc,
        seed: cli.seed.or(file.seed).unwrap_or(42),
        numeric,
        suites: file.suites,
        pretty: cli.pretty,
    })
}

fn emit(value: &Value, pretty: bool) {
    if pretty {
        println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
    } else {
        println!("{}", serde_json::to_string(value).expect("serializable"));
    }
}

fn element_json(sig: &Signature, x: &Element) -> Value {
    let numeric: Vec<Value> = x
        .eval_coefficients(sig.angles())
        .iter()
        .map(|(m, c)| json!({"monomial": m.to_string(), "re": c.re, "im": c.im}))
        .collect();
    json!({
        "element": x.to_string(),
        "terms": x.num_terms(),
        "numeric": numeric,
    })
}

fn parse_index_list<T: FromStr>(text: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|part| T::from_str(part.trim()).map_err(|e| format!("bad entry '{part}': {e}")))
        .collect()
}

fn state_json(sig: &Signature, state: &TruncatedState) -> Value {
    let entries: Vec<Value> = state
        .iter()
        .map(|(idx, amp)| {
            let ev = amp.eval(sig.angles());
            json!({
                "index": idx.to_string(),
                "amplitude": amp.to_string(),
                "re": ev.re,
                "im": ev.im,
            })
        })
        .collect();
    json!({"support": entries.len(), "amplitudes": entries})
}

fn run(cli: &Cli) -> Result<bool, String> {
    let r = resolve(cli)?;
    let sig = &r.sig;
    let parse = |text: &str| parse_expression(text, sig).map_err(|e| e.to_string());

    match &cli.cmd {
        Cmd::Normalize { expr } => {
            let word = parse_word(expr, sig).map_err(|e| e.to_string())?;
            let (phase, m) = dnci_core::algebra::normalize(sig, &word);
            let ev = phase.eval(sig.angles());
            emit(
                &json!({
                    "phase": phase.to_string(),
                    "phase_re": ev.re,
                    "phase_im": ev.im,
                    "monomial": m.to_string(),
                }),
                r.pretty,
            );
        }
        Cmd::Mul { x, y } => {
            let p = mul(sig, &parse(x)?, &parse(y)?);
            emit(&element_json(sig, &p), r.pretty);
        }
        Cmd::Adjoint { x } => {
            emit(&element_json(sig, &adjoint(sig, &parse(x)?)), r.pretty);
        }
        Cmd::Theta { x } => {
            emit(&element_json(sig, &theta(sig, &parse(x)?)), r.pretty);
        }
        Cmd::Norm { x } => {
            let x = parse(x)?;
            let norm = pal_norm(sig, &x).map_err(|e| e.to_string())?;
            let symbol = diagonal_symbol(sig, &x).map_err(|e| e.to_string())?;
            emit(
                &json!({
                    "value": norm.value,
                    "exact_sq": norm.exact_sq.as_ref().map(|v| v.to_string()),
                    "symbol": symbol.to_string(),
                }),
                r.pretty,
            );
        }
        Cmd::Rep {
            cmd: RepCmd::Apply { x, k },
        } => {
            let x = parse(x)?;
            let coords: Vec<i64> = parse_index_list(k)?;
            let idx = MultiIndex::new(sig, coords).map_err(|e| e.to_string())?;
            let state = apply_element(sig, &r.trunc, &x, &TruncatedState::basis(idx))
                .map_err(|e| e.to_string())?;
            emit(&state_json(sig, &state), r.pretty);
        }
        Cmd::Extract { x, bounds } => {
            let x = parse(x)?;
            let b: Vec<u32> = parse_index_list(bounds)?;
            if b.len() != 3 {
                return Err("--bounds expects E,F,G".into());
            }
            let mut oracle = |idx: &MultiIndex| {
                apply_element(sig, &r.trunc, &x, &TruncatedState::basis(idx.clone()))
            };
            let recovered = extract_coefficients(sig, &r.trunc, &mut oracle, (b[0], b[1], b[2]))
                .map_err(|e| e.to_string())?;
            emit(
                &json!({
                    "recovered": recovered.to_string(),
                    "matches": recovered == x,
                }),
                r.pretty,
            );
        }
        Cmd::Stinespring {
            cmd: StCmd::Gram { level, vectors },
        } => {
            let k: Vec<u32> = parse_index_list(level)?;
            let parsed: Result<Vec<StVector>, String> = vectors
                .iter()
                .map(|text| {
                    let x = parse(text)?;
                    StVector::new(sig, x, k.clone()).map_err(|e| e.to_string())
                })
                .collect();
            let parsed = parsed?;
            let gram = gram_matrix(sig, &parsed);
            let mut identity = true;
            let rows: Vec<Vec<Value>> = gram
                .iter()
                .enumerate()
                .map(|(r_ix, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(c_ix, entry)| {
                            let is_expected = if r_ix == c_ix {
                                entry == &dnci_core::phase::PhasePolynomial::one()
                            } else {
                                entry.is_zero()
                            };
                            identity &= is_expected;
                            let ev = entry.eval(sig.angles());
                            json!({"entry": entry.to_string(), "re": ev.re, "im": ev.im})
                        })
                        .collect()
                })
                .collect();
            emit(
                &json!({"size": gram.len(), "identity": identity, "gram": rows}),
                r.pretty,
            );
        }
        Cmd::Deform { cmd } => {
            let ctx = DeformationContext::new(sig.clone());
            match cmd {
                DeformCmd::Mul { x, y } => {
                    let p = deformed_mul(&ctx, &parse(x)?, &parse(y)?);
                    emit(&element_json(ctx.base(), &p), r.pretty);
                }
                DeformCmd::Verify => {
                    let report = verify_intertwiner(&ctx, &r.trunc);
                    let entries: Vec<Value> = report
                        .entries
                        .iter()
                        .map(|e| {
                            json!({
                                "generator": e.generator,
                                "star": e.star,
                                "vectors": e.vectors_checked,
                                "exact": e.exact_match,
                                "max_residual": e.max_residual,
                            })
                        })
                        .collect();
                    let pass = report.pass();
                    emit(
                        &json!({
                            "pass": pass,
                            "max_residual": report.max_residual(),
                            "entries": entries,
                        }),
                        r.pretty,
                    );
                    return Ok(pass);
                }
            }
        }
        Cmd::Ktheory => {
            let groups =
                kgroups(sig.n() as i64, sig.l() as i64).map_err(|e| e.to_string())?;
            emit(
                &json!({
                    "n": sig.n(),
                    "l": sig.l(),
                    "k0_rank": groups.k0_rank.to_string(),
                    "k1_rank": groups.k1_rank.to_string(),
                    "torsion_free": groups.torsion_free,
                }),
                r.pretty,
            );
        }
        Cmd::Verify { suites } => {
            let selected: Vec<String> = if !suites.is_empty() {
                suites.clone()
            } else if !r.suites.is_empty() {
                r.suites.clone()
            } else {
                SUITE_NAMES.iter().map(|s| s.to_string()).collect()
            };
            let ctx = SuiteContext::new(sig.clone(), r.trunc, r.seed, r.numeric);
            let mut all_pass = true;
            for name in &selected {
                let report = run_suite(&ctx, name).map_err(|e| e.to_string())?;
                all_pass &= report.pass();
                let value = serde_json::to_value(&report).expect("serializable report");
                emit(&value, r.pretty);
            }
            return Ok(all_pass);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}
