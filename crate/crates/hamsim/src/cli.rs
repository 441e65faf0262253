//! Batch command-line surface: JSON in, JSON out.
//!
//! Six subcommands tie the library together:
//!
//! ```text
//! hamsim canonicalize   --input H.json           -> {h, u, v, removed_local_terms}
//! hamsim factor         --input pair.json        -> {s, binding_constraints, verdict_under}
//! hamsim synthesize     --input pair.json [--s]  -> protocol {terms, s, ...}
//! hamsim verify         --input job.json [--t-sweep]  -> {reconstruction_residual, trotter}
//! hamsim separation     --example 1|2 [--d]      -> witness report
//! hamsim twirl-check    --input twirl.json       -> {residual}
//! ```
//!
//! Every command reads stdin or `--input`, writes stdout or `--output`, and
//! is deterministic: floats are serialized with 17 significant digits and
//! object keys are sorted, so identical inputs produce byte-identical
//! output. Exit codes: 0 success, 1 domain failure (for example a factor
//! above the optimum), 2 input validation.
//!
//! A Hamiltonian is either a dense matrix or a Pauli coefficient table,
//! complex entries as `[re, im]` pairs, matrices row-major:
//!
//! ```json
//! {"matrix": [[[0.0,0.0], ...] , ...]}
//! {"pauli": {"a": 0.0, "m": [0,0,0], "n": [0,0,0], "h": [[1,0,0],[0,1,0],[0,0,1]]}}
//! ```

use std::io::Read;

use clap::{Args, Parser, Subcommand};
use nalgebra::Matrix3;
use serde_json::{json, Value};

use crate::matcore::{c64, CMat};
use crate::pauli_ham::{canonicalize, from_matrix, to_matrix, CanonicalForm, PauliHamiltonian};
use crate::protocol::{
    reconstruct, synthesize, verify_twirl, AncillaConjugation, LocalUnitaryPair, ProtocolTerm,
    SimulationProtocol,
};
use crate::trotter::scaling_check;
use crate::{majorization, separations, HamsimError};

#[derive(Parser, Debug)]
#[command(
    name = "hamsim",
    version,
    about = "Two-qubit Hamiltonian simulation toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct IoArgs {
    /// Input file (defaults to stdin).
    #[arg(long)]
    input: Option<std::path::PathBuf>,
    /// Output file (defaults to stdout).
    #[arg(long)]
    output: Option<std::path::PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce a Hamiltonian to canonical form.
    Canonicalize {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Optimal simulation factor of a target given a source.
    Factor {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Synthesize a local-unitary protocol.
    Synthesize {
        #[command(flatten)]
        io: IoArgs,
        /// Simulation factor (defaults to the optimum).
        #[arg(long)]
        s: Option<f64>,
    },
    /// Check a protocol: reconstruction residual and product-formula sweep.
    Verify {
        #[command(flatten)]
        io: IoArgs,
        /// Sweep spec "start,factor,count", default "0.1,0.5,9".
        #[arg(long, value_name = "SPEC")]
        t_sweep: Option<String>,
    },
    /// Machine-check an LU vs LU+anc separation construction.
    Separation {
        #[command(flatten)]
        io: IoArgs,
        /// Which construction: 1 (two d-level systems) or 2 (three qubits).
        #[arg(long)]
        example: Option<u8>,
        /// Level count for construction 1 (default 3).
        #[arg(long)]
        d: Option<usize>,
    },
    /// Residual of the phase-twirl identity for given U, V, H.
    TwirlCheck {
        #[command(flatten)]
        io: IoArgs,
    },
}

/// A failure carrying its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn validation(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    fn domain(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<HamsimError> for CliError {
    fn from(err: HamsimError) -> Self {
        let code = match err {
            HamsimError::NotHermitian { .. }
            | HamsimError::DimensionMismatch { .. }
            | HamsimError::NotSpecialOrthogonal { .. }
            | HamsimError::UnsortedSpectrum
            | HamsimError::NonZeroTrace { .. }
            | HamsimError::NotCanonical { .. }
            | HamsimError::NotBellDiagonal { .. } => 2,
            HamsimError::NotMajorized { .. }
            | HamsimError::FactorTooLarge { .. }
            | HamsimError::ZeroFactor(_)
            | HamsimError::BadReconstruction { .. }
            | HamsimError::Domain(_) => 1,
        };
        CliError {
            code,
            message: err.to_string(),
        }
    }
}

/// Parse argv, run, print. Returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {}", err.message);
            err.code
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Canonicalize { io } => {
            let input = read_input(&io)?;
            let out = cmd_canonicalize(&input)?;
            write_output(&io, &out)
        }
        Command::Factor { io } => {
            let input = read_input(&io)?;
            let out = cmd_factor(&input)?;
            write_output(&io, &out)
        }
        Command::Synthesize { io, s } => {
            let input = read_input(&io)?;
            let out = cmd_synthesize(&input, s)?;
            write_output(&io, &out)
        }
        Command::Verify { io, t_sweep } => {
            let input = read_input(&io)?;
            let out = cmd_verify(&input, t_sweep.as_deref())?;
            write_output(&io, &out)
        }
        Command::Separation { io, example, d } => {
            let input = if io.input.is_some() {
                Some(read_input(&io)?)
            } else {
                None
            };
            let out = cmd_separation(input.as_ref(), example, d)?;
            write_output(&io, &out)
        }
        Command::TwirlCheck { io } => {
            let input = read_input(&io)?;
            let out = cmd_twirl_check(&input)?;
            write_output(&io, &out)
        }
    }
}

fn read_input(io: &IoArgs) -> Result<Value, CliError> {
    let raw = match &io.input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| CliError::validation(format!("cannot read stdin: {e}")))?;
            buf
        }
    };
    serde_json::from_str(&raw).map_err(|e| {
        CliError::validation(format!(
            "malformed JSON at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })
}

fn write_output(io: &IoArgs, value: &Value) -> Result<(), CliError> {
    let mut text = String::new();
    render_json(value, 0, &mut text);
    text.push('\n');
    match &io.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::validation(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// deterministic JSON rendering: 17 significant digits, sorted keys
// ---------------------------------------------------------------------------

fn render_json(value: &Value, indent: usize, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                out.push_str(&format!("{:.16e}", n.as_f64().unwrap()));
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).unwrap()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push('\n');
                out.push_str(&"  ".repeat(indent + 1));
                render_json(item, indent + 1, out);
            }
            out.push('\n');
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            // serde_json's default map preserves insertion order only with a
            // feature flag; sort explicitly for byte-identical output.
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (k, key) in keys.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push('\n');
                out.push_str(&"  ".repeat(indent + 1));
                out.push_str(&serde_json::to_string(key).unwrap());
                out.push_str(": ");
                render_json(&map[key.as_str()], indent + 1, out);
            }
            out.push('\n');
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
    }
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn cmat_to_json(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| {
                Value::Array(
                    (0..m.ncols())
                        .map(|j| Value::Array(vec![num(m[(i, j)].re), num(m[(i, j)].im)]))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn reals(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| num(x)).collect())
}

// ---------------------------------------------------------------------------
// input parsing
// ---------------------------------------------------------------------------

fn field<'v>(value: &'v Value, key: &str) -> Result<&'v Value, CliError> {
    value
        .get(key)
        .ok_or_else(|| CliError::validation(format!("missing field '{key}'")))
}

fn parse_f64(value: &Value, what: &str) -> Result<f64, CliError> {
    value
        .as_f64()
        .ok_or_else(|| CliError::validation(format!("{what}: expected a number")))
}

fn parse_real_vec(value: &Value, len: usize, what: &str) -> Result<Vec<f64>, CliError> {
    let arr = value
        .as_array()
        .ok_or_else(|| CliError::validation(format!("{what}: expected an array")))?;
    if arr.len() != len {
        return Err(CliError::validation(format!(
            "{what}: expected {len} entries, got {}",
            arr.len()
        )));
    }
    arr.iter().map(|v| parse_f64(v, what)).collect()
}

fn parse_cmat(value: &Value, what: &str) -> Result<CMat, CliError> {
    let rows = value.as_array().ok_or_else(|| {
        CliError::validation(format!("{what}: expected a matrix (array of rows)"))
    })?;
    let n = rows.len();
    if n == 0 {
        return Err(CliError::validation(format!("{what}: empty matrix")));
    }
    let mut out = CMat::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let cols = row
            .as_array()
            .ok_or_else(|| CliError::validation(format!("{what}: row {i} is not an array")))?;
        if cols.len() != n {
            return Err(CliError::validation(format!(
                "{what}: row {i} has {} entries, expected {n} (square matrix)",
                cols.len()
            )));
        }
        for (j, entry) in cols.iter().enumerate() {
            let pair =
                parse_real_vec(entry, 2, &format!("{what}[{i}][{j}] (complex as [re, im])"))?;
            out[(i, j)] = c64(pair[0], pair[1]);
        }
    }
    Ok(out)
}

/// Accepts `{"matrix": ...}` or `{"pauli": {...}}`.
fn parse_hamiltonian(value: &Value, what: &str) -> Result<PauliHamiltonian, CliError> {
    match (value.get("matrix"), value.get("pauli")) {
        (Some(m), None) => {
            let mat = parse_cmat(m, &format!("{what}.matrix"))?;
            if mat.nrows() != 4 {
                return Err(CliError::validation(format!(
                    "{what}.matrix: expected 4x4, got {0}x{0}",
                    mat.nrows()
                )));
            }
            Ok(from_matrix(&mat)?)
        }
        (None, Some(p)) => {
            let a = parse_f64(field(p, "a")?, &format!("{what}.pauli.a"))?;
            let m = parse_real_vec(field(p, "m")?, 3, &format!("{what}.pauli.m"))?;
            let n = parse_real_vec(field(p, "n")?, 3, &format!("{what}.pauli.n"))?;
            let h_rows = field(p, "h")?
                .as_array()
                .ok_or_else(|| CliError::validation(format!("{what}.pauli.h: expected 3 rows")))?;
            if h_rows.len() != 3 {
                return Err(CliError::validation(format!(
                    "{what}.pauli.h: expected 3 rows"
                )));
            }
            let mut h = Matrix3::zeros();
            for (i, row) in h_rows.iter().enumerate() {
                let r = parse_real_vec(row, 3, &format!("{what}.pauli.h[{i}]"))?;
                for j in 0..3 {
                    h[(i, j)] = r[j];
                }
            }
            Ok(PauliHamiltonian {
                a,
                m: [m[0], m[1], m[2]],
                n: [n[0], n[1], n[2]],
                h,
            })
        }
        _ => Err(CliError::validation(format!(
            "{what}: expected exactly one of 'matrix' or 'pauli'"
        ))),
    }
}

fn parse_protocol(value: &Value) -> Result<SimulationProtocol, CliError> {
    let s = parse_f64(field(value, "s")?, "protocol.s")?;
    let source_h = parse_real_vec(field(value, "source_h")?, 3, "protocol.source_h")?;
    let target_h = parse_real_vec(field(value, "target_h")?, 3, "protocol.target_h")?;
    let terms_json = field(value, "terms")?
        .as_array()
        .ok_or_else(|| CliError::validation("protocol.terms: expected an array"))?;
    let mut terms = Vec::with_capacity(terms_json.len());
    for (k, term) in terms_json.iter().enumerate() {
        let p = parse_f64(field(term, "p")?, &format!("protocol.terms[{k}].p"))?;
        let u = parse_cmat(field(term, "u")?, &format!("protocol.terms[{k}].u"))?;
        let v = parse_cmat(field(term, "v")?, &format!("protocol.terms[{k}].v"))?;
        terms.push(ProtocolTerm {
            p,
            pair: LocalUnitaryPair::new(u, v)?,
        });
    }
    let total: f64 = terms.iter().map(|t| t.p).sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(CliError::validation(format!(
            "protocol.terms: weights sum to {total}, expected 1"
        )));
    }
    Ok(SimulationProtocol {
        terms,
        s,
        target_h: [target_h[0], target_h[1], target_h[2]],
        source_h: [source_h[0], source_h[1], source_h[2]],
    })
}

fn parse_t_sweep(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::validation(
            "--t-sweep: expected \"start,factor,count\"",
        ));
    }
    let start: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| CliError::validation("--t-sweep: bad start"))?;
    let factor: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| CliError::validation("--t-sweep: bad factor"))?;
    let count: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| CliError::validation("--t-sweep: bad count"))?;
    let start_ok = start.is_finite() && start > 0.0;
    let factor_ok = factor.is_finite() && factor > 0.0 && factor < 1.0;
    if !start_ok || !factor_ok || !(2..=64).contains(&count) {
        return Err(CliError::validation(
            "--t-sweep: need start > 0, 0 < factor < 1, 2 <= count <= 64",
        ));
    }
    Ok((0..count).map(|j| start * factor.powi(j as i32)).collect())
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

fn canonical_json(form: &CanonicalForm) -> Value {
    json!({
        "h": reals(&form.h),
        "u": cmat_to_json(&form.u),
        "v": cmat_to_json(&form.v),
        "removed_local_terms": {
            "a": num(form.removed_a),
            "m": reals(&form.removed_m),
            "n": reals(&form.removed_n),
        }
    })
}

pub fn cmd_canonicalize(input: &Value) -> Result<Value, CliError> {
    let ham = parse_hamiltonian(input, "hamiltonian")?;
    Ok(canonical_json(&canonicalize(&ham)))
}

pub fn cmd_factor(input: &Value) -> Result<Value, CliError> {
    let source = canonicalize(&parse_hamiltonian(field(input, "source")?, "source")?);
    let target = canonicalize(&parse_hamiltonian(field(input, "target")?, "target")?);
    let factor = majorization::simulation_factor(&target.spectrum(), &source.spectrum());
    let efficient = factor.value.is_none_or(|s| s >= 1.0 - 1e-12);
    let s_value = match factor.value {
        Some(s) => num(s),
        None => Value::String("inf".to_string()),
    };
    Ok(json!({
        "s": s_value,
        "binding_constraints": factor.binding_constraints,
        "verdict_under": {
            "LU": efficient,
            "LU+anc": efficient,
            "LO": efficient,
            "LOCC": efficient,
        }
    }))
}

fn protocol_json(protocol: &SimulationProtocol) -> Value {
    json!({
        "s": num(protocol.s),
        "source_h": reals(&protocol.source_h),
        "target_h": reals(&protocol.target_h),
        "terms": protocol.terms.iter().map(|t| json!({
            "p": num(t.p),
            "u": cmat_to_json(&t.pair.u),
            "v": cmat_to_json(&t.pair.v),
        })).collect::<Vec<_>>(),
    })
}

pub fn cmd_synthesize(input: &Value, s: Option<f64>) -> Result<Value, CliError> {
    let source = canonicalize(&parse_hamiltonian(field(input, "source")?, "source")?);
    let target = canonicalize(&parse_hamiltonian(field(input, "target")?, "target")?);
    let s = match s {
        Some(s) => s,
        None => majorization::simulation_factor(&target.spectrum(), &source.spectrum())
            .value
            .ok_or_else(|| {
                CliError::domain(
                    "target is the zero Hamiltonian: the optimal factor is unbounded, pass --s",
                )
            })?,
    };
    let protocol = synthesize(&source, &target, s)?;
    Ok(protocol_json(&protocol))
}

pub fn cmd_verify(input: &Value, t_sweep: Option<&str>) -> Result<Value, CliError> {
    let protocol = parse_protocol(field(input, "protocol")?)?;
    let source = canonicalize(&parse_hamiltonian(field(input, "source")?, "source")?);
    for k in 0..3 {
        if (source.h[k] - protocol.source_h[k]).abs() > 1e-9 {
            return Err(CliError::domain(format!(
                "source does not match the protocol: canonical h {:?} vs protocol source_h {:?}",
                source.h, protocol.source_h
            )));
        }
    }
    let times = parse_t_sweep(t_sweep.unwrap_or("0.1,0.5,9"))?;
    let h_source = source.canonical_matrix();
    let h_target = to_matrix(&PauliHamiltonian::from_diagonal_coupling(protocol.target_h));
    let mixed = reconstruct(&protocol, &h_source);
    let wanted = h_target.map(|z| z * c64(protocol.s, 0.));
    let reconstruction_residual = (mixed - wanted).norm();
    let report = scaling_check(&protocol, &h_source, &h_target, protocol.s, &times)?;
    Ok(json!({
        "reconstruction_residual": num(reconstruction_residual),
        "trotter": {
            "times": reals(&report.times),
            "errors": reals(&report.errors),
            "fitted_slope": num(report.fitted_slope),
            "max_window_error": num(report.max_window_error),
            "second_order": report.second_order(),
        }
    }))
}

pub fn cmd_separation(
    input: Option<&Value>,
    example: Option<u8>,
    d: Option<usize>,
) -> Result<Value, CliError> {
    let example = example
        .or_else(|| {
            input
                .and_then(|v| v.get("example"))
                .and_then(Value::as_u64)
                .map(|x| x as u8)
        })
        .unwrap_or(1);
    let d = d
        .or_else(|| {
            input
                .and_then(|v| v.get("d"))
                .and_then(Value::as_u64)
                .map(|x| x as usize)
        })
        .unwrap_or(3);
    match example {
        1 => {
            let report = separations::example1(d)?;
            Ok(json!({
                "example": 1,
                "d": d,
                "achieved": report.achieved,
                "conjugation_residual": num(report.conjugation_residual),
                "forced_a": num(report.forced_a),
                "forced_m": cmat_to_json(&report.forced_m),
                "forced_n": cmat_to_json(&report.forced_n),
                "witness_value": num(report.witness_value),
                "certified": report.certified(),
            }))
        }
        2 => {
            let report = separations::example2();
            Ok(json!({
                "example": 2,
                "achieved": report.achieved,
                "slice_residual": num(report.slice_residual),
                "conjugation_residual": num(report.conjugation_residual),
                "source_slice_trace": num(report.source_slice_trace),
                "target_slice_trace": num(report.target_slice_trace),
                "certified": report.certified(),
            }))
        }
        other => Err(CliError::validation(format!(
            "--example must be 1 or 2, got {other}"
        ))),
    }
}

pub fn cmd_twirl_check(input: &Value) -> Result<Value, CliError> {
    let u = parse_cmat(field(input, "u")?, "u")?;
    let v = parse_cmat(field(input, "v")?, "v")?;
    let h = match input.get("h") {
        Some(h) if h.get("matrix").is_some() || h.get("pauli").is_some() => {
            if h.get("pauli").is_some() {
                to_matrix(&parse_hamiltonian(h, "h")?)
            } else {
                parse_cmat(field(h, "matrix")?, "h.matrix")?
            }
        }
        Some(h) => parse_cmat(h, "h")?,
        None => return Err(CliError::validation("missing field 'h'")),
    };
    let dim_a = match input.get("dim_a") {
        Some(v) => v
            .as_u64()
            .ok_or_else(|| CliError::validation("dim_a: expected an integer"))?
            as usize,
        None => 2,
    };
    let dim_b = match input.get("dim_b") {
        Some(v) => v
            .as_u64()
            .ok_or_else(|| CliError::validation("dim_b: expected an integer"))?
            as usize,
        None => {
            if dim_a == 0 || h.nrows() % dim_a != 0 {
                return Err(CliError::validation(format!(
                    "dim_a {dim_a} does not divide the Hamiltonian dimension {}",
                    h.nrows()
                )));
            }
            h.nrows() / dim_a
        }
    };
    let conj = AncillaConjugation::new(u, v, dim_a, dim_b)?;
    let residual = verify_twirl(&conj, &h)?;
    Ok(json!({ "residual": num(residual) }))
}
