//! State-file parsing and deterministic report serialization.
//!
//! Reports are JSON with sorted keys and every float printed with 17
//! significant digits, so identical invocations produce byte-identical
//! output and every value round-trips exactly.

use std::fmt::Write as _;
use std::io::Read;

use serde_json::Value;
use triq::scalar::C;
use triq::{Invariants64, State64};

/// Input problems (exit code 1) versus numerical failures (exit code 2).
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Numerical(m) => m,
        }
    }
}

/// Sorts library errors into the two exit classes.
pub fn from_lib(err: triq::Error) -> CliError {
    use triq::Error::*;
    match err {
        NonPhysical { .. } | SingularInversion | NoConvergence | DegenerateGamma { .. }
        | NullOutcome { .. } => CliError::Numerical(err.to_string()),
        _ => CliError::Input(err.to_string()),
    }
}

fn read_source(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Input(format!("failed to read stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("failed to read {path}: {e}")))
    }
}

fn parse_json(path: &str) -> Result<Value, CliError> {
    let text = read_source(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{path}: invalid JSON: {e}")))
}

fn finite_number(v: &Value, context: &str) -> Result<f64, CliError> {
    let x = v
        .as_f64()
        .ok_or_else(|| CliError::Input(format!("{context}: expected a number")))?;
    if !x.is_finite() {
        return Err(CliError::Input(format!("{context}: number must be finite")));
    }
    Ok(x)
}

/// Reads a state file: exactly eight complex amplitudes in the flat
/// `4i + 2j + k` order. The state is normalized on load; a deviation
/// above `1e-6` earns a warning on stderr, a vanishing norm is an error.
pub fn read_state(path: &str) -> Result<State64, CliError> {
    let doc = parse_json(path)?;
    let entries = doc
        .get("amplitudes")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Input(format!("{path}: missing \"amplitudes\" array")))?;
    if entries.len() != 8 {
        return Err(CliError::Input(format!(
            "{path}: expected exactly 8 amplitudes, found {}",
            entries.len()
        )));
    }
    let mut amp = [C::new(0.0f64, 0.0); 8];
    for (slot, entry) in amp.iter_mut().zip(entries) {
        let re = finite_number(
            entry.get("re").unwrap_or(&Value::Null),
            &format!("{path}: amplitude field \"re\""),
        )?;
        let im = finite_number(
            entry.get("im").unwrap_or(&Value::Null),
            &format!("{path}: amplitude field \"im\""),
        )?;
        *slot = C::new(re, im);
    }
    let raw = State64::from_amplitudes(amp);
    let norm = raw.norm_sqr().sqrt();
    if (norm - 1.0).abs() > 1e-6 {
        eprintln!("warning: {path}: state norm {norm:.6} differs from 1; normalizing");
    }
    raw.normalize().map_err(from_lib)
}

/// Reads an invariant-vector file (`i1`..`i5` numbers, `i6` being +1 or -1).
pub fn read_invariants(path: &str) -> Result<Invariants64, CliError> {
    let doc = parse_json(path)?;
    let field = |name: &str| -> Result<f64, CliError> {
        finite_number(
            doc.get(name).unwrap_or(&Value::Null),
            &format!("{path}: field \"{name}\""),
        )
    };
    let i6 = doc.get("i6").and_then(Value::as_i64).unwrap_or(1);
    if i6 != 1 && i6 != -1 {
        return Err(CliError::Input(format!("{path}: \"i6\" must be 1 or -1")));
    }
    Ok(Invariants64 {
        i1: field("i1")?,
        i2: field("i2")?,
        i3: field("i3")?,
        i4: field("i4")?,
        i5: field("i5")?,
        i6: i6 as i8,
        i6_degenerate: doc
            .get("i6_degenerate")
            .and_then(Value::as_bool)
            .unwrap_or(false),
    })
}

/// Serializes a JSON value deterministically: object keys sorted, floats
/// at full 17-digit precision, no insignificant whitespace variation.
pub fn render(value: &Value) -> String {
    let mut out = String::new();
    write_value(value, 0, &mut out);
    out.push('\n');
    out
}

fn write_indent(depth: usize, out: &mut String) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn write_value(value: &Value, depth: usize, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                let x = n.as_f64().unwrap_or(0.0);
                let _ = write!(out, "{x:.16e}");
            }
        }
        Value::String(s) => {
            let _ = write!(out, "{}", Value::String(s.clone()));
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                write_indent(depth + 1, out);
                write_value(item, depth + 1, out);
            }
            out.push('\n');
            write_indent(depth, out);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            // serde_json's map already iterates in sorted key order.
            out.push('{');
            for (i, (key, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                write_indent(depth + 1, out);
                let _ = write!(out, "{}: ", Value::String(key.clone()));
                write_value(item, depth + 1, out);
            }
            out.push('\n');
            write_indent(depth, out);
            out.push('}');
        }
    }
}

pub const SCHEMA: &str = "triq-report-v1";

pub fn state_to_value(state: &State64) -> Value {
    let amplitudes: Vec<Value> = state
        .amplitudes()
        .iter()
        .map(|a| {
            serde_json::json!({
                "re": a.re,
                "im": a.im,
            })
        })
        .collect();
    serde_json::json!({ "amplitudes": amplitudes })
}

pub fn invariants_to_value(iv: &Invariants64) -> Value {
    serde_json::json!({
        "i1": iv.i1,
        "i2": iv.i2,
        "i3": iv.i3,
        "i4": iv.i4,
        "i5": iv.i5,
        "i6": iv.i6 as i64,
        "i6_degenerate": iv.i6_degenerate,
    })
}

pub fn monotones_to_value(m: &triq::Monotones64) -> Value {
    serde_json::json!({
        "tau_ab_c": m.tau_ab_c,
        "tau_ac_b": m.tau_ac_b,
        "tau_bc_a": m.tau_bc_a,
        "tau_abc": m.tau_abc,
        "sigma_abc": m.sigma_abc,
    })
}

pub fn dd_to_value(form: &triq::DDForm64) -> Value {
    serde_json::json!({
        "mu": form.mu.to_vec(),
        "phi": form.phi,
        "degenerate_phi": form.degenerate_phi,
        "degenerate_family": form.degenerate_family,
    })
}

pub fn md_to_value(form: &triq::MDForm64) -> Value {
    serde_json::json!({
        "a": form.a,
        "b": form.b,
        "c": form.c,
        "d": form.d,
        "f": form.f,
        "phi": form.phi,
    })
}
