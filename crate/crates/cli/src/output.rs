use std::path::Path;

use fdl_core::verify::fmt_sig;
use serde_json::Value;

use crate::CliError;

/// Rounds every float in `v` to 12 significant digits. Integers are left alone.
pub fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64");
            serde_json::Number::from_f64(fmt_sig(x).parse().expect("valid float"))
                .map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

fn write_file(path: &str, text: &str) -> Result<(), CliError> {
    std::fs::write(Path::new(path), text).map_err(|e| CliError::Output(format!("cannot write {path}: {e}")))
}

/// Pretty JSON with a trailing newline, to `out` or stdout.
pub fn emit_json(v: Value, out: Option<&str>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(&round_floats(v)).expect("serializable");
    text.push('\n');
    match out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn emit_csv(text: &str, path: &str) -> Result<(), CliError> {
    write_file(path, text)
}
