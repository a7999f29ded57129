#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub fn lp() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lp"))
}

pub fn run(args: &[&str]) -> Output {
    lp().args(args).output().expect("binary runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

pub fn read_json(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).expect("file exists")).expect("valid JSON")
}

pub fn schema(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(format!("{name}.schema.json"));
    read_json(&path)
}

/// Checks `value` against the subset of JSON Schema the shipped schemas use:
/// `type`, `properties`, `required`, `additionalProperties`, `items`, `enum`,
/// `const`, `oneOf`, `minimum` and local `$ref`s into `$defs`.
pub fn validate(value: &Value, schema: &Value) -> Result<(), String> {
    check(value, schema, schema, "$")
}

fn type_matches(value: &Value, ty: &str) -> bool {
    match ty {
        "object" => value.is_object(),
        "array" => value.is_array(),
        "string" => value.is_string(),
        "boolean" => value.is_boolean(),
        "null" => value.is_null(),
        "number" => value.is_number(),
        "integer" => value.is_i64() || value.is_u64(),
        other => panic!("unsupported type {other}"),
    }
}

fn check(value: &Value, schema: &Value, root: &Value, at: &str) -> Result<(), String> {
    let s = schema.as_object().ok_or_else(|| format!("{at}: schema is not an object"))?;
    if let Some(r) = s.get("$ref").and_then(Value::as_str) {
        let name = r.strip_prefix("#/$defs/").expect("local ref");
        return check(value, &root["$defs"][name], root, at);
    }
    for key in s.keys() {
        let known = [
            "$schema", "title", "type", "properties", "required", "additionalProperties", "items", "enum",
            "const", "oneOf", "minimum", "$defs",
        ];
        assert!(known.contains(&key.as_str()), "{at}: unsupported keyword {key}");
    }
    if let Some(ty) = s.get("type") {
        let ok = match ty {
            Value::String(t) => type_matches(value, t),
            Value::Array(ts) => ts.iter().any(|t| type_matches(value, t.as_str().unwrap())),
            _ => false,
        };
        if !ok {
            return Err(format!("{at}: expected type {ty}, found {value}"));
        }
    }
    if let Some(c) = s.get("const") {
        if c != value {
            return Err(format!("{at}: expected {c}, found {value}"));
        }
    }
    if let Some(Value::Array(options)) = s.get("enum") {
        if !options.contains(value) {
            return Err(format!("{at}: {value} not in {options:?}"));
        }
    }
    if let Some(min) = s.get("minimum").and_then(Value::as_f64) {
        if value.as_f64().is_some_and(|v| v < min) {
            return Err(format!("{at}: {value} below {min}"));
        }
    }
    if let Some(Value::Array(options)) = s.get("oneOf") {
        let hits = options.iter().filter(|o| check(value, o, root, at).is_ok()).count();
        if hits != 1 {
            return Err(format!("{at}: {value} matches {hits} alternatives"));
        }
    }
    if let Some(obj) = value.as_object() {
        let props = s.get("properties").and_then(Value::as_object);
        if let Some(Value::Array(req)) = s.get("required") {
            for k in req {
                let k = k.as_str().unwrap();
                if !obj.contains_key(k) {
                    return Err(format!("{at}: missing `{k}`"));
                }
            }
        }
        for (k, v) in obj {
            let path = format!("{at}.{k}");
            match props.and_then(|p| p.get(k)) {
                Some(sub) => check(v, sub, root, &path)?,
                None => match s.get("additionalProperties") {
                    Some(Value::Bool(false)) => return Err(format!("{at}: unexpected `{k}`")),
                    Some(sub @ Value::Object(_)) => check(v, sub, root, &path)?,
                    _ => {}
                },
            }
        }
    }
    if let (Some(items), Some(arr)) = (s.get("items"), value.as_array()) {
        for (i, v) in arr.iter().enumerate() {
            check(v, items, root, &format!("{at}[{i}]"))?;
        }
    }
    Ok(())
}

pub fn assert_valid(value: &Value, schema_name: &str) {
    if let Err(e) = validate(value, &schema(schema_name)) {
        panic!("{schema_name}: {e}");
    }
}
