//! Parameter resolution: clap defaults, then the config file, then explicit flags.

use std::path::Path;

use clap::parser::ValueSource;
use clap::ArgMatches;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::CliError;

/// Reads a flat config file. JSON objects are taken as they are; anything
/// else is parsed as `key = value` lines with `#` comments.
pub fn load_config(path: &Path) -> Result<Map<String, Value>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<Map<String, Value>, CliError> {
    if text.trim_start().starts_with('{') {
        let value: Value = serde_json::from_str(text).map_err(|e| CliError::Config(format!("bad JSON: {e}")))?;
        let Value::Object(map) = value else {
            unreachable!("text starts with an object");
        };
        if let Some((key, _)) = map.iter().find(|(_, v)| v.is_object() || v.is_array()) {
            return Err(CliError::Config(format!("key `{key}`: nested values are not allowed")));
        }
        return Ok(map.into_iter().map(|(k, v)| (normalize_key(&k), v)).collect());
    }
    let mut map = Map::new();
    for (number, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Config(format!("line {}: expected key = value", number + 1)));
        };
        let key = normalize_key(key.trim());
        if map.insert(key.clone(), scalar(value.trim())).is_some() {
            return Err(CliError::Config(format!("line {}: key `{key}` given twice", number + 1)));
        }
    }
    Ok(map)
}

fn normalize_key(key: &str) -> String {
    key.trim_start_matches("--").replace('-', "_")
}

fn scalar(text: &str) -> Value {
    if let Ok(i) = text.parse::<i64>() {
        return Value::from(i);
    }
    if let Ok(x) = text.parse::<f64>() {
        if x.is_finite() {
            return Value::from(x);
        }
    }
    match text {
        "true" => Value::Bool(true),
        "false" => Value::Bool(false),
        _ => Value::String(text.trim_matches('"').to_owned()),
    }
}

/// Overlays `file` on the parsed arguments, except where the flag was given
/// on the command line. Keys the subcommand does not know are rejected.
pub fn resolve<P>(args: &P, matches: &ArgMatches, file: Option<&Map<String, Value>>) -> Result<P, CliError>
where
    P: Serialize + DeserializeOwned,
{
    let Value::Object(mut merged) = serde_json::to_value(args).map_err(|e| CliError::Config(e.to_string()))? else {
        unreachable!("parameter structs serialize to objects");
    };
    for (key, value) in file.into_iter().flatten() {
        if !merged.contains_key(key) {
            let known: Vec<&str> = merged.keys().map(String::as_str).collect();
            return Err(CliError::Config(format!(
                "unknown key `{key}`; this subcommand accepts {}",
                known.join(", ")
            )));
        }
        if matches.value_source(key) == Some(ValueSource::CommandLine) {
            continue;
        }
        // list and path fields are strings even when they look numeric
        let value = match (&merged[key], value) {
            (Value::String(_), Value::Number(n)) => Value::String(n.to_string()),
            _ => value.clone(),
        };
        let mut probe = merged.clone();
        probe.insert(key.clone(), value.clone());
        if let Err(e) = serde_json::from_value::<P>(Value::Object(probe)) {
            return Err(CliError::Config(format!("key `{key}`: {e}")));
        }
        merged.insert(key.clone(), value);
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::Config(e.to_string()))
}

/// `start:stop:step`, inclusive of both ends.
pub fn parse_range(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Config(format!("range `{text}` must be start:stop:step with step > 0"));
    let parts: Vec<f64> = text
        .split(':')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let [start, stop, step] = parts[..] else {
        return Err(bad());
    };
    if !(step > 0.0 && stop >= start && start.is_finite() && stop.is_finite()) {
        return Err(bad());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| start + k as f64 * step).collect())
}

/// Comma-separated list of non-negative integers.
pub fn parse_list(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Config(format!("`{text}` is not a comma-separated list of integers")))
}
