//! Tables, atomic artifact writes and the run manifest.

use std::io::Write;
use std::path::{Path, PathBuf};

use dmolab_opkit::format_real;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Real(x) => format_real(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Real(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Csv => {
                let mut writer = csv::Writer::from_writer(Vec::new());
                writer.write_record(&self.columns).expect("writing to memory");
                for row in &self.rows {
                    writer
                        .write_record(row.iter().map(Cell::csv))
                        .expect("writing to memory");
                }
                writer.into_inner().expect("flushing to memory")
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
                    .collect();
                let doc = serde_json::json!({ "columns": self.columns, "rows": rows });
                let mut bytes = serde_json::to_vec_pretty(&doc).expect("plain JSON values");
                bytes.push(b'\n');
                bytes
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    pub fn table(stem: &str, table: &Table, format: Format) -> Self {
        Artifact {
            name: format!("{stem}.{}", format.extension()),
            bytes: table.render(format),
        }
    }

    pub fn json<T: Serialize>(name: &str, value: &T) -> Self {
        let mut bytes = serde_json::to_vec_pretty(value).expect("serializable artifact");
        bytes.push(b'\n');
        Artifact {
            name: name.to_owned(),
            bytes,
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes through a temporary file in the same directory and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct ManifestEntry<'a> {
    path: &'a str,
    bytes: usize,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a Value,
    config_hash: String,
    artifacts: Vec<ManifestEntry<'a>>,
}

/// Hash of the canonical (sorted-key, compact) form of the resolved config.
pub fn config_hash(config: &Value) -> String {
    sha256_hex(serde_json::to_string(config).expect("plain JSON values").as_bytes())
}

/// Writes every artifact, then `<command>.manifest.json`. Returns the paths written.
pub fn publish(out_dir: &Path, command: &str, config: &Value, artifacts: &[Artifact]) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    for a in artifacts {
        let path = out_dir.join(&a.name);
        write_atomic(&path, &a.bytes)?;
        written.push(path);
    }
    let manifest = Manifest {
        tool: "dmolab",
        version: env!("CARGO_PKG_VERSION"),
        command,
        config,
        config_hash: config_hash(config),
        artifacts: artifacts
            .iter()
            .map(|a| ManifestEntry {
                path: &a.name,
                bytes: a.bytes.len(),
                sha256: sha256_hex(&a.bytes),
            })
            .collect(),
    };
    let name = format!("{}.manifest.json", command.replace(' ', "-"));
    let manifest = Artifact::json(&name, &manifest);
    let path = out_dir.join(&manifest.name);
    write_atomic(&path, &manifest.bytes)?;
    written.push(path);
    Ok(written)
}
