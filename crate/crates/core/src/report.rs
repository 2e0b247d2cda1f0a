//! Deterministic JSON reports and fixed-column CSV tables, written
//! atomically (temporary file in the target directory, then rename).

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::analysis::FSample;
use crate::error::{Error, Result};
use crate::profile::RadialProfile;
use crate::variational::OracleRow;

/// Version stamped into every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Report wrapper: what produced it, with which configuration.
#[derive(Debug, Serialize)]
pub struct Envelope<'a, C: Serialize, R: Serialize> {
    pub kind: &'a str,
    pub version: &'a str,
    pub config: &'a C,
    pub result: &'a R,
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Io(format!("serialization failed: {e}"))
}

/// Serialize `value` with object keys sorted and every float printed with
/// 17 significant digits; non-finite floats become null.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(json_err)?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat_n(' ', 2 * n));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                match n.as_f64() {
                    Some(x) if x.is_finite() => write!(out, "{x:.16e}").unwrap(),
                    _ => out.push_str("null"),
                }
            } else {
                write!(out, "{n}").unwrap();
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, indent + 1);
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                pad(out, indent + 1);
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(out, &map[*k], indent + 1);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

/// Write `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

/// Write an enveloped report as canonical JSON.
pub fn write_report<C: Serialize, R: Serialize>(path: &Path, kind: &str, config: &C, result: &R) -> Result<()> {
    let env = Envelope { kind, version: VERSION, config, result };
    write_atomic(path, canonical_json(&env)?.as_bytes())
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn csv_table(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// Columns r,u,du at the profile nodes.
pub fn profile_csv(profile: &RadialProfile) -> Result<String> {
    let rows = profile
        .nodes()
        .iter()
        .zip(profile.values())
        .zip(profile.derivs())
        .map(|((r, u), du)| vec![num(*r), num(*u), num(*du)]);
    csv_table(&["r", "u", "du"], rows)
}

/// Columns alpha,D,f; unavailable values are left empty.
pub fn fscan_csv(samples: &[FSample]) -> Result<String> {
    let rows = samples.iter().map(|s| vec![num(s.alpha), opt(s.dirichlet), opt(s.f)]);
    csv_table(&["alpha", "D", "f"], rows)
}

/// Columns alpha,D_shoot,D_oracle,gap; unavailable values are left empty.
pub fn oracle_csv(rows: &[OracleRow]) -> Result<String> {
    let rows = rows.iter().map(|r| vec![num(r.alpha), opt(r.d_shoot), opt(r.d_oracle), opt(r.gap)]);
    csv_table(&["alpha", "D_shoot", "D_oracle", "gap"], rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Sample {
        z: f64,
        a: Vec<f64>,
        n: usize,
        s: &'static str,
    }

    #[test]
    fn canonical_json_is_sorted_and_fixed_width() {
        let v = Sample { z: 0.1, a: vec![1.0, f64::NAN, -2.5e-300], n: 7, s: "x\"y" };
        let text = canonical_json(&v).unwrap();
        assert!(text.find("\"a\"").unwrap() < text.find("\"z\"").unwrap());
        assert!(text.contains("1.0000000000000001e-1"));
        assert!(text.contains("null") && text.contains("\"n\": 7"));
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["z"].as_f64(), Some(0.1));
        assert_eq!(back["a"][2].as_f64(), Some(-2.5e-300));
        assert_eq!(back["s"], "x\"y");
        assert_eq!(text, canonical_json(&v).unwrap());
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub").join("out.json");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "two");
        assert_eq!(std::fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }

    #[test]
    fn csv_columns() {
        let s = FSample { alpha: 1.0, dirichlet: None, f: Some(2.0), local_energy: None, gap: Some("x".into()) };
        let text = fscan_csv(&[s]).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("alpha,D,f"));
        assert_eq!(lines.next(), Some("1.0000000000000000e0,,2.0000000000000000e0"));
    }
}
