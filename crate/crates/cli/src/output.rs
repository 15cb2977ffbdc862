//! Number formatting, JSON/CSV emission and CSV ingestion.

use hypflow_core::{Complex64, Error, Result};
use serde_json::{Map, Number, Value};
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

pub const SCHEMA_VERSION: u32 = 1;

/// 17 significant digits, so every f64 round-trips.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0000000000000000e0".into() } else { "0.0000000000000000e0".into() };
    }
    format!("{x:.16e}")
}

pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_str(&fmt17(x)).expect("formatted float parses"))
    } else {
        Value::String(format!("{x}"))
    }
}

pub fn cnum(z: Complex64) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), num(z.re));
    m.insert("im".into(), num(z.im));
    Value::Object(m)
}

/// Top-level JSON document with `schema_version` and `command`.
pub fn document(command: &str, body: Map<String, Value>) -> Value {
    let mut m = Map::new();
    m.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
    m.insert("command".into(), Value::from(command));
    m.extend(body);
    Value::Object(m)
}

pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Input { line: 0, msg: format!("{}: {e}", p.display()) }),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).and_then(|_| so.flush()).map_err(|e| Error::Input { line: 0, msg: e.to_string() })
        }
    }
}

pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

/// CSV with a fixed header; fields are preformatted strings.
pub fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8")
}

/// Reads a CSV file whose header must equal `header`; returns the data rows with
/// their 1-based line numbers.
pub fn read_csv(path: &Path, header: &[&str]) -> Result<Vec<(usize, Vec<String>)>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input { line: 0, msg: format!("{}: {e}", path.display()) })?;
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(text.as_bytes());
    let mut out = Vec::new();
    let mut seen_header = false;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            Error::Input { line, msg: e.to_string() }
        })?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        let fields: Vec<String> = rec.iter().map(|f| f.trim().to_string()).collect();
        if fields.iter().all(|f| f.is_empty()) {
            continue;
        }
        if !seen_header {
            if fields != header {
                return Err(Error::Input {
                    line,
                    msg: format!("expected header '{}', found '{}'", header.join(","), fields.join(",")),
                });
            }
            seen_header = true;
            continue;
        }
        if fields.len() != header.len() {
            return Err(Error::Input {
                line,
                msg: format!("expected {} fields, found {}", header.len(), fields.len()),
            });
        }
        out.push((line, fields));
    }
    if !seen_header {
        return Err(Error::Input { line: 1, msg: format!("missing header '{}'", header.join(",")) });
    }
    Ok(out)
}

pub fn parse_field<T: FromStr>(line: usize, name: &str, s: &str) -> Result<T> {
    s.parse::<T>().map_err(|_| Error::Input { line, msg: format!("cannot parse {name} = '{s}'") })
}
