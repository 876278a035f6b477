use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};

/// Rounds `x` to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Applies [`sig12`] to every number in `v`. Non-finite numbers are already
/// `null` after serialization.
pub fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(_), _, _) | (_, Some(_), _) => Value::Number(n),
            (_, _, Some(f)) => {
                serde_json::Number::from_f64(sig12(f)).map_or(Value::Null, Value::Number)
            }
            _ => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => {
            Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect())
        }
        other => other,
    }
}

pub fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report types serialize")
}

/// Report envelope shared by every subcommand.
pub struct Report {
    pub command: &'static str,
    pub config: Value,
    pub tolerances: Map<String, Value>,
    pub result: Value,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &'static str, config: Value) -> Self {
        Report {
            command,
            config,
            tolerances: Map::new(),
            result: Value::Null,
            pass: true,
        }
    }

    pub fn tolerance(&mut self, name: &str, value: impl Serialize) -> &mut Self {
        self.tolerances.insert(name.into(), to_value(&value));
        self
    }

    pub fn to_json(&self) -> String {
        let v = json!({
            "tool": "gaplab",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config": self.config,
            "tolerances": Value::Object(self.tolerances.clone()),
            "result": self.result,
            "pass": self.pass,
        });
        let mut s = serde_json::to_string_pretty(&round_value(v)).expect("json");
        s.push('\n');
        s
    }
}

/// Flat table written as CSV.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in std::iter::once(&self.header).chain(&self.rows) {
            let cells: Vec<String> = line.iter().map(|c| quote(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// A CSV number with 12 significant digits; empty when absent or non-finite.
pub fn num(x: impl Into<Option<f64>>) -> String {
    match x.into() {
        Some(v) if v.is_finite() => serde_json::to_string(&sig12(v)).expect("finite"),
        _ => String::new(),
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), String> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    }
    fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

/// Writes to `path`, or to standard output when no path is given.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<(), String> {
    match path {
        Some(p) => write_file(p, contents),
        None => std::io::stdout()
            .write_all(contents.as_bytes())
            .map_err(|e| format!("stdout: {e}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(sig12(std::f64::consts::PI), 3.14159265359);
        assert_eq!(sig12(1.0 / 3.0 * 1e-20), 3.33333333333e-21);
        assert_eq!(round_value(json!(7)), json!(7));
    }

    #[test]
    fn csv_quotes_commas() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["x,y".into(), num(0.5)]);
        assert_eq!(t.render(), "a,b\n\"x,y\",0.5\n");
        assert_eq!(num(3.0e-12), "3e-12");
        assert_eq!(num(f64::NAN), "");
    }
}
