//! Report rows and their JSON / CSV rendering.

use picardlab::C64;
use serde::Serialize;
use serde_json::{json, Value};

/// One checked identity or reported quantity.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    /// name of the identity or property being checked
    pub anchor: &'static str,
    pub values: Value,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    /// None for report-only rows, which never affect the exit code
    pub pass: Option<bool>,
}

impl Check {
    pub fn residual(name: impl Into<String>, anchor: &'static str, values: Value, residual: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            anchor,
            values,
            residual: Some(residual),
            tolerance: Some(tol),
            pass: Some(residual < tol),
        }
    }

    pub fn flag(name: impl Into<String>, anchor: &'static str, values: Value, ok: bool) -> Self {
        Self { name: name.into(), anchor, values, residual: None, tolerance: None, pass: Some(ok) }
    }

    pub fn info(name: impl Into<String>, anchor: &'static str, values: Value) -> Self {
        Self { name: name.into(), anchor, values, residual: None, tolerance: None, pass: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub config: Value,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &'static str, config: Value, checks: Vec<Check>, data: Value) -> Self {
        let pass = checks.iter().all(|c| c.pass != Some(false));
        Self { command, config, checks, data, warnings: Vec::new(), pass }
    }

    pub fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings = warnings;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// One row per check; complex values split into re/im columns.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = ["command", "name", "anchor", "key", "re", "im", "residual", "tolerance", "pass"];
        w.write_record(header).expect("write to memory");
        for c in &self.checks {
            let (residual, tolerance) = (opt(c.residual), opt(c.tolerance));
            let pass = c.pass.map(|p| p.to_string()).unwrap_or_default();
            let mut fields = flatten(&c.values);
            if fields.is_empty() {
                fields.push(Default::default());
            }
            for (key, re, im) in fields {
                let row = [self.command, &c.name, c.anchor, &key, &re, &im, &residual, &tolerance, &pass];
                w.write_record(row).expect("write to memory");
            }
        }
        let mut out = String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 fields");
        // plot data as a second block: a blank line, a header, then x,y rows
        if let Some(Value::Array(rows)) = self.data.get("series") {
            if let Some(Value::Object(first)) = rows.first() {
                let keys: Vec<&String> = first.keys().collect();
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&keys).expect("write to memory");
                for row in rows {
                    let cells = keys.iter().map(|k| row.get(k.as_str()).map(|v| v.to_string()).unwrap_or_default());
                    w.write_record(cells).expect("write to memory");
                }
                out.push('\n');
                out += std::str::from_utf8(&w.into_inner().expect("flush to memory")).expect("utf-8 fields");
            }
        }
        out
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Numeric leaves of a JSON object as (key, re, im); pairs [re, im] are complex.
fn flatten(v: &Value) -> Vec<(String, String, String)> {
    let mut out = Vec::new();
    if let Value::Object(map) = v {
        for (k, x) in map {
            match x {
                Value::Number(n) => out.push((k.clone(), n.to_string(), String::new())),
                Value::Bool(b) => out.push((k.clone(), b.to_string(), String::new())),
                Value::String(s) => out.push((k.clone(), s.clone(), String::new())),
                Value::Array(a) if a.len() == 2 && a.iter().all(Value::is_number) => {
                    out.push((k.clone(), a[0].to_string(), a[1].to_string()))
                }
                _ => {}
            }
        }
    }
    out
}

pub fn cx(z: C64) -> Value {
    json!([z.re, z.im])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn info_rows_do_not_fail_a_report() {
        let r = Report::new("t", Value::Null, vec![Check::info("a", "x", json!({"v": 1}))], Value::Null);
        assert!(r.pass);
        let r = Report::new(
            "t",
            Value::Null,
            vec![Check::residual("a", "x", json!({}), 2.0, 1.0), Check::flag("b", "y", json!({}), true)],
            Value::Null,
        );
        assert!(!r.pass);
    }

    #[test]
    fn csv_projection() {
        let checks = vec![Check::residual("z", "anchor", json!({"w": [1.5, -2.0], "k": 3}), 0.0, 1e-9)];
        let csv = Report::new("t", Value::Null, checks, Value::Null).to_csv();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[1], "t,z,anchor,k,3,,0,0.000000001,true");
        assert_eq!(rows[2], "t,z,anchor,w,1.5,-2.0,0,0.000000001,true");
    }

    #[test]
    fn series_block() {
        let data = json!({"series": [{"X": 2.0, "y": 1}, {"X": 3.0, "y": 4}]});
        let csv = Report::new("t", Value::Null, vec![], data).to_csv();
        assert!(csv.ends_with("\nX,y\n2.0,1\n3.0,4\n"), "{csv}");
    }
}
