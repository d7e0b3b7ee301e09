//! Table and report serialization. Numbers are written with 17 significant
//! digits and LF line endings so reruns are byte-identical.

use std::fmt::Write as _;
use std::path::Path;

use degfrac_core::assembly::Field;
use serde_json::{json, Value};

use crate::config::Format;
use crate::error::{CliError, Result};
use crate::pipeline::Report;

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv(header: &str, rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut s = format!("{header}\n");
    for r in rows {
        writeln!(s, "{}", r.join(",")).unwrap();
    }
    s
}

fn json_rows(rows: Vec<Value>) -> String {
    let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("json");
    s.push('\n');
    s
}

/// `(file name, contents)` of the eigenvalue table.
pub fn eigenvalues_table(eigenvalues: &[f64], format: Format) -> (&'static str, String) {
    match format {
        Format::Csv => (
            "eigenvalues.csv",
            csv("n,lambda_n", eigenvalues.iter().enumerate().map(|(i, l)| vec![(i + 1).to_string(), num(*l)])),
        ),
        Format::Json => (
            "eigenvalues.json",
            json_rows(eigenvalues.iter().enumerate().map(|(i, l)| json!({"n": i + 1, "lambda_n": l})).collect()),
        ),
    }
}

pub fn coefficients_table(coeffs: &[(f64, f64)], format: Format) -> (&'static str, String) {
    match format {
        Format::Csv => (
            "coefficients.csv",
            csv(
                "n,phi_n,psi_n",
                coeffs.iter().enumerate().map(|(i, (p, q))| vec![(i + 1).to_string(), num(*p), num(*q)]),
            ),
        ),
        Format::Json => (
            "coefficients.json",
            json_rows(
                coeffs.iter().enumerate().map(|(i, (p, q))| json!({"n": i + 1, "phi_n": p, "psi_n": q})).collect(),
            ),
        ),
    }
}

pub fn field_table(field: &Field, format: Format) -> (&'static str, String) {
    let cells = field.x_grid.iter().enumerate().flat_map(|(i, &x)| {
        field.y_grid.iter().enumerate().map(move |(j, &y)| (x, y, field.values[i][j]))
    });
    match format {
        Format::Csv => ("field.csv", csv("x,y,u", cells.map(|(x, y, u)| vec![num(x), num(y), num(u)]))),
        Format::Json => ("field.json", json_rows(cells.map(|(x, y, u)| json!({"x": x, "y": y, "u": u})).collect())),
    }
}

pub fn expansion_table(rows: &[(usize, f64, f64)], format: Format) -> (&'static str, String) {
    match format {
        Format::Csv => (
            "expansion.csv",
            csv("n,phi_error,psi_error", rows.iter().map(|(n, a, b)| vec![n.to_string(), num(*a), num(*b)])),
        ),
        Format::Json => (
            "expansion.json",
            json_rows(rows.iter().map(|(n, a, b)| json!({"n": n, "phi_error": a, "psi_error": b})).collect()),
        ),
    }
}

pub fn report_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("json");
    s.push('\n');
    s
}

pub fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| CliError::Io { path, source })
}

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}
