//! RFC 4180 CSV emission with fixed numeric formatting.
//!
//! Numbers are serialized with 17 significant digits so reruns are
//! byte-identical and values round-trip exactly.

use std::fmt::Write as _;
use std::path::Path;

#[derive(Clone, Debug)]
pub enum Field {
    F(f64),
    I(i64),
    S(String),
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::F(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::S(v.to_string())
    }
}

fn push_field(out: &mut String, field: &Field) {
    match field {
        Field::F(v) => {
            if v.is_nan() {
                // missing value
            } else {
                let _ = write!(out, "{v:.16e}");
            }
        }
        Field::I(v) => {
            let _ = write!(out, "{v}");
        }
        Field::S(s) => {
            if s.contains([',', '"', '\n', '\r']) {
                let _ = write!(out, "\"{}\"", s.replace('"', "\"\""));
            } else {
                out.push_str(s);
            }
        }
    }
}

pub fn render(header: &[&str], rows: impl IntoIterator<Item = Vec<Field>>) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push_str("\r\n");
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        for (i, field) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            push_field(&mut out, field);
        }
        out.push_str("\r\n");
    }
    out
}

pub fn write(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<Field>>) -> anyhow::Result<()> {
    crate::atomic_write(path, render(header, rows).as_bytes())
}
