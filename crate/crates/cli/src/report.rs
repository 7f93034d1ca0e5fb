//! Report assembly: a versioned JSON document and an aligned text rendering.

use loopcoh_core::series::PoincareSeries;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "loopcoh-report/1";

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub json: Value,
    pub text: String,
}

impl Report {
    pub fn new(command: &str, space: &str, max_degree: u32, body: Map<String, Value>, text: String) -> Self {
        let mut doc = Map::new();
        doc.insert("schema".into(), SCHEMA.into());
        doc.insert("command".into(), command.into());
        doc.insert("space".into(), space.into());
        doc.insert("max_degree".into(), max_degree.into());
        doc.extend(body);
        let header = format!("{command}: {space}, total degree <= {max_degree}\n\n");
        Report {
            json: Value::Object(doc),
            text: header + &text,
        }
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn error_json(command: &str, kind: &str, message: &str) -> String {
    let doc = json!({
        "schema": SCHEMA,
        "command": command,
        "error": { "kind": kind, "message": message },
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

/// Coefficients as JSON numbers, or decimal strings past 64 bits.
pub fn series_json(s: &PoincareSeries) -> Value {
    Value::Array(
        s.coeffs()
            .iter()
            .map(|c| match c.to_u64() {
                Some(v) => Value::from(v),
                None => Value::from(c.to_string()),
            })
            .collect(),
    )
}

pub fn series_text(s: &PoincareSeries) -> String {
    s.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn prime_label(p: u32) -> String {
    if p == 0 {
        "0 (Q)".into()
    } else {
        p.to_string()
    }
}

/// Left-aligned columns separated by two spaces.
#[derive(Debug, Default)]
pub struct Table {
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: ToString>(header: &[S]) -> Self {
        Table {
            rows: vec![header.iter().map(ToString::to_string).collect()],
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let cols = self.rows.iter().map(Vec::len).max().unwrap_or(0);
        let widths: Vec<usize> = (0..cols)
            .map(|j| {
                self.rows
                    .iter()
                    .filter_map(|r| r.get(j))
                    .map(|c| c.chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        for r in &self.rows {
            let mut line = String::new();
            for (j, c) in r.iter().enumerate() {
                if j > 0 {
                    line.push_str("  ");
                }
                line.push_str(c);
                if j + 1 < r.len() {
                    line.extend(std::iter::repeat_n(' ', widths[j] - c.chars().count()));
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}
