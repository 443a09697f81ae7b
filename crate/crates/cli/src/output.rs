//! Machine-first table emission: versioned CSV (default), JSON, or an aligned
//! human table behind `--pretty`. Reals carry 17 significant digits.

use std::fmt::Write as _;

/// 17 significant digits, scientific.
pub fn g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// One tabular result: schema id, column names, string rows.
pub struct Table {
    pub schema: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(schema: &str, columns: &[&str]) -> Self {
        Self {
            schema: schema.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# schema {}", self.schema);
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let quoted: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
            let _ = writeln!(out, "{}", quoted.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{{\"schema\":{},\"rows\":[", json_string(&self.schema));
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push('{');
            for (j, (col, field)) in self.columns.iter().zip(row).enumerate() {
                if j > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{}:{}", json_string(col), json_value(field));
            }
            out.push('}');
        }
        out.push_str("]}\n");
        out
    }

    pub fn to_pretty(&self) -> String {
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        for row in &self.rows {
            for (w, f) in widths.iter_mut().zip(row) {
                *w = (*w).max(f.len());
            }
        }
        let mut out = String::new();
        let header: Vec<String> = self
            .columns
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", header.join("  "));
        let _ = writeln!(out, "{}", "-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(f, w)| format!("{f:<w$}"))
                .collect();
            let _ = writeln!(out, "{}", cells.join("  "));
        }
        out
    }

    pub fn render(&self, format: &str, pretty: bool) -> String {
        if pretty {
            self.to_pretty()
        } else if format == "json" {
            self.to_json()
        } else {
            self.to_csv()
        }
    }

    /// File extension for the chosen machine format.
    pub fn extension(format: &str) -> &'static str {
        if format == "json" {
            "json"
        } else {
            "csv"
        }
    }
}

fn csv_field(f: &str) -> String {
    if f.contains(',') || f.contains('"') || f.contains('\n') {
        format!("\"{}\"", f.replace('"', "\"\""))
    } else {
        f.to_string()
    }
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Numeric-looking fields pass through as JSON numbers, everything else is a
/// string.
fn json_value(field: &str) -> String {
    let numeric = !field.is_empty()
        && field
            .bytes()
            .all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'-' | b'+' | b'e' | b'E'))
        && field.bytes().any(|b| b.is_ascii_digit());
    if numeric {
        field.to_string()
    } else {
        json_string(field)
    }
}
