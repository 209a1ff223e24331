use std::fmt::Write;

use gwgames::ProbVector;

/// A machine-readable `key = value` section followed by free text for
/// people.
#[derive(Debug, Default)]
pub struct Report {
    machine: Vec<(String, String)>,
    human: String,
    raw: Option<String>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    /// Text printed as is, with no key section.
    pub fn raw(text: String) -> Self {
        Report { raw: Some(text), ..Report::default() }
    }

    pub fn set(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.machine.push((key.into(), value.to_string()));
        self
    }

    /// Shortest round-trip representation, so the machine section is exact.
    pub fn num(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.set(key, format!("{value:?}"))
    }

    pub fn vector(&mut self, key: impl Into<String>, v: &ProbVector) -> &mut Self {
        self.set(key, join_exact(v.as_slice()))
    }

    pub fn line(&mut self, text: impl AsRef<str>) -> &mut Self {
        self.human.push_str(text.as_ref());
        self.human.push('\n');
        self
    }

    pub fn table(&mut self, header: &[&str], rows: &[Vec<String>]) -> &mut Self {
        let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
        for row in rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut emit = |cells: &mut dyn Iterator<Item = &str>| {
            let mut line = String::new();
            for (i, (cell, w)) in cells.zip(&widths).enumerate() {
                if i > 0 {
                    line.push_str("  ");
                }
                let _ = write!(line, "{cell:<w$}");
            }
            self.human.push_str(line.trim_end());
            self.human.push('\n');
        };
        emit(&mut header.iter().copied());
        for row in rows {
            emit(&mut row.iter().map(String::as_str));
        }
        self
    }

    pub fn render(&self) -> String {
        if let Some(text) = &self.raw {
            return format!("{}\n", text.trim_end());
        }
        let mut out = String::new();
        for (k, v) in &self.machine {
            let _ = writeln!(out, "{k} = {v}");
        }
        if !self.human.is_empty() {
            out.push('\n');
            out.push_str(&self.human);
        }
        out
    }
}

/// Nine decimals with trailing zeros removed: `0.5`, `1`, `0`.
pub fn fmt9(x: f64) -> String {
    let s = format!("{x:.9}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    match s {
        "-0" | "" => "0".to_string(),
        _ => s.to_string(),
    }
}

pub fn join_exact(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",")
}

pub fn join9(v: &[f64]) -> String {
    v.iter().map(|&x| fmt9(x)).collect::<Vec<_>>().join(", ")
}
