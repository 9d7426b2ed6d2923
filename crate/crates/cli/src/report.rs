use std::fmt::Write as _;

/// One field value. Numbers are rendered with the shortest representation
/// that round-trips, and both output formats share that rendering.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Num(f64),
    Bool(bool),
    Text(String),
}

impl Value {
    pub fn render(&self) -> String {
        match self {
            Value::Int(i) => i.to_string(),
            Value::Num(x) => format!("{x:?}"),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<u32> for Value {
    fn from(x: u32) -> Self {
        Value::Int(i64::from(x))
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::Int(x as i64)
    }
}

impl From<bool> for Value {
    fn from(x: bool) -> Self {
        Value::Bool(x)
    }
}

impl From<&str> for Value {
    fn from(x: &str) -> Self {
        Value::Text(x.to_owned())
    }
}

impl From<String> for Value {
    fn from(x: String) -> Self {
        Value::Text(x)
    }
}

/// Flat, ordered key-value record.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReportRecord {
    pub title: String,
    fields: Vec<(String, Value)>,
}

impl ReportRecord {
    pub fn new(title: impl Into<String>) -> Self {
        Self { title: title.into(), fields: Vec::new() }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<Value>) -> &mut Self {
        self.fields.push((key.into(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// `key=value` pairs on one line. Text values never contain spaces.
    pub fn to_record_line(&self) -> String {
        self.fields
            .iter()
            .map(|(k, v)| format!("{k}={}", v.render().replace(' ', "_")))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn to_text(&self) -> String {
        let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = format!("{}\n", self.title);
        for (k, v) in &self.fields {
            let _ = writeln!(out, "  {k:<width$}  {}", v.render());
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Record,
}

pub fn emit(records: &[ReportRecord], format: Format) -> String {
    match format {
        Format::Text => records.iter().map(ReportRecord::to_text).collect::<Vec<_>>().join("\n"),
        Format::Record => records.iter().map(|r| r.to_record_line() + "\n").collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_share_numbers() {
        let mut r = ReportRecord::new("demo");
        r.push("gate", "cn_cb").push("deviation", 1.234e-15).push("ok", true).push("p", 2u32);
        assert_eq!(r.to_record_line(), "gate=cn_cb deviation=1.234e-15 ok=true p=2");
        let text = r.to_text();
        assert!(text.contains("deviation  1.234e-15"));
    }
}
