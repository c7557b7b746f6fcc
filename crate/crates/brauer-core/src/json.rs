//! Minimal JSON emitter.
//!
//! Output files must be byte-identical across reruns and carry floats with a
//! fixed 17-significant-digit scientific format, so the writer is explicit
//! rather than driven through a serialization framework.

use std::fmt::Write;

/// `{:.16e}` gives one digit before the point and sixteen after: seventeen
/// significant digits, enough to round-trip any `f64`.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

/// A JSON value tree with insertion-ordered objects.
#[derive(Debug, Clone)]
pub enum Value {
    Null,
    Bool(bool),
    Int(i64),
    UInt(u64),
    /// Emitted via [`format_f64`].
    Float(f64),
    Str(String),
    Array(Vec<Value>),
    Object(Vec<(String, Value)>),
}

impl Value {
    pub fn object() -> Self {
        Value::Object(Vec::new())
    }

    pub fn push(&mut self, key: &str, value: Value) -> &mut Self {
        if let Value::Object(entries) = self {
            entries.push((key.to_string(), value));
        }
        self
    }

    pub fn floats(values: impl IntoIterator<Item = f64>) -> Self {
        Value::Array(values.into_iter().map(Value::Float).collect())
    }

    pub fn strings(values: impl IntoIterator<Item = String>) -> Self {
        Value::Array(values.into_iter().map(Value::Str).collect())
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Value::Null => out.push_str("null"),
            Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Value::Int(v) => {
                let _ = write!(out, "{v}");
            }
            Value::UInt(v) => {
                let _ = write!(out, "{v}");
            }
            Value::Float(v) => out.push_str(&format_f64(*v)),
            Value::Str(s) => {
                let _ = write!(out, "\"{}\"", escape(s));
            }
            Value::Array(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    newline(out, indent + 1);
                    item.write(out, indent + 1);
                }
                newline(out, indent);
                out.push(']');
            }
            Value::Object(entries) => {
                if entries.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (k, (key, value)) in entries.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    newline(out, indent + 1);
                    let _ = write!(out, "\"{}\": ", escape(key));
                    value.write(out, indent + 1);
                }
                newline(out, indent);
                out.push('}');
            }
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }
}

fn newline(out: &mut String, indent: usize) {
    out.push('\n');
    for _ in 0..indent {
        out.push_str("  ");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_has_17_significant_digits() {
        assert_eq!(format_f64(1.0), "1.0000000000000000e0");
        assert_eq!(format_f64(-0.5), "-5.0000000000000000e-1");
        let v = 0.1f64 + 0.2;
        assert_eq!(format_f64(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn renders_nested_values() {
        let mut obj = Value::object();
        obj.push("mu", Value::UInt(2));
        obj.push("values", Value::floats([1.0, -0.25]));
        obj.push("name", Value::Str("<(1,-1); (1), (1)>".into()));
        let text = obj.render();
        assert!(text.contains("\"mu\": 2"));
        assert!(text.contains("-2.5000000000000000e-1"));
        assert!(text.ends_with("}\n"));
    }
}
