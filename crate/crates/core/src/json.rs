//! Minimal ordered JSON object writer.
//!
//! Field order is insertion order and every float is printed with 17
//! significant digits in exponent form, so identical values always produce
//! identical bytes.

use std::fmt::Write as _;

#[derive(Debug, Default)]
pub struct JsonObject {
    buf: String,
    fields: usize,
}

impl JsonObject {
    pub fn new() -> Self {
        Self::default()
    }

    fn key(&mut self, key: &str) {
        self.buf.push(if self.fields == 0 { '{' } else { ',' });
        self.fields += 1;
        write_str(&mut self.buf, key);
        self.buf.push(':');
    }

    pub fn f64(mut self, key: &str, value: f64) -> Self {
        self.key(key);
        write_f64(&mut self.buf, value);
        self
    }

    pub fn opt_f64(self, key: &str, value: Option<f64>) -> Self {
        match value {
            Some(v) => self.f64(key, v),
            None => self.null(key),
        }
    }

    /// Writes the field only when `value` is present.
    pub fn some_f64(self, key: &str, value: Option<f64>) -> Self {
        match value {
            Some(v) => self.f64(key, v),
            None => self,
        }
    }

    pub fn some_u64(self, key: &str, value: Option<u64>) -> Self {
        match value {
            Some(v) => self.u64(key, v),
            None => self,
        }
    }

    pub fn u64(mut self, key: &str, value: u64) -> Self {
        self.key(key);
        let _ = write!(self.buf, "{value}");
        self
    }

    pub fn opt_u64(self, key: &str, value: Option<u64>) -> Self {
        match value {
            Some(v) => self.u64(key, v),
            None => self.null(key),
        }
    }

    pub fn bool(mut self, key: &str, value: bool) -> Self {
        self.key(key);
        self.buf.push_str(if value { "true" } else { "false" });
        self
    }

    pub fn str(mut self, key: &str, value: &str) -> Self {
        self.key(key);
        write_str(&mut self.buf, value);
        self
    }

    pub fn null(mut self, key: &str) -> Self {
        self.key(key);
        self.buf.push_str("null");
        self
    }

    /// Inserts an already-serialized JSON value.
    pub fn raw(mut self, key: &str, json: &str) -> Self {
        self.key(key);
        self.buf.push_str(json);
        self
    }

    pub fn finish(mut self) -> String {
        if self.fields == 0 {
            self.buf.push('{');
        }
        self.buf.push('}');
        self.buf
    }
}

pub fn write_f64(buf: &mut String, value: f64) {
    if value.is_finite() {
        let _ = write!(buf, "{value:.16e}");
    } else {
        buf.push_str("null");
    }
}

pub fn format_f64(value: f64) -> String {
    let mut s = String::new();
    write_f64(&mut s, value);
    s
}

fn write_str(buf: &mut String, s: &str) {
    buf.push('"');
    for c in s.chars() {
        match c {
            '"' => buf.push_str("\\\""),
            '\\' => buf.push_str("\\\\"),
            '\n' => buf.push_str("\\n"),
            c if (c as u32) < 0x20 => {
                let _ = write!(buf, "\\u{:04x}", c as u32);
            }
            c => buf.push(c),
        }
    }
    buf.push('"');
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_significant_digits() {
        assert_eq!(format_f64(0.4375), "4.3750000000000000e-1");
        assert_eq!(format_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(format_f64(f64::NAN), "null");
    }

    #[test]
    fn writes_ordered_object() {
        let s = JsonObject::new()
            .str("b", "x\"y")
            .u64("a", 3)
            .opt_f64("c", None)
            .bool("d", true)
            .finish();
        assert_eq!(s, r#"{"b":"x\"y","a":3,"c":null,"d":true}"#);
        assert_eq!(JsonObject::new().finish(), "{}");
    }
}
