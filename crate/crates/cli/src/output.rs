//! Output assembly: provenance header, CSV rows and JSON documents.

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Formats `x` with 9 significant digits, `%g` style.
pub fn fmt9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// A CSV document with `#` comment lines before the column header.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(cfg: &RunConfig) -> Self {
        let mut text = format!("# gmac {VERSION}\n# config: {}\n", cfg.to_json());
        text.reserve(1 << 12);
        Self { text }
    }

    pub fn comment(&mut self, key: &str, value: impl AsRef<str>) -> &mut Self {
        self.text.push_str("# ");
        self.text.push_str(key);
        self.text.push_str(": ");
        self.text.push_str(value.as_ref());
        self.text.push('\n');
        self
    }

    pub fn comment_nums(&mut self, key: &str, values: &[f64]) -> &mut Self {
        let joined = values.iter().map(|v| fmt9(*v)).collect::<Vec<_>>().join(",");
        self.comment(key, joined)
    }

    pub fn columns(&mut self, names: &[&str]) -> &mut Self {
        self.text.push_str(&names.join(","));
        self.text.push('\n');
        self
    }

    pub fn row(&mut self, values: &[f64]) -> &mut Self {
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                self.text.push(',');
            }
            self.text.push_str(&fmt9(*v));
        }
        self.text.push('\n');
        self
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// A JSON document whose first member records version and configuration.
pub fn json_doc<T: Serialize>(cfg: &RunConfig, body: &T) -> String {
    let mut doc = json!({
        "meta": { "version": VERSION, "config": cfg },
    });
    let body = serde_json::to_value(body).expect("body serializes");
    match body {
        Value::Object(map) => {
            let obj = doc.as_object_mut().expect("object");
            obj.extend(map);
        }
        other => {
            doc["data"] = other;
        }
    }
    let mut s = serde_json::to_string_pretty(&doc).expect("document serializes");
    s.push('\n');
    s
}
