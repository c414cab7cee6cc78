//! JSON report envelope.
//!
//! Floats are printed with 17 significant digits so that a report can be
//! parsed back to the exact binary64 values it was written from.

use aalpha::linalg::rational::{format_rational, Rational};
use serde::Serialize;
use serde_json::{Map, Number, Value};

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub version: &'static str,
    pub input: Value,
    pub alpha: Vec<String>,
    pub result: Value,
    pub tolerances: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Report {
    pub fn new(command: &'static str, input: Value) -> Self {
        Report {
            command,
            version: env!("CARGO_PKG_VERSION"),
            input,
            alpha: Vec::new(),
            result: Value::Null,
            tolerances: Map::new(),
            seed: None,
        }
    }

    pub fn alphas<'a>(mut self, alphas: impl IntoIterator<Item = &'a Rational>) -> Self {
        self.alpha = alphas.into_iter().map(format_rational).collect();
        self
    }

    pub fn tolerance(mut self, name: &str, value: f64) -> Self {
        self.tolerances.insert(name.to_owned(), float(value));
        self
    }

    pub fn result(mut self, result: impl Serialize) -> Self {
        self.result = to_value(result);
        self
    }

    pub fn render(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report is plain data");
        fix_floats(&mut v);
        serde_json::to_string_pretty(&v).expect("report is plain data")
    }
}

pub fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("report is plain data")
}

fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format!("{x:.16e}");
    Value::Number(
        text.parse::<Number>()
            .expect("formatted float is a JSON number"),
    )
}

/// Rewrites every non-integer number as `d.dddddddddddddddde±x`.
fn fix_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                *v = float(x);
            }
        }
        Value::Array(items) => items.iter_mut().for_each(fix_floats),
        Value::Object(map) => map.values_mut().for_each(fix_floats),
        _ => {}
    }
}
