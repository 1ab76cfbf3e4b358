use imprecise_core::rational::{to_decimal, to_exact_string};
use imprecise_core::Rational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::schema::Input;

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Machine-readable outcome of one command. `result` is present exactly
/// when the command succeeded.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    pub exact: bool,
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: Vec::new(),
            result: None,
            exact: true,
            diagnostics: Vec::new(),
        }
    }

    pub fn record(&mut self, input: &Input) {
        self.inputs.push(InputDigest {
            path: input.path.clone(),
            sha256: input.sha256(),
        });
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.diagnostics.push(line.into());
    }
}

/// Renders values for the report, with an optional decimal companion to
/// each rational.
#[derive(Clone, Copy, Debug)]
pub struct Render {
    pub decimal: Option<usize>,
}

impl Render {
    pub fn rational(&self, r: &Rational) -> Value {
        let mut v = json!({"kind": "rational", "value": to_exact_string(r)});
        if let Some(d) = self.decimal {
            v["decimal"] = Value::String(to_decimal(r, d));
        }
        v
    }

    pub fn boolean(&self, b: bool) -> Value {
        json!({"kind": "bool", "value": b})
    }

    pub fn table(&self, columns: Vec<String>, rows: Vec<Vec<Value>>) -> Value {
        json!({"kind": "table", "columns": columns, "rows": rows})
    }

    pub fn cell(&self, r: &Rational) -> Value {
        match self.decimal {
            Some(d) => json!({"value": to_exact_string(r), "decimal": to_decimal(r, d)}),
            None => Value::String(to_exact_string(r)),
        }
    }
}
