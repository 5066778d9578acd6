//! Report payloads. Every map is built in a fixed order so that reports are
//! byte-identical across runs.

use std::collections::BTreeSet;

use ainfty::ainfinity::Table;
use ainfty::hochschild::{Cochain, Window};
use ainfty::maurer_cartan::PolynomialPath;
use ainfty::Scalar;
use serde_json::{json, Map, Value};

use crate::doc::{cochain_doc, components_doc, format_coeff, path_doc, Loaded};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A check did not hold.
    Failed,
    /// The window was too small to decide.
    Window,
}

#[derive(Debug, Default)]
pub struct Report {
    pub window: Option<Window>,
    pub conventions: Option<Value>,
    pub diagnostics: Vec<String>,
    pub result: Map<String, Value>,
}

impl Report {
    pub fn put(&mut self, key: &str, value: impl Into<Value>) {
        self.result.insert(key.to_string(), value.into());
    }

    pub fn window_json(&self) -> Value {
        match self.window {
            Some(w) => json!({ "min_weight": w.min_weight, "cutoff": w.cutoff }),
            None => Value::Null,
        }
    }
}

/// The ingest convention and the degree of each arity in both conventions.
pub fn conventions(a: &Loaded) -> Value {
    let arities: BTreeSet<usize> = a.structure.mu().components().keys().map(|w| w.weight()).collect();
    let degrees: Vec<Value> = arities.into_iter().map(|i| json!({ "arity": i, "m": 2 - i as i64, "mu": 1 })).collect();
    json!({ "ingest": a.convention.name(), "degrees": degrees })
}

pub fn scalar(c: &Scalar) -> Value {
    json!(format_coeff(c))
}

pub fn scalars(cs: &[Scalar]) -> Value {
    Value::Array(cs.iter().map(scalar).collect())
}

pub fn cochain(c: &Cochain) -> Value {
    serde_json::to_value(cochain_doc(c)).expect("plain data")
}

/// `"zero"` or the offending terms.
pub fn residual(c: &Cochain) -> Value {
    if c.is_zero() {
        json!("zero")
    } else {
        cochain(c)
    }
}

pub fn table(t: &Table) -> Value {
    json!({ "degree": t.degree, "terms": components_doc(&t.source, &t.target, &t.comps) })
}

pub fn table_residual(t: &Table) -> Value {
    if t.is_zero() {
        json!("zero")
    } else {
        table(t)
    }
}

pub fn path(p: &PolynomialPath) -> Value {
    serde_json::to_value(path_doc(p)).expect("plain data")
}

pub fn path_residual(p: &PolynomialPath) -> Value {
    if p.is_zero() {
        json!("zero")
    } else {
        path(p)
    }
}
