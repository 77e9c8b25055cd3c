//! Mapping file format.
//!
//! A mapping file is JSON in one of two shapes:
//!
//! ```json
//! { "builtin": "linear", "params": { "alpha": [1, 0], "beta": [0.5, 0] } }
//! { "label": "custom", "p": 2, "J": 3,
//!   "terms": [ { "n": 1, "j": 1, "a": [1, 0], "b": [0, 0] } ] }
//! ```
//!
//! Complex numbers are `[re, im]` pairs. Terms not listed are zero; `a` or
//! `b` may be omitted within a term.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::catalog;
use crate::map::{CoefficientTable, PolyharmonicMap};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub n: usize,
    pub j: usize,
    #[serde(default)]
    pub a: [f64; 2],
    #[serde(default)]
    pub b: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub p: usize,
    #[serde(rename = "J")]
    pub j_max: usize,
    #[serde(default)]
    pub terms: Vec<TermSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuiltinSpec {
    pub builtin: String,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub params: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MappingSpec {
    Builtin(BuiltinSpec),
    Table(TableSpec),
}

impl MappingSpec {
    pub fn builtin(name: &str, params: Value) -> Self {
        let params = match params {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        MappingSpec::Builtin(BuiltinSpec {
            builtin: name.to_string(),
            params,
            label: None,
        })
    }

    /// Explicit-table spec listing every entry with a non-zero bit pattern,
    /// so parsing it back reproduces the table exactly.
    pub fn from_map(map: &PolyharmonicMap) -> Self {
        let t = map.table();
        let nonzero = |c: C64| c.re.to_bits() != 0 || c.im.to_bits() != 0;
        let terms = t
            .entries()
            .filter(|(_, _, a, b)| nonzero(*a) || nonzero(*b))
            .map(|(n, j, a, b)| TermSpec {
                n,
                j,
                a: [a.re, a.im],
                b: [b.re, b.im],
            })
            .collect();
        MappingSpec::Table(TableSpec {
            label: Some(map.label().to_string()),
            p: t.p(),
            j_max: t.j_max(),
            terms,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::MalformedSpec(e.to_string()))?;
        let is_builtin = value.get("builtin").is_some();
        let parsed = if is_builtin {
            serde_json::from_value(value).map(MappingSpec::Builtin)
        } else {
            serde_json::from_value(value).map(MappingSpec::Table)
        };
        parsed.map_err(|e| Error::MalformedSpec(e.to_string()))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("mapping specs always serialize")
    }

    /// Validates and builds the map.
    pub fn build(&self) -> Result<PolyharmonicMap> {
        match self {
            MappingSpec::Builtin(spec) => {
                let map = catalog::builtin(&spec.builtin, &Value::Object(spec.params.clone()))?;
                Ok(match &spec.label {
                    Some(label) => relabel(map, label),
                    None => map,
                })
            }
            MappingSpec::Table(spec) => spec.build(),
        }
    }
}

fn relabel(map: PolyharmonicMap, label: &str) -> PolyharmonicMap {
    let notes = map.notes().to_vec();
    let mut out = PolyharmonicMap::new(map.table().clone(), label).expect("already validated");
    for (k, v) in notes {
        out = out.with_note(k, v);
    }
    out
}

impl TableSpec {
    pub fn build(&self) -> Result<PolyharmonicMap> {
        if self.p < 1 || self.j_max < 1 {
            return Err(Error::MalformedSpec(format!(
                "p = {} and J = {} must both be at least 1",
                self.p, self.j_max
            )));
        }
        let mut table = CoefficientTable::zeros(self.p, self.j_max);
        let mut seen = vec![false; self.p * self.j_max];
        for term in &self.terms {
            if !(1..=self.p).contains(&term.n) || !(1..=self.j_max).contains(&term.j) {
                return Err(Error::MalformedSpec(format!(
                    "term index ({}, {}) outside 1..={} x 1..={}",
                    term.n, term.j, self.p, self.j_max
                )));
            }
            let slot = (term.n - 1) * self.j_max + term.j - 1;
            if std::mem::replace(&mut seen[slot], true) {
                return Err(Error::MalformedSpec(format!(
                    "duplicate term ({}, {})",
                    term.n, term.j
                )));
            }
            if term.a.iter().chain(&term.b).any(|x| !x.is_finite()) {
                return Err(Error::MalformedSpec(format!(
                    "non-finite coefficient in term ({}, {})",
                    term.n, term.j
                )));
            }
            table.set_a(term.n, term.j, C64::new(term.a[0], term.a[1]));
            table.set_b(term.n, term.j, C64::new(term.b[0], term.b[1]));
        }
        PolyharmonicMap::new(table, self.label.clone().unwrap_or_else(|| "table".into()))
    }
}
