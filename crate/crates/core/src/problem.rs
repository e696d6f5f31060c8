//! JSON problem files.
//!
//! ```json
//! {
//!   "n": 2,
//!   "params": { "ell": "-14" },
//!   "A": [["2", "-inf"], ["-inf", "-inf"]],
//!   "L": [["-inf", "-inf"], ["-inf", "ell"]]
//! }
//! ```
//!
//! Entries are exact decimals (`"-13.999"`), fractions (`"1/3"`), integers,
//! the sentinel `"-inf"`, or the name of a parameter, optionally negated
//! (`"-ell"`). Omitted `L`, `C` and `Rtilde` default to the all-`−∞` matrix.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::error::{MaxPlusError, ParseScalarError};
use crate::matrix::TropicalMatrix;
use crate::pteg::PtegSystem;
use crate::scalar::ExtendedScalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
    #[serde(rename = "A", deserialize_with = "entry_rows")]
    pub a: Vec<Vec<String>>,
    #[serde(
        rename = "L",
        default,
        skip_serializing_if = "Option::is_none",
        deserialize_with = "opt_entry_rows"
    )]
    pub l: Option<Vec<Vec<String>>>,
    #[serde(
        rename = "C",
        default,
        skip_serializing_if = "Option::is_none",
        deserialize_with = "opt_entry_rows"
    )]
    pub c: Option<Vec<Vec<String>>>,
    #[serde(
        rename = "Rtilde",
        default,
        skip_serializing_if = "Option::is_none",
        deserialize_with = "opt_entry_rows"
    )]
    pub rtilde: Option<Vec<Vec<String>>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawEntry {
    Text(String),
    Int(i64),
}

fn entry_rows<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<String>>, D::Error> {
    let raw: Vec<Vec<RawEntry>> = Vec::deserialize(d)?;
    Ok(raw
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|e| match e {
                    RawEntry::Text(s) => s,
                    RawEntry::Int(v) => v.to_string(),
                })
                .collect()
        })
        .collect())
}

fn opt_entry_rows<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Vec<String>>>, D::Error> {
    entry_rows(d).map(Some)
}

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("n must be positive")]
    ZeroDimension,
    #[error("matrix {matrix}: expected {expected} rows, found {found}")]
    RowCount {
        matrix: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("matrix {matrix}, row {row}: expected {expected} entries, found {found}")]
    ColumnCount {
        matrix: &'static str,
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("matrix {matrix}, entry ({row}, {col}): {source}")]
    Entry {
        matrix: &'static str,
        row: usize,
        col: usize,
        source: ParseScalarError,
    },
    #[error("matrix {matrix}, entry ({row}, {col}): +inf is not allowed in problem data")]
    PosInf {
        matrix: &'static str,
        row: usize,
        col: usize,
    },
    #[error("matrix {matrix}, entry ({row}, {col}): unknown parameter {name:?}")]
    UnknownParameter {
        matrix: &'static str,
        row: usize,
        col: usize,
        name: String,
    },
    #[error("parameter {name:?}: {source}")]
    BadParameter {
        name: String,
        source: ParseScalarError,
    },
    #[error("parameter override {0:?} must look like name=value")]
    BadOverride(String),
    #[error(transparent)]
    System(#[from] MaxPlusError),
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s != "inf"
}

/// Splits `"name=value"`.
pub fn parse_override(s: &str) -> Result<(String, String), ProblemError> {
    match s.split_once('=') {
        Some((name, value)) if is_identifier(name.trim()) => {
            Ok((name.trim().to_string(), value.trim().to_string()))
        }
        _ => Err(ProblemError::BadOverride(s.to_string())),
    }
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self, ProblemError> {
        let file: ProblemFile = serde_json::from_str(text)?;
        if file.n == 0 {
            return Err(ProblemError::ZeroDimension);
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// Substitutes parameters (overrides win over `params`), validates and
    /// builds the system.
    pub fn resolve(&self, overrides: &[(String, String)]) -> Result<PtegSystem, ProblemError> {
        if self.n == 0 {
            return Err(ProblemError::ZeroDimension);
        }
        let mut params = BTreeMap::new();
        for (name, value) in self
            .params
            .iter()
            .chain(overrides.iter().map(|(k, v)| (k, v)))
        {
            let parsed: ExtendedScalar =
                value.parse().map_err(|source| ProblemError::BadParameter {
                    name: name.clone(),
                    source,
                })?;
            params.insert(name.clone(), parsed);
        }
        let build = |name: &'static str, rows: Option<&Vec<Vec<String>>>| match rows {
            Some(rows) => self.matrix(name, rows, &params),
            None => Ok(TropicalMatrix::neg_inf(self.n, self.n)),
        };
        let a = build("A", Some(&self.a))?;
        let l = build("L", self.l.as_ref())?;
        let c = build("C", self.c.as_ref())?;
        let rtilde = build("Rtilde", self.rtilde.as_ref())?;
        Ok(PtegSystem::new(a, l, c, rtilde)?)
    }

    fn matrix(
        &self,
        matrix: &'static str,
        rows: &[Vec<String>],
        params: &BTreeMap<String, ExtendedScalar>,
    ) -> Result<TropicalMatrix, ProblemError> {
        let n = self.n;
        if rows.len() != n {
            return Err(ProblemError::RowCount {
                matrix,
                expected: n,
                found: rows.len(),
            });
        }
        let mut data = Vec::with_capacity(n * n);
        for (row, entries) in rows.iter().enumerate() {
            if entries.len() != n {
                return Err(ProblemError::ColumnCount {
                    matrix,
                    row,
                    expected: n,
                    found: entries.len(),
                });
            }
            for (col, text) in entries.iter().enumerate() {
                let value = resolve_entry(text, params).map_err(|e| match e {
                    EntryError::Unknown(name) => ProblemError::UnknownParameter {
                        matrix,
                        row,
                        col,
                        name,
                    },
                    EntryError::Parse(source) => ProblemError::Entry {
                        matrix,
                        row,
                        col,
                        source,
                    },
                })?;
                if value.is_pos_inf() {
                    return Err(ProblemError::PosInf { matrix, row, col });
                }
                data.push(value);
            }
        }
        Ok(TropicalMatrix::new(n, n, data)?)
    }
}

enum EntryError {
    Unknown(String),
    Parse(ParseScalarError),
}

fn resolve_entry(
    text: &str,
    params: &BTreeMap<String, ExtendedScalar>,
) -> Result<ExtendedScalar, EntryError> {
    let t = text.trim();
    let (negated, name) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    if !is_identifier(name) {
        return t.parse().map_err(EntryError::Parse);
    }
    let value = params
        .get(name)
        .ok_or_else(|| EntryError::Unknown(name.to_string()))?;
    if !negated {
        return Ok(value.clone());
    }
    match value {
        ExtendedScalar::Finite(v) => Ok(ExtendedScalar::Finite(-v)),
        ExtendedScalar::NegInf => Ok(ExtendedScalar::PosInf),
        ExtendedScalar::PosInf => Ok(ExtendedScalar::NegInf),
    }
}
