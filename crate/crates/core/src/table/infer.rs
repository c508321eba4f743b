//! Column-kind inference from raw text columns.

use std::collections::HashMap;

use chrono::NaiveDate;

use super::{Column, ColumnData, ColumnKind, Table, TextData};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_CATEGORICAL_LEVELS: usize = 20;

/// Result of reading one numeric token.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NumberToken {
    Value(f64),
    /// `NaN`: numeric, but stored as missing.
    NotANumber,
}

/// Decimal or scientific numeral, `Inf`/`-Inf`, or `NaN`.
pub fn parse_number(s: &str) -> Option<NumberToken> {
    match s {
        "Inf" | "+Inf" => return Some(NumberToken::Value(f64::INFINITY)),
        "-Inf" => return Some(NumberToken::Value(f64::NEG_INFINITY)),
        "NaN" | "nan" | "NAN" => return Some(NumberToken::NotANumber),
        _ => {}
    }
    let b = s.as_bytes();
    let mut i = 0;
    if matches!(b.first(), Some(b'+' | b'-')) {
        i += 1;
    }
    let int_start = i;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    let mut digits = i - int_start;
    if i < b.len() && b[i] == b'.' {
        i += 1;
        let frac_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        digits += i - frac_start;
    }
    if digits == 0 {
        return None;
    }
    if i < b.len() && matches!(b[i], b'e' | b'E') {
        i += 1;
        if matches!(b.get(i), Some(b'+' | b'-')) {
            i += 1;
        }
        let exp_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == exp_start {
            return None;
        }
    }
    if i != b.len() {
        return None;
    }
    s.parse::<f64>().ok().map(NumberToken::Value)
}

pub fn parse_logical(s: &str) -> Option<bool> {
    match s {
        "TRUE" | "true" | "T" => Some(true),
        "FALSE" | "false" | "F" => Some(false),
        _ => None,
    }
}

/// ISO-8601 calendar date `YYYY-MM-DD`, optionally followed by a time part
/// (`T` or space then `HH:MM...`), which is discarded.
pub fn parse_date(s: &str) -> Option<NaiveDate> {
    let b = s.as_bytes();
    if b.len() < 10 {
        return None;
    }
    let digits = |r: std::ops::Range<usize>| b[r].iter().all(u8::is_ascii_digit);
    if !(digits(0..4) && b[4] == b'-' && digits(5..7) && b[7] == b'-' && digits(8..10)) {
        return None;
    }
    if b.len() > 10 {
        let rest = &b[10..];
        let ok = rest.len() >= 6
            && matches!(rest[0], b'T' | b' ')
            && rest[1].is_ascii_digit()
            && rest[2].is_ascii_digit()
            && rest[3] == b':'
            && rest[4].is_ascii_digit()
            && rest[5].is_ascii_digit();
        if !ok {
            return None;
        }
    }
    let y: i32 = s[0..4].parse().ok()?;
    let m: u32 = s[5..7].parse().ok()?;
    let d: u32 = s[8..10].parse().ok()?;
    NaiveDate::from_ymd_opt(y, m, d)
}

/// Per-column kind overrides, one `column_name = kind` per line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KindManifest {
    entries: Vec<(String, ColumnKind)>,
}

impl KindManifest {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (name, kind) = line.split_once('=').ok_or_else(|| Error::Manifest {
                line: n + 1,
                message: "expected `column = kind`".into(),
            })?;
            let kind = match kind.trim().to_ascii_lowercase().as_str() {
                "numeric" | "number" | "integer" => ColumnKind::Numeric,
                "categorical" | "factor" => ColumnKind::Categorical,
                "text" | "character" => ColumnKind::Text,
                "logical" => ColumnKind::Logical,
                "date" => ColumnKind::Date,
                other => {
                    return Err(Error::Manifest {
                        line: n + 1,
                        message: format!("unknown kind '{other}'"),
                    })
                }
            };
            entries.push((name.trim().to_string(), kind));
        }
        Ok(Self { entries })
    }

    pub fn get(&self, column: &str) -> Option<ColumnKind> {
        self.entries
            .iter()
            .rev()
            .find(|(n, _)| n == column)
            .map(|(_, k)| *k)
    }

    pub fn entries(&self) -> &[(String, ColumnKind)] {
        &self.entries
    }
}

/// Assign kinds to raw text columns by precedence
/// Logical → Date → Numeric → Categorical → Text.
///
/// Columns that are not raw text are returned unchanged.
pub fn infer_kinds(table: Table, max_categorical_levels: usize) -> Table {
    infer_kinds_with(table, max_categorical_levels, &KindManifest::default())
        .expect("inference without overrides cannot fail")
}

/// [`infer_kinds`] with per-column overrides; an override whose kind does not
/// parse every value is an error.
pub fn infer_kinds_with(
    table: Table,
    max_categorical_levels: usize,
    manifest: &KindManifest,
) -> Result<Table> {
    for (name, _) in manifest.entries() {
        table.column(name)?;
    }
    let columns = table
        .into_columns()
        .into_iter()
        .map(|col| {
            let forced = manifest.get(col.name());
            if col.kind == ColumnKind::Text {
                if let ColumnData::Text(t) = &col.data {
                    let kind = forced.unwrap_or_else(|| detect(t, max_categorical_levels));
                    return convert(col.name.clone(), t, kind);
                }
            }
            match forced {
                Some(k) if k != col.kind => Err(Error::TypeMismatch {
                    column: col.name.clone(),
                    message: format!("already typed as {}, cannot override to {k}", col.kind),
                }),
                _ => Ok(col),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Table::new(columns)
}

fn used_values(t: &TextData) -> Vec<&str> {
    let mut seen = vec![false; t.dict.len()];
    for i in 0..t.len() {
        if let Some(c) = t.code(i) {
            seen[c as usize] = true;
        }
    }
    t.dict
        .iter()
        .zip(seen)
        .filter_map(|(s, used)| used.then_some(s.as_str()))
        .collect()
}

fn detect(t: &TextData, max_levels: usize) -> ColumnKind {
    let values = used_values(t);
    if values.iter().all(|v| parse_logical(v).is_some()) {
        ColumnKind::Logical
    } else if values.iter().all(|v| parse_date(v).is_some()) {
        ColumnKind::Date
    } else if values.iter().all(|v| parse_number(v).is_some()) {
        ColumnKind::Numeric
    } else if values.len() <= max_levels {
        ColumnKind::Categorical
    } else {
        ColumnKind::Text
    }
}

fn convert(name: String, t: &TextData, kind: ColumnKind) -> Result<Column> {
    let bad = |name: &str, i: usize, v: &str| Error::TypeMismatch {
        column: name.to_string(),
        message: format!("row {}: '{v}' is not {kind}", i + 1),
    };
    let data = match kind {
        ColumnKind::Text | ColumnKind::Categorical => ColumnData::Text(t.clone()),
        ColumnKind::Numeric => {
            // parse each dictionary entry once
            let mut cache: HashMap<u32, f64> = HashMap::new();
            let mut out = Vec::with_capacity(t.len());
            for i in 0..t.len() {
                let x = match t.code(i) {
                    None => f64::NAN,
                    Some(c) => match cache.get(&c) {
                        Some(&x) => x,
                        None => {
                            let s = &t.dict[c as usize];
                            let x = match parse_number(s) {
                                Some(NumberToken::Value(x)) => x,
                                Some(NumberToken::NotANumber) => f64::NAN,
                                None => return Err(bad(&name, i, s)),
                            };
                            cache.insert(c, x);
                            x
                        }
                    },
                };
                out.push(x);
            }
            ColumnData::Number(out)
        }
        ColumnKind::Logical => {
            let mut out = Vec::with_capacity(t.len());
            for i in 0..t.len() {
                out.push(match t.get(i) {
                    None => None,
                    Some(s) => Some(parse_logical(s).ok_or_else(|| bad(&name, i, s))?),
                });
            }
            ColumnData::Logical(out)
        }
        ColumnKind::Date => {
            let parsed: Vec<Option<NaiveDate>> = t.dict.iter().map(|s| parse_date(s)).collect();
            let mut out = Vec::with_capacity(t.len());
            for i in 0..t.len() {
                out.push(match t.code(i) {
                    None => None,
                    Some(c) => Some(parsed[c as usize].ok_or_else(|| bad(&name, i, &t.dict[c as usize]))?),
                });
            }
            ColumnData::Date(out)
        }
    };
    Column::new(name, kind, data)
}
