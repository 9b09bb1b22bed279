//! JSON group specifications.

use serde::{Deserialize, Serialize};

use super::catalog;
use super::CliError;
use crate::group::FiniteGroup;
use crate::narygroup::{b_derived, nary_from_table_unchecked, NaryError, PolyadicGroup};

/// One group construction. Flat n-ary tables are row-major with the last
/// argument varying fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpecDocument {
    Cayley {
        order: usize,
        table: Vec<Vec<usize>>,
        #[serde(default)]
        label: Option<String>,
    },
    BDerived {
        base: Box<GroupSpecDocument>,
        b: usize,
        arity: usize,
        #[serde(default)]
        label: Option<String>,
    },
    NaryTable {
        arity: usize,
        order: usize,
        table: Vec<usize>,
        #[serde(default)]
        label: Option<String>,
    },
    Builtin { name: String },
}

pub fn parse_document(text: &str) -> Result<GroupSpecDocument, CliError> {
    serde_json::from_str(text).map_err(|e| {
        CliError::Usage(format!("parse error at line {}, column {}: {e}", e.line(), e.column()))
    })
}

/// Builds the group a document describes. Shape and range problems are usage
/// errors; the axioms are left to the caller so that they can be reported.
pub fn resolve(doc: &GroupSpecDocument) -> Result<PolyadicGroup, CliError> {
    match doc {
        GroupSpecDocument::Cayley { order, table, label } => {
            if table.len() != *order || table.iter().any(|row| row.len() != *order) {
                return Err(CliError::Usage(format!("cayley table must be {order} x {order}")));
            }
            if let Some((r, c, v)) = table
                .iter()
                .enumerate()
                .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &v)| (r, c, v)))
                .find(|&(_, _, v)| v >= *order)
            {
                return Err(CliError::Usage(format!("cayley entry [{r}][{c}] = {v} out of range for order {order}")));
            }
            let flat: Vec<usize> = table.iter().flatten().copied().collect();
            let label = label.clone().unwrap_or_else(|| format!("cayley({order})"));
            nary_from_table_unchecked(2, *order, flat, &label).map_err(shape_error)
        }
        GroupSpecDocument::NaryTable { arity, order, table, label } => {
            let label = label.clone().unwrap_or_else(|| format!("table({arity}, {order})"));
            nary_from_table_unchecked(*arity, *order, table.clone(), &label).map_err(shape_error)
        }
        GroupSpecDocument::BDerived { base, b, arity, label } => {
            let inner = resolve(base)?;
            if inner.arity() != 2 {
                return Err(CliError::Usage(format!("b_derived base must be binary, got arity {}", inner.arity())));
            }
            if *b >= inner.order() {
                return Err(CliError::Usage(format!("b = {b} out of range for base order {}", inner.order())));
            }
            let base = FiniteGroup::from_flat(inner.order(), inner.to_table(), inner.label())
                .map_err(|e| CliError::Math(format!("base is not a group: {e}")))?;
            let g = b_derived(&base, *b, *arity).map_err(|e| match e {
                NaryError::NotCentral { .. } => CliError::Math(e.to_string()),
                other => CliError::Usage(other.to_string()),
            })?;
            Ok(match label {
                Some(l) => g.with_label(l.clone()),
                None => g,
            })
        }
        GroupSpecDocument::Builtin { name } => catalog::builtin(name)
            .map(|entry| (entry.build)())
            .ok_or_else(|| CliError::Usage(format!("unknown builtin {name:?}; see `polyadic catalog`"))),
    }
}

fn shape_error(e: NaryError) -> CliError {
    CliError::Usage(e.to_string())
}
