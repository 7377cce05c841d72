//! Merges experiment CSVs into one JSON summary, grouped by the experiment
//! each header identifies.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use skewflow::ergodic::NeumaierSum;

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Column {
    Int,
    Num,
    Bool,
    Text,
}

#[derive(Clone, Debug, PartialEq)]
struct Schema {
    experiment: &'static str,
    columns: Vec<(String, Column)>,
}

const FIXED: &[(&str, &[(&str, Column)])] = &[
    ("equidist", &[("n_checkpoint", Column::Int), ("re_avg", Column::Num), ("im_avg", Column::Num), ("abs_avg", Column::Num)]),
    ("oxtoby", &[("start", Column::Int), ("re_avg", Column::Num), ("im_avg", Column::Num), ("abs_avg", Column::Num)]),
    ("weyl", &[("n_checkpoint", Column::Int), ("abs_norm", Column::Num)]),
    (
        "distal",
        &[
            ("pair", Column::Int),
            ("first_diff", Column::Int),
            ("min_distance", Column::Num),
            ("argmin", Column::Int),
            ("gap_constant", Column::Bool),
        ],
    ),
    ("gamma", &[("n", Column::Int), ("re", Column::Num), ("im", Column::Num)]),
    ("salehi", &[("shift", Column::Int), ("re_avg", Column::Num), ("im_avg", Column::Num), ("abs_avg", Column::Num)]),
    ("ellis", &[("a", Column::Int), ("b", Column::Int), ("product_equal", Column::Bool), ("witness", Column::Text)]),
    ("power-check", &[("n", Column::Int), ("exact", Column::Bool)]),
];

/// `n, <prefix>0, <prefix>1, ...` with at least one indexed column.
fn indexed(header: &[String], prefix: &str) -> bool {
    header.len() >= 2
        && header[0] == "n"
        && header[1..].iter().enumerate().all(|(i, h)| *h == format!("{prefix}{i}"))
}

fn identify(header: &[String]) -> Option<Schema> {
    for (name, cols) in FIXED {
        if header.len() == cols.len() && header.iter().zip(cols.iter()).all(|(h, (c, _))| h == c) {
            return Some(Schema {
                experiment: name,
                columns: cols.iter().map(|(c, k)| (c.to_string(), *k)).collect(),
            });
        }
    }
    let with = |experiment, kind| Schema {
        experiment,
        columns: header
            .iter()
            .enumerate()
            .map(|(i, h)| (h.clone(), if i == 0 { Column::Int } else { kind }))
            .collect(),
    };
    if indexed(header, "e") {
        Some(with("scan", Column::Int))
    } else if indexed(header, "x") {
        Some(with("iterate", Column::Text))
    } else {
        None
    }
}

fn valid(cell: &str, kind: Column) -> bool {
    match kind {
        Column::Int => cell.parse::<i64>().is_ok(),
        Column::Num => cell.parse::<f64>().is_ok(),
        Column::Bool => cell == "true" || cell == "false",
        Column::Text => true,
    }
}

struct Parsed {
    schema: Schema,
    rows: Vec<Vec<String>>,
}

fn schema_error(path: &Path, line: u64, msg: impl std::fmt::Display) -> CliError {
    CliError::Schema(format!("{}: line {line}: {msg}", path.display()))
}

fn read(path: &Path) -> CliResult<Parsed> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(file);
    let mut records = reader.records();
    let header: Vec<String> = match records.next() {
        None => return Err(schema_error(path, 1, "missing header row")),
        Some(Err(e)) => return Err(schema_error(path, 1, e)),
        Some(Ok(r)) => r.iter().map(str::to_string).collect(),
    };
    let schema = identify(&header)
        .ok_or_else(|| schema_error(path, 1, format!("unrecognised header {:?}", header.join(","))))?;
    let mut rows = Vec::new();
    for record in records {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            schema_error(path, line, e)
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != schema.columns.len() {
            return Err(schema_error(
                path,
                line,
                format!("expected {} fields, found {}", schema.columns.len(), record.len()),
            ));
        }
        for (cell, (name, kind)) in record.iter().zip(&schema.columns) {
            if !valid(cell, *kind) {
                return Err(schema_error(path, line, format!("bad value {cell:?} in column {name}")));
            }
        }
        rows.push(record.iter().map(str::to_string).collect());
    }
    Ok(Parsed { schema, rows })
}

struct Group {
    schema: Schema,
    files: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn column_summary(kind: Column, cells: &[&str]) -> Option<Value> {
    match kind {
        Column::Int | Column::Num => {
            let values: Vec<f64> = cells.iter().map(|c| c.parse::<f64>().expect("validated")).collect();
            if values.is_empty() {
                return Some(json!({"min": null, "max": null, "mean": null}));
            }
            let mut sum = NeumaierSum::new();
            values.iter().for_each(|&v| sum.add(v));
            Some(json!({
                "min": values.iter().copied().fold(f64::INFINITY, f64::min),
                "max": values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                "mean": sum.value() / values.len() as f64,
            }))
        }
        Column::Bool => {
            let yes = cells.iter().filter(|c| **c == "true").count();
            Some(json!({"true": yes, "false": cells.len() - yes}))
        }
        Column::Text => None,
    }
}

pub fn report(inputs: &[PathBuf]) -> CliResult<Value> {
    let mut groups: BTreeMap<&'static str, Group> = BTreeMap::new();
    for path in inputs {
        let parsed = read(path)?;
        let name = path.display().to_string();
        let group = groups.entry(parsed.schema.experiment).or_insert_with(|| Group {
            schema: parsed.schema.clone(),
            files: Vec::new(),
            rows: Vec::new(),
        });
        if group.schema != parsed.schema {
            return Err(schema_error(path, 1, format!("header differs from earlier {} files", parsed.schema.experiment)));
        }
        group.files.push(name.clone());
        group.rows.extend(parsed.rows.into_iter().map(|r| std::iter::once(name.clone()).chain(r).collect()));
    }
    let mut experiments = Map::new();
    for (name, g) in groups {
        let mut columns = Map::new();
        for (i, (col, kind)) in g.schema.columns.iter().enumerate() {
            let cells: Vec<&str> = g.rows.iter().map(|r| r[i + 1].as_str()).collect();
            if let Some(summary) = column_summary(*kind, &cells) {
                columns.insert(col.clone(), summary);
            }
        }
        let header: Vec<&str> = std::iter::once("file").chain(g.schema.columns.iter().map(|(c, _)| c.as_str())).collect();
        experiments.insert(
            name.to_string(),
            json!({
                "files": g.files,
                "rows": g.rows.len(),
                "columns": columns,
                "header": header,
                "table": g.rows,
            }),
        );
    }
    Ok(json!({"experiments": experiments}))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn headers_identify_experiments() {
        assert_eq!(identify(&strings(&["n_checkpoint", "abs_norm"])).unwrap().experiment, "weyl");
        assert_eq!(identify(&strings(&["n", "e0", "e1"])).unwrap().experiment, "scan");
        assert_eq!(identify(&strings(&["n", "x0"])).unwrap().experiment, "iterate");
        assert_eq!(identify(&strings(&["n", "exact"])).unwrap().experiment, "power-check");
        assert!(identify(&strings(&["n", "e1"])).is_none());
        assert!(identify(&strings(&["n"])).is_none());
    }

    #[test]
    fn cell_validation() {
        assert!(valid("-3", Column::Int));
        assert!(!valid("1.5", Column::Int));
        assert!(valid("1e-3", Column::Num));
        assert!(!valid("yes", Column::Bool));
    }

    #[test]
    fn empty_input_list() {
        assert_eq!(report(&[]).unwrap(), json!({"experiments": {}}));
    }
}
