//! CSV and JSON emission of result tables.

use std::io::Write;

use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(x) => json!(format_number(*x)),
            Cell::Int(n) => json!(n),
            Cell::Text(s) => json!(s),
        }
    }
}

/// 17 significant digits, enough to reproduce any `f64` exactly.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Rows plus trailing `#` notes (summaries, verdicts).
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        for note in &self.notes {
            s.push_str("# ");
            s.push_str(note);
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self, config: &RunConfig) -> Result<String, CliError> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (col, cell) in self.columns.iter().zip(row) {
                    obj.insert((*col).to_string(), cell.json());
                }
                Value::Object(obj)
            })
            .collect();
        let doc = json!({
            "config": config,
            "columns": self.columns,
            "rows": rows,
            "notes": self.notes,
        });
        let mut text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Output(e.to_string()))?;
        text.push('\n');
        Ok(text)
    }
}

pub fn emit(table: &Table, config: &RunConfig) -> Result<(), CliError> {
    let text = match config.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(config)?,
    };
    match &config.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Output(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Output(e.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.0, 1.0, std::f64::consts::E, 1.0 / 3.0, 4.310914970542981, 1e-300, 123456789.123] {
            let s = format_number(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_number(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["t", "R", "method"]);
        t.push(vec![Cell::Num(0.0), Cell::Num(1.0), Cell::Text("closed-form".into())]);
        t.notes.push("done".into());
        assert_eq!(
            t.to_csv(),
            "t,R,method\n0.0000000000000000e0,1.0000000000000000e0,closed-form\n# done\n"
        );
    }
}
