//! CSV and JSON emission. Output is assembled in memory and written once.

use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig, ECHO_END, OUTPUT_MAGIC};

/// 17 significant digits, enough to round-trip any f64.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(&'static str),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => sig17(*x),
            Cell::Text(s) => s.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => json!(x),
            Cell::Text(s) => json!(s),
        }
    }
}

/// Rows of cells with comment notes above and summary values below.
#[derive(Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<String>,
    pub footer: Vec<(&'static str, f64)>,
}

pub fn render_table(config: &RunConfig, table: &Table) -> String {
    match config.format {
        Format::Csv => {
            let mut out = header(config);
            for note in &table.notes {
                out.push_str(&format!("# {note}\n"));
            }
            out.push_str(&table.columns.join(","));
            out.push('\n');
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            for (key, value) in &table.footer {
                out.push_str(&format!("# {key}={}\n", sig17(*value)));
            }
            out
        }
        Format::Json => {
            let rows: Vec<Vec<Value>> = table
                .rows
                .iter()
                .map(|r| r.iter().map(Cell::json).collect())
                .collect();
            let footer: Map<String, Value> = table
                .footer
                .iter()
                .map(|(k, v)| (k.to_string(), json!(v)))
                .collect();
            let doc = json!({
                "config": config_object(config),
                "notes": table.notes,
                "columns": table.columns,
                "rows": rows,
                "summary": footer,
            });
            format!("{doc}\n")
        }
    }
}

/// Records of (name, value, unit) for summaries.
pub fn render_summary(config: &RunConfig, records: &[(&str, f64, &str)]) -> String {
    match config.format {
        Format::Csv => {
            let mut out = header(config);
            out.push_str("quantity,value,unit\n");
            for (name, value, unit) in records {
                out.push_str(&format!("{name},{},{unit}\n", sig17(*value)));
            }
            out
        }
        Format::Json => {
            let mut summary = Map::new();
            for (name, value, unit) in records {
                summary.insert(name.to_string(), json!({ "value": value, "unit": unit }));
            }
            let doc = json!({ "config": config_object(config), "summary": summary });
            format!("{doc}\n")
        }
    }
}

fn header(config: &RunConfig) -> String {
    let mut out = format!("{OUTPUT_MAGIC}\n");
    for (k, v) in config.echo() {
        out.push_str(&format!("# {k}={v}\n"));
    }
    out.push_str(ECHO_END);
    out.push('\n');
    out
}

fn config_object(config: &RunConfig) -> Value {
    let map: Map<String, Value> = config
        .echo()
        .into_iter()
        .map(|(k, v)| (k.to_string(), Value::String(v)))
        .collect();
    Value::Object(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(sig17(1.0), "1.0000000000000000e0");
        assert_eq!(sig17(0.0), "0.0000000000000000e0");
        let x = 0.1 + 0.2;
        assert_eq!(sig17(x).parse::<f64>().unwrap(), x);
    }
}
