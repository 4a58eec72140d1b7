use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Every report carries the command, its echoed inputs and the tool version.
#[derive(Debug, Serialize)]
pub struct ReportEnvelope {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub tool_version: &'static str,
    pub deterministic_seed: u64,
}

/// Rows for csv/table output. Commands without a natural table fall back to
/// one `key,value` row per top-level field of the result.
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn key_value(result: &Value) -> Table {
        let rows = match result {
            Value::Object(map) => map.iter().map(|(k, v)| vec![k.clone(), cell(v)]).collect(),
            other => vec![vec!["result".to_string(), cell(other)]],
        };
        Table {
            headers: vec!["key".into(), "value".into()],
            rows,
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render(format: Format, envelope: &ReportEnvelope, table: Option<Table>) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(envelope).expect("report serializes") + "\n",
        Format::Csv => {
            let table = table.unwrap_or_else(|| Table::key_value(&envelope.result));
            let mut out = String::new();
            for row in std::iter::once(&table.headers).chain(&table.rows) {
                let fields: Vec<String> = row.iter().map(|s| csv_field(s)).collect();
                out.push_str(&fields.join(","));
                out.push('\n');
            }
            out
        }
        Format::Table => {
            let table = table.unwrap_or_else(|| Table::key_value(&envelope.result));
            let mut widths: Vec<usize> = table.headers.iter().map(|h| h.len()).collect();
            for row in &table.rows {
                for (w, c) in widths.iter_mut().zip(row) {
                    *w = (*w).max(c.len());
                }
            }
            let line = |row: &[String]| {
                let cells: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect();
                cells.join("  ").trim_end().to_string() + "\n"
            };
            let mut out = line(&table.headers);
            out.push_str(&line(
                &widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>(),
            ));
            for row in &table.rows {
                out.push_str(&line(row));
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn envelope(result: Value) -> ReportEnvelope {
        ReportEnvelope {
            command: "x".into(),
            inputs: json!({}),
            result,
            tool_version: "0",
            deterministic_seed: 0,
        }
    }

    #[test]
    fn csv_quotes_fields_with_commas() {
        let out = render(
            Format::Csv,
            &envelope(json!({"type": "(2,6,6)", "ok": true})),
            None,
        );
        assert_eq!(out, "key,value\nok,true\ntype,\"(2,6,6)\"\n");
    }

    #[test]
    fn table_aligns_columns() {
        let out = render(
            Format::Table,
            &envelope(json!({"a": 1, "long_key": 2})),
            None,
        );
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "key       value");
        assert_eq!(lines[2], "a         1");
    }
}
