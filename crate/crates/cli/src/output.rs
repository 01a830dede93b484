use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{json, Value};
use tspecial::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// A rectangular table destined for CSV, or for JSON as a list of row objects.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(x) => json!(x.to_string()),
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
        }
    }
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj = self
                    .header
                    .iter()
                    .zip(r)
                    .map(|(h, c)| (h.clone(), c.json()))
                    .collect::<serde_json::Map<_, _>>();
                Value::Object(obj)
            })
            .collect();
        json!(rows)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::csv))?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

pub fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(io::BufWriter::new(File::create(p).map_err(csv::Error::from)?)),
        None => Box::new(io::stdout().lock()),
    })
}

/// `{"schema_version", "command", ...body}`.
pub fn envelope(command: &str, body: Value) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
    obj.insert("command".into(), json!(command));
    if let Value::Object(m) = body {
        obj.extend(m);
    } else {
        obj.insert("data".into(), body);
    }
    Value::Object(obj)
}

pub fn write_json<W: Write>(mut out: W, v: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out).map_err(csv::Error::from)?;
    Ok(())
}

pub fn emit_table(command: &str, table: &Table, as_json: bool, out: Option<&Path>) -> Result<()> {
    let w = sink(out)?;
    if as_json {
        write_json(
            w,
            &envelope(command, json!({ "columns": table.header, "rows": table.to_json() })),
        )
    } else {
        table.write_csv(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_cells_carry_seventeen_digits() {
        let mut t = Table::new(["x", "n", "label"]);
        t.push(vec![Cell::Num(0.1), Cell::Int(3), Cell::Text("a,b".into())]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "x,n,label\n1.0000000000000001e-1,3,\"a,b\"\n");
    }

    #[test]
    fn json_rows_and_envelope() {
        let mut t = Table::new(["x", "y"]);
        t.push(vec![Cell::Num(0.5), Cell::Num(f64::NAN)]);
        let v = envelope("demo", json!({ "rows": t.to_json() }));
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
        assert_eq!(v["command"], "demo");
        assert_eq!(v["rows"][0]["x"], 0.5);
        assert_eq!(v["rows"][0]["y"], "NaN");
    }
}
