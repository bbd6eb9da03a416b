//! Tabular output shared by every command: one header row naming all fields,
//! floats written with 17 significant digits, and a JSON form that mirrors
//! the CSV fields.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use clap::ValueEnum;
use serde_json::{Map, Number, Value as Json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn csv_text(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Json {
        match self {
            // JSON has no literal for NaN or infinities; they keep their CSV text.
            Cell::Float(x) => Number::from_f64(*x).map_or_else(|| Json::String(format_float(*x)), Json::Number),
            Cell::Int(n) => Json::from(*n),
            Cell::Text(s) => Json::String(s.clone()),
        }
    }
}

/// `{:.16e}` keeps 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// A record type with a fixed schema.
pub trait Row {
    const SCHEMA: &'static str;
    fn header() -> &'static [&'static str];
    fn cells(&self) -> Vec<Cell>;
}

pub fn to_csv<R: Row>(records: &[R]) -> io::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(R::header())?;
    for r in records {
        let cells = r.cells();
        debug_assert_eq!(cells.len(), R::header().len());
        w.write_record(cells.iter().map(Cell::csv_text))?;
    }
    w.into_inner().map_err(|e| e.into_error())
}

pub fn to_json<R: Row>(records: &[R]) -> io::Result<Vec<u8>> {
    let rows: Vec<Json> = records
        .iter()
        .map(|r| {
            let map: Map<String, Json> = R::header().iter().map(|h| h.to_string()).zip(r.cells().iter().map(Cell::json)).collect();
            Json::Object(map)
        })
        .collect();
    let mut doc = Map::new();
    doc.insert("schema".into(), Json::String(R::SCHEMA.into()));
    doc.insert("fields".into(), Json::from(R::header().to_vec()));
    doc.insert("records".into(), Json::Array(rows));
    let mut out = serde_json::to_vec_pretty(&Json::Object(doc))?;
    out.push(b'\n');
    Ok(out)
}

/// Writes `bytes` to `path`, or to stdout when no path is given.
pub fn write_output(bytes: &[u8], path: Option<&Path>) -> io::Result<()> {
    match path {
        Some(p) => File::create(p)?.write_all(bytes),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()
        }
    }
}

pub fn emit_report<R: Row>(records: &[R], format: Format, path: Option<&Path>) -> io::Result<()> {
    let bytes = match format {
        Format::Csv => to_csv(records)?,
        Format::Json => to_json(records)?,
    };
    write_output(&bytes, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Sample {
        x: f64,
        n: i64,
        tag: &'static str,
    }

    impl Row for Sample {
        const SCHEMA: &'static str = "sample";
        fn header() -> &'static [&'static str] {
            &["x", "n", "tag"]
        }
        fn cells(&self) -> Vec<Cell> {
            vec![Cell::Float(self.x), Cell::Int(self.n), Cell::Text(self.tag.into())]
        }
    }

    #[test]
    fn empty_list_gives_header_only() {
        let csv = to_csv::<Sample>(&[]).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "x,n,tag\n");
    }

    #[test]
    fn one_record_gives_two_lines() {
        let csv = to_csv(&[Sample { x: 0.1, n: 3, tag: "a" }]).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 2);
    }

    #[test]
    fn floats_parse_back_bit_exactly() {
        let xs = [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE, 5e-324, f64::MAX, f64::NEG_INFINITY, 0.0];
        let records: Vec<Sample> = xs.iter().map(|&x| Sample { x, n: 0, tag: "" }).collect();
        let csv = to_csv(&records).unwrap();
        let mut reader = csv::Reader::from_reader(csv.as_slice());
        for (row, x) in reader.records().zip(xs) {
            let back: f64 = row.unwrap()[0].parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits());
        }
    }

    #[test]
    fn json_mirrors_the_header() {
        let json = to_json(&[Sample { x: f64::NAN, n: 7, tag: "b" }]).unwrap();
        let doc: Json = serde_json::from_slice(&json).unwrap();
        let rec = &doc["records"][0];
        assert_eq!(rec.as_object().unwrap().keys().collect::<Vec<_>>(), ["x", "n", "tag"]);
        assert_eq!(rec["x"], "NaN");
        assert_eq!(rec["n"], 7);
        assert_eq!(doc["schema"], "sample");
    }
}
