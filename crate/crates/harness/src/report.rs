use std::io::Write;

use gaussian_sieve::sieve::SieveRecord;
use serde::{Deserialize, Serialize};

use crate::config::Format;
use crate::HarnessError;

/// Column order of the CSV report.
pub const CSV_HEADER: &str =
    "family,Q,N,coeff,mode,epsilon,lhs,Z,boundT1,boundT2,boundT3,boundT4,ratioT1,ratioT2,ratioT3,ratioT4,elapsed_ms";

/// One report row. Inapplicable columns are `None`: empty in CSV, `null` in JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub family: String,
    #[serde(rename = "Q")]
    pub q: f64,
    #[serde(rename = "N")]
    pub n: i64,
    pub coeff: String,
    pub mode: String,
    pub epsilon: f64,
    pub lhs: f64,
    #[serde(rename = "Z")]
    pub z: f64,
    #[serde(rename = "boundT1")]
    pub bound_t1: Option<f64>,
    #[serde(rename = "boundT2")]
    pub bound_t2: Option<f64>,
    #[serde(rename = "boundT3")]
    pub bound_t3: Option<f64>,
    #[serde(rename = "boundT4")]
    pub bound_t4: Option<f64>,
    #[serde(rename = "ratioT1")]
    pub ratio_t1: Option<f64>,
    #[serde(rename = "ratioT2")]
    pub ratio_t2: Option<f64>,
    #[serde(rename = "ratioT3")]
    pub ratio_t3: Option<f64>,
    #[serde(rename = "ratioT4")]
    pub ratio_t4: Option<f64>,
    pub elapsed_ms: Option<u64>,
}

impl From<&SieveRecord> for Row {
    fn from(r: &SieveRecord) -> Self {
        Self {
            family: r.family.clone(),
            q: r.q,
            n: r.n,
            coeff: r.coeff.clone(),
            mode: r.mode.clone(),
            epsilon: r.epsilon,
            lhs: r.lhs,
            z: r.z,
            bound_t1: r.bound_t1,
            bound_t2: r.bound_t2,
            bound_t3: r.bound_t3,
            bound_t4: r.bound_t4,
            ratio_t1: r.ratio_t1,
            ratio_t2: r.ratio_t2,
            ratio_t3: r.ratio_t3,
            ratio_t4: r.ratio_t4,
            elapsed_ms: r.elapsed_ms,
        }
    }
}

pub fn write_records<W: Write>(records: &[SieveRecord], format: Format, out: W) -> Result<(), HarnessError> {
    let rows: Vec<Row> = records.iter().map(Row::from).collect();
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            if rows.is_empty() {
                w.write_record(CSV_HEADER.split(','))?;
            }
            for row in &rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, &rows)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Parses a CSV report back into rows.
pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<Row>, HarnessError> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.iter().collect::<Vec<_>>().join(",");
    if headers != CSV_HEADER {
        return Err(HarnessError::Config(format!("unexpected CSV header {headers:?}")));
    }
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record() -> SieveRecord {
        SieveRecord {
            family: "natural".into(),
            q: 4.0,
            n: 16,
            coeff: "delta".into(),
            mode: "windowed".into(),
            epsilon: 0.1,
            lhs: 3.0,
            z: 1.0,
            bound_t1: Some(272.0),
            bound_t2: Some(144.0),
            bound_t3: None,
            bound_t4: None,
            ratio_t1: Some(3.0 / 272.0),
            ratio_t2: Some(3.0 / 144.0),
            ratio_t3: None,
            ratio_t4: None,
            elapsed_ms: None,
            note: None,
        }
    }

    #[test]
    fn csv_header_and_empty_fields() {
        let mut buf = Vec::new();
        write_records(&[record()], Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let row = lines.next().unwrap();
        assert!(row.starts_with("natural,4.0,16,delta,windowed,0.1,3.0,1.0,272.0,144.0,,,"), "{row}");
        assert!(row.ends_with(",,,"));
        let back = read_csv(text.as_bytes()).unwrap();
        assert_eq!(back, vec![Row::from(&record())]);
    }

    #[test]
    fn empty_report_still_has_header() {
        let mut buf = Vec::new();
        write_records(&[], Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().trim_end(), CSV_HEADER);
    }

    #[test]
    fn json_uses_nulls() {
        let mut buf = Vec::new();
        write_records(&[record()], Format::Json, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v[0]["boundT3"], serde_json::Value::Null);
        assert_eq!(v[0]["Q"], 4.0);
    }
}
