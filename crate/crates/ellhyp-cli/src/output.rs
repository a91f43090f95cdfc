//! JSON, CSV and text renderings of verification records.

use std::io::{self, Write};

use ellhyp::C64;
use serde::{Deserialize, Serialize};

use crate::run::Record;

pub const SCHEMA: &str = "ellhyp-report/1";

/// One report as stored on disk. Non-finite numbers become `null`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub identity_id: String,
    pub draw: u64,
    pub seed: u64,
    pub lhs: [Option<f64>; 2],
    pub rhs: [Option<f64>; 2],
    pub abs_err: Option<f64>,
    pub rel_err: Option<f64>,
    pub scale: Option<f64>,
    pub tol: f64,
    pub pass: bool,
    pub nodes: u64,
    pub evaluations: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub schema: String,
    pub reports: Vec<ReportRow>,
}

fn fin(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn pair(z: C64) -> [Option<f64>; 2] {
    [fin(z.re), fin(z.im)]
}

impl ReportRow {
    pub fn new(r: &Record, with_runtime: bool) -> Self {
        let p = &r.report;
        ReportRow {
            identity_id: p.identity_id.clone(),
            draw: p.draw,
            seed: p.seed,
            lhs: pair(p.lhs),
            rhs: pair(p.rhs),
            abs_err: fin(p.abs_err),
            rel_err: fin(p.rel_err),
            scale: fin(p.scale),
            tol: p.tol,
            pass: r.pass(),
            nodes: p.nodes,
            evaluations: p.evaluations,
            runtime_ms: with_runtime.then_some(p.runtime_ms),
            error: r.error.clone(),
        }
    }
}

/// The versioned document; `with_runtime = false` gives the form compared
/// across repeated runs.
pub fn to_json(records: &[Record], with_runtime: bool) -> String {
    let doc = ReportDoc { schema: SCHEMA.to_string(), reports: records.iter().map(|r| ReportRow::new(r, with_runtime)).collect() };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn parse_json(text: &str) -> Result<ReportDoc, String> {
    let doc: ReportDoc = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if doc.schema != SCHEMA {
        return Err(format!("unsupported schema '{}'", doc.schema));
    }
    Ok(doc)
}

#[derive(Serialize)]
struct CsvRow<'a> {
    identity_id: &'a str,
    draw: u64,
    seed: u64,
    lhs_re: Option<f64>,
    lhs_im: Option<f64>,
    rhs_re: Option<f64>,
    rhs_im: Option<f64>,
    abs_err: Option<f64>,
    rel_err: Option<f64>,
    scale: Option<f64>,
    tol: f64,
    pass: bool,
    nodes: u64,
    evaluations: u64,
    runtime_ms: u64,
    error: &'a str,
}

const CSV_HEADER: [&str; 16] = [
    "identity_id", "draw", "seed", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_err", "rel_err", "scale", "tol", "pass",
    "nodes", "evaluations", "runtime_ms", "error",
];

/// Header plus one row per record, even when there are none.
pub fn write_csv<W: Write>(out: W, records: &[Record]) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        let row = ReportRow::new(r, true);
        w.serialize(CsvRow {
            identity_id: &row.identity_id,
            draw: row.draw,
            seed: row.seed,
            lhs_re: row.lhs[0],
            lhs_im: row.lhs[1],
            rhs_re: row.rhs[0],
            rhs_im: row.rhs[1],
            abs_err: row.abs_err,
            rel_err: row.rel_err,
            scale: row.scale,
            tol: row.tol,
            pass: row.pass,
            nodes: row.nodes,
            evaluations: row.evaluations,
            runtime_ms: r.report.runtime_ms,
            error: r.error.as_deref().unwrap_or(""),
        })?;
    }
    w.flush()
}

fn sci(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.2e}")
    } else {
        "-".to_string()
    }
}

/// One line per record followed by a summary line.
pub fn write_text<W: Write>(mut out: W, records: &[Record]) -> io::Result<()> {
    for r in records {
        let p = &r.report;
        write!(
            out,
            "{:<4} {:<18} draw {:>3}  rel_err {:>9}  tol {:>8}  nodes {:>7}  {:>6} ms",
            if r.pass() { "ok" } else { "FAIL" },
            p.identity_id,
            p.draw,
            sci(p.rel_err),
            sci(p.tol),
            p.nodes,
            p.runtime_ms
        )?;
        if let Some(e) = &r.error {
            write!(out, "  ({e})")?;
        }
        writeln!(out)?;
    }
    let failed = records.iter().filter(|r| !r.pass()).count();
    writeln!(out, "{} reports, {} passed, {} failed", records.len(), records.len() - failed, failed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ellhyp::IdentityReport;

    fn rec(id: &str, lhs: f64) -> Record {
        let mut report = IdentityReport::compare(id, C64::new(lhs, 0.5), C64::new(1.0, 0.5), 1e-9);
        report.runtime_ms = 12;
        Record { report, error: None }
    }

    #[test]
    fn empty_documents_are_valid() {
        let doc = parse_json(&to_json(&[], true)).unwrap();
        assert!(doc.reports.is_empty());
        let mut buf = Vec::new();
        write_csv(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1);
    }

    #[test]
    fn json_round_trip_and_field_order() {
        let mut bad = Record { report: IdentityReport::failed("res", 1e-8), error: Some("boom".into()) };
        bad.report.draw = 3;
        let recs = [rec("ell-int", 1.0), bad];
        let text = to_json(&recs, true);
        let doc = parse_json(&text).unwrap();
        assert_eq!(doc.reports, recs.iter().map(|r| ReportRow::new(r, true)).collect::<Vec<_>>());
        assert_eq!(doc.reports[1].lhs, [None, None]);
        let keys = ["\"identity_id\"", "\"draw\"", "\"seed\"", "\"lhs\"", "\"rhs\"", "\"abs_err\"", "\"rel_err\"", "\"scale\"", "\"tol\"", "\"pass\"", "\"nodes\"", "\"evaluations\"", "\"runtime_ms\"", "\"error\""];
        let first = &text[text.find("\"identity_id\"").unwrap()..text.find('}').unwrap()];
        let pos: Vec<usize> = keys.iter().map(|k| first.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{first}");
        assert!(!to_json(&recs, false).contains("runtime_ms"));
    }

    #[test]
    fn csv_rows_match_reports() {
        let recs = [rec("a", 1.0), rec("b", 2.0), rec("c", 1.0)];
        let mut buf = Vec::new();
        write_csv(&mut buf, &recs).unwrap();
        let mut rd = csv::Reader::from_reader(buf.as_slice());
        assert_eq!(rd.headers().unwrap().len(), CSV_HEADER.len());
        assert_eq!(rd.records().count(), 3);
    }
}
