//! Output records and their JSON and CSV encodings.

use std::collections::BTreeMap;
use std::io::{self, Write};

use bernoulli_gumbel::{BigRational, Precision, VerificationReport};
use chrono::{DateTime, SecondsFormat, Utc};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use crate::DerivativeRecord;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TableRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    pub index: u64,
    pub numerator: String,
    pub denominator: String,
}

impl TableRow {
    pub fn new(n: Option<u64>, index: u64, value: &BigRational) -> Self {
        TableRow {
            n,
            index,
            numerator: value.numer().to_string(),
            denominator: value.denom().to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    command: &'static str,
    parameters: BTreeMap<String, Value>,
    timestamp: String,
    precision_mode: Precision,
    results: Value,
}

impl Manifest {
    pub fn new(
        command: &'static str,
        parameters: BTreeMap<String, Value>,
        precision: Precision,
        results: Value,
    ) -> Self {
        Manifest {
            command,
            parameters,
            timestamp: timestamp(),
            precision_mode: precision,
            results,
        }
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out)
    }
}

/// UTC now, or `SOURCE_DATE_EPOCH` when set so repeated runs are byte-identical.
fn timestamp() -> String {
    let pinned = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| DateTime::<Utc>::from_timestamp(secs, 0));
    pinned
        .unwrap_or_else(Utc::now)
        .to_rfc3339_opts(SecondsFormat::Secs, true)
}

pub fn write_table_csv<W: Write>(out: W, rows: &[TableRow]) -> io::Result<()> {
    let with_n = rows.first().is_some_and(|r| r.n.is_some());
    let mut w = csv::Writer::from_writer(out);
    if with_n {
        w.write_record(["n", "index", "numerator", "denominator"])?;
    } else {
        w.write_record(["index", "numerator", "denominator"])?;
    }
    for r in rows {
        let index = r.index.to_string();
        if let Some(n) = r.n {
            let n = n.to_string();
            w.write_record([n.as_str(), &index, &r.numerator, &r.denominator])?;
        } else {
            w.write_record([index.as_str(), &r.numerator, &r.denominator])?;
        }
    }
    w.flush()
}

pub fn write_reports_csv<W: Write>(out: W, reports: &[VerificationReport]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "identity",
        "parameter",
        "expected",
        "computed",
        "abs_error",
        "rel_error",
        "passed",
        "route",
    ])?;
    for r in reports {
        let route = serde_json::to_value(r.route).expect("route serializes");
        w.write_record([
            r.identity.name().to_string(),
            r.parameter.to_string(),
            r.expected.to_string(),
            r.computed.to_string(),
            r.abs_error.to_string(),
            r.rel_error.to_string(),
            r.passed.to_string(),
            route.as_str().unwrap_or_default().to_string(),
        ])?;
    }
    w.flush()
}

pub fn write_derivative_csv<W: Write>(out: W, record: &DerivativeRecord) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["part", "index", "value"])?;
    w.write_record(["value", "", &record.value.to_string()])?;
    for (k, a) in &record.log_poly {
        w.write_record(["log_poly", &k.to_string(), a])?;
    }
    for (j, term) in &record.exp_sum {
        w.write_record(["exp_sum", &j.to_string(), &term.to_string()])?;
    }
    w.flush()
}
