//! Per-trial report records, serialized as JSON lines or as CSV with a fixed header.

use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distinguisher::{Diagonal, Verdict};
use crate::error::{Error, Result};
use crate::families::Family;
use crate::poly::GoppaFlavor;

pub const CSV_SCHEMA: u32 = 1;

pub const CSV_HEADER: [&str; 19] = [
    "schema",
    "family",
    "q",
    "m",
    "n",
    "r",
    "flavor",
    "seed",
    "predicted_dim",
    "bound_raw",
    "measured_dim",
    "random_expected_dim",
    "deficiency_d",
    "e_used",
    "saturated",
    "verdict",
    "dual_dim",
    "generic",
    "lp_convention",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinguisherReport {
    pub family: Family,
    pub q: u32,
    pub m: u32,
    pub n: usize,
    pub r: usize,
    /// Goppa polynomial flavor; absent for other families.
    pub flavor: Option<GoppaFlavor>,
    pub seed: u64,
    /// `min(n, bound_raw)`.
    pub predicted_dim: usize,
    pub bound_raw: i64,
    pub measured_dim: Option<usize>,
    pub random_expected_dim: usize,
    /// Kernel dimension of `L_p` under `lp_convention`.
    pub deficiency_d: Option<usize>,
    pub e_used: u32,
    /// The prediction reached the ambient space (`bound_raw >= n`).
    pub saturated: bool,
    pub verdict: Verdict,
    /// Measured dimension of the dual of the public code.
    pub dual_dim: Option<usize>,
    /// `dual_dim` equals the generic value (`rm`, or `r` for GRS).
    pub generic: Option<bool>,
    pub lp_convention: Option<Diagonal>,
}

impl DistinguisherReport {
    /// Measured dimension exceeds the proven upper bound.
    pub fn violates_bound(&self) -> bool {
        self.measured_dim.is_some_and(|d| d as i64 > self.bound_raw)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn from_json_line(line: &str) -> Result<DistinguisherReport> {
        Ok(serde_json::from_str(line)?)
    }

    fn csv_fields(&self) -> Vec<String> {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map(T::to_string).unwrap_or_default()
        }
        let flavor = self.flavor.map(|f| match f {
            GoppaFlavor::Irreducible => "irreducible",
            GoppaFlavor::Squarefree => "squarefree",
            GoppaFlavor::Unrestricted => "any",
        });
        vec![
            CSV_SCHEMA.to_string(),
            self.family.to_string(),
            self.q.to_string(),
            self.m.to_string(),
            self.n.to_string(),
            self.r.to_string(),
            opt(&flavor),
            self.seed.to_string(),
            self.predicted_dim.to_string(),
            self.bound_raw.to_string(),
            opt(&self.measured_dim),
            self.random_expected_dim.to_string(),
            opt(&self.deficiency_d),
            self.e_used.to_string(),
            self.saturated.to_string(),
            self.verdict.to_string(),
            opt(&self.dual_dim),
            opt(&self.generic),
            opt(&self.lp_convention),
        ]
    }

    fn from_csv_fields(rec: &csv::StringRecord) -> Result<DistinguisherReport> {
        if rec.len() != CSV_HEADER.len() {
            return Err(Error::Parse(format!("expected {} CSV fields, got {}", CSV_HEADER.len(), rec.len())));
        }
        fn req<T: FromStr>(rec: &csv::StringRecord, i: usize) -> Result<T> {
            rec[i].parse().map_err(|_| Error::Parse(format!("bad {} value {:?}", CSV_HEADER[i], &rec[i])))
        }
        fn opt<T: FromStr>(rec: &csv::StringRecord, i: usize) -> Result<Option<T>> {
            if rec[i].is_empty() {
                Ok(None)
            } else {
                req(rec, i).map(Some)
            }
        }
        let schema: u32 = req(rec, 0)?;
        if schema != CSV_SCHEMA {
            return Err(Error::Parse(format!("unsupported schema {schema}")));
        }
        Ok(DistinguisherReport {
            family: req(rec, 1)?,
            q: req(rec, 2)?,
            m: req(rec, 3)?,
            n: req(rec, 4)?,
            r: req(rec, 5)?,
            flavor: opt(rec, 6)?,
            seed: req(rec, 7)?,
            predicted_dim: req(rec, 8)?,
            bound_raw: req(rec, 9)?,
            measured_dim: opt(rec, 10)?,
            random_expected_dim: req(rec, 11)?,
            deficiency_d: opt(rec, 12)?,
            e_used: req(rec, 13)?,
            saturated: req(rec, 14)?,
            verdict: req(rec, 15)?,
            dual_dim: opt(rec, 16)?,
            generic: opt(rec, 17)?,
            lp_convention: opt(rec, 18)?,
        })
    }

    /// One CSV line (no header), newline-terminated.
    pub fn to_csv_line(&self) -> String {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        w.write_record(self.csv_fields()).expect("in-memory write");
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

pub fn csv_header_line() -> String {
    format!("{}\n", CSV_HEADER.join(","))
}

/// Streams reports, writing the CSV header before the first row and flushing after
/// every row so an interrupted run leaves whole lines.
pub struct ReportWriter<W: Write> {
    out: W,
    format: Format,
    header_done: bool,
}

impl<W: Write> ReportWriter<W> {
    pub fn new(out: W, format: Format) -> ReportWriter<W> {
        ReportWriter { out, format, header_done: false }
    }

    pub fn write(&mut self, rep: &DistinguisherReport) -> Result<()> {
        let line = match self.format {
            Format::Json => format!("{}\n", rep.to_json_line()),
            Format::Csv => {
                if !self.header_done {
                    self.out.write_all(csv_header_line().as_bytes())?;
                    self.header_done = true;
                }
                rep.to_csv_line()
            }
        };
        self.out.write_all(line.as_bytes())?;
        self.out.flush()?;
        Ok(())
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

/// Reads reports in either format; CSV input must start with the header.
pub fn read_reports<R: BufRead>(input: R, format: Format) -> Result<Vec<DistinguisherReport>> {
    match format {
        Format::Json => input
            .lines()
            .filter(|l| l.as_ref().map_or(true, |s| !s.trim().is_empty()))
            .map(|l| DistinguisherReport::from_json_line(&l?))
            .collect(),
        Format::Csv => {
            let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
            let header = rdr.headers()?.clone();
            if header.iter().ne(CSV_HEADER.iter().copied()) {
                return Err(Error::Parse("unexpected CSV header".into()));
            }
            rdr.records().map(|rec| DistinguisherReport::from_csv_fields(&rec?)).collect()
        }
    }
}
