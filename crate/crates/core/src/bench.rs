//! Benchmark rows, CSV output and the batch runner.
//!
//! CSV columns are fixed by [`CSV_HEADER`]. Weights and ratios are written
//! with 12 decimals, times with 3. Rows are ordered by `(p, seed)`; each
//! group of rows for one `p` is followed by an `avg` row holding arithmetic
//! means over the rows that succeeded.

use std::fs::OpenOptions;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::Path;

use rayon::prelude::*;

use crate::approx::{solve, RunReport};
use crate::error::{Error, Result};
use crate::instance::{generate_euclidean, Instance};

pub const CSV_HEADER: &str =
    "instance,n,p,seed,lb,ub,ratio,q,branch,guaranteed_ratio,time_ms_total,time_ms_two_factor,status";

/// Outcome of a single solve, or the reason it failed.
#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Ok,
    Infeasible,
    Inapplicable,
    Failed(String),
}

impl RowStatus {
    pub fn as_str(&self) -> &str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Infeasible => "infeasible",
            RowStatus::Inapplicable => "inapplicable",
            RowStatus::Failed(_) => "error",
        }
    }

    fn from_error(e: &Error) -> Self {
        match e {
            Error::Infeasible { .. } => RowStatus::Infeasible,
            Error::AlgorithmInapplicable { .. } => RowStatus::Inapplicable,
            other => RowStatus::Failed(other.to_string()),
        }
    }
}

/// One line of a benchmark table.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub instance_name: String,
    pub n: usize,
    pub p: usize,
    pub seed: Option<u64>,
    pub report: Option<RunReport>,
    pub status: RowStatus,
}

impl BenchRow {
    pub fn from_result(inst: &Instance, p: usize, result: &Result<RunReport>) -> Self {
        let (report, status) = match result {
            Ok(r) => (Some(r.clone()), RowStatus::Ok),
            Err(e) => (None, RowStatus::from_error(e)),
        };
        BenchRow {
            instance_name: inst.name().to_string(),
            n: inst.n(),
            p,
            seed: inst.seed(),
            report,
            status,
        }
    }

    /// Formats the row; `with_times = false` writes zero times so output is
    /// reproducible byte for byte.
    pub fn to_csv_record(&self, with_times: bool) -> Vec<String> {
        let seed = self.seed.map(|s| s.to_string()).unwrap_or_default();
        let mut out = vec![
            self.instance_name.clone(),
            self.n.to_string(),
            self.p.to_string(),
            seed,
        ];
        match &self.report {
            Some(r) => {
                let (total, two_factor) = if with_times {
                    (r.time_ms_total, r.time_ms_two_factor)
                } else {
                    (0.0, 0.0)
                };
                out.extend([
                    weight(r.lb),
                    weight(r.ub),
                    weight(r.ratio),
                    r.q.to_string(),
                    r.branch.to_string(),
                    r.guaranteed_ratio.to_string(),
                    millis(total),
                    millis(two_factor),
                ]);
            }
            None => out.extend(std::iter::repeat_n(String::new(), 8)),
        }
        out.push(self.status.as_str().to_string());
        out
    }
}

fn weight(x: f64) -> String {
    format!("{x:.12}")
}

fn millis(x: f64) -> String {
    format!("{x:.3}")
}

/// Means over the successful rows of one `p` group.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub n: usize,
    pub p: usize,
    pub count: usize,
    pub lb: f64,
    pub ub: f64,
    pub ratio: f64,
    pub q: f64,
    pub time_ms_total: f64,
    pub time_ms_two_factor: f64,
}

impl SummaryRow {
    pub fn from_rows(n: usize, p: usize, rows: &[&BenchRow]) -> Self {
        let reports: Vec<&RunReport> = rows.iter().filter_map(|r| r.report.as_ref()).collect();
        let count = reports.len();
        let mean = |f: &dyn Fn(&RunReport) -> f64| -> f64 {
            if count == 0 {
                f64::NAN
            } else {
                reports.iter().map(|r| f(r)).sum::<f64>() / count as f64
            }
        };
        SummaryRow {
            n,
            p,
            count,
            lb: mean(&|r| r.lb),
            ub: mean(&|r| r.ub),
            ratio: mean(&|r| r.ratio),
            q: mean(&|r| r.q as f64),
            time_ms_total: mean(&|r| r.time_ms_total),
            time_ms_two_factor: mean(&|r| r.time_ms_two_factor),
        }
    }

    pub fn to_csv_record(&self, with_times: bool) -> Vec<String> {
        let mut out = vec![
            "avg".to_string(),
            self.n.to_string(),
            self.p.to_string(),
            String::new(),
        ];
        if self.count == 0 {
            out.extend(std::iter::repeat_n(String::new(), 8));
        } else {
            let (total, two_factor) = if with_times {
                (self.time_ms_total, self.time_ms_two_factor)
            } else {
                (0.0, 0.0)
            };
            out.extend([
                weight(self.lb),
                weight(self.ub),
                weight(self.ratio),
                format!("{:.2}", self.q),
                String::new(),
                String::new(),
                millis(total),
                millis(two_factor),
            ]);
        }
        out.push("avg".to_string());
        out
    }
}

/// Settings of a batch run.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub n: usize,
    pub side: f64,
    pub p_values: Vec<usize>,
    pub seeds: RangeInclusive<u64>,
}

/// Output of a batch run: data rows sorted by `(p, seed)` and one summary
/// per `p`.
#[derive(Debug, Clone)]
pub struct BenchResult {
    pub rows: Vec<BenchRow>,
    pub summaries: Vec<SummaryRow>,
}

impl BenchResult {
    /// All CSV lines, header first, each `p` group followed by its summary.
    pub fn to_csv(&self, with_times: bool) -> String {
        let mut writer = csv_writer(Vec::new());
        writer
            .write_record(CSV_HEADER.split(','))
            .expect("writing to memory");
        for summary in &self.summaries {
            for row in self.rows.iter().filter(|r| r.p == summary.p) {
                writer
                    .write_record(row.to_csv_record(with_times))
                    .expect("writing to memory");
            }
            writer
                .write_record(summary.to_csv_record(with_times))
                .expect("writing to memory");
        }
        String::from_utf8(writer.into_inner().expect("flushing memory")).expect("utf-8 csv")
    }
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(false).from_writer(w)
}

/// Generates one instance per seed and solves it for every `p`. Solves run
/// in parallel; failures are recorded in the row status.
pub fn run_bench(config: &BenchConfig) -> Result<BenchResult> {
    let instances: Vec<Instance> = config
        .seeds
        .clone()
        .map(|seed| generate_euclidean(config.n, seed, config.side))
        .collect::<Result<_>>()?;
    let mut p_values = config.p_values.clone();
    p_values.sort_unstable();
    p_values.dedup();

    let jobs: Vec<(&Instance, usize)> = p_values
        .iter()
        .flat_map(|&p| instances.iter().map(move |inst| (inst, p)))
        .collect();
    let mut rows: Vec<BenchRow> = jobs
        .par_iter()
        .map(|&(inst, p)| {
            let result = solve(inst, p).map(|(_, report)| report);
            if let Err(e) = &result {
                log::warn!("{} p={p}: {e}", inst.name());
            }
            BenchRow::from_result(inst, p, &result)
        })
        .collect();
    rows.sort_by_key(|r| (r.p, r.seed));

    let summaries = p_values
        .iter()
        .map(|&p| {
            let group: Vec<&BenchRow> = rows.iter().filter(|r| r.p == p).collect();
            SummaryRow::from_rows(config.n, p, &group)
        })
        .collect();
    Ok(BenchResult { rows, summaries })
}

/// Appends a single row to `path`, writing the header first when the file
/// is new or empty.
pub fn append_row(path: &Path, row: &BenchRow, with_times: bool) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(io_err)?;
    let empty = file.metadata().map_err(io_err)?.len() == 0;
    let mut writer = csv_writer(Vec::new());
    if empty {
        writer
            .write_record(CSV_HEADER.split(','))
            .expect("writing to memory");
    }
    writer
        .write_record(row.to_csv_record(with_times))
        .expect("writing to memory");
    let bytes = writer.into_inner().expect("flushing memory");
    file.write_all(&bytes).map_err(io_err)
}

/// Parses `a..b` (inclusive) or a single seed.
pub fn parse_seed_range(text: &str) -> std::result::Result<RangeInclusive<u64>, String> {
    let text = text.trim();
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (lo, hi.strip_prefix('=').unwrap_or(hi)),
        None => (text, text),
    };
    let parse = |s: &str| {
        s.trim()
            .parse::<u64>()
            .map_err(|_| format!("invalid seed {s:?} in {text:?}"))
    };
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if lo > hi {
        return Err(format!("empty seed range {text:?}"));
    }
    Ok(lo..=hi)
}

/// Parses one positive `p`.
pub fn parse_p(text: &str) -> std::result::Result<usize, String> {
    let s = text.trim();
    match s.parse::<usize>() {
        Ok(0) => Err("p must be ≥ 1".to_string()),
        Ok(p) => Ok(p),
        Err(_) => Err(format!("invalid p {s:?}")),
    }
}

/// Parses a comma-separated list of positive `p` values.
pub fn parse_p_list(text: &str) -> std::result::Result<Vec<usize>, String> {
    text.split(',').map(parse_p).collect()
}

/// Header line plus a single row, as printed by `solve`.
pub fn format_single(row: &BenchRow) -> String {
    let mut writer = csv_writer(Vec::new());
    writer
        .write_record(CSV_HEADER.split(','))
        .expect("writing to memory");
    writer
        .write_record(row.to_csv_record(true))
        .expect("writing to memory");
    String::from_utf8(writer.into_inner().expect("flushing memory")).expect("utf-8 csv")
}
