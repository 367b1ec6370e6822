use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::config::Format;
use super::CliError;
use crate::bounds::{BoundValue, SweepRow};
use crate::complexity::Status;
use crate::multiseq::Multisequence;

/// One `(n, r)` cell in the fixed report schema.
///
/// Bound columns are empty when no theorem covers the cell, e.g. for
/// external input or `n = 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub construction: &'static str,
    pub q: u64,
    pub d_or_p: Option<u64>,
    #[serde(rename = "N")]
    pub n_dim: usize,
    #[serde(rename = "M")]
    pub m_blocks: Option<usize>,
    pub n: usize,
    pub r: u32,
    pub value: usize,
    pub status: Status,
    pub bound_num: Option<i64>,
    pub bound_den: Option<i64>,
    pub satisfied: Option<bool>,
    pub millis: u64,
}

impl ReportRow {
    pub fn new(s: &Multisequence, n: usize, r: u32, value: usize, status: Status) -> Self {
        let prov = s.provenance();
        Self {
            construction: prov.tag(),
            q: prov.q().unwrap_or(s.field().size() as u64),
            d_or_p: prov.d_or_p(),
            n_dim: s.dimension(),
            m_blocks: prov.dims().map(|(_, m)| m),
            n,
            r,
            value,
            status,
            bound_num: None,
            bound_den: None,
            satisfied: None,
            millis: 0,
        }
    }

    pub fn with_bound(mut self, bound: BoundValue) -> Self {
        let v = bound.value();
        self.bound_num = Some(*v.numer());
        self.bound_den = Some(*v.denom());
        self.satisfied = Some(self.value as i64 >= bound.ceil());
        self
    }
}

impl From<&SweepRow> for ReportRow {
    fn from(row: &SweepRow) -> Self {
        let v = row.bound.value();
        Self {
            construction: row.construction,
            q: row.q,
            d_or_p: Some(row.d_or_p),
            n_dim: row.n_dim,
            m_blocks: Some(row.m_blocks),
            n: row.n,
            r: row.r,
            value: row.value,
            status: row.status,
            bound_num: Some(*v.numer()),
            bound_den: Some(*v.denom()),
            satisfied: Some(row.satisfied),
            millis: row.millis,
        }
    }
}

/// Serializes rows as CSV (with header) or a JSON array.
pub fn render<T: Serialize>(rows: &[T], format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.serialize(row).map_err(|e| CliError::Config(format!("csv: {e}")))?;
            }
            w.into_inner().map_err(|e| CliError::Config(format!("csv: {e}")))
        }
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(rows).map_err(|e| CliError::Config(format!("json: {e}")))?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

/// Writes the whole output in one go to `path`, or to stdout.
pub fn emit(bytes: &[u8], path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}
