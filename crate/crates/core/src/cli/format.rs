//! Multisequence files.
//!
//! ```text
//! # construction=rational
//! # p=13
//! # k=1
//! # q=13
//! # d=3
//! # alpha=3
//! # N=3
//! # M=1
//! # tool=nlcseq 0.1.0
//! 1,10,8
//! 9,3,6
//! 11,4,2
//! ```
//!
//! `p` and `k` give the field the entries live in, entries are canonical
//! element indices. For the Hermitian constructions `q` is the curve
//! parameter and the field has `q^2` elements; their headers carry
//! `delta` or `theta` and `guaranteed` instead of `d` and `alpha`.
//! The rational header has an optional `rotate` list. Headerless files are
//! accepted when the field is given on the command line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use super::CliError;
use crate::gf::{make_field, FieldCtx, FieldElem};
use crate::multiseq::{Multisequence, Provenance};

pub const TOOL: &str = concat!("nlcseq ", env!("CARGO_PKG_VERSION"));

pub fn write_multisequence(s: &Multisequence) -> String {
    let ctx = s.field();
    let mut out = String::new();
    let mut kv = |k: &str, v: &dyn std::fmt::Display| writeln!(out, "# {k}={v}").expect("writing to a String");
    kv("construction", &s.provenance().tag());
    kv("p", &ctx.characteristic());
    kv("k", &ctx.degree());
    match s.provenance() {
        Provenance::Rational {
            q,
            d,
            n_dim,
            m_blocks,
            alpha,
            rotate,
        } => {
            kv("q", q);
            kv("d", d);
            kv("alpha", alpha);
            kv("N", n_dim);
            kv("M", m_blocks);
            if let Some(rot) = rotate {
                kv("rotate", &join(rot.iter()));
            }
        }
        Provenance::HermitianSigma {
            q,
            delta,
            n_dim,
            m_blocks,
            guaranteed,
        } => {
            kv("q", q);
            kv("delta", delta);
            kv("N", n_dim);
            kv("M", m_blocks);
            kv("guaranteed", guaranteed);
        }
        Provenance::HermitianPhi {
            q,
            theta,
            n_dim,
            m_blocks,
            guaranteed,
            ..
        } => {
            kv("q", q);
            kv("theta", theta);
            kv("N", n_dim);
            kv("M", m_blocks);
            kv("guaranteed", guaranteed);
        }
        Provenance::External { label } => {
            kv("q", &ctx.size());
            kv("label", &label.replace('\n', " "));
        }
    }
    kv("tool", &TOOL);
    for row in s.rows() {
        out.push_str(&join(row.iter().map(|x| x.index())));
        out.push('\n');
    }
    out
}

fn join<T: ToString>(items: impl Iterator<Item = T>) -> String {
    items.map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

struct Header(BTreeMap<String, String>);

impl Header {
    fn raw(&self, key: &str) -> Result<&str, CliError> {
        self.0
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| bad(format!("header is missing `{key}`")))
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<T, CliError> {
        let v = self.raw(key)?;
        v.parse().map_err(|_| bad(format!("header `{key}={v}` is not valid")))
    }

    fn elem(&self, ctx: &FieldCtx, key: &str) -> Result<FieldElem, CliError> {
        let i: u32 = self.get(key)?;
        ctx.try_elem(i)
            .ok_or_else(|| bad(format!("header `{key}={i}` is outside F_{}", ctx.size())))
    }
}

/// Parses a multisequence file; `fallback` supplies the field when the
/// header does not name one.
pub fn parse_multisequence(text: &str, fallback: Option<Arc<FieldCtx>>) -> Result<Multisequence, CliError> {
    let mut header = BTreeMap::new();
    let mut raw_rows: Vec<(usize, Vec<u32>)> = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix('#') {
            if !raw_rows.is_empty() {
                return Err(bad(format!("line {}: header after data", no + 1)));
            }
            if let Some((k, v)) = rest.split_once('=') {
                if header.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                    return Err(bad(format!("line {}: duplicate header key `{}`", no + 1, k.trim())));
                }
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad(format!("line {}: expected comma-separated element indices", no + 1)))?;
        raw_rows.push((no + 1, row));
    }
    let header = Header(header);

    let ctx = match (header.0.contains_key("p"), fallback) {
        (true, _) => {
            let (p, k): (u64, u32) = (header.get("p")?, header.get("k")?);
            Arc::new(make_field(p, k).map_err(|e| bad(e.to_string()))?)
        }
        (false, Some(ctx)) => ctx,
        (false, None) => return Err(bad("no field in the header; pass --q or --p/--k")),
    };

    let mut rows = Vec::with_capacity(raw_rows.len());
    for (line, raw) in raw_rows {
        let row = raw
            .into_iter()
            .map(|i| {
                ctx.try_elem(i)
                    .ok_or_else(|| bad(format!("line {line}: {i} is outside F_{}", ctx.size())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }

    let construction = header.0.get("construction").map(String::as_str).unwrap_or("external");
    let expect_size = |q: u64, expect: u64| {
        if ctx.size() as u64 != expect {
            return Err(bad(format!(
                "{construction} with q = {q} needs a field of size {expect}, header gives {}",
                ctx.size()
            )));
        }
        Ok(())
    };
    let provenance = match construction {
        "rational" => {
            let q = header.get("q")?;
            expect_size(q, q)?;
            Provenance::Rational {
                q,
                d: header.get("d")?,
                n_dim: header.get("N")?,
                m_blocks: header.get("M")?,
                alpha: header.elem(&ctx, "alpha")?,
                rotate: match header.0.get("rotate") {
                    None => None,
                    Some(v) => Some(
                        v.split(',')
                            .map(|t| t.trim().parse())
                            .collect::<Result<_, _>>()
                            .map_err(|_| bad(format!("header `rotate={v}` is not valid")))?,
                    ),
                },
            }
        }
        "hermitian-sigma" => {
            let q: u64 = header.get("q")?;
            expect_size(q, q * q)?;
            Provenance::HermitianSigma {
                q,
                delta: header.elem(&ctx, "delta")?,
                n_dim: header.get("N")?,
                m_blocks: header.get("M")?,
                guaranteed: header.get("guaranteed")?,
            }
        }
        "hermitian-phi" => {
            let q: u64 = header.get("q")?;
            expect_size(q, q * q)?;
            Provenance::HermitianPhi {
                q,
                p: ctx.characteristic() as u64,
                theta: header.elem(&ctx, "theta")?,
                n_dim: header.get("N")?,
                m_blocks: header.get("M")?,
                guaranteed: header.get("guaranteed")?,
            }
        }
        "external" => Provenance::External {
            label: header.0.get("label").cloned().unwrap_or_else(|| "file".into()),
        },
        other => return Err(bad(format!("unknown construction `{other}` in header"))),
    };
    if let Some((n_dim, _)) = provenance.dims() {
        if rows.len() != n_dim {
            return Err(bad(format!(
                "header says N = {n_dim} but the file has {} rows",
                rows.len()
            )));
        }
    }
    Multisequence::new(ctx, rows, provenance).map_err(|e| bad(e.to_string()))
}

pub fn read_multisequence(path: &Path, fallback: Option<Arc<FieldCtx>>) -> Result<Multisequence, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_multisequence(&text, fallback).map_err(|e| match e {
        CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}
