//! On-disk monic-irreducible tables: a header line `ffrank-primes v1 q=<q>`, then one
//! polynomial per line in canonical comma form, ordered by (degree, monic index).

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::fq_poly::{IrreducibleTable, PolyFq};

pub fn header(q: u32) -> String {
    format!("ffrank-primes v1 q={q}")
}

pub fn file_name(q: u32) -> String {
    format!("primes-q{q}.txt")
}

pub fn render(table: &IrreducibleTable) -> String {
    let mut out = header(table.q);
    out.push('\n');
    for n in 1..=table.max_degree() {
        for p in table.primes(n) {
            out.push_str(&p.to_string());
            out.push('\n');
        }
    }
    out
}

/// Parse a cache file; the table's max degree is the largest degree present, and every
/// degree up to it must be complete (checked against the necklace count).
pub fn parse(q: u32, text: &str) -> Result<IrreducibleTable> {
    let mut lines = text.lines();
    let bad = |reason: String| Error::Parse { text: "prime cache".into(), reason };
    if lines.next() != Some(header(q).as_str()) {
        return Err(bad("missing or mismatched header".into()));
    }
    let mut by_degree: Vec<Vec<u64>> = vec![Vec::new()];
    for line in lines {
        let p = PolyFq::parse(q, line)?;
        let n = p.degree().filter(|&n| n > 0 && p.is_monic()).ok_or_else(|| bad(format!("not monic: {line}")))?;
        if n >= by_degree.len() {
            by_degree.resize(n + 1, Vec::new());
        }
        let idx = p.monic_index();
        if by_degree[n].last().is_some_and(|&last| last >= idx) {
            return Err(bad(format!("out of order at {line}")));
        }
        by_degree[n].push(idx);
    }
    for (n, ps) in by_degree.iter().enumerate().skip(1) {
        if ps.len() as u64 != crate::fq_poly::irreducible_count(q, n) {
            return Err(bad(format!("degree {n} incomplete")));
        }
    }
    Ok(IrreducibleTable { q, by_degree })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacheOutcome {
    /// The file already held tables at least this deep.
    Unchanged,
    Written,
    /// An unreadable file was replaced.
    Rebuilt(String),
}

/// Ensure `dir` holds tables through `max_deg`; idempotent.
pub fn ensure(dir: &Path, q: u32, max_deg: usize) -> Result<(PathBuf, IrreducibleTable, CacheOutcome)> {
    let path = dir.join(file_name(q));
    let mut outcome = CacheOutcome::Written;
    if let Ok(text) = fs::read_to_string(&path) {
        match parse(q, &text) {
            Ok(t) if t.max_degree() >= max_deg => return Ok((path, t, CacheOutcome::Unchanged)),
            Ok(_) => {}
            Err(e) => outcome = CacheOutcome::Rebuilt(e.to_string()),
        }
    }
    let table = IrreducibleTable::build(q, max_deg)?;
    fs::create_dir_all(dir)?;
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, render(&table))?;
    fs::rename(&tmp, &path)?;
    Ok((path, table, outcome))
}

/// Read tables through `max_deg` from the cache if present and deep enough.
pub fn load(dir: &Path, q: u32, max_deg: usize) -> Option<IrreducibleTable> {
    let text = fs::read_to_string(dir.join(file_name(q))).ok()?;
    let t = parse(q, &text).ok()?;
    (t.max_degree() >= max_deg).then(|| IrreducibleTable { q, by_degree: t.by_degree[..=max_deg].to_vec() })
}
