//! OEIS b-file ingestion and the on-disk cache of solved instances.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{lower_target, mcneil, upper_bound};
use crate::grid::{GridDims, GridError};
use crate::solver::Method;

pub const CACHE_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum BFileError {
    #[error("line {line}: expected \"index value\", got {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: index {index} already appeared on line {first}")]
    DuplicateIndex {
        line: usize,
        index: u64,
        first: usize,
    },
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("cache file is not valid: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported cache version {found}, expected {CACHE_VERSION}")]
    Version { found: u32 },
    #[error("cache record {m}x{n}: {reason}")]
    Invalid { m: usize, n: usize, reason: String },
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Sequence values keyed by index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SequenceTable {
    pub entries: BTreeMap<u64, u64>,
}

impl SequenceTable {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// b-file text, one `index value` line per entry in index order.
    pub fn to_bfile(&self) -> String {
        self.entries
            .iter()
            .map(|(n, v)| format!("{n} {v}\n"))
            .collect()
    }
}

impl FromIterator<(u64, u64)> for SequenceTable {
    fn from_iter<I: IntoIterator<Item = (u64, u64)>>(iter: I) -> Self {
        Self {
            entries: iter.into_iter().collect(),
        }
    }
}

pub fn parse_bfile(text: &str) -> Result<SequenceTable, BFileError> {
    let mut entries = BTreeMap::new();
    let mut first_seen = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let malformed = || BFileError::Malformed {
            line,
            text: raw.to_string(),
        };
        let mut toks = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (toks.next(), toks.next(), toks.next()) else {
            return Err(malformed());
        };
        let index: u64 = a.parse().map_err(|_| malformed())?;
        let value: u64 = b.parse().map_err(|_| malformed())?;
        if let Some(&first) = first_seen.get(&index) {
            return Err(BFileError::DuplicateIndex { line, index, first });
        }
        first_seen.insert(index, line);
        entries.insert(index, value);
    }
    Ok(SequenceTable { entries })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonRow {
    pub n: u64,
    pub table_value: u64,
    pub conjectured: u64,
}

impl ComparisonRow {
    pub fn matches(&self) -> bool {
        self.table_value == self.conjectured
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
    /// Indices below 2, where the conjecture says nothing.
    pub skipped: Vec<u64>,
}

impl ComparisonReport {
    pub fn matches(&self) -> usize {
        self.rows.iter().filter(|r| r.matches()).count()
    }

    pub fn mismatches(&self) -> usize {
        self.rows.len() - self.matches()
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let verdict = if r.matches() { "match" } else { "MISMATCH" };
            writeln!(
                f,
                "n={} table={} conjecture={} {verdict}",
                r.n, r.table_value, r.conjectured
            )?;
        }
        for n in &self.skipped {
            writeln!(f, "n={n} skipped (conjecture starts at n=2)")?;
        }
        writeln!(f, "{}/{} match", self.matches(), self.rows.len())
    }
}

pub fn compare_with_conjecture(table: &SequenceTable) -> ComparisonReport {
    let mut report = ComparisonReport::default();
    for (&n, &value) in &table.entries {
        match mcneil(n) {
            Some(conjectured) => report.rows.push(ComparisonRow {
                n,
                table_value: value,
                conjectured,
            }),
            None => report.skipped.push(n),
        }
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub m: usize,
    pub n: usize,
    pub optimum: u64,
    pub method: Method,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    records: Vec<CacheRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    Loaded,
    NotFound,
}

/// Solved optima, one per grid shape up to transposition.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResultsCache {
    records: BTreeMap<GridDims, CacheRecord>,
}

impl ResultsCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, dims: GridDims) -> Option<&CacheRecord> {
        self.records.get(&dims.canonical())
    }

    pub fn records(&self) -> impl Iterator<Item = &CacheRecord> {
        self.records.values()
    }

    /// Inserts or replaces the record for `dims`, stored under the
    /// orientation with the shorter side first.
    pub fn insert(
        &mut self,
        dims: GridDims,
        optimum: u64,
        method: Method,
        timestamp: u64,
    ) -> Result<(), CacheError> {
        let key = dims.canonical();
        let record = CacheRecord {
            m: key.rows(),
            n: key.cols(),
            optimum,
            method,
            timestamp,
        };
        check_record(&record)?;
        self.records.insert(key, record);
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let file = CacheFile {
            version: CACHE_VERSION,
            records: self.records.values().copied().collect(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("cache serializes");
        s.push('\n');
        s
    }

    pub fn from_text(text: &str) -> Result<Self, CacheError> {
        let file: CacheFile = serde_json::from_str(text)?;
        if file.version != CACHE_VERSION {
            return Err(CacheError::Version {
                found: file.version,
            });
        }
        let mut cache = Self::new();
        for rec in file.records {
            check_record(&rec)?;
            let key = GridDims::new(rec.m, rec.n)?;
            if key != key.canonical() {
                return Err(CacheError::Invalid {
                    m: rec.m,
                    n: rec.n,
                    reason: "stored with the longer side first".into(),
                });
            }
            if cache.records.insert(key, rec).is_some() {
                return Err(CacheError::Invalid {
                    m: rec.m,
                    n: rec.n,
                    reason: "duplicate record".into(),
                });
            }
        }
        Ok(cache)
    }
}

fn check_record(rec: &CacheRecord) -> Result<(), CacheError> {
    let dims = GridDims::new(rec.m, rec.n)?;
    let (lo, hi) = (lower_target(dims), upper_bound(dims));
    if !(lo..=hi).contains(&rec.optimum) {
        return Err(CacheError::Invalid {
            m: rec.m,
            n: rec.n,
            reason: format!("optimum {} outside [{lo}, {hi}]", rec.optimum),
        });
    }
    Ok(())
}

/// Reads a cache file. A missing file gives an empty cache and
/// [`CacheStatus::NotFound`]; anything unreadable or invalid is an error.
pub fn load_cache(path: &Path) -> Result<(ResultsCache, CacheStatus), CacheError> {
    match fs::read_to_string(path) {
        Ok(text) => Ok((ResultsCache::from_text(&text)?, CacheStatus::Loaded)),
        Err(e) if e.kind() == io::ErrorKind::NotFound => {
            Ok((ResultsCache::new(), CacheStatus::NotFound))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn save_cache(path: &Path, cache: &ResultsCache) -> Result<(), CacheError> {
    fs::write(path, cache.to_text())?;
    Ok(())
}
