//! Append-only JSON-lines store for computed invariants.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::{Entry, InvariantError, InvariantKey};
use crate::laurent::LaurentPoly;
use crate::polygon::Shape;

/// Environment variable naming the default cache file.
pub const CACHE_ENV: &str = "TROPREF_CACHE";

/// Records written by a different engine version are ignored on load.
pub const ENGINE_VERSION: &str = concat!("tropref-", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub engine: String,
    pub shape: Shape,
    pub genus: u32,
    pub pairs: u32,
    pub invariant: LaurentPoly,
    pub extrapolated: bool,
}

impl CacheRecord {
    pub fn new(key: &InvariantKey, entry: &Entry) -> Self {
        Self {
            engine: ENGINE_VERSION.to_string(),
            shape: key.shape.clone(),
            genus: key.genus,
            pairs: key.pairs,
            invariant: entry.value.clone(),
            extrapolated: entry.extrapolated,
        }
    }

    pub fn key(&self) -> InvariantKey {
        InvariantKey { shape: self.shape.canonical(), genus: self.genus, pairs: self.pairs }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CacheReport {
    pub checked: usize,
    pub stale: usize,
    pub mismatches: Vec<String>,
}

impl CacheReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub struct CacheFile {
    path: PathBuf,
    writer: Mutex<File>,
}

impl CacheFile {
    /// Opens (creating if needed) and reads back the current-version records.
    pub fn open(path: &Path) -> Result<(Self, Vec<CacheRecord>), InvariantError> {
        let (records, _) = read_records(path)?;
        let writer = OpenOptions::new().create(true).append(true).open(path)?;
        Ok((Self { path: path.to_path_buf(), writer: Mutex::new(writer) }, records))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&self, record: &CacheRecord) -> Result<(), InvariantError> {
        let line = serde_json::to_string(record).expect("records serialize");
        let mut w = self.writer.lock().unwrap();
        writeln!(w, "{line}")?;
        w.flush()?;
        Ok(())
    }
}

/// Current-version records and the number of skipped stale ones. A missing
/// file reads as empty.
pub fn read_records(path: &Path) -> Result<(Vec<CacheRecord>, usize), InvariantError> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((Vec::new(), 0)),
        Err(e) => return Err(e.into()),
    };
    let mut records = Vec::new();
    let mut stale = 0;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: CacheRecord = serde_json::from_str(&line)
            .map_err(|e| InvariantError::CacheFormat { line: i + 1, message: e.to_string() })?;
        if rec.engine == ENGINE_VERSION {
            records.push(rec);
        } else {
            stale += 1;
        }
    }
    Ok((records, stale))
}

/// Recomputes every current-version record in the file.
pub fn verify_file(path: &Path) -> Result<CacheReport, InvariantError> {
    let (records, stale) = read_records(path)?;
    let fresh = super::InvariantTable::new();
    let mut report = CacheReport { stale, ..CacheReport::default() };
    for r in records {
        report.checked += 1;
        let key = r.key();
        let value = if key.pairs == 0 {
            fresh.refined_invariant(&key.shape, key.genus)?
        } else {
            fresh.refined_descendant(&key.shape, key.pairs)?.value
        };
        if value != r.invariant {
            report.mismatches.push(format!("{key}: cached {}, computed {value}", r.invariant));
        }
    }
    Ok(report)
}
