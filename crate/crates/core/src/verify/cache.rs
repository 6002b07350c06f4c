//! Persisted principal specializations and `c_w` values.
//!
//! The file holds one JSON object per line,
//! `{"kind":"ps"|"cw","w":"...","value":"..."}`. Later lines win on load;
//! saving appends only the entries the file does not already hold.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::incexc::{cw_snapshot, preload_cw};
use crate::perm::Permutation;
use crate::schubert::{preload_principal_specializations, principal_specialization_snapshot};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Ps,
    Cw,
}

#[derive(Serialize, Deserialize)]
struct Record {
    kind: Kind,
    w: String,
    value: String,
}

pub struct ResultCache {
    path: PathBuf,
    known: BTreeMap<(Kind, Permutation), BigInt>,
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    }
}

impl ResultCache {
    /// Reads `path` (a missing file is an empty cache) and seeds the memos.
    pub fn open(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let mut known = BTreeMap::new();
        if path.exists() {
            let file = File::open(&path).map_err(|e| io_error(&path, e))?;
            for (n, line) in BufReader::new(file).lines().enumerate() {
                let line = line.map_err(|e| io_error(&path, e))?;
                if line.trim().is_empty() {
                    continue;
                }
                let bad = |reason: String| io_error(&path, format!("line {}: {reason}", n + 1));
                let rec: Record = serde_json::from_str(&line).map_err(|e| bad(e.to_string()))?;
                let w: Permutation = rec.w.parse().map_err(|e: Error| bad(e.to_string()))?;
                let value: BigInt = rec
                    .value
                    .parse()
                    .map_err(|_| bad(format!("bad value {:?}", rec.value)))?;
                known.insert((rec.kind, w), value);
            }
        }
        let cache = ResultCache { path, known };
        preload_principal_specializations(cache.entries(Kind::Ps));
        preload_cw(cache.entries(Kind::Cw));
        Ok(cache)
    }

    fn entries(&self, kind: Kind) -> Vec<(Permutation, BigInt)> {
        self.known
            .iter()
            .filter(|((k, _), _)| *k == kind)
            .map(|((_, w), v)| (w.clone(), v.clone()))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.known.len()
    }

    pub fn is_empty(&self) -> bool {
        self.known.is_empty()
    }

    /// Appends memo entries not yet in the file; returns how many.
    pub fn persist(&mut self) -> Result<usize> {
        let mut fresh = Vec::new();
        let snapshots = [
            (Kind::Ps, principal_specialization_snapshot()),
            (Kind::Cw, cw_snapshot()),
        ];
        for (kind, items) in snapshots {
            for (w, v) in items {
                let key = (kind, w);
                if self.known.get(&key) != Some(&v) {
                    fresh.push((key, v));
                }
            }
        }
        if fresh.is_empty() {
            return Ok(0);
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| io_error(&self.path, e))?;
        let mut buf = String::new();
        for ((kind, w), v) in &fresh {
            let rec = Record {
                kind: *kind,
                w: w.to_string(),
                value: v.to_string(),
            };
            buf.push_str(&serde_json::to_string(&rec).expect("record serializes"));
            buf.push('\n');
        }
        file.write_all(buf.as_bytes())
            .map_err(|e| io_error(&self.path, e))?;
        let count = fresh.len();
        self.known.extend(fresh);
        Ok(count)
    }
}
