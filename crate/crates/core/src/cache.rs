//! Persistent store of computed coefficients.
//!
//! One record per line: `family k e_1 ... e_k coefficient`. The file is read
//! once on open and appended to on every insert; when a key appears more
//! than once the last line wins.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use num_bigint::BigInt;
use thiserror::Error;

use crate::poly::{ExponentVector, Family};

pub const CACHE_FILE: &str = "coefficients.txt";

/// Environment variable overriding the default cache directory.
pub const CACHE_DIR_ENV: &str = "DISTINCT_SUMS_CACHE";

pub const DEFAULT_CACHE_DIR: &str = ".distinct-sums-cache";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache I/O: {0}")]
    Io(#[from] io::Error),
    #[error("{path}:{line}: malformed cache record `{text}`")]
    Malformed {
        path: PathBuf,
        line: usize,
        text: String,
    },
}

type Key = (Family, ExponentVector);

#[derive(Debug, Default)]
pub struct CoefficientCache {
    path: Option<PathBuf>,
    entries: Mutex<HashMap<Key, BigInt>>,
}

impl CoefficientCache {
    /// A cache that never touches the filesystem.
    pub fn in_memory() -> Self {
        CoefficientCache::default()
    }

    /// Opens (creating if needed) `dir/coefficients.txt`.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, CacheError> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        let path = dir.join(CACHE_FILE);
        let mut entries = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            for (idx, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let (key, value) = parse_record(&line).ok_or_else(|| CacheError::Malformed {
                    path: path.clone(),
                    line: idx + 1,
                    text: line.clone(),
                })?;
                entries.insert(key, value);
            }
        }
        Ok(CoefficientCache {
            path: Some(path),
            entries: Mutex::new(entries),
        })
    }

    /// Directory from `--cache`, else the environment, else the default.
    pub fn resolve_dir(flag: Option<&Path>) -> PathBuf {
        if let Some(dir) = flag {
            return dir.to_path_buf();
        }
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(dir) if !dir.is_empty() => PathBuf::from(dir),
            _ => PathBuf::from(DEFAULT_CACHE_DIR),
        }
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, family: Family, target: &ExponentVector) -> Option<BigInt> {
        self.entries
            .lock()
            .unwrap()
            .get(&(family, target.clone()))
            .cloned()
    }

    pub fn insert(
        &self,
        family: Family,
        target: &ExponentVector,
        value: &BigInt,
    ) -> Result<(), CacheError> {
        let mut entries = self.entries.lock().unwrap();
        if let Some(path) = &self.path {
            let record = format_record(family, target, value);
            let mut file = OpenOptions::new().create(true).append(true).open(path)?;
            // Single write per record so concurrent appenders never interleave lines.
            file.write_all(record.as_bytes())?;
        }
        entries.insert((family, target.clone()), value.clone());
        Ok(())
    }
}

pub fn format_record(family: Family, target: &ExponentVector, value: &BigInt) -> String {
    let mut s = format!("{} {}", family.token(), target.len());
    for e in target.as_slice() {
        s.push(' ');
        s.push_str(&e.to_string());
    }
    s.push(' ');
    s.push_str(&value.to_string());
    s.push('\n');
    s
}

pub fn parse_record(line: &str) -> Option<(Key, BigInt)> {
    let mut fields = line.split_whitespace();
    let family: Family = fields.next()?.parse().ok()?;
    let k: usize = fields.next()?.parse().ok()?;
    let rest: Vec<&str> = fields.collect();
    if rest.len() != k + 1 {
        return None;
    }
    let exps = rest[..k]
        .iter()
        .map(|s| s.parse::<u32>().ok())
        .collect::<Option<Vec<_>>>()?;
    let value: BigInt = rest[k].parse().ok()?;
    Some(((family, ExponentVector::new(exps)), value))
}
