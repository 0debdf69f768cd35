//! Document-level train/valid/test splits, JSONL record files and dataset
//! statistics.

mod stats;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use crate::generate::QARecord;
use crate::util::derive_seed;

pub use stats::{compute_stats, per_image, percent, DatasetStats, TaskStats};

pub const SPLIT_NAMES: [&str; 3] = ["train", "valid", "test"];

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("bad split ratios: {0}")]
    BadRatios(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: {message}")]
    SchemaViolation { path: PathBuf, line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSplit {
    pub name: String,
    pub records: Vec<QARecord>,
    pub doc_ids: BTreeSet<String>,
}

fn check_ratios(ratios: &[f64; 3]) -> Result<(), DatasetError> {
    if ratios.iter().any(|r| !r.is_finite() || *r <= 0.0) {
        return Err(DatasetError::BadRatios(format!("{ratios:?} must all be positive")));
    }
    let sum: f64 = ratios.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(DatasetError::BadRatios(format!("{ratios:?} sum to {sum}, not 1")));
    }
    Ok(())
}

/// Splits `n` items by `ratios`, flooring each share and handing the
/// leftover items to the largest fractional parts (earlier splits win ties).
pub fn largest_remainder(n: usize, ratios: &[f64; 3]) -> [usize; 3] {
    let exact: Vec<f64> = ratios.iter().map(|r| r * n as f64).collect();
    let mut sizes = [0usize; 3];
    for (s, e) in sizes.iter_mut().zip(&exact) {
        *s = e.floor() as usize;
    }
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&a, &b| {
        let fa = exact[a] - exact[a].floor();
        let fb = exact[b] - exact[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    let mut left = n.saturating_sub(sizes.iter().sum());
    for &i in order.iter().cycle() {
        if left == 0 {
            break;
        }
        sizes[i] += 1;
        left -= 1;
    }
    sizes
}

/// Shuffles the distinct documents with `seed` and partitions them by
/// `ratios`; every record follows its document.
pub fn split_corpus(records: &[QARecord], ratios: [f64; 3], seed: u64) -> Result<[DatasetSplit; 3], DatasetError> {
    check_ratios(&ratios)?;
    let mut docs: Vec<&str> = records.iter().map(|r| r.doc_id.as_str()).collect::<BTreeSet<_>>().into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &["split"]));
    docs.shuffle(&mut rng);
    let sizes = largest_remainder(docs.len(), &ratios);
    let mut assignment: BTreeMap<&str, usize> = BTreeMap::new();
    let mut start = 0;
    for (split, size) in sizes.iter().enumerate() {
        for d in &docs[start..start + size] {
            assignment.insert(d, split);
        }
        start += size;
    }
    let mut splits = SPLIT_NAMES.map(|name| DatasetSplit {
        name: name.to_string(),
        records: Vec::new(),
        doc_ids: BTreeSet::new(),
    });
    for (doc, &split) in &assignment {
        splits[split].doc_ids.insert(doc.to_string());
    }
    for r in records {
        splits[assignment[r.doc_id.as_str()]].records.push(r.clone());
    }
    Ok(splits)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> DatasetError + '_ {
    move |source| DatasetError::Io { path: path.to_path_buf(), source }
}

/// Writes one JSON value per line, atomically.
pub fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<(), DatasetError> {
    let mut buf = Vec::new();
    for item in items {
        serde_json::to_writer(&mut buf, item).expect("records serialize");
        buf.push(b'\n');
    }
    crate::atomic_write(path, &buf).map_err(io_err(path))
}

/// Reads one JSON value per non-blank line.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, DatasetError> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let item = serde_json::from_str(&line).map_err(|e| DatasetError::SchemaViolation {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(item);
    }
    Ok(out)
}

pub fn write_records(path: &Path, records: &[QARecord]) -> Result<(), DatasetError> {
    write_jsonl(path, records)
}

pub fn read_records(path: &Path) -> Result<Vec<QARecord>, DatasetError> {
    let records: Vec<QARecord> = read_jsonl(path)?;
    for (i, r) in records.iter().enumerate() {
        if r.page.is_some() != r.task.is_page_level() {
            return Err(DatasetError::SchemaViolation {
                path: path.to_path_buf(),
                line: i + 1,
                message: format!("record {} of task {} has page {:?}", r.qid, r.task, r.page),
            });
        }
    }
    Ok(records)
}

/// Writes `<dir>/<name>.jsonl` for each split.
pub fn write_dataset(splits: &[DatasetSplit], dir: &Path) -> Result<(), DatasetError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    for s in splits {
        write_records(&dir.join(format!("{}.jsonl", s.name)), &s.records)?;
    }
    Ok(())
}

/// Reads the train/valid/test files written by [`write_dataset`].
pub fn read_dataset(dir: &Path) -> Result<Vec<DatasetSplit>, DatasetError> {
    SPLIT_NAMES
        .iter()
        .map(|name| {
            let records = read_records(&dir.join(format!("{name}.jsonl")))?;
            let doc_ids = records.iter().map(|r| r.doc_id.clone()).collect();
            Ok(DatasetSplit { name: name.to_string(), records, doc_ids })
        })
        .collect()
}
