//! Loading and saving whole corpora: directories of annotation files, or a
//! preprocessed corpus stored one document per JSONL line.

use std::collections::HashSet;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::{parse_document, preprocess, DocError, Document};
use crate::par;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Doc { path: PathBuf, source: DocError },
    #[error("{path}:{line}: {message}")]
    Schema { path: PathBuf, line: usize, message: String },
    #[error("document {0:?} appears more than once")]
    DuplicateDocument(String),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CorpusError + '_ {
    move |source| CorpusError::Io { path: path.to_path_buf(), source }
}

/// Parses and preprocesses every `*.json` annotation file in `dir`. The
/// result is sorted by `doc_id`.
pub fn load_annotation_dir(dir: &Path) -> Result<Vec<Document>, CorpusError> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err(dir))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let parsed = par::map(&files, |path| -> Result<Document, CorpusError> {
        let bytes = fs::read(path).map_err(io_err(path))?;
        let doc = parse_document(&bytes)
            .map_err(|source| CorpusError::Doc { path: path.clone(), source })?;
        Ok(preprocess(doc))
    });
    finish(parsed.into_iter().collect::<Result<Vec<_>, _>>()?)
}

/// Reads a preprocessed corpus written by [`write_corpus`].
pub fn read_corpus(path: &Path) -> Result<Vec<Document>, CorpusError> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    let mut docs = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document = serde_json::from_str(&line).map_err(|e| CorpusError::Schema {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?;
        docs.push(doc);
    }
    finish(docs)
}

/// Loads either an annotation directory or a preprocessed corpus file.
pub fn load(path: &Path) -> Result<Vec<Document>, CorpusError> {
    if path.is_dir() {
        load_annotation_dir(path)
    } else {
        read_corpus(path)
    }
}

fn finish(mut docs: Vec<Document>) -> Result<Vec<Document>, CorpusError> {
    docs.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    let mut seen = HashSet::new();
    for d in &docs {
        if !seen.insert(d.doc_id.as_str()) {
            return Err(CorpusError::DuplicateDocument(d.doc_id.clone()));
        }
    }
    Ok(docs)
}

/// Writes one document per line, atomically.
pub fn write_corpus(docs: &[Document], path: &Path) -> Result<(), CorpusError> {
    let mut buf = Vec::new();
    for d in docs {
        serde_json::to_writer(&mut buf, d).expect("document serializes");
        buf.push(b'\n');
    }
    crate::atomic_write(path, &buf).map_err(io_err(path))
}
