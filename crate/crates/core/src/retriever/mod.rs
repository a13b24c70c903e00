//! Document ingestion and nearest-neighbour retrieval over news chunks.

mod chunk;
mod embed;
mod store;
mod tool;

use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use chunk::{chunk_id, chunk_text, Chunk, Chunking, DEFAULT_CHUNK_SIZE, DEFAULT_OVERLAP};
pub use embed::{
    cosine, cosine_distance, l2_normalize, Embedder, HashedEmbedder, RemoteEmbedder, RemoteEmbedderConfig,
    DEFAULT_DIM,
};
pub use store::{ingest, SearchHit, StoreRecord, VectorStore, STORE_VERSION};
pub use tool::{RetrieveTool, DEFAULT_K, RETRIEVE_TOOL};

use crate::label::Label;

#[derive(Debug, thiserror::Error)]
pub enum RetrieverError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("document {0:?} has an empty body")]
    EmptyBody(String),
    #[error("embedding failed: {0}")]
    Embed(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("store was built with embedder {store:?} but {embedder:?} was supplied")]
    EmbedderMismatch { store: String, embedder: String },
    #[error("ingest failed: {0}")]
    Ingest(String),
    #[error("vector store is empty")]
    EmptyStore,
    #[error("corrupt store: {0}")]
    Corrupt(String),
    #[error("unsupported store version {0}")]
    UnsupportedVersion(u64),
    #[error("corpus line {line}: {reason}")]
    Corpus { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A news article. `label` is the ground-truth annotation used only for evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    #[serde(default)]
    pub title: String,
    #[serde(rename = "text")]
    pub body: String,
    #[serde(default)]
    pub label: Option<Label>,
    #[serde(default)]
    pub source: String,
}

/// Reads a JSON Lines corpus. Blank lines are skipped; errors carry the 1-based line number.
pub fn read_corpus(path: &Path) -> Result<Vec<Document>, RetrieverError> {
    let file = std::fs::File::open(path)?;
    parse_corpus(std::io::BufReader::new(file))
}

pub fn parse_corpus(reader: impl BufRead) -> Result<Vec<Document>, RetrieverError> {
    let mut docs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document = serde_json::from_str(&line).map_err(|e| RetrieverError::Corpus {
            line: i + 1,
            reason: e.to_string(),
        })?;
        if doc.body.is_empty() {
            return Err(RetrieverError::Corpus {
                line: i + 1,
                reason: format!("document {:?} has an empty body", doc.doc_id),
            });
        }
        docs.push(doc);
    }
    Ok(docs)
}
