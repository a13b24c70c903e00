//! Exact (linear-scan) vector store with a checksummed JSON Lines container.

use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::chunk::{chunk_text, Chunk, Chunking};
use super::embed::{cosine_distance, Embedder};
use super::{Document, RetrieverError};
use crate::label::Label;

pub const STORE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoreRecord {
    pub chunk: Chunk,
    pub vector: Vec<f64>,
    #[serde(default)]
    pub doc_label: Option<Label>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct StoreHeader {
    version: u32,
    dim: usize,
    embedder: String,
    chunk_size: usize,
    overlap: usize,
    records: usize,
    checksum: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchHit<'a> {
    pub record: &'a StoreRecord,
    pub distance: f64,
}

/// In-memory store; records are kept sorted by `chunk_id`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorStore {
    dim: usize,
    embedder: String,
    chunking: Chunking,
    records: Vec<StoreRecord>,
}

impl VectorStore {
    pub fn new(embedder: &dyn Embedder, chunking: Chunking) -> Self {
        Self {
            dim: embedder.dim(),
            embedder: embedder.id(),
            chunking,
            records: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn embedder_id(&self) -> &str {
        &self.embedder
    }

    pub fn chunking(&self) -> Chunking {
        self.chunking
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[StoreRecord] {
        &self.records
    }

    /// Ground-truth label of `doc_id`, if the document was ingested with one.
    pub fn doc_label(&self, doc_id: &str) -> Option<Label> {
        self.records.iter().find(|r| r.chunk.doc_id == doc_id).and_then(|r| r.doc_label)
    }

    fn check_embedder(&self, embedder: &dyn Embedder) -> Result<(), RetrieverError> {
        if embedder.dim() != self.dim {
            return Err(RetrieverError::Dimension {
                expected: self.dim,
                found: embedder.dim(),
            });
        }
        if embedder.id() != self.embedder {
            return Err(RetrieverError::EmbedderMismatch {
                store: self.embedder.clone(),
                embedder: embedder.id(),
            });
        }
        Ok(())
    }

    /// Replaces every record of `doc_id` with `records`.
    fn replace_document(&mut self, doc_id: &str, records: Vec<StoreRecord>) {
        self.records.retain(|r| r.chunk.doc_id != doc_id);
        self.records.extend(records);
        self.records.sort_by(|a, b| a.chunk.chunk_id.cmp(&b.chunk.chunk_id));
    }

    /// Top-`k` records by cosine distance to the embedding of `query`, ties
    /// broken by ascending `chunk_id`.
    pub fn search(&self, query: &str, k: usize, embedder: &dyn Embedder) -> Result<Vec<SearchHit<'_>>, RetrieverError> {
        if self.records.is_empty() {
            return Err(RetrieverError::EmptyStore);
        }
        self.check_embedder(embedder)?;
        let q = embedder.embed(query)?;
        Ok(self.search_vector(&q, k))
    }

    pub fn search_vector(&self, query: &[f64], k: usize) -> Vec<SearchHit<'_>> {
        let mut hits: Vec<SearchHit<'_>> = self
            .records
            .iter()
            .map(|record| SearchHit {
                record,
                distance: cosine_distance(query, &record.vector),
            })
            .collect();
        hits.sort_by(|a, b| {
            a.distance
                .total_cmp(&b.distance)
                .then_with(|| a.record.chunk.chunk_id.cmp(&b.record.chunk.chunk_id))
        });
        hits.truncate(k);
        hits
    }

    pub fn save(&self, path: &Path) -> Result<(), RetrieverError> {
        let mut body = String::new();
        for r in &self.records {
            body.push_str(&serde_json::to_string(r).map_err(|e| RetrieverError::Corrupt(e.to_string()))?);
            body.push('\n');
        }
        let header = StoreHeader {
            version: STORE_VERSION,
            dim: self.dim,
            embedder: self.embedder.clone(),
            chunk_size: self.chunking.size(),
            overlap: self.chunking.overlap(),
            records: self.records.len(),
            checksum: checksum(&body),
        };
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let mut f = fs::File::create(path)?;
        writeln!(f, "{}", serde_json::to_string(&header).map_err(|e| RetrieverError::Corrupt(e.to_string()))?)?;
        f.write_all(body.as_bytes())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, RetrieverError> {
        let bytes = fs::read(path)?;
        let text = String::from_utf8(bytes).map_err(|_| RetrieverError::Corrupt("store is not UTF-8".into()))?;
        let (head, body) = text
            .split_once('\n')
            .ok_or_else(|| RetrieverError::Corrupt("missing store header".into()))?;
        let probe: serde_json::Value =
            serde_json::from_str(head).map_err(|e| RetrieverError::Corrupt(format!("header: {e}")))?;
        match probe.get("version").and_then(serde_json::Value::as_u64) {
            Some(v) if v == u64::from(STORE_VERSION) => {}
            Some(v) => return Err(RetrieverError::UnsupportedVersion(v)),
            None => return Err(RetrieverError::Corrupt("header has no version".into())),
        }
        let header: StoreHeader =
            serde_json::from_value(probe).map_err(|e| RetrieverError::Corrupt(format!("header: {e}")))?;
        if checksum(body) != header.checksum {
            return Err(RetrieverError::Corrupt("checksum mismatch".into()));
        }
        let records = body
            .lines()
            .enumerate()
            .map(|(i, line)| {
                serde_json::from_str::<StoreRecord>(line)
                    .map_err(|e| RetrieverError::Corrupt(format!("record {}: {e}", i + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if records.len() != header.records {
            return Err(RetrieverError::Corrupt(format!(
                "header declares {} records, found {}",
                header.records,
                records.len()
            )));
        }
        if let Some(bad) = records.iter().find(|r| r.vector.len() != header.dim) {
            return Err(RetrieverError::Dimension {
                expected: header.dim,
                found: bad.vector.len(),
            });
        }
        let chunking = Chunking::new(header.chunk_size, header.overlap)
            .map_err(|e| RetrieverError::Corrupt(e.to_string()))?;
        Ok(Self {
            dim: header.dim,
            embedder: header.embedder,
            chunking,
            records,
        })
    }
}

fn checksum(body: &str) -> String {
    hex::encode(Sha256::digest(body.as_bytes()))
}

/// Chunks, embeds and inserts every document. Re-ingesting a `doc_id`
/// replaces its previous records. Returns the number of records inserted.
pub fn ingest(corpus: &[Document], store: &mut VectorStore, embedder: &dyn Embedder) -> Result<usize, RetrieverError> {
    store.check_embedder(embedder)?;
    let mut seen = HashSet::new();
    for doc in corpus {
        if !seen.insert(doc.doc_id.as_str()) {
            return Err(RetrieverError::Ingest(format!("duplicate doc_id {:?}", doc.doc_id)));
        }
    }
    let mut inserted = 0;
    for doc in corpus {
        let chunks = chunk_text(&doc.doc_id, &doc.body, store.chunking)?;
        let records = chunks
            .into_iter()
            .map(|chunk| {
                let vector = embedder.embed(&chunk.text)?;
                if vector.len() != store.dim {
                    return Err(RetrieverError::Dimension {
                        expected: store.dim,
                        found: vector.len(),
                    });
                }
                Ok(StoreRecord {
                    chunk,
                    vector,
                    doc_label: doc.label,
                })
            })
            .collect::<Result<Vec<_>, RetrieverError>>()?;
        inserted += records.len();
        store.replace_document(&doc.doc_id, records);
    }
    Ok(inserted)
}
