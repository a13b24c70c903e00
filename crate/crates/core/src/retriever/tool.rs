use std::sync::Arc;

use serde_json::{json, Value};

use super::embed::Embedder;
use super::store::VectorStore;
use super::RetrieverError;
use crate::engine::{FailureKind, ParamSpec, ToolArgs, ToolFailure, ToolHandler, ToolSpec};

pub const RETRIEVE_TOOL: &str = "retrieve";
pub const DEFAULT_K: usize = 4;

/// `retrieve(query: string, k: integer)` over a loaded store.
#[derive(Clone)]
pub struct RetrieveTool {
    store: Arc<VectorStore>,
    embedder: Arc<dyn Embedder>,
    include_labels: bool,
}

impl RetrieveTool {
    pub fn new(store: Arc<VectorStore>, embedder: Arc<dyn Embedder>) -> Self {
        Self {
            store,
            embedder,
            include_labels: false,
        }
    }

    /// Adds each hit's ground-truth `doc_label` to the payload (evaluation runs only).
    pub fn with_labels(mut self, include: bool) -> Self {
        self.include_labels = include;
        self
    }

    pub fn spec(self) -> ToolSpec {
        ToolSpec {
            name: RETRIEVE_TOOL.into(),
            description: "Search the news article store and return the k most relevant chunks.".into(),
            params: vec![
                ParamSpec::string("query", "search text"),
                ParamSpec::integer("k", "number of chunks to return", Some(1), None),
            ],
            handler: Arc::new(self),
        }
    }
}

impl ToolHandler for RetrieveTool {
    fn call(&self, args: &ToolArgs) -> Result<Value, ToolFailure> {
        let query = args["query"].as_str().unwrap_or_default();
        let k = args["k"].as_u64().unwrap_or(DEFAULT_K as u64) as usize;
        let hits = self.store.search(query, k, self.embedder.as_ref()).map_err(|e| {
            let kind = match e {
                RetrieverError::Embed(_) => FailureKind::Remote,
                _ => FailureKind::Data,
            };
            ToolFailure::new(kind, e.to_string())
        })?;
        Ok(Value::Array(
            hits.iter()
                .map(|h| {
                    let c = &h.record.chunk;
                    let mut v = json!({
                        "chunk_id": c.chunk_id,
                        "doc_id": c.doc_id,
                        "text": c.text,
                        "distance": h.distance,
                    });
                    if self.include_labels {
                        v["doc_label"] = json!(h.record.doc_label);
                    }
                    v
                })
                .collect(),
        ))
    }
}
