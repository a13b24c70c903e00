//! Recovers per-source verdicts and ground truth from a finished transcript.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::detector::{aggregate, BiasVerdict, CLASSIFY_TOOL};
use crate::engine::{EventKind, Transcript};
use crate::label::Label;
use crate::retriever::{Document, VectorStore, RETRIEVE_TOOL};

/// Ground-truth label per document. Documents absent from the index are unlabeled.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelIndex(BTreeMap<String, Label>);

impl LabelIndex {
    pub fn from_documents(docs: &[Document]) -> Self {
        Self(docs.iter().filter_map(|d| Some((d.doc_id.clone(), d.label?))).collect())
    }

    pub fn from_store(store: &VectorStore) -> Self {
        Self(
            store
                .records()
                .iter()
                .filter_map(|r| Some((r.chunk.doc_id.clone(), r.doc_label?)))
                .collect(),
        )
    }

    pub fn get(&self, doc_id: &str) -> Option<Label> {
        self.0.get(doc_id).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(String, Label)> for LabelIndex {
    fn from_iter<T: IntoIterator<Item = (String, Label)>>(iter: T) -> Self {
        Self(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Source {
    pub doc_id: String,
    pub label: Option<Label>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalCase {
    pub query_id: String,
    pub predicted: Label,
    pub confidence: f64,
    /// Distinct documents whose passages were classified, in first-use order.
    pub sources: Vec<Source>,
    /// Present exactly when every source carries the same label.
    pub ground_truth: Option<Label>,
    pub mixed: bool,
}

impl EvalCase {
    pub fn count(&self, label: Option<Label>) -> usize {
        self.sources.iter().filter(|s| s.label == label).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedCase {
    pub query_id: String,
    pub reason: String,
}

struct Passage<'a> {
    doc_id: &'a str,
    text: &'a str,
    used: bool,
}

fn passages(payload: &Value) -> impl Iterator<Item = Passage<'_>> {
    payload.as_array().into_iter().flatten().filter_map(|hit| {
        Some(Passage {
            doc_id: hit.get("doc_id")?.as_str()?,
            text: hit.get("text")?.as_str()?,
            used: false,
        })
    })
}

/// Turns a complete transcript into an evaluation case.
///
/// A classified text is attributed to the first retrieved passage with the
/// same text that has not been attributed yet, falling back to an already
/// used one.
pub fn parse_transcript(t: &Transcript, labels: &LabelIndex) -> Result<EvalCase, SkippedCase> {
    let query_id = t.query_id.clone().unwrap_or_default();
    let skip = |reason: &str| SkippedCase {
        query_id: query_id.clone(),
        reason: reason.to_string(),
    };
    if let Some(f) = &t.failure {
        return Err(skip(&format!("run failed: {f}")));
    }
    let Some(answer) = t.final_answer() else {
        return Err(skip("transcript has no final answer"));
    };

    let mut pool: Vec<Passage> = Vec::new();
    let mut pending_text: Option<&str> = None;
    let mut classify_calls = 0;
    let mut verdicts = Vec::new();
    let mut sources: Vec<Source> = Vec::new();
    for event in &t.events {
        match &event.kind {
            EventKind::Decision { tool, arguments } if tool == CLASSIFY_TOOL => {
                pending_text = arguments.get("text").and_then(Value::as_str);
            }
            EventKind::Observation(obs) if obs.tool_name == RETRIEVE_TOOL => {
                if let Some(payload) = obs.result() {
                    pool.extend(passages(payload));
                }
            }
            EventKind::Observation(obs) if obs.tool_name == CLASSIFY_TOOL => {
                classify_calls += 1;
                let text = pending_text.take();
                let Some((label, probability)) = obs.result().and_then(BiasVerdict::from_payload) else {
                    continue;
                };
                verdicts.push(BiasVerdict {
                    label,
                    probability,
                    detector_id: String::new(),
                });
                let Some(text) = text else { continue };
                let slot = pool
                    .iter()
                    .position(|p| !p.used && p.text == text)
                    .or_else(|| pool.iter().position(|p| p.text == text));
                if let Some(i) = slot {
                    pool[i].used = true;
                    let doc_id = pool[i].doc_id;
                    if !sources.iter().any(|s| s.doc_id == doc_id) {
                        sources.push(Source {
                            doc_id: doc_id.to_string(),
                            label: labels.get(doc_id),
                        });
                    }
                }
            }
            _ => {}
        }
    }

    if classify_calls == 0 {
        return Err(skip("no classify observations"));
    }
    if verdicts.is_empty() {
        return Err(skip("every classification failed"));
    }
    if answer.incomplete {
        return Err(skip("final answer incomplete"));
    }
    if sources.is_empty() {
        return Err(skip("classified text matches no retrieved passage"));
    }
    if sources.iter().all(|s| s.label.is_none()) {
        return Err(skip("no source carries a ground-truth label"));
    }

    let predicted = if answer.bias_line.is_biased() {
        Label::Biased
    } else {
        Label::NonBiased
    };
    let confidence = match answer.confidence {
        Some(c) => c,
        None => {
            let agg = aggregate(&verdicts).expect("verdicts are non-empty");
            if agg.label == predicted {
                agg.probability
            } else {
                1.0 - agg.probability
            }
        }
    };
    let first = sources[0].label;
    let mixed = sources.iter().any(|s| s.label != first);
    Ok(EvalCase {
        query_id,
        predicted,
        confidence,
        ground_truth: if mixed { None } else { first },
        mixed,
        sources,
    })
}
