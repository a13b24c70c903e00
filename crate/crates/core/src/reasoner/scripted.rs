//! Deterministic policy: retrieve once, classify each hit in rank order, then answer.

use serde_json::{json, Value};

use super::template::{Template, TemplateError};
use super::{Reasoner, ReasonerError};
use crate::detector::{aggregate, BiasVerdict, CLASSIFY_TOOL};
use crate::engine::{Action, AgentState, BiasLine, FinalAnswer, Observation};
use crate::label::Label;
use crate::retriever::{DEFAULT_K, RETRIEVE_TOOL};

pub const DEFAULT_ANSWER_TEMPLATE: &str = "Answer (from top source): {top_excerpt}";
pub const DEFAULT_ANALYSIS_TEMPLATE: &str = "{per_chunk_lines}\nAggregate: label={label} p={probability}";
pub const NO_DOCUMENTS_ANSWER: &str = "No relevant documents were found for this query.";
pub const UNCLASSIFIED_ANSWER: &str = "None of the retrieved passages could be classified.";

const ANSWER_SLOTS: &[&str] = &["query", "top_excerpt"];
const ANALYSIS_SLOTS: &[&str] = &["label", "probability", "per_chunk_lines"];

#[derive(Debug, Clone, PartialEq)]
pub struct ScriptedPolicyConfig {
    k: usize,
    answer_template: Template,
    analysis_template: Template,
    excerpt_chars: usize,
}

impl ScriptedPolicyConfig {
    pub fn new(k: usize, answer_template: &str, analysis_template: &str) -> Result<Self, TemplateError> {
        Ok(Self {
            k: k.max(1),
            answer_template: Template::parse(answer_template, ANSWER_SLOTS)?,
            analysis_template: Template::parse(analysis_template, ANALYSIS_SLOTS)?,
            excerpt_chars: 240,
        })
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k.max(1);
        self
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl Default for ScriptedPolicyConfig {
    fn default() -> Self {
        Self::new(DEFAULT_K, DEFAULT_ANSWER_TEMPLATE, DEFAULT_ANALYSIS_TEMPLATE).expect("default templates are valid")
    }
}

#[derive(Debug, Clone, Default)]
pub struct ScriptedReasoner {
    config: ScriptedPolicyConfig,
}

struct Hit {
    doc_id: String,
    text: String,
}

impl ScriptedReasoner {
    pub fn new(config: ScriptedPolicyConfig) -> Self {
        Self { config }
    }

    fn final_answer(&self, state: &AgentState, hits: &[Hit], classified: &[&Observation]) -> Action {
        let verdicts: Vec<(&Hit, BiasVerdict)> = hits
            .iter()
            .zip(classified)
            .filter_map(|(hit, obs)| {
                let (label, probability) = BiasVerdict::from_payload(obs.result()?)?;
                Some((
                    hit,
                    BiasVerdict {
                        label,
                        probability,
                        detector_id: String::new(),
                    },
                ))
            })
            .collect();
        let all: Vec<BiasVerdict> = verdicts.iter().map(|(_, v)| v.clone()).collect();
        let Ok(agg) = aggregate(&all) else {
            return incomplete(UNCLASSIFIED_ANSWER);
        };
        let per_chunk_lines = verdicts
            .iter()
            .map(|(hit, v)| format!("source={} label={} p={:.3}", hit.doc_id, v.label, v.probability))
            .collect::<Vec<_>>()
            .join("\n");
        let answer = self.config.answer_template.render(&[
            ("query", state.query()),
            ("top_excerpt", &excerpt(&hits[0].text, self.config.excerpt_chars)),
        ]);
        let analysis = self.config.analysis_template.render(&[
            ("label", agg.label.as_str()),
            ("probability", &format!("{:.4}", agg.probability)),
            ("per_chunk_lines", &per_chunk_lines),
        ]);
        let bias_line = if agg.label == Label::Biased {
            BiasLine::ContainsBias
        } else {
            BiasLine::AppearsUnbiased
        };
        Action::FinalAnswer(FinalAnswer {
            bias_analysis: Some(analysis),
            confidence: Some(agg.probability),
            ..FinalAnswer::new(answer, bias_line)
        })
    }
}

fn incomplete(answer: &str) -> Action {
    Action::FinalAnswer(FinalAnswer {
        incomplete: true,
        ..FinalAnswer::new(answer, BiasLine::AppearsUnbiased)
    })
}

fn parse_hits(payload: &Value) -> Option<Vec<Hit>> {
    payload
        .as_array()?
        .iter()
        .map(|h| {
            Some(Hit {
                doc_id: h.get("doc_id")?.as_str()?.to_string(),
                text: h.get("text")?.as_str()?.to_string(),
            })
        })
        .collect()
}

/// Whitespace-collapsed prefix of at most `max` chars.
fn excerpt(text: &str, max: usize) -> String {
    let collapsed = text.split_whitespace().collect::<Vec<_>>().join(" ");
    match collapsed.char_indices().nth(max) {
        Some((i, _)) => format!("{}...", collapsed[..i].trim_end()),
        None => collapsed,
    }
}

impl Reasoner for ScriptedReasoner {
    fn decide(&self, state: &AgentState) -> Result<Action, ReasonerError> {
        let mut observations = state.observations();
        let Some(retrieval) = observations.by_ref().find(|o| o.tool_name == RETRIEVE_TOOL) else {
            return Ok(Action::tool_call(
                RETRIEVE_TOOL,
                json!({"query": state.query(), "k": self.config.k}),
            ));
        };
        let hits = match retrieval.result().map(parse_hits) {
            Some(Some(hits)) if !hits.is_empty() => hits,
            Some(None) => return Err(ReasonerError::Policy("unreadable retrieve payload".into())),
            _ => return Ok(incomplete(NO_DOCUMENTS_ANSWER)),
        };
        let classified: Vec<&Observation> = observations.filter(|o| o.tool_name == CLASSIFY_TOOL).collect();
        match hits.get(classified.len()) {
            Some(next) => Ok(Action::tool_call(CLASSIFY_TOOL, json!({"text": next.text}))),
            None => Ok(self.final_answer(state, &hits, &classified)),
        }
    }
}
