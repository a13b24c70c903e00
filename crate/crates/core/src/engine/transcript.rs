//! Run transcripts and their JSON Lines encoding.
//!
//! Line 1 is a header `{"run_id","query_id","version":1,...}`; every further
//! line is one event `{"step","type","ts_ms","payload"}` with `type` one of
//! `decision`, `observation` or `final`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::action::{FinalAnswer, ToolArgs};
use super::event::{Event, EventKind, FailureKind, Observation, ToolFailure};
use super::state::AgentState;

pub const TRANSCRIPT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum TranscriptError {
    #[error("transcript line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("unsupported transcript version {0}")]
    UnsupportedVersion(u64),
    #[error("transcript violates run invariants: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    pub run_id: String,
    pub query_id: Option<String>,
    pub query: String,
    pub step_budget: u32,
    pub events: Vec<Event>,
    pub started_ms: i64,
    pub finished_ms: i64,
    /// Set when the run aborted; such transcripts carry no final answer.
    pub failure: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct Header {
    run_id: String,
    query_id: Option<String>,
    version: u32,
    query: String,
    step_budget: u32,
    started_ms: i64,
    finished_ms: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    failure: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct EventLine {
    step: u32,
    #[serde(rename = "type")]
    kind: LineType,
    ts_ms: i64,
    payload: Value,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum LineType {
    Decision,
    Observation,
    Final,
}

#[derive(Deserialize)]
struct DecisionPayload {
    tool: String,
    arguments: ToolArgs,
}

#[derive(Deserialize)]
struct ObservationPayload {
    tool: String,
    #[serde(default)]
    result: Option<Value>,
    #[serde(default)]
    error: Option<ToolFailure>,
}

impl Transcript {
    pub fn final_answer(&self) -> Option<&FinalAnswer> {
        self.events.last().and_then(Event::as_final)
    }

    pub fn is_complete(&self) -> bool {
        self.failure.is_none() && self.final_answer().is_some()
    }

    pub fn observations(&self) -> impl Iterator<Item = &Observation> {
        self.events.iter().filter_map(Event::as_observation)
    }

    /// True when a remote endpoint failed during the run, either the reasoner
    /// itself or a tool backed by one.
    pub fn hit_remote_failure(&self) -> bool {
        self.failure.as_deref().is_some_and(|f| f.starts_with(super::runner::REMOTE_FAILURE_PREFIX))
            || self.observations().any(|o| o.failure().is_some_and(|f| f.kind == FailureKind::Remote))
    }

    /// Number of reasoner decisions (tool calls plus a reasoner-issued final).
    pub fn decision_count(&self) -> usize {
        self.events
            .iter()
            .filter(|e| match &e.kind {
                EventKind::Decision { .. } => true,
                EventKind::Final(f) => !f.budget_exhausted,
                EventKind::Observation(_) => false,
            })
            .count()
    }

    /// Copy with run id and all timestamps zeroed, for comparing replays.
    pub fn without_run_metadata(&self) -> Self {
        let mut t = self.clone();
        t.run_id.clear();
        t.started_ms = 0;
        t.finished_ms = 0;
        t.events.iter_mut().for_each(|e| e.ts_ms = 0);
        t
    }

    /// Replays the events through [`AgentState::fold`] and checks completion.
    pub fn validate(&self) -> Result<(), TranscriptError> {
        let mut state = AgentState::new(self.query.clone(), self.step_budget)
            .map_err(|e| TranscriptError::Invalid(e.to_string()))?;
        for e in &self.events {
            state = state
                .fold(e.clone())
                .map_err(|err| TranscriptError::Invalid(err.to_string()))?;
        }
        match (&self.failure, state.is_finished()) {
            (None, false) => Err(TranscriptError::Invalid("no final answer".into())),
            (Some(_), true) => Err(TranscriptError::Invalid("failed run carries a final answer".into())),
            _ => Ok(()),
        }
    }

    pub fn to_jsonl(&self) -> String {
        let header = Header {
            run_id: self.run_id.clone(),
            query_id: self.query_id.clone(),
            version: TRANSCRIPT_VERSION,
            query: self.query.clone(),
            step_budget: self.step_budget,
            started_ms: self.started_ms,
            finished_ms: self.finished_ms,
            failure: self.failure.clone(),
        };
        let mut out = serde_json::to_string(&header).expect("header serializes");
        out.push('\n');
        for e in &self.events {
            let (kind, payload) = match &e.kind {
                EventKind::Decision { tool, arguments } => {
                    (LineType::Decision, json!({"tool": tool, "arguments": arguments}))
                }
                EventKind::Observation(o) => (
                    LineType::Observation,
                    match &o.outcome {
                        Ok(v) => json!({"tool": o.tool_name, "result": v}),
                        Err(f) => json!({"tool": o.tool_name, "error": f}),
                    },
                ),
                EventKind::Final(f) => (LineType::Final, serde_json::to_value(f).expect("final serializes")),
            };
            let line = EventLine {
                step: e.step,
                kind,
                ts_ms: e.ts_ms,
                payload,
            };
            out.push_str(&serde_json::to_string(&line).expect("event serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self, TranscriptError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, head) = lines.next().ok_or(TranscriptError::Malformed {
            line: 1,
            reason: "empty transcript".into(),
        })?;
        let probe: Value = serde_json::from_str(head).map_err(|e| malformed(0, e))?;
        match probe.get("version").and_then(Value::as_u64) {
            Some(v) if v == u64::from(TRANSCRIPT_VERSION) => {}
            Some(v) => return Err(TranscriptError::UnsupportedVersion(v)),
            None => {
                return Err(TranscriptError::Malformed {
                    line: 1,
                    reason: "header has no version".into(),
                })
            }
        }
        let header: Header = serde_json::from_value(probe).map_err(|e| malformed(0, e))?;
        let mut events = Vec::new();
        for (i, line) in lines {
            let raw: EventLine = serde_json::from_str(line).map_err(|e| malformed(i, e))?;
            let kind = match raw.kind {
                LineType::Decision => {
                    let p: DecisionPayload = serde_json::from_value(raw.payload).map_err(|e| malformed(i, e))?;
                    EventKind::Decision {
                        tool: p.tool,
                        arguments: p.arguments,
                    }
                }
                LineType::Observation => {
                    let p: ObservationPayload = serde_json::from_value(raw.payload).map_err(|e| malformed(i, e))?;
                    let outcome = match (p.result, p.error) {
                        (Some(v), None) => Ok(v),
                        (None, Some(f)) => Err(f),
                        _ => {
                            return Err(TranscriptError::Malformed {
                                line: i + 1,
                                reason: "observation needs exactly one of result/error".into(),
                            })
                        }
                    };
                    EventKind::Observation(Observation {
                        tool_name: p.tool,
                        step: raw.step,
                        outcome,
                    })
                }
                LineType::Final => EventKind::Final(serde_json::from_value(raw.payload).map_err(|e| malformed(i, e))?),
            };
            events.push(Event {
                step: raw.step,
                ts_ms: raw.ts_ms,
                kind,
            });
        }
        Ok(Self {
            run_id: header.run_id,
            query_id: header.query_id,
            query: header.query,
            step_budget: header.step_budget,
            events,
            started_ms: header.started_ms,
            finished_ms: header.finished_ms,
            failure: header.failure,
        })
    }
}

fn malformed(index: usize, e: serde_json::Error) -> TranscriptError {
    TranscriptError::Malformed {
        line: index + 1,
        reason: e.to_string(),
    }
}
