use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::action::{Action, FinalAnswer, ToolArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    UnknownTool,
    InvalidArguments,
    /// The tool ran but its input data was unusable (e.g. empty store).
    Data,
    /// A remote dependency of the tool failed.
    Remote,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, thiserror::Error)]
#[error("{kind:?}: {message}")]
pub struct ToolFailure {
    pub kind: FailureKind,
    pub message: String,
}

impl ToolFailure {
    pub fn new(kind: FailureKind, message: impl Into<String>) -> Self {
        Self {
            kind,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub tool_name: String,
    pub step: u32,
    pub outcome: Result<Value, ToolFailure>,
}

impl Observation {
    pub fn result(&self) -> Option<&Value> {
        self.outcome.as_ref().ok()
    }

    pub fn failure(&self) -> Option<&ToolFailure> {
        self.outcome.as_ref().err()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EventKind {
    /// A reasoner decision to call a tool.
    Decision { tool: String, arguments: ToolArgs },
    Observation(Observation),
    Final(FinalAnswer),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub step: u32,
    pub ts_ms: i64,
    pub kind: EventKind,
}

impl Event {
    pub fn from_action(step: u32, ts_ms: i64, action: Action) -> Self {
        let kind = match action {
            Action::ToolCall { tool, arguments } => EventKind::Decision { tool, arguments },
            Action::FinalAnswer(f) => EventKind::Final(f),
        };
        Self { step, ts_ms, kind }
    }

    pub fn observation(ts_ms: i64, obs: Observation) -> Self {
        Self {
            step: obs.step,
            ts_ms,
            kind: EventKind::Observation(obs),
        }
    }

    pub fn as_observation(&self) -> Option<&Observation> {
        match &self.kind {
            EventKind::Observation(o) => Some(o),
            _ => None,
        }
    }

    pub fn as_final(&self) -> Option<&FinalAnswer> {
        match &self.kind {
            EventKind::Final(f) => Some(f),
            _ => None,
        }
    }
}

pub(crate) fn now_ms() -> i64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_millis() as i64)
        .unwrap_or(0)
}
