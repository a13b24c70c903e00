//! Decision functions for the agent loop: a deterministic scripted policy and
//! a remote chat-model client.

mod prompt;
mod remote;
mod reply;
mod scripted;
mod template;

pub use prompt::render_system_prompt;
pub use remote::{ChatEndpointConfig, RemoteReasoner};
pub use reply::{parse_model_reply, render_action, ReplyParseError};
pub use scripted::{
    ScriptedPolicyConfig, ScriptedReasoner, DEFAULT_ANALYSIS_TEMPLATE, DEFAULT_ANSWER_TEMPLATE, NO_DOCUMENTS_ANSWER,
    UNCLASSIFIED_ANSWER,
};
pub use template::{Template, TemplateError};

use crate::engine::{Action, AgentState};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReasonerError {
    /// The model answered but the reply could not be understood. The engine retries once.
    #[error("unparseable reasoner output: {0}")]
    Parse(String),
    #[error("reasoner unreachable: {0}")]
    Transport(String),
    #[error("reasoner misconfigured: {0}")]
    Config(String),
    #[error("reasoner policy error: {0}")]
    Policy(String),
}

/// Chooses the next action from the current state. Implementations are shared
/// across concurrent runs.
pub trait Reasoner: Send + Sync {
    fn decide(&self, state: &AgentState) -> Result<Action, ReasonerError>;
}
