//! Chat-completions client acting as the reasoner.

use std::time::Duration;

use serde_json::{json, Value};

use super::prompt::render_system_prompt;
use super::reply::{parse_model_reply, render_action};
use super::{Reasoner, ReasonerError};
use crate::engine::{Action, AgentState, EventKind, ToolDescription};
use crate::http::{Endpoint, JsonClient};

#[derive(Debug, Clone, PartialEq)]
pub struct ChatEndpointConfig {
    pub base_url: String,
    pub path: String,
    pub model_name: String,
    /// Name of the environment variable holding the API key. The key itself is
    /// read at client construction and never stored in configs or transcripts.
    pub api_key_env: Option<String>,
    pub timeout_secs: u64,
    pub max_retries: u32,
    pub temperature: f64,
    pub headers: Vec<(String, String)>,
}

impl Default for ChatEndpointConfig {
    fn default() -> Self {
        Self {
            base_url: "http://localhost:8000".into(),
            path: "/v1/chat/completions".into(),
            model_name: "gpt-4o".into(),
            api_key_env: None,
            timeout_secs: 60,
            max_retries: 2,
            temperature: 0.0,
            headers: Vec::new(),
        }
    }
}

pub struct RemoteReasoner {
    client: JsonClient,
    model: String,
    temperature: f64,
    tools: Vec<ToolDescription>,
}

impl std::fmt::Debug for RemoteReasoner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RemoteReasoner")
            .field("url", &self.client.url())
            .field("model", &self.model)
            .finish_non_exhaustive()
    }
}

impl RemoteReasoner {
    pub fn new(cfg: ChatEndpointConfig, tools: Vec<ToolDescription>) -> Result<Self, ReasonerError> {
        let url = format!("{}{}", cfg.base_url.trim_end_matches('/'), cfg.path);
        let mut ep = Endpoint::new(url);
        ep.timeout = Duration::from_secs(cfg.timeout_secs);
        ep.max_retries = cfg.max_retries;
        ep.headers = cfg.headers;
        if let Some(var) = &cfg.api_key_env {
            let key = std::env::var(var)
                .map_err(|_| ReasonerError::Config(format!("environment variable {var} is not set")))?;
            ep.headers.push(("Authorization".into(), format!("Bearer {key}")));
        }
        Ok(Self {
            client: JsonClient::new(ep).map_err(|e| ReasonerError::Config(e.to_string()))?,
            model: cfg.model_name,
            temperature: cfg.temperature,
            tools,
        })
    }

    #[cfg(test)]
    fn with_fast_backoff(mut self) -> Self {
        self.client = self.client.with_backoff(Duration::from_millis(1));
        self
    }

    fn tool_protocol(&self) -> String {
        format!(
            "Available tools:\n{}\n\nTo call a tool, reply with only a fenced JSON block:\n```json\n{{\"tool\": \"<name>\", \"arguments\": {{...}}}}\n```\nWhen no more tools are needed, reply with the final answer as plain text.",
            serde_json::to_string_pretty(&self.tools).unwrap_or_default()
        )
    }

    /// Chat transcript for `state`. Ground-truth labels are stripped from
    /// observations so evaluation runs cannot leak them to the model.
    pub fn messages(&self, state: &AgentState) -> Vec<Value> {
        let mut messages = vec![
            json!({"role": "system", "content": render_system_prompt()}),
            json!({"role": "system", "content": self.tool_protocol()}),
            json!({"role": "user", "content": state.query()}),
        ];
        for event in state.history() {
            match &event.kind {
                EventKind::Decision { tool, arguments } => {
                    let action = Action::ToolCall {
                        tool: tool.clone(),
                        arguments: arguments.clone(),
                    };
                    messages.push(json!({"role": "assistant", "content": render_action(&action)}));
                }
                EventKind::Observation(obs) => {
                    let content = match &obs.outcome {
                        Ok(v) => format!("Observation from tool `{}`:\n{}", obs.tool_name, strip_labels(v)),
                        Err(f) => format!("Tool `{}` failed: {}", obs.tool_name, f.message),
                    };
                    messages.push(json!({"role": "user", "content": content}));
                }
                EventKind::Final(_) => {}
            }
        }
        messages
    }
}

fn strip_labels(v: &Value) -> Value {
    match v {
        Value::Array(items) => Value::Array(items.iter().map(strip_labels).collect()),
        Value::Object(m) => Value::Object(
            m.iter()
                .filter(|(k, _)| k.as_str() != "doc_label")
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        ),
        other => other.clone(),
    }
}

impl Reasoner for RemoteReasoner {
    fn decide(&self, state: &AgentState) -> Result<Action, ReasonerError> {
        let body = json!({
            "model": self.model,
            "temperature": self.temperature,
            "messages": self.messages(state),
        });
        let reply = self
            .client
            .post_json(&body)
            .map_err(|e| ReasonerError::Transport(e.to_string()))?;
        let content = reply
            .pointer("/choices/0/message/content")
            .and_then(Value::as_str)
            .ok_or_else(|| ReasonerError::Parse("reply has no choices[0].message.content".into()))?;
        parse_model_reply(content).map_err(|e| ReasonerError::Parse(e.to_string()))
    }
}
