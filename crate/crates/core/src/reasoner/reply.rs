//! Text protocol between the engine and chat models: a fenced JSON block
//! requests a tool call, anything else is the final answer.

use serde_json::{json, Value};

use crate::engine::{Action, BiasLine, FinalAnswer, ToolArgs};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReplyParseError {
    #[error("empty model reply")]
    Empty,
    #[error("unterminated code fence")]
    UnterminatedFence,
    #[error("malformed tool call: {0}")]
    MalformedToolCall(String),
}

const FENCE: &str = "```";

/// Verdict phrases matched case-insensitively, without the trailing period.
const VERDICTS: [(&str, BiasLine); 2] = [
    ("this content contains bias", BiasLine::ContainsBias),
    ("this content appears unbiased", BiasLine::AppearsUnbiased),
];

/// Returns the body of the first fenced block whose info string is empty or
/// `json` and whose body looks like a JSON object.
fn tool_block(reply: &str) -> Result<Option<&str>, ReplyParseError> {
    let mut rest = reply;
    while let Some(open) = rest.find(FENCE) {
        let after = &rest[open + FENCE.len()..];
        let (info, body_start) = match after.find('\n') {
            Some(nl) => (after[..nl].trim(), &after[nl + 1..]),
            None => return Err(ReplyParseError::UnterminatedFence),
        };
        let close = body_start.find(FENCE).ok_or(ReplyParseError::UnterminatedFence)?;
        let body = body_start[..close].trim();
        if (info.is_empty() || info.eq_ignore_ascii_case("json")) && body.starts_with('{') {
            return Ok(Some(body));
        }
        rest = &body_start[close + FENCE.len()..];
    }
    Ok(None)
}

pub fn parse_model_reply(reply: &str) -> Result<Action, ReplyParseError> {
    if reply.trim().is_empty() {
        return Err(ReplyParseError::Empty);
    }
    if let Some(body) = tool_block(reply)? {
        let v: Value = serde_json::from_str(body).map_err(|e| ReplyParseError::MalformedToolCall(e.to_string()))?;
        let tool = v
            .get("tool")
            .and_then(Value::as_str)
            .ok_or_else(|| ReplyParseError::MalformedToolCall("missing string \"tool\"".into()))?;
        let arguments: ToolArgs = match v.get("arguments") {
            Some(Value::Object(m)) => m.clone(),
            _ => return Err(ReplyParseError::MalformedToolCall("\"arguments\" must be an object".into())),
        };
        return Ok(Action::ToolCall {
            tool: tool.to_string(),
            arguments,
        });
    }

    let lower = reply.to_ascii_lowercase();
    let found = VERDICTS
        .iter()
        .filter_map(|(phrase, line)| lower.find(phrase).map(|pos| (pos, phrase.len(), *line)))
        .min_by_key(|(pos, _, _)| *pos);
    let Some((pos, len, bias_line)) = found else {
        return Ok(Action::FinalAnswer(FinalAnswer {
            incomplete: true,
            ..FinalAnswer::new(reply.trim(), BiasLine::AppearsUnbiased)
        }));
    };
    let mut tail = &reply[pos + len..];
    tail = tail.strip_prefix('.').unwrap_or(tail);
    let analysis = tail.trim();
    Ok(Action::FinalAnswer(FinalAnswer {
        bias_analysis: (!analysis.is_empty()).then(|| analysis.to_string()),
        ..FinalAnswer::new(reply[..pos].trim(), bias_line)
    }))
}

/// Inverse of [`parse_model_reply`]: how a model would phrase `action`.
pub fn render_action(action: &Action) -> String {
    match action {
        Action::ToolCall { tool, arguments } => {
            format!("{FENCE}json\n{}\n{FENCE}", json!({"tool": tool, "arguments": arguments}))
        }
        Action::FinalAnswer(f) => {
            if f.incomplete {
                return f.answer.clone();
            }
            let mut out = String::new();
            if !f.answer.is_empty() {
                out.push_str(&f.answer);
                out.push_str("\n\n");
            }
            out.push_str(f.bias_line.sentence());
            if let Some(a) = &f.bias_analysis {
                out.push(' ');
                out.push_str(a);
            }
            out
        }
    }
}
