//! Bias classification of text spans, exposed to the agent as the `classify` tool.

mod aggregate;
mod lexicon;
mod remote;
mod tool;

use serde_json::{json, Value};

pub use aggregate::{aggregate, AggregateVerdict};
pub use lexicon::{sigmoid, Lexicon, LexiconDetector, DEFAULT_OFFSET, DEFAULT_SCALE};
pub use remote::{RemoteDetector, RemoteDetectorConfig};
pub use tool::{ClassifyTool, CLASSIFY_TOOL};

use crate::label::Label;

#[derive(Debug, thiserror::Error)]
pub enum DetectError {
    #[error("lexicon line {line}: {reason}")]
    Lexicon { line: usize, reason: String },
    #[error("remote detector failed: {0}")]
    Remote(String),
    #[error("invalid detector reply: {0}")]
    InvalidReply(String),
    #[error("cannot aggregate an empty verdict list")]
    EmptyAggregate,
    #[error("{0}")]
    Io(String),
}

/// Binary label plus the confidence in that label (always in `[0, 1]`).
#[derive(Debug, Clone, PartialEq)]
pub struct BiasVerdict {
    pub label: Label,
    pub probability: f64,
    pub detector_id: String,
}

impl BiasVerdict {
    /// Tool payload form: `["<label>", <probability>]`.
    pub fn to_payload(&self) -> Value {
        json!([self.label.as_str(), self.probability])
    }

    pub fn from_payload(v: &Value) -> Option<(Label, f64)> {
        let arr = v.as_array()?;
        let [label, p] = arr.as_slice() else { return None };
        let label = label.as_str()?.parse().ok()?;
        let p = p.as_f64().filter(|p| (0.0..=1.0).contains(p))?;
        Some((label, p))
    }
}

pub trait BiasDetector: Send + Sync {
    fn id(&self) -> &str;
    fn classify(&self, text: &str) -> Result<BiasVerdict, DetectError>;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn payload_mirrors_tool_message_shape() {
        let v = BiasVerdict {
            label: Label::Biased,
            probability: 0.7811554670333862,
            detector_id: "x".into(),
        };
        assert_eq!(v.to_payload().to_string(), r#"["Biased",0.7811554670333862]"#);
        assert_eq!(BiasVerdict::from_payload(&v.to_payload()), Some((Label::Biased, 0.7811554670333862)));
    }

    #[test]
    fn payload_parse_rejects_bad_shapes() {
        for bad in [json!(["Biased"]), json!(["Neutral", 0.5]), json!(["Biased", 1.5]), json!({"label": "Biased"})] {
            assert_eq!(BiasVerdict::from_payload(&bad), None, "{bad}");
        }
    }
}
