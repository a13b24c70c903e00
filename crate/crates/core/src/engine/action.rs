use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};

pub const CONTAINS_BIAS: &str = "This content contains bias.";
pub const APPEARS_UNBIASED: &str = "This content appears unbiased.";

/// Validated tool arguments, always a JSON object.
pub type ToolArgs = Map<String, Value>;

/// The closing verdict sentence of every answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BiasLine {
    ContainsBias,
    AppearsUnbiased,
}

impl BiasLine {
    pub fn sentence(self) -> &'static str {
        match self {
            BiasLine::ContainsBias => CONTAINS_BIAS,
            BiasLine::AppearsUnbiased => APPEARS_UNBIASED,
        }
    }

    pub fn from_sentence(s: &str) -> Option<Self> {
        match s {
            CONTAINS_BIAS => Some(BiasLine::ContainsBias),
            APPEARS_UNBIASED => Some(BiasLine::AppearsUnbiased),
            _ => None,
        }
    }

    pub fn is_biased(self) -> bool {
        self == BiasLine::ContainsBias
    }
}

impl fmt::Display for BiasLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.sentence())
    }
}

impl Serialize for BiasLine {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.sentence())
    }
}

impl<'de> Deserialize<'de> for BiasLine {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        BiasLine::from_sentence(&s).ok_or_else(|| serde::de::Error::custom(format!("not a verdict sentence: {s:?}")))
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalAnswer {
    pub answer: String,
    pub bias_line: BiasLine,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bias_analysis: Option<String>,
    /// Set when the answer lacks a real verdict (no sentence found, no verdicts
    /// gathered, or the step budget ran out).
    #[serde(default, skip_serializing_if = "is_false")]
    pub incomplete: bool,
    /// Aggregate confidence in the verdict, when the reasoner computed one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence: Option<f64>,
    /// Synthesized by the engine rather than decided by the reasoner.
    #[serde(default, skip_serializing_if = "is_false")]
    pub budget_exhausted: bool,
}

pub const BUDGET_EXHAUSTED_ANSWER: &str = "Unable to complete analysis within step budget.";

impl FinalAnswer {
    pub fn new(answer: impl Into<String>, bias_line: BiasLine) -> Self {
        Self {
            answer: answer.into(),
            bias_line,
            bias_analysis: None,
            incomplete: false,
            confidence: None,
            budget_exhausted: false,
        }
    }

    pub fn budget_exhausted() -> Self {
        Self {
            incomplete: true,
            budget_exhausted: true,
            ..Self::new(BUDGET_EXHAUSTED_ANSWER, BiasLine::AppearsUnbiased)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    ToolCall { tool: String, arguments: ToolArgs },
    FinalAnswer(FinalAnswer),
}

impl Action {
    pub fn tool_call(tool: impl Into<String>, arguments: Value) -> Self {
        let arguments = match arguments {
            Value::Object(m) => m,
            Value::Null => Map::new(),
            other => {
                let mut m = Map::new();
                m.insert("value".into(), other);
                m
            }
        };
        Action::ToolCall {
            tool: tool.into(),
            arguments,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bias_line_serializes_as_sentence() {
        assert_eq!(
            serde_json::to_string(&BiasLine::ContainsBias).unwrap(),
            "\"This content contains bias.\""
        );
        assert!(serde_json::from_str::<BiasLine>("\"biased\"").is_err());
    }

    #[test]
    fn budget_exhausted_answer_shape() {
        let f = FinalAnswer::budget_exhausted();
        assert_eq!(f.answer, "Unable to complete analysis within step budget.");
        assert_eq!(f.bias_line.sentence(), "This content appears unbiased.");
        assert!(f.incomplete && f.budget_exhausted && f.bias_analysis.is_none());
    }

    #[test]
    fn final_answer_omits_default_flags() {
        let json = serde_json::to_string(&FinalAnswer::new("a", BiasLine::AppearsUnbiased)).unwrap();
        assert_eq!(json, r#"{"answer":"a","bias_line":"This content appears unbiased."}"#);
    }
}
