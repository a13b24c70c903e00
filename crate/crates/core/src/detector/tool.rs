use std::sync::Arc;

use serde_json::Value;

use super::{BiasDetector, DetectError};
use crate::engine::{FailureKind, ParamSpec, ToolArgs, ToolFailure, ToolHandler, ToolSpec};

pub const CLASSIFY_TOOL: &str = "classify";

/// `classify(text: string)` returning `["<label>", <probability>]`.
#[derive(Clone)]
pub struct ClassifyTool {
    detector: Arc<dyn BiasDetector>,
}

impl ClassifyTool {
    pub fn new(detector: Arc<dyn BiasDetector>) -> Self {
        Self { detector }
    }

    pub fn spec(self) -> ToolSpec {
        ToolSpec {
            name: CLASSIFY_TOOL.into(),
            description: "Classify a passage as Biased or Non-biased with a confidence probability.".into(),
            params: vec![ParamSpec::string("text", "passage to classify")],
            handler: Arc::new(self),
        }
    }
}

impl ToolHandler for ClassifyTool {
    fn call(&self, args: &ToolArgs) -> Result<Value, ToolFailure> {
        let text = args["text"].as_str().unwrap_or_default();
        self.detector.classify(text).map(|v| v.to_payload()).map_err(|e| {
            let kind = match e {
                DetectError::Remote(_) => FailureKind::Remote,
                _ => FailureKind::Data,
            };
            ToolFailure::new(kind, e.to_string())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detector::{BiasVerdict, Lexicon, LexiconDetector};
    use crate::engine::ToolRegistry;
    use serde_json::json;

    #[test]
    fn empty_text_matches_direct_classify() {
        let det = Arc::new(LexiconDetector::new(Lexicon::parse("radical 2.0\ndisaster 1.5").unwrap()));
        let r = ToolRegistry::builder()
            .register(ClassifyTool::new(det.clone()).spec())
            .unwrap()
            .build();
        let o = r.dispatch(CLASSIFY_TOOL, json!({"text": ""}).as_object().unwrap(), 1);
        assert_eq!(o.result(), Some(&det.classify("").unwrap().to_payload()));
        let (label, p) = BiasVerdict::from_payload(o.result().unwrap()).unwrap();
        assert_eq!(label, crate::label::Label::NonBiased);
        assert!((p - 0.7311).abs() < 1e-4);
    }
}
