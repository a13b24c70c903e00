use std::time::Duration;

use serde_json::json;

use super::{BiasDetector, BiasVerdict, DetectError};
use crate::http::{Endpoint, JsonClient};
use crate::label::Label;

#[derive(Debug, Clone)]
pub struct RemoteDetectorConfig {
    pub url: String,
    pub timeout_secs: u64,
    pub max_retries: u32,
}

/// Hosted classifier: POST `{"text"}` -> `{"label": "Biased"|"Non-biased", "score"}`.
/// `score` is taken as the confidence in the returned label.
#[derive(Debug)]
pub struct RemoteDetector {
    client: JsonClient,
    id: String,
}

impl RemoteDetector {
    pub fn new(cfg: RemoteDetectorConfig) -> Result<Self, DetectError> {
        let mut ep = Endpoint::new(cfg.url.clone());
        ep.timeout = Duration::from_secs(cfg.timeout_secs);
        ep.max_retries = cfg.max_retries;
        let client = JsonClient::new(ep).map_err(|e| DetectError::Remote(e.to_string()))?;
        Ok(Self {
            client,
            id: format!("remote:{}", cfg.url),
        })
    }

    #[cfg(test)]
    fn with_fast_backoff(mut self) -> Self {
        self.client = self.client.with_backoff(Duration::from_millis(1));
        self
    }
}

impl BiasDetector for RemoteDetector {
    fn id(&self) -> &str {
        &self.id
    }

    fn classify(&self, text: &str) -> Result<BiasVerdict, DetectError> {
        let reply = self
            .client
            .post_json(&json!({"text": text}))
            .map_err(|e| DetectError::Remote(e.to_string()))?;
        let label: Label = reply
            .get("label")
            .and_then(|l| l.as_str())
            .ok_or_else(|| DetectError::InvalidReply(format!("missing label in {reply}")))?
            .parse()
            .map_err(|e| DetectError::InvalidReply(format!("{e}")))?;
        let probability = reply
            .get("score")
            .and_then(|s| s.as_f64())
            .filter(|s| (0.0..=1.0).contains(s))
            .ok_or_else(|| DetectError::InvalidReply(format!("score missing or outside [0,1] in {reply}")))?;
        Ok(BiasVerdict {
            label,
            probability,
            detector_id: self.id.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::http::testserver::{serve, Reply};

    fn detector(url: String, retries: u32) -> RemoteDetector {
        RemoteDetector::new(RemoteDetectorConfig {
            url,
            timeout_secs: 5,
            max_retries: retries,
        })
        .unwrap()
        .with_fast_backoff()
    }

    #[test]
    fn parses_reply() {
        let (url, seen) = serve(vec![Reply::ok(r#"{"label":"Non-biased","score":0.7738906145095825}"#)]);
        let v = detector(url, 0).classify("The head of the WHO said").unwrap();
        assert_eq!(v.label, Label::NonBiased);
        assert_eq!(v.probability, 0.7738906145095825);
        assert_eq!(seen.lock().unwrap()[0].body, r#"{"text":"The head of the WHO said"}"#);
    }

    #[test]
    fn invalid_replies_rejected() {
        for body in [r#"{"label":"maybe","score":0.5}"#, r#"{"label":"Biased","score":1.2}"#, r#"{"label":"Biased"}"#] {
            let (url, _) = serve(vec![Reply::ok(body)]);
            assert!(matches!(detector(url, 0).classify("x"), Err(DetectError::InvalidReply(_))), "{body}");
        }
    }

    #[test]
    fn transport_failure_after_retries() {
        let (url, seen) = serve(vec![Reply::status(502), Reply::status(502), Reply::status(502)]);
        assert!(matches!(detector(url, 2).classify("x"), Err(DetectError::Remote(_))));
        assert_eq!(seen.lock().unwrap().len(), 3);
    }
}
