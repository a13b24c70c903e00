//! Blocking JSON-over-HTTP helper with bounded retries, shared by the remote
//! embedder, detector and reasoner clients.

use std::time::Duration;

use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum HttpError {
    #[error("request to {url} failed after {attempts} attempt(s): {reason}")]
    Exhausted {
        url: String,
        attempts: u32,
        reason: String,
    },
    #[error("request to {url} rejected with status {status}: {body}")]
    Rejected { url: String, status: u16, body: String },
    #[error("invalid response body from {url}: {reason}")]
    InvalidBody { url: String, reason: String },
    #[error("client setup failed: {0}")]
    Setup(String),
}

/// Connection settings for one remote endpoint.
#[derive(Debug, Clone)]
pub struct Endpoint {
    pub url: String,
    pub timeout: Duration,
    pub max_retries: u32,
    /// Extra request headers, e.g. `Authorization`. Never logged.
    pub headers: Vec<(String, String)>,
}

impl Endpoint {
    pub fn new(url: impl Into<String>) -> Self {
        Self {
            url: url.into(),
            timeout: Duration::from_secs(30),
            max_retries: 2,
            headers: Vec::new(),
        }
    }
}

pub struct JsonClient {
    endpoint: Endpoint,
    client: reqwest::blocking::Client,
    backoff: Duration,
}

impl std::fmt::Debug for JsonClient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("JsonClient").field("url", &self.endpoint.url).finish()
    }
}

impl JsonClient {
    pub fn new(endpoint: Endpoint) -> Result<Self, HttpError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(endpoint.timeout)
            .build()
            .map_err(|e| HttpError::Setup(e.to_string()))?;
        Ok(Self {
            endpoint,
            client,
            backoff: Duration::from_millis(200),
        })
    }

    #[cfg(test)]
    pub fn with_backoff(mut self, backoff: Duration) -> Self {
        self.backoff = backoff;
        self
    }

    pub fn url(&self) -> &str {
        &self.endpoint.url
    }

    /// POSTs `body` and returns the parsed JSON reply. Transport errors, 429 and
    /// 5xx responses are retried up to `max_retries` times; other 4xx fail at once.
    pub fn post_json(&self, body: &Value) -> Result<Value, HttpError> {
        let url = &self.endpoint.url;
        let attempts = self.endpoint.max_retries + 1;
        let mut last_reason = String::new();
        for attempt in 0..attempts {
            if attempt > 0 {
                std::thread::sleep(self.backoff * 2u32.saturating_pow(attempt - 1));
            }
            let mut req = self.client.post(url).json(body);
            for (k, v) in &self.endpoint.headers {
                req = req.header(k.as_str(), v.as_str());
            }
            match req.send() {
                Ok(resp) => {
                    let status = resp.status();
                    let text = resp.text().unwrap_or_default();
                    if status.is_success() {
                        return serde_json::from_str(&text).map_err(|e| HttpError::InvalidBody {
                            url: url.clone(),
                            reason: e.to_string(),
                        });
                    }
                    if status.as_u16() == 429 || status.is_server_error() {
                        log::warn!("{url}: status {status} (attempt {})", attempt + 1);
                        last_reason = format!("status {status}");
                        continue;
                    }
                    return Err(HttpError::Rejected {
                        url: url.clone(),
                        status: status.as_u16(),
                        body: truncate(&text, 200),
                    });
                }
                Err(e) => {
                    log::warn!("{url}: {e} (attempt {})", attempt + 1);
                    last_reason = e.to_string();
                }
            }
        }
        Err(HttpError::Exhausted {
            url: url.clone(),
            attempts,
            reason: last_reason,
        })
    }
}

fn truncate(s: &str, max: usize) -> String {
    match s.char_indices().nth(max) {
        Some((i, _)) => format!("{}...", &s[..i]),
        None => s.to_string(),
    }
}
