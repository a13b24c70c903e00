//! Text embedders: the hermetic hashed bag-of-words default and an HTTP client
//! for hosted embedding models.

use serde_json::{json, Value};

use super::RetrieverError;
use crate::http::{Endpoint, JsonClient};
use crate::text::{fnv1a64, tokenize};

pub const DEFAULT_DIM: usize = 256;

pub trait Embedder: Send + Sync {
    /// Stable identifier recorded in the store header.
    fn id(&self) -> String;
    fn dim(&self) -> usize;
    /// Returns an L2-normalized vector of length [`Embedder::dim`], or all zeros.
    fn embed(&self, text: &str) -> Result<Vec<f64>, RetrieverError>;
}

/// Signed feature hashing of lowercase alphanumeric tokens.
#[derive(Debug, Clone)]
pub struct HashedEmbedder {
    dim: usize,
}

impl HashedEmbedder {
    pub fn new(dim: usize) -> Result<Self, RetrieverError> {
        if dim == 0 {
            return Err(RetrieverError::Config("embedding dimension must be positive".into()));
        }
        Ok(Self { dim })
    }
}

impl Default for HashedEmbedder {
    fn default() -> Self {
        Self { dim: DEFAULT_DIM }
    }
}

impl Embedder for HashedEmbedder {
    fn id(&self) -> String {
        format!("hashed-fnv1a-{}", self.dim)
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn embed(&self, text: &str) -> Result<Vec<f64>, RetrieverError> {
        let mut v = vec![0.0; self.dim];
        for token in tokenize(text) {
            let h = fnv1a64(&token);
            let idx = (h % self.dim as u64) as usize;
            v[idx] += if h >> 63 == 0 { 1.0 } else { -1.0 };
        }
        l2_normalize(&mut v);
        Ok(v)
    }
}

/// Scales `v` to unit length in place; all-zero vectors are left untouched.
pub fn l2_normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

/// Cosine similarity, defined as 0 when either side is the zero vector.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// Cosine distance clamped to `[0, 2]`.
pub fn cosine_distance(a: &[f64], b: &[f64]) -> f64 {
    (1.0 - cosine(a, b)).clamp(0.0, 2.0)
}

#[derive(Debug, Clone)]
pub struct RemoteEmbedderConfig {
    pub url: String,
    pub model: String,
    pub dim: usize,
    pub api_key: Option<String>,
    pub timeout_secs: u64,
    pub max_retries: u32,
}

/// Embedding endpoint speaking the common `{"model","input"}` ->
/// `{"data":[{"embedding":[..]}]}` shape. A bare `{"embedding":[..]}` reply is
/// also accepted.
#[derive(Debug)]
pub struct RemoteEmbedder {
    model: String,
    dim: usize,
    client: JsonClient,
}

impl RemoteEmbedder {
    pub fn new(cfg: RemoteEmbedderConfig) -> Result<Self, RetrieverError> {
        if cfg.dim == 0 {
            return Err(RetrieverError::Config("embedding dimension must be positive".into()));
        }
        let mut ep = Endpoint::new(cfg.url);
        ep.timeout = std::time::Duration::from_secs(cfg.timeout_secs);
        ep.max_retries = cfg.max_retries;
        if let Some(key) = cfg.api_key {
            ep.headers.push(("Authorization".into(), format!("Bearer {key}")));
        }
        let client = JsonClient::new(ep).map_err(|e| RetrieverError::Embed(e.to_string()))?;
        Ok(Self {
            model: cfg.model,
            dim: cfg.dim,
            client,
        })
    }

    #[cfg(test)]
    fn with_fast_backoff(mut self) -> Self {
        self.client = self.client.with_backoff(std::time::Duration::from_millis(1));
        self
    }
}

fn extract_vector(reply: &Value) -> Option<Vec<f64>> {
    let arr = reply
        .pointer("/data/0/embedding")
        .or_else(|| reply.get("embedding"))?
        .as_array()?;
    arr.iter().map(Value::as_f64).collect()
}

impl Embedder for RemoteEmbedder {
    fn id(&self) -> String {
        format!("remote:{}", self.model)
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn embed(&self, text: &str) -> Result<Vec<f64>, RetrieverError> {
        let reply = self
            .client
            .post_json(&json!({"model": self.model, "input": text}))
            .map_err(|e| RetrieverError::Embed(e.to_string()))?;
        let mut v = extract_vector(&reply)
            .ok_or_else(|| RetrieverError::Embed(format!("{}: reply has no embedding array", self.client.url())))?;
        if v.len() != self.dim {
            return Err(RetrieverError::Dimension {
                expected: self.dim,
                found: v.len(),
            });
        }
        l2_normalize(&mut v);
        Ok(v)
    }
}
