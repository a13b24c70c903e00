//! `biasaware.toml`: one flat table of run settings plus an optional
//! sub-table per pluggable component. Every field has a hermetic default.

use std::path::{Path, PathBuf};

use biasaware::reasoner::ChatEndpointConfig;
use biasaware::retriever::{DEFAULT_CHUNK_SIZE, DEFAULT_DIM, DEFAULT_K, DEFAULT_OVERLAP};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AppConfig {
    pub store_path: PathBuf,
    pub chunk_size: usize,
    pub overlap: usize,
    pub k: usize,
    pub step_budget: u32,
    pub output_dir: PathBuf,
    pub embedder: EmbedderConfig,
    pub detector: DetectorConfig,
    pub reasoner: ReasonerConfig,
}

impl Default for AppConfig {
    fn default() -> Self {
        Self {
            store_path: PathBuf::from("biasaware-store.jsonl"),
            chunk_size: DEFAULT_CHUNK_SIZE,
            overlap: DEFAULT_OVERLAP,
            k: DEFAULT_K,
            step_budget: 10,
            output_dir: PathBuf::from("biasaware-out"),
            embedder: EmbedderConfig::default(),
            detector: DetectorConfig::default(),
            reasoner: ReasonerConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum EmbedderConfig {
    Hashed {
        #[serde(default = "default_dim")]
        dim: usize,
    },
    Remote {
        url: String,
        model: String,
        dim: usize,
        /// Environment variable holding the API key.
        key_env: Option<String>,
        #[serde(default = "default_timeout")]
        timeout_secs: u64,
        #[serde(default = "default_retries")]
        max_retries: u32,
    },
}

impl Default for EmbedderConfig {
    fn default() -> Self {
        EmbedderConfig::Hashed { dim: DEFAULT_DIM }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DetectorConfig {
    /// `path` absent means the built-in lexicon.
    Lexicon { path: Option<PathBuf> },
    Remote {
        url: String,
        #[serde(default = "default_timeout")]
        timeout_secs: u64,
        #[serde(default = "default_retries")]
        max_retries: u32,
    },
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig::Lexicon { path: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Scripted,
    Llm,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReasonerConfig {
    pub mode: Mode,
    /// Required when `mode = "llm"`.
    pub llm: Option<LlmConfig>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LlmConfig {
    pub base_url: String,
    #[serde(default = "default_chat_path")]
    pub path: String,
    pub model_name: String,
    pub api_key_env: Option<String>,
    #[serde(default = "default_timeout")]
    pub timeout_secs: u64,
    #[serde(default = "default_retries")]
    pub max_retries: u32,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default)]
    pub headers: Vec<(String, String)>,
}

impl From<&LlmConfig> for ChatEndpointConfig {
    fn from(c: &LlmConfig) -> Self {
        ChatEndpointConfig {
            base_url: c.base_url.clone(),
            path: c.path.clone(),
            model_name: c.model_name.clone(),
            api_key_env: c.api_key_env.clone(),
            timeout_secs: c.timeout_secs,
            max_retries: c.max_retries,
            temperature: c.temperature,
            headers: c.headers.clone(),
        }
    }
}

fn default_dim() -> usize {
    DEFAULT_DIM
}

fn default_timeout() -> u64 {
    60
}

fn default_retries() -> u32 {
    2
}

fn default_chat_path() -> String {
    ChatEndpointConfig::default().path
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub store_path: Option<PathBuf>,
    pub chunk_size: Option<usize>,
    pub overlap: Option<usize>,
    pub k: Option<usize>,
    pub step_budget: Option<u32>,
    pub output_dir: Option<PathBuf>,
    pub mode: Option<Mode>,
}

impl AppConfig {
    pub fn parse(src: &str) -> Result<Self, CliError> {
        toml::from_str(src).map_err(|e| CliError::Usage(format!("invalid config: {e}")))
    }

    /// Reads `path` if given, otherwise starts from defaults.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let src = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", p.display())))?;
                Self::parse(&src)
            }
        }
    }

    pub fn apply(mut self, o: Overrides) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = o.$f { self.$f = v; } )* };
        }
        take!(store_path, chunk_size, overlap, k, step_budget, output_dir);
        if let Some(m) = o.mode {
            self.reasoner.mode = m;
        }
        self
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let positive = [
            ("chunk_size", self.chunk_size),
            ("k", self.k),
            ("step_budget", self.step_budget as usize),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(CliError::Usage(format!("{name} must be positive")));
            }
        }
        if self.overlap >= self.chunk_size {
            return Err(CliError::Usage(format!(
                "overlap ({}) must be smaller than chunk_size ({})",
                self.overlap, self.chunk_size
            )));
        }
        match &self.embedder {
            EmbedderConfig::Hashed { dim } | EmbedderConfig::Remote { dim, .. } if *dim == 0 => {
                return Err(CliError::Usage("embedder dim must be positive".into()));
            }
            _ => {}
        }
        if let DetectorConfig::Lexicon { path: Some(p) } = &self.detector {
            if !p.is_file() {
                return Err(CliError::Usage(format!("lexicon file {} does not exist", p.display())));
            }
        }
        if self.reasoner.mode == Mode::Llm && self.reasoner.llm.is_none() {
            return Err(CliError::Usage("mode llm needs a [reasoner.llm] section".into()));
        }
        Ok(())
    }
}
