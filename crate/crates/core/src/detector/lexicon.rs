//! Weighted cue-term lexicon and the logistic detector built on it.

use std::collections::BTreeMap;
use std::path::Path;

use super::{BiasDetector, BiasVerdict, DetectError};
use crate::label::Label;
use crate::text::tokenize;

pub const DEFAULT_SCALE: f64 = 1.0;
pub const DEFAULT_OFFSET: f64 = -1.0;

/// Cue terms with positive weights plus the logistic parameters `a` (scale)
/// and `b` (offset): `p_bias = 1 / (1 + exp(-(a*s + b)))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    entries: BTreeMap<String, f64>,
    scale: f64,
    offset: f64,
}

impl Lexicon {
    pub fn new(entries: impl IntoIterator<Item = (String, f64)>, scale: f64, offset: f64) -> Result<Self, DetectError> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(DetectError::Lexicon { line: 0, reason: format!("scale must be positive, got {scale}") });
        }
        if !offset.is_finite() {
            return Err(DetectError::Lexicon { line: 0, reason: "offset must be finite".into() });
        }
        let mut map = BTreeMap::new();
        for (term, weight) in entries {
            validate_entry(&term, weight).map_err(|reason| DetectError::Lexicon { line: 0, reason })?;
            if map.insert(term.clone(), weight).is_some() {
                return Err(DetectError::Lexicon { line: 0, reason: format!("duplicate term {term:?}") });
            }
        }
        Ok(Self { entries: map, scale, offset })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn weight(&self, term: &str) -> Option<f64> {
        self.entries.get(term).copied()
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Sum of weights over every token occurrence that is a lexicon term.
    pub fn score(&self, text: &str) -> f64 {
        tokenize(text).iter().filter_map(|t| self.entries.get(t)).sum()
    }

    pub fn p_bias(&self, text: &str) -> f64 {
        sigmoid(self.scale * self.score(text) + self.offset)
    }

    /// Parses the `term weight` format: `#` comments, blank lines, and
    /// optional `@a <float>` / `@b <float>` parameter lines.
    pub fn parse(src: &str) -> Result<Self, DetectError> {
        let mut entries: BTreeMap<String, f64> = BTreeMap::new();
        let (mut scale, mut offset) = (DEFAULT_SCALE, DEFAULT_OFFSET);
        for (i, raw) in src.lines().enumerate() {
            let line_no = i + 1;
            let err = |reason: String| DetectError::Lexicon { line: line_no, reason };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [key, value] = fields[..] else {
                return Err(err(format!("expected `term weight`, got {line:?}")));
            };
            let value: f64 = value.parse().map_err(|_| err(format!("invalid number {value:?}")))?;
            match key {
                "@a" => scale = value,
                "@b" => offset = value,
                k if k.starts_with('@') => return Err(err(format!("unknown parameter {k:?}"))),
                term => {
                    let term = term.to_lowercase();
                    validate_entry(&term, value).map_err(err)?;
                    if entries.insert(term.clone(), value).is_some() {
                        return Err(err(format!("duplicate term {term:?}")));
                    }
                }
            }
        }
        Self::new(entries, scale, offset).map_err(|e| match e {
            DetectError::Lexicon { reason, .. } => DetectError::Lexicon { line: 0, reason },
            other => other,
        })
    }

    pub fn load(path: &Path) -> Result<Self, DetectError> {
        let src = std::fs::read_to_string(path).map_err(|e| DetectError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&src)
    }

    /// The cue lexicon bundled with the crate.
    pub fn builtin() -> Self {
        Self::parse(include_str!("../../resources/bias_lexicon.txt")).expect("bundled lexicon is valid")
    }
}

fn validate_entry(term: &str, weight: f64) -> Result<(), String> {
    if term.is_empty() || tokenize(term) != [term] {
        return Err(format!("term {term:?} must be a single lowercase alphanumeric token"));
    }
    if !(weight.is_finite() && weight > 0.0) {
        return Err(format!("weight for {term:?} must be positive, got {weight}"));
    }
    Ok(())
}

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

#[derive(Debug, Clone)]
pub struct LexiconDetector {
    lexicon: Lexicon,
}

impl LexiconDetector {
    pub fn new(lexicon: Lexicon) -> Self {
        Self { lexicon }
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }
}

impl BiasDetector for LexiconDetector {
    fn id(&self) -> &str {
        "lexicon"
    }

    fn classify(&self, text: &str) -> Result<BiasVerdict, DetectError> {
        let p = self.lexicon.p_bias(text);
        let label = if p > 0.5 { Label::Biased } else { Label::NonBiased };
        let probability = if label.is_biased() { p } else { 1.0 - p };
        Ok(BiasVerdict {
            label,
            probability,
            detector_id: self.id().to_string(),
        })
    }
}
