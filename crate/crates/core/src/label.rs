//! Binary bias label shared by documents, detector verdicts and evaluation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Binary bias label. `Biased` is the positive class everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "Biased")]
    Biased,
    #[serde(rename = "Non-biased")]
    NonBiased,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Biased => "Biased",
            Label::NonBiased => "Non-biased",
        }
    }

    /// Short form used in the mixed-source table ("Bias" / "Non-Bias").
    pub fn short(self) -> &'static str {
        match self {
            Label::Biased => "Bias",
            Label::NonBiased => "Non-Bias",
        }
    }

    pub fn is_biased(self) -> bool {
        self == Label::Biased
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown bias label {0:?}")]
pub struct UnknownLabel(pub String);

impl FromStr for Label {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Biased" => Ok(Label::Biased),
            "Non-biased" => Ok(Label::NonBiased),
            other => Err(UnknownLabel(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serde_uses_corpus_spelling() {
        assert_eq!(serde_json::to_string(&Label::NonBiased).unwrap(), "\"Non-biased\"");
        let l: Label = serde_json::from_str("\"Biased\"").unwrap();
        assert_eq!(l, Label::Biased);
        assert!(serde_json::from_str::<Label>("\"biased\"").is_err());
    }

    #[test]
    fn parse_round_trip() {
        for l in [Label::Biased, Label::NonBiased] {
            assert_eq!(l.as_str().parse::<Label>().unwrap(), l);
        }
        assert!("Unbiased".parse::<Label>().is_err());
    }
}
