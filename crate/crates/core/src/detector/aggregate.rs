use serde::{Deserialize, Serialize};

use super::{BiasVerdict, DetectError};
use crate::label::Label;

/// Majority vote over per-chunk verdicts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateVerdict {
    pub label: Label,
    /// Mean probability of the verdicts agreeing with `label`, rounded to 4 decimals.
    pub probability: f64,
    pub biased: usize,
    pub non_biased: usize,
    pub disagreement: bool,
}

/// Majority label with ties going to `Biased`.
pub fn aggregate(verdicts: &[BiasVerdict]) -> Result<AggregateVerdict, DetectError> {
    if verdicts.is_empty() {
        return Err(DetectError::EmptyAggregate);
    }
    let biased = verdicts.iter().filter(|v| v.label.is_biased()).count();
    let non_biased = verdicts.len() - biased;
    let label = if biased >= non_biased { Label::Biased } else { Label::NonBiased };
    let agreeing: Vec<f64> = verdicts.iter().filter(|v| v.label == label).map(|v| v.probability).collect();
    let mean = agreeing.iter().sum::<f64>() / agreeing.len() as f64;
    Ok(AggregateVerdict {
        label,
        probability: (mean * 1e4).round() / 1e4,
        biased,
        non_biased,
        disagreement: biased > 0 && non_biased > 0,
    })
}
