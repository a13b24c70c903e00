//! Classification metrics with Biased as the positive class. Any 0/0 ratio is 0.

use serde::{Deserialize, Serialize};

use super::parse::EvalCase;
use super::EvalError;
use crate::label::Label;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionMatrix {
    pub fn new(tp: u64, fp: u64, fn_: u64, tn: u64) -> Self {
        Self { tp, fp, fn_, tn }
    }

    pub fn record(&mut self, actual: Label, predicted: Label) {
        match (actual, predicted) {
            (Label::Biased, Label::Biased) => self.tp += 1,
            (Label::Biased, Label::NonBiased) => self.fn_ += 1,
            (Label::NonBiased, Label::Biased) => self.fp += 1,
            (Label::NonBiased, Label::NonBiased) => self.tn += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

/// Tallies non-mixed cases. Cases without a ground truth are ignored.
pub fn confusion<'a>(cases: impl IntoIterator<Item = &'a EvalCase>) -> ConfusionMatrix {
    let mut m = ConfusionMatrix::default();
    for case in cases {
        if let Some(actual) = case.ground_truth {
            m.record(actual, case.predicted);
        }
    }
    m
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

impl ClassMetrics {
    pub fn from_precision_recall(precision: f64, recall: f64, support: u64) -> Self {
        Self {
            precision,
            recall,
            f1: f1(precision, recall),
            support,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Averages {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Averages {
    pub fn macro_of(a: &ClassMetrics, b: &ClassMetrics) -> Self {
        Self {
            precision: (a.precision + b.precision) / 2.0,
            recall: (a.recall + b.recall) / 2.0,
            f1: (a.f1 + b.f1) / 2.0,
        }
    }

    pub fn weighted_of(a: &ClassMetrics, b: &ClassMetrics) -> Self {
        let total = (a.support + b.support) as f64;
        let w = |x: f64, y: f64| {
            if total == 0.0 {
                0.0
            } else {
                (x * a.support as f64 + y * b.support as f64) / total
            }
        };
        Self {
            precision: w(a.precision, b.precision),
            recall: w(a.recall, b.recall),
            f1: w(a.f1, b.f1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub biased: ClassMetrics,
    pub non_biased: ClassMetrics,
    pub macro_avg: Averages,
    pub weighted_avg: Averages,
}

pub fn metrics(m: &ConfusionMatrix) -> Metrics {
    let biased = ClassMetrics::from_precision_recall(ratio(m.tp, m.tp + m.fp), ratio(m.tp, m.tp + m.fn_), m.tp + m.fn_);
    let non_biased =
        ClassMetrics::from_precision_recall(ratio(m.tn, m.tn + m.fn_), ratio(m.tn, m.tn + m.fp), m.tn + m.fp);
    Metrics {
        macro_avg: Averages::macro_of(&biased, &non_biased),
        weighted_avg: Averages::weighted_of(&biased, &non_biased),
        biased,
        non_biased,
    }
}

pub fn mean_confidence(points: &[f64]) -> Result<f64, EvalError> {
    if points.is_empty() {
        return Err(EvalError::NoConfidencePoints);
    }
    Ok(points.iter().sum::<f64>() / points.len() as f64)
}
