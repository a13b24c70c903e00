//! Evaluation harness: runs a query set through the agent, recovers verdicts
//! and ground truth from the transcripts, and scores them.

mod export;
mod metrics;
mod parse;
mod queries;
pub mod reference;
mod report;

pub use export::{
    export, export_csvs, export_json, load_report, render_csvs, render_json, CONFIDENCE_CSV, CONFUSION_CSV,
    METRICS_CSV, MIXED_CSV, REPORT_JSON, STYLE_CSV,
};
pub use metrics::{confusion, f1, mean_confidence, metrics, Averages, ClassMetrics, ConfusionMatrix, Metrics};
pub use parse::{parse_transcript, EvalCase, LabelIndex, SkippedCase, Source};
pub use queries::{bundled_queries, parse_queries, read_queries, QueryCase, QueryStyle};
pub use report::{
    assemble_report, run_eval, ConfidencePoint, EvalReport, EvalRun, EvalSetup, MixedSourceRecord, QueryOutcome,
    RunFailure, StyleBreakdown,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("query file line {line}: {reason}")]
    Queries { line: usize, reason: String },
    #[error("no confidence points to average")]
    NoConfidencePoints,
    #[error("unreadable report: {0}")]
    Report(String),
    #[error("i/o error: {0}")]
    Io(String),
}
