use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::metrics::{confusion, mean_confidence, Averages, ClassMetrics, ConfusionMatrix, Metrics};
use super::parse::{parse_transcript, EvalCase, LabelIndex, SkippedCase};
use super::queries::{QueryCase, QueryStyle};
use crate::engine::{run_agent, RunRequest, ToolRegistry, Transcript};
use crate::label::Label;
use crate::reasoner::Reasoner;

/// One row of the mixed-source table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedSourceRecord {
    pub query_id: String,
    pub biased: usize,
    pub non_biased: usize,
    /// Sources without a ground-truth label.
    pub no_agreement: usize,
    pub prediction: Label,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidencePoint {
    pub query_id: String,
    pub probability: f64,
    pub correct: bool,
}

/// Sources used by queries of one style, across mixed and single-alignment cases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StyleBreakdown {
    pub style: QueryStyle,
    pub queries: usize,
    pub biased_sources: usize,
    pub non_biased_sources: usize,
    pub unlabeled_sources: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunFailure {
    pub query_id: String,
    pub reason: String,
    pub remote: bool,
}

/// Everything the evaluation produces, free of run ids and timestamps so
/// identical runs serialize identically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub biased: ClassMetrics,
    pub non_biased: ClassMetrics,
    pub macro_avg: Averages,
    pub weighted_avg: Averages,
    pub matrix: ConfusionMatrix,
    pub cases: Vec<EvalCase>,
    pub mixed_cases: Vec<MixedSourceRecord>,
    pub confidence_points: Vec<ConfidencePoint>,
    pub mean_confidence: Option<f64>,
    pub style_breakdown: Vec<StyleBreakdown>,
    pub skipped: Vec<SkippedCase>,
    pub failures: Vec<RunFailure>,
}

impl EvalReport {
    pub fn metrics(&self) -> Metrics {
        Metrics {
            biased: self.biased,
            non_biased: self.non_biased,
            macro_avg: self.macro_avg,
            weighted_avg: self.weighted_avg,
        }
    }

    /// Queries that produced a mixed or single-alignment case.
    pub fn evaluated(&self) -> usize {
        self.cases.len()
    }
}

/// What happened to one query.
#[derive(Debug, Clone)]
pub enum QueryOutcome {
    Ran(Transcript),
    /// The engine refused to start the run.
    Rejected(String),
}

/// Builds the report from per-query outcomes. Order of `runs` does not matter.
pub fn assemble_report(runs: &[(QueryCase, QueryOutcome)], labels: &LabelIndex) -> EvalReport {
    let mut sorted: Vec<&(QueryCase, QueryOutcome)> = runs.iter().collect();
    sorted.sort_by(|a, b| a.0.query_id.cmp(&b.0.query_id));

    let mut cases = Vec::new();
    let mut skipped = Vec::new();
    let mut failures = Vec::new();
    let mut styles: Vec<StyleBreakdown> = QueryStyle::ALL
        .iter()
        .map(|&style| StyleBreakdown {
            style,
            queries: 0,
            biased_sources: 0,
            non_biased_sources: 0,
            unlabeled_sources: 0,
        })
        .collect();

    for (query, outcome) in sorted {
        let transcript = match outcome {
            QueryOutcome::Rejected(reason) => {
                failures.push(RunFailure {
                    query_id: query.query_id.clone(),
                    reason: reason.clone(),
                    remote: false,
                });
                continue;
            }
            QueryOutcome::Ran(t) => t,
        };
        if let Some(reason) = &transcript.failure {
            failures.push(RunFailure {
                query_id: query.query_id.clone(),
                reason: reason.clone(),
                remote: transcript.hit_remote_failure(),
            });
            continue;
        }
        match parse_transcript(transcript, labels) {
            Ok(mut case) => {
                case.query_id = query.query_id.clone();
                let row = styles.iter_mut().find(|s| s.style == query.style).expect("all styles listed");
                row.queries += 1;
                row.biased_sources += case.count(Some(Label::Biased));
                row.non_biased_sources += case.count(Some(Label::NonBiased));
                row.unlabeled_sources += case.count(None);
                cases.push(case);
            }
            Err(mut s) => {
                s.query_id = query.query_id.clone();
                skipped.push(s);
            }
        }
    }

    let matrix = confusion(cases.iter().filter(|c| !c.mixed));
    let m = super::metrics::metrics(&matrix);
    let mixed_cases = cases
        .iter()
        .filter(|c| c.mixed)
        .map(|c| MixedSourceRecord {
            query_id: c.query_id.clone(),
            biased: c.count(Some(Label::Biased)),
            non_biased: c.count(Some(Label::NonBiased)),
            no_agreement: c.count(None),
            prediction: c.predicted,
            probability: c.confidence,
        })
        .collect();
    let confidence_points: Vec<ConfidencePoint> = cases
        .iter()
        .filter_map(|c| {
            Some(ConfidencePoint {
                query_id: c.query_id.clone(),
                probability: c.confidence,
                correct: c.ground_truth? == c.predicted,
            })
        })
        .collect();
    let probs: Vec<f64> = confidence_points.iter().map(|p| p.probability).collect();

    EvalReport {
        biased: m.biased,
        non_biased: m.non_biased,
        macro_avg: m.macro_avg,
        weighted_avg: m.weighted_avg,
        matrix,
        mixed_cases,
        mean_confidence: mean_confidence(&probs).ok(),
        confidence_points,
        cases,
        style_breakdown: styles,
        skipped,
        failures,
    }
}

pub struct EvalSetup<'a> {
    pub registry: &'a ToolRegistry,
    pub reasoner: &'a dyn Reasoner,
    pub labels: &'a LabelIndex,
    pub step_budget: u32,
    /// Worker threads; 0 is treated as 1.
    pub jobs: usize,
}

pub struct EvalRun {
    pub report: EvalReport,
    /// Transcripts of the runs that started, ordered by query id.
    pub transcripts: Vec<Transcript>,
}

/// Runs every query through the agent and scores the results. Individual
/// failures are recorded in the report and never stop the batch.
pub fn run_eval(queries: &[QueryCase], setup: &EvalSetup<'_>) -> EvalRun {
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(QueryCase, QueryOutcome)>> = Mutex::new(Vec::with_capacity(queries.len()));
    let worker = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        let Some(query) = queries.get(i) else { break };
        let request = RunRequest {
            query: &query.text,
            query_id: Some(&query.query_id),
            step_budget: setup.step_budget,
        };
        let outcome = match run_agent(request, setup.registry, setup.reasoner) {
            Ok(t) => QueryOutcome::Ran(t),
            Err(e) => QueryOutcome::Rejected(e.to_string()),
        };
        log::debug!("query {} finished", query.query_id);
        results.lock().expect("result lock").push((query.clone(), outcome));
    };
    std::thread::scope(|scope| {
        for _ in 1..setup.jobs.max(1) {
            scope.spawn(worker);
        }
        worker();
    });
    let mut runs = results.into_inner().expect("result lock");
    runs.sort_by(|a, b| a.0.query_id.cmp(&b.0.query_id));
    let report = assemble_report(&runs, setup.labels);
    let transcripts = runs
        .into_iter()
        .filter_map(|(_, o)| match o {
            QueryOutcome::Ran(t) => Some(t),
            QueryOutcome::Rejected(_) => None,
        })
        .collect();
    EvalRun { report, transcripts }
}
