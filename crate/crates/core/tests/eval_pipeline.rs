mod common;

use biasaware::eval::{
    export, load_report, render_csvs, run_eval, EvalSetup, LabelIndex, QueryCase, QueryStyle, METRICS_CSV,
};
use biasaware::reasoner::{ScriptedPolicyConfig, ScriptedReasoner};
use biasaware::Label;

fn q(id: &str, text: &str, style: QueryStyle) -> QueryCase {
    QueryCase {
        query_id: id.into(),
        text: text.into(),
        style,
    }
}

fn queries() -> Vec<QueryCase> {
    vec![
        q("q1", "radical regime destroying economy reckless spending", QueryStyle::BiasEliciting),
        q("q2", "corrupt elites outrageous propaganda election", QueryStyle::BiasEliciting),
        q("q3", "central bank interest rates steady", QueryStyle::Neutral),
        q("q4", "climate report temperature data", QueryStyle::Neutral),
        q("q5", "election results counting", QueryStyle::Neutral),
    ]
}

fn evaluate(k: usize, jobs: usize) -> biasaware::eval::EvalRun {
    let docs = common::corpus();
    let agent = common::agent(&docs);
    let labels = LabelIndex::from_documents(&docs);
    let reasoner = ScriptedReasoner::new(ScriptedPolicyConfig::default().with_k(k));
    run_eval(
        &queries(),
        &EvalSetup {
            registry: &agent.registry,
            reasoner: &reasoner,
            labels: &labels,
            step_budget: 10,
            jobs,
        },
    )
}

#[test]
fn single_source_runs_are_all_scored() {
    let run = evaluate(1, 1);
    let r = &run.report;
    assert_eq!(run.transcripts.len(), 5);
    assert!(r.failures.is_empty() && r.skipped.is_empty());
    assert_eq!(r.cases.len(), 5);
    assert!(r.mixed_cases.is_empty());
    assert_eq!(r.matrix.total(), 5);
    assert_eq!(r.confidence_points.len(), 5);
    for (case, point) in r.cases.iter().zip(&r.confidence_points) {
        assert_eq!(point.correct, case.ground_truth == Some(case.predicted));
    }
    let mean = r.confidence_points.iter().map(|p| p.probability).sum::<f64>() / 5.0;
    assert!((r.mean_confidence.unwrap() - mean).abs() < 1e-12);
}

#[test]
fn partition_is_total() {
    let r = evaluate(3, 1).report;
    let non_mixed = r.cases.iter().filter(|c| !c.mixed).count();
    assert_eq!(non_mixed + r.mixed_cases.len() + r.skipped.len() + r.failures.len(), 5);
    assert_eq!(non_mixed as u64, r.matrix.total());
    for c in &r.cases {
        assert_eq!(c.mixed, c.ground_truth.is_none());
    }
    let styled: usize = r.style_breakdown.iter().map(|s| s.queries).sum();
    assert_eq!(styled, r.cases.len());
}

#[test]
fn deterministic_and_parallel_safe() {
    let a = evaluate(3, 1).report;
    let b = evaluate(3, 1).report;
    let c = evaluate(3, 4).report;
    assert_eq!(render_csvs(&a), render_csvs(&b));
    assert_eq!(a, c);
}

#[test]
fn export_round_trips() {
    let r = evaluate(2, 1).report;
    let dir = tempfile::tempdir().unwrap();
    let paths = export(&r, dir.path()).unwrap();
    assert_eq!(paths.len(), 6);
    assert_eq!(load_report(dir.path()).unwrap(), r);
    let metrics = std::fs::read_to_string(dir.path().join(METRICS_CSV)).unwrap();
    let rows: Vec<&str> = metrics.lines().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(rows, ["metric", "Precision", "Recall", "F1-Score", "Support"]);
    assert!(metrics.lines().last().unwrap().ends_with(",-,-"));
}

#[test]
fn biased_only_corpus_has_full_recall() {
    let docs: Vec<_> = common::corpus().into_iter().filter(|d| d.label == Some(Label::Biased)).collect();
    let agent = common::agent(&docs);
    let labels = LabelIndex::from_documents(&docs);
    let reasoner = ScriptedReasoner::default();
    let r = run_eval(
        &queries(),
        &EvalSetup {
            registry: &agent.registry,
            reasoner: &reasoner,
            labels: &labels,
            step_budget: 10,
            jobs: 2,
        },
    )
    .report;
    assert_eq!(r.biased.recall, 1.0);
    assert_eq!(r.biased.support, 5);
}

#[test]
fn unwritable_dir_is_io_error() {
    let r = evaluate(1, 1).report;
    let file = tempfile::NamedTempFile::new().unwrap();
    assert!(matches!(
        export(&r, &file.path().join("sub")),
        Err(biasaware::eval::EvalError::Io(_))
    ));
}
