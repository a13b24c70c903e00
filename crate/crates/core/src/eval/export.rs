//! Writes the report as CSV tables plus a JSON dump.

use std::path::{Path, PathBuf};

use super::report::EvalReport;
use super::EvalError;
use crate::label::Label;

pub const METRICS_CSV: &str = "metrics.csv";
pub const MIXED_CSV: &str = "mixed.csv";
pub const CONFUSION_CSV: &str = "confusion.csv";
pub const CONFIDENCE_CSV: &str = "confidence_points.csv";
pub const STYLE_CSV: &str = "style_breakdown.csv";
pub const REPORT_JSON: &str = "report.json";

fn table(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv output is utf-8")
}

fn f3(x: f64) -> String {
    format!("{x:.3}")
}

fn row<const N: usize>(cells: [&str; N]) -> Vec<String> {
    cells.iter().map(|s| s.to_string()).collect()
}

/// File name and contents of every CSV table, in a fixed order.
pub fn render_csvs(report: &EvalReport) -> Vec<(&'static str, String)> {
    let (b, n, w, m) = (&report.biased, &report.non_biased, &report.weighted_avg, &report.macro_avg);
    let metrics = table(vec![
        row(["metric", "biased", "non_biased", "weighted_avg", "macro_avg"]),
        vec!["Precision".into(), f3(b.precision), f3(n.precision), f3(w.precision), f3(m.precision)],
        vec!["Recall".into(), f3(b.recall), f3(n.recall), f3(w.recall), f3(m.recall)],
        vec!["F1-Score".into(), f3(b.f1), f3(n.f1), f3(w.f1), f3(m.f1)],
        vec!["Support".into(), b.support.to_string(), n.support.to_string(), "-".into(), "-".into()],
    ]);

    let mut mixed = vec![row(["query", "biased", "non_biased", "no_agreement", "prediction", "probability"])];
    mixed.extend(report.mixed_cases.iter().map(|r| {
        vec![
            r.query_id.clone(),
            r.biased.to_string(),
            r.non_biased.to_string(),
            r.no_agreement.to_string(),
            r.prediction.short().to_string(),
            f3(r.probability),
        ]
    }));

    let c = &report.matrix;
    let confusion = table(vec![
        row(["actual", "predicted_biased", "predicted_non_biased"]),
        vec![Label::Biased.to_string(), c.tp.to_string(), c.fn_.to_string()],
        vec![Label::NonBiased.to_string(), c.fp.to_string(), c.tn.to_string()],
    ]);

    let mut points = vec![row(["query", "probability", "correct"])];
    points.extend(
        report
            .confidence_points
            .iter()
            .map(|p| vec![p.query_id.clone(), f3(p.probability), u8::from(p.correct).to_string()]),
    );

    let mut styles = vec![row(["style", "queries", "biased_sources", "non_biased_sources", "unlabeled_sources"])];
    styles.extend(report.style_breakdown.iter().map(|s| {
        vec![
            s.style.to_string(),
            s.queries.to_string(),
            s.biased_sources.to_string(),
            s.non_biased_sources.to_string(),
            s.unlabeled_sources.to_string(),
        ]
    }));

    vec![
        (METRICS_CSV, metrics),
        (MIXED_CSV, table(mixed)),
        (CONFUSION_CSV, confusion),
        (CONFIDENCE_CSV, table(points)),
        (STYLE_CSV, table(styles)),
    ]
}

pub fn render_json(report: &EvalReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, EvalError> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| EvalError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

pub fn export_csvs(report: &EvalReport, dir: &Path) -> Result<Vec<PathBuf>, EvalError> {
    std::fs::create_dir_all(dir).map_err(|e| EvalError::Io(format!("{}: {e}", dir.display())))?;
    render_csvs(report)
        .into_iter()
        .map(|(name, body)| write(dir, name, &body))
        .collect()
}

pub fn export_json(report: &EvalReport, dir: &Path) -> Result<PathBuf, EvalError> {
    std::fs::create_dir_all(dir).map_err(|e| EvalError::Io(format!("{}: {e}", dir.display())))?;
    write(dir, REPORT_JSON, &render_json(report))
}

/// Writes every CSV table and `report.json` into `dir`.
pub fn export(report: &EvalReport, dir: &Path) -> Result<Vec<PathBuf>, EvalError> {
    let mut paths = export_csvs(report, dir)?;
    paths.push(export_json(report, dir)?);
    Ok(paths)
}

pub fn load_report(dir: &Path) -> Result<EvalReport, EvalError> {
    let path = dir.join(REPORT_JSON);
    let text = std::fs::read_to_string(&path).map_err(|e| EvalError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| EvalError::Report(format!("{}: {e}", path.display())))
}
