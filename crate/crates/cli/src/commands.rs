use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use biasaware::detector::{BiasDetector, ClassifyTool, Lexicon, LexiconDetector, RemoteDetector, RemoteDetectorConfig};
use biasaware::engine::{run_agent, RunRequest, ToolRegistry, Transcript};
use biasaware::eval::{self, EvalReport, EvalSetup, LabelIndex};
use biasaware::reasoner::{Reasoner, RemoteReasoner, ScriptedPolicyConfig, ScriptedReasoner};
use biasaware::retriever::{
    ingest, read_corpus, Chunking, Embedder, HashedEmbedder, RemoteEmbedder, RemoteEmbedderConfig, RetrieveTool,
    VectorStore,
};

use crate::config::{AppConfig, DetectorConfig, EmbedderConfig, Mode};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Csv,
    Json,
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}

fn secret(env: Option<&str>) -> Result<Option<String>, CliError> {
    env.map(|var| {
        std::env::var(var).map_err(|_| CliError::Usage(format!("environment variable {var} is not set")))
    })
    .transpose()
}

fn build_embedder(cfg: &AppConfig) -> Result<Arc<dyn Embedder>, CliError> {
    Ok(match &cfg.embedder {
        EmbedderConfig::Hashed { dim } => Arc::new(HashedEmbedder::new(*dim)?),
        EmbedderConfig::Remote {
            url,
            model,
            dim,
            key_env,
            timeout_secs,
            max_retries,
        } => Arc::new(RemoteEmbedder::new(RemoteEmbedderConfig {
            url: url.clone(),
            model: model.clone(),
            dim: *dim,
            api_key: secret(key_env.as_deref())?,
            timeout_secs: *timeout_secs,
            max_retries: *max_retries,
        })?),
    })
}

fn build_detector(cfg: &AppConfig) -> Result<Arc<dyn BiasDetector>, CliError> {
    Ok(match &cfg.detector {
        DetectorConfig::Lexicon { path: None } => Arc::new(LexiconDetector::new(Lexicon::builtin())),
        DetectorConfig::Lexicon { path: Some(p) } => Arc::new(LexiconDetector::new(Lexicon::load(p)?)),
        DetectorConfig::Remote {
            url,
            timeout_secs,
            max_retries,
        } => Arc::new(RemoteDetector::new(RemoteDetectorConfig {
            url: url.clone(),
            timeout_secs: *timeout_secs,
            max_retries: *max_retries,
        })?),
    })
}

fn chunking(cfg: &AppConfig) -> Result<Chunking, CliError> {
    Ok(Chunking::new(cfg.chunk_size, cfg.overlap)?)
}

fn check_compatible(store: &VectorStore, embedder: &dyn Embedder, path: &Path) -> Result<(), CliError> {
    if store.embedder_id() != embedder.id() {
        return Err(CliError::Data(format!(
            "store {} was built with embedder {}, config selects {}",
            path.display(),
            store.embedder_id(),
            embedder.id()
        )));
    }
    Ok(())
}

pub fn ingest_cmd(cfg: &AppConfig, corpus: &Path) -> Result<String, CliError> {
    let docs = read_corpus(corpus)?;
    let embedder = build_embedder(cfg)?;
    let chunking = chunking(cfg)?;
    let mut store = if cfg.store_path.exists() {
        let store = VectorStore::load(&cfg.store_path)?;
        check_compatible(&store, embedder.as_ref(), &cfg.store_path)?;
        if store.chunking() != chunking {
            return Err(CliError::Data(format!(
                "store {} uses different chunking than the config",
                cfg.store_path.display()
            )));
        }
        store
    } else {
        VectorStore::new(embedder.as_ref(), chunking)
    };
    let inserted = ingest(&docs, &mut store, embedder.as_ref())?;
    if let Some(dir) = cfg.store_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    store.save(&cfg.store_path)?;
    Ok(format!(
        "ingested {} documents as {inserted} records into {} ({} records total)\n",
        docs.len(),
        cfg.store_path.display(),
        store.len()
    ))
}

struct Agent {
    registry: ToolRegistry,
    reasoner: Box<dyn Reasoner>,
    labels: LabelIndex,
}

fn open_store(cfg: &AppConfig) -> Result<VectorStore, CliError> {
    if !cfg.store_path.exists() {
        return Err(CliError::Data(format!(
            "store {} not found; run `biasaware ingest` first",
            cfg.store_path.display()
        )));
    }
    let store = VectorStore::load(&cfg.store_path)?;
    if store.is_empty() {
        return Err(CliError::Data(format!("store {} is empty", cfg.store_path.display())));
    }
    Ok(store)
}

fn build_agent(cfg: &AppConfig) -> Result<Agent, CliError> {
    let store = open_store(cfg)?;
    let embedder = build_embedder(cfg)?;
    check_compatible(&store, embedder.as_ref(), &cfg.store_path)?;
    let labels = LabelIndex::from_store(&store);
    let detector = build_detector(cfg)?;
    let registry = ToolRegistry::builder()
        .register(RetrieveTool::new(Arc::new(store), embedder).with_labels(false).spec())
        .and_then(|b| b.register(ClassifyTool::new(detector).spec()))
        .map_err(|e| CliError::Usage(e.to_string()))?
        .build();
    let reasoner: Box<dyn Reasoner> = match cfg.reasoner.mode {
        Mode::Scripted => Box::new(ScriptedReasoner::new(ScriptedPolicyConfig::default().with_k(cfg.k))),
        Mode::Llm => {
            let llm = cfg
                .reasoner
                .llm
                .as_ref()
                .ok_or_else(|| CliError::Usage("mode llm needs a [reasoner.llm] section".into()))?;
            Box::new(RemoteReasoner::new(llm.into(), registry.describe())?)
        }
    };
    Ok(Agent {
        registry,
        reasoner,
        labels,
    })
}

fn write_transcript(dir: &Path, name: &str, t: &Transcript) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let path = dir.join(format!("{name}.jsonl"));
    std::fs::write(&path, t.to_jsonl()).map_err(|e| io_err(&path, e))?;
    Ok(path)
}

/// Answer, then the verdict sentence, then the supporting analysis when the
/// verdict is biased.
pub fn render_answer(t: &Transcript) -> String {
    let Some(f) = t.final_answer() else {
        return String::new();
    };
    let mut out = format!("{}\n\n{}\n", f.answer, f.bias_line.sentence());
    if f.bias_line.is_biased() {
        if let Some(analysis) = &f.bias_analysis {
            out.push_str(analysis);
            out.push('\n');
        }
    }
    out
}

pub struct QueryResult {
    pub stdout: String,
    pub error: Option<CliError>,
}

pub fn query_cmd(cfg: &AppConfig, question: &str) -> Result<QueryResult, CliError> {
    let agent = build_agent(cfg)?;
    let t = run_agent(
        RunRequest {
            query: question,
            query_id: None,
            step_budget: cfg.step_budget,
        },
        &agent.registry,
        agent.reasoner.as_ref(),
    )
    .map_err(|e| CliError::Usage(e.to_string()))?;
    let path = write_transcript(&cfg.output_dir.join("transcripts"), &t.run_id, &t)?;
    log::info!("transcript written to {}", path.display());
    let error = match (&t.failure, t.hit_remote_failure()) {
        (_, true) => Some(CliError::Remote(
            t.failure.clone().unwrap_or_else(|| "a remote tool failed during the run".into()),
        )),
        (Some(f), false) => Some(CliError::Data(f.clone())),
        (None, false) => None,
    };
    Ok(QueryResult {
        stdout: render_answer(&t),
        error,
    })
}

fn summary(report: &EvalReport, total: usize) -> String {
    let (b, n, w, m) = (&report.biased, &report.non_biased, &report.weighted_avg, &report.macro_avg);
    let mut s = String::new();
    let _ = writeln!(s, "{:<10} {:>8} {:>11} {:>13} {:>10}", "metric", "biased", "non_biased", "weighted_avg", "macro_avg");
    for (name, vals) in [
        ("Precision", [b.precision, n.precision, w.precision, m.precision]),
        ("Recall", [b.recall, n.recall, w.recall, m.recall]),
        ("F1-Score", [b.f1, n.f1, w.f1, m.f1]),
    ] {
        let _ = writeln!(
            s,
            "{name:<10} {:>8.3} {:>11.3} {:>13.3} {:>10.3}",
            vals[0], vals[1], vals[2], vals[3]
        );
    }
    let _ = writeln!(s, "{:<10} {:>8} {:>11} {:>13} {:>10}", "Support", b.support, n.support, "-", "-");
    let _ = writeln!(
        s,
        "\n{} of {total} queries evaluated: {} single-alignment, {} mixed; {} skipped, {} failed",
        report.evaluated(),
        report.matrix.total(),
        report.mixed_cases.len(),
        report.skipped.len(),
        report.failures.len()
    );
    if let Some(c) = report.mean_confidence {
        let _ = writeln!(s, "mean confidence: {c:.3}");
    }
    s
}

pub fn eval_cmd(cfg: &AppConfig, queries_path: &Path, out: &Path, jobs: usize) -> Result<String, CliError> {
    let queries = eval::read_queries(queries_path)?;
    let agent = build_agent(cfg)?;
    let run = eval::run_eval(
        &queries,
        &EvalSetup {
            registry: &agent.registry,
            reasoner: agent.reasoner.as_ref(),
            labels: &agent.labels,
            step_budget: cfg.step_budget,
            jobs,
        },
    );
    eval::export(&run.report, out)?;
    let dir = out.join("transcripts");
    for t in &run.transcripts {
        write_transcript(&dir, t.query_id.as_deref().unwrap_or(&t.run_id), t)?;
    }
    if run.report.evaluated() == 0 {
        let msg = format!("none of the {} queries produced an evaluable result", queries.len());
        return Err(if run.report.failures.iter().any(|f| f.remote) {
            CliError::Remote(msg)
        } else {
            CliError::Data(msg)
        });
    }
    Ok(summary(&run.report, queries.len()))
}

pub fn report_cmd(run_dir: &Path, format: ReportFormat) -> Result<String, CliError> {
    let report = eval::load_report(run_dir)?;
    let written = match format {
        ReportFormat::Csv => eval::export_csvs(&report, run_dir)?,
        ReportFormat::Json => vec![eval::export_json(&report, run_dir)?],
    };
    Ok(written.iter().map(|p| format!("wrote {}\n", p.display())).collect())
}
