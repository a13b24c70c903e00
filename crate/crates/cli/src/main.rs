mod commands;
mod config;
mod error;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::ReportFormat;
use config::{AppConfig, Mode, Overrides};
use error::CliError;

/// Bias-aware retrieval agent: ingest articles, ask questions, evaluate.
#[derive(Debug, Parser)]
#[command(name = "biasaware", version)]
struct Cli {
    /// TOML config file; command-line flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_name = "PATH", visible_alias = "store")]
    store_path: Option<PathBuf>,
    #[arg(long, global = true)]
    chunk_size: Option<usize>,
    #[arg(long, global = true)]
    overlap: Option<usize>,
    /// Passages retrieved per query.
    #[arg(long, global = true)]
    k: Option<usize>,
    #[arg(long, global = true)]
    step_budget: Option<u32>,
    #[arg(long, global = true, value_name = "DIR")]
    output_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Chunk, embed and store a JSON Lines corpus.
    Ingest {
        #[arg(long)]
        corpus: PathBuf,
    },
    /// Answer one question and report whether its sources look biased.
    Query {
        #[arg(long)]
        question: String,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
    },
    /// Run a query file through the agent and score the verdicts.
    Eval {
        #[arg(long)]
        queries: PathBuf,
        /// Output directory; defaults to the configured output_dir.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
    },
    /// Re-render tables from an eval directory's report.json.
    Report {
        #[arg(long)]
        run: PathBuf,
        #[arg(long, value_enum)]
        format: ReportFormat,
    },
}

fn config(cli: &Cli, mode: Option<Mode>) -> Result<AppConfig, CliError> {
    let cfg = AppConfig::load(cli.config.as_deref())?.apply(Overrides {
        store_path: cli.store_path.clone(),
        chunk_size: cli.chunk_size,
        overlap: cli.overlap,
        k: cli.k,
        step_budget: cli.step_budget,
        output_dir: cli.output_dir.clone(),
        mode,
    });
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Ingest { corpus } => commands::ingest_cmd(&config(&cli, None)?, corpus),
        Command::Query { question, mode } => {
            let result = commands::query_cmd(&config(&cli, *mode)?, question)?;
            match result.error {
                None => Ok(result.stdout),
                Some(e) => {
                    print!("{}", result.stdout);
                    Err(e)
                }
            }
        }
        Command::Eval {
            queries,
            out,
            jobs,
            mode,
        } => {
            let cfg = config(&cli, *mode)?;
            let out = out.clone().unwrap_or_else(|| cfg.output_dir.clone());
            commands::eval_cmd(&cfg, queries, &out, *jobs)
        }
        Command::Report { run, format } => commands::report_cmd(run, *format),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            let _ = std::io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(e) => {
            let _ = std::io::stdout().flush();
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
