use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fakenews_cli::config::{keys_help, PipelineConfig};
use fakenews_cli::error::{exit, CliError};
use fakenews_cli::parallel::Threads;
use fakenews_cli::pipeline::{self, Runtime};
use fakenews_core::eval::ReportRow;

/// Text-only fake news detection: PMI lexicons, stylometric and lexical
/// features, an attention GRU task embedding and an RBF SVM.
#[derive(Debug, Parser)]
#[command(name = "fakenews", version, after_help = keys_help())]
struct Cli {
    /// Pipeline configuration file (TOML).
    #[arg(long, global = true, default_value = "fakenews.toml")]
    config: PathBuf,

    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Run everything on a single thread.
    #[arg(long, global = true)]
    deterministic: bool,

    /// More log output (-v debug, -vv trace).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the unigram, bigram and named-entity PMI lexicons.
    BuildLexicons,
    /// Train skip-gram word vectors on the dataset.
    TrainEmbeddings,
    /// Train the network and the SVM and write the model directory.
    Train,
    /// Score the trained models on the test set and write the report CSV.
    Evaluate {
        /// Only compute the majority-class baseline row.
        #[arg(long)]
        baseline_only: bool,
        /// Test set (overrides `test`).
        #[arg(long)]
        test: Option<PathBuf>,
        /// Report path (overrides `report`).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Classify the articles of a JSON Lines file.
    Predict {
        /// Input JSON Lines; labels are optional.
        input: PathBuf,
        /// Output file (default: stdout).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate every configured feature-group subset.
    Ablate {
        /// Test set (overrides `test`).
        #[arg(long)]
        test: Option<PathBuf>,
    },
}

fn print_rows(rows: &[ReportRow]) {
    let width = rows.iter().map(|r| r.label.len()).max().unwrap_or(0).max(9);
    println!("{:width$}  {:>6}  {:>6}  {:>6}  {:>6}", "row", "P", "R", "F1", "Acc");
    for r in rows {
        let m = &r.metrics;
        println!("{:width$}  {:6.2}  {:6.2}  {:6.2}  {:6.2}", r.label, m.precision, m.recall, m.f1, m.accuracy);
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = PipelineConfig::load(&cli.config)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let threads = match (cli.deterministic, cli.threads) {
        (true, _) => Threads::new(1),
        (false, Some(n)) => Threads::new(n),
        (false, None) => Threads::available(),
    };
    let rt = Runtime { threads };
    match cli.command {
        Command::BuildLexicons => {
            let stdout = std::io::stdout();
            pipeline::build_lexicons(&cfg, &mut stdout.lock())?;
        }
        Command::TrainEmbeddings => {
            let path = pipeline::train_embeddings(&cfg)?;
            println!("vectors written to {}", path.display());
        }
        Command::Train => {
            let out = pipeline::train(&cfg, rt)?;
            println!("config hash {} seed {}", out.manifest.meta.config_hash, out.manifest.meta.seed);
            for a in &out.manifest.artifacts {
                println!("  {:9} {}", a.name, cfg.model_dir.join(&a.path).display());
            }
            println!("cross-validated accuracy {:.2}% at C={} gamma={}", 100.0 * out.cv.best.accuracy, out.cv.best.c, out.cv.best.gamma);
        }
        Command::Evaluate { baseline_only, test, report } => {
            cfg.test = test.or(cfg.test);
            cfg.report = report.or(cfg.report);
            let rows = pipeline::evaluate(&cfg, rt, baseline_only)?;
            print_rows(&rows);
            println!("report written to {}", cfg.report_path().display());
        }
        Command::Predict { input, output } => {
            let summary = match output {
                Some(path) => {
                    let file = std::fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
                    let mut w = std::io::BufWriter::new(file);
                    let s = pipeline::predict(&cfg, rt, &input, &mut w)?;
                    w.flush().map_err(|e| CliError::io(&path, e))?;
                    s
                }
                None => pipeline::predict(&cfg, rt, &input, &mut std::io::stdout().lock())?,
            };
            if summary.skipped > 0 {
                eprintln!("{} predictions, {} malformed lines skipped", summary.written, summary.skipped);
            }
        }
        Command::Ablate { test } => {
            cfg.test = test.or(cfg.test);
            let rows = pipeline::ablate(&cfg, rt)?;
            print_rows(&rows);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { exit::OK as u8 });
        }
    };
    let level = match cli.verbose {
        0 => "info",
        1 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).format_timestamp(None).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
