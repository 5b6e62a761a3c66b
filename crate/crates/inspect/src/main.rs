use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use inspect::pipeline;
use inspect::render;
use inspect::{corpus, dataset, store, synth, Error};
use inspect_core::probe::{TrainConfig, DEFAULT_LAMBDA_GRID};
use inspect_core::report::{summarize, ResultsTable};
use inspect_core::Task;

/// Diagnostic probing of code models on Java.
#[derive(Parser)]
#[command(name = "inspect", version, after_help = "Worker threads: set INSPECT_WORKERS (default: all cores).")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build balanced, split datasets from a method corpus.
    BuildDataset {
        /// Task code (KTX, IDN, ..., NPT) or `all`.
        #[arg(long)]
        task: String,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Corpus JSONL file.
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train per-layer probes for one (dataset, embeddings) pair.
    Probe {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        embeddings: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Model layer numbers to probe, e.g. `5-8`.
        #[arg(long)]
        layers: Option<String>,
        /// Comma-separated L2 coefficients.
        #[arg(long, value_delimiter = ',')]
        lambda_grid: Option<Vec<f64>>,
        /// Train on raw features instead of standardized ones.
        #[arg(long)]
        no_standardize: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Aggregate layer reports (or an accuracy table) into result files.
    Report {
        /// Directory of layer reports written by `probe`.
        #[arg(long, conflicts_with = "from_table", required_unless_present = "from_table")]
        reports: Option<PathBuf>,
        /// CSV grid `model,<task>...` of best-layer accuracies in percent.
        #[arg(long)]
        from_table: Option<PathBuf>,
        #[arg(long, default_value = "BERT")]
        baseline: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print corpus diagnostics.
    Validate {
        #[arg(long)]
        corpus: PathBuf,
    },
    /// Turn a tree of .java files into a corpus JSONL file.
    Convert {
        #[arg(long)]
        src: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a synthetic corpus.
    SynthCorpus {
        #[arg(long, default_value_t = 5_000)]
        methods: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write uniform-random embeddings for a dataset (chance-level control).
    RandomEmbeddings {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, default_value_t = 12)]
        layers: usize,
        #[arg(long, default_value_t = 768)]
        dim: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_tasks(spec: &str) -> Result<Vec<Task>, Error> {
    if spec.eq_ignore_ascii_case("all") {
        return Ok(Task::ALL.to_vec());
    }
    spec.split(',').map(|s| s.trim().parse::<Task>().map_err(|e| Error::Invalid(e.to_string()))).collect()
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::BuildDataset { task, n, seed, corpus, out } => {
            let tasks = parse_tasks(&task)?;
            let manifest = pipeline::with_workers(|| pipeline::build_datasets(&corpus, &tasks, n, seed, &out))??;
            for d in &manifest.datasets {
                println!("{}: {} examples -> {}", d.task, d.examples, out.join(&d.file).display());
            }
        }
        Command::Probe { dataset, embeddings, out, layers, lambda_grid, no_standardize, seed } => {
            let layers = layers.as_deref().map(pipeline::parse_layer_range).transpose()?;
            let config = TrainConfig {
                lambda_grid: lambda_grid.unwrap_or_else(|| DEFAULT_LAMBDA_GRID.to_vec()),
                standardize: !no_standardize,
                seed,
                ..TrainConfig::default()
            };
            let report = pipeline::with_workers(|| pipeline::probe_files(&dataset, &embeddings, layers, &config))??;
            let path = render::write_layer_report(&out, &report)?;
            for l in &report.layers {
                println!("layer {:>2}: accuracy {:.4} (lambda {}, epoch {})", l.layer, l.accuracy, l.lambda, l.best_epoch);
            }
            println!("best layer {} -> {}", report.best_layer, path.display());
        }
        Command::Report { reports, from_table, baseline, out } => {
            fs::create_dir_all(&out).map_err(|source| Error::Io { path: out.clone(), source })?;
            let table: ResultsTable = match (reports, from_table) {
                (Some(dir), _) => {
                    let reports = render::read_layer_reports(&dir)?;
                    let table = summarize(&reports, &baseline)?;
                    render::write_layer_profiles(&out, &reports)?;
                    render::write_heatmaps(&out, &reports)?;
                    let confusion = out.join("confusion");
                    fs::create_dir_all(&confusion).map_err(|source| Error::Io { path: confusion.clone(), source })?;
                    for r in &reports {
                        for l in &r.layers {
                            let name = format!("{}_{}_{}.csv", render::file_stem(&r.model_id), render::file_stem(&r.task), l.layer);
                            render::write_confusion(&confusion.join(name), &l.confusion)?;
                        }
                    }
                    table
                }
                (None, Some(csv)) => {
                    let grid = render::read_grid(&csv)?;
                    ResultsTable::from_grid(&grid.models, &grid.tasks, &grid.values, &baseline)?
                }
                (None, None) => return Err(Error::Invalid("one of --reports or --from-table is required".into())),
            };
            render::write_results(&out, &table)?;
            for s in &table.task_summaries {
                println!(
                    "{:<4} max {:>5.1} ({:>2})  std {:>4.1} ({:>2})  delta {:>5.1} ({:>2})",
                    s.task, s.max, s.max_rank, s.std_dev, s.std_rank, s.delta, s.delta_rank
                );
            }
        }
        Command::Validate { corpus } => {
            let d = pipeline::with_workers(|| pipeline::validate_corpus(&corpus))??;
            println!("{}", serde_json::to_string_pretty(&d).map_err(|e| Error::Invalid(e.to_string()))?);
            if d.lexed == 0 {
                return Err(Error::Invalid(format!("{}: no lexable samples", corpus.display())));
            }
        }
        Command::Convert { src, out } => {
            let (methods, stats) = inspect::convert::convert_tree(&src)?;
            corpus::write_corpus(&out, &methods)?;
            println!(
                "{} files ({} unlexable), {} methods -> {}",
                stats.files,
                stats.unlexable_files,
                stats.methods,
                out.display()
            );
        }
        Command::SynthCorpus { methods, seed, out } => {
            corpus::write_corpus(&out, &synth::synth_corpus(methods, seed))?;
            println!("{methods} methods -> {}", out.display());
        }
        Command::RandomEmbeddings { dataset, layers, dim, seed, out } => {
            if layers == 0 || dim == 0 {
                return Err(Error::Invalid("--layers and --dim must be positive".into()));
            }
            let (_, ds) = dataset::read_dataset(&dataset)?;
            let set = pipeline::random_embeddings(&ds, layers, dim, seed);
            store::write_embeddings(&out, &set)?;
            println!("{} samples x {layers} layers x {dim} -> {}", set.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match std::panic::catch_unwind(|| run(cli.command)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(3),
    }
}
