//! Command-line surface.
//!
//! Exit codes: 0 success, 1 runtime error, 2 argument error. Payloads go to
//! stdout or the named files; diagnostics go to stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use mtae_core::corpus::{generate_synthetic_corpus, write_parallel_corpus, SyntheticGrammar};
use mtae_core::latentlab::{interpolate_sentences, representation_arithmetic, DEFAULT_STEPS};
use mtae_core::prototypes::{generate_prototype_sentences, write_prototypes_tsv, CATEGORY_COUNT};
use mtae_core::training::{encode_dataset, evaluate_perplexity};
use mtae_core::Task;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::experiments::{cluster_records, encode_prototypes, project_records, thread_pool, train_experiment};
use crate::io;

#[derive(Parser, Debug)]
#[command(name = "mtae", version, about = "Multi-task sequence autoencoder lab")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate an aligned synthetic corpus (en, de, fr, pos columns).
    GenCorpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train a model and write its checkpoint and metrics log.
    Train {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        out_ckpt: PathBuf,
        #[arg(long)]
        metrics: PathBuf,
    },
    /// Best-of-n K-means clustering of prototype representations.
    Cluster(ClusterArgs),
    /// Decode evenly spaced points between two sentence representations.
    Interpolate {
        #[arg(long)]
        ckpt: PathBuf,
        #[arg(long)]
        s1: String,
        #[arg(long)]
        s2: String,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        #[arg(long, default_value = "REP")]
        decoder: Task,
    },
    /// Decode encode(s1) - encode(s2) + encode(s3).
    Arith {
        #[arg(long)]
        ckpt: PathBuf,
        #[arg(long)]
        s1: String,
        #[arg(long)]
        s2: String,
        #[arg(long)]
        s3: String,
        #[arg(long, default_value = "REP")]
        decoder: Task,
    },
    /// Emit the syntax prototype sentences as TSV.
    Prototypes {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        per_category: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write prototype representations as JSON lines.
    Encode {
        #[arg(long)]
        ckpt: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        per_category: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Teacher-forced perplexity of every decoder on a corpus.
    Perplexity {
        #[arg(long)]
        ckpt: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct ClusterArgs {
    /// Model whose encoder produces the representations.
    #[arg(long, conflicts_with = "reps", required_unless_present = "reps")]
    pub ckpt: Option<PathBuf>,
    /// Precomputed representation file (JSON lines) instead of a checkpoint.
    #[arg(long)]
    pub reps: Option<PathBuf>,
    /// Base seed for prototype generation and K-means runs.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub runs: usize,
    #[arg(long, default_value_t = 100)]
    pub per_category: usize,
    #[arg(long, default_value_t = CATEGORY_COUNT)]
    pub k: usize,
    #[arg(long)]
    pub report: PathBuf,
    #[arg(long)]
    pub pca_out: Option<PathBuf>,
}

/// Argument problems detected after parsing; reported with exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn run_cli(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GenCorpus { seed, n, out } => {
            if n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            let tuples = generate_synthetic_corpus(&SyntheticGrammar::default(), n, seed)?;
            io::write_atomic(&out, write_parallel_corpus(&tuples, &Task::ALL)?.as_bytes())?;
            eprintln!("wrote {n} tuples to {}", out.display());
        }
        Command::Train { config, corpus, out_ckpt, metrics } => {
            let cfg = match &config {
                Some(path) => ExperimentConfig::load(path)?,
                None => ExperimentConfig::default(),
            };
            let corpus_path = corpus.or_else(|| cfg.corpus.clone()).ok_or_else(|| usage("--corpus is required"))?;
            let tuples = io::read_corpus(&corpus_path)?;
            let pool = thread_pool()?;
            let (model, log) = train_experiment(&cfg, &tuples, &pool, |r| {
                let ppl: Vec<String> = r.perplexity.iter().map(|(t, p)| format!("{t}={p:.3}")).collect();
                eprintln!("step {} epoch {} train_loss {:.4} ppl {}", r.step, r.epoch, r.train_loss, ppl.join(" "));
            })?;
            io::save_checkpoint(&model, &out_ckpt)?;
            io::write_atomic(&metrics, log.to_jsonl().as_bytes())?;
        }
        Command::Cluster(args) => cluster(args)?,
        Command::Interpolate { ckpt, s1, s2, steps, decoder } => {
            if steps < 2 {
                return Err(usage("--steps must be at least 2"));
            }
            let model = io::load_checkpoint(&ckpt)?;
            io::print_json(&interpolate_sentences(&model, &s1, &s2, steps, decoder)?)?;
        }
        Command::Arith { ckpt, s1, s2, s3, decoder } => {
            #[derive(Serialize)]
            struct Out {
                vector_norm: f64,
                sentence: String,
            }
            let model = io::load_checkpoint(&ckpt)?;
            let r = representation_arithmetic(&model, &s1, &s2, &s3, decoder)?;
            io::print_json(&Out { vector_norm: r.vector_norm, sentence: r.sentence })?;
        }
        Command::Prototypes { seed, per_category, out } => {
            if per_category == 0 {
                return Err(usage("--per-category must be at least 1"));
            }
            let tsv = write_prototypes_tsv(&generate_prototype_sentences(&SyntheticGrammar::default(), seed, per_category)?);
            match out {
                Some(path) => io::write_atomic(&path, tsv.as_bytes())?,
                None => print!("{tsv}"),
            }
        }
        Command::Encode { ckpt, seed, per_category, out } => {
            if per_category == 0 {
                return Err(usage("--per-category must be at least 1"));
            }
            let model = io::load_checkpoint(&ckpt)?;
            io::write_representations(&out, &encode_prototypes(&model, seed, per_category, &thread_pool()?)?)?;
        }
        Command::Perplexity { ckpt, corpus } => {
            let model = io::load_checkpoint(&ckpt)?;
            let data = encode_dataset(&model, &io::read_corpus(&corpus)?)?;
            io::print_json(&evaluate_perplexity(&model, &data)?)?;
        }
    }
    Ok(())
}

fn cluster(args: ClusterArgs) -> Result<()> {
    if args.runs == 0 || args.per_category == 0 || args.k == 0 {
        return Err(usage("--runs, --per-category and --k must be at least 1"));
    }
    let pool = thread_pool()?;
    let records = match (&args.ckpt, &args.reps) {
        (Some(ckpt), _) => encode_prototypes(&io::load_checkpoint(ckpt)?, args.seed, args.per_category, &pool)?,
        (None, Some(reps)) => io::read_representations(reps)?,
        (None, None) => return Err(usage("one of --ckpt or --reps is required")),
    };
    let report = cluster_records(&records, args.k, args.runs, args.seed, &pool)?;
    eprintln!("best-of-{} clustering error {} (seed {})", args.runs, report.best_error, report.best_seed);
    io::write_json(&args.report, &report)?;
    if let Some(path) = &args.pca_out {
        let projection = project_records(&records)?;
        if projection.degenerate {
            eprintln!("warning: all representations coincide; PCA coordinates are zero");
        }
        let categories: Vec<usize> = records.iter().map(|r| r.category).collect();
        io::write_atomic(path, io::pca_tsv(&categories, &projection).as_bytes())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

/// Parses `args`, runs the command and maps failures to exit codes.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run_cli(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            eprintln!("run `mtae help` for usage");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
