//! Experiment drivers shared by the command line and the acceptance suite.

use anyhow::{Context, Result};
use mtae_core::clusterlab::{clustering_trial, pca_project_2d, BestOfN, ErrorReport, PcaProjection};
use mtae_core::corpus::{split_train_test, ExampleTuple, SyntheticGrammar, Vocabularies};
use mtae_core::prototypes::generate_prototype_sentences;
use mtae_core::seqmodel::{EncodedExample, ModelError, MultiTaskModel};
use mtae_core::training::{example_gradient, train_with, BatchExecutor, ExampleGradient, MetricsLog, MetricsRecord};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::io::RepresentationRecord;

pub const THREADS_ENV: &str = "MTAE_THREADS";

/// Thread pool sized by `MTAE_THREADS` (all cores when unset or invalid).
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()).unwrap_or(0);
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().context("building thread pool")
}

/// Per-example gradients on a rayon pool; results come back in batch order,
/// so accumulation order never depends on scheduling.
pub struct ParallelExecutor<'p> {
    pub pool: &'p rayon::ThreadPool,
}

impl BatchExecutor for ParallelExecutor<'_> {
    fn gradients(
        &self,
        model: &MultiTaskModel,
        batch: &[&EncodedExample],
    ) -> Vec<Result<ExampleGradient, ModelError>> {
        if self.pool.current_num_threads() == 1 {
            return batch.iter().map(|ex| example_gradient(model, ex)).collect();
        }
        self.pool.install(|| batch.par_iter().map(|ex| example_gradient(model, ex)).collect())
    }
}

/// Builds a model for `cfg` over `corpus` and trains it, evaluating on the
/// held-out split when `cfg.holdout` is set.
pub fn train_experiment(
    cfg: &ExperimentConfig,
    corpus: &[ExampleTuple],
    pool: &rayon::ThreadPool,
    on_record: impl FnMut(&MetricsRecord),
) -> Result<(MultiTaskModel, MetricsLog)> {
    let vocabularies = Vocabularies::from_corpus(corpus, &cfg.decoders)?;
    let mut model = MultiTaskModel::new(cfg.model_config(vocabularies))?;
    let (train_set, test_set) = if cfg.holdout { split_train_test(corpus) } else { (corpus.to_vec(), Vec::new()) };
    let log = train_with(&mut model, &train_set, &test_set, &cfg.train, &ParallelExecutor { pool }, on_record)?;
    Ok((model, log))
}

/// Encodes the prototype sentences for `seed`.
pub fn encode_prototypes(
    model: &MultiTaskModel,
    seed: u64,
    per_category: usize,
    pool: &rayon::ThreadPool,
) -> Result<Vec<RepresentationRecord>> {
    let sentences = generate_prototype_sentences(&SyntheticGrammar::default(), seed, per_category)?;
    pool.install(|| {
        sentences
            .par_iter()
            .map(|s| {
                let r = model.encode(&s.text).with_context(|| format!("encoding {:?}", s.text))?;
                Ok(RepresentationRecord { sentence: s.text.clone(), category: s.category, vector: r.into_vec() })
            })
            .collect()
    })
}

/// Best-of-n outcome plus the error report of the winning run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterReport {
    pub k: usize,
    pub runs: usize,
    pub points: usize,
    pub best_error: usize,
    pub best_seed: u64,
    pub base_seed: u64,
    /// Total error per run, in seed order.
    pub run_errors: Vec<usize>,
    /// Per-cluster counts, majorities and errors of the best run.
    pub report: ErrorReport,
}

/// Runs k-means with seeds `base_seed..base_seed + runs` in parallel and
/// reduces by minimum error, lowest seed on ties.
pub fn cluster_records(
    records: &[RepresentationRecord],
    k: usize,
    runs: usize,
    base_seed: u64,
    pool: &rayon::ThreadPool,
) -> Result<ClusterReport> {
    anyhow::ensure!(runs >= 1, "at least one clustering run is required");
    let points: Vec<Vec<f64>> = records.iter().map(|r| r.vector.clone()).collect();
    let labels: Vec<usize> = records.iter().map(|r| r.category).collect();
    let trials: Vec<ErrorReport> = pool.install(|| {
        (0..runs as u64)
            .into_par_iter()
            .map(|i| clustering_trial(&points, &labels, k, base_seed + i).map(|(_, r)| r))
            .collect::<Result<_, _>>()
    })?;
    let best = BestOfN::from_errors(base_seed, trials.iter().map(|r| r.total).collect())?;
    let report = trials[(best.best_seed - base_seed) as usize].clone();
    Ok(ClusterReport {
        k,
        runs,
        points: points.len(),
        best_error: best.best_error,
        best_seed: best.best_seed,
        base_seed,
        run_errors: best.errors,
        report,
    })
}

pub fn project_records(records: &[RepresentationRecord]) -> Result<PcaProjection> {
    let points: Vec<Vec<f64>> = records.iter().map(|r| r.vector.clone()).collect();
    Ok(pca_project_2d(&points)?)
}

/// Median of a non-empty list (mean of the middle pair for even lengths).
pub fn median(values: &[usize]) -> f64 {
    let mut v = values.to_vec();
    v.sort_unstable();
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
    }
}
