//! Deterministic training loop, Adam, perplexity and checkpoints.
//!
//! Batches are realized as a loop over examples: per-example joint-loss
//! gradients are summed in example order and averaged, so a batch update
//! never depends on evaluation order or thread count.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{ExampleTuple, Vocabularies};
use crate::seqmodel::{EncodedExample, ForwardLosses, ModelConfig, ModelError, MultiTaskModel};
use crate::task::Task;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TrainError {
    #[error("data error: {0}")]
    Data(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    /// Global gradient norm cap; 0 disables clipping.
    pub clip_norm: f64,
    pub data_fraction: f64,
    pub shuffle_seed: u64,
    /// Evaluate every this many batches; 0 evaluates at the end of each epoch only.
    pub eval_every: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 5,
            batch_size: 16,
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            clip_norm: 5.0,
            data_fraction: 1.0,
            shuffle_seed: 0,
            eval_every: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), TrainError> {
        if self.batch_size == 0 {
            return Err(TrainError::Config("batch_size must be at least 1".into()));
        }
        if !(self.data_fraction > 0.0 && self.data_fraction <= 1.0) {
            return Err(TrainError::Config(alloc::format!(
                "data_fraction must be in (0, 1], got {}",
                self.data_fraction
            )));
        }
        let finite = [self.learning_rate, self.beta1, self.beta2, self.epsilon, self.clip_norm];
        if finite.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(TrainError::Config("optimizer hyperparameters must be finite and non-negative".into()));
        }
        if self.beta1 >= 1.0 || self.beta2 >= 1.0 {
            return Err(TrainError::Config("Adam betas must be below 1".into()));
        }
        Ok(())
    }
}

/// Indices of the first `⌈fraction·N⌉` items after a seeded shuffle, split
/// sequentially into batches of `batch_size` (the last may be short).
pub fn make_batches(
    len: usize,
    batch_size: usize,
    shuffle_seed: u64,
    data_fraction: f64,
) -> Result<Vec<Vec<usize>>, TrainError> {
    if len == 0 {
        return Err(TrainError::Data("cannot batch an empty dataset".into()));
    }
    if batch_size == 0 {
        return Err(TrainError::Config("batch_size must be at least 1".into()));
    }
    if !(data_fraction > 0.0 && data_fraction <= 1.0) {
        return Err(TrainError::Config(alloc::format!("data_fraction must be in (0, 1], got {data_fraction}")));
    }
    let mut order: Vec<usize> = (0..len).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle_seed));
    let keep = (libm::ceil(data_fraction * len as f64) as usize).clamp(1, len);
    order.truncate(keep);
    Ok(order.chunks(batch_size).map(<[usize]>::to_vec).collect())
}

/// Adam moments over a flat parameter array.
#[derive(Clone, Debug, PartialEq)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
}

impl AdamState {
    pub fn new(len: usize) -> Self {
        Self { m: vec![0.0; len], v: vec![0.0; len], t: 0 }
    }
}

/// What one optimizer step did to the gradient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepReport {
    /// Global L2 norm before clipping.
    pub grad_norm: f64,
    /// Factor applied to the gradient (1 when not clipped).
    pub clip_scale: f64,
}

/// One Adam step with bias correction, after clipping `grads` to the
/// configured global norm. `grads` holds the clipped gradient on return.
pub fn adam_step(
    params: &mut [f64],
    grads: &mut [f64],
    state: &mut AdamState,
    hyper: &TrainConfig,
) -> Result<StepReport, TrainError> {
    if params.len() != grads.len() || state.m.len() != params.len() || state.v.len() != params.len() {
        return Err(TrainError::Data(alloc::format!(
            "optimizer shapes disagree: {} parameters, {} gradients, {} moments",
            params.len(),
            grads.len(),
            state.m.len()
        )));
    }
    if let Some(i) = grads.iter().position(|g| !g.is_finite()) {
        return Err(TrainError::Numeric(alloc::format!(
            "non-finite gradient {} at parameter index {i} (step {})",
            grads[i],
            state.t + 1
        )));
    }
    let grad_norm = libm::sqrt(grads.iter().map(|g| g * g).sum());
    let clip_scale = if hyper.clip_norm > 0.0 && grad_norm > hyper.clip_norm { hyper.clip_norm / grad_norm } else { 1.0 };
    if clip_scale != 1.0 {
        grads.iter_mut().for_each(|g| *g *= clip_scale);
    }
    state.t += 1;
    let t = state.t as f64;
    let c1 = 1.0 - libm::pow(hyper.beta1, t);
    let c2 = 1.0 - libm::pow(hyper.beta2, t);
    for i in 0..params.len() {
        let g = grads[i];
        state.m[i] = hyper.beta1 * state.m[i] + (1.0 - hyper.beta1) * g;
        state.v[i] = hyper.beta2 * state.v[i] + (1.0 - hyper.beta2) * g * g;
        let m_hat = state.m[i] / c1;
        let v_hat = state.v[i] / c2;
        params[i] -= hyper.learning_rate * m_hat / (libm::sqrt(v_hat) + hyper.epsilon);
    }
    Ok(StepReport { grad_norm, clip_scale })
}

/// Loss and flat gradient for one example.
pub type ExampleGradient = (ForwardLosses, Vec<f64>);

/// Computes per-example gradients for a batch. Implementations may run in
/// parallel but must return results in batch order.
pub trait BatchExecutor {
    fn gradients(
        &self,
        model: &MultiTaskModel,
        batch: &[&EncodedExample],
    ) -> Vec<Result<ExampleGradient, ModelError>>;
}

/// Evaluates examples one after another on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl BatchExecutor for Sequential {
    fn gradients(
        &self,
        model: &MultiTaskModel,
        batch: &[&EncodedExample],
    ) -> Vec<Result<ExampleGradient, ModelError>> {
        batch.iter().map(|ex| example_gradient(model, ex)).collect()
    }
}

/// Joint loss and its flat gradient in canonical parameter order.
pub fn example_gradient(model: &MultiTaskModel, example: &EncodedExample) -> Result<ExampleGradient, ModelError> {
    let (losses, grads) = model.gradients(example)?;
    Ok((losses, grads.concat()))
}

/// One evaluation record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    /// Optimizer steps taken so far.
    pub step: u64,
    /// 1-based epoch the record was taken in.
    pub epoch: usize,
    /// Mean joint training loss over the examples seen since the previous record.
    pub train_loss: f64,
    /// Mean per-token cross-entropy on the evaluation set, per decoder.
    pub cross_entropy: BTreeMap<Task, f64>,
    pub perplexity: BTreeMap<Task, f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MetricsLog {
    pub records: Vec<MetricsRecord>,
}

impl MetricsLog {
    /// One JSON object per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("metrics serialize"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self, TrainError> {
        let records = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                serde_json::from_str(l).map_err(|e| TrainError::Data(alloc::format!("metrics line {}: {e}", i + 1)))
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { records })
    }
}

/// Mean per-token teacher-forced cross-entropy per decoder, weighted by
/// target length (END included).
pub fn evaluate_cross_entropy(
    model: &MultiTaskModel,
    data: &[EncodedExample],
) -> Result<BTreeMap<Task, f64>, TrainError> {
    if data.is_empty() {
        return Err(TrainError::Data("evaluation set is empty".into()));
    }
    let mut sums: BTreeMap<Task, (f64, usize)> = BTreeMap::new();
    for ex in data {
        let mut tape = crate::autodiff::Tape::new();
        let bound = model.bind(&mut tape);
        let (_, per) = bound.joint_loss(&mut tape, ex)?;
        for (task, var) in per {
            let n = ex.targets.iter().find(|(t, _)| *t == task).map_or(0, |(_, ids)| ids.len());
            let e = sums.entry(task).or_insert((0.0, 0));
            e.0 += tape.value(var).values()[0] * n as f64;
            e.1 += n;
        }
    }
    Ok(sums.into_iter().map(|(t, (s, n))| (t, s / n as f64)).collect())
}

/// `exp` of [`evaluate_cross_entropy`] for every decoder.
pub fn evaluate_perplexity(model: &MultiTaskModel, data: &[EncodedExample]) -> Result<BTreeMap<Task, f64>, TrainError> {
    Ok(evaluate_cross_entropy(model, data)?.into_iter().map(|(t, ce)| (t, libm::exp(ce))).collect())
}

/// Maps every tuple to ids, failing on the first unknown symbol or missing target.
pub fn encode_dataset(model: &MultiTaskModel, data: &[ExampleTuple]) -> Result<Vec<EncodedExample>, TrainError> {
    data.iter()
        .enumerate()
        .map(|(i, ex)| {
            model.encode_example(ex).map_err(|e| match e {
                ModelError::Vocabulary { .. } | ModelError::Data(_) => {
                    TrainError::Data(alloc::format!("tuple {}: {e}", i + 1))
                }
                other => TrainError::Model(other),
            })
        })
        .collect()
}

fn mix_seed(seed: u64, epoch: u64) -> u64 {
    seed ^ epoch.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Trains `model` in place on `corpus`, evaluating on `eval` on schedule
/// (on the training subset when `eval` is empty).
///
/// The data subset is drawn once from `shuffle_seed`; each epoch then visits
/// it in a fresh seeded order.
pub fn train(
    model: &mut MultiTaskModel,
    corpus: &[ExampleTuple],
    eval: &[ExampleTuple],
    cfg: &TrainConfig,
) -> Result<MetricsLog, TrainError> {
    train_with(model, corpus, eval, cfg, &Sequential, |_| {})
}

/// [`train`] with a custom batch executor and a callback per metrics record.
pub fn train_with<E: BatchExecutor, F: FnMut(&MetricsRecord)>(
    model: &mut MultiTaskModel,
    corpus: &[ExampleTuple],
    eval: &[ExampleTuple],
    cfg: &TrainConfig,
    executor: &E,
    mut on_record: F,
) -> Result<MetricsLog, TrainError> {
    cfg.validate()?;
    let subset: Vec<usize> = make_batches(corpus.len(), corpus.len(), cfg.shuffle_seed, cfg.data_fraction)?.concat();
    let selected: Vec<ExampleTuple> = subset.iter().map(|&i| corpus[i].clone()).collect();
    let train_set = encode_dataset(model, &selected)?;
    let eval_set = if eval.is_empty() { train_set.clone() } else { encode_dataset(model, eval)? };

    let mut params = model.flat_parameters();
    let mut state = AdamState::new(params.len());
    let mut log = MetricsLog::default();
    let (mut loss_sum, mut loss_count) = (0.0, 0usize);

    for epoch in 0..cfg.epochs {
        let batches = make_batches(train_set.len(), cfg.batch_size, mix_seed(cfg.shuffle_seed, epoch as u64), 1.0)?;
        let last = batches.len() - 1;
        for (b, batch) in batches.iter().enumerate() {
            let examples: Vec<&EncodedExample> = batch.iter().map(|&i| &train_set[i]).collect();
            let mut acc = vec![0.0; params.len()];
            for result in executor.gradients(model, &examples) {
                let (losses, grad) = result?;
                if !losses.joint.is_finite() {
                    return Err(TrainError::Numeric(alloc::format!("non-finite loss at step {}", state.t + 1)));
                }
                loss_sum += losses.joint;
                loss_count += 1;
                acc.iter_mut().zip(&grad).for_each(|(a, g)| *a += g);
            }
            let inv = 1.0 / examples.len() as f64;
            acc.iter_mut().for_each(|a| *a *= inv);
            adam_step(&mut params, &mut acc, &mut state, cfg)?;
            model.set_flat_parameters(&params)?;

            let due = if cfg.eval_every == 0 { b == last } else { state.t % cfg.eval_every as u64 == 0 || b == last };
            if due {
                let cross_entropy = evaluate_cross_entropy(model, &eval_set)?;
                let perplexity = cross_entropy.iter().map(|(&t, &ce)| (t, libm::exp(ce))).collect();
                let record = MetricsRecord {
                    step: state.t,
                    epoch: epoch + 1,
                    train_loss: loss_sum / loss_count.max(1) as f64,
                    cross_entropy,
                    perplexity,
                };
                on_record(&record);
                log.records.push(record);
                loss_sum = 0.0;
                loss_count = 0;
            }
        }
    }
    Ok(log)
}

pub const CHECKPOINT_MAGIC: &[u8] = b"MTAE1\n";
pub const CHECKPOINT_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CheckpointError {
    #[error("corrupt checkpoint: bad magic")]
    Magic,
    #[error("corrupt checkpoint: unsupported version {0}")]
    Version(u64),
    #[error("corrupt checkpoint: header: {0}")]
    Header(String),
    #[error("corrupt checkpoint: parameter count: {0}")]
    Count(String),
}

#[derive(Serialize, Deserialize)]
struct Architecture {
    decoders: Vec<Task>,
    rep_size: usize,
    hidden_size: usize,
    max_decode_len: usize,
    seed: u64,
}

#[derive(Serialize, Deserialize)]
struct Header {
    version: u64,
    config: Architecture,
    vocabularies: Vocabularies,
}

/// Configuration plus the flat parameter array in canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelCheckpoint {
    pub config: ModelConfig,
    pub parameters: Vec<f64>,
}

impl ModelCheckpoint {
    pub fn from_model(model: &MultiTaskModel) -> Self {
        Self { config: model.config().clone(), parameters: model.flat_parameters() }
    }

    pub fn to_model(&self) -> Result<MultiTaskModel, ModelError> {
        MultiTaskModel::from_flat_parameters(self.config.clone(), &self.parameters)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let c = &self.config;
        let header = Header {
            version: CHECKPOINT_VERSION,
            config: Architecture {
                decoders: c.decoders.clone(),
                rep_size: c.rep_size,
                hidden_size: c.hidden_size,
                max_decode_len: c.max_decode_len,
                seed: c.seed,
            },
            vocabularies: c.vocabularies.clone(),
        };
        let json = serde_json::to_vec(&header).expect("header serializes");
        let count = alloc::format!("{}\n", self.parameters.len());
        let mut out = Vec::with_capacity(CHECKPOINT_MAGIC.len() + json.len() + count.len() + 1 + 8 * self.parameters.len());
        out.extend_from_slice(CHECKPOINT_MAGIC);
        out.extend_from_slice(&json);
        out.push(0);
        out.extend_from_slice(count.as_bytes());
        for p in &self.parameters {
            out.extend_from_slice(&p.to_le_bytes());
        }
        out
    }

    /// Parses and validates magic, version, header and parameter count.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CheckpointError> {
        let rest = bytes.strip_prefix(CHECKPOINT_MAGIC).ok_or(CheckpointError::Magic)?;
        let nul = rest
            .iter()
            .position(|&b| b == 0)
            .ok_or_else(|| CheckpointError::Header("missing NUL terminator".into()))?;
        let value: serde_json::Value =
            serde_json::from_slice(&rest[..nul]).map_err(|e| CheckpointError::Header(alloc::format!("{e}")))?;
        match value.get("version").and_then(serde_json::Value::as_u64) {
            Some(CHECKPOINT_VERSION) => {}
            Some(v) => return Err(CheckpointError::Version(v)),
            None => return Err(CheckpointError::Header("missing version".into())),
        }
        let header: Header =
            serde_json::from_value(value).map_err(|e| CheckpointError::Header(alloc::format!("{e}")))?;
        let a = header.config;
        let config = ModelConfig {
            decoders: a.decoders,
            rep_size: a.rep_size,
            hidden_size: a.hidden_size,
            vocabularies: header.vocabularies,
            max_decode_len: a.max_decode_len,
            seed: a.seed,
        };
        let expected = MultiTaskModel::zeros(config.clone())
            .map_err(|e| CheckpointError::Header(alloc::format!("{e}")))?
            .parameter_count();

        let rest = &rest[nul + 1..];
        let nl = rest
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| CheckpointError::Count("missing count line".into()))?;
        let declared: usize = core::str::from_utf8(&rest[..nl])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| CheckpointError::Count("count is not a decimal integer".into()))?;
        if declared != expected {
            return Err(CheckpointError::Count(alloc::format!(
                "header declares {declared} parameters, configuration needs {expected}"
            )));
        }
        let data = &rest[nl + 1..];
        if data.len() != 8 * declared {
            return Err(CheckpointError::Count(alloc::format!(
                "expected {} parameter bytes, found {}",
                8 * declared,
                data.len()
            )));
        }
        let parameters = data
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
            .collect();
        Ok(Self { config, parameters })
    }
}
