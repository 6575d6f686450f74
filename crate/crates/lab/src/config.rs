//! Flat `key = value` experiment configuration.
//!
//! One setting per line; `#` starts a comment; blank lines are ignored.
//! Unknown keys are rejected. Every key has a default.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use mtae_core::corpus::Vocabularies;
use mtae_core::seqmodel::ModelConfig;
use mtae_core::training::TrainConfig;
use mtae_core::Task;

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub decoders: Vec<Task>,
    pub hidden_size: usize,
    pub rep_size: usize,
    pub max_decode_len: usize,
    pub model_seed: u64,
    pub train: TrainConfig,
    /// Corpus file; the command line may override it.
    pub corpus: Option<PathBuf>,
    /// Hold out every tuple whose index hashes into the test split.
    pub holdout: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            decoders: vec![Task::Rep],
            hidden_size: ModelConfig::DEFAULT_HIDDEN,
            rep_size: ModelConfig::DEFAULT_REP,
            max_decode_len: ModelConfig::DEFAULT_MAX_DECODE_LEN,
            model_seed: 0,
            train: TrainConfig::default(),
            corpus: None,
            holdout: true,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| anyhow!("{key}: cannot parse {value:?}: {e}"))
}

/// Accepts `1/3` style fractions as well as decimals.
fn parse_fraction(key: &str, value: &str) -> Result<f64> {
    match value.split_once('/') {
        Some((n, d)) => {
            let (n, d): (f64, f64) = (parse(key, n.trim())?, parse(key, d.trim())?);
            Ok(n / d)
        }
        None => parse(key, value),
    }
}

impl ExperimentConfig {
    pub const KEYS: [&'static str; 18] = [
        "decoders",
        "hidden_size",
        "rep_size",
        "max_decode_len",
        "model_seed",
        "epochs",
        "batch_size",
        "learning_rate",
        "beta1",
        "beta2",
        "epsilon",
        "clip_norm",
        "data_fraction",
        "shuffle_seed",
        "eval_every",
        "corpus",
        "holdout",
        "seed",
    ];

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key = value", i + 1))?;
            cfg.set(key.trim(), value.trim()).with_context(|| format!("line {}", i + 1))?;
        }
        cfg.train.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("config {}", path.display()))
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let t = &mut self.train;
        match key {
            "decoders" => {
                self.decoders = value
                    .split(',')
                    .map(|s| s.trim().parse::<Task>().map_err(|e| anyhow!("decoders: {e}")))
                    .collect::<Result<_>>()?
            }
            "hidden_size" => self.hidden_size = parse(key, value)?,
            "rep_size" => self.rep_size = parse(key, value)?,
            "max_decode_len" => self.max_decode_len = parse(key, value)?,
            "model_seed" => self.model_seed = parse(key, value)?,
            "epochs" => t.epochs = parse(key, value)?,
            "batch_size" => t.batch_size = parse(key, value)?,
            "learning_rate" => t.learning_rate = parse(key, value)?,
            "beta1" => t.beta1 = parse(key, value)?,
            "beta2" => t.beta2 = parse(key, value)?,
            "epsilon" => t.epsilon = parse(key, value)?,
            "clip_norm" => t.clip_norm = parse(key, value)?,
            "data_fraction" => t.data_fraction = parse_fraction(key, value)?,
            "shuffle_seed" => t.shuffle_seed = parse(key, value)?,
            "eval_every" => t.eval_every = parse(key, value)?,
            "corpus" => self.corpus = Some(PathBuf::from(value)),
            "holdout" => self.holdout = parse(key, value)?,
            "seed" => {
                // Shorthand for both seeds.
                self.model_seed = parse(key, value)?;
                t.shuffle_seed = self.model_seed;
            }
            other => bail!("unknown key {other:?}"),
        }
        Ok(())
    }

    pub fn model_config(&self, vocabularies: Vocabularies) -> ModelConfig {
        ModelConfig {
            decoders: self.decoders.clone(),
            rep_size: self.rep_size,
            hidden_size: self.hidden_size,
            vocabularies,
            max_decode_len: self.max_decode_len,
            seed: self.model_seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let cfg = ExperimentConfig::parse(
            "# smoke run\ndecoders = REP, de ,POS\nhidden_size=32\nepochs = 1 # one pass\n\ndata_fraction = 1/3\n",
        )
        .unwrap();
        assert_eq!(cfg.decoders, vec![Task::Rep, Task::De, Task::Pos]);
        assert_eq!(cfg.hidden_size, 32);
        assert_eq!(cfg.rep_size, 64);
        assert_eq!(cfg.train.epochs, 1);
        assert!((cfg.train.data_fraction - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(cfg.train.learning_rate, 1e-3);
        assert_eq!(ExperimentConfig::parse("").unwrap(), ExperimentConfig::default());
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(format!("{:#}", ExperimentConfig::parse("hiden_size = 3").unwrap_err()).contains("unknown key"));
        assert!(ExperimentConfig::parse("epochs = many").is_err());
        assert!(ExperimentConfig::parse("epochs").is_err());
        assert!(ExperimentConfig::parse("data_fraction = 0").is_err());
        assert!(ExperimentConfig::parse("decoders = REP,XX").is_err());
    }

    #[test]
    fn every_key_is_settable() {
        let mut cfg = ExperimentConfig::default();
        for key in ExperimentConfig::KEYS {
            let value = match key {
                "decoders" => "REP",
                "corpus" => "c.tsv",
                "holdout" => "false",
                "data_fraction" | "learning_rate" | "beta1" | "beta2" | "epsilon" | "clip_norm" => "0.5",
                _ => "3",
            };
            cfg.set(key, value).unwrap();
        }
    }
}
