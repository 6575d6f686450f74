//! Multi-task sequence autoencoder.
//!
//! A character-level LSTM encoder reads the English input from a zero state.
//! Its final hidden state passes through a dense `tanh` layer, the
//! representation layer, whose output is the sentence representation. Each
//! enabled decoder owns a dense adapter mapping the representation to its
//! initial `(h, c)`, an LSTM, and an output projection. The representation
//! enters a decoder only through that initial state.
//!
//! Inputs to every LSTM are one-hot symbols. The input block of an LSTM weight
//! matrix is therefore addressed by row lookup rather than a dense product;
//! [`lstm_cell_step`] also accepts dense inputs for the general case.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::autodiff::{AutodiffError, Gradients, Tape, Tensor, Var};
use crate::corpus::{ExampleTuple, Vocabularies, Vocabulary, END, START};
use crate::task::Task;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("symbol {symbol:?} is not in the {task} vocabulary")]
    Vocabulary { task: Task, symbol: String },
    #[error("data error: {0}")]
    Data(String),
    #[error(transparent)]
    Autodiff(#[from] AutodiffError),
}

/// Architecture and vocabularies of a [`MultiTaskModel`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    /// Enabled decoders in parameter order. Always contains [`Task::Rep`].
    pub decoders: Vec<Task>,
    pub rep_size: usize,
    pub hidden_size: usize,
    pub vocabularies: Vocabularies,
    /// Cap on tokens emitted by greedy decoding.
    pub max_decode_len: usize,
    pub seed: u64,
}

impl ModelConfig {
    pub const DEFAULT_HIDDEN: usize = 128;
    pub const DEFAULT_REP: usize = 64;
    pub const DEFAULT_MAX_DECODE_LEN: usize = 120;

    /// Desk-scale defaults for the given decoders.
    pub fn new(decoders: Vec<Task>, vocabularies: Vocabularies) -> Self {
        Self {
            decoders,
            rep_size: Self::DEFAULT_REP,
            hidden_size: Self::DEFAULT_HIDDEN,
            vocabularies,
            max_decode_len: Self::DEFAULT_MAX_DECODE_LEN,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.decoders.is_empty() {
            return Err(ModelError::Config("no decoders enabled".into()));
        }
        if !self.decoders.contains(&Task::Rep) {
            return Err(ModelError::Config("the REP decoder is mandatory".into()));
        }
        for (i, t) in self.decoders.iter().enumerate() {
            if self.decoders[..i].contains(t) {
                return Err(ModelError::Config(alloc::format!("decoder {t} listed twice")));
            }
            if self.vocabularies.for_task(*t).is_none() {
                return Err(ModelError::Config(alloc::format!("no vocabulary for decoder {t}")));
            }
        }
        if self.rep_size == 0 || self.hidden_size == 0 {
            return Err(ModelError::Config("rep_size and hidden_size must be positive".into()));
        }
        Ok(())
    }

    pub fn vocabulary(&self, task: Task) -> Option<&Vocabulary> {
        self.vocabularies.for_task(task)
    }

    pub fn input_vocabulary(&self) -> &Vocabulary {
        &self.vocabularies.en
    }
}

/// Gate weights `[(input + hidden) × 4·hidden]` and biases `[4·hidden]`.
///
/// Column blocks are ordered input gate, forget gate, cell candidate, output gate.
#[derive(Clone, Debug, PartialEq)]
pub struct LstmParams {
    pub weights: Tensor,
    pub bias: Tensor,
    input_size: usize,
    hidden_size: usize,
}

impl LstmParams {
    pub fn zeros(input_size: usize, hidden_size: usize) -> Self {
        Self {
            weights: Tensor::zeros(&[input_size + hidden_size, 4 * hidden_size]),
            bias: Tensor::zeros(&[4 * hidden_size]),
            input_size,
            hidden_size,
        }
    }

    pub fn input_size(&self) -> usize {
        self.input_size
    }

    pub fn hidden_size(&self) -> usize {
        self.hidden_size
    }

    pub fn bind<'m>(&'m self, tape: &mut Tape<'m>) -> LstmVars {
        LstmVars {
            weights: tape.param(&self.weights),
            bias: tape.param(&self.bias),
            input_size: self.input_size,
            hidden_size: self.hidden_size,
        }
    }
}

/// Affine layer `x · weights + bias` with weights `[in × out]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dense {
    pub weights: Tensor,
    pub bias: Tensor,
}

impl Dense {
    pub fn zeros(input: usize, output: usize) -> Self {
        Self { weights: Tensor::zeros(&[input, output]), bias: Tensor::zeros(&[output]) }
    }

    fn bind<'m>(&'m self, tape: &mut Tape<'m>) -> DenseVars {
        DenseVars { weights: tape.param(&self.weights), bias: tape.param(&self.bias) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecoderParams {
    pub task: Task,
    /// Representation → `[h; c]`.
    pub adapter: Dense,
    pub lstm: LstmParams,
    /// Hidden state → logits over the task vocabulary.
    pub projection: Dense,
}

/// Tape handles for an [`LstmParams`].
#[derive(Clone, Copy, Debug)]
pub struct LstmVars {
    pub weights: Var,
    pub bias: Var,
    pub input_size: usize,
    pub hidden_size: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct DenseVars {
    pub weights: Var,
    pub bias: Var,
}

impl DenseVars {
    fn apply(&self, tape: &mut Tape<'_>, x: Var) -> Result<Var, AutodiffError> {
        let y = tape.matmul(x, self.weights)?;
        tape.add(y, self.bias)
    }
}

/// Input to one LSTM step.
#[derive(Clone, Copy, Debug)]
pub enum LstmInput {
    Dense(Var),
    /// Index of the hot component of a one-hot input.
    OneHot(usize),
}

/// One LSTM step:
/// `[i, f, g, o] = [x, h] · W + b`, `c' = σ(f)⊙c + σ(i)⊙tanh(g)`, `h' = σ(o)⊙tanh(c')`.
pub fn lstm_cell_step(
    tape: &mut Tape<'_>,
    x: LstmInput,
    h: Var,
    c: Var,
    p: &LstmVars,
) -> Result<(Var, Var), AutodiffError> {
    let hs = p.hidden_size;
    if tape.value(h).shape() != [hs] || tape.value(c).shape() != [hs] {
        return Err(AutodiffError::Dimension {
            op: "lstm_cell_step",
            left: tape.value(h).shape().to_vec(),
            right: vec![hs],
        });
    }
    let pre = match x {
        LstmInput::Dense(xv) => {
            if tape.value(xv).shape() != [p.input_size] {
                return Err(AutodiffError::Dimension {
                    op: "lstm_cell_step",
                    left: tape.value(xv).shape().to_vec(),
                    right: vec![p.input_size],
                });
            }
            let xh = tape.concat(xv, h)?;
            tape.matmul(xh, p.weights)?
        }
        LstmInput::OneHot(id) => {
            if id >= p.input_size {
                return Err(AutodiffError::Index { index: id, len: p.input_size });
            }
            let xw = tape.gather_row(p.weights, id)?;
            let hw = tape.vecmat_rows(h, p.weights, p.input_size)?;
            tape.add(xw, hw)?
        }
    };
    let pre = tape.add(pre, p.bias)?;
    let i = tape.slice(pre, 0, hs)?;
    let f = tape.slice(pre, hs, hs)?;
    let g = tape.slice(pre, 2 * hs, hs)?;
    let o = tape.slice(pre, 3 * hs, hs)?;
    let i = tape.sigmoid(i);
    let f = tape.sigmoid(f);
    let g = tape.tanh(g);
    let o = tape.sigmoid(o);
    let fc = tape.mul(f, c)?;
    let ig = tape.mul(i, g)?;
    let c_next = tape.add(fc, ig)?;
    let tc = tape.tanh(c_next);
    let h_next = tape.mul(o, tc)?;
    Ok((h_next, c_next))
}

/// A sentence representation: the representation layer's output.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation(Vec<f64>);

impl Representation {
    /// Wraps a vector, rejecting non-finite components.
    pub fn new(vector: Vec<f64>) -> Result<Self, ModelError> {
        if vector.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::Data("representation has a non-finite component".into()));
        }
        Ok(Self(vector))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.0.iter().map(|v| v * v).sum())
    }
}

/// A tuple mapped to ids; every target ends with END.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedExample {
    pub input: Vec<usize>,
    pub targets: Vec<(Task, Vec<usize>)>,
}

/// Per-decoder mean cross-entropies and their unweighted sum.
#[derive(Clone, Debug, PartialEq)]
pub struct ForwardLosses {
    pub per_decoder: BTreeMap<Task, f64>,
    pub joint: f64,
}

/// Result of a teacher-forced decoder pass.
#[derive(Clone, Debug, PartialEq)]
pub struct TeacherForced {
    /// Mean per-step cross-entropy.
    pub loss: f64,
    /// Logits emitted at each step.
    pub logits: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiTaskModel {
    config: ModelConfig,
    pub encoder: LstmParams,
    pub rep_layer: Dense,
    pub decoders: Vec<DecoderParams>,
}

/// Model parameters bound to a tape.
pub struct BoundModel<'m> {
    model: &'m MultiTaskModel,
    encoder: LstmVars,
    rep_layer: DenseVars,
    decoders: Vec<(Task, DenseVars, LstmVars, DenseVars)>,
}

impl MultiTaskModel {
    /// All-zero parameters.
    pub fn zeros(config: ModelConfig) -> Result<Self, ModelError> {
        config.validate()?;
        let (h, r) = (config.hidden_size, config.rep_size);
        let encoder = LstmParams::zeros(config.input_vocabulary().len(), h);
        let rep_layer = Dense::zeros(h, r);
        let decoders = config
            .decoders
            .iter()
            .map(|&task| {
                let v = config.vocabulary(task).expect("validated").len();
                DecoderParams {
                    task,
                    adapter: Dense::zeros(r, 2 * h),
                    lstm: LstmParams::zeros(v, h),
                    projection: Dense::zeros(h, v),
                }
            })
            .collect();
        Ok(Self { config, encoder, rep_layer, decoders })
    }

    /// Parameters drawn from `uniform(-s, s)` with `s = 1/sqrt(fan_in)`, in
    /// canonical order, from the config seed. A bias shares its weight's `s`.
    pub fn new(config: ModelConfig) -> Result<Self, ModelError> {
        let mut model = Self::zeros(config)?;
        let mut rng = ChaCha8Rng::seed_from_u64(model.config.seed);
        let mut scale = 1.0;
        for t in model.parameters_mut() {
            if t.rank() == 2 {
                scale = 1.0 / libm::sqrt(t.rows() as f64);
            }
            for v in t.values_mut() {
                *v = rng.gen_range(-scale..scale);
            }
        }
        Ok(model)
    }

    /// Rebuilds a model from a flat parameter array in canonical order.
    pub fn from_flat_parameters(config: ModelConfig, flat: &[f64]) -> Result<Self, ModelError> {
        let mut model = Self::zeros(config)?;
        model.set_flat_parameters(flat)?;
        Ok(model)
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn decoder(&self, task: Task) -> Option<&DecoderParams> {
        self.decoders.iter().find(|d| d.task == task)
    }

    /// Parameters in canonical order: encoder W, b; representation W, b; then
    /// per decoder in config order adapter W, b; LSTM W, b; projection W, b.
    pub fn parameters(&self) -> Vec<&Tensor> {
        let mut out = vec![&self.encoder.weights, &self.encoder.bias, &self.rep_layer.weights, &self.rep_layer.bias];
        for d in &self.decoders {
            out.extend([
                &d.adapter.weights,
                &d.adapter.bias,
                &d.lstm.weights,
                &d.lstm.bias,
                &d.projection.weights,
                &d.projection.bias,
            ]);
        }
        out
    }

    pub fn parameters_mut(&mut self) -> Vec<&mut Tensor> {
        let mut out = vec![
            &mut self.encoder.weights,
            &mut self.encoder.bias,
            &mut self.rep_layer.weights,
            &mut self.rep_layer.bias,
        ];
        for d in &mut self.decoders {
            out.extend([
                &mut d.adapter.weights,
                &mut d.adapter.bias,
                &mut d.lstm.weights,
                &mut d.lstm.bias,
                &mut d.projection.weights,
                &mut d.projection.bias,
            ]);
        }
        out
    }

    pub fn parameter_count(&self) -> usize {
        self.parameters().iter().map(|t| t.len()).sum()
    }

    pub fn flat_parameters(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.parameter_count());
        for t in self.parameters() {
            out.extend_from_slice(t.values());
        }
        out
    }

    pub fn set_flat_parameters(&mut self, flat: &[f64]) -> Result<(), ModelError> {
        let expected = self.parameter_count();
        if flat.len() != expected {
            return Err(ModelError::Data(alloc::format!(
                "expected {expected} parameters, got {}",
                flat.len()
            )));
        }
        let mut offset = 0;
        for t in self.parameters_mut() {
            let n = t.len();
            t.values_mut().copy_from_slice(&flat[offset..offset + n]);
            offset += n;
        }
        Ok(())
    }

    /// Registers every parameter on `tape`, in canonical order.
    pub fn bind<'m>(&'m self, tape: &mut Tape<'m>) -> BoundModel<'m> {
        let encoder = self.encoder.bind(tape);
        let rep_layer = self.rep_layer.bind(tape);
        let decoders = self
            .decoders
            .iter()
            .map(|d| (d.task, d.adapter.bind(tape), d.lstm.bind(tape), d.projection.bind(tape)))
            .collect();
        BoundModel { model: self, encoder, rep_layer, decoders }
    }

    fn symbol_ids(&self, task: Task, text: &str) -> Result<Vec<usize>, ModelError> {
        let vocab = self
            .config
            .vocabulary(task)
            .ok_or_else(|| ModelError::Config(alloc::format!("decoder {task} is not enabled")))?;
        vocab.encode_strict(text).map_err(|symbol| ModelError::Vocabulary { task, symbol })
    }

    /// Maps English text to encoder input ids, rejecting unknown characters.
    pub fn input_ids(&self, sentence: &str) -> Result<Vec<usize>, ModelError> {
        self.symbol_ids(Task::Rep, sentence)
    }

    /// Target ids for `task` with END appended.
    pub fn target_ids(&self, task: Task, text: &str) -> Result<Vec<usize>, ModelError> {
        let mut ids = self.symbol_ids(task, text)?;
        ids.push(END);
        Ok(ids)
    }

    /// Maps a tuple to ids for every enabled decoder.
    pub fn encode_example(&self, example: &ExampleTuple) -> Result<EncodedExample, ModelError> {
        let input = self.input_ids(&example.input)?;
        let mut targets = Vec::with_capacity(self.config.decoders.len());
        for &task in &self.config.decoders {
            let text = match task {
                Task::Rep => example.target(task).unwrap_or(&example.input),
                _ => example
                    .target(task)
                    .ok_or_else(|| ModelError::Data(alloc::format!("example has no {task} target")))?,
            };
            targets.push((task, self.target_ids(task, text)?));
        }
        Ok(EncodedExample { input, targets })
    }

    pub fn encode_ids(&self, ids: &[usize]) -> Result<Representation, ModelError> {
        let mut tape = Tape::new();
        let bound = self.bind(&mut tape);
        let r = bound.encode(&mut tape, ids)?;
        Representation::new(tape.value(r).values().to_vec())
    }

    /// Representation of `sentence`.
    pub fn encode(&self, sentence: &str) -> Result<Representation, ModelError> {
        self.encode_ids(&self.input_ids(sentence)?)
    }

    fn check_representation(&self, r: &Representation) -> Result<(), ModelError> {
        if r.len() != self.config.rep_size {
            return Err(ModelError::Data(alloc::format!(
                "representation has {} components, model expects {}",
                r.len(),
                self.config.rep_size
            )));
        }
        Ok(())
    }

    /// Teacher-forced pass of decoder `task` over `target` (which must end with END).
    pub fn decode_teacher_forced(
        &self,
        r: &Representation,
        target: &[usize],
        task: Task,
    ) -> Result<TeacherForced, ModelError> {
        self.check_representation(r)?;
        let mut tape = Tape::new();
        let bound = self.bind(&mut tape);
        let rv = tape.leaf(Tensor::vector(r.as_slice().to_vec()));
        let (loss, logits) = bound.decode_loss(&mut tape, rv, task, target)?;
        Ok(TeacherForced {
            loss: tape.value(loss).values()[0],
            logits: logits.iter().map(|&l| tape.value(l).values().to_vec()).collect(),
        })
    }

    /// Greedy decoding from `r`. Returns emitted ids, END excluded; stops at
    /// END or after `max_decode_len` tokens. Argmax ties go to the lowest id.
    pub fn decode_greedy(&self, r: &Representation, task: Task) -> Result<Vec<usize>, ModelError> {
        self.check_representation(r)?;
        let mut tape = Tape::new();
        let bound = self.bind(&mut tape);
        let (adapter, lstm, proj) = bound.decoder_vars(task)?;
        let rv = tape.leaf(Tensor::vector(r.as_slice().to_vec()));
        let (mut h, mut c) = initial_state(&mut tape, adapter, rv, lstm.hidden_size)?;
        let mut prev = START;
        let mut out = Vec::new();
        while out.len() < self.config.max_decode_len {
            (h, c) = lstm_cell_step(&mut tape, LstmInput::OneHot(prev), h, c, &lstm)?;
            let logits = proj.apply(&mut tape, h)?;
            let next = argmax(tape.value(logits).values());
            if next == END {
                break;
            }
            out.push(next);
            prev = next;
        }
        Ok(out)
    }

    /// Greedy decoding rendered as text (control symbols dropped).
    pub fn decode_greedy_text(&self, r: &Representation, task: Task) -> Result<String, ModelError> {
        let ids = self.decode_greedy(r, task)?;
        Ok(self.config.vocabulary(task).expect("decoder enabled").decode(&ids))
    }

    /// One encode followed by a teacher-forced pass of every enabled decoder.
    pub fn forward(&self, example: &ExampleTuple) -> Result<ForwardLosses, ModelError> {
        let encoded = self.encode_example(example)?;
        let mut tape = Tape::new();
        let bound = self.bind(&mut tape);
        let (joint, per) = bound.joint_loss(&mut tape, &encoded)?;
        Ok(losses_from(&tape, joint, &per))
    }

    /// Joint loss and its gradient for every parameter, in canonical order.
    pub fn gradients(&self, example: &EncodedExample) -> Result<(ForwardLosses, Vec<Vec<f64>>), ModelError> {
        let mut tape = Tape::new();
        let bound = self.bind(&mut tape);
        let (joint, per) = bound.joint_loss(&mut tape, example)?;
        let mut grads = tape.backward(joint)?;
        let params = bound.parameter_vars();
        let shapes = self.parameters();
        let out = params
            .iter()
            .zip(shapes)
            .map(|(&v, t)| grads.take(v).unwrap_or_else(|| vec![0.0; t.len()]))
            .collect();
        Ok((losses_from(&tape, joint, &per), out))
    }
}

fn losses_from(tape: &Tape<'_>, joint: Var, per: &[(Task, Var)]) -> ForwardLosses {
    ForwardLosses {
        per_decoder: per.iter().map(|&(t, v)| (t, tape.value(v).values()[0])).collect(),
        joint: tape.value(joint).values()[0],
    }
}

/// Index of the largest value; ties resolve to the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

fn initial_state(
    tape: &mut Tape<'_>,
    adapter: DenseVars,
    r: Var,
    hidden: usize,
) -> Result<(Var, Var), AutodiffError> {
    let state = adapter.apply(tape, r)?;
    Ok((tape.slice(state, 0, hidden)?, tape.slice(state, hidden, hidden)?))
}

impl<'m> BoundModel<'m> {
    pub fn model(&self) -> &'m MultiTaskModel {
        self.model
    }

    /// Canonical-order parameter handles.
    pub fn parameter_vars(&self) -> Vec<Var> {
        let mut out = vec![self.encoder.weights, self.encoder.bias, self.rep_layer.weights, self.rep_layer.bias];
        for (_, a, l, p) in &self.decoders {
            out.extend([a.weights, a.bias, l.weights, l.bias, p.weights, p.bias]);
        }
        out
    }

    fn decoder_vars(&self, task: Task) -> Result<(DenseVars, LstmVars, DenseVars), ModelError> {
        self.decoders
            .iter()
            .find(|d| d.0 == task)
            .map(|&(_, a, l, p)| (a, l, p))
            .ok_or_else(|| ModelError::Config(alloc::format!("decoder {task} is not enabled")))
    }

    /// Runs the encoder over `ids` and returns the representation node.
    pub fn encode(&self, tape: &mut Tape<'_>, ids: &[usize]) -> Result<Var, ModelError> {
        let hs = self.encoder.hidden_size;
        let mut h = tape.leaf(Tensor::zeros(&[hs]));
        let mut c = tape.leaf(Tensor::zeros(&[hs]));
        for &id in ids {
            (h, c) = lstm_cell_step(tape, LstmInput::OneHot(id), h, c, &self.encoder)?;
        }
        let pre = self.rep_layer.apply(tape, h)?;
        Ok(tape.tanh(pre))
    }

    /// Teacher-forced mean cross-entropy of decoder `task` and its per-step logits.
    pub fn decode_loss(
        &self,
        tape: &mut Tape<'_>,
        r: Var,
        task: Task,
        target: &[usize],
    ) -> Result<(Var, Vec<Var>), ModelError> {
        if target.last() != Some(&END) {
            return Err(ModelError::Data("decoder target must be non-empty and end with END".into()));
        }
        let (adapter, lstm, proj) = self.decoder_vars(task)?;
        let (mut h, mut c) = initial_state(tape, adapter, r, lstm.hidden_size)?;
        let mut prev = START;
        let mut logits = Vec::with_capacity(target.len());
        let mut losses = Vec::with_capacity(target.len());
        for &t in target {
            (h, c) = lstm_cell_step(tape, LstmInput::OneHot(prev), h, c, &lstm)?;
            let l = proj.apply(tape, h)?;
            losses.push(tape.softmax_cross_entropy(l, t)?);
            logits.push(l);
            prev = t;
        }
        let total = tape.add_scalars(&losses)?;
        Ok((tape.scale(total, 1.0 / target.len() as f64), logits))
    }

    /// Unweighted sum of per-decoder mean losses, plus each decoder's loss node.
    pub fn joint_loss(
        &self,
        tape: &mut Tape<'_>,
        example: &EncodedExample,
    ) -> Result<(Var, Vec<(Task, Var)>), ModelError> {
        let r = self.encode(tape, &example.input)?;
        let mut per = Vec::with_capacity(self.decoders.len());
        for &(task, ..) in &self.decoders {
            let target = example
                .targets
                .iter()
                .find(|(t, _)| *t == task)
                .map(|(_, ids)| ids)
                .ok_or_else(|| ModelError::Data(alloc::format!("example has no {task} target")))?;
            let (loss, _) = self.decode_loss(tape, r, task, target)?;
            per.push((task, loss));
        }
        let vars: Vec<Var> = per.iter().map(|&(_, v)| v).collect();
        let joint = tape.add_scalars(&vars)?;
        Ok((joint, per))
    }
}

/// Gradient of the joint loss as seen through a [`Gradients`] map, for tests
/// and diagnostics that hold their own tape.
pub fn parameter_gradients(grads: &Gradients, bound: &BoundModel<'_>) -> Vec<Option<Vec<f64>>> {
    bound.parameter_vars().iter().map(|&v| grads.get(v).map(<[f64]>::to_vec)).collect()
}
