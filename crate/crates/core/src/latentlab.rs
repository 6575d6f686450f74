//! Walks through representation space: straight-line interpolation between
//! two sentences and representation arithmetic `r1 - r2 + r3`.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::seqmodel::{ModelError, MultiTaskModel, Representation};
use crate::task::Task;

pub const DEFAULT_STEPS: usize = 7;

fn same_len(a: &Representation, b: &Representation) -> Result<(), ModelError> {
    if a.len() != b.len() {
        return Err(ModelError::Data(alloc::format!(
            "representation dimensions differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// `steps` evenly spaced points `(1 - α)·r1 + α·r2`, `α = i / (steps - 1)`.
pub fn interpolate(r1: &Representation, r2: &Representation, steps: usize) -> Result<Vec<Representation>, ModelError> {
    same_len(r1, r2)?;
    if steps < 2 {
        return Err(ModelError::Data("interpolation needs at least two steps".into()));
    }
    (0..steps)
        .map(|i| {
            let alpha = i as f64 / (steps - 1) as f64;
            let v = r1.as_slice().iter().zip(r2.as_slice()).map(|(a, b)| (1.0 - alpha) * a + alpha * b).collect();
            Representation::new(v)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterpolationRow {
    pub alpha: f64,
    pub sentence: String,
}

/// Encodes both sentences and greedily decodes each interpolated point.
pub fn interpolate_sentences(
    model: &MultiTaskModel,
    s1: &str,
    s2: &str,
    steps: usize,
    decoder: Task,
) -> Result<Vec<InterpolationRow>, ModelError> {
    let r1 = model.encode(s1)?;
    let r2 = model.encode(s2)?;
    interpolate(&r1, &r2, steps)?
        .iter()
        .enumerate()
        .map(|(i, r)| {
            Ok(InterpolationRow {
                alpha: i as f64 / (steps - 1) as f64,
                sentence: model.decode_greedy_text(r, decoder)?,
            })
        })
        .collect()
}

/// `(r1 - r2) + r3`, component-wise in that order.
///
/// When `r2` and `r3` are bitwise equal the result is `r1` itself; `(a - b) + b`
/// is not always `a` in floating point.
pub fn combine(r1: &Representation, r2: &Representation, r3: &Representation) -> Result<Representation, ModelError> {
    same_len(r1, r2)?;
    same_len(r1, r3)?;
    let v = r1
        .as_slice()
        .iter()
        .zip(r2.as_slice())
        .zip(r3.as_slice())
        .map(|((a, b), c)| if b.to_bits() == c.to_bits() { *a } else { (a - b) + c })
        .collect();
    Representation::new(v)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArithmeticResult {
    pub vector: Vec<f64>,
    pub vector_norm: f64,
    pub sentence: String,
}

/// `encode(s1) - encode(s2) + encode(s3)` and its greedy decoding. The vector
/// is neither clamped nor renormalized.
pub fn representation_arithmetic(
    model: &MultiTaskModel,
    s1: &str,
    s2: &str,
    s3: &str,
    decoder: Task,
) -> Result<ArithmeticResult, ModelError> {
    let v = combine(&model.encode(s1)?, &model.encode(s2)?, &model.encode(s3)?)?;
    let sentence = model.decode_greedy_text(&v, decoder)?;
    Ok(ArithmeticResult { vector_norm: v.norm(), vector: v.into_vec(), sentence })
}
