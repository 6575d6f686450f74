//! Record-on-execute tape for reverse-mode differentiation.
//!
//! Every operation evaluates eagerly, appends a node holding its value and the
//! ids of its parents, and returns a [`Var`] handle. Parents always have a
//! smaller id than the node that consumes them, so a reverse sweep over node
//! ids visits every node after all of its consumers.

use alloc::borrow::Cow;
use alloc::vec;
use alloc::vec::Vec;

use super::{AutodiffError, Tensor};

/// Handle to a node on a [`Tape`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(usize);

impl Var {
    pub fn id(self) -> usize {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinaryKind {
    Add,
    Sub,
    Mul,
    /// Multiply every element of the left operand by the scalar right operand.
    HadamardScale,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnaryKind {
    Sigmoid,
    Tanh,
    Exp,
}

#[derive(Clone, Debug)]
enum Op {
    Leaf,
    MatMul(Var, Var),
    Binary(BinaryKind, Var, Var),
    Unary(UnaryKind, Var),
    Scale(Var, f64),
    Concat(Var, Var),
    Slice { src: Var, offset: usize },
    Sum(Var),
    AddScalars(Vec<Var>),
    SoftmaxCrossEntropy { logits: Var, target: usize, probs: Vec<f64> },
    GatherRow { table: Var, row: usize },
    VecMatRows { x: Var, w: Var, row_offset: usize },
}

impl Op {
    fn for_each_parent(&self, mut f: impl FnMut(Var)) {
        match self {
            Op::Leaf => {}
            Op::MatMul(a, b) | Op::Binary(_, a, b) | Op::Concat(a, b) => {
                f(*a);
                f(*b);
            }
            Op::Unary(_, a) | Op::Scale(a, _) | Op::Sum(a) => f(*a),
            Op::Slice { src, .. } => f(*src),
            Op::AddScalars(xs) => xs.iter().copied().for_each(f),
            Op::SoftmaxCrossEntropy { logits, .. } => f(*logits),
            Op::GatherRow { table, .. } => f(*table),
            Op::VecMatRows { x, w, .. } => {
                f(*x);
                f(*w);
            }
        }
    }
}

struct Node<'a> {
    value: Cow<'a, Tensor>,
    op: Op,
}

/// Ordered record of executed operations.
///
/// Parameters can be borrowed into the tape with [`Tape::param`] so that a
/// forward pass over an immutable model copies nothing.
#[derive(Default)]
pub struct Tape<'a> {
    nodes: Vec<Node<'a>>,
}

/// Gradients produced by [`Tape::backward`], indexed by node.
///
/// Nodes the loss does not depend on have no entry.
#[derive(Debug, Clone)]
pub struct Gradients {
    grads: Vec<Option<Vec<f64>>>,
}

impl Gradients {
    pub fn get(&self, var: Var) -> Option<&[f64]> {
        self.grads.get(var.0).and_then(|g| g.as_deref())
    }

    /// Gradient of `var`, or zeros of length `len` when the loss does not reach it.
    pub fn get_or_zeros(&self, var: Var, len: usize) -> Vec<f64> {
        match self.get(var) {
            Some(g) => g.to_vec(),
            None => vec![0.0; len],
        }
    }

    pub fn take(&mut self, var: Var) -> Option<Vec<f64>> {
        self.grads.get_mut(var.0).and_then(Option::take)
    }
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + libm::exp(-x))
    } else {
        let e = libm::exp(x);
        e / (1.0 + e)
    }
}

/// Dot product over four independent lanes so the loop vectorizes; the
/// summation order is fixed, so results stay deterministic.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut lanes = [0.0; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for l in 0..4 {
            lanes[l] += x[l] * y[l];
        }
    }
    let tail: f64 = ra.iter().zip(rb).map(|(x, y)| x * y).sum();
    (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]) + tail
}

fn accumulate<'g>(grads: &'g mut [Option<Vec<f64>>], var: Var, len: usize) -> &'g mut [f64] {
    grads[var.0].get_or_insert_with(|| vec![0.0; len])
}

impl<'a> Tape<'a> {
    pub fn new() -> Self {
        Self { nodes: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn push(&mut self, value: Cow<'a, Tensor>, op: Op) -> Var {
        let id = self.nodes.len();
        op.for_each_parent(|p| debug_assert!(p.0 < id, "tape out of topological order"));
        self.nodes.push(Node { value, op });
        Var(id)
    }

    /// Records an owned input tensor.
    pub fn leaf(&mut self, value: Tensor) -> Var {
        self.push(Cow::Owned(value), Op::Leaf)
    }

    /// Records a borrowed input tensor, typically a model parameter.
    pub fn param(&mut self, value: &'a Tensor) -> Var {
        self.push(Cow::Borrowed(value), Op::Leaf)
    }

    pub fn value(&self, var: Var) -> &Tensor {
        &self.nodes[var.0].value
    }

    fn values(&self, var: Var) -> &[f64] {
        self.nodes[var.0].value.values()
    }

    /// Matrix product. A rank-1 left operand of length k is treated as a 1×k
    /// row and yields a rank-1 result.
    pub fn matmul(&mut self, a: Var, b: Var) -> Result<Var, AutodiffError> {
        let (ta, tb) = (self.value(a), self.value(b));
        if ta.rank() == 0 || tb.rank() != 2 || ta.cols() != tb.rows() {
            return Err(AutodiffError::Dimension {
                op: "matmul",
                left: ta.shape().to_vec(),
                right: tb.shape().to_vec(),
            });
        }
        let (m, k, n) = (ta.rows(), ta.cols(), tb.cols());
        let (av, bv) = (ta.values(), tb.values());
        let mut out = vec![0.0; m * n];
        for i in 0..m {
            let row = &mut out[i * n..(i + 1) * n];
            for p in 0..k {
                let s = av[i * k + p];
                if s == 0.0 {
                    continue;
                }
                for (o, &w) in row.iter_mut().zip(&bv[p * n..(p + 1) * n]) {
                    *o += s * w;
                }
            }
        }
        let value = if ta.rank() == 1 { Tensor::vector(out) } else { Tensor::matrix(m, n, out)? };
        Ok(self.push(Cow::Owned(value), Op::MatMul(a, b)))
    }

    pub fn elementwise_binary(&mut self, kind: BinaryKind, a: Var, b: Var) -> Result<Var, AutodiffError> {
        let (ta, tb) = (self.value(a), self.value(b));
        let values: Vec<f64> = match kind {
            BinaryKind::HadamardScale => {
                let s = tb.item().ok_or_else(|| AutodiffError::Dimension {
                    op: "hadamard_scale",
                    left: ta.shape().to_vec(),
                    right: tb.shape().to_vec(),
                })?;
                ta.values().iter().map(|x| x * s).collect()
            }
            _ => {
                if ta.shape() != tb.shape() {
                    return Err(AutodiffError::Dimension {
                        op: "elementwise",
                        left: ta.shape().to_vec(),
                        right: tb.shape().to_vec(),
                    });
                }
                let f = match kind {
                    BinaryKind::Add => |x: f64, y: f64| x + y,
                    BinaryKind::Sub => |x: f64, y: f64| x - y,
                    _ => |x: f64, y: f64| x * y,
                };
                ta.values().iter().zip(tb.values()).map(|(&x, &y)| f(x, y)).collect()
            }
        };
        let value = Tensor::new(ta.shape(), values)?;
        Ok(self.push(Cow::Owned(value), Op::Binary(kind, a, b)))
    }

    pub fn add(&mut self, a: Var, b: Var) -> Result<Var, AutodiffError> {
        self.elementwise_binary(BinaryKind::Add, a, b)
    }

    pub fn sub(&mut self, a: Var, b: Var) -> Result<Var, AutodiffError> {
        self.elementwise_binary(BinaryKind::Sub, a, b)
    }

    pub fn mul(&mut self, a: Var, b: Var) -> Result<Var, AutodiffError> {
        self.elementwise_binary(BinaryKind::Mul, a, b)
    }

    pub fn hadamard_scale(&mut self, a: Var, s: Var) -> Result<Var, AutodiffError> {
        self.elementwise_binary(BinaryKind::HadamardScale, a, s)
    }

    pub fn elementwise_unary(&mut self, kind: UnaryKind, a: Var) -> Var {
        let ta = self.value(a);
        let f = match kind {
            UnaryKind::Sigmoid => sigmoid,
            UnaryKind::Tanh => libm::tanh,
            UnaryKind::Exp => libm::exp,
        };
        let value = Tensor::new(ta.shape(), ta.values().iter().map(|&x| f(x)).collect())
            .expect("shape preserved");
        self.push(Cow::Owned(value), Op::Unary(kind, a))
    }

    pub fn sigmoid(&mut self, a: Var) -> Var {
        self.elementwise_unary(UnaryKind::Sigmoid, a)
    }

    pub fn tanh(&mut self, a: Var) -> Var {
        self.elementwise_unary(UnaryKind::Tanh, a)
    }

    pub fn exp(&mut self, a: Var) -> Var {
        self.elementwise_unary(UnaryKind::Exp, a)
    }

    /// Multiplies by a constant that is not itself differentiated.
    pub fn scale(&mut self, a: Var, factor: f64) -> Var {
        let ta = self.value(a);
        let value = Tensor::new(ta.shape(), ta.values().iter().map(|x| x * factor).collect())
            .expect("shape preserved");
        self.push(Cow::Owned(value), Op::Scale(a, factor))
    }

    pub fn concat(&mut self, a: Var, b: Var) -> Result<Var, AutodiffError> {
        let (ta, tb) = (self.value(a), self.value(b));
        if ta.rank() != 1 || tb.rank() != 1 {
            return Err(AutodiffError::Dimension {
                op: "concat",
                left: ta.shape().to_vec(),
                right: tb.shape().to_vec(),
            });
        }
        let mut values = Vec::with_capacity(ta.len() + tb.len());
        values.extend_from_slice(ta.values());
        values.extend_from_slice(tb.values());
        Ok(self.push(Cow::Owned(Tensor::vector(values)), Op::Concat(a, b)))
    }

    /// Contiguous sub-vector `[offset, offset + len)` of a rank-1 tensor.
    pub fn slice(&mut self, src: Var, offset: usize, len: usize) -> Result<Var, AutodiffError> {
        let t = self.value(src);
        if t.rank() != 1 || offset + len > t.len() {
            return Err(AutodiffError::Dimension {
                op: "slice",
                left: t.shape().to_vec(),
                right: vec![offset, len],
            });
        }
        let values = t.values()[offset..offset + len].to_vec();
        Ok(self.push(Cow::Owned(Tensor::vector(values)), Op::Slice { src, offset }))
    }

    pub fn sum(&mut self, a: Var) -> Var {
        let total = self.values(a).iter().sum();
        self.push(Cow::Owned(Tensor::scalar(total)), Op::Sum(a))
    }

    /// Sum of scalar nodes, in the order given.
    pub fn add_scalars(&mut self, xs: &[Var]) -> Result<Var, AutodiffError> {
        let mut total = 0.0;
        for &x in xs {
            let t = self.value(x);
            total += t.item().ok_or_else(|| AutodiffError::Dimension {
                op: "add_scalars",
                left: t.shape().to_vec(),
                right: Vec::new(),
            })?;
        }
        Ok(self.push(Cow::Owned(Tensor::scalar(total)), Op::AddScalars(xs.to_vec())))
    }

    /// `-log softmax(logits)[target]`, evaluated with max subtraction.
    pub fn softmax_cross_entropy(&mut self, logits: Var, target: usize) -> Result<Var, AutodiffError> {
        let t = self.value(logits);
        if t.rank() != 1 {
            return Err(AutodiffError::Dimension { op: "softmax_cross_entropy", left: t.shape().to_vec(), right: Vec::new() });
        }
        if target >= t.len() {
            return Err(AutodiffError::Index { index: target, len: t.len() });
        }
        let (loss, probs) = softmax_xent(t.values(), target);
        Ok(self.push(Cow::Owned(Tensor::scalar(loss)), Op::SoftmaxCrossEntropy { logits, target, probs }))
    }

    /// Row `row` of a matrix, i.e. `onehot(row) · table`.
    pub fn gather_row(&mut self, table: Var, row: usize) -> Result<Var, AutodiffError> {
        let t = self.value(table);
        if t.rank() != 2 {
            return Err(AutodiffError::Dimension { op: "gather_row", left: t.shape().to_vec(), right: Vec::new() });
        }
        if row >= t.rows() {
            return Err(AutodiffError::Index { index: row, len: t.rows() });
        }
        let n = t.cols();
        let values = t.values()[row * n..(row + 1) * n].to_vec();
        Ok(self.push(Cow::Owned(Tensor::vector(values)), Op::GatherRow { table, row }))
    }

    /// `x · w[row_offset .. row_offset + len(x), :]` for a rank-1 `x`.
    ///
    /// Equivalent to multiplying `[0, x]` against the full matrix, without
    /// materializing the zero block.
    pub fn vecmat_rows(&mut self, x: Var, w: Var, row_offset: usize) -> Result<Var, AutodiffError> {
        let (tx, tw) = (self.value(x), self.value(w));
        if tx.rank() != 1 || tw.rank() != 2 || row_offset + tx.len() > tw.rows() {
            return Err(AutodiffError::Dimension {
                op: "vecmat_rows",
                left: tx.shape().to_vec(),
                right: tw.shape().to_vec(),
            });
        }
        let n = tw.cols();
        let wv = &tw.values()[row_offset * n..];
        let mut out = vec![0.0; n];
        for (i, &s) in tx.values().iter().enumerate() {
            if s == 0.0 {
                continue;
            }
            for (o, &w) in out.iter_mut().zip(&wv[i * n..(i + 1) * n]) {
                *o += s * w;
            }
        }
        Ok(self.push(Cow::Owned(Tensor::vector(out)), Op::VecMatRows { x, w, row_offset }))
    }

    /// Reverse sweep from a scalar `loss`.
    ///
    /// Gradients accumulate additively when a node feeds several consumers.
    pub fn backward(&self, loss: Var) -> Result<Gradients, AutodiffError> {
        let lt = self.value(loss);
        if !lt.is_scalar() {
            return Err(AutodiffError::NonScalarLoss(lt.shape().to_vec()));
        }
        let mut grads: Vec<Option<Vec<f64>>> = vec![None; loss.0 + 1];
        grads[loss.0] = Some(vec![1.0]);
        for id in (0..=loss.0).rev() {
            let Some(g) = grads[id].take() else { continue };
            let node = &self.nodes[id];
            let out = node.value.values();
            match &node.op {
                Op::Leaf => {}
                Op::MatMul(a, b) => {
                    let (ta, tb) = (self.value(*a), self.value(*b));
                    let (m, k, n) = (ta.rows(), ta.cols(), tb.cols());
                    let (av, bv) = (ta.values(), tb.values());
                    {
                        let da = accumulate(&mut grads, *a, m * k);
                        for i in 0..m {
                            let gi = &g[i * n..(i + 1) * n];
                            for p in 0..k {
                                let brow = &bv[p * n..(p + 1) * n];
                                da[i * k + p] += dot(gi, brow);
                            }
                        }
                    }
                    let db = accumulate(&mut grads, *b, k * n);
                    for i in 0..m {
                        let gi = &g[i * n..(i + 1) * n];
                        for p in 0..k {
                            let s = av[i * k + p];
                            if s == 0.0 {
                                continue;
                            }
                            for (d, &x) in db[p * n..(p + 1) * n].iter_mut().zip(gi) {
                                *d += s * x;
                            }
                        }
                    }
                }
                Op::Binary(kind, a, b) => {
                    let (av, bv) = (self.values(*a), self.values(*b));
                    match kind {
                        BinaryKind::Add | BinaryKind::Sub => {
                            let sign = if *kind == BinaryKind::Add { 1.0 } else { -1.0 };
                            add_into(accumulate(&mut grads, *a, g.len()), &g, 1.0);
                            add_into(accumulate(&mut grads, *b, g.len()), &g, sign);
                        }
                        BinaryKind::Mul => {
                            {
                                let da = accumulate(&mut grads, *a, g.len());
                                for ((d, &x), &y) in da.iter_mut().zip(&g).zip(bv) {
                                    *d += x * y;
                                }
                            }
                            let db = accumulate(&mut grads, *b, g.len());
                            for ((d, &x), &y) in db.iter_mut().zip(&g).zip(av) {
                                *d += x * y;
                            }
                        }
                        BinaryKind::HadamardScale => {
                            let s = bv[0];
                            add_into(accumulate(&mut grads, *a, g.len()), &g, s);
                            let ds: f64 = g.iter().zip(av).map(|(x, y)| x * y).sum();
                            accumulate(&mut grads, *b, bv.len())[0] += ds;
                        }
                    }
                }
                Op::Unary(kind, a) => {
                    let da = accumulate(&mut grads, *a, g.len());
                    match kind {
                        UnaryKind::Sigmoid => {
                            for ((d, &x), &y) in da.iter_mut().zip(&g).zip(out) {
                                *d += x * y * (1.0 - y);
                            }
                        }
                        UnaryKind::Tanh => {
                            for ((d, &x), &y) in da.iter_mut().zip(&g).zip(out) {
                                *d += x * (1.0 - y * y);
                            }
                        }
                        UnaryKind::Exp => {
                            for ((d, &x), &y) in da.iter_mut().zip(&g).zip(out) {
                                *d += x * y;
                            }
                        }
                    }
                }
                Op::Scale(a, factor) => add_into(accumulate(&mut grads, *a, g.len()), &g, *factor),
                Op::Concat(a, b) => {
                    let m = self.value(*a).len();
                    add_into(accumulate(&mut grads, *a, m), &g[..m], 1.0);
                    add_into(accumulate(&mut grads, *b, g.len() - m), &g[m..], 1.0);
                }
                Op::Slice { src, offset } => {
                    let len = self.value(*src).len();
                    let ds = accumulate(&mut grads, *src, len);
                    add_into(&mut ds[*offset..*offset + g.len()], &g, 1.0);
                }
                Op::Sum(a) => {
                    let len = self.value(*a).len();
                    accumulate(&mut grads, *a, len).iter_mut().for_each(|d| *d += g[0]);
                }
                Op::AddScalars(xs) => {
                    for x in xs {
                        accumulate(&mut grads, *x, 1)[0] += g[0];
                    }
                }
                Op::SoftmaxCrossEntropy { logits, target, probs } => {
                    let dl = accumulate(&mut grads, *logits, probs.len());
                    for (d, &p) in dl.iter_mut().zip(probs) {
                        *d += g[0] * p;
                    }
                    dl[*target] -= g[0];
                }
                Op::GatherRow { table, row } => {
                    let t = self.value(*table);
                    let n = t.cols();
                    let dt = accumulate(&mut grads, *table, t.len());
                    add_into(&mut dt[row * n..(row + 1) * n], &g, 1.0);
                }
                Op::VecMatRows { x, w, row_offset } => {
                    let (tx, tw) = (self.value(*x), self.value(*w));
                    let n = tw.cols();
                    let base = row_offset * n;
                    let wv = &tw.values()[base..];
                    {
                        let dx = accumulate(&mut grads, *x, tx.len());
                        for (i, d) in dx.iter_mut().enumerate() {
                            *d += dot(&wv[i * n..(i + 1) * n], &g);
                        }
                    }
                    let dw = accumulate(&mut grads, *w, tw.len());
                    for (i, &s) in tx.values().iter().enumerate() {
                        if s == 0.0 {
                            continue;
                        }
                        let start = base + i * n;
                        for (d, &x) in dw[start..start + n].iter_mut().zip(&g) {
                            *d += s * x;
                        }
                    }
                }
            }
            grads[id] = Some(g);
        }
        Ok(Gradients { grads })
    }
}

fn add_into(dst: &mut [f64], src: &[f64], factor: f64) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d += factor * s;
    }
}

/// Stable `(-log softmax(logits)[target], softmax(logits))`.
pub(crate) fn softmax_xent(logits: &[f64], target: usize) -> (f64, Vec<f64>) {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut probs: Vec<f64> = logits.iter().map(|&l| libm::exp(l - max)).collect();
    let z: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= z);
    let loss = libm::log(z) - (logits[target] - max);
    (loss.max(0.0), probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autodiff::finite_difference_check;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
    }

    #[test]
    fn matmul_identity_and_small_product() {
        let mut tape = Tape::new();
        let i2 = tape.leaf(Tensor::matrix(2, 2, vec![1.0, 0.0, 0.0, 1.0]).unwrap());
        let a = tape.leaf(Tensor::matrix(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap());
        let b = tape.leaf(Tensor::matrix(2, 2, vec![5.0, 6.0, 7.0, 8.0]).unwrap());
        let ib = tape.matmul(i2, b).unwrap();
        assert_eq!(tape.value(ib).values(), &[5.0, 6.0, 7.0, 8.0]);
        let ab = tape.matmul(a, b).unwrap();
        assert_eq!(tape.value(ab).values(), &[19.0, 22.0, 43.0, 50.0]);
    }

    #[test]
    fn matmul_shape_error_names_both_shapes() {
        let mut tape = Tape::new();
        let a = tape.leaf(Tensor::zeros(&[2, 3]));
        let b = tape.leaf(Tensor::zeros(&[2, 3]));
        match tape.matmul(a, b) {
            Err(AutodiffError::Dimension { left, right, .. }) => {
                assert_eq!(left, vec![2, 3]);
                assert_eq!(right, vec![2, 3]);
            }
            other => panic!("expected dimension error, got {other:?}"),
        }
    }

    #[test]
    fn matmul_gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a0 = random_vec(&mut rng, 9);
        let b0 = Tensor::matrix(3, 3, random_vec(&mut rng, 9)).unwrap();
        let loss = |a: &[f64]| {
            let mut tape = Tape::new();
            let av = tape.leaf(Tensor::matrix(3, 3, a.to_vec()).unwrap());
            let bv = tape.param(&b0);
            let c = tape.matmul(av, bv).unwrap();
            let s = tape.sum(c);
            let g = tape.backward(s).unwrap().get_or_zeros(av, 9);
            (tape.value(s).values()[0], g)
        };
        let analytic = loss(&a0).1;
        let err = finite_difference_check(|p| loss(p).0, &a0, &analytic, 1e-5).unwrap();
        assert!(err < 1e-6, "relative error {err}");
    }

    #[test]
    fn elementwise_basics() {
        let mut tape = Tape::new();
        let a = tape.leaf(Tensor::vector(vec![1.0, 2.0]));
        let b = tape.leaf(Tensor::vector(vec![3.0, 4.0]));
        let c = tape.add(a, b).unwrap();
        assert_eq!(tape.value(c).values(), &[4.0, 6.0]);

        let x = tape.leaf(Tensor::vector(vec![1.5, -2.0, 3.0]));
        let z = tape.leaf(Tensor::zeros(&[3]));
        let m = tape.mul(x, z).unwrap();
        assert_eq!(tape.value(m).values(), &[0.0, 0.0, 0.0]);
        let s = tape.sum(m);
        let grads = tape.backward(s).unwrap();
        assert_eq!(grads.get(x).unwrap(), &[0.0, 0.0, 0.0]);

        let short = tape.leaf(Tensor::zeros(&[2]));
        assert!(matches!(tape.sub(x, short), Err(AutodiffError::Dimension { .. })));
    }

    #[test]
    fn hadamard_scale_differentiates_both_sides() {
        let mut tape = Tape::new();
        let a = tape.leaf(Tensor::vector(vec![1.0, 2.0, 3.0]));
        let s = tape.leaf(Tensor::scalar(2.0));
        let y = tape.hadamard_scale(a, s).unwrap();
        assert_eq!(tape.value(y).values(), &[2.0, 4.0, 6.0]);
        let l = tape.sum(y);
        let g = tape.backward(l).unwrap();
        assert_eq!(g.get(a).unwrap(), &[2.0, 2.0, 2.0]);
        assert_eq!(g.get(s).unwrap(), &[6.0]);
        let v = tape.leaf(Tensor::vector(vec![1.0, 2.0]));
        assert!(tape.hadamard_scale(a, v).is_err());
    }

    #[test]
    fn mul_gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x0 = random_vec(&mut rng, 4);
        let y0 = Tensor::vector(random_vec(&mut rng, 4));
        let eval = |x: &[f64]| {
            let mut tape = Tape::new();
            let xv = tape.leaf(Tensor::vector(x.to_vec()));
            let yv = tape.param(&y0);
            let p = tape.mul(xv, yv).unwrap();
            let sq = tape.mul(p, xv).unwrap();
            let s = tape.sum(sq);
            (tape.value(s).values()[0], tape.backward(s).unwrap().get_or_zeros(xv, 4))
        };
        let err = finite_difference_check(|p| eval(p).0, &x0, &eval(&x0).1, 1e-5).unwrap();
        assert!(err < 1e-6, "relative error {err}");
    }

    #[test]
    fn unary_values_and_gradients() {
        let mut tape = Tape::new();
        let z = tape.leaf(Tensor::scalar(0.0));
        let s = tape.sigmoid(z);
        let t = tape.tanh(z);
        let e = tape.exp(z);
        assert_eq!(tape.value(s).values(), &[0.5]);
        assert_eq!(tape.value(t).values(), &[0.0]);
        assert_eq!(tape.value(e).values(), &[1.0]);

        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let x0 = random_vec(&mut rng, 6).iter().map(|v| v * 4.0).collect::<Vec<_>>();
        for kind in [UnaryKind::Sigmoid, UnaryKind::Tanh, UnaryKind::Exp] {
            let eval = |x: &[f64]| {
                let mut tape = Tape::new();
                let xv = tape.leaf(Tensor::vector(x.to_vec()));
                let y = tape.elementwise_unary(kind, xv);
                let s = tape.sum(y);
                (tape.value(s).values()[0], tape.backward(s).unwrap().get_or_zeros(xv, 6))
            };
            let err = finite_difference_check(|p| eval(p).0, &x0, &eval(&x0).1, 1e-5).unwrap();
            assert!(err < 1e-6, "{kind:?}: relative error {err}");
        }
    }

    #[test]
    fn concat_values_and_split_gradient() {
        let mut tape = Tape::new();
        let a = tape.leaf(Tensor::vector(vec![1.0]));
        let b = tape.leaf(Tensor::vector(vec![2.0, 3.0]));
        let c = tape.concat(a, b).unwrap();
        assert_eq!(tape.value(c).values(), &[1.0, 2.0, 3.0]);
        let empty = tape.leaf(Tensor::vector(Vec::new()));
        let same = tape.concat(c, empty).unwrap();
        assert_eq!(tape.value(same).values(), tape.value(c).values());
        let s = tape.sum(c);
        let g = tape.backward(s).unwrap();
        assert_eq!(g.get(a).unwrap(), &[1.0]);
        assert_eq!(g.get(b).unwrap(), &[1.0, 1.0]);

        let m = tape.leaf(Tensor::zeros(&[1, 2]));
        assert!(matches!(tape.concat(a, m), Err(AutodiffError::Dimension { .. })));
    }

    #[test]
    fn cross_entropy_reference_values() {
        let mut tape = Tape::new();
        let uniform = tape.leaf(Tensor::zeros(&[4]));
        for target in 0..4 {
            let l = tape.softmax_cross_entropy(uniform, target).unwrap();
            assert!((tape.value(l).values()[0] - 4f64.ln()).abs() < 1e-12);
        }
        let saturated = tape.leaf(Tensor::vector(vec![30.0, 0.0, 0.0, 0.0]));
        let l = tape.softmax_cross_entropy(saturated, 0).unwrap();
        assert!(tape.value(l).values()[0] < 1e-9);
        assert!(matches!(
            tape.softmax_cross_entropy(saturated, 4),
            Err(AutodiffError::Index { index: 4, len: 4 })
        ));
    }

    #[test]
    fn cross_entropy_matches_direct_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let logits: Vec<f64> = (0..7).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let target = rng.gen_range(0..7);
            let direct = -(logits[target].exp() / logits.iter().map(|l| l.exp()).sum::<f64>()).ln();
            let mut tape = Tape::new();
            let lv = tape.leaf(Tensor::vector(logits.clone()));
            let l = tape.softmax_cross_entropy(lv, target).unwrap();
            assert!((tape.value(l).values()[0] - direct).abs() < 1e-10);
        }
    }

    #[test]
    fn cross_entropy_gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let x0 = random_vec(&mut rng, 5);
        let eval = |x: &[f64]| {
            let mut tape = Tape::new();
            let xv = tape.leaf(Tensor::vector(x.to_vec()));
            let l = tape.softmax_cross_entropy(xv, 2).unwrap();
            (tape.value(l).values()[0], tape.backward(l).unwrap().get_or_zeros(xv, 5))
        };
        let err = finite_difference_check(|p| eval(p).0, &x0, &eval(&x0).1, 1e-5).unwrap();
        assert!(err < 1e-6, "relative error {err}");
    }

    #[test]
    fn backward_identity_and_fan_out() {
        let mut tape = Tape::new();
        let x = tape.leaf(Tensor::scalar(3.0));
        let g = tape.backward(x).unwrap();
        assert_eq!(g.get(x).unwrap(), &[1.0]);

        let mut tape = Tape::new();
        let x = tape.leaf(Tensor::vector(vec![1.0, -1.0, 0.5]));
        let twice = tape.add(x, x).unwrap();
        let s = tape.sum(twice);
        let g = tape.backward(s).unwrap();
        assert_eq!(g.get(x).unwrap(), &[2.0, 2.0, 2.0]);

        let total = tape.add_scalars(&[s, s, s]).unwrap();
        let g = tape.backward(total).unwrap();
        assert_eq!(g.get(x).unwrap(), &[6.0, 6.0, 6.0]);
    }

    #[test]
    fn backward_rejects_non_scalar_loss() {
        let mut tape = Tape::new();
        let x = tape.leaf(Tensor::vector(vec![1.0, 2.0]));
        assert_eq!(tape.backward(x).unwrap_err(), AutodiffError::NonScalarLoss(vec![2]));
    }

    #[test]
    fn gather_and_vecmat_rows_match_dense_matmul() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let w0 = Tensor::matrix(7, 4, random_vec(&mut rng, 28)).unwrap();
        let h0 = random_vec(&mut rng, 4);
        let (input, id) = (3usize, 1usize);

        let mut dense = Tape::new();
        let mut x = vec![0.0; input];
        x[id] = 1.0;
        x.extend_from_slice(&h0);
        let xv = dense.leaf(Tensor::vector(x));
        let wv = dense.param(&w0);
        let y = dense.matmul(xv, wv).unwrap();
        let sy = dense.sum(y);
        let dg = dense.backward(sy).unwrap();

        let mut fast = Tape::new();
        let hv = fast.leaf(Tensor::vector(h0.clone()));
        let wf = fast.param(&w0);
        let r = fast.gather_row(wf, id).unwrap();
        let m = fast.vecmat_rows(hv, wf, input).unwrap();
        let y2 = fast.add(r, m).unwrap();
        let sy2 = fast.sum(y2);
        let fg = fast.backward(sy2).unwrap();

        for (a, b) in dense.value(y).values().iter().zip(fast.value(y2).values()) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in dg.get(wv).unwrap().iter().zip(fg.get(wf).unwrap()) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in dg.get(xv).unwrap()[input..].iter().zip(fg.get(hv).unwrap()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn forward_is_bit_identical_across_runs() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let w = Tensor::matrix(5, 6, random_vec(&mut rng, 30)).unwrap();
        let x = Tensor::vector(random_vec(&mut rng, 5));
        let run = || {
            let mut tape = Tape::new();
            let xv = tape.param(&x);
            let wv = tape.param(&w);
            let y = tape.matmul(xv, wv).unwrap();
            let t = tape.tanh(y);
            let l = tape.softmax_cross_entropy(t, 3).unwrap();
            tape.value(l).values()[0].to_bits()
        };
        assert_eq!(run(), run());
    }
}
