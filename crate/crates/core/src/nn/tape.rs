//! Reverse-mode tape over dense matrices.
//!
//! A [`Tape`] records every forward op; [`Tape::backward`] walks the record in
//! reverse and accumulates gradients. One tape per forward pass, confined to
//! one thread. The op set is deliberately narrow: exactly what an attention
//! layer and a small perceptron need.

use super::tensor::Tensor;
use super::NnError;

/// Handle to a tape node. Valid only for the tape that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Var(usize);

enum Op {
    Leaf,
    MatMul(usize, usize),
    AddBias(usize, usize),
    Add(usize, usize),
    Scale(usize, f64),
    ConcatCols(Vec<usize>),
    LeakyRelu(usize, f64),
    Elu(usize),
    Sigmoid(usize),
    SegmentSoftmax(usize, Vec<usize>),
    RowScale(usize, usize),
    GatherRows(usize, Vec<usize>),
    SegmentSum(usize, Vec<usize>),
    Sum(usize),
    MulMask(usize, Vec<f64>),
    BceLoss {
        probs: usize,
        labels: Vec<f64>,
        weights: Vec<f64>,
    },
}

struct Node {
    value: Tensor,
    op: Op,
}

#[derive(Default)]
pub struct Tape {
    nodes: Vec<Node>,
    grads: Option<Vec<Tensor>>,
}

const PROB_CLAMP: f64 = 1e-7;

impl Tape {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, value: Tensor, op: Op) -> Var {
        self.nodes.push(Node { value, op });
        self.grads = None;
        Var(self.nodes.len() - 1)
    }

    pub fn leaf(&mut self, value: Tensor) -> Var {
        self.push(value, Op::Leaf)
    }

    pub fn value(&self, v: Var) -> &Tensor {
        &self.nodes[v.0].value
    }

    /// Gradient of the last `backward` call w.r.t. `v`.
    pub fn grad(&self, v: Var) -> Result<&Tensor, NnError> {
        self.grads
            .as_ref()
            .map(|g| &g[v.0])
            .ok_or(NnError::BackwardNotRun)
    }

    pub fn matmul(&mut self, a: Var, b: Var) -> Result<Var, NnError> {
        let (ta, tb) = (&self.nodes[a.0].value, &self.nodes[b.0].value);
        let (n, k) = (ta.rows(), ta.cols());
        let (k2, m) = (tb.rows(), tb.cols());
        if k != k2 {
            return Err(NnError::ShapeMismatch(format!(
                "matmul {:?} x {:?}",
                ta.shape(),
                tb.shape()
            )));
        }
        let mut out = vec![0.0; n * m];
        let (av, bv) = (ta.values(), tb.values());
        for i in 0..n {
            for p in 0..k {
                let aip = av[i * k + p];
                if aip == 0.0 {
                    continue;
                }
                let brow = &bv[p * m..(p + 1) * m];
                let orow = &mut out[i * m..(i + 1) * m];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += aip * b;
                }
            }
        }
        let t = Tensor::new(vec![n, m], out)?;
        Ok(self.push(t, Op::MatMul(a.0, b.0)))
    }

    /// X [n,d] + b broadcast over rows; b is [1,d].
    pub fn add_bias(&mut self, x: Var, b: Var) -> Result<Var, NnError> {
        let (tx, tb) = (&self.nodes[x.0].value, &self.nodes[b.0].value);
        if tb.rows() != 1 || tb.cols() != tx.cols() {
            return Err(NnError::ShapeMismatch(format!(
                "add_bias {:?} + {:?}",
                tx.shape(),
                tb.shape()
            )));
        }
        let d = tx.cols();
        let mut out = tx.values().to_vec();
        for (i, v) in out.iter_mut().enumerate() {
            *v += tb.values()[i % d];
        }
        let t = Tensor::new(tx.shape().to_vec(), out)?;
        Ok(self.push(t, Op::AddBias(x.0, b.0)))
    }

    pub fn add(&mut self, a: Var, b: Var) -> Result<Var, NnError> {
        let (ta, tb) = (&self.nodes[a.0].value, &self.nodes[b.0].value);
        if !ta.same_shape(tb) {
            return Err(NnError::ShapeMismatch(format!(
                "add {:?} + {:?}",
                ta.shape(),
                tb.shape()
            )));
        }
        let out: Vec<f64> = ta
            .values()
            .iter()
            .zip(tb.values())
            .map(|(x, y)| x + y)
            .collect();
        let t = Tensor::new(ta.shape().to_vec(), out)?;
        Ok(self.push(t, Op::Add(a.0, b.0)))
    }

    pub fn scale(&mut self, x: Var, c: f64) -> Result<Var, NnError> {
        let tx = &self.nodes[x.0].value;
        let out: Vec<f64> = tx.values().iter().map(|v| v * c).collect();
        let t = Tensor::new(tx.shape().to_vec(), out)?;
        Ok(self.push(t, Op::Scale(x.0, c)))
    }

    /// Concatenate along columns; all inputs share a row count.
    pub fn concat_cols(&mut self, xs: &[Var]) -> Result<Var, NnError> {
        if xs.is_empty() {
            return Err(NnError::ShapeMismatch("concat of zero tensors".into()));
        }
        let n = self.nodes[xs[0].0].value.rows();
        let mut total = 0;
        for x in xs {
            let t = &self.nodes[x.0].value;
            if t.rows() != n {
                return Err(NnError::ShapeMismatch("concat row mismatch".into()));
            }
            total += t.cols();
        }
        let mut out = Vec::with_capacity(n * total);
        for i in 0..n {
            for x in xs {
                out.extend_from_slice(self.nodes[x.0].value.row(i));
            }
        }
        let t = Tensor::new(vec![n, total], out)?;
        Ok(self.push(t, Op::ConcatCols(xs.iter().map(|v| v.0).collect())))
    }

    pub fn leaky_relu(&mut self, x: Var, slope: f64) -> Result<Var, NnError> {
        let tx = &self.nodes[x.0].value;
        let out: Vec<f64> = tx
            .values()
            .iter()
            .map(|&v| if v > 0.0 { v } else { slope * v })
            .collect();
        let t = Tensor::new(tx.shape().to_vec(), out)?;
        Ok(self.push(t, Op::LeakyRelu(x.0, slope)))
    }

    pub fn elu(&mut self, x: Var) -> Result<Var, NnError> {
        let tx = &self.nodes[x.0].value;
        let out: Vec<f64> = tx
            .values()
            .iter()
            .map(|&v| if v > 0.0 { v } else { v.exp() - 1.0 })
            .collect();
        let t = Tensor::new(tx.shape().to_vec(), out)?;
        Ok(self.push(t, Op::Elu(x.0)))
    }

    pub fn sigmoid(&mut self, x: Var) -> Result<Var, NnError> {
        let tx = &self.nodes[x.0].value;
        let out: Vec<f64> = tx.values().iter().map(|&v| sigmoid(v)).collect();
        let t = Tensor::new(tx.shape().to_vec(), out)?;
        Ok(self.push(t, Op::Sigmoid(x.0)))
    }

    /// Softmax over rows sharing a segment id. `scores` is [E,1]; ids need not
    /// be contiguous or sorted. Max-subtraction per segment keeps exp stable.
    pub fn segment_softmax(&mut self, scores: Var, segment_ids: &[usize]) -> Result<Var, NnError> {
        let tx = &self.nodes[scores.0].value;
        if tx.cols() != 1 || tx.rows() != segment_ids.len() {
            return Err(NnError::ShapeMismatch(format!(
                "segment_softmax scores {:?} vs {} ids",
                tx.shape(),
                segment_ids.len()
            )));
        }
        let out = segment_softmax_values(tx.values(), segment_ids);
        let t = Tensor::new(tx.shape().to_vec(), out)?;
        Ok(self.push(t, Op::SegmentSoftmax(scores.0, segment_ids.to_vec())))
    }

    /// y[i,:] = x[i,:] * a[i,0]
    pub fn row_scale(&mut self, x: Var, a: Var) -> Result<Var, NnError> {
        let (tx, ta) = (&self.nodes[x.0].value, &self.nodes[a.0].value);
        if ta.cols() != 1 || ta.rows() != tx.rows() {
            return Err(NnError::ShapeMismatch(format!(
                "row_scale {:?} by {:?}",
                tx.shape(),
                ta.shape()
            )));
        }
        let d = tx.cols();
        let mut out = tx.values().to_vec();
        for i in 0..tx.rows() {
            let s = ta.values()[i];
            for v in &mut out[i * d..(i + 1) * d] {
                *v *= s;
            }
        }
        let t = Tensor::new(tx.shape().to_vec(), out)?;
        Ok(self.push(t, Op::RowScale(x.0, a.0)))
    }

    pub fn gather_rows(&mut self, x: Var, indices: &[usize]) -> Result<Var, NnError> {
        let tx = &self.nodes[x.0].value;
        if let Some(&bad) = indices.iter().find(|&&i| i >= tx.rows()) {
            return Err(NnError::ShapeMismatch(format!(
                "gather index {} out of {} rows",
                bad,
                tx.rows()
            )));
        }
        let d = tx.cols();
        let mut out = Vec::with_capacity(indices.len() * d);
        for &i in indices {
            out.extend_from_slice(tx.row(i));
        }
        let t = Tensor::new(vec![indices.len(), d], out)?;
        Ok(self.push(t, Op::GatherRows(x.0, indices.to_vec())))
    }

    /// y[s,:] = Σ_{i: ids[i]=s} x[i,:], output has `n_out` rows.
    pub fn segment_sum(
        &mut self,
        x: Var,
        segment_ids: &[usize],
        n_out: usize,
    ) -> Result<Var, NnError> {
        let tx = &self.nodes[x.0].value;
        if tx.rows() != segment_ids.len() {
            return Err(NnError::ShapeMismatch(format!(
                "segment_sum {:?} vs {} ids",
                tx.shape(),
                segment_ids.len()
            )));
        }
        if let Some(&bad) = segment_ids.iter().find(|&&s| s >= n_out) {
            return Err(NnError::ShapeMismatch(format!(
                "segment id {} out of {} segments",
                bad, n_out
            )));
        }
        let d = tx.cols();
        let mut out = vec![0.0; n_out * d];
        for (i, &s) in segment_ids.iter().enumerate() {
            let row = tx.row(i);
            for (o, v) in out[s * d..(s + 1) * d].iter_mut().zip(row) {
                *o += v;
            }
        }
        let t = Tensor::new(vec![n_out, d], out)?;
        Ok(self.push(t, Op::SegmentSum(x.0, segment_ids.to_vec())))
    }

    pub fn sum(&mut self, x: Var) -> Result<Var, NnError> {
        let s: f64 = self.nodes[x.0].value.values().iter().sum();
        Ok(self.push(Tensor::scalar(s), Op::Sum(x.0)))
    }

    /// Elementwise multiply by a fixed mask (dropout with pre-scaled mask).
    pub fn mul_mask(&mut self, x: Var, mask: &[f64]) -> Result<Var, NnError> {
        let tx = &self.nodes[x.0].value;
        if tx.len() != mask.len() {
            return Err(NnError::ShapeMismatch("mask length mismatch".into()));
        }
        let out: Vec<f64> = tx.values().iter().zip(mask).map(|(v, m)| v * m).collect();
        let t = Tensor::new(tx.shape().to_vec(), out)?;
        Ok(self.push(t, Op::MulMask(x.0, mask.to_vec())))
    }

    /// Weighted mean of −[y ln p + (1−y) ln(1−p)], probabilities clamped to
    /// [1e-7, 1−1e-7] before the log.
    pub fn bce_loss(&mut self, probs: Var, labels: &[f64], weights: &[f64]) -> Result<Var, NnError> {
        let tp = &self.nodes[probs.0].value;
        if tp.cols() != 1 || tp.rows() != labels.len() || labels.len() != weights.len() {
            return Err(NnError::ShapeMismatch(format!(
                "bce_loss probs {:?}, {} labels, {} weights",
                tp.shape(),
                labels.len(),
                weights.len()
            )));
        }
        let wsum: f64 = weights.iter().sum();
        if wsum <= 0.0 {
            return Err(NnError::ShapeMismatch("bce_loss zero weight sum".into()));
        }
        let mut acc = 0.0;
        for ((&p, &y), &w) in tp.values().iter().zip(labels).zip(weights) {
            let pc = p.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP);
            acc -= w * (y * pc.ln() + (1.0 - y) * (1.0 - pc).ln());
        }
        let t = Tensor::scalar(acc / wsum);
        Ok(self.push(
            t,
            Op::BceLoss {
                probs: probs.0,
                labels: labels.to_vec(),
                weights: weights.to_vec(),
            },
        ))
    }

    /// Accumulate ∂loss/∂node for every node reachable from `loss`.
    pub fn backward(&mut self, loss: Var) -> Result<(), NnError> {
        if !self.nodes[loss.0].value.is_scalar() {
            return Err(NnError::NotScalarLoss);
        }
        let mut grads: Vec<Tensor> = self
            .nodes
            .iter()
            .map(|n| Tensor::zeros(n.value.rows(), n.value.cols()))
            .collect();
        grads[loss.0].values_mut()[0] = 1.0;

        for i in (0..self.nodes.len()).rev() {
            if grads[i].values().iter().all(|&g| g == 0.0) {
                continue;
            }
            let g = grads[i].clone();
            match &self.nodes[i].op {
                Op::Leaf => {}
                Op::MatMul(a, b) => {
                    let (a, b) = (*a, *b);
                    let ta = self.nodes[a].value.clone();
                    let tb = self.nodes[b].value.clone();
                    let (n, k, m) = (ta.rows(), ta.cols(), tb.cols());
                    // dA = g @ B^T
                    {
                        let da = grads[a].values_mut();
                        for r in 0..n {
                            for p in 0..k {
                                let mut acc = 0.0;
                                for c in 0..m {
                                    acc += g.get(r, c) * tb.get(p, c);
                                }
                                da[r * k + p] += acc;
                            }
                        }
                    }
                    // dB = A^T @ g
                    {
                        let db = grads[b].values_mut();
                        for p in 0..k {
                            for c in 0..m {
                                let mut acc = 0.0;
                                for r in 0..n {
                                    acc += ta.get(r, p) * g.get(r, c);
                                }
                                db[p * m + c] += acc;
                            }
                        }
                    }
                }
                Op::AddBias(x, b) => {
                    let (x, b) = (*x, *b);
                    let d = g.cols();
                    for (j, gv) in g.values().iter().enumerate() {
                        grads[x].values_mut()[j] += gv;
                    }
                    for (j, gv) in g.values().iter().enumerate() {
                        grads[b].values_mut()[j % d] += gv;
                    }
                }
                Op::Add(a, b) => {
                    let (a, b) = (*a, *b);
                    for (j, gv) in g.values().iter().enumerate() {
                        grads[a].values_mut()[j] += gv;
                    }
                    for (j, gv) in g.values().iter().enumerate() {
                        grads[b].values_mut()[j] += gv;
                    }
                }
                Op::Scale(x, c) => {
                    let (x, c) = (*x, *c);
                    for (j, gv) in g.values().iter().enumerate() {
                        grads[x].values_mut()[j] += gv * c;
                    }
                }
                Op::ConcatCols(xs) => {
                    let xs = xs.clone();
                    let n = g.rows();
                    let mut col = 0;
                    for x in xs {
                        let d = self.nodes[x].value.cols();
                        for r in 0..n {
                            for c in 0..d {
                                grads[x].values_mut()[r * d + c] += g.get(r, col + c);
                            }
                        }
                        col += d;
                    }
                }
                Op::LeakyRelu(x, slope) => {
                    let (x, slope) = (*x, *slope);
                    let xv = self.nodes[x].value.clone();
                    for (j, (&gv, &v)) in g.values().iter().zip(xv.values()).enumerate() {
                        grads[x].values_mut()[j] += gv * if v > 0.0 { 1.0 } else { slope };
                    }
                }
                Op::Elu(x) => {
                    let x = *x;
                    let yv = self.nodes[i].value.clone();
                    let xv = self.nodes[x].value.clone();
                    for (j, (&gv, (&v, &y))) in g
                        .values()
                        .iter()
                        .zip(xv.values().iter().zip(yv.values()))
                        .enumerate()
                    {
                        grads[x].values_mut()[j] += gv * if v > 0.0 { 1.0 } else { y + 1.0 };
                    }
                }
                Op::Sigmoid(x) => {
                    let x = *x;
                    let yv = self.nodes[i].value.clone();
                    for (j, (&gv, &y)) in g.values().iter().zip(yv.values()).enumerate() {
                        grads[x].values_mut()[j] += gv * y * (1.0 - y);
                    }
                }
                Op::SegmentSoftmax(x, ids) => {
                    let x = *x;
                    let ids = ids.clone();
                    let yv = self.nodes[i].value.clone();
                    // dx_i = y_i (g_i − Σ_{j in seg} g_j y_j)
                    let nseg = ids.iter().copied().max().map_or(0, |m| m + 1);
                    let mut dot = vec![0.0; nseg];
                    for (j, &s) in ids.iter().enumerate() {
                        dot[s] += g.values()[j] * yv.values()[j];
                    }
                    for (j, &s) in ids.iter().enumerate() {
                        grads[x].values_mut()[j] += yv.values()[j] * (g.values()[j] - dot[s]);
                    }
                }
                Op::RowScale(x, a) => {
                    let (x, a) = (*x, *a);
                    let xv = self.nodes[x].value.clone();
                    let av = self.nodes[a].value.clone();
                    let d = xv.cols();
                    for r in 0..xv.rows() {
                        let s = av.values()[r];
                        let mut acc = 0.0;
                        for c in 0..d {
                            let gv = g.get(r, c);
                            grads[x].values_mut()[r * d + c] += gv * s;
                            acc += gv * xv.get(r, c);
                        }
                        grads[a].values_mut()[r] += acc;
                    }
                }
                Op::GatherRows(x, indices) => {
                    let x = *x;
                    let indices = indices.clone();
                    let d = g.cols();
                    for (r, &src) in indices.iter().enumerate() {
                        for c in 0..d {
                            grads[x].values_mut()[src * d + c] += g.get(r, c);
                        }
                    }
                }
                Op::SegmentSum(x, ids) => {
                    let x = *x;
                    let ids = ids.clone();
                    let d = g.cols();
                    for (r, &s) in ids.iter().enumerate() {
                        for c in 0..d {
                            grads[x].values_mut()[r * d + c] += g.get(s, c);
                        }
                    }
                }
                Op::Sum(x) => {
                    let x = *x;
                    let gv = g.values()[0];
                    for v in grads[x].values_mut() {
                        *v += gv;
                    }
                }
                Op::MulMask(x, mask) => {
                    let x = *x;
                    let mask = mask.clone();
                    for (j, (&gv, &m)) in g.values().iter().zip(&mask).enumerate() {
                        grads[x].values_mut()[j] += gv * m;
                    }
                }
                Op::BceLoss {
                    probs,
                    labels,
                    weights,
                } => {
                    let probs = *probs;
                    let labels = labels.clone();
                    let weights = weights.clone();
                    let gv = g.values()[0];
                    let wsum: f64 = weights.iter().sum();
                    let pv = self.nodes[probs].value.clone();
                    for (j, ((&p, &y), &w)) in
                        pv.values().iter().zip(&labels).zip(&weights).enumerate()
                    {
                        // zero gradient where the clamp is active
                        if p <= PROB_CLAMP || p >= 1.0 - PROB_CLAMP {
                            continue;
                        }
                        let d = w * (p - y) / (p * (1.0 - p) * wsum);
                        grads[probs].values_mut()[j] += gv * d;
                    }
                }
            }
        }
        self.grads = Some(grads);
        Ok(())
    }
}

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Standalone segment softmax used by both the tape op and inference paths.
pub fn segment_softmax_values(scores: &[f64], segment_ids: &[usize]) -> Vec<f64> {
    let nseg = segment_ids.iter().copied().max().map_or(0, |m| m + 1);
    let mut maxes = vec![f64::NEG_INFINITY; nseg];
    for (&v, &s) in scores.iter().zip(segment_ids) {
        if v > maxes[s] {
            maxes[s] = v;
        }
    }
    let mut sums = vec![0.0; nseg];
    let mut out: Vec<f64> = scores
        .iter()
        .zip(segment_ids)
        .map(|(&v, &s)| {
            let e = (v - maxes[s]).exp();
            sums[s] += e;
            e
        })
        .collect();
    for (v, &s) in out.iter_mut().zip(segment_ids) {
        *v /= sums[s];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigmoid_of_zero_is_half() {
        assert_eq!(sigmoid(0.0), 0.5);
    }

    #[test]
    fn segment_softmax_uniform_within_segment() {
        let out = segment_softmax_values(&[0.0, 0.0, 0.0], &[0, 0, 0]);
        for v in out {
            assert!((v - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn segment_softmax_stable_at_extreme_magnitudes() {
        let out = segment_softmax_values(&[1e3, -1e3, 1e3], &[0, 0, 0]);
        assert!(out.iter().all(|v| v.is_finite()));
        let s: f64 = out.iter().sum();
        assert!((s - 1.0).abs() < 1e-9);
    }

    // pinned by hand: [[1,2,3],[4,5,6]] x [[7,8],[9,10],[11,12]]
    #[test]
    fn matmul_matches_hand_computation() {
        let mut tape = Tape::new();
        let a = tape.leaf(Tensor::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]));
        let b = tape.leaf(Tensor::from_rows(&[
            vec![7.0, 8.0],
            vec![9.0, 10.0],
            vec![11.0, 12.0],
        ]));
        let c = tape.matmul(a, b).unwrap();
        assert_eq!(
            tape.value(c).values(),
            &[58.0, 64.0, 139.0, 154.0],
        );
    }

    #[test]
    fn backward_of_sum_is_ones() {
        let mut tape = Tape::new();
        let w = tape.leaf(Tensor::from_rows(&[vec![1.0, -2.0], vec![3.0, 0.5]]));
        let loss = tape.sum(w).unwrap();
        tape.backward(loss).unwrap();
        assert_eq!(tape.grad(w).unwrap().values(), &[1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn backward_through_sigmoid_at_zero() {
        // loss = 3 * sigmoid(w) at w = 0 has gradient 3 * 0.25
        let mut tape = Tape::new();
        let w = tape.leaf(Tensor::scalar(0.0));
        let s = tape.sigmoid(w).unwrap();
        let scaled = tape.scale(s, 3.0).unwrap();
        let loss = tape.sum(scaled).unwrap();
        tape.backward(loss).unwrap();
        assert!((tape.grad(w).unwrap().values()[0] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn backward_rejects_non_scalar_loss() {
        let mut tape = Tape::new();
        let w = tape.leaf(Tensor::zeros(2, 2));
        assert!(matches!(tape.backward(w), Err(NnError::NotScalarLoss)));
    }

    #[test]
    fn bce_loss_at_half_is_ln_two() {
        let mut tape = Tape::new();
        let p = tape.leaf(Tensor::from_rows(&[vec![0.5], vec![0.5]]));
        let loss = tape.bce_loss(p, &[1.0, 0.0], &[1.0, 1.0]).unwrap();
        assert!((tape.value(loss).scalar_value().unwrap() - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn bce_loss_perfect_predictions_near_zero() {
        let mut tape = Tape::new();
        let p = tape.leaf(Tensor::from_rows(&[vec![1.0 - 1e-9], vec![1e-9]]));
        let loss = tape.bce_loss(p, &[1.0, 0.0], &[1.0, 1.0]).unwrap();
        assert!(tape.value(loss).scalar_value().unwrap() <= 1e-6);
    }

    #[test]
    fn gather_and_segment_sum_roundtrip() {
        let mut tape = Tape::new();
        let x = tape.leaf(Tensor::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]));
        let gathered = tape.gather_rows(x, &[1, 0, 1]).unwrap();
        let summed = tape.segment_sum(gathered, &[0, 0, 1], 2).unwrap();
        assert_eq!(tape.value(summed).values(), &[4.0, 6.0, 3.0, 4.0]);
    }
}
