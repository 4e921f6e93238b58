//! The spectral graph convolutional network.
//!
//! Layer `l` computes `H_{l+1} = act( sum_k T_k(L~) H_l theta_k + b )`
//! with ReLU on hidden layers and a row-wise softmax on the output layer.
//! The Chebyshev terms `T_k(L~) H` come from the three-term recurrence, so
//! the graph is only ever touched through sparse products. Training is
//! full-batch with exact reverse-mode gradients and the adaptive-moment
//! optimizer; everything is deterministic given `(seed, inputs)`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    chebyshev_apply, estimate_lambda_max, normalized_laplacian, scale_laplacian, ScaledLaplacian,
    WeightedGraph,
};
use crate::matrix::DenseMatrix;

const ADAM_BETA1: f64 = 0.9;
const ADAM_BETA2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;
/// Probabilities below this are clipped inside the log.
pub const LOG_CLIP: f64 = 1e-12;

/// How to obtain the spectral bound used by the Laplacian rescaling.
///
/// The analytic bound 2 is always valid for the normalized Laplacian and
/// degenerate-safe (an edgeless graph has no spectrum to estimate). Power
/// iteration tightens the bound when wanted; if it reports an essentially
/// zero spectral radius the analytic bound is used instead.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaMaxPolicy {
    Bound(f64),
    PowerIteration { iters: usize, tol: f64 },
}

impl Default for LambdaMaxPolicy {
    fn default() -> Self {
        LambdaMaxPolicy::Bound(2.0)
    }
}

/// Builds the rescaled Laplacian of `g` under the given bound policy.
pub fn build_scaled_laplacian(g: &WeightedGraph, policy: LambdaMaxPolicy) -> Result<ScaledLaplacian> {
    let l = normalized_laplacian(g);
    let lambda = match policy {
        LambdaMaxPolicy::Bound(v) => v,
        LambdaMaxPolicy::PowerIteration { iters, tol } => {
            let est = estimate_lambda_max(&l, iters, tol);
            if est > 1e-9 {
                est
            } else {
                2.0
            }
        }
    };
    scale_laplacian(&l, lambda)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GcnnConfig {
    /// Hidden layer widths; the output layer to `num_classes` is implicit.
    pub layer_widths: Vec<usize>,
    /// Chebyshev polynomial order K.
    pub chebyshev_order: usize,
    pub learning_rate: f64,
    /// Unit dropout probability on each layer's input, train mode only.
    pub unit_dropout: f64,
    pub epochs: usize,
    pub weight_decay: f64,
    pub seed: u64,
    pub num_classes: usize,
    pub lambda_max: LambdaMaxPolicy,
}

impl Default for GcnnConfig {
    fn default() -> Self {
        Self {
            layer_widths: vec![16, 16, 16],
            chebyshev_order: 3,
            learning_rate: 0.005,
            unit_dropout: 0.3,
            epochs: 200,
            weight_decay: 5e-4,
            seed: 0,
            num_classes: 2,
            lambda_max: LambdaMaxPolicy::default(),
        }
    }
}

impl GcnnConfig {
    pub fn validate(&self) -> Result<()> {
        if self.layer_widths.is_empty() || self.layer_widths.iter().any(|&w| w == 0) {
            return Err(Error::InvalidConfig {
                what: String::from("layer_widths must be nonempty with positive widths"),
            });
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::InvalidConfig {
                what: format!("learning_rate must be > 0, got {}", self.learning_rate),
            });
        }
        if !(0.0..1.0).contains(&self.unit_dropout) {
            return Err(Error::InvalidConfig {
                what: format!("unit_dropout must lie in [0, 1), got {}", self.unit_dropout),
            });
        }
        if self.epochs == 0 {
            return Err(Error::InvalidConfig {
                what: String::from("epochs must be >= 1"),
            });
        }
        if !(self.weight_decay.is_finite() && self.weight_decay >= 0.0) {
            return Err(Error::InvalidConfig {
                what: format!("weight_decay must be >= 0, got {}", self.weight_decay),
            });
        }
        if self.num_classes < 2 {
            return Err(Error::InvalidConfig {
                what: format!("num_classes must be >= 2, got {}", self.num_classes),
            });
        }
        if let LambdaMaxPolicy::Bound(v) = self.lambda_max {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::NonPositiveLambdaMax { value: v });
            }
        }
        Ok(())
    }
}

/// One layer's Chebyshev coefficient tensors (K+1 slices of `in x out`) and
/// its bias.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerParams {
    pub weights: Vec<DenseMatrix>,
    pub bias: Vec<f64>,
}

impl LayerParams {
    pub fn in_dim(&self) -> usize {
        self.weights[0].rows()
    }

    pub fn out_dim(&self) -> usize {
        self.weights[0].cols()
    }

    pub fn order(&self) -> usize {
        self.weights.len() - 1
    }
}

/// All network parameters; also reused as the congruent gradient and
/// optimizer-moment structure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GcnnParams {
    pub layers: Vec<LayerParams>,
}

/// Gradient structure congruent to [`GcnnParams`].
pub type GcnnGradients = GcnnParams;

impl GcnnParams {
    /// Glorot-uniform initialization over the `(in, out)` fan of each
    /// Chebyshev slice, biases zero. Draw order is fixed (layer, slice,
    /// row-major entries) so a seed pins every value.
    pub fn glorot_init(cfg: &GcnnConfig, input_dim: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut dims = Vec::with_capacity(cfg.layer_widths.len() + 2);
        dims.push(input_dim);
        dims.extend_from_slice(&cfg.layer_widths);
        dims.push(cfg.num_classes);

        let mut layers = Vec::with_capacity(dims.len() - 1);
        for pair in dims.windows(2) {
            let (fan_in, fan_out) = (pair[0], pair[1]);
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            let weights = (0..=cfg.chebyshev_order)
                .map(|_| {
                    let mut slice = DenseMatrix::zeros(fan_in, fan_out);
                    for v in slice.data_mut().iter_mut() {
                        *v = rng.gen::<f64>() * 2.0 * limit - limit;
                    }
                    slice
                })
                .collect();
            layers.push(LayerParams {
                weights,
                bias: vec![0.0; fan_out],
            });
        }
        Self { layers }
    }

    pub fn zeros_like(&self) -> Self {
        let layers = self
            .layers
            .iter()
            .map(|l| LayerParams {
                weights: l
                    .weights
                    .iter()
                    .map(|w| DenseMatrix::zeros(w.rows(), w.cols()))
                    .collect(),
                bias: vec![0.0; l.bias.len()],
            })
            .collect();
        Self { layers }
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].in_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().expect("nonempty").out_dim()
    }

    pub fn num_parameters(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.iter().map(|w| w.data().len()).sum::<usize>() + l.bias.len())
            .sum()
    }

    pub fn is_finite(&self) -> bool {
        self.layers
            .iter()
            .all(|l| l.weights.iter().all(|w| w.is_finite()) && l.bias.iter().all(|b| b.is_finite()))
    }

    /// Bit-level equality, for determinism checks.
    pub fn bits_eq(&self, other: &Self) -> bool {
        self.layers.len() == other.layers.len()
            && self.layers.iter().zip(other.layers.iter()).all(|(a, b)| {
                a.weights.len() == b.weights.len()
                    && a.weights.iter().zip(b.weights.iter()).all(|(x, y)| x.bits_eq(y))
                    && a.bias.len() == b.bias.len()
                    && a.bias
                        .iter()
                        .zip(b.bias.iter())
                        .all(|(x, y)| x.to_bits() == y.to_bits())
            })
    }

    fn validate_against(&self, cfg: &GcnnConfig, input_dim: usize, num_nodes: usize, x_rows: usize) -> Result<()> {
        if self.layers.is_empty() {
            return Err(Error::InvalidConfig {
                what: String::from("parameters contain no layers"),
            });
        }
        if x_rows != num_nodes {
            return Err(Error::DimensionMismatch {
                what: "feature rows vs graph nodes",
                expected: num_nodes,
                got: x_rows,
            });
        }
        if self.input_dim() != input_dim {
            return Err(Error::DimensionMismatch {
                what: "input features vs first layer",
                expected: self.input_dim(),
                got: input_dim,
            });
        }
        for (l, layer) in self.layers.iter().enumerate() {
            if layer.order() != cfg.chebyshev_order {
                return Err(Error::DimensionMismatch {
                    what: "chebyshev order vs weight slices",
                    expected: cfg.chebyshev_order + 1,
                    got: layer.weights.len(),
                });
            }
            if layer.bias.len() != layer.out_dim() {
                return Err(Error::DimensionMismatch {
                    what: "bias length vs layer width",
                    expected: layer.out_dim(),
                    got: layer.bias.len(),
                });
            }
            if l + 1 < self.layers.len() && layer.out_dim() != self.layers[l + 1].in_dim() {
                return Err(Error::DimensionMismatch {
                    what: "layer width chain",
                    expected: layer.out_dim(),
                    got: self.layers[l + 1].in_dim(),
                });
            }
        }
        if self.output_dim() != cfg.num_classes {
            return Err(Error::DimensionMismatch {
                what: "output layer vs num_classes",
                expected: cfg.num_classes,
                got: self.output_dim(),
            });
        }
        Ok(())
    }
}

/// Which nodes carry supervision. `labels` spans every node; entries outside
/// the mask are ignored by the loss and gradients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainMask {
    pub mask: Vec<bool>,
    pub labels: Vec<usize>,
}

impl TrainMask {
    pub fn masked_count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    /// Full validation used by training: shapes, label range, and at least
    /// one masked node per class.
    pub fn validate(&self, num_nodes: usize, num_classes: usize) -> Result<()> {
        if self.mask.len() != num_nodes {
            return Err(Error::DimensionMismatch {
                what: "mask length vs nodes",
                expected: num_nodes,
                got: self.mask.len(),
            });
        }
        if self.labels.len() != num_nodes {
            return Err(Error::DimensionMismatch {
                what: "label length vs nodes",
                expected: num_nodes,
                got: self.labels.len(),
            });
        }
        let mut seen = vec![false; num_classes];
        let mut any = false;
        for (node, (&masked, &label)) in self.mask.iter().zip(self.labels.iter()).enumerate() {
            if masked {
                any = true;
                if label >= num_classes {
                    return Err(Error::InvalidLabel {
                        node,
                        label,
                        num_classes,
                    });
                }
                seen[label] = true;
            }
        }
        if !any {
            return Err(Error::EmptyMask);
        }
        if let Some(class) = seen.iter().position(|&s| !s) {
            return Err(Error::MissingClassInMask { class });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Train,
    Eval,
}

/// Everything backward needs: per layer the cached `T_k(L~) H` products,
/// the dropout multipliers, and the activation output.
pub struct ForwardCache {
    layers: Vec<LayerCache>,
}

struct LayerCache {
    s_terms: Vec<DenseMatrix>,
    dropout: Option<Vec<f64>>,
    activated: DenseMatrix,
}

impl ForwardCache {
    pub fn probabilities(&self) -> &DenseMatrix {
        &self.layers.last().expect("nonempty").activated
    }
}

/// Per-epoch training curve entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochStat {
    pub epoch: usize,
    pub loss: f64,
    pub train_accuracy: f64,
}

/// Row argmax with ties resolved toward the lower class index.
pub fn row_argmax(row: &[f64]) -> usize {
    let mut best = 0;
    for (c, &v) in row.iter().enumerate().skip(1) {
        if v > row[best] {
            best = c;
        }
    }
    best
}

fn softmax_rows_in_place(z: &mut DenseMatrix) {
    for i in 0..z.rows() {
        let row = z.row_mut(i);
        let max = row.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let mut sum = 0.0;
        for v in row.iter_mut() {
            *v = (*v - max).exp();
            sum += *v;
        }
        for v in row.iter_mut() {
            *v /= sum;
        }
    }
}

fn relu_in_place(z: &mut DenseMatrix) {
    for v in z.data_mut().iter_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
}

/// Forward pass against a prebuilt rescaled Laplacian. In train mode, unit
/// dropout with inverted scaling `1/(1-p)` is applied to each layer's input;
/// eval mode never touches the generator.
pub fn forward_with_laplacian(
    params: &GcnnParams,
    lt: &ScaledLaplacian,
    x: &DenseMatrix,
    cfg: &GcnnConfig,
    mode: Mode,
    rng: &mut ChaCha8Rng,
) -> Result<(DenseMatrix, ForwardCache)> {
    params.validate_against(cfg, x.cols(), lt.num_nodes(), x.rows())?;

    let num_layers = params.layers.len();
    let mut cache = ForwardCache { layers: Vec::with_capacity(num_layers) };

    for (l, layer) in params.layers.iter().enumerate() {
        let input = if l == 0 {
            x
        } else {
            &cache.layers[l - 1].activated
        };

        let (dropped, dropout) = if mode == Mode::Train && cfg.unit_dropout > 0.0 {
            let keep_scale = 1.0 / (1.0 - cfg.unit_dropout);
            let mut multipliers = Vec::with_capacity(input.data().len());
            let mut dropped = input.clone();
            for v in dropped.data_mut().iter_mut() {
                let mult = if rng.gen::<f64>() >= cfg.unit_dropout {
                    keep_scale
                } else {
                    0.0
                };
                multipliers.push(mult);
                *v *= mult;
            }
            (dropped, Some(multipliers))
        } else {
            (input.clone(), None)
        };

        let s_terms = chebyshev_apply(lt, &dropped, cfg.chebyshev_order)?;

        let mut z = DenseMatrix::zeros(x.rows(), layer.out_dim());
        for i in 0..z.rows() {
            z.row_mut(i).copy_from_slice(&layer.bias);
        }
        for (term, theta) in s_terms.iter().zip(layer.weights.iter()) {
            z.add_matmul(term, theta);
        }

        if l + 1 == num_layers {
            softmax_rows_in_place(&mut z);
        } else {
            relu_in_place(&mut z);
        }
        if !z.is_finite() {
            return Err(Error::NonFiniteActivation { layer: l });
        }

        cache.layers.push(LayerCache {
            s_terms,
            dropout,
            activated: z,
        });
    }

    Ok((cache.probabilities().clone(), cache))
}

/// Forward pass from a raw graph: builds the rescaled Laplacian under
/// `cfg.lambda_max` and runs [`forward_with_laplacian`].
pub fn forward(
    params: &GcnnParams,
    g: &WeightedGraph,
    x: &DenseMatrix,
    cfg: &GcnnConfig,
    mode: Mode,
    rng: &mut ChaCha8Rng,
) -> Result<(DenseMatrix, ForwardCache)> {
    let lt = build_scaled_laplacian(g, cfg.lambda_max)?;
    forward_with_laplacian(params, &lt, x, cfg, mode, rng)
}

/// Masked cross-entropy plus L2 penalty: mean over masked nodes of
/// `-ln max(p[node, label], 1e-12)`, plus `weight_decay/2 * ||theta||^2`
/// over the weight tensors (biases excluded).
pub fn loss(
    probabilities: &DenseMatrix,
    mask: &TrainMask,
    params: &GcnnParams,
    weight_decay: f64,
) -> Result<f64> {
    let n = probabilities.rows();
    if mask.mask.len() != n || mask.labels.len() != n {
        return Err(Error::DimensionMismatch {
            what: "mask vs probability rows",
            expected: n,
            got: mask.mask.len(),
        });
    }
    let c = probabilities.cols();
    let mut total = 0.0;
    let mut count = 0usize;
    for i in 0..n {
        if mask.mask[i] {
            let label = mask.labels[i];
            if label >= c {
                return Err(Error::InvalidLabel {
                    node: i,
                    label,
                    num_classes: c,
                });
            }
            total -= probabilities.get(i, label).max(LOG_CLIP).ln();
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::EmptyMask);
    }
    let mut penalty = 0.0;
    for layer in &params.layers {
        for w in &layer.weights {
            penalty += w.data().iter().map(|&v| v * v).sum::<f64>();
        }
    }
    Ok(total / count as f64 + weight_decay * 0.5 * penalty)
}

/// Fraction of masked nodes whose argmax matches the label.
pub fn masked_accuracy(probabilities: &DenseMatrix, mask: &TrainMask) -> f64 {
    let mut correct = 0usize;
    let mut count = 0usize;
    for i in 0..probabilities.rows() {
        if mask.mask[i] {
            count += 1;
            if row_argmax(probabilities.row(i)) == mask.labels[i] {
                correct += 1;
            }
        }
    }
    if count == 0 {
        0.0
    } else {
        correct as f64 / count as f64
    }
}

/// Exact reverse-mode gradients of [`loss`] through softmax, ReLU, the
/// Chebyshev recurrence (reusing the cached `T_k(L~) H` products), dropout
/// multipliers, and the weight-decay penalty.
fn backward(
    params: &GcnnParams,
    lt: &ScaledLaplacian,
    cache: &ForwardCache,
    mask: &TrainMask,
    weight_decay: f64,
) -> Result<GcnnGradients> {
    let probs = cache.probabilities();
    let n = probs.rows();
    let c = probs.cols();
    let count = mask.masked_count();
    if count == 0 {
        return Err(Error::EmptyMask);
    }
    let inv_m = 1.0 / count as f64;

    // Softmax + clipped-log cross entropy: (p - onehot)/m on masked rows
    // whose probability survived the clip, zero elsewhere.
    let mut dz = DenseMatrix::zeros(n, c);
    for i in 0..n {
        if !mask.mask[i] {
            continue;
        }
        let label = mask.labels[i];
        if probs.get(i, label) <= LOG_CLIP {
            continue;
        }
        let src = probs.row(i);
        let dst = dz.row_mut(i);
        for (cidx, (d, &p)) in dst.iter_mut().zip(src.iter()).enumerate() {
            *d = (p - if cidx == label { 1.0 } else { 0.0 }) * inv_m;
        }
    }

    let mut grads = params.zeros_like();
    let order = params.layers[0].order();

    for l in (0..params.layers.len()).rev() {
        let layer_cache = &cache.layers[l];
        let layer = &params.layers[l];

        for j in 0..layer.out_dim() {
            let mut acc = 0.0;
            for i in 0..n {
                acc += dz.get(i, j);
            }
            grads.layers[l].bias[j] = acc;
        }
        for (k, term) in layer_cache.s_terms.iter().enumerate() {
            grads.layers[l].weights[k] = term.transposed_matmul(&dz);
        }

        if l == 0 {
            break;
        }

        // Adjoints of the recurrence: seed with dZ theta_k^T, then walk the
        // dependency chain backwards (T_k(L~) is symmetric, so transposes
        // are free).
        let mut adj: Vec<DenseMatrix> = layer
            .weights
            .iter()
            .map(|theta| dz.matmul_transposed(theta))
            .collect();
        for k in (2..=order).rev() {
            let propagated = lt.matrix().spmm(&adj[k]);
            adj[k - 1].scaled_add(2.0, &propagated);
            let (lower, upper) = adj.split_at_mut(k);
            lower[k - 2].scaled_add(-1.0, &upper[0]);
        }
        let mut adjoints = adj.into_iter();
        let mut grad_input = adjoints.next().expect("order >= 0");
        if let Some(s1) = adjoints.next() {
            let propagated = lt.matrix().spmm(&s1);
            grad_input.scaled_add(1.0, &propagated);
        }

        if let Some(multipliers) = &layer_cache.dropout {
            for (g, &m) in grad_input.data_mut().iter_mut().zip(multipliers.iter()) {
                *g *= m;
            }
        }

        // Through the previous layer's ReLU.
        let prev_act = &cache.layers[l - 1].activated;
        for (g, &a) in grad_input
            .data_mut()
            .iter_mut()
            .zip(prev_act.data().iter())
        {
            if a <= 0.0 {
                *g = 0.0;
            }
        }
        dz = grad_input;
    }

    if weight_decay != 0.0 {
        for (g_layer, p_layer) in grads.layers.iter_mut().zip(params.layers.iter()) {
            for (g, p) in g_layer.weights.iter_mut().zip(p_layer.weights.iter()) {
                g.scaled_add(weight_decay, p);
            }
        }
    }
    Ok(grads)
}

/// Gradients at `params` computed through a deterministic eval-mode forward
/// pass (dropout off).
pub fn gradients(
    params: &GcnnParams,
    g: &WeightedGraph,
    x: &DenseMatrix,
    cfg: &GcnnConfig,
    mask: &TrainMask,
) -> Result<GcnnGradients> {
    let lt = build_scaled_laplacian(g, cfg.lambda_max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (_, cache) = forward_with_laplacian(params, &lt, x, cfg, Mode::Eval, &mut rng)?;
    backward(params, &lt, &cache, mask, cfg.weight_decay)
}

struct AdamState {
    m: GcnnParams,
    v: GcnnParams,
}

fn adam_step(params: &mut GcnnParams, grads: &GcnnGradients, state: &mut AdamState, lr: f64, t: usize) {
    let bc1 = 1.0 - ADAM_BETA1.powi(t as i32);
    let bc2 = 1.0 - ADAM_BETA2.powi(t as i32);
    for (l, layer) in params.layers.iter_mut().enumerate() {
        for (k, w) in layer.weights.iter_mut().enumerate() {
            let g = grads.layers[l].weights[k].data();
            let m = state.m.layers[l].weights[k].data_mut();
            let v = state.v.layers[l].weights[k].data_mut();
            for (((p, &g), m), v) in w.data_mut().iter_mut().zip(g).zip(m).zip(v) {
                *m = ADAM_BETA1 * *m + (1.0 - ADAM_BETA1) * g;
                *v = ADAM_BETA2 * *v + (1.0 - ADAM_BETA2) * g * g;
                *p -= lr * (*m / bc1) / ((*v / bc2).sqrt() + ADAM_EPS);
            }
        }
        let g = &grads.layers[l].bias;
        let m = &mut state.m.layers[l].bias;
        let v = &mut state.v.layers[l].bias;
        for (((p, &g), m), v) in layer.bias.iter_mut().zip(g).zip(m).zip(v) {
            *m = ADAM_BETA1 * *m + (1.0 - ADAM_BETA1) * g;
            *v = ADAM_BETA2 * *v + (1.0 - ADAM_BETA2) * g * g;
            *p -= lr * (*m / bc1) / ((*v / bc2).sqrt() + ADAM_EPS);
        }
    }
}

/// Full-batch training for `cfg.epochs` epochs. Returns the final
/// parameters and the per-epoch (loss, train accuracy) curve.
pub fn train(
    g: &WeightedGraph,
    x: &DenseMatrix,
    mask: &TrainMask,
    cfg: &GcnnConfig,
) -> Result<(GcnnParams, Vec<EpochStat>)> {
    cfg.validate()?;
    mask.validate(g.num_nodes(), cfg.num_classes)?;
    if !x.is_finite() {
        return Err(Error::NonFiniteInput {
            what: "feature matrix",
        });
    }

    let lt = build_scaled_laplacian(g, cfg.lambda_max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut params = GcnnParams::glorot_init(cfg, x.cols(), &mut rng);
    let mut state = AdamState {
        m: params.zeros_like(),
        v: params.zeros_like(),
    };

    let mut curve = Vec::with_capacity(cfg.epochs);
    for epoch in 1..=cfg.epochs {
        let (probs, cache) = forward_with_laplacian(&params, &lt, x, cfg, Mode::Train, &mut rng)
            .map_err(|e| match e {
                Error::NonFiniteActivation { .. } => Error::NonFiniteLoss { epoch },
                other => other,
            })?;
        let epoch_loss = loss(&probs, mask, &params, cfg.weight_decay)?;
        if !epoch_loss.is_finite() {
            return Err(Error::NonFiniteLoss { epoch });
        }
        curve.push(EpochStat {
            epoch,
            loss: epoch_loss,
            train_accuracy: masked_accuracy(&probs, mask),
        });

        let grads = backward(&params, &lt, &cache, mask, cfg.weight_decay)?;
        adam_step(&mut params, &grads, &mut state, cfg.learning_rate, epoch);
    }

    Ok((params, curve))
}

/// Eval-mode class probabilities; every row lies on the simplex.
pub fn predict_proba(
    params: &GcnnParams,
    g: &WeightedGraph,
    x: &DenseMatrix,
    cfg: &GcnnConfig,
) -> Result<DenseMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (probs, _) = forward(params, g, x, cfg, Mode::Eval, &mut rng)?;
    Ok(probs)
}
