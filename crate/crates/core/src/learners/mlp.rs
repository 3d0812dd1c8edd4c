//! Single-hidden-layer perceptron trained by full-batch backpropagation.
//!
//! Architecture: logistic-sigmoid hidden units and a linear output layer,
//! trained by plain gradient descent on the mean squared error (mean over
//! samples of the summed squared output error).
//!
//! Two training details matter for parity-style tasks:
//!
//! - Inputs are normalized per attribute to [-1, 1] from the training
//!   min/max (the usual MLP-toolkit default). Symmetric inputs are what
//!   lets batch gradient descent escape the flat region of XOR-composite
//!   targets; with raw 0/1 attributes the loss stays pinned near 0.25.
//! - The output layer's step is `learning_rate / hidden_units`. The
//!   output weights solve a quadratic subproblem whose curvature grows
//!   with the hidden count, so their stable step is much smaller than
//!   what the hidden layer needs.

use rand::Rng;

use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::learners::{decode_graded_among, argmax, Prediction, TrainingMeta, GRADED_TARGETS};
use crate::seeds;

/// How classes map to network outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputMode {
    /// One output regressed to the class targets 0.2/0.4/0.6/0.8
    /// (up to four classes).
    Graded,
    /// One output regressed to 0/1 (two classes).
    Binary,
    /// One output per class regressed to a one-hot target.
    OnePerClass,
}

impl OutputMode {
    pub fn name(self) -> &'static str {
        match self {
            OutputMode::Graded => "graded",
            OutputMode::Binary => "binary",
            OutputMode::OnePerClass => "one_per_class",
        }
    }
}

impl std::str::FromStr for OutputMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "graded" => Ok(OutputMode::Graded),
            "binary" => Ok(OutputMode::Binary),
            "one_per_class" => Ok(OutputMode::OnePerClass),
            other => Err(Error::Config(format!("unknown output mode '{other}'"))),
        }
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Network weights. `w1` is hidden x input and `w2` is output x hidden,
/// both row-major. The flat parameter order used by [`mlp_gradient`] and
/// the vector accessors is `w1, b1, w2, b2`.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpNet {
    pub input_dim: usize,
    pub hidden: usize,
    pub outputs: usize,
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

impl MlpNet {
    /// Seeded uniform init in [-scale, scale] for all weights and biases.
    pub fn init(input_dim: usize, hidden: usize, outputs: usize, scale: f64, seed: u64) -> MlpNet {
        let mut rng = seeds::rng_for(seed, "mlp_init", &[]);
        let mut draw = |n: usize| -> Vec<f64> {
            (0..n).map(|_| rng.gen_range(-scale..scale)).collect()
        };
        MlpNet {
            input_dim,
            hidden,
            outputs,
            w1: draw(hidden * input_dim),
            b1: draw(hidden),
            w2: draw(outputs * hidden),
            b2: draw(outputs),
        }
    }

    pub fn n_params(&self) -> usize {
        self.w1.len() + self.b1.len() + self.w2.len() + self.b2.len()
    }

    pub fn params_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.n_params());
        v.extend(&self.w1);
        v.extend(&self.b1);
        v.extend(&self.w2);
        v.extend(&self.b2);
        v
    }

    pub fn set_params_vec(&mut self, flat: &[f64]) {
        assert_eq!(flat.len(), self.n_params());
        let mut i = 0;
        for dst in self
            .w1
            .iter_mut()
            .chain(self.b1.iter_mut())
            .chain(self.w2.iter_mut())
            .chain(self.b2.iter_mut())
        {
            *dst = flat[i];
            i += 1;
        }
    }

    /// Hidden activations and outputs for one input row.
    pub fn forward(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        debug_assert_eq!(x.len(), self.input_dim);
        let mut hid = vec![0.0; self.hidden];
        for h in 0..self.hidden {
            let row = &self.w1[h * self.input_dim..(h + 1) * self.input_dim];
            let z = self.b1[h] + row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>();
            hid[h] = sigmoid(z);
        }
        let mut out = vec![0.0; self.outputs];
        for o in 0..self.outputs {
            let row = &self.w2[o * self.hidden..(o + 1) * self.hidden];
            out[o] = self.b2[o] + row.iter().zip(&hid).map(|(w, v)| w * v).sum::<f64>();
        }
        (hid, out)
    }
}

/// Shared core of the loss and gradient over a flat row-major batch.
/// Returns the loss; when `grad` is given it is overwritten with the
/// gradient in flat parameter order.
fn batch_pass(
    net: &MlpNet,
    xs: &[f64],
    ts: &[f64],
    n: usize,
    mut grad: Option<&mut [f64]>,
) -> f64 {
    let (input_dim, hidden, outputs) = (net.input_dim, net.hidden, net.outputs);
    let (w1_len, b1_len, w2_len) = (net.w1.len(), net.b1.len(), net.w2.len());
    if let Some(g) = grad.as_deref_mut() {
        g.fill(0.0);
    }

    let mut hid = vec![0.0; hidden];
    let mut out = vec![0.0; outputs];
    let mut d_out = vec![0.0; outputs];
    let inv_n = 1.0 / n as f64;
    let mut loss = 0.0;

    for s in 0..n {
        let x = &xs[s * input_dim..(s + 1) * input_dim];
        let t = &ts[s * outputs..(s + 1) * outputs];

        for h in 0..hidden {
            let row = &net.w1[h * input_dim..(h + 1) * input_dim];
            let z = net.b1[h] + row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>();
            hid[h] = sigmoid(z);
        }
        for o in 0..outputs {
            let row = &net.w2[o * hidden..(o + 1) * hidden];
            out[o] = net.b2[o] + row.iter().zip(&hid).map(|(w, v)| w * v).sum::<f64>();
        }

        for o in 0..outputs {
            let err = out[o] - t[o];
            loss += err * err * inv_n;
            d_out[o] = 2.0 * err * inv_n;
        }

        let Some(g) = grad.as_deref_mut() else { continue };
        let (g_w1, rest) = g.split_at_mut(w1_len);
        let (g_b1, rest) = rest.split_at_mut(b1_len);
        let (g_w2, g_b2) = rest.split_at_mut(w2_len);

        for o in 0..outputs {
            let d = d_out[o];
            g_b2[o] += d;
            let row = &mut g_w2[o * hidden..(o + 1) * hidden];
            for h in 0..hidden {
                row[h] += d * hid[h];
            }
        }
        for h in 0..hidden {
            let mut e = 0.0;
            for o in 0..outputs {
                e += d_out[o] * net.w2[o * hidden + h];
            }
            let dh = e * hid[h] * (1.0 - hid[h]);
            g_b1[h] += dh;
            let row = &mut g_w1[h * input_dim..(h + 1) * input_dim];
            for (gi, &xi) in row.iter_mut().zip(x) {
                *gi += dh * xi;
            }
        }
    }
    loss
}

fn flatten(rows: &[Vec<f64>], width: usize) -> Result<Vec<f64>> {
    let mut flat = Vec::with_capacity(rows.len() * width);
    for row in rows {
        if row.len() != width {
            return Err(Error::DimensionMismatch {
                expected: width,
                found: row.len(),
            });
        }
        flat.extend(row);
    }
    Ok(flat)
}

/// Gradient of the batch mean squared error with respect to all weights
/// and biases, flattened as `w1, b1, w2, b2`.
pub fn mlp_gradient(net: &MlpNet, inputs: &[Vec<f64>], targets: &[Vec<f64>]) -> Result<Vec<f64>> {
    if inputs.is_empty() || inputs.len() != targets.len() {
        return Err(Error::Invalid("batch is empty or ragged".into()));
    }
    let xs = flatten(inputs, net.input_dim)?;
    let ts = flatten(targets, net.outputs)?;
    let mut grad = vec![0.0; net.n_params()];
    batch_pass(net, &xs, &ts, inputs.len(), Some(&mut grad));
    Ok(grad)
}

/// Batch mean squared error.
pub fn mlp_loss(net: &MlpNet, inputs: &[Vec<f64>], targets: &[Vec<f64>]) -> Result<f64> {
    if inputs.is_empty() || inputs.len() != targets.len() {
        return Err(Error::Invalid("batch is empty or ragged".into()));
    }
    let xs = flatten(inputs, net.input_dim)?;
    let ts = flatten(targets, net.outputs)?;
    Ok(batch_pass(net, &xs, &ts, inputs.len(), None))
}

/// Regression target row for a class under an output mode.
pub fn class_targets(mode: OutputMode, n_classes: usize, class: usize) -> Result<Vec<f64>> {
    match mode {
        OutputMode::Binary => {
            if n_classes != 2 {
                return Err(Error::Config(format!(
                    "binary output mode needs 2 classes, got {n_classes}"
                )));
            }
            Ok(vec![class as f64])
        }
        OutputMode::Graded => {
            if n_classes > 4 {
                return Err(Error::Config(format!(
                    "graded output mode supports at most 4 classes, got {n_classes}"
                )));
            }
            Ok(vec![GRADED_TARGETS[class]])
        }
        OutputMode::OnePerClass => {
            let mut t = vec![0.0; n_classes];
            t[class] = 1.0;
            Ok(t)
        }
    }
}

/// Per-attribute affine map onto [-1, 1] fitted on the training data.
#[derive(Debug, Clone, PartialEq)]
struct InputScaler {
    center: Vec<f64>,
    half_range: Vec<f64>,
}

impl InputScaler {
    fn fit(data: &LabeledDataset) -> Result<InputScaler> {
        let d = data.dataset.n_attributes();
        let mut center = vec![0.0; d];
        let mut half_range = vec![1.0; d];
        for c in 0..d {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for r in 0..data.n_samples() {
                let v = data.dataset.row(r)?[c];
                lo = lo.min(v);
                hi = hi.max(v);
            }
            if hi > lo {
                center[c] = (lo + hi) / 2.0;
                half_range[c] = (hi - lo) / 2.0;
            } else {
                // constant attribute maps to 0
                center[c] = lo;
                half_range[c] = 1.0;
            }
        }
        Ok(InputScaler { center, half_range })
    }

    fn apply(&self, features: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.extend(
            features
                .iter()
                .zip(&self.center)
                .zip(&self.half_range)
                .map(|((x, c), h)| (x - c) / h),
        );
    }
}

#[derive(Debug, Clone)]
pub(crate) struct MlpModel {
    pub net: MlpNet,
    pub mode: OutputMode,
    pub n_classes: usize,
    scaler: InputScaler,
}

impl MlpModel {
    pub fn predict(&self, features: &[f64]) -> Result<Prediction> {
        let mut scaled = Vec::with_capacity(features.len());
        self.scaler.apply(features, &mut scaled);
        let (_, out) = self.net.forward(&scaled);
        let class = match self.mode {
            OutputMode::Binary => usize::from(out[0] > 0.5),
            OutputMode::Graded => decode_graded_among(out[0], self.n_classes),
            OutputMode::OnePerClass => argmax(&out),
        };
        Ok(Prediction { class, scores: out })
    }

    pub fn dump(&self) -> String {
        let mut s = format!(
            "mode {}\nhidden {}\nw1 {:?}\nb1 {:?}\nw2 {:?}\nb2 {:?}\n",
            self.mode.name(),
            self.net.hidden,
            self.net.w1,
            self.net.b1,
            self.net.w2,
            self.net.b2
        );
        s.truncate(s.len().min(1 << 20));
        s
    }
}

pub(crate) fn train_mlp(
    config: &super::MlpConfig,
    data: &LabeledDataset,
    seed: u64,
) -> Result<(MlpModel, TrainingMeta)> {
    let n = data.n_samples();
    let n_classes = data.n_classes();
    let input_dim = data.dataset.n_attributes();
    let outputs = match config.output_mode {
        OutputMode::OnePerClass => n_classes,
        _ => 1,
    };
    // validate mode/class compatibility up front
    class_targets(config.output_mode, n_classes, 0)?;

    let scaler = InputScaler::fit(data)?;
    let mut xs = Vec::with_capacity(n * input_dim);
    let mut ts = Vec::with_capacity(n * outputs);
    let mut scaled = Vec::with_capacity(input_dim);
    for r in 0..n {
        scaler.apply(&data.dataset.row(r)?, &mut scaled);
        xs.extend_from_slice(&scaled);
        ts.extend(class_targets(config.output_mode, n_classes, data.labels[r])?);
    }

    let mut net = MlpNet::init(input_dim, config.hidden_units, outputs, config.init_scale, seed);
    let mut grad = vec![0.0; net.n_params()];
    let mut epochs_run = 0u32;
    let mut initial_loss = None;
    let hidden_len = net.w1.len() + net.b1.len();
    let lr_hidden = config.learning_rate;
    let lr_output = config.learning_rate / config.hidden_units as f64;

    for epoch in 1..=config.epochs {
        let loss = batch_pass(&net, &xs, &ts, n, Some(&mut grad));
        if !loss.is_finite() {
            return Err(Error::Diverged { epoch });
        }
        initial_loss.get_or_insert(loss);
        if config.loss_tol > 0.0 && loss <= config.loss_tol {
            break;
        }
        for (i, (w, g)) in net
            .w1
            .iter_mut()
            .chain(net.b1.iter_mut())
            .chain(net.w2.iter_mut())
            .chain(net.b2.iter_mut())
            .zip(&grad)
            .enumerate()
        {
            let lr = if i < hidden_len { lr_hidden } else { lr_output };
            *w -= lr * g;
        }
        epochs_run = epoch;
    }

    let final_loss = batch_pass(&net, &xs, &ts, n, None);
    if !final_loss.is_finite() {
        return Err(Error::Diverged {
            epoch: config.epochs,
        });
    }

    Ok((
        MlpModel {
            net,
            mode: config.output_mode,
            n_classes,
            scaler,
        },
        TrainingMeta {
            epochs_run: Some(epochs_run),
            initial_loss,
            final_loss: Some(final_loss),
        },
    ))
}
