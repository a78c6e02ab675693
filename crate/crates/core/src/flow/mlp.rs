//! Fully connected tanh network with hand-written backpropagation and Adam.

use nalgebra::{DMatrix, DVector};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    /// `out × in`.
    pub weights: DMatrix<f64>,
    pub bias: DVector<f64>,
}

impl Layer {
    pub fn inputs(&self) -> usize {
        self.weights.ncols()
    }

    pub fn outputs(&self) -> usize {
        self.weights.nrows()
    }
}

/// Tanh hidden layers, linear output layer.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    pub layers: Vec<Layer>,
}

/// Activations kept from the forward pass; `acts[0]` is the input batch.
pub struct ForwardCache {
    acts: Vec<DMatrix<f64>>,
}

impl ForwardCache {
    pub fn output(&self) -> &DMatrix<f64> {
        self.acts.last().expect("forward cache holds the input at least")
    }
}

impl Mlp {
    /// Glorot-uniform weights, zero biases.
    pub fn new(sizes: &[usize], rng: &mut Rng) -> Result<Self> {
        if sizes.len() < 2 || sizes.contains(&0) {
            return Err(Error::Domain(format!("invalid layer sizes {sizes:?}")));
        }
        let layers = sizes
            .windows(2)
            .map(|w| {
                let (fan_in, fan_out) = (w[0], w[1]);
                let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
                let mut weights = DMatrix::zeros(fan_out, fan_in);
                for i in 0..fan_out {
                    for j in 0..fan_in {
                        weights[(i, j)] = rng.random_range(-limit..limit);
                    }
                }
                Layer { weights, bias: DVector::zeros(fan_out) }
            })
            .collect();
        Ok(Self { layers })
    }

    pub fn zeros(sizes: &[usize]) -> Self {
        Self {
            layers: sizes
                .windows(2)
                .map(|w| Layer { weights: DMatrix::zeros(w[1], w[0]), bias: DVector::zeros(w[1]) })
                .collect(),
        }
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].inputs()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().map_or(0, Layer::outputs)
    }

    pub fn parameter_count(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.bias.len()).sum()
    }

    /// Batch forward pass; rows of `input` are samples.
    pub fn forward(&self, input: &DMatrix<f64>) -> ForwardCache {
        let mut acts = Vec::with_capacity(self.layers.len() + 1);
        acts.push(input.clone());
        let last = self.layers.len() - 1;
        for (l, layer) in self.layers.iter().enumerate() {
            let mut z = acts[l].clone() * layer.weights.transpose();
            for mut row in z.row_iter_mut() {
                row += layer.bias.transpose();
            }
            if l != last {
                z.apply(|v| *v = v.tanh());
            }
            acts.push(z);
        }
        ForwardCache { acts }
    }

    pub fn predict(&self, input: &DMatrix<f64>) -> DMatrix<f64> {
        self.forward(input).acts.pop().expect("nonempty cache")
    }

    /// Gradients of the loss with respect to every parameter, given the
    /// gradient with respect to the network output.
    pub fn backward(&self, cache: &ForwardCache, output_grad: DMatrix<f64>) -> Gradients {
        let mut layers = Vec::with_capacity(self.layers.len());
        let mut dz = output_grad;
        for l in (0..self.layers.len()).rev() {
            let a_prev = &cache.acts[l];
            let weights = dz.transpose() * a_prev;
            let bias = DVector::from_iterator(dz.ncols(), dz.column_iter().map(|c| c.sum()));
            if l > 0 {
                let mut da = &dz * &self.layers[l].weights;
                da.zip_apply(a_prev, |g, a| *g *= 1.0 - a * a);
                dz = da;
            }
            layers.push(Layer { weights, bias });
        }
        layers.reverse();
        Gradients { layers }
    }

    /// Parameters flattened layer by layer: weights (row-major), then bias.
    pub fn flatten(&self) -> Vec<f64> {
        flatten_layers(&self.layers)
    }

    pub fn set_parameter(&mut self, index: usize, value: f64) {
        let mut idx = index;
        for layer in &mut self.layers {
            let (r, c) = layer.weights.shape();
            if idx < r * c {
                layer.weights[(idx / c, idx % c)] = value;
                return;
            }
            idx -= r * c;
            if idx < layer.bias.len() {
                layer.bias[idx] = value;
                return;
            }
            idx -= layer.bias.len();
        }
        panic!("parameter index {index} out of range");
    }

    pub fn is_finite(&self) -> bool {
        self.layers.iter().all(|l| l.weights.iter().chain(l.bias.iter()).all(|v| v.is_finite()))
    }
}

fn flatten_layers(layers: &[Layer]) -> Vec<f64> {
    let mut out = Vec::new();
    for l in layers {
        for i in 0..l.weights.nrows() {
            out.extend(l.weights.row(i).iter());
        }
        out.extend(l.bias.iter());
    }
    out
}

/// Parameter gradients, same shapes as the network.
#[derive(Debug, Clone)]
pub struct Gradients {
    pub layers: Vec<Layer>,
}

impl Gradients {
    pub fn flatten(&self) -> Vec<f64> {
        flatten_layers(&self.layers)
    }
}

/// Mean over the batch of the squared error summed over output dimensions,
/// and its gradient with respect to the prediction.
pub fn squared_error(pred: &DMatrix<f64>, target: &DMatrix<f64>) -> (f64, DMatrix<f64>) {
    let b = pred.nrows() as f64;
    let diff = pred - target;
    let loss = diff.norm_squared() / b;
    (loss, diff * (2.0 / b))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self { lr: 1e-3, beta1: 0.9, beta2: 0.999, eps: 1e-8 }
    }
}

pub struct Adam {
    config: AdamConfig,
    m: Vec<Layer>,
    v: Vec<Layer>,
    t: i32,
}

impl Adam {
    pub fn new(net: &Mlp, config: AdamConfig) -> Self {
        let zeros = |n: &Mlp| {
            n.layers
                .iter()
                .map(|l| Layer { weights: DMatrix::zeros(l.outputs(), l.inputs()), bias: DVector::zeros(l.outputs()) })
                .collect::<Vec<_>>()
        };
        Self { config, m: zeros(net), v: zeros(net), t: 0 }
    }

    pub fn step(&mut self, net: &mut Mlp, grads: &Gradients) {
        self.t += 1;
        let AdamConfig { lr, beta1, beta2, eps } = self.config;
        let c1 = 1.0 - beta1.powi(self.t);
        let c2 = 1.0 - beta2.powi(self.t);
        for (((p, g), m), v) in net.layers.iter_mut().zip(&grads.layers).zip(&mut self.m).zip(&mut self.v) {
            let update = |p: &mut f64, g: f64, m: &mut f64, v: &mut f64| {
                *m = beta1 * *m + (1.0 - beta1) * g;
                *v = beta2 * *v + (1.0 - beta2) * g * g;
                *p -= lr * (*m / c1) / ((*v / c2).sqrt() + eps);
            };
            for (((p, g), m), v) in p.weights.iter_mut().zip(g.weights.iter()).zip(m.weights.iter_mut()).zip(v.weights.iter_mut()) {
                update(p, *g, m, v);
            }
            for (((p, g), m), v) in p.bias.iter_mut().zip(g.bias.iter()).zip(m.bias.iter_mut()).zip(v.bias.iter_mut()) {
                update(p, *g, m, v);
            }
        }
    }
}

/// Largest relative discrepancy between analytic gradients and central
/// differences of step `eps`, over every parameter. Pairs where both
/// gradients vanish count as zero error.
pub fn gradient_check(net: &Mlp, input: &DMatrix<f64>, target: &DMatrix<f64>, eps: f64) -> Result<f64> {
    if !(1e-7..=1e-3).contains(&eps) {
        return Err(Error::Domain(format!("eps must lie in [1e-7, 1e-3], got {eps}")));
    }
    let cache = net.forward(input);
    let (_, dout) = squared_error(cache.output(), target);
    let analytic = net.backward(&cache, dout).flatten();
    let params = net.flatten();
    let loss_at = |probe: &Mlp| squared_error(&probe.predict(input), target).0;
    let mut probe = net.clone();
    let mut worst = 0.0_f64;
    for (i, (&p, &a)) in params.iter().zip(&analytic).enumerate() {
        probe.set_parameter(i, p + eps);
        let up = loss_at(&probe);
        probe.set_parameter(i, p - eps);
        let down = loss_at(&probe);
        probe.set_parameter(i, p);
        let numeric = (up - down) / (2.0 * eps);
        worst = worst.max(relative_error(a, numeric));
    }
    Ok(worst)
}

/// `|a - b| / max(|a|, |b|, 1e-7)`, zero when both are zero.
pub fn relative_error(a: f64, b: f64) -> f64 {
    if a == 0.0 && b == 0.0 {
        return 0.0;
    }
    (a - b).abs() / a.abs().max(b.abs()).max(1e-7)
}
