use nalgebra::DMatrix;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::dataset::ToySample;
use super::mlp::{self, Adam, AdamConfig, Gradients, Mlp};
use crate::error::{Error, Result};
use crate::rng::{self, Rng};

/// A conditional velocity field `v(x, t, e)` on the plane.
pub trait VelocityField {
    fn cond_dim(&self) -> usize;

    /// Velocities for a batch: `x` is `B × 2`, `cond` is `B × cond_dim`.
    fn velocity(&self, x: &DMatrix<f64>, t: f64, cond: &DMatrix<f64>) -> DMatrix<f64>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub hidden: Vec<usize>,
    pub steps: usize,
    pub batch_size: usize,
    pub adam: AdamConfig,
    /// Probability of conditioning a training pair on its coarse code.
    pub coarse_fraction: f64,
    /// Samples held out from the end of the data for evaluation.
    pub holdout: usize,
    pub log_every: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            hidden: vec![64, 64, 64],
            steps: 20_000,
            batch_size: 256,
            adam: AdamConfig::default(),
            coarse_fraction: 0.5,
            holdout: 512,
            log_every: 500,
        }
    }
}

/// Trained (or freshly initialized) velocity network and its training record.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowModel {
    pub net: Mlp,
    pub cond_dim: usize,
    pub steps: usize,
    pub initial_eval_loss: f64,
    pub final_eval_loss: f64,
    /// `(step, held-out loss)` pairs.
    pub loss_trace: Vec<(usize, f64)>,
}

impl FlowModel {
    /// Network with inputs `(x, t, e)` and the given hidden widths.
    pub fn init(cond_dim: usize, hidden: &[usize], rng: &mut Rng) -> Result<Self> {
        let mut sizes = vec![3 + cond_dim];
        sizes.extend_from_slice(hidden);
        sizes.push(2);
        Ok(Self {
            net: Mlp::new(&sizes, rng)?,
            cond_dim,
            steps: 0,
            initial_eval_loss: f64::NAN,
            final_eval_loss: f64::NAN,
            loss_trace: Vec::new(),
        })
    }

    /// Maximum relative gradient error on a fixed synthetic batch.
    pub fn gradient_check(&self, eps: f64) -> Result<f64> {
        let mut r = rng::substream(0, "gradient-check");
        let b = 16;
        let input = DMatrix::from_fn(b, self.net.input_dim(), |_, j| {
            if j == 2 { r.random::<f64>() } else { StandardNormal.sample(&mut r) }
        });
        let target = DMatrix::from_fn(b, 2, |_, _| StandardNormal.sample(&mut r));
        mlp::gradient_check(&self.net, &input, &target, eps)
    }
}

impl VelocityField for FlowModel {
    fn cond_dim(&self) -> usize {
        self.cond_dim
    }

    fn velocity(&self, x: &DMatrix<f64>, t: f64, cond: &DMatrix<f64>) -> DMatrix<f64> {
        self.net.predict(&network_input(x, t, cond))
    }
}

fn network_input(x: &DMatrix<f64>, t: f64, cond: &DMatrix<f64>) -> DMatrix<f64> {
    let b = x.nrows();
    let c = cond.ncols();
    DMatrix::from_fn(b, 3 + c, |i, j| match j {
        0 | 1 => x[(i, j)],
        2 => t,
        _ => cond[(i, j - 3)],
    })
}

/// One training batch: network inputs `(x_t, t, e)` and velocity targets.
pub fn training_batch(data: &[ToySample], size: usize, coarse_fraction: f64, rng: &mut Rng) -> (DMatrix<f64>, DMatrix<f64>) {
    let c = data[0].fine.values.len();
    let mut input = DMatrix::zeros(size, 3 + c);
    let mut target = DMatrix::zeros(size, 2);
    for i in 0..size {
        let s = &data[rng.random_range(0..data.len())];
        let code = if rng.random::<f64>() < coarse_fraction { &s.coarse } else { &s.fine };
        let t: f64 = rng.random();
        for d in 0..2 {
            let noise: f64 = StandardNormal.sample(rng);
            input[(i, d)] = (1.0 - t) * s.point[d] + t * noise;
            // Velocity of the straight path from data (t = 0) to noise (t = 1).
            target[(i, d)] = noise - s.point[d];
        }
        input[(i, 2)] = t;
        for (j, v) in code.values.iter().enumerate() {
            input[(i, 3 + j)] = *v;
        }
    }
    (input, target)
}

/// Trains the velocity field with Adam on the rectified-flow regression loss.
pub fn train_velocity_field(data: &[ToySample], config: &TrainConfig, rng: &mut Rng) -> Result<FlowModel> {
    if data.is_empty() {
        return Err(Error::Domain("training data is empty".into()));
    }
    if config.batch_size == 0 {
        return Err(Error::Domain("batch size must be >= 1".into()));
    }
    let cond_dim = data[0].fine.values.len();
    let (train, holdout) = if data.len() > 2 * config.holdout && config.holdout > 0 {
        data.split_at(data.len() - config.holdout)
    } else {
        (data, data)
    };
    let mut model = FlowModel::init(cond_dim, &config.hidden, rng)?;
    let mut eval_rng = rng::substream(0, "holdout-batch");
    let eval = training_batch(holdout, holdout.len().max(256), config.coarse_fraction, &mut eval_rng);
    let eval_loss = |net: &Mlp| mlp::squared_error(&net.predict(&eval.0), &eval.1).0;

    model.initial_eval_loss = eval_loss(&model.net);
    model.loss_trace.push((0, model.initial_eval_loss));
    let mut opt = Adam::new(&model.net, config.adam);
    for step in 1..=config.steps {
        let (input, target) = training_batch(train, config.batch_size, config.coarse_fraction, rng);
        let cache = model.net.forward(&input);
        let (loss, grad) = mlp::squared_error(cache.output(), &target);
        if !loss.is_finite() {
            return Err(Error::Divergence { step, loss });
        }
        let grads: Gradients = model.net.backward(&cache, grad);
        opt.step(&mut model.net, &grads);
        if config.log_every > 0 && step % config.log_every == 0 {
            model.loss_trace.push((step, eval_loss(&model.net)));
        }
    }
    if !model.net.is_finite() {
        return Err(Error::Divergence { step: config.steps, loss: f64::NAN });
    }
    model.steps = config.steps;
    model.final_eval_loss = eval_loss(&model.net);
    Ok(model)
}

/// Integrates from `t = 1` down to `t = 0` on a uniform grid of `steps`
/// intervals: `x ← x + (t_{k-1} - t_k)·v(x, t_k)`.
pub fn euler_integrate<F: VelocityField + ?Sized>(
    field: &F,
    x_start: &DMatrix<f64>,
    cond: &DMatrix<f64>,
    steps: usize,
) -> Result<DMatrix<f64>> {
    if steps == 0 {
        return Err(Error::Domain("need at least one Euler step".into()));
    }
    if cond.nrows() != x_start.nrows() || cond.ncols() != field.cond_dim() || x_start.ncols() != 2 {
        return Err(Error::Dimension(format!(
            "batch shapes x {:?}, cond {:?} do not match cond_dim {}",
            x_start.shape(),
            cond.shape(),
            field.cond_dim()
        )));
    }
    let mut x = x_start.clone();
    let n = steps as f64;
    for k in (1..=steps).rev() {
        let t = k as f64 / n;
        let t_next = (k - 1) as f64 / n;
        let v = field.velocity(&x, t, cond);
        x += v * (t_next - t);
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("Euler state at t = {t_next}")));
        }
    }
    Ok(x)
}

/// Draws `x_1 ~ N(0, I)` from `rng` and integrates it to `t = 0`.
pub fn euler_sample<F: VelocityField + ?Sized>(field: &F, cond: &[f64], steps: usize, rng: &mut Rng) -> Result<[f64; 2]> {
    let x1 = DMatrix::from_fn(1, 2, |_, _| StandardNormal.sample(rng));
    let c = DMatrix::from_row_slice(1, cond.len(), cond);
    let x0 = euler_integrate(field, &x1, &c, steps)?;
    Ok([x0[(0, 0)], x0[(0, 1)]])
}
