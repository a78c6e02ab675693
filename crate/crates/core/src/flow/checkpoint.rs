//! JSON checkpoint: layer shapes plus weights as 17-significant-digit
//! decimal strings, so a save/load cycle is exact.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::dataset::ToyDatasetSpec;
use super::mlp::{Layer, Mlp};
use super::model::FlowModel;
use crate::error::{Error, Result};
use crate::io::{format_f64, parse_f64};

pub const CHECKPOINT_FORMAT: &str = "promptmog-flow-v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerRecord {
    pub rows: usize,
    pub cols: usize,
    /// Row-major.
    pub weights: Vec<String>,
    pub bias: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub cond_dim: usize,
    pub steps: usize,
    pub initial_eval_loss: String,
    pub final_eval_loss: String,
    pub loss_trace: Vec<(usize, String)>,
    pub layers: Vec<LayerRecord>,
    /// Generating process the model was trained on, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset: Option<ToyDatasetSpec>,
}

impl From<&FlowModel> for Checkpoint {
    fn from(m: &FlowModel) -> Self {
        let layers = m
            .net
            .layers
            .iter()
            .map(|l| LayerRecord {
                rows: l.outputs(),
                cols: l.inputs(),
                weights: (0..l.outputs())
                    .flat_map(|i| l.weights.row(i).iter().map(|&v| format_f64(v)).collect::<Vec<_>>())
                    .collect(),
                bias: l.bias.iter().map(|&v| format_f64(v)).collect(),
            })
            .collect();
        Checkpoint {
            format: CHECKPOINT_FORMAT.into(),
            cond_dim: m.cond_dim,
            steps: m.steps,
            initial_eval_loss: format_f64(m.initial_eval_loss),
            final_eval_loss: format_f64(m.final_eval_loss),
            loss_trace: m.loss_trace.iter().map(|&(s, l)| (s, format_f64(l))).collect(),
            layers,
            dataset: None,
        }
    }
}

impl TryFrom<Checkpoint> for FlowModel {
    type Error = Error;

    fn try_from(c: Checkpoint) -> Result<Self> {
        if c.format != CHECKPOINT_FORMAT {
            return Err(Error::Validation(format!("unknown checkpoint format {:?}", c.format)));
        }
        let mut layers = Vec::with_capacity(c.layers.len());
        for (i, l) in c.layers.iter().enumerate() {
            if l.weights.len() != l.rows * l.cols || l.bias.len() != l.rows {
                return Err(Error::Validation(format!("layer {i} has inconsistent shape")));
            }
            let w: Vec<f64> = l.weights.iter().map(|s| parse_f64(s)).collect::<Result<_>>()?;
            let b: Vec<f64> = l.bias.iter().map(|s| parse_f64(s)).collect::<Result<_>>()?;
            layers.push(Layer { weights: DMatrix::from_row_slice(l.rows, l.cols, &w), bias: DVector::from_vec(b) });
        }
        if layers.is_empty() || layers[0].inputs() != 3 + c.cond_dim || layers.last().map(Layer::outputs) != Some(2) {
            return Err(Error::Validation("checkpoint layers do not map (x, t, e) to a 2D velocity".into()));
        }
        if layers.windows(2).any(|w| w[0].outputs() != w[1].inputs()) {
            return Err(Error::Validation("consecutive layer shapes do not chain".into()));
        }
        Ok(FlowModel {
            net: Mlp { layers },
            cond_dim: c.cond_dim,
            steps: c.steps,
            initial_eval_loss: parse_f64(&c.initial_eval_loss)?,
            final_eval_loss: parse_f64(&c.final_eval_loss)?,
            loss_trace: c.loss_trace.iter().map(|(s, l)| Ok((*s, parse_f64(l)?))).collect::<Result<_>>()?,
        })
    }
}

pub fn write_checkpoint(model: &FlowModel, dataset: Option<&ToyDatasetSpec>, path: &Path) -> Result<()> {
    let mut c = Checkpoint::from(model);
    c.dataset = dataset.copied();
    let mut text = serde_json::to_string_pretty(&c)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn read_checkpoint(path: &Path) -> Result<(FlowModel, Option<ToyDatasetSpec>)> {
    let c: Checkpoint = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let dataset = c.dataset;
    Ok((c.try_into()?, dataset))
}
