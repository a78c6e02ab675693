//! Train a small conditional rectified flow on the 8-cluster ring and compare
//! sample diversity for a coarse code, a fine code, and mixture-sampled
//! perturbations of the fine code.
//!
//! Pass a step count as the first argument; the full reference run uses
//! 20000 steps on 20000 points.

use promptmog::flow::{
    self, ExperimentConfig, ExperimentReport, Method, PromptMogParams, ToyDatasetSpec, ToyTask, TrainConfig,
};
use promptmog::rng;

pub fn run_example_with(steps: usize) -> promptmog::Result<Vec<ExperimentReport>> {
    let spec = ToyDatasetSpec::default();
    let task = ToyTask::new(spec)?;
    let data = flow::make_dataset(&task, 20_000, &mut rng::substream(spec.seed, "data"))?;
    let config = TrainConfig { steps, ..Default::default() };
    let model = flow::train_velocity_field(&data, &config, &mut rng::substream(spec.seed, "train"))?;
    println!(
        "trained {steps} steps: held-out loss {:.4} -> {:.4}",
        model.initial_eval_loss, model.final_eval_loss
    );

    let exp = ExperimentConfig::new(0, (0..5).collect(), spec.cluster_std);
    let fine = task.fine_code(0);
    let coarse = task.coarse_code(task.sector_of(0));
    let reports = vec![
        flow::diversity_experiment(&model, &task, &coarse, Method::Baseline, &exp)?,
        flow::diversity_experiment(&model, &task, &fine, Method::Baseline, &exp)?,
        flow::diversity_experiment(&model, &task, &fine, Method::PromptMog(PromptMogParams::default()), &exp)?,
    ];
    for r in &reports {
        println!(
            "{:<10} {:<7} mean vendi {:>8.3}  off-support {:.3}",
            r.method,
            r.specificity,
            r.mean_vendi(),
            r.mean_off_support()
        );
    }
    Ok(reports)
}

#[allow(dead_code)]
fn main() -> promptmog::Result<()> {
    let steps = match std::env::args().nth(1) {
        Some(s) => s.parse().map_err(|_| promptmog::Error::Usage(format!("bad step count {s:?}")))?,
        None => 2_000,
    };
    run_example_with(steps).map(|_| ())
}
