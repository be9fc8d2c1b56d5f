//! The experiment bodies. Pure given their configs; all randomness flows
//! from per-trial ChaCha12 substreams.

use complexity_core::{
    phi_g, stationary_distribution, BoltzmannMachine, Error, MeasureReport, WeightMatrix,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::config::{MeasureConfig, SweepConfig};

/// One sweep row; failed rows keep their (trial, β) key and carry the error
/// text instead of values.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub trial: usize,
    pub beta: f64,
    pub outcome: Result<MeasureReport, String>,
}

/// All five measures of one (W, β) system at its stationary distribution.
#[derive(Debug, Clone)]
pub struct MeasureRow {
    pub beta: f64,
    pub report: MeasureReport,
}

fn system_report(
    weights: &WeightMatrix,
    beta: f64,
    tol_stationary: f64,
    stationary_max_iter: usize,
    tol_projection: f64,
    projection_max_iter: usize,
) -> Result<MeasureReport, Error> {
    let machine = BoltzmannMachine::new(weights.clone(), beta)?;
    let kernel = machine.transition_matrix();
    let p = stationary_distribution(&kernel, tol_stationary, stationary_max_iter)?;
    let phi = phi_g(&p, &kernel, tol_projection, projection_max_iter)?;
    Ok(MeasureReport::compute(&p, &kernel, Some(phi)))
}

/// Per trial: draw one weight matrix i.i.d. uniform in the configured range,
/// then measure it at every β on the grid. Convergence failures are recorded
/// per row and the run continues.
pub fn sweep_beta(config: &SweepConfig) -> Vec<SweepRow> {
    let shape = config.shape().expect("validated config");
    let n = shape.num_nodes();
    let rows: Vec<Vec<SweepRow>> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
            rng.set_stream(trial as u64);
            let w: Vec<f64> = (0..n * n)
                .map(|_| rng.gen_range(config.weights_low..=config.weights_high))
                .collect();
            let weights = WeightMatrix::new(shape, w).expect("finite draws");
            config
                .beta_grid
                .iter()
                .map(|&beta| SweepRow {
                    trial,
                    beta,
                    outcome: system_report(
                        &weights,
                        beta,
                        config.tol_stationary,
                        config.stationary_max_iter,
                        config.tol_projection,
                        config.projection_max_iter,
                    )
                    .map_err(|e| e.to_string()),
                })
                .collect()
        })
        .collect();
    rows.into_iter().flatten().collect()
}

/// Measure one weight matrix at one β.
pub fn measure_weights(weights: &WeightMatrix, config: &MeasureConfig) -> Result<MeasureRow, Error> {
    let report = system_report(
        weights,
        config.beta,
        config.tol_stationary,
        config.stationary_max_iter,
        config.tol_projection,
        config.projection_max_iter,
    )?;
    Ok(MeasureRow {
        beta: config.beta,
        report,
    })
}
