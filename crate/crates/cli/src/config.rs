//! Validated experiment configurations. Every field lands in the CSV header
//! of the run it produced.

use complexity_core::SystemShape;
use thiserror::Error;

/// Commands building a dense 2^N x 2^N kernel refuse anything bigger.
pub const MAX_DENSE_NODES: usize = 12;

#[derive(Debug, Error)]
#[error("configuration error: {0}")]
pub struct ConfigError(pub String);

fn check_nodes(nodes: usize) -> Result<SystemShape, ConfigError> {
    if nodes > MAX_DENSE_NODES {
        return Err(ConfigError(format!(
            "--nodes {nodes} exceeds the dense-kernel limit of {MAX_DENSE_NODES} \
             (a 2^{nodes} x 2^{nodes} matrix will not fit in memory)"
        )));
    }
    SystemShape::new(nodes).map_err(|e| ConfigError(e.to_string()))
}

/// The default β grid: 41 points, 0.0 to 4.0 in steps of 0.1.
pub fn default_beta_grid() -> Vec<f64> {
    (0..=40).map(|i| i as f64 / 10.0).collect()
}

/// β-sweep over random weight matrices.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub nodes: usize,
    pub beta_grid: Vec<f64>,
    pub trials: usize,
    pub weights_low: f64,
    pub weights_high: f64,
    pub seed: u64,
    pub tol_projection: f64,
    pub projection_max_iter: usize,
    pub tol_stationary: f64,
    pub stationary_max_iter: usize,
}

impl SweepConfig {
    pub fn new(nodes: usize, trials: usize, seed: u64) -> Self {
        SweepConfig {
            nodes,
            beta_grid: default_beta_grid(),
            trials,
            weights_low: 0.0,
            weights_high: 1.0,
            seed,
            tol_projection: 1e-9,
            projection_max_iter: 100_000,
            tol_stationary: 1e-12,
            stationary_max_iter: 1_000_000,
        }
    }

    pub fn shape(&self) -> Result<SystemShape, ConfigError> {
        check_nodes(self.nodes)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.shape()?;
        if self.trials == 0 {
            return Err(ConfigError("--trials must be at least 1".into()));
        }
        if self.beta_grid.is_empty() {
            return Err(ConfigError("--beta-grid must not be empty".into()));
        }
        for pair in self.beta_grid.windows(2) {
            if pair[0] >= pair[1] {
                return Err(ConfigError(
                    "--beta-grid values must be strictly increasing".into(),
                ));
            }
        }
        if self.beta_grid[0] < 0.0 || !self.beta_grid.iter().all(|b| b.is_finite()) {
            return Err(ConfigError(
                "--beta-grid values must be finite and >= 0".into(),
            ));
        }
        if self.weights_low > self.weights_high {
            return Err(ConfigError(
                "--weights-range low must not exceed high".into(),
            ));
        }
        if !(self.weights_low.is_finite() && self.weights_high.is_finite()) {
            return Err(ConfigError("--weights-range must be finite".into()));
        }
        if self.tol_projection <= 0.0 || self.tol_stationary <= 0.0 {
            return Err(ConfigError("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Single-system measurement of a weight file at one β.
#[derive(Debug, Clone)]
pub struct MeasureConfig {
    pub beta: f64,
    pub tol_projection: f64,
    pub projection_max_iter: usize,
    pub tol_stationary: f64,
    pub stationary_max_iter: usize,
}

impl MeasureConfig {
    pub fn new(beta: f64) -> Self {
        MeasureConfig {
            beta,
            tol_projection: 1e-9,
            projection_max_iter: 100_000,
            tol_stationary: 1e-12,
            stationary_max_iter: 1_000_000,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !self.beta.is_finite() || self.beta < 0.0 {
            return Err(ConfigError("--beta must be finite and >= 0".into()));
        }
        if self.tol_projection <= 0.0 || self.tol_stationary <= 0.0 {
            return Err(ConfigError("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Stochastic incremental-learning experiment (finite β).
#[derive(Debug, Clone)]
pub struct HopfieldLearnConfig {
    pub nodes: usize,
    pub beta: f64,
    pub patterns_max: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol_stationary: f64,
    pub stationary_max_iter: usize,
    pub zero_diagonal: bool,
}

impl HopfieldLearnConfig {
    pub fn new(nodes: usize, beta: f64, patterns_max: usize, trials: usize, seed: u64) -> Self {
        HopfieldLearnConfig {
            nodes,
            beta,
            patterns_max,
            trials,
            seed,
            tol_stationary: 1e-12,
            stationary_max_iter: 1_000_000,
            zero_diagonal: false,
        }
    }

    pub fn shape(&self) -> Result<SystemShape, ConfigError> {
        check_nodes(self.nodes)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.shape()?;
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(ConfigError("--beta must be finite and > 0".into()));
        }
        if self.trials == 0 || self.patterns_max == 0 {
            return Err(ConfigError(
                "--trials and --patterns-max must be at least 1".into(),
            ));
        }
        if self.tol_stationary <= 0.0 {
            return Err(ConfigError("tolerances must be positive".into()));
        }
        Ok(())
    }

    pub fn curve_config(&self) -> Result<complexity_core::LearningCurveConfig, ConfigError> {
        let shape = self.shape()?;
        let mut cfg = complexity_core::LearningCurveConfig::new(
            shape,
            self.patterns_max,
            self.beta,
            self.trials,
            self.seed,
        );
        cfg.stationary_tol = self.tol_stationary;
        cfg.stationary_max_iter = self.stationary_max_iter;
        cfg.zero_diagonal = self.zero_diagonal;
        Ok(cfg)
    }
}

/// Deterministic (infinite-β) complexity-capacity experiment.
#[derive(Debug, Clone)]
pub struct HopfieldCapacityConfig {
    pub nodes: usize,
    pub patterns_max: usize,
    pub trials: usize,
    pub seed: u64,
    pub gap_tol: f64,
    pub max_iter: usize,
    pub zero_diagonal: bool,
}

impl HopfieldCapacityConfig {
    pub fn new(nodes: usize, patterns_max: usize, trials: usize, seed: u64) -> Self {
        HopfieldCapacityConfig {
            nodes,
            patterns_max,
            trials,
            seed,
            gap_tol: 1e-4,
            max_iter: 5_000_000,
            zero_diagonal: false,
        }
    }

    pub fn shape(&self) -> Result<SystemShape, ConfigError> {
        check_nodes(self.nodes)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.shape()?;
        if self.trials == 0 || self.patterns_max == 0 {
            return Err(ConfigError(
                "--trials and --patterns-max must be at least 1".into(),
            ));
        }
        if self.gap_tol <= 0.0 {
            return Err(ConfigError("tolerances must be positive".into()));
        }
        Ok(())
    }

    pub fn curve_config(&self) -> Result<complexity_core::CapacityCurveConfig, ConfigError> {
        let shape = self.shape()?;
        let mut cfg = complexity_core::CapacityCurveConfig::new(
            shape,
            self.patterns_max,
            self.trials,
            self.seed,
        );
        cfg.gap_tol = self.gap_tol;
        cfg.max_iter = self.max_iter;
        cfg.zero_diagonal = self.zero_diagonal;
        Ok(cfg)
    }
}

/// Parse `lo,hi` for `--weights-range`.
pub fn parse_weight_range(text: &str) -> Result<(f64, f64), ConfigError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(ConfigError(format!(
            "--weights-range expects `low,high`, got {text:?}"
        )));
    }
    let low: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| ConfigError(format!("bad weight bound {:?}", parts[0])))?;
    let high: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| ConfigError(format!("bad weight bound {:?}", parts[1])))?;
    Ok((low, high))
}

/// Parse `--beta-grid`: either a comma list (`0,0.5,1`) or `lo:hi:step`.
pub fn parse_beta_grid(text: &str) -> Result<Vec<f64>, ConfigError> {
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(ConfigError(format!(
                "--beta-grid range form is `lo:hi:step`, got {text:?}"
            )));
        }
        let nums: Result<Vec<f64>, _> = parts.iter().map(|p| p.trim().parse::<f64>()).collect();
        let nums = nums.map_err(|_| ConfigError(format!("bad beta grid {text:?}")))?;
        let (lo, hi, step) = (nums[0], nums[1], nums[2]);
        if step <= 0.0 || hi < lo {
            return Err(ConfigError("beta grid needs step > 0 and hi >= lo".into()));
        }
        let count = ((hi - lo) / step + 1.5).floor() as usize;
        let grid: Vec<f64> = (0..count)
            .map(|i| lo + i as f64 * step)
            .filter(|b| *b <= hi + step * 1e-9)
            .collect();
        return Ok(grid);
    }
    let grid: Result<Vec<f64>, _> = text.split(',').map(|p| p.trim().parse::<f64>()).collect();
    grid.map_err(|_| ConfigError(format!("bad beta grid {text:?}")))
}
