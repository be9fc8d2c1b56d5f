//! CSV emission. Every file starts with `#` comment lines carrying the full
//! configuration and the RNG identity, then a column-header line, then data
//! rows. Numeric cells use Rust's shortest round-trip formatting, so files
//! are byte-stable across runs and worker counts.

use std::fmt::Write as _;

use complexity_core::{CapacityPoint, LearningPoint};

use crate::config::{HopfieldCapacityConfig, HopfieldLearnConfig, MeasureConfig, SweepConfig};
use crate::experiments::{MeasureRow, SweepRow};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const RNG_LINE: &str = "# rng=chacha12 streams=per-trial";

fn join_floats(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn push_cell(line: &mut String, value: Option<f64>) {
    match value {
        Some(v) => {
            let _ = write!(line, ",{v}");
        }
        None => line.push_str(",NA"),
    }
}

/// Mean and standard error (sample std / sqrt(n)); stderr is 0 for n < 2.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

pub fn sweep_csv(config: &SweepConfig, rows: &[SweepRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# complexity-lab v{VERSION}");
    let _ = writeln!(out, "# command=sweep-beta");
    let _ = writeln!(
        out,
        "# nodes={} trials={} seed={}",
        config.nodes, config.trials, config.seed
    );
    let _ = writeln!(
        out,
        "# weights_low={} weights_high={}",
        config.weights_low, config.weights_high
    );
    let _ = writeln!(out, "# beta_grid={}", join_floats(&config.beta_grid));
    let _ = writeln!(
        out,
        "# tol_projection={} projection_max_iter={} tol_stationary={} stationary_max_iter={}",
        config.tol_projection,
        config.projection_max_iter,
        config.tol_stationary,
        config.stationary_max_iter
    );
    let _ = writeln!(out, "{RNG_LINE}");
    let _ = writeln!(out, "trial,beta,MI_bits,SI_bits,IF_bits,PhiG_bits,I_bits");
    for row in rows {
        let mut line = format!("{},{}", row.trial, row.beta);
        match &row.outcome {
            Ok(r) => {
                push_cell(&mut line, Some(r.mi));
                push_cell(&mut line, Some(r.si));
                push_cell(&mut line, Some(r.if_flow));
                push_cell(&mut line, r.phi_g);
                push_cell(&mut line, Some(r.mutual_info));
            }
            Err(_) => {
                for _ in 0..5 {
                    line.push_str(",NA");
                }
            }
        }
        let _ = writeln!(out, "{line}");
    }
    out
}

/// Trial-mean ± stderr per grid point, NA rows skipped.
pub fn sweep_summary_csv(config: &SweepConfig, rows: &[SweepRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# complexity-lab v{VERSION}");
    let _ = writeln!(out, "# command=sweep-beta summary");
    let _ = writeln!(
        out,
        "# nodes={} trials={} seed={}",
        config.nodes, config.trials, config.seed
    );
    let _ = writeln!(
        out,
        "beta,MI_mean,MI_stderr,SI_mean,SI_stderr,IF_mean,IF_stderr,\
         PhiG_mean,PhiG_stderr,I_mean,I_stderr,rows"
    );
    for &beta in &config.beta_grid {
        let reports: Vec<_> = rows
            .iter()
            .filter(|r| r.beta == beta)
            .filter_map(|r| r.outcome.as_ref().ok())
            .collect();
        let column = |f: &dyn Fn(&complexity_core::MeasureReport) -> f64| {
            let values: Vec<f64> = reports.iter().map(|r| f(r)).collect();
            mean_stderr(&values)
        };
        let (mi_m, mi_s) = column(&|r| r.mi);
        let (si_m, si_s) = column(&|r| r.si);
        let (if_m, if_s) = column(&|r| r.if_flow);
        let (phi_m, phi_s) = column(&|r| r.phi_g.unwrap_or(f64::NAN));
        let (i_m, i_s) = column(&|r| r.mutual_info);
        let _ = writeln!(
            out,
            "{beta},{mi_m},{mi_s},{si_m},{si_s},{if_m},{if_s},{phi_m},{phi_s},{i_m},{i_s},{}",
            reports.len()
        );
    }
    out
}

pub fn measure_csv(config: &MeasureConfig, weights_file: &str, nodes: usize, row: &MeasureRow) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# complexity-lab v{VERSION}");
    let _ = writeln!(out, "# command=measure");
    let _ = writeln!(out, "# weights={weights_file} nodes={nodes}");
    let _ = writeln!(
        out,
        "# tol_projection={} projection_max_iter={} tol_stationary={} stationary_max_iter={}",
        config.tol_projection,
        config.projection_max_iter,
        config.tol_stationary,
        config.stationary_max_iter
    );
    let _ = writeln!(out, "beta,MI_bits,SI_bits,IF_bits,PhiG_bits,I_bits");
    let mut line = row.beta.to_string();
    push_cell(&mut line, Some(row.report.mi));
    push_cell(&mut line, Some(row.report.si));
    push_cell(&mut line, Some(row.report.if_flow));
    push_cell(&mut line, row.report.phi_g);
    push_cell(&mut line, Some(row.report.mutual_info));
    let _ = writeln!(out, "{line}");
    out
}

pub fn learn_csv(config: &HopfieldLearnConfig, points: &[LearningPoint]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# complexity-lab v{VERSION}");
    let _ = writeln!(out, "# command=hopfield-learn");
    let _ = writeln!(
        out,
        "# nodes={} beta={} patterns_max={} trials={} seed={} zero_diagonal={}",
        config.nodes,
        config.beta,
        config.patterns_max,
        config.trials,
        config.seed,
        config.zero_diagonal
    );
    let _ = writeln!(
        out,
        "# tol_stationary={} stationary_max_iter={}",
        config.tol_stationary, config.stationary_max_iter
    );
    let _ = writeln!(out, "{RNG_LINE}");
    let _ = writeln!(out, "trial,T,IF_bits");
    for p in points {
        let _ = writeln!(out, "{},{},{}", p.trial, p.patterns_stored, p.if_bits);
    }
    out
}

pub fn learn_summary_csv(config: &HopfieldLearnConfig, points: &[LearningPoint]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# complexity-lab v{VERSION}");
    let _ = writeln!(out, "# command=hopfield-learn summary");
    let _ = writeln!(
        out,
        "# nodes={} beta={} trials={} seed={}",
        config.nodes, config.beta, config.trials, config.seed
    );
    let _ = writeln!(out, "T,IF_mean,IF_stderr,rows");
    for t in 1..=config.patterns_max {
        let values: Vec<f64> = points
            .iter()
            .filter(|p| p.patterns_stored == t)
            .map(|p| p.if_bits)
            .collect();
        let (m, s) = mean_stderr(&values);
        let _ = writeln!(out, "{t},{m},{s},{}", values.len());
    }
    out
}

pub fn capacity_csv(config: &HopfieldCapacityConfig, points: &[CapacityPoint]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# complexity-lab v{VERSION}");
    let _ = writeln!(out, "# command=hopfield-capacity");
    let _ = writeln!(
        out,
        "# nodes={} patterns_max={} trials={} seed={} zero_diagonal={}",
        config.nodes, config.patterns_max, config.trials, config.seed, config.zero_diagonal
    );
    let _ = writeln!(
        out,
        "# gap_tol={} max_iter={}",
        config.gap_tol, config.max_iter
    );
    let _ = writeln!(out, "{RNG_LINE}");
    let _ = writeln!(out, "trial,T,capacity_bits");
    for p in points {
        let _ = writeln!(out, "{},{},{}", p.trial, p.patterns_stored, p.capacity_bits);
    }
    out
}

pub fn capacity_summary_csv(
    config: &HopfieldCapacityConfig,
    points: &[CapacityPoint],
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# complexity-lab v{VERSION}");
    let _ = writeln!(out, "# command=hopfield-capacity summary");
    let _ = writeln!(
        out,
        "# nodes={} trials={} seed={}",
        config.nodes, config.trials, config.seed
    );
    let _ = writeln!(out, "T,capacity_mean,capacity_stderr,rows");
    for t in 1..=config.patterns_max {
        let values: Vec<f64> = points
            .iter()
            .filter(|p| p.patterns_stored == t)
            .map(|p| p.capacity_bits)
            .collect();
        let (m, s) = mean_stderr(&values);
        let _ = writeln!(out, "{t},{m},{s},{}", values.len());
    }
    out
}

/// `out.csv` -> `out.summary.csv` (keeps any directory part).
pub fn summary_path(out_path: &str) -> String {
    match out_path.strip_suffix(".csv") {
        Some(stem) => format!("{stem}.summary.csv"),
        None => format!("{out_path}.summary.csv"),
    }
}
