use infocausality::analysis::ic_violated;
use infocausality::protocol::run_game;
use infocausality::rng::derive_seed;
use infocausality::Correlation;
use serde::Serialize;

use crate::config::{ConfigError, ExperimentConfig};
use crate::emit::display;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub cell: usize,
    #[serde(rename = "E")]
    pub e: f64,
    pub n: u32,
    pub m: usize,
    pub trials: u64,
    /// Seed of this cell, derived from the config seed and the cell index.
    pub seed: u64,
    pub successes: u64,
    pub empirical_success: f64,
    /// `(½(1+Eⁿ))^m`.
    pub analytic_success: f64,
    pub standard_error: f64,
    pub z_score: f64,
    /// `h(½(1+Eⁿ))` for one pyramid.
    pub entropy: f64,
    pub threshold: f64,
    pub violated: bool,
    pub empirical_display: String,
    pub analytic_display: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub seed: u64,
    pub rows: Vec<SweepRow>,
}

/// Runs every cell in config order. Output depends only on the config.
pub fn sweep(cfg: &ExperimentConfig) -> Result<SweepReport, ConfigError> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.cells.len());
    for (index, cell) in cfg.cells.iter().enumerate() {
        let seed = derive_seed(cfg.seed, index as u64);
        let wrap = |source| ConfigError::Cell { index, source };
        let report = run_game(&cell.game_config(seed).map_err(wrap)?).map_err(wrap)?;
        let entropy = ic_violated(Correlation::new(cell.e).map_err(wrap)?, cell.n);
        let z_score = if report.standard_error > 0.0 {
            (report.empirical_success - report.analytic_success) / report.standard_error
        } else {
            0.0
        };
        rows.push(SweepRow {
            cell: index,
            e: cell.e,
            n: cell.n,
            m: cell.m,
            trials: cell.trials,
            seed,
            successes: report.successes,
            empirical_success: report.empirical_success,
            analytic_success: report.analytic_success,
            standard_error: report.standard_error,
            z_score,
            entropy: entropy.entropy,
            threshold: entropy.threshold,
            violated: entropy.violated,
            empirical_display: display(report.empirical_success, 4),
            analytic_display: display(report.analytic_success, 5),
        });
    }
    Ok(SweepReport { seed: cfg.seed, rows })
}
