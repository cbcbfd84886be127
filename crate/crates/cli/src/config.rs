use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use hardy_core::weights::DEFAULT_N_MAX;
use hardy_core::{HardyError, WeightConfig, WeightSequence};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] HardyError),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub weights: Arc<WeightSequence>,
    pub n_work: usize,
    pub n_eval: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl SuiteConfig {
    /// Checks `n_eval + headroom ≤ n_work ≤ N_max`.
    pub fn validate(&self, headroom: usize) -> CliResult<()> {
        if self.n_work > self.weights.n_max() {
            return Err(CliError::Config(format!(
                "n_work = {} exceeds the weight table's n_max = {}",
                self.n_work,
                self.weights.n_max()
            )));
        }
        if self.n_eval + headroom > self.n_work {
            return Err(CliError::Config(format!(
                "n_eval = {} plus suite headroom {headroom} exceeds n_work = {}",
                self.n_eval, self.n_work
            )));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(CliError::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        Ok(())
    }
}

/// `fock` (or `fock:N`) selects built-in Fock weights; anything else is read as a JSON weight config.
pub fn load_weights(source: &str) -> CliResult<Arc<WeightSequence>> {
    if source == "fock" {
        return Ok(Arc::new(WeightSequence::fock(DEFAULT_N_MAX)));
    }
    if let Some(n) = source.strip_prefix("fock:") {
        let n_max = n.parse().map_err(|_| CliError::Config(format!("bad Fock size in {source:?}")))?;
        return Ok(Arc::new(WeightSequence::fock(n_max)));
    }
    let text = fs::read_to_string(Path::new(source)).map_err(|e| CliError::Io { path: source.to_string(), source: e })?;
    let config: WeightConfig =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("weight file {source}: {e}")))?;
    let weights = config.build().map_err(|e| CliError::Config(format!("weight file {source}: {e}")))?;
    Ok(Arc::new(weights))
}

/// Parses `"1,0.5-2i,i"` into complex numbers.
pub fn parse_complex_list(text: &str) -> CliResult<Vec<Complex64>> {
    text.split(',')
        .map(|part| {
            let part = part.trim();
            Complex64::from_str(part).map_err(|_| CliError::Config(format!("cannot parse complex number {part:?}")))
        })
        .collect()
}

/// Parses an affine map given as `a,b`.
pub fn parse_affine(text: &str) -> CliResult<(Complex64, Complex64)> {
    match parse_complex_list(text)?.as_slice() {
        [a] => Ok((*a, Complex64::new(0.0, 0.0))),
        [a, b] => Ok((*a, *b)),
        _ => Err(CliError::Config(format!("expected `a,b` for an affine map, got {text:?}"))),
    }
}
