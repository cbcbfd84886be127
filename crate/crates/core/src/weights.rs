//! Weight sequences `ξ = (ξ_n)` that define a weighted Hardy space of entire
//! functions, `‖f‖² = Σ |a_n|² ξ_n²`.
//!
//! Values are kept as `ln ξ_n`. Fock weights `√(n!)` overflow `f64` near
//! `n = 150`, so ratios `ξ_k / ξ_n` are only exponentiated after the logs
//! have been subtracted.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};
use crate::numeric::ln_factorial;

/// Default truncation degree used across the toolkit.
pub const DEFAULT_N_MAX: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    Fock,
    Table,
}

/// A positive weight sequence `ξ_0 .. ξ_{n_max}`, stored as logarithms.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    kind: WeightKind,
    log_values: Vec<f64>,
}

impl WeightSequence {
    /// Fock space weights `ξ_n = √(n!)`.
    pub fn fock(n_max: usize) -> Self {
        let log_values = (0..=n_max as u64).map(|n| 0.5 * ln_factorial(n)).collect();
        Self { kind: WeightKind::Fock, log_values }
    }

    /// User-supplied weights. Every entry must be strictly positive and finite.
    pub fn table(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(HardyError::InvalidArgument("weight table is empty".into()));
        }
        let mut log_values = Vec::with_capacity(values.len());
        for (index, &value) in values.iter().enumerate() {
            if value.is_nan() || value <= 0.0 || !value.is_finite() {
                return Err(HardyError::NonPositiveWeight { index, value });
            }
            log_values.push(value.ln());
        }
        Ok(Self { kind: WeightKind::Table, log_values })
    }

    /// Weights given directly in log form.
    pub fn from_log_values(log_values: Vec<f64>) -> Result<Self> {
        if log_values.is_empty() {
            return Err(HardyError::InvalidArgument("weight table is empty".into()));
        }
        if let Some(index) = log_values.iter().position(|v| !v.is_finite()) {
            return Err(HardyError::NonPositiveWeight { index, value: log_values[index].exp() });
        }
        Ok(Self { kind: WeightKind::Table, log_values })
    }

    /// Weights of the scaled space `ξμ`, i.e. `ξ_n / |μ|^n`.
    pub fn scale(&self, mu: Complex64) -> Result<Self> {
        let modulus = mu.norm();
        if modulus == 0.0 || !modulus.is_finite() {
            return Err(HardyError::ZeroScale);
        }
        let log_mu = modulus.ln();
        let log_values = self
            .log_values
            .iter()
            .enumerate()
            .map(|(n, &l)| l - n as f64 * log_mu)
            .collect();
        Ok(Self { kind: WeightKind::Table, log_values })
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn n_max(&self) -> usize {
        self.log_values.len() - 1
    }

    pub fn log_values(&self) -> &[f64] {
        &self.log_values
    }

    /// `ln ξ_n`. Panics if `n > n_max`.
    pub fn log(&self, n: usize) -> f64 {
        self.log_values[n]
    }

    /// `ξ_n`. Panics if `n > n_max`.
    pub fn value(&self, n: usize) -> f64 {
        self.log_values[n].exp()
    }

    /// `ξ_k / ξ_n` computed from the log difference.
    pub fn ratio(&self, k: usize, n: usize) -> f64 {
        (self.log_values[k] - self.log_values[n]).exp()
    }

    pub fn check_degree(&self, degree: usize) -> Result<()> {
        if degree > self.n_max() {
            Err(HardyError::DegreeExceedsWeights { degree, n_max: self.n_max() })
        } else {
            Ok(())
        }
    }

    /// Heuristic screen for `ξ_n^{1/n} → ∞` over the trailing `window` terms.
    ///
    /// The window is clamped to `n_max`. This never rejects a sequence.
    pub fn growth_check(&self, window: usize) -> GrowthReport {
        let n_max = self.n_max();
        let window = window.clamp(1, n_max.max(1));
        let start = (n_max + 1).saturating_sub(window).max(1);
        let ratios: Vec<f64> = (start..=n_max).map(|n| self.log_values[n] / n as f64).collect();
        let monotone_tail = ratios.windows(2).all(|w| w[1] >= w[0]);
        let last_ratio = ratios.last().copied().unwrap_or(0.0);

        let note = if n_max == 0 {
            Some("n_max = 0: no growth information".to_string())
        } else if last_ratio <= 0.0 {
            Some(format!(
                "suspicious: (ln ξ_n)/n = {last_ratio:.3e} at n = {n_max}; sequence does not appear to grow faster than geometrically"
            ))
        } else if !monotone_tail {
            Some("suspicious: (ln ξ_n)/n is not nondecreasing over the window".to_string())
        } else {
            None
        };
        GrowthReport { monotone_tail, last_ratio, note }
    }

    /// Serializable description of this sequence.
    pub fn descriptor(&self) -> WeightConfig {
        match self.kind {
            WeightKind::Fock => WeightConfig { kind: WeightKind::Fock, n_max: self.n_max(), values: None },
            WeightKind::Table => WeightConfig {
                kind: WeightKind::Table,
                n_max: self.n_max(),
                values: Some(self.log_values.iter().map(|l| l.exp()).collect()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub monotone_tail: bool,
    pub last_ratio: f64,
    pub note: Option<String>,
}

/// On-disk description of a weight sequence:
/// `{ "kind": "fock" | "table", "n_max": N, "values": [..] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightConfig {
    pub kind: WeightKind,
    pub n_max: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

impl WeightConfig {
    pub fn build(&self) -> Result<WeightSequence> {
        match (self.kind, &self.values) {
            (WeightKind::Fock, None) => Ok(WeightSequence::fock(self.n_max)),
            (WeightKind::Fock, Some(_)) => {
                Err(HardyError::InvalidArgument("fock weights take no explicit values".into()))
            }
            (WeightKind::Table, None) => {
                Err(HardyError::InvalidArgument("table weights require a values array".into()))
            }
            (WeightKind::Table, Some(values)) => {
                if values.len() != self.n_max + 1 {
                    return Err(HardyError::InvalidArgument(format!(
                        "n_max = {} requires {} values, got {}",
                        self.n_max,
                        self.n_max + 1,
                        values.len()
                    )));
                }
                WeightSequence::table(values)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fock_small_values() {
        let w = WeightSequence::fock(0);
        assert_eq!(w.log_values(), &[0.0]);
        let w = WeightSequence::fock(3);
        let expected = [1.0, 1.0, 2f64.sqrt(), 6f64.sqrt()];
        for (n, e) in expected.iter().enumerate() {
            assert!((w.value(n) - e).abs() < 1e-14 * e);
        }
        assert_eq!(w.kind(), WeightKind::Fock);
    }

    #[test]
    fn table_logs_and_rejection() {
        let w = WeightSequence::table(&[1.0]).unwrap();
        assert_eq!(w.log_values(), &[0.0]);
        let w = WeightSequence::table(&[1.0, 1.0, 2f64.sqrt()]).unwrap();
        assert!((w.log(2) - 0.5 * 2f64.ln()).abs() < 1e-15);
        assert_eq!(
            WeightSequence::table(&[1.0, 0.0]),
            Err(HardyError::NonPositiveWeight { index: 1, value: 0.0 })
        );
        assert!(matches!(WeightSequence::table(&[1.0, -2.0]), Err(HardyError::NonPositiveWeight { index: 1, .. })));
        assert!(WeightSequence::table(&[f64::NAN]).is_err());
    }

    #[test]
    fn scaling() {
        let ones = WeightSequence::table(&[1.0; 6]).unwrap();
        let s = ones.scale(Complex64::new(0.5, 0.0)).unwrap();
        for n in 0..6 {
            assert!((s.value(n) - 2f64.powi(n as i32)).abs() < 1e-12 * s.value(n));
        }
        assert_eq!(s.kind(), WeightKind::Table);

        let fock = WeightSequence::fock(4);
        let s = fock.scale(Complex64::new(0.0, 0.5)).unwrap();
        let expected = [1.0, 2.0, 4.0 * 2f64.sqrt(), 8.0 * 6f64.sqrt(), 16.0 * 24f64.sqrt()];
        for (n, e) in expected.iter().enumerate() {
            assert!((s.value(n) - e).abs() < 1e-12 * e);
        }

        let unit = fock.scale(Complex64::from_polar(1.0, 0.7)).unwrap();
        for n in 0..=4 {
            assert!((unit.log(n) - fock.log(n)).abs() < 1e-12);
        }
        assert_eq!(fock.scale(Complex64::new(0.0, 0.0)), Err(HardyError::ZeroScale));
    }

    #[test]
    fn growth_screens() {
        let fock = WeightSequence::fock(64);
        assert!(fock.growth_check(10).monotone_tail);
        assert!(fock.growth_check(10).note.is_none());

        let flat = WeightSequence::table(&[1.0; 11]).unwrap();
        let r = flat.growth_check(5);
        assert!(r.monotone_tail);
        assert_eq!(r.last_ratio, 0.0);
        assert!(r.note.unwrap().contains("suspicious"));

        let geometric: Vec<f64> = (0..=10).map(|n| 2f64.powi(n)).collect();
        let r = WeightSequence::table(&geometric).unwrap().growth_check(5);
        assert!((r.last_ratio - 2f64.ln()).abs() < 1e-14);

        // window larger than n_max is clamped
        assert!(WeightSequence::fock(3).growth_check(50).monotone_tail);
    }

    #[test]
    fn config_round_trip() {
        let cfg = WeightConfig { kind: WeightKind::Fock, n_max: 8, values: None };
        assert_eq!(cfg.build().unwrap(), WeightSequence::fock(8));
        let cfg = WeightConfig { kind: WeightKind::Table, n_max: 1, values: Some(vec![1.0, 2.0, 3.0]) };
        assert!(cfg.build().is_err());
        let cfg = WeightConfig { kind: WeightKind::Table, n_max: 2, values: Some(vec![1.0, 2.0, 3.0]) };
        let w = cfg.build().unwrap();
        assert_eq!(w.descriptor().n_max, 2);
        assert!(WeightConfig { kind: WeightKind::Table, n_max: 2, values: None }.build().is_err());
    }
}
