use hardy_core::diagnostics::{InfeasibilityReport, InfeasibilitySweep, InvertibilityReport};
use hardy_core::{BoundednessReport, DefectReport, Verdict, WeightConfig};
use num_complex::Complex64;
use serde::Serialize;

/// Parameters of one factor `D^p_{Φ,Υ}` (plain composition operators have `p = 0`, `Υ = 1`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolParams {
    pub p: usize,
    /// `[a, b]` for `Φ(z) = a z + b`.
    pub phi: [Complex64; 2],
    pub upsilon: Vec<Complex64>,
}

impl SymbolParams {
    pub fn composition(a: Complex64, b: Complex64) -> Self {
        Self { p: 0, phi: [a, b], upsilon: vec![Complex64::new(1.0, 0.0)] }
    }

    pub fn weighted(upsilon: &[Complex64], mu: Complex64) -> Self {
        Self { p: 0, phi: [mu, Complex64::new(0.0, 0.0)], upsilon: upsilon.to_vec() }
    }

    pub fn generalized(p: usize, a: Complex64, b: Complex64, upsilon: &[Complex64]) -> Self {
        Self { p, phi: [a, b], upsilon: upsilon.to_vec() }
    }
}

/// Measured quantity behind a check.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "measurement", rename_all = "snake_case")]
pub enum Detail {
    Defect(DefectReport),
    Invertibility(InvertibilityReport),
    Boundedness {
        report: BoundednessReport,
        max_rel_error: f64,
    },
    Infeasibility(InfeasibilityReport),
    Sweep(InfeasibilitySweep),
    /// A scalar compared against a bound; `relation` is `"<="` or `">="`.
    Value {
        value: f64,
        relation: &'static str,
        bound: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    /// Factors in application order for products (rightmost first).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub symbols: Vec<SymbolParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Verdict>,
    #[serde(flatten)]
    pub detail: Detail,
}

impl Check {
    /// A defect check passes when the measured verdict equals the expectation
    /// and does not contradict an available closed form.
    pub fn defect(label: impl Into<String>, symbols: Vec<SymbolParams>, expected: Verdict, report: DefectReport) -> Self {
        let passed = report.verdict == expected && report.agreement != Some(false);
        Self { label: label.into(), passed, symbols, expected: Some(expected), detail: Detail::Defect(report) }
    }

    pub fn at_most(label: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::value(label, value, "<=", bound, value <= bound)
    }

    pub fn at_least(label: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::value(label, value, ">=", bound, value >= bound)
    }

    fn value(label: impl Into<String>, value: f64, relation: &'static str, bound: f64, passed: bool) -> Self {
        Self {
            label: label.into(),
            passed,
            symbols: Vec::new(),
            expected: None,
            detail: Detail::Value { value, relation, bound },
        }
    }

    pub fn with_symbols(mut self, symbols: Vec<SymbolParams>) -> Self {
        self.symbols = symbols;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub header: &'static str,
    pub passed: bool,
    pub checks_passed: usize,
    pub checks_total: usize,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn new(name: &'static str, header: &'static str, checks: Vec<Check>) -> Self {
        let checks_passed = checks.iter().filter(|c| c.passed).count();
        Self { name, header, passed: checks_passed == checks.len(), checks_passed, checks_total: checks.len(), checks }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub weights: WeightConfig,
    pub n_work: usize,
    pub n_eval: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundedDocument {
    pub weights: WeightConfig,
    pub symbol: SymbolParams,
    pub n_from: usize,
    pub n_to: usize,
    #[serde(flatten)]
    pub report: BoundednessReport,
}
