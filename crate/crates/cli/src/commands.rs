use std::fs;
use std::io::Write;
use std::path::Path;

use hardy_core::{
    adjoint, boundedness_report, composition_matrix, differentiation_matrix, generalized_matrix, multiplier_matrix,
    weighted_composition_matrix, AffineMap, OperatorMatrix, TruncatedEntireFunction,
};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{CliError, CliResult, SuiteConfig};
use crate::report::{BoundedDocument, SuiteReport, SymbolParams, VerifyReport};
use crate::suites::{self, Suite, REGISTRY};

/// Resolves suite names (all suites when empty) into registry order.
pub fn select_suites(names: &[String]) -> CliResult<Vec<(usize, &'static Suite)>> {
    if names.is_empty() {
        return Ok(REGISTRY.iter().enumerate().collect());
    }
    let mut picked = Vec::new();
    for name in names {
        let entry = suites::find(name).ok_or_else(|| {
            let known: Vec<_> = REGISTRY.iter().map(|s| s.name).collect();
            CliError::Config(format!("unknown suite {name:?}; known suites: {}", known.join(", ")))
        })?;
        if !picked.iter().any(|(i, _)| *i == entry.0) {
            picked.push(entry);
        }
    }
    picked.sort_by_key(|(i, _)| *i);
    Ok(picked)
}

/// Runs the selected suites. Each suite draws from its own ChaCha stream
/// (stream = registry index), so a suite's draws do not depend on which
/// other suites run.
pub fn verify(config: &SuiteConfig, names: &[String]) -> CliResult<VerifyReport> {
    let selected = select_suites(names)?;
    let headroom = selected.iter().map(|(_, s)| s.headroom).max().unwrap_or(0);
    config.validate(headroom)?;
    let mut reports = Vec::with_capacity(selected.len());
    for (index, suite) in selected {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(index as u64);
        let checks = (suite.run)(config, &mut rng)?;
        reports.push(SuiteReport::new(suite.name, suite.header, checks));
    }
    Ok(VerifyReport {
        weights: config.weights.descriptor(),
        n_work: config.n_work,
        n_eval: config.n_eval,
        tolerance: config.tolerance,
        seed: config.seed,
        passed: reports.iter().all(|r| r.passed),
        suites: reports,
    })
}

pub struct BoundedRequest {
    pub p: usize,
    pub phi: (Complex64, Complex64),
    pub upsilon: Vec<Complex64>,
    pub n_from: usize,
    pub n_to: usize,
}

pub fn bounded(config: &SuiteConfig, request: &BoundedRequest) -> CliResult<BoundedDocument> {
    let w = &config.weights;
    let (a, b) = request.phi;
    let phi = TruncatedEntireFunction::new(vec![b, a], w.clone())?;
    let upsilon = TruncatedEntireFunction::new(request.upsilon.clone(), w.clone())?;
    let report = boundedness_report(request.p, &phi, &upsilon, w, request.n_from..=request.n_to)?;
    Ok(BoundedDocument {
        weights: w.descriptor(),
        symbol: SymbolParams::generalized(request.p, a, b, &request.upsilon),
        n_from: request.n_from.max(request.p),
        n_to: request.n_to,
        report,
    })
}

pub fn write_ratio_csv(path: &Path, ratios: &[(usize, f64)]) -> CliResult<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["n", "r_n"])?;
    for (n, r) in ratios {
        writer.write_record([n.to_string(), format!("{r:e}")])?;
    }
    writer.flush().map_err(|e| CliError::Io { path: path.display().to_string(), source: e })?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum DumpKind {
    Composition,
    AdjointComposition,
    Weighted,
    Multiplier,
    Differentiation,
    Generalized,
}

pub struct DumpRequest {
    pub kind: DumpKind,
    pub p: usize,
    pub phi: (Complex64, Complex64),
    pub upsilon: Vec<Complex64>,
    pub degree: usize,
}

pub fn dump(config: &SuiteConfig, request: &DumpRequest) -> CliResult<OperatorMatrix> {
    let w = &config.weights;
    let map = AffineMap::new(request.phi.0, request.phi.1);
    let upsilon = TruncatedEntireFunction::new(request.upsilon.clone(), w.clone())?;
    let n = request.degree;
    let op = match request.kind {
        DumpKind::Composition => composition_matrix(&map, w, w, n)?,
        DumpKind::AdjointComposition => adjoint(&composition_matrix(&map, w, w, n)?),
        DumpKind::Weighted => weighted_composition_matrix(&upsilon, &map, w, n)?,
        DumpKind::Multiplier => multiplier_matrix(&upsilon, w, n)?,
        DumpKind::Differentiation => differentiation_matrix(request.p, w, n)?,
        DumpKind::Generalized => generalized_matrix(request.p, &map, &upsilon, w, n)?,
    };
    Ok(op)
}

/// Pretty JSON to `out`, or to standard output.
pub fn emit<T: Serialize>(document: &T, out: Option<&Path>) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(document)?;
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io { path: path.display().to_string(), source: e }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io { path: "<stdout>".into(), source: e }),
    }
}
