//! Verdicts on operator matrices: isometry, unitarity, m-isometry,
//! invertibility across scaled spaces, orthogonality of symbol powers and the
//! ratio probe for boundedness of generalized weighted composition operators.
//!
//! Defects are Frobenius norms of a leading evaluation block. Where an
//! operator carries symbol metadata, the report also records the verdict
//! predicted by the closed-form characterization so the two can be compared.

use std::ops::RangeInclusive;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{HardyError, Result};
use crate::numeric::{binomial, ln_falling_factorial};
use crate::operators::{composition_matrix, compose, OperatorMatrix, Symbol};
use crate::series::{inner_product, log_norm, multiply, power, AffineMap, TruncatedEntireFunction};
use crate::weights::WeightSequence;

/// Default absolute tolerance on a defect norm.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Moduli within this distance of 1 count as "on the unit circle" for
/// closed-form predictions.
const UNIT_SLACK: f64 = 1e-12;

/// Relative threshold for calling a Gram matrix diagonal.
const ORTHOGONALITY_RTOL: f64 = 1e-10;

/// Residual threshold (log scale) for the weighted-isometry identity.
const FEASIBILITY_TOL: f64 = 1e-9;

/// `1e-9` up to 32-degree blocks, growing like `√n_eval` beyond.
pub fn default_tolerance(n_eval: usize) -> f64 {
    if n_eval <= 32 {
        DEFAULT_TOLERANCE
    } else {
        DEFAULT_TOLERANCE * (n_eval as f64 / 32.0).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
}

impl Verdict {
    pub fn from_bool(holds: bool) -> Self {
        if holds {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefectReport {
    pub defect_norm: f64,
    pub verdict: Verdict,
    pub tolerance: f64,
    pub n_eval: usize,
    pub closed_form_verdict: Option<Verdict>,
    /// `None` when there is no closed form to compare against.
    pub agreement: Option<bool>,
}

impl DefectReport {
    fn new(defect_norm: f64, tolerance: f64, n_eval: usize, closed_form_verdict: Option<Verdict>) -> Self {
        let verdict = Verdict::from_bool(defect_norm <= tolerance);
        Self {
            defect_norm,
            verdict,
            tolerance,
            n_eval,
            closed_form_verdict,
            agreement: closed_form_verdict.map(|c| c == verdict),
        }
    }
}

fn is_unit(z: Complex64) -> bool {
    (z.norm() - 1.0).abs() <= UNIT_SLACK
}

fn is_negligible(z: Complex64) -> bool {
    z.norm() <= UNIT_SLACK
}

fn is_one(z: Complex64) -> bool {
    is_negligible(z - Complex64::new(1.0, 0.0))
}

/// Isometry/unitarity predicted by the closed-form characterizations, when
/// the symbol falls under one of them:
///
/// * `C_Φ`, `Φ(z) = a z + b`, `|a| ≤ 1`: holds iff `|a| = 1` and `b = 0`.
/// * `C_{Υ,Φ}`, `Υ(z) = a z + b`, `Φ(z) = μ z`, `|μ| ≤ 1`: holds iff
///   `|μ| = 1`, `a = 0` and `|b| = 1`.
///
/// Both results assume the growth condition on the weights.
pub fn closed_form_isometry(symbol: &Symbol) -> Option<Verdict> {
    let map = symbol.map;
    if map.a.norm() > 1.0 + UNIT_SLACK {
        return None;
    }
    let dilation = is_negligible(map.b);
    match symbol.multiplier.as_slice() {
        [c] if is_one(*c) => Some(Verdict::from_bool(is_unit(map.a) && dilation)),
        [b] if dilation => Some(Verdict::from_bool(is_unit(map.a) && is_unit(*b))),
        [_, a] if dilation && !is_negligible(*a) => Some(Verdict::Fails),
        _ => None,
    }
}

/// m-isometry closed form: for `Φ(z) = μ z`, `0 < |μ| ≤ 1`, `C_Φ` is an
/// m-isometry iff it is an isometry. For `m = 1` the isometry closed form applies.
pub fn closed_form_m_isometry(symbol: &Symbol, m: usize) -> Option<Verdict> {
    if m == 1 {
        return closed_form_isometry(symbol);
    }
    let map = symbol.map;
    let plain = matches!(symbol.multiplier.as_slice(), [c] if is_one(*c));
    if plain && is_negligible(map.b) && map.a.norm() > 0.0 && map.a.norm() <= 1.0 + UNIT_SLACK {
        Some(Verdict::from_bool(is_unit(map.a)))
    } else {
        None
    }
}

fn frobenius(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn require_endomorphism(op: &OperatorMatrix) -> Result<()> {
    if op.is_endomorphism() {
        Ok(())
    } else {
        Err(HardyError::SpaceMismatch("defect checks need the same domain and codomain space".into()))
    }
}

fn require_headroom(op: &OperatorMatrix, n_eval: usize, multiple: usize) -> Result<()> {
    let required = n_eval + multiple * op.headroom_used();
    if required > op.working_degree() || n_eval > op.codomain_degree() {
        return Err(HardyError::InsufficientHeadroom {
            required,
            available: op.working_degree().min(op.codomain_degree() + multiple * op.headroom_used()),
        });
    }
    Ok(())
}

fn minus_identity(mut block: DMatrix<Complex64>) -> DMatrix<Complex64> {
    for i in 0..block.nrows() {
        block[(i, i)] -= Complex64::new(1.0, 0.0);
    }
    block
}

/// Leading `(n_eval+1)` block of `T*T − I`.
pub fn isometry_defect_matrix(op: &OperatorMatrix, n_eval: usize) -> Result<DMatrix<Complex64>> {
    require_endomorphism(op)?;
    require_headroom(op, n_eval, 1)?;
    Ok(minus_identity(leading_gram(op.entries(), n_eval + 1)))
}

/// Leading `(n_eval+1)` block of `T T* − I`.
pub fn co_isometry_defect_matrix(op: &OperatorMatrix, n_eval: usize) -> Result<DMatrix<Complex64>> {
    require_endomorphism(op)?;
    require_headroom(op, n_eval, 1)?;
    Ok(minus_identity(leading_cogram(op.entries(), n_eval + 1)))
}

pub fn isometry_defect(op: &OperatorMatrix, n_eval: usize, tolerance: f64) -> Result<DefectReport> {
    let defect = isometry_defect_matrix(op, n_eval)?;
    let closed = op.symbol().and_then(closed_form_isometry);
    Ok(DefectReport::new(frobenius(&defect), tolerance, n_eval, closed))
}

/// Larger of the `T*T − I` and `T T* − I` defects.
pub fn unitary_defect(op: &OperatorMatrix, n_eval: usize, tolerance: f64) -> Result<DefectReport> {
    let left = frobenius(&isometry_defect_matrix(op, n_eval)?);
    let right = frobenius(&co_isometry_defect_matrix(op, n_eval)?);
    let closed = op.symbol().and_then(closed_form_isometry);
    Ok(DefectReport::new(left.max(right), tolerance, n_eval, closed))
}

/// Leading `size` block of `T*T`; only the first `size` columns of `T` contribute.
fn leading_gram(t: &DMatrix<Complex64>, size: usize) -> DMatrix<Complex64> {
    let cols = t.columns(0, size.min(t.ncols()));
    pad(cols.adjoint() * cols, size)
}

/// Leading `size` block of `T T*`.
fn leading_cogram(t: &DMatrix<Complex64>, size: usize) -> DMatrix<Complex64> {
    let rows = t.rows(0, size.min(t.nrows()));
    pad(rows * rows.adjoint(), size)
}

fn pad(m: DMatrix<Complex64>, size: usize) -> DMatrix<Complex64> {
    if m.shape() == (size, size) {
        return m;
    }
    let mut out = DMatrix::from_element(size, size, Complex64::new(0.0, 0.0));
    let (r, c) = m.shape();
    out.view_mut((0, 0), (r.min(size), c.min(size))).copy_from(&m.view((0, 0), (r.min(size), c.min(size))));
    out
}

/// Leading block of `Σ_{k=0}^m (−1)^{m−k} C(m,k) (T*)^k T^k`.
pub fn m_isometry_defect_matrix(op: &OperatorMatrix, m: usize, n_eval: usize) -> Result<DMatrix<Complex64>> {
    if m == 0 {
        return Err(HardyError::InvalidArgument("m must be at least 1".into()));
    }
    require_endomorphism(op)?;
    require_headroom(op, n_eval, m)?;
    let size = n_eval + 1;
    let mut acc = DMatrix::from_element(size, size, Complex64::new(0.0, 0.0));
    let mut power: Option<OperatorMatrix> = None;
    for k in 0..=m {
        let weight = binomial(m as u64, k as u64) * if (m - k).is_multiple_of(2) { 1.0 } else { -1.0 };
        let gram = match &power {
            None => DMatrix::identity(size, size),
            Some(p) => leading_gram(p.entries(), size),
        };
        acc += gram.map(|x| x * weight);
        power = Some(match power {
            None => op.clone(),
            Some(p) => compose(op, &p)?,
        });
    }
    Ok(acc)
}

pub fn m_isometry_defect(op: &OperatorMatrix, m: usize, n_eval: usize, tolerance: f64) -> Result<DefectReport> {
    let defect = m_isometry_defect_matrix(op, m, n_eval)?;
    let closed = op.symbol().and_then(|s| closed_form_m_isometry(s, m));
    Ok(DefectReport::new(frobenius(&defect), tolerance, n_eval, closed))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvertibilityReport {
    pub left_defect: f64,
    pub right_defect: f64,
    pub verdict: Verdict,
    pub tolerance: f64,
}

/// Checks that `C_{μz} : H_E(ξ) → H_E(ξμ)` and `C_{z/μ} : H_E(ξμ) → H_E(ξ)` are
/// mutually inverse on degrees `0..=degree`.
pub fn invertibility_check(
    mu: Complex64,
    weights: &Arc<WeightSequence>,
    degree: usize,
    tolerance: f64,
) -> Result<InvertibilityReport> {
    if mu.norm() == 0.0 {
        return Err(HardyError::ZeroScale);
    }
    let scaled = Arc::new(weights.scale(mu)?);
    let forward = composition_matrix(&AffineMap::dilation(mu), weights, &scaled, degree)?;
    let backward = composition_matrix(&AffineMap::dilation(mu.inv()), &scaled, weights, degree)?;
    let left = frobenius(&minus_identity(compose(&backward, &forward)?.entries().clone()));
    let right = frobenius(&minus_identity(compose(&forward, &backward)?.entries().clone()));
    Ok(InvertibilityReport {
        left_defect: left,
        right_defect: right,
        verdict: Verdict::from_bool(left <= tolerance && right <= tolerance),
        tolerance,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthogonalityReport {
    pub gram_offdiag_max: f64,
    pub orthogonal: bool,
}

fn powers_of(symbol: &TruncatedEntireFunction, count: usize) -> Result<Vec<TruncatedEntireFunction>> {
    (0..=count).map(|k| power(symbol, k)).collect()
}

/// Gram matrix test for `{Φ^n : n ≤ n_max}`.
pub fn orthogonality_check(symbol: &TruncatedEntireFunction, weights: &WeightSequence, n_max: usize) -> Result<OrthogonalityReport> {
    weights.check_degree(n_max * symbol.degree())?;
    let powers = powers_of(symbol, n_max)?;
    let (offdiag, diag) = gram_extremes(&powers, weights)?;
    Ok(OrthogonalityReport { gram_offdiag_max: offdiag, orthogonal: offdiag <= ORTHOGONALITY_RTOL * diag })
}

/// (max off-diagonal |G_ij|, max diagonal G_ii).
fn gram_extremes(fs: &[TruncatedEntireFunction], weights: &WeightSequence) -> Result<(f64, f64)> {
    let mut offdiag = 0.0_f64;
    let mut diag = 0.0_f64;
    for (i, fi) in fs.iter().enumerate() {
        for (j, fj) in fs.iter().enumerate().skip(i) {
            let g = inner_product(fi, fj, weights)?.norm();
            if i == j {
                diag = diag.max(g);
            } else {
                offdiag = offdiag.max(g);
            }
        }
    }
    Ok((offdiag, diag))
}

/// Largest cosine `|⟨Φ^i, Φ^j⟩| / (‖Φ^i‖ ‖Φ^j‖)` over `i ≠ j`.
fn max_cosine(fs: &[TruncatedEntireFunction], weights: &WeightSequence) -> Result<f64> {
    let logs: Vec<f64> = fs.iter().map(|f| log_norm(f, weights)).collect::<Result<_>>()?;
    let mut worst = 0.0_f64;
    for i in 0..fs.len() {
        for j in (i + 1)..fs.len() {
            if logs[i].is_infinite() || logs[j].is_infinite() {
                continue;
            }
            let g = inner_product(&fs[i], &fs[j], weights)?.norm();
            worst = worst.max(g / (logs[i] + logs[j]).exp());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    BoundedObserved,
    GrowingObserved,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundednessReport {
    pub p: usize,
    /// `(n, r_n)` with `r_n = n(n−1)…(n−p+1) ‖Υ Φ^{n−p}‖ / ξ_n`.
    pub ratios: Vec<(usize, f64)>,
    pub sup_observed: f64,
    pub trend: Trend,
    /// Largest normalized off-diagonal Gram entry of `{Φ^k}` over the powers used.
    pub orthogonality_defect: f64,
}

/// Classifies a finite ratio sequence.
///
/// * growing: the last quartile is strictly increasing;
/// * bounded: the last quartile never exceeds the maximum of the earlier terms;
/// * otherwise inconclusive.
pub fn classify_trend(values: &[f64]) -> Trend {
    if values.len() < 4 {
        return Trend::Inconclusive;
    }
    let q = (values.len() / 4).max(2);
    let (head, tail) = values.split_at(values.len() - q);
    if tail.windows(2).all(|w| w[1] > w[0]) {
        return Trend::GrowingObserved;
    }
    let head_max = head.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tail_max = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if tail_max <= head_max * (1.0 + 1e-12) {
        Trend::BoundedObserved
    } else {
        Trend::Inconclusive
    }
}

/// Evaluates the ratio sequence of the boundedness criterion for
/// `D^p_{Φ,Υ}` over `n_range` (values below `p` are skipped).
///
/// All terms are assembled in log form: falling factorial, `ln ‖Υ Φ^{n−p}‖`
/// and `ln ξ_n`.
pub fn boundedness_report(
    p: usize,
    symbol: &TruncatedEntireFunction,
    multiplier: &TruncatedEntireFunction,
    weights: &WeightSequence,
    n_range: RangeInclusive<usize>,
) -> Result<BoundednessReport> {
    let start = (*n_range.start()).max(p);
    let end = *n_range.end();
    if start > end {
        return Err(HardyError::InvalidArgument(format!("empty range {start}..={end} for p = {p}")));
    }
    weights.check_degree(end)?;
    let max_power = end - p;
    weights.check_degree(multiplier.degree() + max_power * symbol.degree())?;

    let powers = powers_of(symbol, max_power)?;
    let mut ratios = Vec::with_capacity(end - start + 1);
    for n in start..=end {
        let pw = &powers[n - p];
        let top = pw.degree() + multiplier.degree();
        let (prod, _) = multiply(multiplier, pw, top)?;
        let ln_r = ln_falling_factorial(n as u64, p as u64) + log_norm(&prod, weights)? - weights.log(n);
        ratios.push((n, ln_r.exp()));
    }
    let values: Vec<f64> = ratios.iter().map(|(_, r)| *r).collect();
    let sup_observed = values.iter().copied().fold(0.0, f64::max);
    Ok(BoundednessReport {
        p,
        trend: classify_trend(&values),
        sup_observed,
        ratios,
        orthogonality_defect: max_cosine(&powers, weights)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfeasibilityReport {
    pub modulus_a: f64,
    pub modulus_mu: f64,
    /// `residuals[i]` belongs to `n = i + 1`.
    pub residuals: Vec<f64>,
    pub feasible: bool,
    pub note: Option<String>,
}

/// Residuals of `ξ_0² = |a|^{2n} |μ|^{n(n−1)} ξ_n²` for `n = 1..=n_max`, in
/// log magnitude. Phases of `a` and `μ` do not enter.
pub fn weighted_isometry_infeasibility(
    weights: &WeightSequence,
    a: Complex64,
    mu: Complex64,
    n_max: usize,
) -> Result<InfeasibilityReport> {
    if a.norm() == 0.0 || mu.norm() == 0.0 {
        return Err(HardyError::ZeroScale);
    }
    residuals_for_moduli(weights, a.norm(), mu.norm(), n_max)
}

fn residuals_for_moduli(weights: &WeightSequence, ma: f64, mm: f64, n_max: usize) -> Result<InfeasibilityReport> {
    if n_max < 3 {
        return Err(HardyError::InvalidArgument("n_max must be at least 3".into()));
    }
    weights.check_degree(n_max)?;
    let (ln_a, ln_mu) = (ma.ln(), mm.ln());
    let lhs = 2.0 * weights.log(0);
    let residuals: Vec<f64> = (1..=n_max)
        .map(|n| {
            let nf = n as f64;
            (lhs - (2.0 * nf * ln_a + nf * (nf - 1.0) * ln_mu + 2.0 * weights.log(n))).abs()
        })
        .collect();
    let feasible = residuals.iter().all(|r| *r <= FEASIBILITY_TOL);
    let note = (feasible && weights.growth_check(n_max.min(10)).note.is_some()).then(|| {
        "identity satisfied, but these weights fail the growth screen; the space is not of the assumed type".to_string()
    });
    Ok(InfeasibilityReport { modulus_a: ma, modulus_mu: mm, residuals, feasible, note })
}

/// Moduli `(|a|, |μ|)` that satisfy the identity exactly at `n = 1` and `n = 2`.
pub fn fit_first_two(weights: &WeightSequence) -> Result<(f64, f64)> {
    weights.check_degree(2)?;
    let lhs = 2.0 * weights.log(0);
    let ln_a = 0.5 * (lhs - 2.0 * weights.log(1));
    let ln_mu = 0.5 * (lhs - 4.0 * ln_a - 2.0 * weights.log(2));
    Ok((ln_a.exp(), ln_mu.exp()))
}

/// Residuals for the moduli fitted at `n = 1, 2`.
pub fn fitted_infeasibility(weights: &WeightSequence, n_max: usize) -> Result<InfeasibilityReport> {
    let (ma, mm) = fit_first_two(weights)?;
    residuals_for_moduli(weights, ma, mm, n_max)
}

/// Grid of moduli `{0.05, 0.10, …, 1.00}` used for infeasibility sweeps.
pub fn modulus_grid() -> Vec<f64> {
    (1..=20).map(|i| i as f64 * 0.05).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfeasibilitySweep {
    pub grid: Vec<f64>,
    pub cells: usize,
    pub feasible_cells: Vec<(f64, f64)>,
    /// Smallest over the grid of the largest residual of each cell.
    pub min_max_residual: f64,
}

impl InfeasibilitySweep {
    pub fn all_infeasible(&self) -> bool {
        self.feasible_cells.is_empty()
    }
}

/// Runs [`weighted_isometry_infeasibility`] over the crossed modulus grid.
pub fn infeasibility_sweep(weights: &WeightSequence, n_max: usize) -> Result<InfeasibilitySweep> {
    let grid = modulus_grid();
    let mut feasible_cells = Vec::new();
    let mut min_max_residual = f64::INFINITY;
    for &ma in &grid {
        for &mm in &grid {
            let r = residuals_for_moduli(weights, ma, mm, n_max)?;
            let worst = r.residuals.iter().copied().fold(0.0, f64::max);
            min_max_residual = min_max_residual.min(worst);
            if r.feasible {
                feasible_cells.push((ma, mm));
            }
        }
    }
    Ok(InfeasibilitySweep { cells: grid.len() * grid.len(), grid, feasible_cells, min_max_residual })
}
