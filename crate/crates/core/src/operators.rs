//! Finite matrices of composition-type operators between weighted Hardy spaces.
//!
//! Matrices are expressed in the orthonormal bases `e_n = z^n / ξ_n` of the
//! domain and codomain, so the operator adjoint is the conjugate transpose.
//! Entry `(k, n)` is the `e_k` coordinate of the image of `e_n`.
//!
//! Degree-raising factors (multipliers) make the codomain larger than the
//! domain; products that truncate such intermediate results record the
//! consumed degrees in `headroom_used`, and diagnostics only read blocks that
//! stay clear of that headroom.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{HardyError, Result};
use crate::numeric::{ln_binomial, ln_falling_factorial};
use crate::series::{cauchy_product, compose_affine_coeffs, AffineMap, TruncatedEntireFunction};
use crate::weights::{WeightConfig, WeightSequence};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Symbol data of a weighted composition operator `f ↦ Υ · (f ∘ Φ)` acting
/// on a single space. Plain composition operators have `multiplier = [1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Symbol {
    pub multiplier: Vec<Complex64>,
    pub map: AffineMap,
}

impl Symbol {
    fn new(multiplier: Vec<Complex64>, map: AffineMap) -> Self {
        Self { multiplier: trim(multiplier), map }
    }

    /// Constant value of the multiplier, if it is constant.
    pub fn constant_multiplier(&self) -> Option<Complex64> {
        (self.multiplier.len() == 1).then(|| self.multiplier[0])
    }

    /// `C_{Υ₁,Φ₁} C_{Υ₂,Φ₂} = C_{Υ₁·(Υ₂∘Φ₁), Φ₂∘Φ₁}`.
    fn then_after(&self, inner: &Symbol) -> Symbol {
        let shifted = compose_affine_coeffs(&inner.multiplier, &self.map);
        let multiplier = cauchy_product(&self.multiplier, &shifted);
        Symbol::new(multiplier, inner.map.compose(&self.map))
    }
}

fn trim(mut coeffs: Vec<Complex64>) -> Vec<Complex64> {
    while coeffs.len() > 1 && coeffs.last() == Some(&ZERO) {
        coeffs.pop();
    }
    if coeffs.is_empty() {
        coeffs.push(ZERO);
    }
    coeffs
}

fn same_space(a: &Arc<WeightSequence>, b: &Arc<WeightSequence>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// An operator between two weighted spaces in orthonormal coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<Complex64>,
    domain: Arc<WeightSequence>,
    codomain: Arc<WeightSequence>,
    headroom_used: usize,
    symbol: Option<Symbol>,
    warnings: Vec<String>,
}

impl OperatorMatrix {
    /// Wraps a raw matrix. Rows index the codomain basis, columns the domain basis.
    pub fn from_entries(
        entries: DMatrix<Complex64>,
        domain: Arc<WeightSequence>,
        codomain: Arc<WeightSequence>,
    ) -> Result<Self> {
        if entries.nrows() == 0 || entries.ncols() == 0 {
            return Err(HardyError::InvalidArgument("operator matrix is empty".into()));
        }
        domain.check_degree(entries.ncols() - 1)?;
        codomain.check_degree(entries.nrows() - 1)?;
        Ok(Self { entries, domain, codomain, headroom_used: 0, symbol: None, warnings: Vec::new() })
    }

    /// Identity on polynomials of degree at most `degree`.
    pub fn identity(weights: &Arc<WeightSequence>, degree: usize) -> Result<Self> {
        weights.check_degree(degree)?;
        let mut op = Self::from_entries(DMatrix::identity(degree + 1, degree + 1), weights.clone(), weights.clone())?;
        op.symbol = Some(Symbol::new(vec![ONE], AffineMap::identity()));
        Ok(op)
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn domain(&self) -> &Arc<WeightSequence> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<WeightSequence> {
        &self.codomain
    }

    /// Degree bound of the domain polynomials.
    pub fn working_degree(&self) -> usize {
        self.entries.ncols() - 1
    }

    pub fn codomain_degree(&self) -> usize {
        self.entries.nrows() - 1
    }

    pub fn headroom_used(&self) -> usize {
        self.headroom_used
    }

    pub fn symbol(&self) -> Option<&Symbol> {
        self.symbol.as_ref()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Same domain and codomain weights (dimensions may still differ).
    pub fn is_endomorphism(&self) -> bool {
        same_space(&self.domain, &self.codomain)
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.entries.ncols()).all(|n| ((n + 1)..self.entries.nrows()).all(|k| self.entries[(k, n)] == ZERO))
    }

    /// Leading `(size × size)` block, zero-padded if the matrix is smaller.
    pub fn block(&self, size: usize) -> DMatrix<Complex64> {
        DMatrix::from_fn(size, size, |k, n| self.entries.get((k, n)).copied().unwrap_or(ZERO))
    }

    pub fn dump(&self) -> OperatorDump {
        OperatorDump {
            domain_space: self.domain.descriptor(),
            codomain_space: self.codomain.descriptor(),
            n: self.working_degree(),
            rows: self.entries.nrows(),
            cols: self.entries.ncols(),
            entries: (0..self.entries.nrows())
                .flat_map(|k| (0..self.entries.ncols()).map(move |n| (k, n)))
                .map(|(k, n)| {
                    let v = self.entries[(k, n)];
                    [v.re, v.im]
                })
                .collect(),
            headroom_used: self.headroom_used,
            warnings: self.warnings.clone(),
        }
    }
}

/// Serialized operator: row-major `[re, im]` entries plus space descriptors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorDump {
    pub domain_space: WeightConfig,
    pub codomain_space: WeightConfig,
    pub n: usize,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
    pub headroom_used: usize,
    pub warnings: Vec<String>,
}

/// Unit-modulus phase `z / |z|` (1 for zero).
fn phase(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        ONE
    } else {
        z / r
    }
}

/// Matrix of `C_Φ f = f ∘ Φ` from `H_E(ξ_dom)` to `H_E(ξ_cod)` on degrees `0..=degree`:
/// `M[k][n] = C(n,k) a^k b^{n-k} ξ_cod,k / ξ_dom,n` for `k ≤ n`.
pub fn composition_matrix(
    map: &AffineMap,
    domain: &Arc<WeightSequence>,
    codomain: &Arc<WeightSequence>,
    degree: usize,
) -> Result<OperatorMatrix> {
    domain.check_degree(degree)?;
    codomain.check_degree(degree)?;

    let (a, b) = (map.a, map.b);
    let (ln_a, ln_b) = (a.norm().ln(), b.norm().ln());
    let (pa, pb) = (phase(a), phase(b));
    let size = degree + 1;
    let mut entries = DMatrix::from_element(size, size, ZERO);
    for n in 0..size {
        for k in 0..=n {
            let (ka, kb) = (k, n - k);
            if (ka > 0 && a == ZERO) || (kb > 0 && b == ZERO) {
                continue;
            }
            let mut ln_mag = ln_binomial(n as u64, k as u64) + codomain.log(k) - domain.log(n);
            if ka > 0 {
                ln_mag += ka as f64 * ln_a;
            }
            if kb > 0 {
                ln_mag += kb as f64 * ln_b;
            }
            entries[(k, n)] = pa.powi(ka as i32) * pb.powi(kb as i32) * ln_mag.exp();
        }
    }

    let mut op = OperatorMatrix::from_entries(entries, domain.clone(), codomain.clone())?;
    if same_space(domain, codomain) {
        op.symbol = Some(Symbol::new(vec![ONE], *map));
        if a.norm() > 1.0 {
            op.warnings.push(format!(
                "|a| = {:.6} > 1: composition operator outside the bounded regime |a| <= 1",
                a.norm()
            ));
        }
    }
    Ok(op)
}

/// Matrix of `f ↦ Υ · f` on degrees `0..=degree`, landing in degrees
/// `0..=degree + deg Υ`. Multiplication by `z` sends `e_n` to `(ξ_{n+1}/ξ_n) e_{n+1}`.
pub fn multiplier_matrix(
    multiplier: &TruncatedEntireFunction,
    weights: &Arc<WeightSequence>,
    degree: usize,
) -> Result<OperatorMatrix> {
    let coeffs = trim(multiplier.coeffs().to_vec());
    let deg = coeffs.len() - 1;
    let top = degree + deg;
    if top > weights.n_max() {
        return Err(HardyError::InsufficientHeadroom { required: top, available: weights.n_max() });
    }
    let mut entries = DMatrix::from_element(top + 1, degree + 1, ZERO);
    for n in 0..=degree {
        for (j, c) in coeffs.iter().enumerate() {
            if *c != ZERO {
                entries[(n + j, n)] = c * weights.ratio(n + j, n);
            }
        }
    }
    let mut op = OperatorMatrix::from_entries(entries, weights.clone(), weights.clone())?;
    op.headroom_used = deg;
    op.symbol = Some(Symbol::new(coeffs, AffineMap::identity()));
    Ok(op)
}

/// Matrix of the `order`-th derivative: `e_n ↦ n(n-1)…(n-p+1) (ξ_{n-p}/ξ_n) e_{n-p}`.
///
/// The codomain has degree `degree - order`, or 0 (and the matrix is zero)
/// when the order exceeds the degree.
pub fn differentiation_matrix(order: usize, weights: &Arc<WeightSequence>, degree: usize) -> Result<OperatorMatrix> {
    weights.check_degree(degree)?;
    let cod = degree.saturating_sub(order);
    let mut entries = DMatrix::from_element(cod + 1, degree + 1, ZERO);
    for n in order..=degree {
        let k = n - order;
        let ln_mag = ln_falling_factorial(n as u64, order as u64) + weights.log(k) - weights.log(n);
        entries[(k, n)] = Complex64::new(ln_mag.exp(), 0.0);
    }
    let mut op = OperatorMatrix::from_entries(entries, weights.clone(), weights.clone())?;
    if order == 0 {
        op.symbol = Some(Symbol::new(vec![ONE], AffineMap::identity()));
    }
    Ok(op)
}

/// Matrix of `C_{Υ,Φ} f = Υ · (f ∘ Φ)`.
pub fn weighted_composition_matrix(
    multiplier: &TruncatedEntireFunction,
    map: &AffineMap,
    weights: &Arc<WeightSequence>,
    degree: usize,
) -> Result<OperatorMatrix> {
    let mult = multiplier_matrix(multiplier, weights, degree)?;
    let comp = composition_matrix(map, weights, weights, degree)?;
    compose(&mult, &comp)
}

/// Matrix of `D^p_{Φ,Υ} f = Υ · (f^{(p)} ∘ Φ)`.
///
/// The codomain has degree `degree - p + deg Υ`, which must fit in the space.
pub fn generalized_matrix(
    order: usize,
    map: &AffineMap,
    multiplier: &TruncatedEntireFunction,
    weights: &Arc<WeightSequence>,
    degree: usize,
) -> Result<OperatorMatrix> {
    weights.check_degree(degree)?;
    let deg_mult = trim(multiplier.coeffs().to_vec()).len() - 1;
    let inner = degree.saturating_sub(order);
    let top = inner + deg_mult;
    if top > weights.n_max() {
        return Err(HardyError::InsufficientHeadroom { required: top, available: weights.n_max() });
    }
    let diff = differentiation_matrix(order, weights, degree)?;
    let comp = composition_matrix(map, weights, weights, inner)?;
    let mult = multiplier_matrix(multiplier, weights, inner)?;
    let mut op = compose(&mult, &compose(&comp, &diff)?)?;
    op.headroom_used = order + deg_mult;
    if order > 0 {
        op.symbol = None;
    }
    Ok(op)
}

/// Conjugate transpose with domain and codomain exchanged.
pub fn adjoint(op: &OperatorMatrix) -> OperatorMatrix {
    let symbol = op.symbol.as_ref().and_then(|s| match (s.constant_multiplier(), s.map.is_dilation()) {
        (Some(c), true) => Some(Symbol::new(vec![c.conj()], AffineMap::dilation(s.map.a.conj()))),
        _ => None,
    });
    OperatorMatrix {
        entries: op.entries.adjoint(),
        domain: op.codomain.clone(),
        codomain: op.domain.clone(),
        headroom_used: op.headroom_used,
        symbol,
        warnings: op.warnings.clone(),
    }
}

/// Apply to a function of the domain space; returns a function of the codomain space.
pub fn apply(op: &OperatorMatrix, f: &TruncatedEntireFunction) -> Result<TruncatedEntireFunction> {
    if !same_space(f.space(), &op.domain) {
        return Err(HardyError::SpaceMismatch("function does not live in the operator's domain".into()));
    }
    if f.degree_bound() > op.working_degree() {
        return Err(HardyError::DegreeExceedsWeights { degree: f.degree_bound(), n_max: op.working_degree() });
    }
    let mut coords = f.to_orthonormal();
    coords.resize(op.entries.ncols(), ZERO);
    let image = &op.entries * nalgebra::DVector::from_vec(coords);
    TruncatedEntireFunction::from_orthonormal(image.as_slice(), op.codomain.clone())
}

/// `outer ∘ inner`.
///
/// The inner codomain must be the outer domain's space. If the inner
/// operator reaches higher degrees than the outer accepts, its top rows are
/// truncated; headroom from both factors accumulates so downstream blocks
/// stay clear of the truncation.
pub fn compose(outer: &OperatorMatrix, inner: &OperatorMatrix) -> Result<OperatorMatrix> {
    if !same_space(&inner.codomain, &outer.domain) {
        return Err(HardyError::SpaceMismatch(
            "inner operator's codomain differs from outer operator's domain".into(),
        ));
    }
    let mid = outer.entries.ncols().min(inner.entries.nrows());
    let left = outer.entries.columns(0, mid);
    let right = inner.entries.rows(0, mid);
    let mut entries = left * right;

    let symbol = match (&outer.symbol, &inner.symbol) {
        (Some(o), Some(i)) if outer.is_endomorphism() && inner.is_endomorphism() => Some(o.then_after(i)),
        _ => None,
    };
    // Products of scalar-weighted composition operators are upper triangular, so the truncated
    // product is the truncation of the composed operator. Building it from the composed symbol
    // avoids catastrophic cancellation when the translation parts are large.
    let scalar = symbol.as_ref().and_then(Symbol::constant_multiplier);
    let factors_scalar = outer.symbol.as_ref().and_then(Symbol::constant_multiplier).is_some()
        && inner.symbol.as_ref().and_then(Symbol::constant_multiplier).is_some();
    if let (Some(c), Some(s), true) = (scalar, &symbol, factors_scalar) {
        let degree = inner.working_degree();
        if entries.nrows() == degree + 1 {
            let rebuilt = composition_matrix(&s.map, &inner.domain, &inner.domain, degree)?;
            entries = rebuilt.entries.map(|x| c * x);
        }
    }
    let mut warnings = outer.warnings.clone();
    warnings.extend(inner.warnings.iter().cloned());
    Ok(OperatorMatrix {
        entries,
        domain: inner.domain.clone(),
        codomain: outer.codomain.clone(),
        headroom_used: outer.headroom_used + inner.headroom_used,
        symbol,
        warnings,
    })
}

/// Entrywise sum; both operators must share spaces and shape.
pub fn add(lhs: &OperatorMatrix, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
    if !same_space(&lhs.domain, &rhs.domain) || !same_space(&lhs.codomain, &rhs.codomain) {
        return Err(HardyError::SpaceMismatch("operands act between different spaces".into()));
    }
    if lhs.entries.shape() != rhs.entries.shape() {
        return Err(HardyError::SpaceMismatch(format!(
            "operand shapes differ: {:?} vs {:?}",
            lhs.entries.shape(),
            rhs.entries.shape()
        )));
    }
    let mut warnings = lhs.warnings.clone();
    warnings.extend(rhs.warnings.iter().cloned());
    Ok(OperatorMatrix {
        entries: &lhs.entries + &rhs.entries,
        domain: lhs.domain.clone(),
        codomain: lhs.codomain.clone(),
        headroom_used: lhs.headroom_used.max(rhs.headroom_used),
        symbol: None,
        warnings,
    })
}

/// `c · T`.
pub fn scalar_mul(c: Complex64, op: &OperatorMatrix) -> OperatorMatrix {
    let symbol = op
        .symbol
        .as_ref()
        .map(|s| Symbol::new(s.multiplier.iter().map(|m| c * m).collect(), s.map));
    OperatorMatrix {
        entries: op.entries.map(|x| c * x),
        domain: op.domain.clone(),
        codomain: op.codomain.clone(),
        headroom_used: op.headroom_used,
        symbol,
        warnings: op.warnings.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{compose_affine, differentiate};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fock(n: usize) -> Arc<WeightSequence> {
        Arc::new(WeightSequence::fock(n))
    }

    fn poly(coeffs: &[Complex64], w: &Arc<WeightSequence>) -> TruncatedEntireFunction {
        TruncatedEntireFunction::new(coeffs.to_vec(), w.clone()).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn dilation_is_diagonal() {
        let w = fock(10);
        let mu = c(0.6, -0.3);
        let m = composition_matrix(&AffineMap::dilation(mu), &w, &w, 6).unwrap();
        for k in 0..=6 {
            for n in 0..=6 {
                let want = if k == n { mu.powi(n as i32) } else { ZERO };
                assert!(close(m.entries()[(k, n)], want, 1e-14), "({k},{n})");
            }
        }
        assert!(m.is_upper_triangular());
        assert!(m.warnings().is_empty());
    }

    #[test]
    fn powers_of_i_are_exact() {
        let w = fock(10);
        let m = composition_matrix(&AffineMap::dilation(c(0.0, 1.0)), &w, &w, 4).unwrap();
        let diag: Vec<Complex64> = (0..5).map(|n| m.entries()[(n, n)]).collect();
        assert_eq!(diag, vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0), c(1.0, 0.0)]);
    }

    #[test]
    fn shift_column_matches_binomial_expansion() {
        let w = fock(10);
        let m = composition_matrix(&AffineMap::new(c(1.0, 0.0), c(1.0, 0.0)), &w, &w, 2).unwrap();
        let s2 = 2f64.sqrt();
        let want = [c(1.0 / s2, 0.0), c(2.0 / s2, 0.0), c(1.0, 0.0)];
        for k in 0..3 {
            assert!(close(m.entries()[(k, 2)], want[k], 1e-14));
        }
    }

    #[test]
    fn cross_space_dilation_is_unimodular() {
        let w = fock(20);
        let mu = c(0.3, -0.4);
        let scaled = Arc::new(w.scale(mu).unwrap());
        let m = composition_matrix(&AffineMap::dilation(mu), &w, &scaled, 12).unwrap();
        for n in 0..=12 {
            let want = (mu / mu.norm()).powi(n as i32);
            assert!(close(m.entries()[(n, n)], want, 1e-13));
        }
        assert!(m.symbol().is_none());
    }

    #[test]
    fn large_symbol_warns() {
        let w = fock(10);
        let m = composition_matrix(&AffineMap::dilation(c(1.5, 0.0)), &w, &w, 4).unwrap();
        assert_eq!(m.warnings().len(), 1);
    }

    #[test]
    fn multiplier_examples() {
        let w = fock(10);
        let one = poly(&[ONE], &w);
        let id = multiplier_matrix(&one, &w, 3).unwrap();
        assert_eq!(id.entries(), &DMatrix::identity(4, 4));

        let z = poly(&[ZERO, ONE], &w);
        let m = multiplier_matrix(&z, &w, 2).unwrap();
        assert_eq!(m.entries().shape(), (4, 3));
        assert_eq!(m.headroom_used(), 1);
        for n in 0..3 {
            assert!(close(m.entries()[(n + 1, n)], c(((n + 1) as f64).sqrt(), 0.0), 1e-14));
        }

        let b = c(0.5, 2.0);
        let m = multiplier_matrix(&poly(&[b], &w), &w, 3).unwrap();
        assert_eq!(m.entries(), &DMatrix::from_fn(4, 4, |k, n| if k == n { b } else { ZERO }));

        assert_eq!(
            multiplier_matrix(&z, &w, 10),
            Err(HardyError::InsufficientHeadroom { required: 11, available: 10 })
        );
    }

    #[test]
    fn differentiation_examples() {
        let w = fock(10);
        let d0 = differentiation_matrix(0, &w, 3).unwrap();
        assert_eq!(d0.entries(), &DMatrix::identity(4, 4));

        let d1 = differentiation_matrix(1, &w, 3).unwrap();
        assert_eq!(d1.entries().shape(), (3, 4));
        for n in 1..=3 {
            assert!(close(d1.entries()[(n - 1, n)], c((n as f64).sqrt(), 0.0), 1e-14));
        }

        let d2 = differentiation_matrix(2, &w, 3).unwrap();
        assert!(d2.entries().column(1).iter().all(|x| *x == ZERO));

        let big = differentiation_matrix(5, &w, 3).unwrap();
        assert_eq!(big.entries().shape(), (1, 4));
        assert!(big.entries().iter().all(|x| *x == ZERO));
    }

    #[test]
    fn weighted_composition_examples() {
        let w = fock(10);
        let map = AffineMap::new(c(0.5, 0.5), c(-1.0, 0.25));
        let one = poly(&[ONE], &w);
        let wc = weighted_composition_matrix(&one, &map, &w, 5).unwrap();
        let plain = composition_matrix(&map, &w, &w, 5).unwrap();
        assert_eq!(wc.entries(), plain.entries());

        let b = Complex64::from_polar(1.0, 0.4);
        let mu = Complex64::from_polar(1.0, -1.1);
        let wc = weighted_composition_matrix(&poly(&[b], &w), &AffineMap::dilation(mu), &w, 5).unwrap();
        for n in 0..=5 {
            assert!(close(wc.entries()[(n, n)], b * mu.powi(n as i32), 1e-14));
        }

        let z = poly(&[ZERO, ONE], &w);
        let wc = weighted_composition_matrix(&z, &AffineMap::identity(), &w, 1).unwrap();
        assert!(close(wc.entries()[(1, 0)], ONE, 1e-15));
        assert!(close(wc.entries()[(2, 1)], c(2f64.sqrt(), 0.0), 1e-14));
    }

    #[test]
    fn generalized_reduces_to_known_operators() {
        let w = fock(12);
        let map = AffineMap::new(c(0.7, 0.1), c(0.3, -0.2));
        let one = poly(&[ONE], &w);
        let g = generalized_matrix(0, &map, &one, &w, 6).unwrap();
        let plain = composition_matrix(&map, &w, &w, 6).unwrap();
        for (x, y) in g.entries().iter().zip(plain.entries().iter()) {
            assert!(close(*x, *y, 1e-14));
        }

        let g = generalized_matrix(1, &AffineMap::identity(), &one, &w, 6).unwrap();
        let d = differentiation_matrix(1, &w, 6).unwrap();
        assert_eq!(g.entries().shape(), d.entries().shape());
        for (x, y) in g.entries().iter().zip(d.entries().iter()) {
            assert!(close(*x, *y, 1e-14));
        }
        assert_eq!(g.headroom_used(), 1);
    }

    #[test]
    fn chain_rule_identity() {
        let w = fock(12);
        let map = AffineMap::new(c(0.4, -0.3), c(0.5, 0.5));
        let dc = compose(&differentiation_matrix(1, &w, 8).unwrap(), &composition_matrix(&map, &w, &w, 8).unwrap()).unwrap();
        let g = generalized_matrix(1, &map, &poly(&[map.derivative()], &w), &w, 8).unwrap();
        assert_eq!(dc.entries().shape(), g.entries().shape());
        for (x, y) in dc.entries().iter().zip(g.entries().iter()) {
            assert!((x - y).norm() <= 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn apply_examples() {
        let w = fock(10);
        let z2 = TruncatedEntireFunction::monomial(2, w.clone()).unwrap();
        let id = OperatorMatrix::identity(&w, 4).unwrap();
        let out = apply(&id, &z2).unwrap();
        assert!(close(out.coeffs()[2], ONE, 1e-15));

        let mu = c(0.2, 0.9);
        let out = apply(&composition_matrix(&AffineMap::dilation(mu), &w, &w, 4).unwrap(), &z2).unwrap();
        assert!(close(out.coeffs()[2], mu * mu, 1e-14));

        let one = poly(&[ONE], &w);
        let g = generalized_matrix(1, &AffineMap::new(ONE, ONE), &one, &w, 4).unwrap();
        let out = apply(&g, &z2).unwrap();
        assert!(close(out.coeffs()[0], c(2.0, 0.0), 1e-14));
        assert!(close(out.coeffs()[1], c(2.0, 0.0), 1e-14));
        assert!(out.coeffs()[2..].iter().all(|x| x.norm() < 1e-14));

        let z6 = TruncatedEntireFunction::monomial(6, w.clone()).unwrap();
        assert!(matches!(apply(&id, &z6), Err(HardyError::DegreeExceedsWeights { .. })));
        let other = fock(11);
        let foreign = TruncatedEntireFunction::monomial(1, other).unwrap();
        assert!(matches!(apply(&id, &foreign), Err(HardyError::SpaceMismatch(_))));
    }

    #[test]
    fn apply_agrees_with_series_layer() {
        let w = fock(12);
        let f = poly(&[c(1.0, -1.0), c(0.5, 0.0), c(0.0, 2.0), c(-0.25, 0.5)], &w);
        let map = AffineMap::new(c(0.3, 0.6), c(-0.4, 0.2));
        let got = apply(&composition_matrix(&map, &w, &w, 3).unwrap(), &f).unwrap();
        let want = compose_affine(&f, &map);
        for (x, y) in got.coeffs().iter().zip(want.coeffs()) {
            assert!(close(*x, *y, 1e-13));
        }
        let got = apply(&differentiation_matrix(2, &w, 3).unwrap(), &f).unwrap();
        let want = differentiate(&f, 2);
        for (x, y) in got.coeffs().iter().zip(want.coeffs()) {
            assert!(close(*x, *y, 1e-13));
        }
    }

    #[test]
    fn adjoint_of_dilation_is_conjugate_dilation() {
        let w = fock(10);
        let mu = c(0.3, 0.5);
        let m = composition_matrix(&AffineMap::dilation(mu), &w, &w, 5).unwrap();
        let adj = adjoint(&m);
        let want = composition_matrix(&AffineMap::dilation(mu.conj()), &w, &w, 5).unwrap();
        for (x, y) in adj.entries().iter().zip(want.entries().iter()) {
            assert!(close(*x, *y, 1e-15));
        }
        assert_eq!(adj.symbol().unwrap().map, AffineMap::dilation(mu.conj()));
        assert_eq!(adjoint(&adj).entries(), m.entries());
    }

    #[test]
    fn algebra() {
        let w = fock(10);
        let m1 = AffineMap::new(c(0.5, 0.5), c(1.0, 0.0));
        let m2 = AffineMap::new(c(0.0, 0.8), c(-0.5, 0.5));
        let c1 = composition_matrix(&m1, &w, &w, 6).unwrap();
        let c2 = composition_matrix(&m2, &w, &w, 6).unwrap();
        let prod = compose(&c1, &c2).unwrap();
        let direct = composition_matrix(&m2.compose(&m1), &w, &w, 6).unwrap();
        for (x, y) in prod.entries().iter().zip(direct.entries().iter()) {
            assert!(close(*x, *y, 1e-13));
        }
        assert_eq!(prod.symbol().unwrap().map, m2.compose(&m1));

        let plus = composition_matrix(&AffineMap::identity(), &w, &w, 4).unwrap();
        let minus = composition_matrix(&AffineMap::dilation(c(-1.0, 0.0)), &w, &w, 4).unwrap();
        let sum = add(&plus, &minus).unwrap();
        let z = TruncatedEntireFunction::monomial(1, w.clone()).unwrap();
        assert!(apply(&sum, &z).unwrap().is_zero());

        let b = Complex64::from_polar(1.0, 2.0);
        let scaled = scalar_mul(b, &plus);
        assert_eq!(scaled.symbol().unwrap().constant_multiplier(), Some(b));

        let other = fock(11);
        let foreign = composition_matrix(&AffineMap::identity(), &other, &other, 4).unwrap();
        assert!(matches!(compose(&plus, &foreign), Err(HardyError::SpaceMismatch(_))));
        assert!(matches!(add(&plus, &foreign), Err(HardyError::SpaceMismatch(_))));
        let smaller = composition_matrix(&AffineMap::identity(), &w, &w, 3).unwrap();
        assert!(matches!(add(&plus, &smaller), Err(HardyError::SpaceMismatch(_))));
    }

    #[test]
    fn weighted_product_symbol() {
        let w = fock(10);
        let half = poly(&[c(0.5, 0.0)], &w);
        let two = poly(&[c(2.0, 0.0)], &w);
        let t1 = weighted_composition_matrix(&half, &AffineMap::dilation(c(0.0, 1.0)), &w, 6).unwrap();
        let t2 = weighted_composition_matrix(&two, &AffineMap::dilation(c(0.0, -1.0)), &w, 6).unwrap();
        let prod = compose(&t1, &t2).unwrap();
        let s = prod.symbol().unwrap();
        assert_eq!(s.constant_multiplier(), Some(c(1.0, 0.0)));
        assert_eq!(s.map, AffineMap::identity());
    }

    #[test]
    fn truncating_compose_accumulates_headroom() {
        let w = fock(12);
        let z = poly(&[ZERO, ONE], &w);
        let m = multiplier_matrix(&z, &w, 6).unwrap();
        let m6 = multiplier_matrix(&z, &w, 6).unwrap();
        // inner codomain degree 7, outer domain degree 6: top row dropped
        let sq = compose(&m, &m6).unwrap();
        assert_eq!(sq.headroom_used(), 2);
        assert_eq!(sq.entries().shape(), (8, 7));
    }

    #[test]
    fn dump_layout() {
        let w = fock(6);
        let m = composition_matrix(&AffineMap::dilation(c(0.0, 1.0)), &w, &w, 2).unwrap();
        let d = m.dump();
        assert_eq!(d.entries.len(), 9);
        assert_eq!(d.entries[4], [0.0, 1.0]);
        assert_eq!(d.n, 2);
    }
}
