//! Truncated power series `f(z) = Σ_{n ≤ N} a_n z^n` living in a weighted
//! Hardy space, with the weighted inner product, point evaluation,
//! reproducing kernels, derivatives, affine composition and products.
//!
//! These routines work on monomial coefficients directly and serve as the
//! reference layer that the matrix representations in [`crate::operators`]
//! are checked against.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{HardyError, Result};
use crate::numeric::falling_factorial;
use crate::weights::WeightSequence;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The affine symbol `z ↦ a z + b`. A dilation `z ↦ μ z` is `(μ, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineMap {
    pub a: Complex64,
    pub b: Complex64,
}

impl AffineMap {
    pub fn new(a: Complex64, b: Complex64) -> Self {
        Self { a, b }
    }

    pub fn dilation(mu: Complex64) -> Self {
        Self { a: mu, b: ZERO }
    }

    pub fn identity() -> Self {
        Self { a: ONE, b: ZERO }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.a * z + self.b
    }

    /// `self ∘ inner`, i.e. `z ↦ self(inner(z))`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        AffineMap { a: self.a * inner.a, b: self.a * inner.b + self.b }
    }

    /// The derivative `Φ'`, a constant.
    pub fn derivative(&self) -> Complex64 {
        self.a
    }

    pub fn is_dilation(&self) -> bool {
        self.b == ZERO
    }

    /// Coefficients `[b, a]` in the monomial basis.
    pub fn coefficients(&self) -> Vec<Complex64> {
        vec![self.b, self.a]
    }
}

/// A polynomial of degree at most `N` tagged with the space it lives in.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedEntireFunction {
    coeffs: Vec<Complex64>,
    space: Arc<WeightSequence>,
}

impl TruncatedEntireFunction {
    /// Fails if `coeffs` is empty or its degree bound exceeds the space's `n_max`.
    pub fn new(coeffs: Vec<Complex64>, space: Arc<WeightSequence>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(HardyError::InvalidArgument("coefficient vector is empty".into()));
        }
        space.check_degree(coeffs.len() - 1)?;
        Ok(Self { coeffs, space })
    }

    pub fn from_real(coeffs: &[f64], space: Arc<WeightSequence>) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(), space)
    }

    pub fn zero(degree_bound: usize, space: Arc<WeightSequence>) -> Result<Self> {
        Self::new(vec![ZERO; degree_bound + 1], space)
    }

    /// `z^n`.
    pub fn monomial(n: usize, space: Arc<WeightSequence>) -> Result<Self> {
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[n] = ONE;
        Self::new(coeffs, space)
    }

    /// `e_n = z^n / ξ_n`, the `n`-th orthonormal basis vector.
    pub fn basis(n: usize, space: Arc<WeightSequence>) -> Result<Self> {
        space.check_degree(n)?;
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[n] = Complex64::new((-space.log(n)).exp(), 0.0);
        Self::new(coeffs, space)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Index of the highest nonzero coefficient (0 for the zero function).
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| *c != ZERO).unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    pub fn space(&self) -> &Arc<WeightSequence> {
        &self.space
    }

    /// Same coefficients, reinterpreted in another space.
    pub fn with_space(&self, space: Arc<WeightSequence>) -> Result<Self> {
        Self::new(self.coeffs.clone(), space)
    }

    /// Pads with zeros (or drops trailing coefficients) to the given degree bound.
    pub fn resized(&self, degree_bound: usize) -> Result<Self> {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(degree_bound + 1, ZERO);
        Self::new(coeffs, self.space.clone())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| c * x).collect(), space: self.space.clone() }
    }

    /// Coefficientwise sum; the degree bound is the larger of the two.
    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| self.coeffs.get(i).copied().unwrap_or(ZERO) + other.coeffs.get(i).copied().unwrap_or(ZERO))
            .collect();
        Self { coeffs, space: self.space.clone() }
    }

    /// Coordinates in the orthonormal basis: `c_n = a_n ξ_n`.
    pub fn to_orthonormal(&self) -> Vec<Complex64> {
        self.coeffs.iter().enumerate().map(|(n, a)| a * self.space.value(n)).collect()
    }

    /// Inverse of [`Self::to_orthonormal`].
    pub fn from_orthonormal(coords: &[Complex64], space: Arc<WeightSequence>) -> Result<Self> {
        if coords.is_empty() {
            return Err(HardyError::InvalidArgument("coordinate vector is empty".into()));
        }
        space.check_degree(coords.len() - 1)?;
        let coeffs = coords.iter().enumerate().map(|(n, c)| c * (-space.log(n)).exp()).collect();
        Self::new(coeffs, space)
    }
}

/// `⟨f, g⟩ = Σ b_n conj(c_n) ξ_n²`.
pub fn inner_product(f: &TruncatedEntireFunction, g: &TruncatedEntireFunction, weights: &WeightSequence) -> Result<Complex64> {
    weights.check_degree(f.degree_bound())?;
    weights.check_degree(g.degree_bound())?;
    Ok(f.coeffs
        .iter()
        .zip(&g.coeffs)
        .enumerate()
        .map(|(n, (b, c))| b * c.conj() * (2.0 * weights.log(n)).exp())
        .sum())
}

/// `ln ‖f‖`, accumulated with a max-shift so large weights do not overflow.
/// Returns `-inf` for the zero function.
pub fn log_norm(f: &TruncatedEntireFunction, weights: &WeightSequence) -> Result<f64> {
    weights.check_degree(f.degree_bound())?;
    let terms: Vec<f64> = f
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, a)| **a != ZERO)
        .map(|(n, a)| a.norm().ln() + weights.log(n))
        .collect();
    let Some(peak) = terms.iter().copied().reduce(f64::max) else {
        return Ok(f64::NEG_INFINITY);
    };
    let sum: f64 = terms.iter().map(|t| (2.0 * (t - peak)).exp()).sum();
    Ok(peak + 0.5 * sum.ln())
}

/// `‖f‖ = √⟨f, f⟩`.
pub fn norm(f: &TruncatedEntireFunction, weights: &WeightSequence) -> Result<f64> {
    Ok(log_norm(f, weights)?.exp())
}

/// `f(p)` by Horner's scheme.
pub fn evaluate(f: &TruncatedEntireFunction, p: Complex64) -> Complex64 {
    horner(&f.coeffs, p)
}

pub(crate) fn horner(coeffs: &[Complex64], p: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |acc, c| acc * p + c)
}

/// Truncated reproducing kernel `K_p(z) = Σ_{n ≤ N} conj(p)^n z^n / ξ_n²`.
pub fn kernel(p: Complex64, weights: &Arc<WeightSequence>, degree: usize) -> Result<TruncatedEntireFunction> {
    weights.check_degree(degree)?;
    let pc = p.conj();
    let mut power = ONE;
    let mut coeffs = Vec::with_capacity(degree + 1);
    for n in 0..=degree {
        coeffs.push(power * (-2.0 * weights.log(n)).exp());
        power *= pc;
    }
    TruncatedEntireFunction::new(coeffs, weights.clone())
}

/// The `order`-th derivative. Orders above the degree bound give the zero
/// function of degree bound 0.
pub fn differentiate(f: &TruncatedEntireFunction, order: usize) -> TruncatedEntireFunction {
    let n_top = f.degree_bound();
    if order > n_top {
        return TruncatedEntireFunction { coeffs: vec![ZERO], space: f.space.clone() };
    }
    let coeffs = (order..=n_top)
        .map(|n| f.coeffs[n] * falling_factorial(n as u64, order as u64))
        .collect();
    TruncatedEntireFunction { coeffs, space: f.space.clone() }
}

/// Coefficients of `f(a z + b)`, evaluated by Horner's scheme in the ring of
/// polynomials. The output has the same length as the input.
pub(crate) fn compose_affine_coeffs(coeffs: &[Complex64], map: &AffineMap) -> Vec<Complex64> {
    let len = coeffs.len();
    let mut acc = vec![ZERO; len];
    let mut deg = 0usize;
    for &c in coeffs.iter().rev() {
        // acc <- acc * (a z + b) + c
        let mut next = vec![ZERO; len];
        for k in 0..=deg {
            next[k] += acc[k] * map.b;
            if k + 1 < len {
                next[k + 1] += acc[k] * map.a;
            }
        }
        next[0] += c;
        acc = next;
        deg = (deg + 1).min(len - 1);
    }
    acc
}

/// `f ∘ Φ` for affine `Φ`; the degree bound is unchanged.
pub fn compose_affine(f: &TruncatedEntireFunction, map: &AffineMap) -> TruncatedEntireFunction {
    TruncatedEntireFunction { coeffs: compose_affine_coeffs(&f.coeffs, map), space: f.space.clone() }
}

/// Full Cauchy product of two coefficient vectors.
pub(crate) fn cauchy_product(f: &[Complex64], g: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![ZERO; f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        if *a == ZERO {
            continue;
        }
        for (j, b) in g.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// `f · g` truncated at `truncation_degree`, together with the weighted norm
/// of the discarded coefficients.
///
/// The result's degree bound is `min(truncation_degree, deg f + deg g)` using
/// degree bounds. Errors if the truncation degree exceeds the space, or if a
/// discarded coefficient sits beyond `n_max` where it cannot be weighed.
pub fn multiply(
    f: &TruncatedEntireFunction,
    g: &TruncatedEntireFunction,
    truncation_degree: usize,
) -> Result<(TruncatedEntireFunction, f64)> {
    let space = &f.space;
    space.check_degree(truncation_degree)?;
    let full = cauchy_product(&f.coeffs, &g.coeffs);
    let keep = truncation_degree.min(full.len() - 1);

    let mut dropped_sq = 0.0;
    for (k, c) in full.iter().enumerate().skip(keep + 1) {
        if *c == ZERO {
            continue;
        }
        space.check_degree(k)?;
        dropped_sq += (c.norm() * space.value(k)).powi(2);
    }
    let coeffs = full[..=keep].to_vec();
    Ok((TruncatedEntireFunction { coeffs, space: space.clone() }, dropped_sq.sqrt()))
}

/// `f^k` without truncation. Errors if the product degree exceeds the space.
pub fn power(f: &TruncatedEntireFunction, k: usize) -> Result<TruncatedEntireFunction> {
    let deg = f.degree();
    let target = deg * k;
    f.space.check_degree(target)?;
    let base = &f.coeffs[..=deg];
    let mut acc = vec![ONE];
    for _ in 0..k {
        acc = cauchy_product(&acc, base);
    }
    acc.truncate(target + 1);
    TruncatedEntireFunction::new(acc, f.space.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fock(n: usize) -> Arc<WeightSequence> {
        Arc::new(WeightSequence::fock(n))
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn inner_product_examples() {
        let w = fock(8);
        let z = TruncatedEntireFunction::monomial(1, w.clone()).unwrap();
        let one = TruncatedEntireFunction::monomial(0, w.clone()).unwrap();
        assert!(close(inner_product(&z, &z, &w).unwrap(), c(1.0, 0.0), 1e-15));
        assert_eq!(inner_product(&one, &z, &w).unwrap(), c(0.0, 0.0));

        let f = TruncatedEntireFunction::from_real(&[1.0, 2.0], w.clone()).unwrap();
        let g = TruncatedEntireFunction::from_real(&[0.0, 3.0], w.clone()).unwrap();
        assert!(close(inner_product(&f, &g, &w).unwrap(), c(6.0, 0.0), 1e-15));

        let small = WeightSequence::fock(1);
        let z2 = TruncatedEntireFunction::monomial(2, w.clone()).unwrap();
        assert_eq!(
            inner_product(&z2, &z, &small),
            Err(HardyError::DegreeExceedsWeights { degree: 2, n_max: 1 })
        );
    }

    #[test]
    fn norm_examples() {
        let w = fock(8);
        assert_eq!(norm(&TruncatedEntireFunction::zero(3, w.clone()).unwrap(), &w).unwrap(), 0.0);
        let z2 = TruncatedEntireFunction::monomial(2, w.clone()).unwrap();
        assert!((norm(&z2, &w).unwrap() - 2f64.sqrt()).abs() < 1e-14);
        let f = TruncatedEntireFunction::from_real(&[1.0, 1.0], w.clone()).unwrap();
        assert!((norm(&f, &w).unwrap() - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn evaluation_and_kernel() {
        let w = fock(8);
        let z2 = TruncatedEntireFunction::monomial(2, w.clone()).unwrap();
        assert_eq!(evaluate(&z2, c(3.0, 0.0)), c(9.0, 0.0));
        let f = TruncatedEntireFunction::from_real(&[1.0, 1.0, 1.0], w.clone()).unwrap();
        assert_eq!(evaluate(&f, c(0.0, 0.0)), c(1.0, 0.0));

        let k0 = kernel(c(0.0, 0.0), &w, 3).unwrap();
        assert_eq!(k0.coeffs(), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let k1 = kernel(c(1.0, 0.0), &w, 2).unwrap();
        for (got, want) in k1.coeffs().iter().zip([1.0, 1.0, 0.5]) {
            assert!(close(*got, c(want, 0.0), 1e-15));
        }
        let k2i = kernel(c(0.0, 2.0), &w, 2).unwrap();
        for (got, want) in k2i.coeffs().iter().zip([c(1.0, 0.0), c(0.0, -2.0), c(-2.0, 0.0)]) {
            assert!(close(*got, want, 1e-15));
        }
        assert!(kernel(c(1.0, 0.0), &w, 9).is_err());
    }

    #[test]
    fn derivative_examples() {
        let w = fock(8);
        let z3 = TruncatedEntireFunction::monomial(3, w.clone()).unwrap();
        let d = differentiate(&z3, 1);
        assert_eq!(d.coeffs(), &[c(0.0, 0.0), c(0.0, 0.0), c(3.0, 0.0)]);
        let z5 = TruncatedEntireFunction::monomial(5, w.clone()).unwrap();
        assert_eq!(differentiate(&z5, 5).coeffs(), &[c(120.0, 0.0)]);
        let f = TruncatedEntireFunction::from_real(&[1.0, 1.0, 1.0, 1.0], w.clone()).unwrap();
        assert_eq!(differentiate(&f, 2).coeffs(), &[c(2.0, 0.0), c(6.0, 0.0)]);
        let beyond = differentiate(&f, 7);
        assert!(beyond.is_zero());
        assert_eq!(beyond.degree_bound(), 0);
        assert_eq!(differentiate(&f, 0), f);
    }

    #[test]
    fn affine_composition_examples() {
        let w = fock(8);
        let z2 = TruncatedEntireFunction::monomial(2, w.clone()).unwrap();
        let shifted = compose_affine(&z2, &AffineMap::new(c(1.0, 0.0), c(1.0, 0.0)));
        assert_eq!(shifted.coeffs(), &[c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);

        let f = TruncatedEntireFunction::from_real(&[0.5, -1.0, 2.0, 3.0], w.clone()).unwrap();
        let b = c(2.0, -1.0);
        let there = compose_affine(&f, &AffineMap::new(c(1.0, 0.0), -b));
        let back = compose_affine(&there, &AffineMap::new(c(1.0, 0.0), b));
        for (x, y) in back.coeffs().iter().zip(f.coeffs()) {
            assert!(close(*x, *y, 1e-13));
        }

        let mu = c(0.3, 0.8);
        let z4 = TruncatedEntireFunction::monomial(4, w.clone()).unwrap();
        let dil = compose_affine(&z4, &AffineMap::dilation(mu));
        assert!(close(dil.coeffs()[4], mu.powi(4), 1e-15));
        assert!(dil.coeffs()[..4].iter().all(|x| *x == c(0.0, 0.0)));

        // degenerate symbol collapses to the constant f(b)
        let constant = compose_affine(&f, &AffineMap::new(c(0.0, 0.0), b));
        assert!(close(constant.coeffs()[0], evaluate(&f, b), 1e-14));
        assert!(constant.coeffs()[1..].iter().all(|x| *x == c(0.0, 0.0)));
        assert_eq!(constant.degree_bound(), f.degree_bound());
    }

    #[test]
    fn affine_map_algebra() {
        let outer = AffineMap::new(c(0.0, 1.0), c(2.0, 0.0));
        let inner = AffineMap::new(c(0.5, 0.0), c(0.0, -1.0));
        let z = c(0.7, -0.2);
        let composed = outer.compose(&inner);
        assert!(close(composed.eval(z), outer.eval(inner.eval(z)), 1e-15));
        assert!(AffineMap::dilation(c(2.0, 0.0)).is_dilation());
        assert_eq!(AffineMap::identity().coefficients(), vec![c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn multiplication_examples() {
        let w = fock(8);
        let one = TruncatedEntireFunction::monomial(0, w.clone()).unwrap();
        let g = TruncatedEntireFunction::from_real(&[1.0, -2.0, 0.5], w.clone()).unwrap();
        let (prod, dropped) = multiply(&one, &g, 5).unwrap();
        assert_eq!(prod, g);
        assert_eq!(dropped, 0.0);

        let z = TruncatedEntireFunction::monomial(1, w.clone()).unwrap();
        let (prod, dropped) = multiply(&z, &z, 2).unwrap();
        assert_eq!(prod.coeffs(), &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(dropped, 0.0);

        let z2 = TruncatedEntireFunction::monomial(2, w.clone()).unwrap();
        let (prod, dropped) = multiply(&z2, &z2, 3).unwrap();
        assert!(prod.is_zero());
        assert_eq!(prod.degree_bound(), 3);
        assert!((dropped - 24f64.sqrt()).abs() < 1e-13);

        assert!(multiply(&z2, &z2, 9).is_err());
        let tiny = fock(3);
        let z2t = TruncatedEntireFunction::monomial(2, tiny.clone()).unwrap();
        assert!(matches!(multiply(&z2t, &z2t, 3), Err(HardyError::DegreeExceedsWeights { degree: 4, .. })));
    }

    #[test]
    fn powers() {
        let w = fock(8);
        let phi = TruncatedEntireFunction::from_real(&[1.0, 1.0], w.clone()).unwrap();
        let p3 = power(&phi, 3).unwrap();
        assert_eq!(p3.coeffs(), &[c(1.0, 0.0), c(3.0, 0.0), c(3.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(power(&phi, 0).unwrap().coeffs(), &[c(1.0, 0.0)]);
        assert!(power(&phi, 9).is_err());
    }

    #[test]
    fn orthonormal_coordinates() {
        let w = fock(6);
        let e3 = TruncatedEntireFunction::basis(3, w.clone()).unwrap();
        let coords = e3.to_orthonormal();
        assert!(close(coords[3], c(1.0, 0.0), 1e-15));
        let back = TruncatedEntireFunction::from_orthonormal(&coords, w.clone()).unwrap();
        assert!(close(back.coeffs()[3], e3.coeffs()[3], 1e-15));
        assert!((norm(&e3, &w).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn construction_errors() {
        let w = fock(2);
        assert!(TruncatedEntireFunction::new(vec![], w.clone()).is_err());
        assert_eq!(
            TruncatedEntireFunction::monomial(3, w.clone()),
            Err(HardyError::DegreeExceedsWeights { degree: 3, n_max: 2 })
        );
    }
}
