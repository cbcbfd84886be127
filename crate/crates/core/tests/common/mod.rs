#![allow(dead_code)]

use std::sync::Arc;

use hardy_core::{AffineMap, TruncatedEntireFunction, WeightSequence};
use num_complex::Complex64;
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn fock(n: usize) -> Arc<WeightSequence> {
    Arc::new(WeightSequence::fock(n))
}

pub fn poly(coeffs: &[Complex64], w: &Arc<WeightSequence>) -> TruncatedEntireFunction {
    TruncatedEntireFunction::new(coeffs.to_vec(), w.clone()).unwrap()
}

/// Uniform in the disc of the given radius.
pub fn in_disc<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

pub fn on_circle<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    Complex64::from_polar(radius, rng.gen_range(0.0..std::f64::consts::TAU))
}

pub fn random_poly<R: Rng>(rng: &mut R, degree: usize, w: &Arc<WeightSequence>) -> TruncatedEntireFunction {
    let coeffs = (0..=degree).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    TruncatedEntireFunction::new(coeffs, w.clone()).unwrap()
}

pub fn random_affine<R: Rng>(rng: &mut R) -> AffineMap {
    AffineMap::new(in_disc(rng, 1.0), in_disc(rng, 1.5))
}

/// `max_k |x_k − y_k|` relative to `max_k |y_k|` (absolute when y vanishes).
pub fn vector_rel_err(x: &[Complex64], y: &[Complex64]) -> f64 {
    let len = x.len().max(y.len());
    let get = |v: &[Complex64], i: usize| v.get(i).copied().unwrap_or_default();
    let scale = y.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
    let diff = (0..len).map(|i| (get(x, i) - get(y, i)).norm()).fold(0.0, f64::max);
    if scale < 1e-12 {
        diff
    } else {
        diff / scale
    }
}
