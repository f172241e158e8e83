//! Seeded generators for randomized checks and the CLI's `--random` modes.
//!
//! All randomness flows from [`seeded`], a ChaCha stream, so a seed fixes
//! the output on every platform.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::appoly::TrigPoly;
use crate::freq::{Basis, Freq};
use crate::torus::{GridFunction, GridSpec, GridSpectrum};
use crate::wiener::SigmaSet;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Coordinates `p/q` with `1 ≤ q ≤ max_den` and `|p/q| ≤ max_abs`.
pub fn random_freq<R: Rng>(rng: &mut R, dim: usize, max_den: i64, max_abs: i64) -> Freq {
    let ratios: Vec<(i64, i64)> = (0..dim)
        .map(|_| {
            let q = rng.random_range(1..=max_den);
            (rng.random_range(-max_abs * q..=max_abs * q), q)
        })
        .collect();
    Freq::from_ratios(&ratios)
}

/// Uniform on the closed unit disc.
pub fn random_unit_disc<R: Rng>(rng: &mut R) -> Complex64 {
    let r = rng.random::<f64>().sqrt();
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(r, theta)
}

/// Between 1 and `max_terms` terms (fewer after merging repeated
/// frequencies), coefficients in the unit disc.
pub fn random_trigpoly<R: Rng>(
    rng: &mut R,
    basis: &Arc<Basis>,
    max_terms: usize,
    max_den: i64,
    max_abs: i64,
) -> TrigPoly {
    let n = rng.random_range(1..=max_terms);
    let terms: Vec<_> = (0..n)
        .map(|_| {
            (
                random_freq(rng, basis.dim(), max_den, max_abs),
                random_unit_disc(rng),
            )
        })
        .collect();
    TrigPoly::new(basis.clone(), terms).expect("dimensions match the basis")
}

pub fn random_complex_gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_grid_function<R: Rng>(rng: &mut R, spec: GridSpec) -> GridFunction {
    let values = (0..spec.size())
        .map(|_| random_complex_gaussian(rng))
        .collect();
    GridFunction::new(spec, values).expect("length N^d")
}

pub fn random_grid_spectrum<R: Rng>(rng: &mut R, spec: GridSpec) -> GridSpectrum {
    let values = (0..spec.size())
        .map(|_| random_complex_gaussian(rng))
        .collect();
    GridSpectrum::new(spec, values).expect("length N^d")
}

/// Each point included independently with probability 1/2.
pub fn random_sigma<R: Rng>(rng: &mut R, spec: GridSpec) -> SigmaSet {
    let members: Vec<usize> = (0..spec.size()).filter(|_| rng.random_bool(0.5)).collect();
    SigmaSet::from_flat(spec, members).expect("indices in range")
}
