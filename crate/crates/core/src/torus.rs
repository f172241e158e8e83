//! The finite Bohr model.
//!
//! Integer-coordinate frequencies are identified with the lattice `ℤ^d`,
//! whose dual is the torus `𝕋^d`; the torus is sampled on the finite group
//! `(ℤ/N)^d`. Normalized counting measure is the Haar measure of that
//! group, so `L²` of the grid is an exact finite-dimensional stand-in for
//! `L²` of the Bohr compactification.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::appoly::TrigPoly;
use crate::error::{Error, Result};

/// Default bound on the number of grid points `N^d`.
pub const DEFAULT_GRID_CAP: usize = 1 << 16;

/// Shape of the grid `(ℤ/N)^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridSpec {
    d: usize,
    n: usize,
}

impl GridSpec {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        Self::with_cap(d, n, DEFAULT_GRID_CAP)
    }

    pub fn with_cap(d: usize, n: usize, cap: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidGrid("dimension d must be at least 1".into()));
        }
        if n == 0 {
            return Err(Error::InvalidGrid("N must be at least 1".into()));
        }
        let size = u32::try_from(d)
            .ok()
            .and_then(|d| n.checked_pow(d))
            .filter(|&s| s <= cap)
            .ok_or_else(|| {
                Error::InvalidGrid(format!("N^d = {n}^{d} exceeds the cap of {cap} points"))
            })?;
        debug_assert!(size >= 1);
        Ok(Self { d, n })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of grid points `N^d`.
    pub fn size(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    /// Row-major flat index of a multi-index (components reduced mod N).
    pub fn flat_index(&self, multi: &[i64]) -> Result<usize> {
        if multi.len() != self.d {
            return Err(Error::SpecMismatch);
        }
        let n = self.n as i64;
        Ok(multi
            .iter()
            .fold(0usize, |acc, &x| acc * self.n + x.rem_euclid(n) as usize))
    }

    /// Multi-index in `[0, N)^d` of a flat index.
    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.d];
        for slot in out.iter_mut().rev() {
            *slot = flat % self.n;
            flat /= self.n;
        }
        out
    }

    /// Flat index of `ξ + η` in the group.
    pub fn translate(&self, flat: usize, by: &[usize]) -> usize {
        let xi = self.multi_index(flat);
        xi.iter()
            .zip(by)
            .fold(0, |acc, (&a, &b)| acc * self.n + (a + b) % self.n)
    }

    /// Representative of `r mod N` in `(−N/2, N/2]`.
    pub fn centered(&self, r: usize) -> i64 {
        if 2 * r > self.n {
            r as i64 - self.n as i64
        } else {
            r as i64
        }
    }

    fn check_same(&self, other: &GridSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }
}

/// `e^{2πi r/N}`, exact at the quarter turns.
fn root_of_unity(r: usize, n: usize) -> Complex64 {
    let r = r % n;
    if (4 * r).is_multiple_of(n) {
        return match 4 * r / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, TAU * r as f64 / n as f64)
}

/// A complex function on the grid, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(spec: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != spec.size() {
            return Err(Error::InvalidGrid(format!(
                "expected {} values, got {}",
                spec.size(),
                values.len()
            )));
        }
        Ok(Self { spec, values })
    }

    pub fn from_real(spec: GridSpec, values: &[f64]) -> Result<Self> {
        Self::new(
            spec,
            values.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn zero(spec: GridSpec) -> Self {
        Self {
            spec,
            values: vec![Complex64::new(0.0, 0.0); spec.size()],
        }
    }

    /// The constant function `1`.
    pub fn ones(spec: GridSpec) -> Self {
        Self {
            spec,
            values: vec![Complex64::new(1.0, 0.0); spec.size()],
        }
    }

    /// The point mass at a flat index, with value 1 (grid norm `N^{-d/2}`).
    pub fn point(spec: GridSpec, flat: usize) -> Self {
        let mut f = Self::zero(spec);
        f.values[flat] = Complex64::new(1.0, 0.0);
        f
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// `(1/N^d) Σ_ξ u(ξ) conj(v(ξ))`.
    pub fn inner(&self, other: &GridFunction) -> Result<Complex64> {
        self.spec.check_same(&other.spec)?;
        let sum: Complex64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum();
        Ok(sum / self.spec.size() as f64)
    }

    pub fn norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        (s / self.spec.size() as f64).sqrt()
    }

    /// Pointwise product.
    pub fn mul(&self, other: &GridFunction) -> Result<GridFunction> {
        self.spec.check_same(&other.spec)?;
        Ok(Self {
            spec: self.spec,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn conj(&self) -> GridFunction {
        Self {
            spec: self.spec,
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    pub fn scale(&self, a: Complex64) -> GridFunction {
        Self {
            spec: self.spec,
            values: self.values.iter().map(|v| a * v).collect(),
        }
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.spec.check_same(&other.spec)?;
        Ok(Self {
            spec: self.spec,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// `self += a·other`.
    pub fn axpy(&mut self, a: Complex64, other: &GridFunction) -> Result<()> {
        self.spec.check_same(&other.spec)?;
        for (x, y) in self.values.iter_mut().zip(&other.values) {
            *x += a * y;
        }
        Ok(())
    }

    /// Largest pointwise modulus of the difference.
    pub fn max_distance(&self, other: &GridFunction) -> Result<f64> {
        self.spec.check_same(&other.spec)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Relabels the spectrum of `f` by integer lattice points.
pub fn lattice_coords(f: &TrigPoly) -> Result<BTreeMap<Vec<i64>, Complex64>> {
    f.terms()
        .map(|(k, c)| {
            k.as_lattice_point()
                .map(|p| (p, *c))
                .ok_or(Error::OutsideLattice)
        })
        .collect()
}

/// The character `ξ ↦ e^{2πi⟨k,ξ⟩/N}`.
pub fn grid_character(k: &[i64], spec: GridSpec) -> Result<GridFunction> {
    if k.len() != spec.d() {
        return Err(Error::SpecMismatch);
    }
    let n = spec.n();
    let k: Vec<usize> = k.iter().map(|&x| x.rem_euclid(n as i64) as usize).collect();
    let values = (0..spec.size())
        .map(|flat| {
            let xi = spec.multi_index(flat);
            let phase = k
                .iter()
                .zip(&xi)
                .fold(0usize, |acc, (a, b)| (acc + a * b) % n);
            root_of_unity(phase, n)
        })
        .collect();
    Ok(GridFunction { spec, values })
}

/// Samples a lattice trigonometric polynomial on the grid.
///
/// Every frequency must satisfy `|kᵢ| < N/2`; wrap-around is an error.
pub fn grid_render(f: &TrigPoly, spec: GridSpec) -> Result<GridFunction> {
    if f.basis().dim() != spec.d() {
        return Err(Error::SpecMismatch);
    }
    let coords = lattice_coords(f)?;
    let n = spec.n() as i64;
    let mut out = GridFunction::zero(spec);
    for (k, c) in &coords {
        if k.iter().any(|&x| 2 * x.abs() >= n) {
            return Err(Error::Aliasing {
                index: k.clone(),
                n: spec.n(),
            });
        }
        out.axpy(*c, &grid_character(k, spec)?)?;
    }
    Ok(out)
}

/// How [`grid_fourier`] evaluates the transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FourierMethod {
    /// Row-column evaluation of the defining sums with a fixed summation order.
    #[default]
    Direct,
    /// Row-column FFT.
    Fast,
}

/// Fourier coefficients on the dual grid, indexed by `k mod N` row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpectrum {
    spec: GridSpec,
    values: Vec<Complex64>,
}

impl GridSpectrum {
    pub fn new(spec: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != spec.size() {
            return Err(Error::InvalidGrid(format!(
                "expected {} coefficients, got {}",
                spec.size(),
                values.len()
            )));
        }
        Ok(Self { spec, values })
    }

    /// A coefficient map from arbitrary integer indices, reduced mod N.
    pub fn from_map(spec: GridSpec, map: &BTreeMap<Vec<i64>, Complex64>) -> Result<Self> {
        let mut values = vec![Complex64::new(0.0, 0.0); spec.size()];
        for (k, c) in map {
            values[spec.flat_index(k)?] += c;
        }
        Ok(Self { spec, values })
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Coefficient at `k`, reduced mod N.
    pub fn get(&self, k: &[i64]) -> Result<Complex64> {
        Ok(self.values[self.spec.flat_index(k)?])
    }

    /// `(k, coefficient)` with `k` in `(−N/2, N/2]^d`, sorted by `k`.
    pub fn centered(&self) -> Vec<(Vec<i64>, Complex64)> {
        let mut out: Vec<_> = self
            .values
            .iter()
            .enumerate()
            .map(|(flat, c)| {
                let k: Vec<i64> = self
                    .spec
                    .multi_index(flat)
                    .into_iter()
                    .map(|r| self.spec.centered(r))
                    .collect();
                (k, *c)
            })
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    pub fn to_map(&self) -> BTreeMap<Vec<i64>, Complex64> {
        self.centered().into_iter().collect()
    }

    pub fn energy(&self) -> f64 {
        self.values.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `Σ_k c(k) χ_k`.
    pub fn synthesize(&self) -> GridFunction {
        let mut values = self.values.clone();
        direct_transform(&mut values, self.spec, 1.0);
        GridFunction {
            spec: self.spec,
            values,
        }
    }

    pub fn max_distance(&self, other: &GridSpectrum) -> Result<f64> {
        self.spec.check_same(&other.spec)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Coefficients `⟨u, χ_k⟩ = (1/N^d) Σ_ξ u(ξ) e^{−2πi⟨k,ξ⟩/N}`.
pub fn grid_fourier(u: &GridFunction) -> GridSpectrum {
    grid_fourier_with(u, FourierMethod::Direct)
}

pub fn grid_fourier_with(u: &GridFunction, method: FourierMethod) -> GridSpectrum {
    let spec = u.spec;
    let mut values = u.values.clone();
    match method {
        FourierMethod::Direct => direct_transform(&mut values, spec, -1.0),
        FourierMethod::Fast => fast_forward(&mut values, spec),
    }
    let scale = 1.0 / spec.size() as f64;
    for v in &mut values {
        *v *= scale;
    }
    GridSpectrum { spec, values }
}

/// Calls `f` on each axis line, given as `(base, stride)`.
fn for_each_line(spec: GridSpec, axis: usize, mut f: impl FnMut(usize, usize)) {
    let n = spec.n();
    let stride = n.pow((spec.d() - 1 - axis) as u32);
    let outer = n.pow(axis as u32);
    for o in 0..outer {
        for i in 0..stride {
            f(o * n * stride + i, stride);
        }
    }
}

/// Unnormalized transform with kernel `e^{sign·2πi jk/N}` along every axis.
fn direct_transform(values: &mut [Complex64], spec: GridSpec, sign: f64) {
    let n = spec.n();
    let roots: Vec<Complex64> = (0..n)
        .map(|r| {
            let w = root_of_unity(r, n);
            if sign < 0.0 {
                w.conj()
            } else {
                w
            }
        })
        .collect();
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..spec.d() {
        for_each_line(spec, axis, |base, stride| {
            for (j, slot) in line.iter_mut().enumerate() {
                *slot = values[base + j * stride];
            }
            for k in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, x) in line.iter().enumerate() {
                    acc += x * roots[(j * k) % n];
                }
                values[base + k * stride] = acc;
            }
        });
    }
}

fn fast_forward(values: &mut [Complex64], spec: GridSpec) {
    let n = spec.n();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..spec.d() {
        for_each_line(spec, axis, |base, stride| {
            for (j, slot) in line.iter_mut().enumerate() {
                *slot = values[base + j * stride];
            }
            fft.process(&mut line);
            for (k, x) in line.iter().enumerate() {
                values[base + k * stride] = *x;
            }
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freq::{Basis, Freq};
    use std::sync::Arc;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spec(d: usize, n: usize) -> GridSpec {
        GridSpec::new(d, n).unwrap()
    }

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    fn lattice_poly(d: usize, terms: &[(&[i64], Complex64)]) -> TrigPoly {
        let labels = ["1", "sqrt2", "sqrt3"];
        let values = [1.0, 2f64.sqrt(), 3f64.sqrt()];
        let basis = Arc::new(Basis::from_pairs((0..d).map(|i| (labels[i], values[i]))).unwrap());
        TrigPoly::new(basis, terms.iter().map(|(k, v)| (Freq::from_ints(k), *v))).unwrap()
    }

    #[test]
    fn grid_cap_enforced() {
        assert!(GridSpec::new(2, 256).is_ok());
        assert!(GridSpec::new(2, 257).is_err());
        assert!(GridSpec::new(0, 4).is_err());
        assert!(GridSpec::new(1, 0).is_err());
        assert!(GridSpec::new(64, 3).is_err());
    }

    #[test]
    fn indexing_round_trip() {
        let s = spec(3, 5);
        for flat in 0..s.size() {
            let m: Vec<i64> = s.multi_index(flat).into_iter().map(|x| x as i64).collect();
            assert_eq!(s.flat_index(&m).unwrap(), flat);
        }
        assert_eq!(
            s.flat_index(&[-1, 0, 0]).unwrap(),
            s.flat_index(&[4, 0, 0]).unwrap()
        );
    }

    #[test]
    fn lattice_coords_examples() {
        let f = lattice_poly(2, &[(&[1, 0], c(1.0, 0.0)), (&[0, -1], c(2.0, 0.0))]);
        let got = lattice_coords(&f).unwrap();
        let want: BTreeMap<Vec<i64>, Complex64> =
            [(vec![1, 0], c(1.0, 0.0)), (vec![0, -1], c(2.0, 0.0))].into();
        assert_eq!(got, want);

        let basis = Arc::new(Basis::from_pairs([("1", 1.0), ("sqrt2", 2f64.sqrt())]).unwrap());
        let half = TrigPoly::exp(basis.clone(), Freq::from_ratios(&[(1, 2), (0, 1)])).unwrap();
        assert_eq!(lattice_coords(&half).unwrap_err(), Error::OutsideLattice);
        assert!(lattice_coords(&TrigPoly::zero(basis)).unwrap().is_empty());
    }

    #[test]
    fn character_examples() {
        let s = spec(2, 3);
        assert_eq!(grid_character(&[0, 0], s).unwrap(), GridFunction::ones(s));
        let chi = grid_character(&[1], spec(1, 2)).unwrap();
        assert_eq!(chi.values(), &[c(1.0, 0.0), c(-1.0, 0.0)]);
        // e^{2πij/4} for j = 0..4.
        let want: Vec<Complex64> = (0..4)
            .map(|j| Complex64::from_polar(1.0, TAU * j as f64 / 4.0))
            .collect();
        let chi = grid_character(&[1], spec(1, 4)).unwrap();
        assert!(close(chi.values(), &want, 1e-15));
        assert!(grid_character(&[1], s).is_err());
    }

    #[test]
    fn characters_multiply() {
        let s = spec(2, 5);
        let a = grid_character(&[1, 3], s).unwrap();
        let b = grid_character(&[4, -2], s).unwrap();
        let ab = grid_character(&[5, 1], s).unwrap();
        assert!(close(a.mul(&b).unwrap().values(), ab.values(), 1e-14));
    }

    #[test]
    fn render_examples() {
        let one = lattice_poly(2, &[(&[0, 0], c(1.0, 0.0))]);
        assert_eq!(
            grid_render(&one, spec(2, 3)).unwrap(),
            GridFunction::ones(spec(2, 3))
        );

        // 2cos(2πj/4) for j = 0..4.
        let cosine = lattice_poly(1, &[(&[1], c(1.0, 0.0)), (&[-1], c(1.0, 0.0))]);
        let got = grid_render(&cosine, spec(1, 4)).unwrap();
        let want: Vec<Complex64> = (0..4)
            .map(|j| c(2.0 * (TAU * j as f64 / 4.0).cos(), 0.0))
            .collect();
        assert!(close(got.values(), &want, 1e-15));
        assert!(close(
            got.values(),
            &[c(2.0, 0.0), c(0.0, 0.0), c(-2.0, 0.0), c(0.0, 0.0)],
            1e-15
        ));

        let f = lattice_poly(
            2,
            &[
                (&[1, -2], c(0.3, 1.0)),
                (&[0, 1], c(-2.0, 0.5)),
                (&[3, 3], c(1.0, 1.0)),
            ],
        );
        let u = grid_render(&f, spec(2, 8)).unwrap();
        assert!((u.norm() - f.norm()).abs() < 1e-14);
    }

    #[test]
    fn render_refuses_aliasing() {
        let f = lattice_poly(1, &[(&[2], c(1.0, 0.0))]);
        let err = grid_render(&f, spec(1, 4)).unwrap_err();
        assert!(matches!(err, Error::Aliasing { .. }));
        assert!(err.to_string().contains("increase N"));
        assert!(grid_render(&f, spec(1, 5)).is_ok());
        assert_eq!(
            grid_render(&f, spec(2, 5)).unwrap_err(),
            Error::SpecMismatch
        );
    }

    #[test]
    fn inner_examples() {
        let s = spec(2, 4);
        let a = grid_character(&[1, 2], s).unwrap();
        let b = grid_character(&[1, 3], s).unwrap();
        assert!((a.inner(&a).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!(a.inner(&b).unwrap().norm() < 1e-15);
        let one = GridFunction::ones(s);
        assert_eq!(one.inner(&one).unwrap(), c(1.0, 0.0));
        assert_eq!(
            one.inner(&GridFunction::ones(spec(1, 16))).unwrap_err(),
            Error::SpecMismatch
        );
    }

    #[test]
    fn mul_examples() {
        let s = spec(1, 6);
        let v = grid_character(&[2], s).unwrap();
        assert_eq!(GridFunction::ones(s).mul(&v).unwrap(), v);
        let ind = GridFunction::from_real(s, &[1.0, 0.0, 1.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(ind.mul(&ind).unwrap(), ind);
    }

    #[test]
    fn fourier_examples() {
        let s = spec(2, 3);
        let chi = grid_character(&[1, -1], s).unwrap();
        let got = grid_fourier(&chi);
        for (k, v) in got.centered() {
            let want = if k == vec![1, -1] { 1.0 } else { 0.0 };
            assert!((v - c(want, 0.0)).norm() < 1e-15, "k = {k:?}");
        }
        let ones = grid_fourier(&GridFunction::ones(s));
        assert_eq!(ones.get(&[0, 0]).unwrap(), c(1.0, 0.0));
        assert!(ones.values()[1..].iter().all(|v| v.norm() < 1e-15));

        // Two-point DFT of (1, 0) by hand: (1/2)(1 ± 0).
        let u = GridFunction::from_real(spec(1, 2), &[1.0, 0.0]).unwrap();
        let map = grid_fourier(&u).to_map();
        let want: BTreeMap<Vec<i64>, Complex64> =
            [(vec![0], c(0.5, 0.0)), (vec![1], c(0.5, 0.0))].into();
        assert_eq!(map, want);
    }

    #[test]
    fn direct_and_fast_agree() {
        for (d, n) in [(1, 8), (2, 6), (3, 4), (2, 7)] {
            let s = spec(d, n);
            let values = (0..s.size())
                .map(|i| c((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()))
                .collect();
            let u = GridFunction::new(s, values).unwrap();
            let a = grid_fourier_with(&u, FourierMethod::Direct);
            let b = grid_fourier_with(&u, FourierMethod::Fast);
            assert!(a.max_distance(&b).unwrap() < 1e-13, "d={d}, n={n}");
        }
    }

    #[test]
    fn synthesize_inverts_fourier() {
        let s = spec(2, 5);
        let values = (0..s.size())
            .map(|i| c(i as f64, -(i as f64) / 3.0))
            .collect();
        let u = GridFunction::new(s, values).unwrap();
        assert!(grid_fourier(&u).synthesize().max_distance(&u).unwrap() < 1e-12);
    }
}
