//! Trigonometric polynomials `Σ c_λ e^{iλx}` with exact frequencies.
//!
//! These are the finite elements of the Besicovitch space AP². Every
//! operation works on the coefficient map directly; the mean value of a
//! product of exponentials is `1` at frequency zero and `0` elsewhere, so
//! inner products and Bohr coefficients are exact read-offs.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_complex::Complex64;

use crate::coeffs::Coefficients;
use crate::error::Result;
use crate::freq::{Basis, Freq};

/// A trigonometric polynomial over a fixed [`Basis`] of frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    pub(crate) inner: Coefficients,
}

impl TrigPoly {
    /// Builds a polynomial from `(frequency, coefficient)` pairs. Repeated
    /// frequencies are summed; negligible coefficients are pruned.
    pub fn new(
        basis: Arc<Basis>,
        terms: impl IntoIterator<Item = (Freq, Complex64)>,
    ) -> Result<Self> {
        Ok(Self {
            inner: Coefficients::collect(basis, terms)?,
        })
    }

    pub fn zero(basis: Arc<Basis>) -> Self {
        Self {
            inner: Coefficients::empty(basis),
        }
    }

    /// The constant `1 = e₀`.
    pub fn one(basis: Arc<Basis>) -> Self {
        let dim = basis.dim();
        Self::exp(basis, Freq::zero(dim)).expect("matching dimension")
    }

    /// The exponential `e_λ`.
    pub fn exp(basis: Arc<Basis>, freq: Freq) -> Result<Self> {
        Self::new(basis, [(freq, Complex64::new(1.0, 0.0))])
    }

    pub(crate) fn from_coefficients(inner: Coefficients) -> Self {
        Self { inner }
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.inner.basis
    }

    /// Terms in ascending frequency order.
    pub fn terms(&self) -> impl ExactSizeIterator<Item = (&Freq, &Complex64)> {
        self.inner.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.inner.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.inner.terms.is_empty()
    }

    /// Re-prunes with a custom relative tolerance.
    pub fn pruned(mut self, tol: f64) -> Self {
        self.inner.prune(tol);
        self
    }

    /// `a·f + b·g`.
    pub fn linear(a: Complex64, f: &TrigPoly, b: Complex64, g: &TrigPoly) -> Result<TrigPoly> {
        f.inner.check_compatible(&g.inner)?;
        let mut map: BTreeMap<Freq, Complex64> =
            f.terms().map(|(k, c)| (k.clone(), a * c)).collect();
        for (k, c) in g.terms() {
            *map.entry(k.clone()).or_default() += b * c;
        }
        Ok(Self::from_coefficients(Coefficients::from_map(
            f.basis().clone(),
            map,
        )))
    }

    pub fn add(&self, other: &TrigPoly) -> Result<TrigPoly> {
        let one = Complex64::new(1.0, 0.0);
        Self::linear(one, self, one, other)
    }

    pub fn sub(&self, other: &TrigPoly) -> Result<TrigPoly> {
        let one = Complex64::new(1.0, 0.0);
        Self::linear(one, self, -one, other)
    }

    pub fn scale(&self, a: Complex64) -> TrigPoly {
        let map = self.terms().map(|(k, c)| (k.clone(), a * c)).collect();
        Self::from_coefficients(Coefficients::from_map(self.basis().clone(), map))
    }

    /// Pointwise product. The coefficient at `λ` is `Σ_{α+β=λ} f̂(α)ĝ(β)`.
    pub fn mul(&self, other: &TrigPoly) -> Result<TrigPoly> {
        self.inner.check_compatible(&other.inner)?;
        let mut map: BTreeMap<Freq, Complex64> = BTreeMap::new();
        for (a, fa) in self.terms() {
            for (b, gb) in other.terms() {
                *map.entry(a + b).or_default() += fa * gb;
            }
        }
        Ok(Self::from_coefficients(Coefficients::from_map(
            self.basis().clone(),
            map,
        )))
    }

    /// Complex conjugate: `c e_λ ↦ c̄ e_{−λ}`.
    pub fn conj(&self) -> TrigPoly {
        let map = self.terms().map(|(k, c)| (-k, c.conj())).collect();
        Self::from_coefficients(Coefficients {
            basis: self.basis().clone(),
            terms: map,
        })
    }

    /// Multiplication by `e_λ`, shifting every frequency by `λ`.
    pub fn modulate(&self, freq: &Freq) -> Result<TrigPoly> {
        Ok(Self::from_coefficients(self.inner.shifted(freq)?))
    }

    /// Time translation `x ↦ f(x − t)`: each coefficient picks up `e^{−iλt}`.
    pub fn translate(&self, t: f64) -> TrigPoly {
        let basis = self.basis();
        let map = self
            .terms()
            .map(|(k, c)| {
                let phase = Complex64::from_polar(1.0, -k.value(basis) * t);
                (k.clone(), c * phase)
            })
            .collect();
        Self::from_coefficients(Coefficients::from_map(basis.clone(), map))
    }

    /// Mean value: the coefficient at frequency zero.
    pub fn mean(&self) -> Complex64 {
        self.inner.get(&Freq::zero(self.basis().dim()))
    }

    /// `(1/2R) ∫_{−R}^{R} f(x) dx`, evaluated in closed form.
    pub fn mean_numeric(&self, r: f64) -> Complex64 {
        let basis = self.basis();
        self.terms()
            .map(|(k, c)| {
                let lambda = k.value(basis);
                if k.is_zero() || lambda == 0.0 {
                    *c
                } else {
                    c * ((lambda * r).sin() / (lambda * r))
                }
            })
            .sum()
    }

    /// Upper bound `Σ_{λ≠0} |f̂(λ)| / (|λ| R)` on `|mean_numeric(R) − mean()|`.
    pub fn mean_numeric_bound(&self, r: f64) -> f64 {
        let basis = self.basis();
        self.terms()
            .filter(|(k, _)| !k.is_zero())
            .map(|(k, c)| c.norm() / (k.value(basis).abs() * r))
            .sum()
    }

    /// The AP² inner product `Σ_λ f̂(λ) conj(ĝ(λ))`.
    pub fn inner(&self, other: &TrigPoly) -> Result<Complex64> {
        self.inner.inner(&other.inner)
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner.norm_sq()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `Σ_λ |f̂(λ)|`, an upper bound for the sup norm.
    pub fn coeff_l1(&self) -> f64 {
        self.terms().map(|(_, c)| c.norm()).sum()
    }

    /// The Bohr spectrum, in ascending order.
    pub fn spectrum(&self) -> Vec<Freq> {
        self.inner.terms.keys().cloned().collect()
    }

    /// Bohr coefficient `m(f e_{−λ})`.
    pub fn bohr_coeff(&self, freq: &Freq) -> Complex64 {
        self.inner.get(freq)
    }

    /// Restricts the Bohr series to the frequencies in `keep`.
    pub fn truncate(&self, keep: &BTreeSet<Freq>) -> TrigPoly {
        let terms = self
            .terms()
            .filter(|(k, _)| keep.contains(*k))
            .map(|(k, c)| (k.clone(), *c))
            .collect();
        Self::from_coefficients(Coefficients {
            basis: self.basis().clone(),
            terms,
        })
    }

    /// Evaluates `Σ_λ f̂(λ) e^{iλx}` using the basis float values.
    pub fn eval(&self, x: f64) -> Complex64 {
        let basis = self.basis();
        self.terms()
            .map(|(k, c)| c * Complex64::from_polar(1.0, k.value(basis) * x))
            .sum()
    }

    pub(crate) fn check_compatible(&self, other: &TrigPoly) -> Result<()> {
        self.inner.check_compatible(&other.inner)
    }
}

/// Largest absolute coefficient difference over the union of supports.
pub fn max_coeff_distance(f: &TrigPoly, g: &TrigPoly) -> Result<f64> {
    f.check_compatible(g)?;
    let keys: BTreeSet<&Freq> = f.inner.terms.keys().chain(g.inner.terms.keys()).collect();
    Ok(keys
        .into_iter()
        .map(|k| (f.inner.get(k) - g.inner.get(k)).norm())
        .fold(0.0, f64::max))
}

/// The partial sums `q_n = Σ_{k=1}^{n} (1/k) e_{1/k}` over the basis `{1}`.
///
/// They converge in AP² while `q_n(0)` is the harmonic number `H_n`.
pub fn harmonic_exponential_sum(n: u32) -> TrigPoly {
    let basis = Arc::new(Basis::rational());
    let terms = (1..=n as i64).map(|k| {
        (
            Freq::from_ratios(&[(1, k)]),
            Complex64::new(1.0 / k as f64, 0.0),
        )
    });
    TrigPoly::new(basis, terms).expect("one-dimensional frequencies")
}
