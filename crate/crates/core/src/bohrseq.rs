//! Finitely supported sequences on the frequency module and the Bohr
//! transform pair linking them to trigonometric polynomials.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_complex::Complex64;

use crate::appoly::TrigPoly;
use crate::coeffs::Coefficients;
use crate::error::Result;
use crate::freq::{Basis, Freq};

/// A finitely supported map from frequencies to complex numbers.
///
/// Shares its storage layout with [`TrigPoly`] but lives on the other side
/// of the Bohr transform; the two are deliberately distinct types.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSeq {
    inner: Coefficients,
}

impl SparseSeq {
    pub fn new(
        basis: Arc<Basis>,
        entries: impl IntoIterator<Item = (Freq, Complex64)>,
    ) -> Result<Self> {
        Ok(Self {
            inner: Coefficients::collect(basis, entries)?,
        })
    }

    pub fn zero(basis: Arc<Basis>) -> Self {
        Self {
            inner: Coefficients::empty(basis),
        }
    }

    /// The point mass `δ_λ`.
    pub fn delta(basis: Arc<Basis>, freq: Freq) -> Result<Self> {
        Self::new(basis, [(freq, Complex64::new(1.0, 0.0))])
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.inner.basis
    }

    pub fn entries(&self) -> impl ExactSizeIterator<Item = (&Freq, &Complex64)> {
        self.inner.terms.iter()
    }

    pub fn support(&self) -> Vec<Freq> {
        self.inner.terms.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.inner.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.terms.is_empty()
    }

    pub fn get(&self, freq: &Freq) -> Complex64 {
        self.inner.get(freq)
    }

    /// `(S_λ φ)(μ) = φ(μ − λ)`.
    pub fn shift(&self, freq: &Freq) -> Result<SparseSeq> {
        Ok(Self {
            inner: self.inner.shifted(freq)?,
        })
    }

    /// `Σ_λ φ(λ) conj(ψ(λ))`.
    pub fn inner(&self, other: &SparseSeq) -> Result<Complex64> {
        self.inner.inner(&other.inner)
    }

    pub fn norm(&self) -> f64 {
        self.inner.norm_sq().sqrt()
    }

    /// `(φ∗ψ)(λ) = Σ_α φ(α) ψ(λ−α)`.
    ///
    /// The candidate support `supp φ + supp ψ` is enumerated first; each
    /// output entry is then summed over `α ∈ supp φ` in ascending order by
    /// looking up `ψ(λ−α)`.
    pub fn convolve(&self, other: &SparseSeq) -> Result<SparseSeq> {
        self.inner.check_compatible(&other.inner)?;
        let support: BTreeSet<Freq> = self
            .inner
            .terms
            .keys()
            .flat_map(|a| other.inner.terms.keys().map(move |b| a + b))
            .collect();
        let mut out = BTreeMap::new();
        for lambda in support {
            let mut acc = Complex64::new(0.0, 0.0);
            for (alpha, phi) in &self.inner.terms {
                if let Some(psi) = other.inner.terms.get(&(&lambda - alpha)) {
                    acc += phi * psi;
                }
            }
            out.insert(lambda, acc);
        }
        Ok(Self {
            inner: Coefficients::from_map(self.basis().clone(), out),
        })
    }

    /// Largest absolute entry difference over the union of supports.
    pub fn max_distance(&self, other: &SparseSeq) -> Result<f64> {
        self.inner.check_compatible(&other.inner)?;
        let keys: BTreeSet<&Freq> = self
            .inner
            .terms
            .keys()
            .chain(other.inner.terms.keys())
            .collect();
        Ok(keys
            .into_iter()
            .map(|k| (self.get(k) - other.get(k)).norm())
            .fold(0.0, f64::max))
    }
}

/// The Bohr transform `δ_λ ↦ e_λ`.
pub fn bohr_transform(seq: &SparseSeq) -> TrigPoly {
    TrigPoly::from_coefficients(seq.inner.clone())
}

/// The inverse Bohr transform `λ ↦ m(f e_{−λ})`.
pub fn bohr_inverse(poly: &TrigPoly) -> SparseSeq {
    SparseSeq {
        inner: poly.inner.clone(),
    }
}
