//! Sparse coefficient maps shared by trigonometric polynomials and
//! finitely supported sequences.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::freq::{Basis, Freq};

/// Default relative pruning threshold for stored coefficients.
pub const DEFAULT_PRUNE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Coefficients {
    pub(crate) basis: Arc<Basis>,
    pub(crate) terms: BTreeMap<Freq, Complex64>,
}

impl Coefficients {
    pub(crate) fn empty(basis: Arc<Basis>) -> Self {
        Self {
            basis,
            terms: BTreeMap::new(),
        }
    }

    /// Sums duplicate frequencies, then prunes.
    pub(crate) fn collect(
        basis: Arc<Basis>,
        terms: impl IntoIterator<Item = (Freq, Complex64)>,
    ) -> Result<Self> {
        let dim = basis.dim();
        let mut map = BTreeMap::new();
        for (freq, c) in terms {
            if freq.dim() != dim {
                return Err(Error::IncompatibleBases);
            }
            *map.entry(freq).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        Ok(Self::from_map(basis, map))
    }

    pub(crate) fn from_map(basis: Arc<Basis>, terms: BTreeMap<Freq, Complex64>) -> Self {
        let mut out = Self { basis, terms };
        out.prune(DEFAULT_PRUNE_TOL);
        out
    }

    /// Drops coefficients with modulus below `tol` times the largest modulus,
    /// and all exact zeros.
    pub(crate) fn prune(&mut self, tol: f64) {
        let max = self.terms.values().map(|c| c.norm()).fold(0.0, f64::max);
        let threshold = tol * max;
        self.terms.retain(|_, c| {
            let m = c.norm();
            m != 0.0 && m >= threshold
        });
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.basis, &other.basis) || self.basis == other.basis {
            Ok(())
        } else {
            Err(Error::IncompatibleBases)
        }
    }

    pub(crate) fn get(&self, freq: &Freq) -> Complex64 {
        self.terms.get(freq).copied().unwrap_or_default()
    }

    pub(crate) fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_compatible(other)?;
        // Iterate the smaller support.
        let sum = if self.terms.len() <= other.terms.len() {
            self.terms
                .iter()
                .map(|(k, a)| a * other.get(k).conj())
                .sum()
        } else {
            other
                .terms
                .iter()
                .map(|(k, b)| self.get(k) * b.conj())
                .sum()
        };
        Ok(sum)
    }

    pub(crate) fn norm_sq(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum()
    }

    pub(crate) fn shifted(&self, by: &Freq) -> Result<Self> {
        if by.dim() != self.basis.dim() {
            return Err(Error::IncompatibleBases);
        }
        Ok(Self {
            basis: self.basis.clone(),
            terms: self.terms.iter().map(|(k, c)| (k + by, *c)).collect(),
        })
    }
}
