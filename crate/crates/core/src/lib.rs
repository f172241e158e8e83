//! Almost periodic trigonometric polynomials with exact frequencies.
//!
//! * [`freq`]: exact frequencies over a user-declared basis of reals.
//! * [`appoly`]: trigonometric polynomials, means, inner products, spectra.
//! * [`bohrseq`]: finitely supported sequences, shifts, convolution and the
//!   Bohr transform pair.
//! * [`torus`]: the finite Bohr model `(ℤ/N)^d` with counting measure.
//! * [`wiener`]: doubly invariant subspaces of the finite model and their
//!   description as ranges of indicator multipliers.
//! * [`io`] and [`config`]: canonical JSON formats and session settings.

pub mod appoly;
pub mod bohrseq;
mod coeffs;
pub mod config;
pub mod error;
pub mod freq;
pub mod io;
pub mod random;
pub mod rational;
pub mod torus;
pub mod wiener;

pub use appoly::TrigPoly;
pub use bohrseq::{bohr_inverse, bohr_transform, SparseSeq};
pub use coeffs::DEFAULT_PRUNE_TOL;
pub use error::{Error, Result};
pub use freq::{Basis, BasisElement, Freq};
pub use rational::Rational;
pub use torus::{GridFunction, GridSpec, GridSpectrum};
pub use wiener::{SigmaSet, Subspace, WienerConfig, WienerReport};
