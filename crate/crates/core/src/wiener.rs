//! Doubly invariant subspaces of `L²((ℤ/N)^d)`.
//!
//! A subspace `E` invariant under multiplication by every character (and
//! hence by their inverses) is the range of multiplication by an indicator
//! `1_σ`. The set `σ` is recovered by projecting the constant function onto
//! `E`: the projection is `{0,1}`-valued exactly when `E` has this form.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::torus::{grid_character, grid_fourier, GridFunction, GridSpec, GridSpectrum};

/// Largest grid handled by [`sweep`], which enumerates all `2^{N^d}` subsets.
pub const SWEEP_MAX_POINTS: usize = 8;

/// Pointwise tolerance for `|χ(ξ)| = 1` when validating generators.
const UNIMODULAR_TOL: f64 = 1e-12;

/// Tolerances of the analysis pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WienerConfig {
    /// Relative to the largest input norm.
    pub rank_tol: f64,
    pub invariance_tol: f64,
    pub indicator_tol: f64,
    pub characterization_tol: f64,
}

impl Default for WienerConfig {
    fn default() -> Self {
        Self {
            rank_tol: 1e-10,
            invariance_tol: 1e-9,
            indicator_tol: 1e-6,
            characterization_tol: 1e-9,
        }
    }
}

/// A subspace of grid functions held as an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    spec: GridSpec,
    basis: Vec<GridFunction>,
}

impl Subspace {
    pub fn zero(spec: GridSpec) -> Self {
        Self {
            spec,
            basis: Vec::new(),
        }
    }

    /// Orthonormalizes `vectors` by modified Gram–Schmidt with one
    /// reorthogonalization pass. Vectors whose residual falls below
    /// `rank_tol` times the largest input norm are dropped.
    pub fn span(spec: GridSpec, vectors: &[GridFunction], rank_tol: f64) -> Result<Self> {
        if rank_tol.is_nan() || rank_tol <= 0.0 {
            return Err(Error::InvalidTolerance(format!(
                "rank tolerance must be positive, got {rank_tol}"
            )));
        }
        if vectors.iter().any(|v| v.spec() != spec) {
            return Err(Error::SpecMismatch);
        }
        let largest = vectors.iter().map(GridFunction::norm).fold(0.0, f64::max);
        let cutoff = rank_tol * largest;
        let mut basis: Vec<GridFunction> = Vec::new();
        for v in vectors {
            let mut w = v.clone();
            for _pass in 0..2 {
                for b in &basis {
                    let coeff = w.inner(b)?;
                    w.axpy(-coeff, b)?;
                }
            }
            let norm = w.norm();
            if norm > 0.0 && norm >= cutoff {
                basis.push(w.scale(Complex64::new(1.0 / norm, 0.0)));
            }
        }
        Ok(Self { spec, basis })
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn basis(&self) -> &[GridFunction] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Orthogonal projection `Σᵢ ⟨v, bᵢ⟩ bᵢ`.
    pub fn project(&self, v: &GridFunction) -> Result<GridFunction> {
        if v.spec() != self.spec {
            return Err(Error::SpecMismatch);
        }
        let mut out = GridFunction::zero(self.spec);
        for b in &self.basis {
            out.axpy(v.inner(b)?, b)?;
        }
        Ok(out)
    }

    /// `‖(I − P)v‖`.
    pub fn distance(&self, v: &GridFunction) -> Result<f64> {
        Ok(v.sub(&self.project(v)?)?.norm())
    }
}

/// A subset of the grid, stored by flat index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SigmaSet {
    spec: GridSpec,
    members: BTreeSet<usize>,
}

impl SigmaSet {
    pub fn empty(spec: GridSpec) -> Self {
        Self {
            spec,
            members: BTreeSet::new(),
        }
    }

    pub fn full(spec: GridSpec) -> Self {
        Self {
            spec,
            members: (0..spec.size()).collect(),
        }
    }

    /// Builds a set from multi-indices, each component in `[0, N)`.
    pub fn from_multi_indices(spec: GridSpec, points: &[Vec<i64>]) -> Result<Self> {
        let n = spec.n() as i64;
        let mut members = BTreeSet::new();
        for p in points {
            if p.len() != spec.d() {
                return Err(Error::SpecMismatch);
            }
            if p.iter().any(|&x| x < 0 || x >= n) {
                return Err(Error::InvalidGrid(format!(
                    "point {p:?} is outside (Z/{n})^{}",
                    spec.d()
                )));
            }
            members.insert(spec.flat_index(p)?);
        }
        Ok(Self { spec, members })
    }

    pub fn from_flat(spec: GridSpec, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        if members.iter().any(|&m| m >= spec.size()) {
            return Err(Error::InvalidGrid("flat index out of range".into()));
        }
        Ok(Self { spec, members })
    }

    /// The subset whose flat indices are the set bits of `mask`.
    pub fn from_mask(spec: GridSpec, mask: u64) -> Self {
        Self {
            spec,
            members: (0..spec.size().min(64))
                .filter(|i| mask >> i & 1 == 1)
                .collect(),
        }
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, flat: usize) -> bool {
        self.members.contains(&flat)
    }

    pub fn flat_members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    /// Members as multi-indices, in row-major order.
    pub fn multi_indices(&self) -> Vec<Vec<usize>> {
        self.members
            .iter()
            .map(|&m| self.spec.multi_index(m))
            .collect()
    }

    /// Normalized counting measure `|σ| / N^d`.
    pub fn measure(&self) -> f64 {
        self.members.len() as f64 / self.spec.size() as f64
    }

    /// `σ + η`.
    pub fn translate(&self, by: &[usize]) -> SigmaSet {
        Self {
            spec: self.spec,
            members: self
                .members
                .iter()
                .map(|&m| self.spec.translate(m, by))
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &SigmaSet) -> bool {
        self.spec == other.spec && self.members.is_subset(&other.members)
    }

    /// The indicator function `1_σ`.
    pub fn indicator(&self) -> GridFunction {
        let values = (0..self.spec.size())
            .map(|i| Complex64::new(if self.contains(i) { 1.0 } else { 0.0 }, 0.0))
            .collect();
        GridFunction::new(self.spec, values).expect("length N^d")
    }
}

/// The characters `χ_{e₁}, …, χ_{e_d}` generating the dual group.
pub fn standard_generators(spec: GridSpec) -> Vec<GridFunction> {
    (0..spec.d())
        .map(|i| {
            let mut k = vec![0; spec.d()];
            k[i] = 1;
            grid_character(&k, spec).expect("matching dimension")
        })
        .collect()
}

/// Every character of the grid, in row-major order of `k`.
pub fn all_characters(spec: GridSpec) -> Vec<GridFunction> {
    (0..spec.size())
        .map(|flat| {
            let k: Vec<i64> = spec
                .multi_index(flat)
                .into_iter()
                .map(|x| x as i64)
                .collect();
            grid_character(&k, spec).expect("matching dimension")
        })
        .collect()
}

/// `max ‖(I − P_E)(χ·b)‖` over the generators, their conjugates, and the
/// basis vectors `b` of `E`.
pub fn invariance_residual(space: &Subspace, generators: &[GridFunction]) -> Result<f64> {
    for g in generators {
        if g.spec() != space.spec() {
            return Err(Error::SpecMismatch);
        }
        if let Some(at) = g
            .values()
            .iter()
            .position(|v| (v.norm() - 1.0).abs() > UNIMODULAR_TOL)
        {
            return Err(Error::NotACharacter(at));
        }
    }
    let mut worst: f64 = 0.0;
    for g in generators {
        for chi in [g.clone(), g.conj()] {
            for b in space.basis() {
                worst = worst.max(space.distance(&chi.mul(b)?)?);
            }
        }
    }
    Ok(worst)
}

/// Projects the constant `1` onto `E` and thresholds at `1/2`.
///
/// Returns the set together with `max_ξ min(|f(ξ)|, |f(ξ) − 1|)`, which is
/// zero exactly when the projection is an indicator. A small deviation does
/// not by itself prove `E = 1_σ L²`; see [`verify_characterization`].
pub fn extract_sigma(space: &Subspace, indicator_tol: f64) -> Result<(SigmaSet, f64)> {
    if !(indicator_tol > 0.0 && indicator_tol < 0.5) {
        return Err(Error::InvalidTolerance(format!(
            "indicator tolerance must lie in (0, 1/2), got {indicator_tol}"
        )));
    }
    let spec = space.spec();
    let f = space.project(&GridFunction::ones(spec))?;
    let one = Complex64::new(1.0, 0.0);
    let mut deviation: f64 = 0.0;
    let mut members = Vec::new();
    for (i, v) in f.values().iter().enumerate() {
        let to_one = (v - one).norm();
        deviation = deviation.max(v.norm().min(to_one));
        if to_one <= 0.5 {
            members.push(i);
        }
    }
    Ok((SigmaSet::from_flat(spec, members)?, deviation))
}

/// The range of multiplication by `1_σ`, spanned by normalized point masses.
pub fn subspace_from_sigma(sigma: &SigmaSet) -> Subspace {
    let spec = sigma.spec();
    let scale = Complex64::new((spec.size() as f64).sqrt(), 0.0);
    Subspace {
        spec,
        basis: sigma
            .flat_members()
            .map(|m| GridFunction::point(spec, m).scale(scale))
            .collect(),
    }
}

/// `max_ξ ‖P_E e_ξ − 1_σ e_ξ‖` over the unit point masses `e_ξ`.
///
/// This is the operator distance between `P_E` and `M_{1_σ}` measured on
/// the canonical basis; it vanishes iff `E = 1_σ L²`.
pub fn verify_characterization(space: &Subspace, sigma: &SigmaSet) -> Result<f64> {
    let spec = space.spec();
    if sigma.spec() != spec {
        return Err(Error::SpecMismatch);
    }
    let size = spec.size();
    let root = (size as f64).sqrt();
    let mut worst: f64 = 0.0;
    for xi in 0..size {
        // ⟨e_ξ, b⟩ = conj(b(ξ)) / √(N^d) for e_ξ = √(N^d) δ_ξ.
        let mut diff = GridFunction::zero(spec);
        for b in space.basis() {
            diff.axpy(b.values()[xi].conj() / root, b)?;
        }
        if sigma.contains(xi) {
            diff.axpy(Complex64::new(-root, 0.0), &GridFunction::point(spec, xi))?;
        }
        worst = worst.max(diff.norm());
    }
    Ok(worst)
}

/// Whether `σ` is the only set describing `1_σ L²`: on a finite grid the
/// only null set is empty, so this is exact set equality after a round trip.
pub fn certify_uniqueness(sigma: &SigmaSet, indicator_tol: f64) -> Result<bool> {
    let (recovered, _) = extract_sigma(&subspace_from_sigma(sigma), indicator_tol)?;
    Ok(&recovered == sigma)
}

/// Fourier coefficients of `1_σ`; `σ̂(0)` is the measure of `σ`.
pub fn sigma_hat(sigma: &SigmaSet) -> GridSpectrum {
    grid_fourier(&sigma.indicator())
}

/// Compares the two descriptions of `1_σ L²` on the coefficient side:
/// the coefficients of `1_σ · φ̌` against the cyclic convolution
/// `Σ_α σ̂(λ−α) φ(α)`. Returns the largest coefficient discrepancy.
pub fn corollary_residual(sigma: &SigmaSet, phi: &GridSpectrum) -> Result<f64> {
    let spec = sigma.spec();
    if phi.spec() != spec {
        return Err(Error::SpecMismatch);
    }
    let lhs = grid_fourier(&sigma.indicator().mul(&phi.synthesize())?);
    let hat = sigma_hat(sigma);
    let size = spec.size();
    let mut rhs = vec![Complex64::new(0.0, 0.0); size];
    for (lambda, slot) in rhs.iter_mut().enumerate() {
        let l = spec.multi_index(lambda);
        for alpha in 0..size {
            let a = spec.multi_index(alpha);
            let diff: Vec<i64> = l
                .iter()
                .zip(&a)
                .map(|(&x, &y)| x as i64 - y as i64)
                .collect();
            *slot += hat.get(&diff)? * phi.values()[alpha];
        }
    }
    let rhs = GridSpectrum::new(spec, rhs)?;
    lhs.max_distance(&rhs)
}

/// Outcome of [`analyze`].
#[derive(Debug, Clone, PartialEq)]
pub struct WienerReport {
    pub invariant: bool,
    pub max_invariance_residual: f64,
    /// Present iff `invariant` and the projection of `1` is an indicator
    /// within tolerance.
    pub sigma: Option<SigmaSet>,
    pub indicator_deviation: f64,
    pub characterization_residual: Option<f64>,
    pub sigma_hat: Option<GridSpectrum>,
}

impl WienerReport {
    /// Whether the report certifies `E = 1_σ L²` at the given tolerance.
    pub fn is_characterized(&self, tol: f64) -> bool {
        self.sigma.is_some() && self.characterization_residual.is_some_and(|r| r <= tol)
    }
}

/// Spans `vectors`, tests double invariance under the standard generators
/// and their inverses, and if invariant extracts and verifies `σ`.
pub fn analyze(
    spec: GridSpec,
    vectors: &[GridFunction],
    config: &WienerConfig,
) -> Result<WienerReport> {
    let space = Subspace::span(spec, vectors, config.rank_tol)?;
    analyze_subspace(&space, config)
}

pub fn analyze_subspace(space: &Subspace, config: &WienerConfig) -> Result<WienerReport> {
    let residual = invariance_residual(space, &standard_generators(space.spec()))?;
    let (sigma, deviation) = extract_sigma(space, config.indicator_tol)?;
    let invariant = residual <= config.invariance_tol;
    if !invariant || deviation > config.indicator_tol {
        return Ok(WienerReport {
            invariant,
            max_invariance_residual: residual,
            sigma: None,
            indicator_deviation: deviation,
            characterization_residual: None,
            sigma_hat: None,
        });
    }
    let characterization = verify_characterization(space, &sigma)?;
    let hat = sigma_hat(&sigma);
    Ok(WienerReport {
        invariant,
        max_invariance_residual: residual,
        sigma: Some(sigma),
        indicator_deviation: deviation,
        characterization_residual: Some(characterization),
        sigma_hat: Some(hat),
    })
}

/// One row of an exhaustive sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub sigma: SigmaSet,
    pub invariant: bool,
    pub max_invariance_residual: f64,
    pub recovered: bool,
    pub unique: bool,
    pub characterization_residual: Option<f64>,
    pub pass: bool,
}

/// Runs the generate/analyze round trip for every subset of the grid.
pub fn sweep(spec: GridSpec, config: &WienerConfig) -> Result<Vec<SweepRow>> {
    if spec.size() > SWEEP_MAX_POINTS {
        return Err(Error::InvalidGrid(format!(
            "sweep enumerates 2^(N^d) subsets and needs N^d <= {SWEEP_MAX_POINTS}, got {}",
            spec.size()
        )));
    }
    (0..1u64 << spec.size())
        .map(|mask| {
            let sigma = SigmaSet::from_mask(spec, mask);
            let generated = subspace_from_sigma(&sigma);
            let report = analyze(spec, generated.basis(), config)?;
            let recovered = report.sigma.as_ref() == Some(&sigma);
            let unique = certify_uniqueness(&sigma, config.indicator_tol)?;
            let pass = report.invariant
                && recovered
                && unique
                && report.is_characterized(config.characterization_tol);
            Ok(SweepRow {
                sigma,
                invariant: report.invariant,
                max_invariance_residual: report.max_invariance_residual,
                recovered,
                unique,
                characterization_residual: report.characterization_residual,
                pass,
            })
        })
        .collect()
}
