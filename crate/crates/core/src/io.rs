//! Canonical JSON forms.
//!
//! Output is byte-deterministic: terms are sorted by frequency, rationals
//! are written `"p/q"` in lowest terms, and every float is printed with 17
//! significant digits in exponent form.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::appoly::TrigPoly;
use crate::bohrseq::SparseSeq;
use crate::error::{Error, Result};
use crate::freq::{Basis, BasisElement, Freq};
use crate::torus::{GridFunction, GridSpec, GridSpectrum};
use crate::wiener::{SigmaSet, SweepRow, WienerReport};

/// A float serialized with 17 significant digits, e.g. `-5.0636564110975879e-3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sig17(pub f64);

impl Sig17 {
    pub fn render(x: f64) -> String {
        if !x.is_finite() {
            return "null".into();
        }
        // Fold −0 into +0 so equal values print identically.
        let x = if x == 0.0 { 0.0 } else { x };
        format!("{x:.16e}")
    }
}

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw =
            RawValue::from_string(Sig17::render(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

/// Renders any serializable report as pretty JSON with a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report types serialize");
    out.push('\n');
    out
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoeffKind {
    Trigpoly,
    Sequence,
}

/// A parsed coefficient file: either side of the Bohr transform.
#[derive(Debug, Clone, PartialEq)]
pub enum CoeffFile {
    Poly(TrigPoly),
    Seq(SparseSeq),
}

impl CoeffFile {
    pub fn basis(&self) -> &Arc<Basis> {
        match self {
            CoeffFile::Poly(p) => p.basis(),
            CoeffFile::Seq(s) => s.basis(),
        }
    }

    pub fn kind(&self) -> CoeffKind {
        match self {
            CoeffFile::Poly(_) => CoeffKind::Trigpoly,
            CoeffFile::Seq(_) => CoeffKind::Sequence,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermIn {
    freq: Freq,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoeffFileIn {
    #[serde(default)]
    kind: Option<CoeffKind>,
    basis: Vec<BasisElement>,
    terms: Vec<TermIn>,
}

#[derive(Serialize)]
struct BasisOut<'a> {
    label: &'a str,
    value: Sig17,
}

#[derive(Serialize)]
struct TermOut<'a> {
    freq: &'a Freq,
    re: Sig17,
    im: Sig17,
}

#[derive(Serialize)]
struct CoeffFileOut<'a> {
    kind: CoeffKind,
    basis: Vec<BasisOut<'a>>,
    terms: Vec<TermOut<'a>>,
}

pub fn parse_basis(text: &str) -> Result<Basis> {
    let elements: Vec<BasisElement> = serde_json::from_str(text).map_err(parse_err)?;
    Basis::new(elements)
}

/// Parses a coefficient file. A missing `kind` means `"trigpoly"`.
pub fn parse_coefficients(text: &str) -> Result<CoeffFile> {
    let raw: CoeffFileIn = serde_json::from_str(text).map_err(parse_err)?;
    let basis = Arc::new(Basis::new(raw.basis)?);
    let terms = raw
        .terms
        .into_iter()
        .map(|t| (t.freq, Complex64::new(t.re, t.im)));
    Ok(match raw.kind.unwrap_or(CoeffKind::Trigpoly) {
        CoeffKind::Trigpoly => CoeffFile::Poly(TrigPoly::new(basis, terms)?),
        CoeffKind::Sequence => CoeffFile::Seq(SparseSeq::new(basis, terms)?),
    })
}

fn basis_out(basis: &Basis) -> Vec<BasisOut<'_>> {
    basis
        .elements()
        .iter()
        .map(|e| BasisOut {
            label: &e.label,
            value: Sig17(e.value),
        })
        .collect()
}

fn coeffs_json<'a>(
    kind: CoeffKind,
    basis: &'a Basis,
    terms: impl Iterator<Item = (&'a Freq, &'a Complex64)>,
) -> String {
    let out = CoeffFileOut {
        kind,
        basis: basis_out(basis),
        terms: terms
            .map(|(freq, c)| TermOut {
                freq,
                re: Sig17(c.re),
                im: Sig17(c.im),
            })
            .collect(),
    };
    to_canonical_json(&out)
}

pub fn trigpoly_to_json(f: &TrigPoly) -> String {
    coeffs_json(CoeffKind::Trigpoly, f.basis(), f.terms())
}

pub fn sequence_to_json(s: &SparseSeq) -> String {
    coeffs_json(CoeffKind::Sequence, s.basis(), s.entries())
}

pub fn coefficients_to_json(file: &CoeffFile) -> String {
    match file {
        CoeffFile::Poly(p) => trigpoly_to_json(p),
        CoeffFile::Seq(s) => sequence_to_json(s),
    }
}

/// `{"d": .., "N": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpecJson {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
}

impl GridSpecJson {
    pub fn to_spec(self) -> Result<GridSpec> {
        GridSpec::new(self.d, self.n)
    }
}

impl From<GridSpec> for GridSpecJson {
    fn from(s: GridSpec) -> Self {
        Self { d: s.d(), n: s.n() }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridVectorsIn {
    #[serde(default)]
    #[allow(dead_code)]
    kind: Option<String>,
    #[serde(default)]
    grid: Option<GridSpecJson>,
    vectors: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize)]
struct GridVectorsOut {
    kind: &'static str,
    grid: GridSpecJson,
    vectors: Vec<Vec<[Sig17; 2]>>,
}

/// A list of grid functions as read from disk; `grid` is absent when the
/// file relies on the session configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct GridVectors {
    pub grid: Option<GridSpec>,
    pub vectors: Vec<Vec<Complex64>>,
}

impl GridVectors {
    /// Resolves the grid and builds the functions.
    pub fn into_functions(self, fallback: GridSpec) -> Result<(GridSpec, Vec<GridFunction>)> {
        let spec = self.grid.unwrap_or(fallback);
        let vectors = self
            .vectors
            .into_iter()
            .map(|v| GridFunction::new(spec, v).map_err(|_| Error::SpecMismatch))
            .collect::<Result<Vec<_>>>()?;
        Ok((spec, vectors))
    }
}

pub fn parse_grid_vectors(text: &str) -> Result<GridVectors> {
    let raw: GridVectorsIn = serde_json::from_str(text).map_err(parse_err)?;
    let grid = raw.grid.map(GridSpecJson::to_spec).transpose()?;
    let vectors = raw
        .vectors
        .into_iter()
        .map(|v| {
            v.into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect()
        })
        .collect();
    Ok(GridVectors { grid, vectors })
}

fn pairs(values: &[Complex64]) -> Vec<[Sig17; 2]> {
    values.iter().map(|c| [Sig17(c.re), Sig17(c.im)]).collect()
}

pub fn grid_vectors_to_json(spec: GridSpec, vectors: &[GridFunction]) -> String {
    to_canonical_json(&GridVectorsOut {
        kind: "grid-vectors",
        grid: spec.into(),
        vectors: vectors.iter().map(|v| pairs(v.values())).collect(),
    })
}

/// Parses a JSON list of multi-indices such as `[[0], [3]]`.
pub fn parse_sigma(text: &str, spec: GridSpec) -> Result<SigmaSet> {
    let points: Vec<Vec<i64>> = serde_json::from_str(text).map_err(parse_err)?;
    SigmaSet::from_multi_indices(spec, &points)
}

#[derive(Serialize)]
pub struct SpectrumEntry {
    pub k: Vec<i64>,
    pub re: Sig17,
    pub im: Sig17,
}

pub fn spectrum_entries(spectrum: &GridSpectrum) -> Vec<SpectrumEntry> {
    spectrum
        .centered()
        .into_iter()
        .map(|(k, c)| SpectrumEntry {
            k,
            re: Sig17(c.re),
            im: Sig17(c.im),
        })
        .collect()
}

#[derive(Serialize)]
struct WienerReportOut {
    invariant: bool,
    max_invariance_residual: Sig17,
    sigma: Option<Vec<Vec<usize>>>,
    indicator_deviation: Sig17,
    characterization_residual: Option<Sig17>,
    sigma_hat: Vec<SpectrumEntry>,
}

pub fn wiener_report_to_json(report: &WienerReport) -> String {
    to_canonical_json(&WienerReportOut {
        invariant: report.invariant,
        max_invariance_residual: Sig17(report.max_invariance_residual),
        sigma: report.sigma.as_ref().map(SigmaSet::multi_indices),
        indicator_deviation: Sig17(report.indicator_deviation),
        characterization_residual: report.characterization_residual.map(Sig17),
        sigma_hat: report
            .sigma_hat
            .as_ref()
            .map(spectrum_entries)
            .unwrap_or_default(),
    })
}

#[derive(Serialize)]
struct SweepRowOut {
    sigma: Vec<Vec<usize>>,
    invariant: bool,
    max_invariance_residual: Sig17,
    recovered: bool,
    unique: bool,
    characterization_residual: Option<Sig17>,
    pass: bool,
}

#[derive(Serialize)]
struct SweepOut {
    grid: GridSpecJson,
    subsets: usize,
    passed: usize,
    rows: Vec<SweepRowOut>,
}

pub fn sweep_to_json(spec: GridSpec, rows: &[SweepRow]) -> String {
    to_canonical_json(&SweepOut {
        grid: spec.into(),
        subsets: rows.len(),
        passed: rows.iter().filter(|r| r.pass).count(),
        rows: rows
            .iter()
            .map(|r| SweepRowOut {
                sigma: r.sigma.multi_indices(),
                invariant: r.invariant,
                max_invariance_residual: Sig17(r.max_invariance_residual),
                recovered: r.recovered,
                unique: r.unique,
                characterization_residual: r.characterization_residual.map(Sig17),
                pass: r.pass,
            })
            .collect(),
    })
}
