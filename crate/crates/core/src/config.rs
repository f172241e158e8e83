//! Session configuration shared by every command of an analysis.

use std::sync::Arc;

use serde::Deserialize;

use crate::coeffs::DEFAULT_PRUNE_TOL;
use crate::error::{Error, Result};
use crate::freq::{Basis, BasisElement};
use crate::io::GridSpecJson;
use crate::torus::GridSpec;
use crate::wiener::WienerConfig;

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub prune: f64,
    pub rank: f64,
    pub invariance: f64,
    pub indicator: f64,
    pub characterization: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let w = WienerConfig::default();
        Self {
            prune: DEFAULT_PRUNE_TOL,
            rank: w.rank_tol,
            invariance: w.invariance_tol,
            indicator: w.indicator_tol,
            characterization: w.characterization_tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SessionConfig {
    /// Absent when the basis is taken from the input files.
    pub basis: Option<Arc<Basis>>,
    pub grid: GridSpec,
    pub tolerances: Tolerances,
    pub seed: u64,
}

impl Default for SessionConfig {
    fn default() -> Self {
        Self {
            basis: None,
            grid: GridSpec::new(1, 8).expect("valid grid"),
            tolerances: Tolerances::default(),
            seed: 0,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SessionConfigIn {
    #[serde(default)]
    basis: Option<Vec<BasisElement>>,
    #[serde(default)]
    grid: Option<GridSpecJson>,
    #[serde(default)]
    tolerances: Tolerances,
    #[serde(default)]
    seed: u64,
}

impl SessionConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: SessionConfigIn =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let basis = raw.basis.map(Basis::new).transpose()?.map(Arc::new);
        let grid = match raw.grid {
            Some(g) => g.to_spec()?,
            None => GridSpec::new(basis.as_ref().map_or(1, |b| b.dim()), 8)?,
        };
        let t = raw.tolerances;
        for (name, v) in [
            ("prune", t.prune),
            ("rank", t.rank),
            ("invariance", t.invariance),
            ("indicator", t.indicator),
            ("characterization", t.characterization),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} tolerance must be positive, got {v}"
                )));
            }
        }
        if t.indicator >= 0.5 {
            return Err(Error::InvalidTolerance(
                "indicator tolerance must be below 1/2".into(),
            ));
        }
        Ok(Self {
            basis,
            grid,
            tolerances: t,
            seed: raw.seed,
        })
    }

    pub fn wiener(&self) -> WienerConfig {
        WienerConfig {
            rank_tol: self.tolerances.rank,
            invariance_tol: self.tolerances.invariance,
            indicator_tol: self.tolerances.indicator,
            characterization_tol: self.tolerances.characterization,
        }
    }
}
