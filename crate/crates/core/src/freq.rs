//! Exact frequencies.
//!
//! A frequency is a real number `λ = Σ cᵢ·bᵢ` where the `bᵢ` form a [`Basis`]
//! of reals the user asserts to be linearly independent over the rationals,
//! and the `cᵢ` are exact rationals. Equality of frequencies is then equality
//! of coordinate vectors, which is decidable.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Largest denominator accepted when ingesting floating point frequencies
/// (exclusive).
pub const DEFAULT_DENOMINATOR_CAP: u64 = 1_000_000;

/// One named real generating the frequency module.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisElement {
    pub label: String,
    pub value: f64,
}

/// An ordered list of reals over which frequencies are expressed.
///
/// The elements are assumed to be linearly independent over ℚ. This is a
/// user assertion; it cannot be checked from floating point approximations.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    elements: Vec<BasisElement>,
}

impl Basis {
    pub fn new(elements: Vec<BasisElement>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidBasis(
                "basis must have at least one element".into(),
            ));
        }
        for (i, e) in elements.iter().enumerate() {
            if !e.value.is_finite() || e.value == 0.0 {
                return Err(Error::InvalidBasis(format!(
                    "value of {:?} must be finite and nonzero",
                    e.label
                )));
            }
            if elements[..i].iter().any(|o| o.label == e.label) {
                return Err(Error::InvalidBasis(format!(
                    "duplicate label {:?}",
                    e.label
                )));
            }
        }
        Ok(Self { elements })
    }

    /// Convenience constructor from `(label, value)` pairs.
    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, f64)>) -> Result<Self> {
        Self::new(
            pairs
                .into_iter()
                .map(|(label, value)| BasisElement {
                    label: label.into(),
                    value,
                })
                .collect(),
        )
    }

    /// The one-element basis `{1}`, under which frequencies are plain rationals.
    pub fn rational() -> Self {
        Self::from_pairs([("1", 1.0)]).expect("valid basis")
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.elements.iter().map(|e| e.label.as_str())
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.elements.iter().map(|e| e.value)
    }

    /// The frequency `1·bᵢ`.
    pub fn unit(&self, i: usize) -> Freq {
        let mut f = Freq::zero(self.dim());
        f.coords[i] = Rational::ONE;
        f
    }
}

/// An exact frequency: rational coordinates over a [`Basis`].
///
/// Coordinates are kept in lowest terms with positive denominators. The
/// derived ordering is lexicographic on coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Freq {
    coords: Vec<Rational>,
}

impl Freq {
    pub fn zero(dim: usize) -> Self {
        Self {
            coords: vec![Rational::ZERO; dim],
        }
    }

    pub fn new(coords: Vec<Rational>) -> Self {
        Self { coords }
    }

    /// Builds a frequency from `(numerator, denominator)` pairs.
    ///
    /// Panics on a zero denominator; use [`Freq::from_str`] for untrusted input.
    pub fn from_ratios(ratios: &[(i64, i64)]) -> Self {
        Self {
            coords: ratios.iter().map(|&(p, q)| Rational::new(p, q)).collect(),
        }
    }

    pub fn from_ints(ints: &[i64]) -> Self {
        Self {
            coords: ints.iter().map(|&k| Rational::integer(k)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rational::is_zero)
    }

    pub fn checked_add(&self, other: &Freq) -> Result<Freq> {
        if self.dim() != other.dim() {
            return Err(Error::IncompatibleBases);
        }
        Ok(Freq {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Freq) -> Result<Freq> {
        if self.dim() != other.dim() {
            return Err(Error::IncompatibleBases);
        }
        Ok(Freq {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Total order on frequencies of the same basis dimension.
    pub fn checked_cmp(&self, other: &Freq) -> Result<Ordering> {
        if self.dim() != other.dim() {
            return Err(Error::IncompatibleBases);
        }
        Ok(self.cmp(other))
    }

    /// Floating point value `Σ cᵢ·bᵢ`.
    pub fn value(&self, basis: &Basis) -> f64 {
        debug_assert_eq!(self.dim(), basis.dim());
        self.coords
            .iter()
            .zip(basis.values())
            .map(|(c, b)| c.to_f64() * b)
            .sum()
    }

    /// Integer coordinates, if every coordinate is an integer fitting in `i64`.
    pub fn as_lattice_point(&self) -> Option<Vec<i64>> {
        self.coords.iter().map(Rational::to_i64).collect()
    }

    /// Recovers an exact frequency from a floating point value.
    ///
    /// For each basis element `b` the smallest-denominator rational `p/q`
    /// with `|p/q·b − x| ≤ tol` and `q < denominator_cap` is located by a
    /// continued-fraction descent; the candidate with the smallest
    /// denominator wins, ties going to the earlier basis element.
    pub fn ingest_float(x: f64, basis: &Basis, tol: f64, denominator_cap: u64) -> Result<Freq> {
        if tol.is_nan() || tol <= 0.0 || tol.is_infinite() {
            return Err(Error::InvalidTolerance(format!(
                "ingestion tolerance must be positive, got {tol}"
            )));
        }
        if !x.is_finite() {
            return Err(Error::NotInModule { value: x, tol });
        }
        if x.abs() <= tol {
            return Ok(Freq::zero(basis.dim()));
        }
        let mut best: Option<(usize, i128, i128)> = None;
        for (i, b) in basis.values().enumerate() {
            let y = x / b;
            let slack = tol / b.abs();
            let Some((p, q)) = simplest_rational_in(y - slack, y + slack, denominator_cap) else {
                continue;
            };
            if ((p as f64 / q as f64) * b - x).abs() > tol {
                continue;
            }
            if best.is_none_or(|(_, _, bq)| q < bq) {
                best = Some((i, p, q));
            }
        }
        let (i, p, q) = best.ok_or(Error::NotInModule { value: x, tol })?;
        let mut f = Freq::zero(basis.dim());
        f.coords[i] = Rational::from_i128(p, q);
        Ok(f)
    }
}

/// Smallest-denominator rational in `[lo, hi]` with denominator below `cap`.
fn simplest_rational_in(lo: f64, hi: f64, cap: u64) -> Option<(i128, i128)> {
    if lo > hi || !lo.is_finite() || !hi.is_finite() {
        return None;
    }
    if lo <= 0.0 && hi >= 0.0 {
        return Some((0, 1));
    }
    if hi < 0.0 {
        return simplest_rational_in(-hi, -lo, cap).map(|(p, q)| (-p, q));
    }
    // 0 < lo ≤ hi: collect continued-fraction terms of the simplest rational.
    let mut terms: Vec<i128> = Vec::new();
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..64 {
        let fl = lo.floor();
        if fl == lo {
            terms.push(fl as i128);
            break;
        }
        if fl + 1.0 <= hi {
            terms.push(fl as i128 + 1);
            break;
        }
        terms.push(fl as i128);
        let (a, b) = (1.0 / (hi - fl), 1.0 / (lo - fl));
        lo = a;
        hi = b;
        if !lo.is_finite() || !hi.is_finite() {
            return None;
        }
    }
    // Fold the continued fraction back into p/q.
    let (mut p, mut q): (i128, i128) = (1, 0);
    for &a in terms.iter().rev() {
        let np = a.checked_mul(p)?.checked_add(q)?;
        q = p;
        p = np;
        if q >= cap as i128 {
            return None;
        }
    }
    (q > 0 && q < cap as i128).then_some((p, q))
}

/// Parses `"p/q"` or `"p"`, reducing to lowest terms.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidRational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::from_big(BigRational::new(num, den)))
}

/// Canonical `"p/q"` rendering; integers are written with denominator 1.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer_string(), r.denom_string())
}

impl FromStr for Freq {
    type Err = Error;

    /// Parses a comma separated coordinate list such as `"1/2,0,-3"`.
    fn from_str(s: &str) -> Result<Self> {
        let coords = s
            .split(',')
            .map(|c| parse_rational(c.trim()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Freq { coords })
    }
}

impl fmt::Display for Freq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if c.is_integer() {
                f.write_str(&c.numer_string())?;
            } else {
                write!(f, "{}/{}", c.numer_string(), c.denom_string())?;
            }
        }
        f.write_str(")")
    }
}

impl Serialize for Freq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coords.iter().map(format_rational))
    }
}

impl<'de> Deserialize<'de> for Freq {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let coords = raw
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Freq { coords })
    }
}

// The operator impls assume equal dimensions; callers check basis
// compatibility before reaching them.
impl Add for &Freq {
    type Output = Freq;

    fn add(self, rhs: &Freq) -> Freq {
        self.checked_add(rhs).expect("frequency dimension mismatch")
    }
}

impl Sub for &Freq {
    type Output = Freq;

    fn sub(self, rhs: &Freq) -> Freq {
        self.checked_sub(rhs).expect("frequency dimension mismatch")
    }
}

impl Neg for &Freq {
    type Output = Freq;

    fn neg(self) -> Freq {
        Freq {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Freq {
    type Output = Freq;

    fn neg(self) -> Freq {
        -&self
    }
}
